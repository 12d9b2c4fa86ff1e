/// Truncation control for infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub converged: bool,
    /// Terms actually summed.
    pub terms: usize,
    /// Σ|term|, a scale for cancellation error.
    pub abs_sum: f64,
}

/// Sums `term(0) + term(1) + ...`, stopping once two consecutive terms are
/// both below `rel_tol` times the running sum.
pub fn sum_alternating<F: FnMut(usize) -> f64>(mut term: F, ctrl: SeriesControl) -> SeriesSum {
    let mut value = 0.0;
    let mut abs_sum = 0.0;
    let mut small_run = 0;
    for i in 0..ctrl.max_terms {
        let t = term(i);
        value += t;
        abs_sum += t.abs();
        if t.abs() <= ctrl.rel_tol * value.abs() {
            small_run += 1;
            if small_run == 2 {
                return SeriesSum {
                    value,
                    converged: true,
                    terms: i + 1,
                    abs_sum,
                };
            }
        } else {
            small_run = 0;
        }
    }
    SeriesSum {
        value,
        converged: false,
        terms: ctrl.max_terms,
        abs_sum,
    }
}
