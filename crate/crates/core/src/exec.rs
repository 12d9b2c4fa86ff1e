//! Execution policy for the data-parallel loops (Monte Carlo chunks and
//! sweep rows).
//!
//! With the `parallel` feature (default) work is spread over a rayon pool;
//! without it every policy runs sequentially. Results never depend on the
//! policy: work is split into fixed chunks and merged in chunk order.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `threads: None` uses the global rayon pool.
    Parallel {
        threads: Option<usize>,
    },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { threads: None }
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn workers(threads: usize) -> Self {
        if threads <= 1 {
            Execution::Sequential
        } else {
            Execution::Parallel {
                threads: Some(threads),
            }
        }
    }

    /// Map `f` over `0..len` and return the results in index order.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..len).map(f).collect(),
            Execution::Parallel { threads } => par_map(threads, len, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(threads: Option<usize>, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;

    let run = || (0..len).into_par_iter().map(&f).collect::<Vec<T>>();
    match threads {
        None => run(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => (0..len).map(&f).collect(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(_threads: Option<usize>, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_under_every_policy() {
        let expect: Vec<usize> = (0..1000).map(|i| i * i).collect();
        for exec in [
            Execution::Sequential,
            Execution::default(),
            Execution::workers(3),
        ] {
            assert_eq!(exec.map_indexed(1000, |i| i * i), expect);
        }
    }
}
