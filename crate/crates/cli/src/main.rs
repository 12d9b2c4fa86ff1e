use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use swipt_core::analytic;
use swipt_core::metrics::efficiency;
use swipt_core::oracle::{oracle_af_joint, oracle_suite, QuadratureControl};
use swipt_core::simulate::{
    estimate_components, estimate_outage, ChannelNorm, EventModel, McConfig, XiMode,
};
use swipt_core::sweep::{
    apply_setting, parse_config, render_svg, run_sweep, validate, write_csv, ConfigFile, SweepSpec,
    ValidationOptions,
};
use swipt_core::{Component, Execution, Relaying, SystemParams};

#[derive(Parser)]
#[command(
    name = "swipt",
    version,
    about = "Outage, efficiency and sweep tools for SWIPT two-way relaying"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// key = value file applied on top of the reference parameters.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one setting, e.g. `--set alpha=0.6` or `--set pp=-20dBm`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run everything on the calling thread.
    #[arg(long, global = true, conflicts_with = "threads")]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Df,
    Af,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Relaying> {
        match self {
            ModeArg::Df => vec![Relaying::Df],
            ModeArg::Af => vec![Relaying::Af],
            ModeArg::Both => vec![Relaying::Df, Relaying::Af],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EventsArg {
    Joint,
    Factored,
}

#[derive(Clone, Copy, ValueEnum)]
enum XiArg {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    UnitTotal,
    PerAntenna,
}

#[derive(Args, Clone)]
struct McArgs {
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Whether composed outages share one channel realization per sample.
    #[arg(long, value_enum, default_value_t = EventsArg::Joint)]
    events: EventsArg,
    /// AF amplification factor: exact or high-SNR approximation.
    #[arg(long, value_enum, default_value_t = XiArg::Exact)]
    xi: XiArg,
    /// Channel gain normalization.
    #[arg(long, value_enum, default_value_t = NormArg::UnitTotal)]
    norm: NormArg,
}

impl McArgs {
    fn config(&self, exec: Execution) -> McConfig {
        let mut c = McConfig::new(self.samples, self.seed);
        c.exec = exec;
        c.events = match self.events {
            EventsArg::Joint => EventModel::Joint,
            EventsArg::Factored => EventModel::Factored,
        };
        c.xi = match self.xi {
            XiArg::Exact => XiMode::Exact,
            XiArg::Approx => XiMode::Approx,
        };
        c.norm = match self.norm {
            NormArg::UnitTotal => ChannelNorm::UnitTotalPower,
            NormArg::PerAntenna => ChannelNorm::PerAntennaUnit,
        };
        c
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form component probabilities, outages and efficiency.
    Analytic {
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Monte Carlo estimates.
    Simulate {
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        #[command(flatten)]
        mc: McArgs,
        /// Also estimate every component success probability.
        #[arg(long)]
        components: bool,
    },
    /// Nested-quadrature values of every component and the composed outages.
    Oracle {
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Compare analytic, quadrature and Monte Carlo; exits 1 on disagreement.
    Validate {
        #[command(flatten)]
        mc: McArgs,
        /// Allowed |analytic − oracle| per component.
        #[arg(long, default_value_t = 1e-5)]
        oracle_tol: f64,
        /// Allowed |analytic − MC| in standard errors.
        #[arg(long, default_value_t = 4.0)]
        sigmas: f64,
    },
    /// Run a parameter sweep and write CSV (and optionally SVG).
    Sweep {
        /// Built-in sweep: fig3a, fig3b, fig4, fig5 or fig6.
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        preset: Option<String>,
        /// Sweep description file (same key = value format as --config).
        #[arg(long)]
        spec: Option<PathBuf>,
        /// CSV destination; `-` or omitted writes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo samples per point.
        #[arg(long)]
        samples: Option<u64>,
    },
}

fn split_kv(s: &str) -> Result<(&str, &str)> {
    s.split_once('=')
        .with_context(|| format!("`{s}` is not KEY=VALUE"))
}

fn load(common: &Common) -> Result<ConfigFile> {
    let base = SystemParams::reference_point();
    let mut cfg = match &common.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text, base).with_context(|| format!("in {}", path.display()))?
        }
        None => ConfigFile::new(base),
    };
    for kv in &common.set {
        let (k, v) = split_kv(kv)?;
        apply_setting(&mut cfg, k, v).with_context(|| format!("--set {kv}"))?;
    }
    Ok(cfg.finish()?)
}

fn execution(common: &Common) -> Execution {
    if common.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel {
            threads: common.threads,
        }
    }
}

fn components_of(mode: Relaying) -> &'static [Component] {
    match mode {
        Relaying::Df => &Component::ALL[..5],
        Relaying::Af => &Component::ALL[5..],
    }
}

fn print_params(out: &mut impl Write, p: &SystemParams) -> io::Result<()> {
    writeln!(
        out,
        "params: pp1={:.4e} W pp2={:.4e} W sigma2={:.4e} W na={} nb={} m_k={} alpha={} rho={} eta={} m={} r_pu={} r_su={}",
        p.pp1, p.pp2, p.sigma2, p.na, p.nb, p.m_k, p.alpha, p.rho, p.eta, p.m, p.r_pu, p.r_su
    )?;
    writeln!(
        out,
        "        d1={} d2={} d3={} d4={} d5={} l={}",
        p.d1, p.d2, p.d3, p.d4, p.d5, p.l
    )
}

fn cmd_analytic(out: &mut impl Write, p: &SystemParams, mode: ModeArg) -> Result<()> {
    print_params(out, p)?;
    for m in mode.modes() {
        writeln!(out, "{}:", m.as_str())?;
        for &c in components_of(m) {
            let v = analytic::component(p, c)?;
            writeln!(
                out,
                "  {:<10} {:.9e}  {}{}",
                c.as_str(),
                v.value,
                v.method.as_str(),
                if v.underflow {
                    " (bessel underflow)"
                } else {
                    ""
                }
            )?;
        }
        let o = analytic::outage(p, m)?;
        let e = efficiency(p, o.pu_outage, o.su_outage);
        writeln!(out, "  pu_outage  {:.9e}", o.pu_outage)?;
        writeln!(out, "  su_outage  {:.9e}", o.su_outage)?;
        writeln!(out, "  se         {:.9e} bps/Hz", e.se)?;
        writeln!(out, "  ee         {:.9e} bps/Hz/W", e.ee)?;
    }
    Ok(())
}

fn cmd_simulate(
    out: &mut impl Write,
    p: &SystemParams,
    mode: ModeArg,
    mc: &McConfig,
    components: bool,
) -> Result<()> {
    print_params(out, p)?;
    writeln!(
        out,
        "samples={} seed={} events={:?} xi={:?} norm={:?}",
        mc.n, mc.seed, mc.events, mc.xi, mc.norm
    )?;
    let comps = if components {
        Some(estimate_components(p, mc)?)
    } else {
        None
    };
    for m in mode.modes() {
        writeln!(out, "{}:", m.as_str())?;
        if let Some(all) = &comps {
            for (c, e) in all.iter().filter(|(c, _)| components_of(m).contains(c)) {
                writeln!(
                    out,
                    "  {:<10} {:.9e} ± {:.2e}",
                    c.as_str(),
                    e.p_hat,
                    e.stderr
                )?;
            }
        }
        let (pu, su) = estimate_outage(p, m, mc)?;
        writeln!(out, "  pu_outage  {:.9e} ± {:.2e}", pu.p_hat, pu.stderr)?;
        writeln!(out, "  su_outage  {:.9e} ± {:.2e}", su.p_hat, su.stderr)?;
    }
    Ok(())
}

fn cmd_oracle(
    out: &mut impl Write,
    p: &SystemParams,
    mode: ModeArg,
    exec: Execution,
) -> Result<()> {
    print_params(out, p)?;
    let ctrl = QuadratureControl::default();
    let suite = oracle_suite(p, &ctrl, exec)?;
    for m in mode.modes() {
        writeln!(out, "{}:", m.as_str())?;
        for c in components_of(m) {
            let r = &suite[c];
            writeln!(
                out,
                "  {:<10} {:.9e}  err {:.1e}{}",
                c.as_str(),
                r.value,
                r.abs_err,
                if r.converged { "" } else { "  (not converged)" }
            )?;
        }
        let v = |c: Component| suite[&c].value;
        let (pu, su) = match m {
            Relaying::Df => (
                1.0 - v(Component::Q1) * v(Component::DfBcPu1) * v(Component::DfBcPu2),
                1.0 - v(Component::Q1) * v(Component::Q2) * v(Component::DfBcSu2),
            ),
            Relaying::Af => (
                1.0 - v(Component::AfBcPu1) * v(Component::AfBcPu2),
                1.0 - oracle_af_joint(p, &ctrl)?.value,
            ),
        };
        writeln!(out, "  pu_outage  {pu:.9e}")?;
        writeln!(out, "  su_outage  {su:.9e}")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let exec = execution(&cli.common);
    let cfg = load(&cli.common)?;
    let p = cfg.params.clone();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.cmd {
        Cmd::Analytic { mode } => cmd_analytic(&mut out, &p, mode)?,
        Cmd::Simulate {
            mode,
            mc,
            components,
        } => cmd_simulate(&mut out, &p, mode, &mc.config(exec), components)?,
        Cmd::Oracle { mode } => cmd_oracle(&mut out, &p, mode, exec)?,
        Cmd::Validate {
            mc,
            oracle_tol,
            sigmas,
        } => {
            let opts = ValidationOptions {
                mc: mc.config(exec),
                quad: QuadratureControl::default(),
                oracle_tol,
                sigmas,
            };
            print_params(&mut out, &p)?;
            let report = validate(&p, &opts)?;
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Sweep {
            preset,
            spec,
            out: dest,
            svg,
            seed,
            samples,
        } => {
            let (mut sweep, base) = match (preset, spec) {
                (Some(name), None) => (SweepSpec::preset(&name)?, p.clone()),
                (None, Some(path)) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let mut file = parse_config(&text, p.clone())
                        .with_context(|| format!("in {}", path.display()))?;
                    for kv in &cli.common.set {
                        let (k, v) = split_kv(kv)?;
                        apply_setting(&mut file, k, v)?;
                    }
                    let file = file.finish()?;
                    match file.sweep_spec()? {
                        Some(s) => (s, file.params),
                        None => bail!("{} does not set `variable`", path.display()),
                    }
                }
                _ => bail!("give exactly one of --preset or --spec"),
            };
            cfg.overlay(&mut sweep);
            if let Some(s) = seed {
                sweep.seed = s;
            }
            if let Some(n) = samples {
                sweep.mc_samples = n;
            }
            let rows = run_sweep(&sweep, &base, exec)?;
            match dest.as_deref() {
                Some(path) if path.as_os_str() != "-" => {
                    let f = fs::File::create(path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    write_csv(&rows, io::BufWriter::new(f))?;
                }
                _ => write_csv(&rows, &mut out)?,
            }
            if let Some(path) = svg {
                fs::write(&path, render_svg(&rows, sweep.plot))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
            if failed > 0 {
                eprintln!("warning: {failed} of {} rows reported errors", rows.len());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
