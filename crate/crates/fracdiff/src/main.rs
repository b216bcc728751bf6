use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracdiff::config::{Basis, Flavor, Format, Nodes, Problem};
use fracdiff::error::{HarnessError, Result};
use fracdiff::experiment::{reference_grid, run_convergence, run_solve, run_table};
use fracdiff::output::{write_convergence, write_reference, write_solve, write_table};
use fracdiff::{ExperimentConfig, OUTPUT_DIR_ENV};

/// Time-fractional diffusion experiments: spectral collocation in time,
/// finite differences in space.
#[derive(Parser)]
#[command(name = "fracdiff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem; writes the solution and a JSON report.
    Solve(Common),
    /// Sol err against N.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// N values, e.g. `2,3,4` or `2..18` (inclusive).
        #[arg(long)]
        n_list: Option<String>,
    },
    /// Sol err and conservation residuals for several orders.
    Table {
        #[command(flatten)]
        common: Common,
        /// Comma-separated orders; defaults to 0.1,0.5,0.9,1.1,1.5,1.9.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
    },
    /// Dump the series solution of the linear problem on the time grid.
    Reference(Common),
}

#[derive(Args)]
struct Common {
    /// TOML manifest; flags below override its values.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    problem: Option<ProblemArg>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(long, conflicts_with = "m")]
    dx: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum)]
    nodes: Option<NodesArg>,
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
    #[arg(long, value_enum)]
    flavor: Option<FlavorArg>,
    #[arg(long)]
    n_bar: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output directory; beats the environment variable and the manifest.
    #[arg(short, long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Linear,
    Sqrt,
}

#[derive(Clone, Copy, ValueEnum)]
enum NodesArg {
    Chebyshev,
    ChebyshevGauss,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Jacobi,
    Power,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    AutoZeroIc,
    Rl,
    Caputo,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(p) = self.problem {
            c.problem = match p {
                ProblemArg::Linear => Problem::Linear,
                ProblemArg::Sqrt => Problem::Sqrt,
            };
        }
        if let Some(a) = self.alpha {
            c.alpha = a;
        }
        if let Some(n) = self.n {
            c.n = n;
        }
        if let Some(dx) = self.dx {
            c.space.dx = Some(dx);
            c.space.m = None;
        }
        if let Some(m) = self.m {
            c.space.m = Some(m);
            c.space.dx = None;
        }
        if let Some(v) = self.nodes {
            c.time.nodes = match v {
                NodesArg::Chebyshev => Nodes::Chebyshev,
                NodesArg::ChebyshevGauss => Nodes::ChebyshevGauss,
                NodesArg::Uniform => Nodes::Uniform,
            };
        }
        if let Some(v) = self.basis {
            c.time.basis = match v {
                BasisArg::Jacobi => Basis::Jacobi,
                BasisArg::Power => Basis::Power,
            };
        }
        if let Some(v) = self.flavor {
            c.time.flavor = match v {
                FlavorArg::AutoZeroIc => Flavor::AutoZeroIc,
                FlavorArg::Rl => Flavor::Rl,
                FlavorArg::Caputo => Flavor::Caputo,
            };
        }
        if let Some(v) = self.n_bar {
            c.reference.n_bar = v;
        }
        if let Some(v) = self.format {
            c.output.format = match v {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
        }
        if let Some(d) = &self.out_dir {
            c.output.dir = d.clone();
        } else if let Some(d) = std::env::var_os(OUTPUT_DIR_ENV) {
            c.output.dir = PathBuf::from(d);
        }
        c.validate()?;
        Ok(c)
    }
}

fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    let bad = || HarnessError::Config(format!("cannot parse N list `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "N.A.".to_string(), |v| format!("{v:.3e}"))
}

fn run(cli: Cli) -> Result<()> {
    let start = Instant::now();
    let written = match cli.command {
        Command::Solve(common) => {
            let cfg = common.resolve()?;
            let o = run_solve(&cfg)?;
            println!(
                "alpha={} N={} M={} sol_err={} errs=[{}] residual={:.2e} iterations={}",
                cfg.alpha,
                cfg.n,
                o.field.space.m(),
                fmt_opt(o.sol_err.map(|s| s.value())),
                o.conservation.errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", "),
                o.field.residual,
                o.field.iterations,
            );
            write_solve(&cfg.output.dir, &o)?
        }
        Command::Convergence { common, n_list } => {
            let cfg = common.resolve()?;
            let ns = n_list.as_deref().map(parse_n_list).transpose()?;
            let c = run_convergence(&cfg, ns.as_deref())?;
            for p in &c.points {
                println!("N={:<3} sol_err={:.4e}{}", p.n, p.sol_err, if p.uptick { "  (uptick)" } else { "" });
            }
            println!(
                "monotone through N={}, min {:.3e} at N={}",
                c.summary.monotone_through, c.summary.min_err, c.summary.min_err_n
            );
            write_convergence(&cfg.output.dir, &cfg, &c)?
        }
        Command::Table { common, alphas } => {
            let cfg = common.resolve()?;
            let rows = run_table(&cfg, alphas.as_deref())?;
            println!("{:>5}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}", "alpha", "Sol err", "Err1", "Err2", "Err3", "Err4");
            for r in &rows {
                println!(
                    "{:>5}  {:>9}  {:>9}  {:>9}  {:>9}  {:>9}",
                    r.alpha,
                    fmt_opt(r.sol_err),
                    fmt_opt(r.errs[0]),
                    fmt_opt(r.errs[1]),
                    fmt_opt(r.errs[2]),
                    fmt_opt(r.errs[3])
                );
            }
            write_table(&cfg.output.dir, &cfg, &rows)?
        }
        Command::Reference(common) => {
            let cfg = common.resolve()?;
            let (t, x, u) = reference_grid(&cfg)?;
            write_reference(&cfg.output.dir, &cfg, &t, &x, &u)?
        }
    };
    for p in written {
        eprintln!("wrote {}", p.display());
    }
    eprintln!("done in {:.2?}", start.elapsed());
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
