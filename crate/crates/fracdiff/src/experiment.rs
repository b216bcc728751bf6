//! Solve, sweep and tabulate experiments described by an [`ExperimentConfig`].

use fracdiff_core::collocation::{CollocationOperator, TimeGrid};
use fracdiff_core::conservation::{report, ConservationReport};
use fracdiff_core::reference::{boundary_value, exact_linear_grid, exact_linear_on, sol_err_linear, sol_err_nonlinear, FinalTimeError};
use fracdiff_core::solver::{solve_linear, solve_newton, ProblemSpec, SolutionField};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, Problem};
use crate::error::{config, Result};

/// Discrete problem of a configuration.
pub fn build_problem(cfg: &ExperimentConfig) -> Result<ProblemSpec> {
    cfg.validate()?;
    let order = cfg.order()?;
    let grid = TimeGrid::new(cfg.node_kind(), 0.0, cfg.time.t_end, cfg.n)?;
    let op = CollocationOperator::build(cfg.variant(), cfg.basis_choice(), &grid, order)?;
    let bc = move |t: f64| boundary_value(order, t);
    Ok(ProblemSpec::at_rest(op, cfg.space_grid()?, bc, bc, cfg.nonlinearity()))
}

/// Solves the discrete problem: one linear solve or a Newton iteration.
pub fn solve_problem(cfg: &ExperimentConfig, spec: &ProblemSpec) -> Result<SolutionField> {
    Ok(match cfg.problem {
        Problem::Linear => solve_linear(spec)?,
        Problem::Sqrt => solve_newton(spec, cfg.newton_options())?,
    })
}

/// Error of a run against its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolErr {
    /// Max-norm error over every node against the series solution.
    Series { max_abs: f64, terms: usize },
    /// Final-time error against a run with `n_bar` nodes; `sol_err` is the
    /// l2 norm.
    FinalTime { n_bar: usize, l2: f64, max_abs: f64, sqrt_sum_abs: f64 },
}

impl SolErr {
    /// The number tabulated as "Sol err".
    pub fn value(&self) -> f64 {
        match *self {
            Self::Series { max_abs, .. } => max_abs,
            Self::FinalTime { l2, .. } => l2,
        }
    }

    fn final_time(n_bar: usize, e: FinalTimeError) -> Self {
        Self::FinalTime { n_bar, l2: e.l2, max_abs: e.max_abs, sqrt_sum_abs: e.sqrt_sum_abs }
    }
}

/// Result of one solve.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub config: ExperimentConfig,
    pub spec: ProblemSpec,
    pub field: SolutionField,
    pub conservation: ConservationReport,
    pub sol_err: Option<SolErr>,
}

/// The `n_bar` run used as reference for the nonlinear problem.
pub fn reference_run(cfg: &ExperimentConfig) -> Result<SolutionField> {
    let rc = cfg.with_n(cfg.reference.n_bar);
    solve_problem(&rc, &build_problem(&rc)?)
}

fn sol_err_against(cfg: &ExperimentConfig, field: &SolutionField, reference: Option<&SolutionField>) -> Result<SolErr> {
    match (cfg.problem, reference) {
        (Problem::Linear, _) => {
            let (r, trunc) = exact_linear_on(field, cfg.order()?, cfg.reference.series_tol)?;
            Ok(SolErr::Series { max_abs: sol_err_linear(field, &r)?, terms: trunc.terms })
        }
        (Problem::Sqrt, Some(r)) => Ok(SolErr::final_time(cfg.reference.n_bar, sol_err_nonlinear(field, r)?)),
        (Problem::Sqrt, None) => config("the sqrt problem needs a reference run"),
    }
}

/// Solves, evaluates the conservation laws and, when a reference exists
/// (always for the linear problem, for `n != n_bar` otherwise), the error.
pub fn run_solve(cfg: &ExperimentConfig) -> Result<SolveOutcome> {
    let spec = build_problem(cfg)?;
    let field = solve_problem(cfg, &spec)?;
    let conservation = report(&field, &spec)?;
    let sol_err = match cfg.problem {
        Problem::Linear => Some(sol_err_against(cfg, &field, None)?),
        Problem::Sqrt if cfg.n != cfg.reference.n_bar => {
            let r = reference_run(cfg)?;
            Some(sol_err_against(cfg, &field, Some(&r))?)
        }
        Problem::Sqrt => None,
    };
    Ok(SolveOutcome { config: cfg.clone(), spec, field, conservation, sol_err })
}

/// One point of a convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub n: usize,
    pub sol_err: f64,
    /// The error grew compared to the previous point.
    pub uptick: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSummary {
    /// Fraction of consecutive pairs whose error did not grow.
    pub decreasing_fraction: f64,
    /// Largest `n` up to which the error never grew.
    pub monotone_through: usize,
    /// Points where the error grew, typically where conditioning of the
    /// collocation matrix takes over.
    pub upticks: Vec<usize>,
    pub min_err: f64,
    pub min_err_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub alpha: f64,
    pub points: Vec<ConvergencePoint>,
    pub summary: ConvergenceSummary,
}

/// Sol err for each `n` in `ns` (default: the configured sweep, else `n`).
pub fn run_convergence(cfg: &ExperimentConfig, ns: Option<&[usize]>) -> Result<Convergence> {
    cfg.validate()?;
    let ns: Vec<usize> = match ns {
        Some(v) => v.to_vec(),
        None if !cfg.sweep.n.is_empty() => cfg.sweep.n.clone(),
        None => vec![cfg.n],
    };
    if ns.is_empty() || ns.windows(2).any(|w| w[1] <= w[0]) {
        return config("the N list must be non-empty and strictly increasing");
    }
    let reference = match cfg.problem {
        Problem::Sqrt => Some(reference_run(cfg)?),
        Problem::Linear => None,
    };
    let errs = ns
        .par_iter()
        .map(|&n| {
            let c = cfg.with_n(n);
            let spec = build_problem(&c)?;
            let field = solve_problem(&c, &spec)?;
            Ok(sol_err_against(&c, &field, reference.as_ref())?.value())
        })
        .collect::<Result<Vec<f64>>>()?;
    let points: Vec<ConvergencePoint> = ns
        .iter()
        .enumerate()
        .map(|(k, &n)| ConvergencePoint { n, sol_err: errs[k], uptick: k > 0 && errs[k] > errs[k - 1] })
        .collect();
    Ok(Convergence { alpha: cfg.alpha, summary: summarize(&points), points })
}

fn summarize(points: &[ConvergencePoint]) -> ConvergenceSummary {
    let pairs = points.len().saturating_sub(1);
    let upticks: Vec<usize> = points.iter().filter(|p| p.uptick).map(|p| p.n).collect();
    let monotone_through = points.iter().take_while(|p| !p.uptick).last().map_or(0, |p| p.n);
    let best = points.iter().min_by(|a, b| a.sol_err.total_cmp(&b.sol_err)).expect("non-empty sweep");
    ConvergenceSummary {
        decreasing_fraction: if pairs == 0 { 1.0 } else { (pairs - upticks.len()) as f64 / pairs as f64 },
        monotone_through,
        upticks,
        min_err: best.sol_err,
        min_err_n: best.n,
    }
}

/// One row of a Table 2/3 style summary; `errs[l]` is `None` for laws that
/// do not exist at this order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub alpha: f64,
    pub sol_err: Option<f64>,
    pub errs: [Option<f64>; 4],
    pub residual: f64,
    pub iterations: usize,
    pub config_hash: String,
}

impl TableRow {
    pub fn from_outcome(o: &SolveOutcome) -> Self {
        let mut errs = [None; 4];
        for (slot, e) in errs.iter_mut().zip(&o.conservation.errs) {
            *slot = Some(*e);
        }
        Self {
            alpha: o.config.alpha,
            sol_err: o.sol_err.map(|s| s.value()),
            errs,
            residual: o.field.residual,
            iterations: o.field.iterations,
            config_hash: o.config.hash(),
        }
    }
}

/// Solves every alpha of the table (in parallel) and keeps the input order.
pub fn run_table(cfg: &ExperimentConfig, alphas: Option<&[f64]>) -> Result<Vec<TableRow>> {
    let alphas = alphas.map_or_else(|| cfg.table_alphas(), <[f64]>::to_vec);
    alphas
        .par_iter()
        .map(|&a| run_solve(&cfg.with_alpha(a)).map(|o| TableRow::from_outcome(&o)))
        .collect()
}

/// Series solution on the configured time nodes and every space node,
/// boundaries included: rows `t_j`, columns `x_i`.
pub fn reference_grid(cfg: &ExperimentConfig) -> Result<(Vec<f64>, Vec<f64>, DMatrix<f64>)> {
    cfg.validate()?;
    let grid = TimeGrid::new(cfg.node_kind(), 0.0, cfg.time.t_end, cfg.n)?;
    let xs = cfg.space_grid()?.nodes();
    let ts = grid.nodes().to_vec();
    let (u, _) = exact_linear_grid(&xs, &ts, cfg.order()?, cfg.reference.series_tol)?;
    Ok((ts, xs, u))
}

/// Solution on every time node and every space node, boundaries and the
/// initial row included.
pub fn full_field(spec: &ProblemSpec, field: &SolutionField) -> DMatrix<f64> {
    let nodes = spec.op.grid().nodes();
    let (rows, m) = (field.u.nrows(), field.u.ncols());
    let first = nodes.len() - rows;
    let mut u = DMatrix::zeros(nodes.len(), m + 2);
    for j in 0..nodes.len() {
        u[(j, 0)] = field.boundary.chi_a[j];
        u[(j, m + 1)] = field.boundary.chi_b[j];
    }
    if first > 0 {
        if let Some(g) = &spec.initial {
            for i in 0..m {
                u[(0, i + 1)] = g[(0, i)];
            }
        }
    }
    for j in 0..rows {
        for i in 0..m {
            u[(first + j, i + 1)] = field.u[(j, i)];
        }
    }
    u
}
