//! Discrete conservation laws `D_dt G_l + D_dx F_l = 0` of the scheme with
//! `q = 2`: two laws for subdiffusion and four for superdiffusion.
//!
//! Time sums use the per-step widths `dt_j = t_{j+1} - t_j`, so
//! `D_dt G_1 = D_dt^a u` and `D_dt G_3 = t_j D_dt^a u` hold exactly on any
//! grid.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::collocation::Variant;
use crate::error::{Error, Result};
use crate::solver::{ProblemSpec, SolutionField};

/// Everything the densities and fluxes are built from.
///
/// Rows are the time nodes `t_0..=t_N`. `k` has a column for every space
/// node `x_0..=x_{M+1}`; `frac` holds `D_dt^a u` at the interior nodes only.
/// Residuals are reported from row `first_row` on: the scheme is not
/// imposed at `t0` when `t0` carries initial data instead.
#[derive(Debug, Clone)]
pub struct DiscreteFields {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub k: DMatrix<f64>,
    pub frac: DMatrix<f64>,
    pub first_row: usize,
}

impl DiscreteFields {
    pub fn new(t: Vec<f64>, x: Vec<f64>, k: DMatrix<f64>, frac: DMatrix<f64>) -> Result<Self> {
        if t.len() < 2 || x.len() < 3 {
            return Err(Error::InvalidArgument("conservation fields need two time and three space nodes"));
        }
        if k.shape() != (t.len(), x.len()) {
            return Err(Error::DimensionMismatch { expected: t.len() * x.len(), found: k.len() });
        }
        if frac.shape() != (t.len(), x.len() - 2) {
            return Err(Error::DimensionMismatch { expected: t.len() * (x.len() - 2), found: frac.len() });
        }
        Ok(Self { t, x, k, frac, first_row: 0 })
    }

    /// Fields of a solved problem, including the row at `t0`.
    pub fn from_solution(field: &SolutionField, spec: &ProblemSpec) -> Result<Self> {
        let op = &spec.op;
        let nodes = op.grid().nodes();
        let (rows, m) = (field.u.nrows(), field.u.ncols());
        let n_all = nodes.len();
        let first = n_all - rows;
        let gamma = |i: usize| -> Vec<f64> {
            match (&spec.initial, op.variant()) {
                (Some(g), Variant::Caputo | Variant::RiemannLiouville) => g.column(i).iter().copied().collect(),
                _ => Vec::new(),
            }
        };

        // full u with boundary columns and, if needed, the initial row
        let mut u = DMatrix::zeros(n_all, m + 2);
        for j in 0..n_all {
            u[(j, 0)] = field.boundary.chi_a[j];
            u[(j, m + 1)] = field.boundary.chi_b[j];
        }
        for j in 0..rows {
            for i in 0..m {
                u[(first + j, i + 1)] = field.u[(j, i)];
            }
        }
        if first == 1 {
            // Caputo data starts with u(x, t0); zero data otherwise
            for i in 0..m {
                let g = gamma(i);
                u[(0, i + 1)] = g.first().copied().unwrap_or(0.0);
            }
        }

        let mut frac = DMatrix::zeros(n_all, m);
        for i in 0..m {
            let col: Vec<f64> = field.u.column(i).iter().copied().collect();
            let g = gamma(i);
            let d = op.apply(&col, &g)?;
            for (j, v) in d.into_iter().enumerate() {
                frac[(first + j, i)] = v;
            }
            if first == 1 {
                // enters every G_1 as the same constant, so any finite value keeps the laws intact
                frac[(0, i)] = op.derivative_at_t0(&col, &g).unwrap_or(0.0);
            }
        }
        let k = u.map(|v| spec.nonlinearity.k(v));
        let mut d = Self::new(nodes.to_vec(), field.space.nodes(), k, frac)?;
        d.first_row = first;
        Ok(d)
    }

    pub fn dt(&self) -> Vec<f64> {
        self.t.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Uniform spacing of the space grid.
    pub fn dx(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    fn m(&self) -> usize {
        self.x.len() - 2
    }
}

/// One discrete law: `g` on interior nodes (rows `t_0..=t_N`, columns
/// `x_1..=x_M`) and `f` on `x_1..=x_{M+1}`.
#[derive(Debug, Clone)]
pub struct DensityFlux {
    pub label: usize,
    pub g: DMatrix<f64>,
    pub f: DMatrix<f64>,
}

/// `G1(x_i, t_j) = sum_{l < j} dt_l D_dt^a u_{i,l}`.
pub fn g1(d: &DiscreteFields) -> DMatrix<f64> {
    let dt = d.dt();
    let mut g = DMatrix::zeros(d.t.len(), d.m());
    for i in 0..d.m() {
        let mut acc = 0.0;
        for j in 1..d.t.len() {
            acc += dt[j - 1] * d.frac[(j - 1, i)];
            g[(j, i)] = acc;
        }
    }
    g
}

/// `F1(x_i, t_j) = -(K(u_{i,j}) - K(u_{i-1,j})) / dx`.
pub fn f1(d: &DiscreteFields) -> DMatrix<f64> {
    let dx = d.dx();
    DMatrix::from_fn(d.t.len(), d.m() + 1, |j, c| -(d.k[(j, c + 1)] - d.k[(j, c)]) / dx)
}

/// `G2 = x_i G1`.
pub fn g2(d: &DiscreteFields) -> DMatrix<f64> {
    let g = g1(d);
    DMatrix::from_fn(g.nrows(), g.ncols(), |j, c| d.x[c + 1] * g[(j, c)])
}

/// `F2(x_i, t_j) = (x_i K(u_{i-1,j}) - x_{i-1} K(u_{i,j})) / dx`.
pub fn f2(d: &DiscreteFields) -> DMatrix<f64> {
    let dx = d.dx();
    DMatrix::from_fn(d.t.len(), d.m() + 1, |j, c| {
        let i = c + 1;
        (d.x[i] * d.k[(j, i - 1)] - d.x[i - 1] * d.k[(j, i)]) / dx
    })
}

/// `F2` written with forward averages: `A K - A(x) D K` at `i - 1`.
pub fn f2_averaged(d: &DiscreteFields) -> DMatrix<f64> {
    let dx = d.dx();
    DMatrix::from_fn(d.t.len(), d.m() + 1, |j, c| {
        let i = c + 1;
        let avg_k = 0.5 * (d.k[(j, i - 1)] + d.k[(j, i)]);
        let avg_x = 0.5 * (d.x[i - 1] + d.x[i]);
        avg_k - avg_x * (d.k[(j, i)] - d.k[(j, i - 1)]) / dx
    })
}

/// `G3(x_i, t_j) = t_j G1_j - sum_{r=1..j} dt_{r-1} G1_r`.
pub fn g3(d: &DiscreteFields) -> DMatrix<f64> {
    let g = g1(d);
    let dt = d.dt();
    let mut out = DMatrix::zeros(g.nrows(), g.ncols());
    for i in 0..g.ncols() {
        let mut acc = 0.0;
        for j in 0..g.nrows() {
            if j > 0 {
                acc += dt[j - 1] * g[(j, i)];
            }
            out[(j, i)] = d.t[j] * g[(j, i)] - acc;
        }
    }
    out
}

/// `F3 = t_j F1`.
pub fn f3(d: &DiscreteFields) -> DMatrix<f64> {
    let f = f1(d);
    DMatrix::from_fn(f.nrows(), f.ncols(), |j, c| d.t[j] * f[(j, c)])
}

/// `G4 = x_i G3`.
pub fn g4(d: &DiscreteFields) -> DMatrix<f64> {
    let g = g3(d);
    DMatrix::from_fn(g.nrows(), g.ncols(), |j, c| d.x[c + 1] * g[(j, c)])
}

/// `F4 = t_j F2`.
pub fn f4(d: &DiscreteFields) -> DMatrix<f64> {
    let f = f2(d);
    DMatrix::from_fn(f.nrows(), f.ncols(), |j, c| d.t[j] * f[(j, c)])
}

/// Law `label` (1..=4).
pub fn law(d: &DiscreteFields, label: usize) -> Result<DensityFlux> {
    let (g, f) = match label {
        1 => (g1(d), f1(d)),
        2 => (g2(d), f2(d)),
        3 => (g3(d), f3(d)),
        4 => (g4(d), f4(d)),
        _ => return Err(Error::InvalidArgument("conservation law label must be 1..=4")),
    };
    Ok(DensityFlux { label, g, f })
}

/// `D_dt G + D_dx F` at `t_0..t_{N-1}` and the interior nodes.
pub fn divergence(law: &DensityFlux, t: &[f64], dx: f64) -> DMatrix<f64> {
    let rows = law.g.nrows() - 1;
    DMatrix::from_fn(rows, law.g.ncols(), |j, c| {
        (law.g[(j + 1, c)] - law.g[(j, c)]) / (t[j + 1] - t[j]) + (law.f[(j, c + 1)] - law.f[(j, c)]) / dx
    })
}

/// Residuals of all `p q` laws.
#[derive(Debug, Clone)]
pub struct ConservationReport {
    /// `Err_l = max |D_dt G_l + D_dx F_l|`, for `l = 1..=law_count`.
    pub errs: Vec<f64>,
    pub residual_fields: Vec<DMatrix<f64>>,
    pub law_count: usize,
}

/// Number of laws for order index `p` with `q = 2`.
pub fn law_count(p: usize) -> usize {
    2 * p
}

pub fn report_fields(d: &DiscreteFields, p: usize) -> Result<ConservationReport> {
    let count = law_count(p);
    if count > 4 {
        return Err(Error::InvalidArgument("only p = 1 and p = 2 are supported"));
    }
    let dx = d.dx();
    let mut errs = Vec::with_capacity(count);
    let mut residual_fields = Vec::with_capacity(count);
    for label in 1..=count {
        let full = divergence(&law(d, label)?, &d.t, dx);
        let from = d.first_row.min(full.nrows());
        let r = full.rows(from, full.nrows() - from).into_owned();
        errs.push(r.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        residual_fields.push(r);
    }
    Ok(ConservationReport { errs, residual_fields, law_count: count })
}

/// Conservation residuals of a solved field.
pub fn report(field: &SolutionField, spec: &ProblemSpec) -> Result<ConservationReport> {
    let d = DiscreteFields::from_solution(field, spec)?;
    report_fields(&d, spec.op.order().p())
}
