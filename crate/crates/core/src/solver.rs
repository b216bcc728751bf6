//! The fully discrete system `C1 U + C2 gamma = (K(U) M + F) / dx^2`.
//!
//! `U` has one row per collocation node and one column per interior space
//! node. Ordered by space index, the system is block tridiagonal with
//! `rows x rows` blocks; both the linear solve and every Newton step use a
//! block elimination on that structure. A dense Kronecker assembly is kept
//! for verification on small grids.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::collocation::{CollocationOperator, Variant};
use crate::error::{Error, Result};
use crate::spatial::{boundary_matrix, second_diff_matrix, BoundaryTraces, SpaceGrid};

/// Below this reciprocal condition number the discrete system is rejected.
pub const MIN_SYSTEM_RCOND: f64 = 1e-15;

/// Iterates of a constrained `K` must stay above this value.
pub const POSITIVITY_FLOOR: f64 = 1e-14;

/// The diffusivity function `K` of `D_t^a u = D_xx K(u)`.
#[derive(Debug, Clone, Copy)]
pub enum Nonlinearity {
    Identity,
    SquareRoot,
    Custom {
        k: fn(f64) -> f64,
        dk: fn(f64) -> f64,
        /// Iterates must stay strictly above this value.
        lower: f64,
    },
}

impl Nonlinearity {
    pub fn k(&self, u: f64) -> f64 {
        match self {
            Self::Identity => u,
            Self::SquareRoot => libm::sqrt(u),
            Self::Custom { k, .. } => k(u),
        }
    }

    pub fn dk(&self, u: f64) -> f64 {
        match self {
            Self::Identity => 1.0,
            Self::SquareRoot => 0.5 / libm::sqrt(u),
            Self::Custom { dk, .. } => dk(u),
        }
    }

    /// Whether `u` is an admissible iterate.
    pub fn admissible(&self, u: f64) -> bool {
        match self {
            Self::Identity => u.is_finite(),
            Self::SquareRoot => u > POSITIVITY_FLOOR,
            Self::Custom { lower, .. } => u > *lower,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Self::Identity)
    }
}

/// Everything that defines one discrete problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub op: CollocationOperator,
    pub space: SpaceGrid,
    /// Dirichlet data at every time node `t_0..=t_N`.
    pub boundary: BoundaryTraces,
    /// Initial data, one row per initial condition and one column per
    /// interior node; ignored for [`Variant::ZeroIc`].
    pub initial: Option<DMatrix<f64>>,
    pub nonlinearity: Nonlinearity,
}

impl ProblemSpec {
    /// Problem with vanishing initial data and boundary values `chi_a(t)`, `chi_b(t)`.
    pub fn at_rest(
        op: CollocationOperator,
        space: SpaceGrid,
        chi_a: impl Fn(f64) -> f64,
        chi_b: impl Fn(f64) -> f64,
        nonlinearity: Nonlinearity,
    ) -> Self {
        let boundary = BoundaryTraces::sample(op.grid().nodes(), chi_a, chi_b);
        let initial = match op.variant() {
            Variant::ZeroIc => None,
            _ => Some(DMatrix::zeros(op.initial_data_len(), space.m())),
        };
        Self { op, space, boundary, initial, nonlinearity }
    }

    pub fn rows(&self) -> usize {
        self.op.c1().nrows()
    }

    fn validate(&self) -> Result<()> {
        let nodes = self.op.grid().nodes().len();
        if self.boundary.len() != nodes {
            return Err(Error::DimensionMismatch { expected: nodes, found: self.boundary.len() });
        }
        let need = self.op.initial_data_len();
        match (&self.initial, need) {
            (_, 0) => Ok(()),
            (None, _) => Err(Error::InvalidArgument("initial data required for this variant")),
            (Some(g), _) if g.nrows() != need || g.ncols() != self.space.m() => {
                Err(Error::DimensionMismatch { expected: need * self.space.m(), found: g.len() })
            }
            _ => Ok(()),
        }
    }

    fn row_traces(&self) -> BoundaryTraces {
        let first = self.op.first_row();
        BoundaryTraces {
            chi_a: self.boundary.chi_a[first..].to_vec(),
            chi_b: self.boundary.chi_b[first..].to_vec(),
        }
    }

    /// `C2 gamma` (rows x M), zero when there is no initial-data block.
    fn initial_term(&self) -> DMatrix<f64> {
        match (self.op.c2(), &self.initial) {
            (Some(c2), Some(g)) if c2.ncols() > 0 => c2 * g,
            _ => DMatrix::zeros(self.rows(), self.space.m()),
        }
    }
}

/// Newton controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Target for the max-norm residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 50 }
    }
}

/// A solved field with the data needed to interpret it.
#[derive(Debug, Clone)]
pub struct SolutionField {
    /// Interior values, one row per collocation node.
    pub u: DMatrix<f64>,
    /// Collocation nodes of the rows of `u`.
    pub times: Vec<f64>,
    pub space: SpaceGrid,
    /// Dirichlet data at every time node `t_0..=t_N`.
    pub boundary: BoundaryTraces,
    /// Max-norm residual of the discrete system.
    pub residual: f64,
    /// Residual after each Newton iterate (a single entry for linear solves).
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub cond_a: f64,
    /// Smallest reciprocal condition number among the eliminated blocks.
    pub rcond: f64,
}

impl SolutionField {
    pub fn rows(&self) -> usize {
        self.u.nrows()
    }

    /// Interior values at the last time node.
    pub fn final_row(&self) -> Vec<f64> {
        self.u.row(self.u.nrows() - 1).iter().copied().collect()
    }
}

/// `R(U) = C1 U + C2 gamma - (K(U) M + F) / dx^2` at every row and interior node.
pub fn residual(spec: &ProblemSpec, u: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let (rows, m) = (spec.rows(), spec.space.m());
    if u.nrows() != rows || u.ncols() != m {
        return Err(Error::DimensionMismatch { expected: rows * m, found: u.len() });
    }
    let inv_dx2 = 1.0 / (spec.space.dx() * spec.space.dx());
    let k = spec.nonlinearity;
    let traces = spec.row_traces();
    let mut r = spec.op.c1() * u + spec.initial_term();
    for j in 0..rows {
        let ku = |i: usize| -> f64 {
            if i == 0 {
                k.k(traces.chi_a[j])
            } else if i == m + 1 {
                k.k(traces.chi_b[j])
            } else {
                k.k(u[(j, i - 1)])
            }
        };
        for i in 1..=m {
            r[(j, i - 1)] -= inv_dx2 * (ku(i - 1) - 2.0 * ku(i) + ku(i + 1));
        }
    }
    Ok(r)
}

/// Block-tridiagonal system in space: block `i` is `C1 + diag(d_i)`, and
/// equation `i` couples to `u_{i-1}` through `diag(lo_i)` and to `u_{i+1}`
/// through `diag(up_i)`.
struct BlockSystem<'a> {
    c1: &'a DMatrix<f64>,
    d: Vec<DVector<f64>>,
    lo: Vec<DVector<f64>>,
    up: Vec<DVector<f64>>,
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

impl BlockSystem<'_> {
    /// Solves for `x` (rows x M, column `i` is block `i`); returns the
    /// smallest block reciprocal condition number seen.
    fn solve(&self, rhs: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
        let rows = self.c1.nrows();
        let m = self.d.len();
        let mut lus = Vec::with_capacity(m);
        // G_i = S_i^{-1} diag(up_i)
        let mut g: Vec<DMatrix<f64>> = Vec::with_capacity(m);
        let mut y: Vec<DVector<f64>> = Vec::with_capacity(m);
        let mut rcond = f64::INFINITY;
        for i in 0..m {
            let mut s = self.c1.clone();
            for r in 0..rows {
                s[(r, r)] += self.d[i][r];
            }
            let mut b: DVector<f64> = rhs.column(i).into_owned();
            if i > 0 {
                // S_i = D_i - diag(lo_i) G_{i-1}, y_i = b_i - diag(lo_i) S_{i-1}^{-1} y_{i-1}
                for r in 0..rows {
                    let l = self.lo[i][r];
                    for c in 0..rows {
                        s[(r, c)] -= l * g[i - 1][(r, c)];
                    }
                    b[r] -= l * y[i - 1][r];
                }
            }
            let lu = s.clone().lu();
            let inv = lu.try_inverse().ok_or(Error::SingularSystem { rcond: 0.0 })?;
            rcond = rcond.min(1.0 / (norm1(&s) * norm1(&inv)));
            let lu = s.lu();
            let yi = lu.solve(&b).ok_or(Error::SingularSystem { rcond: 0.0 })?;
            let gi = DMatrix::from_fn(rows, rows, |r, c| inv[(r, c)] * self.up[i][c]);
            y.push(yi);
            g.push(gi);
            lus.push(lu);
        }
        if !(rcond >= MIN_SYSTEM_RCOND) {
            return Err(Error::SingularSystem { rcond: if rcond.is_nan() { 0.0 } else { rcond } });
        }
        let mut x = DMatrix::zeros(rows, m);
        for i in (0..m).rev() {
            let mut xi = y[i].clone();
            if i + 1 < m {
                xi -= &g[i] * x.column(i + 1);
            }
            x.set_column(i, &xi);
        }
        Ok((x, rcond))
    }
}

fn jacobian_blocks<'a>(spec: &'a ProblemSpec, u: &DMatrix<f64>) -> BlockSystem<'a> {
    let (rows, m) = (spec.rows(), spec.space.m());
    let inv_dx2 = 1.0 / (spec.space.dx() * spec.space.dx());
    let k = spec.nonlinearity;
    let dk = |j: usize, i: usize| k.dk(u[(j, i)]);
    let d = (0..m).map(|i| DVector::from_fn(rows, |j, _| 2.0 * inv_dx2 * dk(j, i))).collect();
    let lo = (0..m)
        .map(|i| DVector::from_fn(rows, |j, _| if i == 0 { 0.0 } else { -inv_dx2 * dk(j, i - 1) }))
        .collect();
    let up = (0..m)
        .map(|i| DVector::from_fn(rows, |j, _| if i + 1 == m { 0.0 } else { -inv_dx2 * dk(j, i + 1) }))
        .collect();
    BlockSystem { c1: spec.op.c1(), d, lo, up }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

/// Linear problem `K(u) = u`, solved directly.
pub fn solve_linear(spec: &ProblemSpec) -> Result<SolutionField> {
    spec.validate()?;
    if !spec.nonlinearity.is_linear() {
        return Err(Error::InvalidArgument("solve_linear needs K(u) = u"));
    }
    let (rows, m) = (spec.rows(), spec.space.m());
    let zero = DMatrix::zeros(rows, m);
    // R(U) is affine, so U = -J^{-1} R(0)
    let r0 = residual(spec, &zero)?;
    let (x, rcond) = jacobian_blocks(spec, &zero).solve(&(-r0))?;
    let res = max_abs(&residual(spec, &x)?);
    Ok(finish(spec, x, vec![res], 1, rcond))
}

fn finish(spec: &ProblemSpec, u: DMatrix<f64>, history: Vec<f64>, iterations: usize, rcond: f64) -> SolutionField {
    SolutionField {
        u,
        times: spec.op.row_nodes().to_vec(),
        space: spec.space,
        boundary: spec.boundary.clone(),
        residual: *history.last().unwrap_or(&0.0),
        residual_history: history,
        iterations,
        cond_a: spec.op.cond_a(),
        rcond,
    }
}

/// Field that interpolates the boundary data linearly in `x` on every row.
pub fn boundary_interpolant(spec: &ProblemSpec) -> DMatrix<f64> {
    let traces = spec.row_traces();
    let (a, b) = (spec.space.a(), spec.space.b());
    DMatrix::from_fn(spec.rows(), spec.space.m(), |j, i| {
        let s = (spec.space.x(i + 1) - a) / (b - a);
        (1.0 - s) * traces.chi_a[j] + s * traces.chi_b[j]
    })
}

/// Size of the residual that roundoff alone produces at `u`.
fn roundoff_floor(spec: &ProblemSpec, u: &DMatrix<f64>) -> f64 {
    let inv_dx2 = 1.0 / (spec.space.dx() * spec.space.dx());
    let c1 = spec.op.c1();
    let c1_inf = c1.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let k_max = u.iter().map(|&v| spec.nonlinearity.k(v).abs()).fold(0.0, f64::max);
    let k_max = spec
        .boundary
        .chi_a
        .iter()
        .chain(&spec.boundary.chi_b)
        .map(|&v| spec.nonlinearity.k(v).abs())
        .fold(k_max, f64::max);
    8.0 * f64::EPSILON * (c1_inf * max_abs(u) + 4.0 * inv_dx2 * k_max)
}

/// Damped Newton iteration for general `K`, started from the linear
/// solution (or the boundary interpolant if that is not admissible).
///
/// The iteration stops when the max-norm residual reaches `opts.tol`, or
/// when it can no longer decrease because it sits at the roundoff level of
/// the `1/dx^2`-scaled system.
pub fn solve_newton(spec: &ProblemSpec, opts: NewtonOptions) -> Result<SolutionField> {
    spec.validate()?;
    let k = spec.nonlinearity;
    let admissible = |u: &DMatrix<f64>| u.iter().all(|&v| k.admissible(v));

    let mut u = {
        let linear = ProblemSpec { nonlinearity: Nonlinearity::Identity, ..spec.clone() };
        match solve_linear(&linear) {
            Ok(f) if admissible(&f.u) => f.u,
            _ => boundary_interpolant(spec),
        }
    };
    if !admissible(&u) {
        return Err(Error::DomainViolation);
    }
    let mut r = residual(spec, &u)?;
    let mut res = max_abs(&r);
    let mut history = vec![res];
    let mut rcond = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        if res <= opts.tol {
            return Ok(finish(spec, u, history, iter - 1, rcond));
        }
        let (step, rc) = jacobian_blocks(spec, &u).solve(&(-&r))?;
        rcond = rc;
        let mut lambda = 1.0;
        let mut accepted = None;
        let mut saw_admissible = false;
        while lambda >= 1.0 / 1024.0 {
            let trial = &u + &step * lambda;
            if admissible(&trial) {
                saw_admissible = true;
                let tr = residual(spec, &trial)?;
                let tres = max_abs(&tr);
                if tres < res {
                    accepted = Some((trial, tr, tres));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((nu, nr, nres)) => {
                let step_size = max_abs(&step) * lambda;
                u = nu;
                r = nr;
                res = nres;
                history.push(res);
                let floor = roundoff_floor(spec, &u);
                if res <= opts.tol || (step_size <= 1e3 * f64::EPSILON * max_abs(&u).max(1.0) && res <= floor) {
                    return Ok(finish(spec, u, history, iter, rcond));
                }
            }
            None => {
                if !saw_admissible {
                    return Err(Error::DomainViolation);
                }
                // no decrease is possible: accept only if roundoff explains it
                if res <= roundoff_floor(spec, &u) {
                    return Ok(finish(spec, u, history, iter - 1, rcond));
                }
                return Err(Error::NewtonDivergence { iterations: iter, residual: res });
            }
        }
    }
    if res <= opts.tol || res <= roundoff_floor(spec, &u) {
        return Ok(finish(spec, u, history, opts.max_iter, rcond));
    }
    Err(Error::NewtonDivergence { iterations: opts.max_iter, residual: res })
}

/// Jacobian `I_M (x) C1 - (M^T (x) I) diag(K'(U)) / dx^2` in column-major
/// `vec(U)` ordering, assembled densely.
pub fn dense_jacobian(spec: &ProblemSpec, u: &DMatrix<f64>) -> DMatrix<f64> {
    let (rows, m) = (spec.rows(), spec.space.m());
    let inv_dx2 = 1.0 / (spec.space.dx() * spec.space.dx());
    let c1 = spec.op.c1();
    let lap = second_diff_matrix(m);
    let n = rows * m;
    let mut j = DMatrix::zeros(n, n);
    for i in 0..m {
        for r in 0..rows {
            for c in 0..rows {
                j[(i * rows + r, i * rows + c)] += c1[(r, c)];
            }
        }
    }
    for i in 0..m {
        for l in 0..m {
            let w = lap[(l, i)];
            if w != 0.0 {
                for r in 0..rows {
                    j[(i * rows + r, l * rows + r)] -= inv_dx2 * w * spec.nonlinearity.dk(u[(r, l)]);
                }
            }
        }
    }
    j
}

/// Linear problem solved through the dense Kronecker system
/// `(I (x) C1 - M^T (x) I / dx^2) vec(U) = vec(F / dx^2 - C2 gamma)`.
/// Intended for small grids.
pub fn solve_linear_dense(spec: &ProblemSpec) -> Result<SolutionField> {
    spec.validate()?;
    if !spec.nonlinearity.is_linear() {
        return Err(Error::InvalidArgument("solve_linear_dense needs K(u) = u"));
    }
    let (rows, m) = (spec.rows(), spec.space.m());
    let inv_dx2 = 1.0 / (spec.space.dx() * spec.space.dx());
    let zero = DMatrix::zeros(rows, m);
    let j = dense_jacobian(spec, &zero);
    let f = boundary_matrix(&spec.row_traces(), |v| v, m);
    let rhs = f * inv_dx2 - spec.initial_term();
    let b = DVector::from_column_slice(rhs.as_slice());
    let inv = j.clone().lu().try_inverse().ok_or(Error::SingularSystem { rcond: 0.0 })?;
    let rcond = 1.0 / (norm1(&j) * norm1(&inv));
    if !(rcond >= MIN_SYSTEM_RCOND) {
        return Err(Error::SingularSystem { rcond });
    }
    let x = j.lu().solve(&b).ok_or(Error::SingularSystem { rcond: 0.0 })?;
    let u = DMatrix::from_column_slice(rows, m, x.as_slice());
    let res = max_abs(&residual(spec, &u)?);
    Ok(finish(spec, u, vec![res], 1, rcond))
}
