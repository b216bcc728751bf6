//! Reference solutions and error metrics for the test problem
//! `D_t^a u = u_xx` on `(0, 1)`, `u(0, t) = u(1, t) = t^p / p`, at rest at
//! `t = 0`, whose solution is
//!
//! `u = t^p/p - sum_n 4 t^p / ((2n-1) pi) sin((2n-1) pi x) E_{a,p+1}(-(2n-1)^2 pi^2 t^a)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::order::FractionalOrder;
use crate::solver::SolutionField;
use crate::special::{gamma, mittag_leffler, MittagLefflerParams};

/// Largest number of series terms before giving up.
pub const MAX_TERMS: usize = 100_000;

/// Truncation of the series: `terms` is the smallest `R` whose term bound
/// is below `tol`; `achieved` is that bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub tol: f64,
    pub terms: usize,
    pub achieved: f64,
}

impl SeriesTruncation {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, terms: 0, achieved: f64::INFINITY }
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self::with_tol(1e-12)
    }
}

/// Boundary value `t^p / p`.
pub fn boundary_value(order: FractionalOrder, t: f64) -> f64 {
    let p = order.p() as i32;
    libm::pow(t, p as f64) / p as f64
}

/// Time factors of the series at one `t`: `c_n = -4 t^p E_n / ((2n-1) pi)`.
struct TimeSeries {
    coeffs: Vec<f64>,
    bound: f64,
}

fn time_series(order: FractionalOrder, t: f64, tol: f64) -> Result<TimeSeries> {
    let (alpha, p) = (order.alpha(), order.p());
    let mut coeffs = Vec::new();
    if t <= 0.0 {
        return Ok(TimeSeries { coeffs, bound: 0.0 });
    }
    let params = MittagLefflerParams::new(alpha, p as f64 + 1.0)?;
    let tp = libm::pow(t, p as f64);
    let ta = libm::pow(t, alpha);
    // smooth envelope |E_{a,b}(-z)| ~ 1 / (z |Gamma(b - a)|); guards against
    // stopping at a sign change of an oscillating term
    let g = gamma(p as f64 + 1.0 - alpha)?.abs();
    for n in 1..=MAX_TERMS {
        let k = (2 * n - 1) as f64;
        let z = k * k * PI * PI * ta;
        let e = mittag_leffler(params, -z)?;
        let scale = 4.0 * tp / (k * PI);
        coeffs.push(-scale * e);
        let bound = scale * e.abs().max(1.0 / (z * g));
        if bound < tol {
            return Ok(TimeSeries { coeffs, bound });
        }
    }
    Err(Error::SeriesStagnation { terms: MAX_TERMS })
}

fn sum_at(series: &TimeSeries, order: FractionalOrder, x: f64, t: f64) -> f64 {
    let mut s = CompensatedSum::new();
    s.add(boundary_value(order, t));
    if x > 0.0 && x < 1.0 {
        for (n, c) in series.coeffs.iter().enumerate() {
            s.add(c * libm::sin((2 * n + 1) as f64 * PI * x));
        }
    }
    s.value()
}

/// Truncated series at one point.
pub fn exact_linear(x: f64, t: f64, order: FractionalOrder, tol: f64) -> Result<(f64, SeriesTruncation)> {
    if !(0.0..=1.0).contains(&x) || !(t >= 0.0) {
        return Err(Error::Domain { what: "reference solution", value: if (0.0..=1.0).contains(&x) { t } else { x } });
    }
    let series = time_series(order, t, tol)?;
    let trunc = SeriesTruncation { tol, terms: series.coeffs.len(), achieved: series.bound };
    Ok((sum_at(&series, order, x, t), trunc))
}

/// Truncated series on a tensor grid, `result[(j, i)] = u(xs[i], ts[j])`.
/// One truncation length (the largest needed over `ts`) is used throughout.
pub fn exact_linear_grid(xs: &[f64], ts: &[f64], order: FractionalOrder, tol: f64) -> Result<(DMatrix<f64>, SeriesTruncation)> {
    let mut all = Vec::with_capacity(ts.len());
    let mut trunc = SeriesTruncation { tol, terms: 0, achieved: 0.0 };
    for &t in ts {
        let s = time_series(order, t, tol)?;
        trunc.terms = trunc.terms.max(s.coeffs.len());
        trunc.achieved = trunc.achieved.max(s.bound);
        all.push(s);
    }
    let mut out = DMatrix::zeros(ts.len(), xs.len());
    for (j, (&t, s)) in ts.iter().zip(&all).enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Domain { what: "reference solution", value: x });
            }
            out[(j, i)] = sum_at(s, order, x, t);
        }
    }
    Ok((out, trunc))
}

/// Reference values at the rows and interior nodes of `field`.
pub fn exact_linear_on(field: &SolutionField, order: FractionalOrder, tol: f64) -> Result<(DMatrix<f64>, SeriesTruncation)> {
    let xs: Vec<f64> = (1..=field.space.m()).map(|i| field.space.x(i)).collect();
    exact_linear_grid(&xs, &field.times, order, tol)
}

/// `max_{i,j} |u_{i,j} - ref_{i,j}|`.
pub fn sol_err_linear(field: &SolutionField, reference: &DMatrix<f64>) -> Result<f64> {
    if field.u.shape() != reference.shape() {
        return Err(Error::GridMismatch("reference shape differs from the solution"));
    }
    Ok(field.u.iter().zip(reference.iter()).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}

/// Final-time discrepancies between a run and a finer-in-time reference run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinalTimeError {
    /// `sqrt(sum_i |u_{i,N} - ref_i|)`.
    pub sqrt_sum_abs: f64,
    /// `sqrt(sum_i |u_{i,N} - ref_i|^2)`.
    pub l2: f64,
    /// `max_i |u_{i,N} - ref_i|`.
    pub max_abs: f64,
}

/// Compares two runs at their common final time.
pub fn sol_err_nonlinear(field: &SolutionField, reference: &SolutionField) -> Result<FinalTimeError> {
    if field.space != reference.space {
        return Err(Error::GridMismatch("space grids differ"));
    }
    let (ta, tb) = (field.times.last(), reference.times.last());
    match (ta, tb) {
        (Some(a), Some(b)) if (a - b).abs() <= 1e-14 * a.abs().max(1.0) => {}
        _ => return Err(Error::GridMismatch("final times differ")),
    }
    Ok(final_time_error(&field.final_row(), &reference.final_row()))
}

/// The three final-time metrics for two equally long rows.
pub fn final_time_error(a: &[f64], b: &[f64]) -> FinalTimeError {
    let mut sum_abs = CompensatedSum::new();
    let mut sum_sq = CompensatedSum::new();
    let mut max_abs = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let d = (x - y).abs();
        sum_abs.add(d);
        sum_sq.add(d * d);
        max_abs = max_abs.max(d);
    }
    FinalTimeError {
        sqrt_sum_abs: libm::sqrt(sum_abs.value()),
        l2: libm::sqrt(sum_sq.value()),
        max_abs,
    }
}
