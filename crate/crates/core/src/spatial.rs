//! Uniform space grid and the finite-difference operators used by the
//! scheme: forward difference and average, centred `q`-th differences,
//! the tridiagonal matrix `M` with its boundary companion `F`, and the
//! discrete Leibniz fluxes.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Nodes `x_i = a + i dx`, `i = 0..=M+1`, with `M` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceGrid {
    a: f64,
    b: f64,
    m: usize,
}

impl SpaceGrid {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("space grid needs at least one interior node"));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidArgument("space grid needs a < b"));
        }
        Ok(Self { a, b, m })
    }

    /// Grid whose spacing is `dx`, rounded to the nearest whole number of cells.
    pub fn with_spacing(a: f64, b: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidArgument("dx must be positive"));
        }
        let cells = libm::round((b - a) / dx);
        if !(cells >= 2.0) {
            return Err(Error::InvalidArgument("dx leaves no interior node"));
        }
        Self::new(a, b, cells as usize - 1)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of interior nodes.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dx(&self) -> f64 {
        (self.b - self.a) / (self.m + 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.m + 1 {
            self.b
        } else {
            self.a + i as f64 * self.dx()
        }
    }

    /// All `M + 2` nodes including both ends.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.m + 2).map(|i| self.x(i)).collect()
    }
}

/// Dirichlet data `u(a, t_j)` and `u(b, t_j)` at the collocation rows.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTraces {
    pub chi_a: Vec<f64>,
    pub chi_b: Vec<f64>,
}

impl BoundaryTraces {
    pub fn new(chi_a: Vec<f64>, chi_b: Vec<f64>) -> Result<Self> {
        if chi_a.len() != chi_b.len() {
            return Err(Error::DimensionMismatch { expected: chi_a.len(), found: chi_b.len() });
        }
        Ok(Self { chi_a, chi_b })
    }

    /// Samples `chi_a(t)` and `chi_b(t)` at the given times.
    pub fn sample(times: &[f64], chi_a: impl Fn(f64) -> f64, chi_b: impl Fn(f64) -> f64) -> Self {
        Self {
            chi_a: times.iter().map(|&t| chi_a(t)).collect(),
            chi_b: times.iter().map(|&t| chi_b(t)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.chi_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi_a.is_empty()
    }
}

/// `M x M` tridiagonal matrix with `-2` on the diagonal and `1` beside it.
pub fn second_diff_matrix(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |r, c| match r.abs_diff(c) {
        0 => -2.0,
        1 => 1.0,
        _ => 0.0,
    })
}

/// Row `j` holds `K(chi_a(t_j))` in the first column and `K(chi_b(t_j))` in the last.
pub fn boundary_matrix(traces: &BoundaryTraces, k: impl Fn(f64) -> f64, m: usize) -> DMatrix<f64> {
    let mut f = DMatrix::zeros(traces.len(), m);
    for j in 0..traces.len() {
        f[(j, 0)] += k(traces.chi_a[j]);
        f[(j, m - 1)] += k(traces.chi_b[j]);
    }
    f
}

/// `(f_{i+1} - f_i) / dx`.
pub fn forward_diff(f_i: f64, f_next: f64, dx: f64) -> f64 {
    (f_next - f_i) / dx
}

/// `(f_i + f_{i+1}) / 2`.
pub fn forward_avg(f_i: f64, f_next: f64) -> f64 {
    0.5 * (f_i + f_next)
}

/// Values of a stencil result on the node range `start..start + values.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Windowed {
    pub start: usize,
    pub values: Vec<f64>,
}

impl Windowed {
    pub fn new(start: usize, values: Vec<f64>) -> Self {
        Self { start, values }
    }

    pub fn end(&self) -> usize {
        self.start + self.values.len()
    }

    /// Value at node `i`, if covered.
    pub fn get(&self, i: usize) -> Option<f64> {
        i.checked_sub(self.start).and_then(|k| self.values.get(k).copied())
    }

    fn shrink(&self, op: impl Fn(f64, f64, f64) -> f64) -> Windowed {
        if self.values.len() < 3 {
            return Windowed::new(self.start + 1, Vec::new());
        }
        let values = self.values.windows(3).map(|w| op(w[0], w[1], w[2])).collect();
        Windowed::new(self.start + 1, values)
    }

    fn d1(&self, dx: f64) -> Windowed {
        self.shrink(|l, _, r| (r - l) / (2.0 * dx))
    }

    fn d2(&self, dx: f64) -> Windowed {
        self.shrink(|l, c, r| (l - 2.0 * c + r) / (dx * dx))
    }
}

/// Centred `q`-th difference of a whole field: `D1` and `D2` for `q = 1, 2`,
/// and `D1^{q mod 2} D2^{q / 2}` beyond. The result covers nodes
/// `h..len - h` with `h = ceil(q / 2)`.
pub fn centered_qth_field(f: &Windowed, q: usize, dx: f64) -> Windowed {
    let mut w = f.clone();
    for _ in 0..q / 2 {
        w = w.d2(dx);
    }
    if q % 2 == 1 {
        w = w.d1(dx);
    }
    w
}

fn stencil_half_width(q: usize) -> usize {
    q.div_ceil(2)
}

/// Centred `q`-th difference at the middle of `window`.
pub fn centered_qth(window: &[f64], q: usize, dx: f64) -> Result<f64> {
    let h = stencil_half_width(q);
    if q == 0 || window.len() != 2 * h + 1 {
        return Err(Error::InvalidArgument("centred stencil window must have length 2*ceil(q/2)+1"));
    }
    let w = centered_qth_field(&Windowed::new(0, window.to_vec()), q, dx);
    Ok(w.values[0])
}

fn pair_flux(a: &Windowed, b: &Windowed, rule: impl Fn(f64, f64, f64, f64) -> f64) -> Windowed {
    let lo = a.start.max(b.start) + 1;
    let hi = a.end().min(b.end());
    let values = (lo..hi.max(lo))
        .map(|i| rule(a.get(i - 1).unwrap(), a.get(i).unwrap(), b.get(i - 1).unwrap(), b.get(i).unwrap()))
        .collect();
    Windowed::new(lo, values)
}

/// `-(f_{i-1} g_i + f_i g_{i-1}) / 2`.
fn flux_first(f: &Windowed, g: &Windowed) -> Windowed {
    pair_flux(f, g, |fp, fi, gp, gi| -0.5 * (fp * gi + fi * gp))
}

/// `(f_i g_{i-1} - f_{i-1} g_i) / dx`.
fn flux_second(f: &Windowed, g: &Windowed, dx: f64) -> Windowed {
    pair_flux(f, g, |fp, fi, gp, gi| (fi * gp - fp * gi) / dx)
}

fn add(a: &Windowed, b: &Windowed, sign: f64) -> Windowed {
    let lo = a.start.max(b.start);
    let hi = a.end().min(b.end());
    let values = (lo..hi.max(lo)).map(|i| a.get(i).unwrap() + sign * b.get(i).unwrap()).collect();
    Windowed::new(lo, values)
}

fn pow_d2(f: &Windowed, s: usize, dx: f64) -> Windowed {
    (0..s).fold(f.clone(), |w, _| w.d2(dx))
}

/// Flux `F` of the discrete Leibniz rule
/// `-f D^(q) g = -(-1)^q g D^(q) f + D_dx F` on whole fields.
pub fn leibniz_flux_field(f: &Windowed, g: &Windowed, q: usize, dx: f64) -> Windowed {
    let lambda = q / 2;
    let even = |f: &Windowed, g: &Windowed| -> Windowed {
        let mut acc: Option<Windowed> = None;
        for s in 0..lambda {
            let term = flux_second(&pow_d2(f, s, dx), &pow_d2(g, lambda - 1 - s, dx), dx);
            acc = Some(match acc {
                None => term,
                Some(a) => add(&a, &term, 1.0),
            });
        }
        acc.unwrap_or_else(|| Windowed::new(f.start, Vec::new()))
    };
    if q.is_multiple_of(2) {
        even(f, g)
    } else if lambda == 0 {
        flux_first(f, g)
    } else {
        let first = flux_first(f, &pow_d2(g, lambda, dx));
        add(&first, &even(&f.d1(dx), g), -1.0)
    }
}

/// Flux at node `i` from windows `f_{i-h}..f_{i+h-1}` (and likewise `g`),
/// `h = ceil(q / 2)`. For `q = 1` this is `-(f_{i-1} g_i + f_i g_{i-1}) / 2`;
/// for `q = 2`, `(f_i g_{i-1} - f_{i-1} g_i) / dx`.
pub fn leibniz_flux(f: &[f64], g: &[f64], q: usize, dx: f64) -> Result<f64> {
    let h = stencil_half_width(q);
    if q == 0 || f.len() != 2 * h || g.len() != 2 * h {
        return Err(Error::InvalidArgument("Leibniz flux windows must have length 2*ceil(q/2)"));
    }
    let w = leibniz_flux_field(&Windowed::new(0, f.to_vec()), &Windowed::new(0, g.to_vec()), q, dx);
    w.get(h).ok_or(Error::InvalidArgument("window too short for the flux stencil"))
}
