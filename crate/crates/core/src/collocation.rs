//! Spectral collocation in time: the matrices `A`, `B = A^{-1}`, `P` and
//! the discrete fractional derivative `C = P B = [C1 C2]`.
//!
//! A vector of time samples `u` (and, for the general variants, the
//! initial data `gamma`) is mapped to fractional-derivative values at the
//! collocation nodes by `C1 u + C2 gamma`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;

use crate::basis::{jacobi_basis, power_alpha_basis, BasisKind, Flavor, PolynomialBasis};
use crate::error::{Error, Result};
use crate::order::FractionalOrder;

/// Below this reciprocal condition number the basis matrix is rejected.
pub const MIN_RCOND: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    ChebyshevLobatto,
    /// The `N - 1` roots of the Chebyshev polynomial `T_{N-1}` with both
    /// endpoints added.
    ChebyshevGauss,
    Uniform,
    Custom,
}

/// Time nodes `t_0 < t_1 < ... < t_N`, with `t_0 = t0` and `t_N = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    kind: NodeKind,
    nodes: Vec<f64>,
}

/// Chebyshev-Gauss-Lobatto points mapped to `[t0, T]`.
pub fn chebyshev_lobatto_nodes(t0: f64, t_end: f64, n: usize) -> Result<TimeGrid> {
    TimeGrid::new(NodeKind::ChebyshevLobatto, t0, t_end, n)
}

impl TimeGrid {
    pub fn new(kind: NodeKind, t0: f64, t_end: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("time grid needs N >= 1"));
        }
        if !(t0.is_finite() && t_end.is_finite() && t_end > t0) {
            return Err(Error::InvalidArgument("time grid needs t0 < T"));
        }
        let len = t_end - t0;
        let mut nodes: Vec<f64> = (0..=n)
            .map(|j| match kind {
                // (1 - cos x) / 2 = sin^2(x / 2) keeps the nodes near t0 accurate
                NodeKind::ChebyshevLobatto => {
                    let s = libm::sin(FRAC_PI_2 * j as f64 / n as f64);
                    t0 + len * s * s
                }
                NodeKind::ChebyshevGauss => {
                    if j == 0 {
                        t0
                    } else if j == n {
                        t_end
                    } else {
                        let x = FRAC_PI_2 * (2 * j - 1) as f64 / (2 * (n - 1)) as f64;
                        let s = libm::sin(x);
                        t0 + len * s * s
                    }
                }
                NodeKind::Uniform | NodeKind::Custom => t0 + len * j as f64 / n as f64,
            })
            .collect();
        if matches!(kind, NodeKind::ChebyshevLobatto | NodeKind::ChebyshevGauss) {
            // mirror the upper half so the grid is symmetric to roundoff
            for j in n / 2 + 1..=n {
                nodes[j] = t0 + (t_end - nodes[n - j]);
            }
            if n.is_multiple_of(2) {
                nodes[n / 2] = 0.5 * (t0 + t_end);
            }
        }
        nodes[0] = t0;
        nodes[n] = t_end;
        Ok(Self { kind, nodes })
    }

    /// Grid from explicit, strictly increasing nodes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("time grid needs at least two finite nodes"));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("time nodes must be strictly increasing"));
        }
        Ok(Self { kind: NodeKind::Custom, nodes })
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    /// Index of the last node.
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn t0(&self) -> f64 {
        self.nodes[0]
    }

    pub fn t_end(&self) -> f64 {
        self.nodes[self.n()]
    }

    /// All nodes `t_0..=t_N`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `dt_j = t_{j+1} - t_j` for `j = 0..N`.
    pub fn steps(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Riemann-Liouville derivative with initial data `D^{alpha-k} u(t0)`.
    RiemannLiouville,
    /// Caputo derivative with initial data `D^k u(t0)`.
    Caputo,
    /// Either derivative, with all initial data equal to zero.
    ZeroIc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisChoice {
    Jacobi,
    PowerAlpha,
}

/// Number of basis functions each variant needs on a grid with `N + 1` nodes.
pub fn basis_size(variant: Variant, choice: BasisChoice, n: usize, p: usize) -> usize {
    // the power basis meets all but one initial condition identically
    let conditions = match choice {
        BasisChoice::Jacobi => p,
        BasisChoice::PowerAlpha => 1,
    };
    match variant {
        Variant::RiemannLiouville => n + 1 + conditions,
        Variant::Caputo | Variant::ZeroIc => n + conditions,
    }
}

/// The basis of `choice` sized for `variant` on `grid`.
pub fn make_basis(variant: Variant, choice: BasisChoice, grid: &TimeGrid, order: FractionalOrder) -> Result<PolynomialBasis> {
    let size = basis_size(variant, choice, grid.n(), order.p());
    match choice {
        BasisChoice::Jacobi => jacobi_basis(grid.t0(), grid.t_end(), order.p(), size),
        BasisChoice::PowerAlpha => power_alpha_basis(order.alpha(), grid.t0(), size),
    }
}

#[derive(Debug, Clone)]
pub struct CollocationOperator {
    variant: Variant,
    order: FractionalOrder,
    grid: TimeGrid,
    basis: PolynomialBasis,
    first_row: usize,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    p: DMatrix<f64>,
    c1: DMatrix<f64>,
    c2: DMatrix<f64>,
    c0: Option<DMatrix<f64>>,
    cond_a: f64,
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

enum InitialRows {
    /// `D^{alpha - k} P_j(t0)`
    Fractional(Vec<f64>),
    /// `D^k P_j(t0)`
    Integer(Vec<usize>),
}

fn initial_rows(variant: Variant, basis: &PolynomialBasis, order: FractionalOrder) -> InitialRows {
    let count = match basis.kind() {
        BasisKind::Jacobi { .. } => order.p(),
        BasisKind::PowerAlpha { .. } => 1,
    };
    match variant {
        Variant::RiemannLiouville => {
            InitialRows::Fractional((0..count).map(|k| order.alpha() - k as f64).collect())
        }
        _ => InitialRows::Integer((0..count).collect()),
    }
}

fn assemble(
    variant: Variant,
    basis: &PolynomialBasis,
    grid: &TimeGrid,
    order: FractionalOrder,
    flavor: Flavor,
) -> Result<CollocationOperator> {
    if (basis.t0() - grid.t0()).abs() > 0.0 {
        return Err(Error::InvalidArgument("basis and grid must share t0"));
    }
    let first_row = if variant == Variant::RiemannLiouville { 0 } else { 1 };
    let nodes = &grid.nodes()[first_row..];
    let ic = initial_rows(variant, basis, order);
    let ic_len = match &ic {
        InitialRows::Fractional(v) => v.len(),
        InitialRows::Integer(v) => v.len(),
    };
    let size = nodes.len() + ic_len;
    if basis.size() != size {
        return Err(Error::DimensionMismatch { expected: size, found: basis.size() });
    }

    let t0 = grid.t0();
    let alpha = order.alpha();
    let mut a = DMatrix::zeros(size, size);
    let mut p = DMatrix::zeros(nodes.len(), size);
    for j in 0..size {
        for (r, &t) in nodes.iter().enumerate() {
            a[(r, j)] = basis.eval(j, t)?;
            p[(r, j)] = basis.frac_derivative(j, alpha, flavor, t)?;
        }
        match &ic {
            InitialRows::Fractional(orders) => {
                for (k, &o) in orders.iter().enumerate() {
                    a[(nodes.len() + k, j)] = basis.frac_derivative(j, o, Flavor::RiemannLiouville, t0)?;
                }
            }
            InitialRows::Integer(orders) => {
                for (k, &o) in orders.iter().enumerate() {
                    a[(nodes.len() + k, j)] = basis.int_derivative(j, o, t0)?;
                }
            }
        }
    }

    let b = a.clone().lu().try_inverse().ok_or(Error::SingularBasisMatrix { rcond: 0.0 })?;
    let cond_a = norm1(&a) * norm1(&b);
    let rcond = 1.0 / cond_a;
    if !(rcond >= MIN_RCOND) {
        return Err(Error::SingularBasisMatrix { rcond: if rcond.is_nan() { 0.0 } else { rcond } });
    }

    let c = &p * &b;
    let n_cols = nodes.len();
    // derivative at t0 of the interpolant, when every basis derivative is finite there
    let c0 = (0..size)
        .map(|j| basis.frac_derivative(j, alpha, flavor, t0))
        .collect::<Result<Vec<f64>>>()
        .ok()
        .map(|row| DMatrix::from_row_slice(1, size, &row) * &b);
    let c1 = c.columns(0, n_cols).into_owned();
    let c2 = if variant == Variant::ZeroIc {
        DMatrix::zeros(n_cols, 0)
    } else {
        c.columns(n_cols, ic_len).into_owned()
    };
    Ok(CollocationOperator {
        variant,
        order,
        grid: grid.clone(),
        basis: basis.clone(),
        first_row,
        a,
        b,
        p,
        c1,
        c2,
        c0,
        cond_a,
    })
}

/// General Riemann-Liouville operator on `t_0..=t_N`.
///
/// Both the derivative rows at `t0` and the initial-data rows
/// `D^{alpha-k} P_j(t0)` are unbounded for any basis containing a nonzero
/// constant, so with the bases provided here this returns
/// [`Error::SingularDerivativeAtT0`].
pub fn build_rl_operator(basis: &PolynomialBasis, grid: &TimeGrid, order: FractionalOrder) -> Result<CollocationOperator> {
    assemble(Variant::RiemannLiouville, basis, grid, order, Flavor::RiemannLiouville)
}

/// Caputo operator on the unknown nodes `t_1..=t_N`.
pub fn build_caputo_operator(basis: &PolynomialBasis, grid: &TimeGrid, order: FractionalOrder) -> Result<CollocationOperator> {
    assemble(Variant::Caputo, basis, grid, order, Flavor::Caputo)
}

/// Operator for vanishing initial data: `C1 = P B`, with `B` cut to the
/// columns that multiply node values.
pub fn build_zero_ic_operator(basis: &PolynomialBasis, grid: &TimeGrid, order: FractionalOrder) -> Result<CollocationOperator> {
    build_zero_ic_operator_with_flavor(basis, grid, order, Flavor::Caputo)
}

/// As [`build_zero_ic_operator`], choosing the derivative used for `P`.
/// Both flavors give the same `C1` up to roundoff.
pub fn build_zero_ic_operator_with_flavor(
    basis: &PolynomialBasis,
    grid: &TimeGrid,
    order: FractionalOrder,
    flavor: Flavor,
) -> Result<CollocationOperator> {
    assemble(Variant::ZeroIc, basis, grid, order, flavor)
}

impl CollocationOperator {
    /// Builds the basis of the given family and the operator in one step.
    pub fn build(variant: Variant, choice: BasisChoice, grid: &TimeGrid, order: FractionalOrder) -> Result<Self> {
        let basis = make_basis(variant, choice, grid, order)?;
        match variant {
            Variant::RiemannLiouville => build_rl_operator(&basis, grid, order),
            Variant::Caputo => build_caputo_operator(&basis, grid, order),
            Variant::ZeroIc => build_zero_ic_operator(&basis, grid, order),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn basis(&self) -> &PolynomialBasis {
        &self.basis
    }

    /// Nodes at which samples are taken and derivatives returned.
    pub fn row_nodes(&self) -> &[f64] {
        &self.grid.nodes()[self.first_row..]
    }

    /// Index in the grid of the first row node (0 or 1).
    pub fn first_row(&self) -> usize {
        self.first_row
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn p_matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn c1(&self) -> &DMatrix<f64> {
        &self.c1
    }

    /// Initial-data block; `None` for [`Variant::ZeroIc`].
    pub fn c2(&self) -> Option<&DMatrix<f64>> {
        (self.variant != Variant::ZeroIc).then_some(&self.c2)
    }

    /// Number of initial-data entries expected by [`apply`](Self::apply).
    pub fn initial_data_len(&self) -> usize {
        self.c2.ncols()
    }

    /// `D^alpha u(t0)` of the interpolant through the given samples and
    /// initial data, or `None` when the basis derivatives are unbounded at `t0`.
    pub fn derivative_at_t0(&self, samples: &[f64], gamma: &[f64]) -> Option<f64> {
        let c0 = self.c0.as_ref()?;
        let n = self.c1.ncols();
        let mut acc = 0.0;
        for (c, &s) in samples.iter().enumerate().take(n) {
            acc += c0[(0, c)] * s;
        }
        if self.variant != Variant::ZeroIc {
            for (c, &g) in gamma.iter().enumerate() {
                acc += c0[(0, n + c)] * g;
            }
        }
        Some(acc)
    }

    /// Row weights of [`derivative_at_t0`](Self::derivative_at_t0) on the samples.
    pub fn t0_weights(&self) -> Option<&DMatrix<f64>> {
        self.c0.as_ref()
    }

    /// `||A||_1 ||A^{-1}||_1`.
    pub fn cond_a(&self) -> f64 {
        self.cond_a
    }

    /// `C1 samples + C2 gamma`.
    pub fn apply(&self, samples: &[f64], gamma: &[f64]) -> Result<Vec<f64>> {
        if samples.len() != self.c1.ncols() {
            return Err(Error::DimensionMismatch { expected: self.c1.ncols(), found: samples.len() });
        }
        if gamma.len() != self.c2.ncols() {
            return Err(Error::DimensionMismatch { expected: self.c2.ncols(), found: gamma.len() });
        }
        Ok((0..self.c1.nrows())
            .map(|r| {
                let mut acc = 0.0;
                for (c, &s) in samples.iter().enumerate() {
                    acc += self.c1[(r, c)] * s;
                }
                for (c, &g) in gamma.iter().enumerate() {
                    acc += self.c2[(r, c)] * g;
                }
                acc
            })
            .collect())
    }
}
