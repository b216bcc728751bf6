//! Function families for the spectral time discretisation.
//!
//! Every basis function is stored as a short list of power terms
//! `c (t - t0)^e`, so integer and fractional derivatives are exact
//! coefficient/exponent arithmetic.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::special::{caputo_derivative_monomial, ln_gamma, rl_derivative_monomial};

/// Which fractional derivative definition to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    RiemannLiouville,
    Caputo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisKind {
    /// Shifted Jacobi polynomials, orthogonal on `[t0, t_end]` with weight `(t - t0)^p`.
    Jacobi { t0: f64, t_end: f64, p: usize },
    /// `(t - t0)^{j alpha}`.
    PowerAlpha { alpha: f64, t0: f64 },
}

/// One term `coeff * (t - t0)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialBasis {
    kind: BasisKind,
    terms: Vec<Vec<Term>>,
}

/// Binomial coefficient as `f64`, exact through `u128` when it fits.
fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        match c.checked_mul((n - i) as u128) {
            Some(v) => c = v / (i as u128 + 1),
            None => {
                let ln = |x: f64| ln_gamma(x).map(|(l, _)| l).unwrap_or(f64::INFINITY);
                let (n, k) = (n as f64, k as f64);
                return libm::exp(ln(n + 1.0) - ln(k + 1.0) - ln(n - k + 1.0));
            }
        }
    }
    c as f64
}

/// Shifted Jacobi basis on `[t0, t_end]`: the `[0, 2]` family
/// `P_j(s) = sum_k (-1)^{j+k} (j+k+p)! / ((k+p)! (j-k)! k! 2^k) s^k`
/// composed with `s = 2 (t - t0) / (t_end - t0)`.
pub fn jacobi_basis(t0: f64, t_end: f64, p: usize, count: usize) -> Result<PolynomialBasis> {
    if count == 0 {
        return Err(Error::InvalidArgument("basis needs at least one function"));
    }
    if !(t0.is_finite() && t_end.is_finite() && t_end > t0) {
        return Err(Error::InvalidArgument("basis interval must satisfy t0 < T"));
    }
    let scale = 2.0 / (t_end - t0);
    let mut terms = Vec::with_capacity(count);
    for j in 0..count {
        let mut row = Vec::with_capacity(j + 1);
        for k in 0..=j {
            // (j+k+p)! / ((k+p)! (j-k)! k!) = C(j+k+p, j-k) * C(2k+p, k)
            let (jj, kk, pp) = (j as u64, k as u64, p as u64);
            let magnitude = binomial(jj + kk + pp, jj - kk) * binomial(2 * kk + pp, kk)
                * libm::pow(0.5 * scale, k as f64);
            if !magnitude.is_finite() {
                return Err(Error::Overflow { index: j });
            }
            let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
            row.push(Term { coeff: sign * magnitude, exponent: k as f64 });
        }
        terms.push(row);
    }
    Ok(PolynomialBasis { kind: BasisKind::Jacobi { t0, t_end, p }, terms })
}

/// The family `{(t - t0)^{j alpha}}`, `j = 0..count`.
pub fn power_alpha_basis(alpha: f64, t0: f64, count: usize) -> Result<PolynomialBasis> {
    if count == 0 {
        return Err(Error::InvalidArgument("basis needs at least one function"));
    }
    if !(alpha > 0.0 && alpha.is_finite() && t0.is_finite()) {
        return Err(Error::InvalidArgument("power basis needs finite alpha > 0 and t0"));
    }
    let terms = (0..count)
        .map(|j| alloc::vec![Term { coeff: 1.0, exponent: j as f64 * alpha }])
        .collect();
    Ok(PolynomialBasis { kind: BasisKind::PowerAlpha { alpha, t0 }, terms })
}

fn is_integer(x: f64) -> bool {
    libm::floor(x) == x
}

/// `tau^e`, with `0^0 = 1` and an error for unbounded terms at `tau = 0`.
fn power(tau: f64, e: f64, index: usize, order: f64) -> Result<f64> {
    if tau == 0.0 {
        return if e > 0.0 {
            Ok(0.0)
        } else if e == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::SingularDerivativeAtT0 { index, order })
        };
    }
    Ok(libm::pow(tau, e))
}

impl PolynomialBasis {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.terms.len()
    }

    pub fn t0(&self) -> f64 {
        match self.kind {
            BasisKind::Jacobi { t0, .. } | BasisKind::PowerAlpha { t0, .. } => t0,
        }
    }

    /// Power terms of function `j`.
    pub fn terms(&self, j: usize) -> &[Term] {
        &self.terms[j]
    }

    fn offset(&self, t: f64) -> Result<f64> {
        let tau = t - self.t0();
        if !t.is_finite() {
            return Err(Error::Domain { what: "basis evaluation", value: t });
        }
        if tau < 0.0 && matches!(self.kind, BasisKind::PowerAlpha { .. }) {
            return Err(Error::Domain { what: "power basis (t < t0)", value: t });
        }
        Ok(tau)
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), found: j });
        }
        Ok(())
    }

    fn sum_terms(&self, j: usize, order: f64, tau: f64, terms: impl Iterator<Item = Term>) -> Result<f64> {
        let mut acc = 0.0;
        for term in terms {
            if term.coeff != 0.0 {
                acc += term.coeff * power(tau, term.exponent, j, order)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, j: usize, t: f64) -> Result<f64> {
        self.check_index(j)?;
        let tau = self.offset(t)?;
        self.sum_terms(j, 0.0, tau, self.terms[j].iter().copied())
    }

    /// Power terms of `D^order P_j`. A negative order (Riemann-Liouville
    /// flavor only) gives a fractional integral.
    pub fn frac_derivative_terms(&self, j: usize, order: f64, flavor: Flavor) -> Result<Vec<Term>> {
        self.check_index(j)?;
        self.terms[j]
            .iter()
            .map(|term| {
                let d = match flavor {
                    Flavor::RiemannLiouville => rl_derivative_monomial(order, term.exponent)?,
                    Flavor::Caputo => caputo_derivative_monomial(order, term.exponent)?,
                };
                Ok(Term { coeff: term.coeff * d.coeff, exponent: d.exponent })
            })
            .collect()
    }

    pub fn frac_derivative(&self, j: usize, order: f64, flavor: Flavor, t: f64) -> Result<f64> {
        let terms = self.frac_derivative_terms(j, order, flavor)?;
        let tau = self.offset(t)?;
        self.sum_terms(j, order, tau, terms.into_iter())
    }

    /// Power terms of the `k`-th integer derivative of `P_j`.
    pub fn int_derivative_terms(&self, j: usize, k: usize) -> Result<Vec<Term>> {
        self.check_index(j)?;
        Ok(self.terms[j]
            .iter()
            .map(|term| {
                let mut c = term.coeff;
                for i in 0..k {
                    c *= term.exponent - i as f64;
                }
                // integer exponents below k differentiate to an exact zero
                if is_integer(term.exponent) && term.exponent >= 0.0 && term.exponent < k as f64 {
                    c = 0.0;
                }
                Term { coeff: c, exponent: term.exponent - k as f64 }
            })
            .collect())
    }

    pub fn int_derivative(&self, j: usize, k: usize, t: f64) -> Result<f64> {
        let terms = self.int_derivative_terms(j, k)?;
        let tau = self.offset(t)?;
        self.sum_terms(j, k as f64, tau, terms.into_iter())
    }
}
