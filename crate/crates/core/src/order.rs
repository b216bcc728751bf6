use crate::error::{Error, Result};

/// Order α of the time derivative together with `p`, the smallest integer
/// strictly greater than α.
///
/// `p == 1` is the subdiffusion regime, `p == 2` superdiffusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder {
    alpha: f64,
    p: usize,
}

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || libm::floor(alpha) == alpha {
            return Err(Error::InvalidOrder { alpha });
        }
        Ok(Self {
            alpha,
            p: libm::floor(alpha) as usize + 1,
        })
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn p(self) -> usize {
        self.p
    }

    pub fn is_subdiffusion(self) -> bool {
        self.p == 1
    }
}

/// Smallest integer strictly greater than `order` (for `order >= 0`).
pub(crate) fn ceil_strict(order: f64) -> usize {
    libm::floor(order) as usize + 1
}
