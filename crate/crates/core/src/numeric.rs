//! Small numerical helpers shared by the special-function and reference code.

use core::f64::consts::PI;

/// Neumaier's variant of Kahan compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `sin(pi x)` with exact argument reduction.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = libm::round(x);
    let f = x - n;
    let s = if f == 0.0 { 0.0 } else { libm::sin(PI * f) };
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `cos(pi x)` with exact argument reduction.
pub(crate) fn cos_pi(x: f64) -> f64 {
    let n = libm::round(x);
    let f = x - n;
    let c = if libm::fabs(f) == 0.5 { 0.0 } else { libm::cos(PI * f) };
    if (n as i64) % 2 == 0 {
        c
    } else {
        -c
    }
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Tanh-sinh (double exponential) quadrature of `f` over `[a, b]`.
///
/// Abscissae are generated from their distance to the nearest endpoint so
/// that integrable endpoint singularities are sampled without cancellation.
pub(crate) fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Quadrature {
    const T_MAX: f64 = 4.0;
    const MAX_LEVEL: u32 = 12;
    let half = 0.5 * (b - a);
    if half == 0.0 {
        return Quadrature { value: 0.0, error: 0.0, converged: true };
    }

    // contribution of the abscissa pair at +t / -t (or the centre when t == 0),
    // together with its absolute value
    let pair = |t: f64| -> (f64, f64) {
        let u = 0.5 * PI * libm::sinh(t);
        let e = libm::exp(-2.0 * libm::fabs(u));
        // 1 - tanh|u| and the derivative weight
        let one_minus = 2.0 * e / (1.0 + e);
        let w = 0.5 * PI * libm::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if w == 0.0 || one_minus == 0.0 {
            return (0.0, 0.0);
        }
        let d = half * one_minus;
        if t == 0.0 {
            let v = w * f(a + half);
            (v, libm::fabs(v))
        } else {
            let fa = f(a + d);
            let fb = f(b - d);
            let fa = if fa.is_finite() { fa } else { 0.0 };
            let fb = if fb.is_finite() { fb } else { 0.0 };
            (w * (fa + fb), w * (libm::fabs(fa) + libm::fabs(fb)))
        }
    };

    let mut h = 1.0;
    let (mut raw, mut raw_abs) = pair(0.0);
    let mut k = 1.0;
    while k <= T_MAX {
        let (v, av) = pair(k);
        raw += v;
        raw_abs += av;
        k += 1.0;
    }
    let mut estimate = half * h * raw;
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            let (v, av) = pair(t);
            raw += v;
            raw_abs += av;
            t += 2.0 * h;
        }
        let next = half * h * raw;
        let magnitude = libm::fabs(half) * h * raw_abs;
        let diff = libm::fabs(next - estimate);
        estimate = next;
        // stop at the requested accuracy or at the rounding floor of the sum
        if diff <= rel_tol * libm::fabs(next) || diff <= 64.0 * f64::EPSILON * magnitude || diff <= f64::MIN_POSITIVE {
            return Quadrature { value: next, error: diff, converged: true };
        }
    }
    Quadrature { value: estimate, error: f64::INFINITY, converged: false }
}
