//! Special functions of complex argument: generalized Laguerre and Gegenbauer
//! polynomials, the Gauss hypergeometric series and complex powers with an
//! upward branch cut.
//!
//! Polynomials are evaluated by forward three-term recurrence. The degrees
//! needed here stay small (well under 20), where forward recurrence is stable.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Lower end of the argument range used by [`branched_power`]. Arguments are
/// taken in `(BRANCH_ARG_MIN, BRANCH_ARG_MIN + 2 pi]`, i.e. `(-3 pi/2, pi/2]`,
/// which puts the cut on the upward imaginary ray and keeps the power
/// continuous along every contour that passes below the origin.
pub const BRANCH_ARG_MIN: f64 = -1.5 * PI;

/// Argument of `z` in `(-3 pi/2, pi/2]`.
pub fn branch_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a > 0.5 * PI {
        a - 2.0 * PI
    } else {
        a
    }
}

/// `z^e` on the branch with argument in `(-3 pi/2, pi/2]`.
pub fn branched_power(z: Complex64, e: f64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(domain("branched power at the branch point z = 0"));
    }
    Ok(Complex64::from_polar(z.norm().powf(e), e * branch_arg(z)))
}

/// Generalized Laguerre polynomial `L_n^a(z)`.
pub fn laguerre(n: u32, a: f64, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if n == 0 {
        return one;
    }
    let mut prev = one;
    let mut cur = one * (1.0 + a) - z;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + a - z) * cur - (m + a) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dz L_n^a(z) = -L_{n-1}^{a+1}(z)`.
pub fn laguerre_derivative(n: u32, a: f64, z: Complex64) -> Complex64 {
    if n == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        -laguerre(n - 1, a + 1.0, z)
    }
}

/// `L_n^a`, its first and second derivative at `z`.
pub fn laguerre_jet(n: u32, a: f64, z: Complex64) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    let d2 = if n >= 2 { laguerre(n - 2, a + 2.0, z) } else { zero };
    [laguerre(n, a, z), laguerre_derivative(n, a, z), d2]
}

/// Gegenbauer polynomial `C_k^lambda(z)` from the standard recurrence.
///
/// At `lambda = 0` the recurrence gives `C_k^0 = 0` for `k >= 1`; see
/// [`gegenbauer_jet`] for the normalized limit used by eigenfunctions.
pub fn gegenbauer(k: u32, lambda: f64, z: Complex64) -> Complex64 {
    gegenbauer_dual(k, lambda, z).0
}

/// `d/dz C_k^lambda(z) = 2 lambda C_{k-1}^{lambda+1}(z)`.
pub fn gegenbauer_derivative(k: u32, lambda: f64, z: Complex64) -> Complex64 {
    if k == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        2.0 * lambda * gegenbauer(k - 1, lambda + 1.0, z)
    }
}

/// Recurrence carried together with its derivative in `lambda`.
fn gegenbauer_dual(k: u32, lambda: f64, z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if k == 0 {
        return (one, zero);
    }
    let (mut c0, mut d0) = (one, zero);
    let (mut c1, mut d1) = (2.0 * lambda * z, 2.0 * z);
    for m in 2..=k {
        let m = m as f64;
        let a = 2.0 * (m + lambda - 1.0);
        let b = m + 2.0 * lambda - 2.0;
        let c2 = (a * z * c1 - b * c0) / m;
        let d2 = (2.0 * z * c1 + a * z * d1 - 2.0 * c0 - b * d0) / m;
        c0 = c1;
        d0 = d1;
        c1 = c2;
        d1 = d2;
    }
    (c1, d1)
}

/// Value and `z`-derivatives of the angular polynomial factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialJet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    /// True when `C_k^lambda` vanishes identically and the `lambda`-derivative
    /// (the normalized limit) was returned instead.
    pub regularized: bool,
}

/// Nonpositive integer `-m` within this distance counts as exact.
const INTEGER_SNAP: f64 = 1e-12;

/// If `C_k^lambda` vanishes identically (lambda = -m with k > 2m), returns m.
pub fn gegenbauer_vanishes(k: u32, lambda: f64) -> Option<u32> {
    let m = (-lambda).round();
    if m >= 0.0 && (lambda + m).abs() < INTEGER_SNAP && (k as f64) > 2.0 * m {
        Some(m as u32)
    } else {
        None
    }
}

/// `C_k^lambda(z)` with its first two derivatives.
///
/// When `lambda` is a nonpositive integer `-m` and `k > 2m` the polynomial is
/// identically zero. The jet then carries `d/dlambda C_k^lambda` at that
/// `lambda`, which is the limit of `C_k^lambda / (lambda + m)`. For `m = 0`
/// this is `(2/k) T_k`.
pub fn gegenbauer_jet(k: u32, lambda: f64, z: Complex64) -> PolynomialJet {
    let zero = Complex64::new(0.0, 0.0);
    if let Some(m) = gegenbauer_vanishes(k, lambda) {
        let lam = -(m as f64);
        let (_, value) = gegenbauer_dual(k, lam, z);
        let (c1, dc1) = gegenbauer_dual(k - 1, lam + 1.0, z);
        let d1 = 2.0 * c1 + 2.0 * lam * dc1;
        let d2 = if k >= 2 {
            let (c2, dc2) = gegenbauer_dual(k - 2, lam + 2.0, z);
            4.0 * (2.0 * lam + 1.0) * c2 + 4.0 * lam * (lam + 1.0) * dc2
        } else {
            zero
        };
        return PolynomialJet {
            value,
            d1,
            d2,
            regularized: true,
        };
    }
    let value = gegenbauer(k, lambda, z);
    let d1 = gegenbauer_derivative(k, lambda, z);
    let d2 = if k >= 2 {
        4.0 * lambda * (lambda + 1.0) * gegenbauer(k - 2, lambda + 2.0, z)
    } else {
        zero
    };
    PolynomialJet {
        value,
        d1,
        d2,
        regularized: false,
    }
}

/// Parameters of `2F1(u, v; c; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricParams {
    pub u: Complex64,
    pub v: Complex64,
    pub c: Complex64,
    pub nterms: usize,
}

impl HypergeometricParams {
    pub const DEFAULT_NTERMS: usize = 500;

    pub fn real(u: f64, v: f64, c: f64) -> Self {
        HypergeometricParams {
            u: u.into(),
            v: v.into(),
            c: c.into(),
            nterms: Self::DEFAULT_NTERMS,
        }
    }
}

fn nonpositive_integer(z: Complex64) -> Option<usize> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        Some((-z.re) as usize)
    } else {
        None
    }
}

/// Gauss hypergeometric series `sum (u)_m (v)_m / ((c)_m m!) z^m`.
///
/// Summed exactly when `u` or `v` is a nonpositive integer; otherwise requires
/// `|z| < 1` and stops once the geometric tail bound drops below `1e-14`.
pub fn gauss_2f1(p: &HypergeometricParams, z: Complex64) -> Result<Complex64> {
    let degree = match (nonpositive_integer(p.u), nonpositive_integer(p.v)) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    if let Some(q) = nonpositive_integer(p.c) {
        if degree.is_none_or(|d| d > q) {
            return Err(domain(format!(
                "lower parameter c = {} hits a pole before the series terminates",
                p.c.re
            )));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let mut term = one;
    let mut sum = one;
    match degree {
        Some(d) => {
            for m in 0..d {
                let mf = m as f64;
                term *= (p.u + mf) * (p.v + mf) / ((p.c + mf) * (mf + 1.0)) * z;
                sum += term;
            }
            Ok(sum)
        }
        None => {
            let r = z.norm();
            if r >= 1.0 {
                return Err(domain(format!("non-terminating 2F1 needs |z| < 1, got {r}")));
            }
            let mut tail = f64::INFINITY;
            for m in 0..p.nterms {
                let mf = m as f64;
                term *= (p.u + mf) * (p.v + mf) / ((p.c + mf) * (mf + 1.0)) * z;
                sum += term;
                tail = term.norm() / (1.0 - r);
                if tail < 1e-14 * sum.norm().max(1e-300) || tail < 1e-300 {
                    return Ok(sum);
                }
            }
            Err(Error::Convergence { nterms: p.nterms, tail })
        }
    }
}
