//! Fixed-step RK4 for the linear system `y' = a(x) z`, `z' = (v(x) - a(x) e) y`.
//!
//! This is a second-order equation `-u'' + V u = e u` written along a contour
//! `X(x)`, with `a = dX/dx` and `v = a V(X(x))`. Coefficients are sampled once
//! on the half-step grid and reused for every spectral parameter `e`.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub(crate) struct LinearPath {
    step: f64,
    /// `a` at `x0 + j h / 2`, `j = 0..=2N`.
    tangent: Vec<Complex64>,
    /// `a V` on the same grid.
    weighted_potential: Vec<Complex64>,
}

impl LinearPath {
    /// Samples the coefficients from `x0` to `x1` in `steps` equal steps.
    pub(crate) fn sample<F>(x0: f64, x1: f64, steps: usize, coeffs: F) -> Self
    where
        F: Fn(f64) -> (Complex64, Complex64),
    {
        let step = (x1 - x0) / steps as f64;
        let (tangent, weighted_potential) = (0..=2 * steps)
            .map(|j| {
                // exact endpoints so mirrored paths sample mirrored abscissae
                let x = if j == 2 * steps { x1 } else { x0 + 0.5 * step * j as f64 };
                let (a, v) = coeffs(x);
                (a, a * v)
            })
            .unzip();
        LinearPath {
            step,
            tangent,
            weighted_potential,
        }
    }

    pub(crate) fn steps(&self) -> usize {
        (self.tangent.len() - 1) / 2
    }

    /// Propagates `(u, du/dX)` from the start of the path to its end.
    pub(crate) fn propagate(&self, start: [Complex64; 2], e: Complex64) -> [Complex64; 2] {
        let h = self.step;
        let rhs = |j: usize, y: [Complex64; 2]| -> [Complex64; 2] {
            let a = self.tangent[j];
            [a * y[1], (self.weighted_potential[j] - a * e) * y[0]]
        };
        let mut y = start;
        for i in 0..self.steps() {
            let j = 2 * i;
            let k1 = rhs(j, y);
            let k2 = rhs(j + 1, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = rhs(j + 1, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = rhs(j + 2, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for c in 0..2 {
                y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            }
        }
        y
    }
}
