//! Domain types shared by every other module: couplings, model and level
//! labels, Jacobi coordinates and PT-symmetric complex contours.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Coupling constant `g` together with the derived centrifugal parameter `ell`
/// and its shifted form `alpha = ell + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParameters {
    pub g: f64,
    pub omega: f64,
    pub ell: f64,
    pub alpha: f64,
}

impl CouplingParameters {
    /// Builds the parameter record for coupling `g` and spring constant `omega`.
    ///
    /// `ell` solves `2 ell (ell + 1) = g` on the branch that vanishes at `g = 0`.
    /// It is evaluated in rationalized form so small couplings keep full
    /// relative precision.
    pub fn new(g: f64, omega: f64) -> Result<Self> {
        if !g.is_finite() || g <= -0.5 {
            return Err(Error::Collapse { g });
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(domain(format!("spring constant omega = {omega} must be positive")));
        }
        let root = (0.25 + 0.5 * g).sqrt();
        let ell = 0.5 * g / (root + 0.5);
        let alpha = 0.5 * (1.0 + 2.0 * g).sqrt();
        Ok(CouplingParameters { g, omega, ell, alpha })
    }

    /// Same coupling with a different spring constant.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        CouplingParameters::new(self.g, omega)
    }
}

/// Which separated equation a level or eigenfunction belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    /// Bulk motion of `particles` bodies in the auxiliary harmonic well.
    CentreOfMass { particles: u32 },
    /// Relative coordinate of the two-body problem.
    A2Radial,
    /// Three bodies with a single inverse-square spike between particles 1 and 2.
    Toy3,
    /// Three bodies with all three pairwise spikes at equal coupling.
    Full3,
}

impl ModelId {
    pub fn short_name(&self) -> &'static str {
        match self {
            ModelId::CentreOfMass { .. } => "cm",
            ModelId::A2Radial => "a2",
            ModelId::Toy3 => "toy",
            ModelId::Full3 => "a3",
        }
    }

    pub fn is_angular(&self) -> bool {
        matches!(self, ModelId::Toy3 | ModelId::Full3)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.short_name())
    }
}

/// Solution hierarchy. `Plus` behaves as `X^(ell+1)` near the singularity
/// (fermionic, regular), `Minus` as `X^(-ell)` (bosonic, irregular).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    Plus,
    Minus,
}

impl Sector {
    pub fn sign(self) -> f64 {
        match self {
            Sector::Plus => 1.0,
            Sector::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::Plus => "plus",
            Sector::Minus => "minus",
        }
    }

    pub const BOTH: [Sector; 2] = [Sector::Plus, Sector::Minus];
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// Quantum-number label of one eigenstate. Unused indices are kept at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    /// Radial index.
    pub n: u32,
    /// Angular index (three-body models only).
    pub k: u32,
    /// Centre-of-mass index.
    #[serde(rename = "N")]
    pub big_n: u32,
    pub sector: Sector,
}

impl QuantumNumbers {
    pub fn radial(n: u32, sector: Sector) -> Self {
        QuantumNumbers {
            n,
            k: 0,
            big_n: 0,
            sector,
        }
    }

    pub fn three_body(n: u32, k: u32, sector: Sector) -> Self {
        QuantumNumbers { n, k, big_n: 0, sector }
    }

    pub fn centre_of_mass(big_n: u32) -> Self {
        QuantumNumbers {
            n: 0,
            k: 0,
            big_n,
            sector: Sector::Plus,
        }
    }
}

/// Whether a contour parametrizes a line (`x` real) or one period of the
/// hyperangle (`xi` in `(-pi, pi]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourDomain {
    Line,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourFamily {
    /// `x - i eps0`.
    ConstantShift,
    /// `x - i eps0 / (1 + x^2 / width^2)` on a line, `x - i eps0 (1 + cos x) / 2`
    /// on a period.
    Bump,
}

/// A complex integration path `x -> x - i eps(x)` with `eps` even in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub domain: ContourDomain,
    pub family: ContourFamily,
    pub eps0: f64,
    pub width: f64,
}

impl ContourSpec {
    pub fn new(domain_kind: ContourDomain, family: ContourFamily, eps0: f64, width: f64) -> Result<Self> {
        if !eps0.is_finite() || eps0 <= 0.0 {
            return Err(domain_error_eps(eps0));
        }
        if family == ContourFamily::Bump && domain_kind == ContourDomain::Line && !(width.is_finite() && width > 0.0) {
            return Err(domain(format!("bump width {width} must be positive")));
        }
        Ok(ContourSpec {
            domain: domain_kind,
            family,
            eps0,
            width,
        })
    }

    pub fn constant_shift(domain: ContourDomain, eps0: f64) -> Result<Self> {
        ContourSpec::new(domain, ContourFamily::ConstantShift, eps0, 1.0)
    }

    pub fn bump(domain: ContourDomain, eps0: f64, width: f64) -> Result<Self> {
        ContourSpec::new(domain, ContourFamily::Bump, eps0, width)
    }

    /// Imaginary depth `eps(x)` below the real axis.
    pub fn depth(&self, x: f64) -> f64 {
        match (self.family, self.domain) {
            (ContourFamily::ConstantShift, _) => self.eps0,
            (ContourFamily::Bump, ContourDomain::Line) => {
                let r = x / self.width;
                self.eps0 / (1.0 + r * r)
            }
            (ContourFamily::Bump, ContourDomain::Periodic) => 0.5 * self.eps0 * (1.0 + x.cos()),
        }
    }

    fn depth_slope(&self, x: f64) -> f64 {
        match (self.family, self.domain) {
            (ContourFamily::ConstantShift, _) => 0.0,
            (ContourFamily::Bump, ContourDomain::Line) => {
                let w2 = self.width * self.width;
                let d = 1.0 + x * x / w2;
                -2.0 * self.eps0 * x / (w2 * d * d)
            }
            (ContourFamily::Bump, ContourDomain::Periodic) => -0.5 * self.eps0 * x.sin(),
        }
    }

    /// Complex coordinate at parameter `x`; periodic contours accept only
    /// `x` in `(-pi, pi]`.
    pub fn point(&self, x: f64) -> Result<Complex64> {
        if self.domain == ContourDomain::Periodic && !(x > -PI && x <= PI) {
            return Err(domain(format!("periodic contour parameter {x} outside (-pi, pi]")));
        }
        Ok(self.point_extended(x))
    }

    /// Complex coordinate without the range check. On a periodic contour this is
    /// the periodic extension, `point(x + 2 pi) = point(x) + 2 pi`.
    pub fn point_extended(&self, x: f64) -> Complex64 {
        Complex64::new(x, -self.depth(x))
    }

    /// `d point / dx`.
    pub fn tangent(&self, x: f64) -> Complex64 {
        Complex64::new(1.0, -self.depth_slope(x))
    }
}

fn domain_error_eps(eps0: f64) -> Error {
    domain(format!("contour depth eps0 = {eps0} must be positive"))
}

/// Maximum over `grid` of `| -conj(point(x)) - point(-x) |`.
///
/// Periodic contours are additionally checked against the reflections about
/// `+pi/3` and `-pi/3`, which map `xi` to `2 pi/3 - xi` and `-2 pi/3 - xi`.
pub fn pt_reflection_defect(c: &ContourSpec, grid: &[f64]) -> f64 {
    let mut centres = vec![0.0];
    if c.domain == ContourDomain::Periodic {
        centres.push(PI / 3.0);
        centres.push(-PI / 3.0);
    }
    let mut worst: f64 = 0.0;
    for &x in grid {
        for &m in &centres {
            let image = Complex64::new(2.0 * m, 0.0) - c.point_extended(m + x).conj();
            let target = c.point_extended(m - x);
            worst = worst.max((image - target).norm());
        }
    }
    worst
}

/// Jacobi coordinates of two or three particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiCoordinates {
    /// Centre of mass `sum x_k / sqrt(A)`.
    pub r: f64,
    /// `(x1 - x2) / sqrt(2)`.
    pub x: f64,
    /// `(x1 + x2 - 2 x3) / sqrt(6)`, three particles only.
    pub y: Option<f64>,
}

pub fn jacobi_map(positions: &[f64]) -> Result<JacobiCoordinates> {
    match *positions {
        [x1, x2] => Ok(JacobiCoordinates {
            r: (x1 + x2) * FRAC_1_SQRT_2,
            x: (x1 - x2) * FRAC_1_SQRT_2,
            y: None,
        }),
        [x1, x2, x3] => Ok(JacobiCoordinates {
            r: (x1 + x2 + x3) / 3f64.sqrt(),
            x: (x1 - x2) * FRAC_1_SQRT_2,
            y: Some((x1 + x2 - 2.0 * x3) / 6f64.sqrt()),
        }),
        _ => Err(domain(format!(
            "Jacobi coordinates need 2 or 3 particles, got {}",
            positions.len()
        ))),
    }
}

/// Hyperradius and hyperangle with `X = rho sin(phi)`, `Y = rho cos(phi)`, so
/// `phi = 0` lies on the positive `Y` axis.
pub fn hyperspherical(x: f64, y: f64) -> Result<(f64, f64)> {
    let rho = x.hypot(y);
    if rho == 0.0 {
        return Err(domain("hyperradius vanishes at triple coincidence"));
    }
    Ok((rho, x.atan2(y)))
}

/// Pair separations `[x1 - x2, x2 - x3, x3 - x1]` rebuilt from `X` and `Y`.
pub fn pair_separations(x: f64, y: f64) -> [f64; 3] {
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    [s2 * x, 0.5 * (s6 * y - s2 * x), -0.5 * (s6 * y + s2 * x)]
}
