//! Closed-form eigenfunctions on complex contours, their ODE residuals and the
//! quasi-parity phases picked up under PT reflection.
//!
//! Every eigenfunction carries unit leading coefficient. Derivatives are
//! analytic: the power and Gaussian prefactors are handled through their
//! logarithmic derivatives and the polynomial factors through the Laguerre
//! and Gegenbauer derivative identities.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::TOLERANCES;
use crate::error::{domain, Result};
use crate::model::{ContourDomain, ContourSpec, CouplingParameters, ModelId, QuantumNumbers, Sector};
use crate::polyfun::{
    branched_power, gauss_2f1, gegenbauer_jet, gegenbauer_vanishes, laguerre_jet, HypergeometricParams,
};
use crate::spectra::{beta_angular, Level};

type C = Complex64;

/// One evaluation of an eigenfunction along a contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSample {
    pub parameter: f64,
    pub point: C,
    pub value: C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub model: ModelId,
    pub level: Level,
    /// `(parameter, |residual| / local scale)`.
    pub samples: Vec<(f64, f64)>,
    pub max_relative_residual: f64,
}

/// Exponent of the power prefactor: `ell + 1` or `-ell` on the line,
/// `1/2 +- alpha` for the angular functions.
pub fn power_exponent(model: ModelId, sector: Sector, cp: &CouplingParameters) -> Result<f64> {
    match (model, sector) {
        (ModelId::A2Radial, Sector::Plus) => Ok(cp.ell + 1.0),
        (ModelId::A2Radial, Sector::Minus) => Ok(-cp.ell),
        (ModelId::Toy3 | ModelId::Full3, s) => Ok(0.5 + s.sign() * cp.alpha),
        (m, _) => Err(domain(format!("no power prefactor for model {m}"))),
    }
}

/// `(value, d/dz, d2/dz2)` of `f(z) g(z)` given `f'/f`, its derivative and the
/// jet of `g`, all scaled by `f`.
fn product_jet(f: C, s: C, ds: C, g: [C; 3]) -> [C; 3] {
    [
        f * g[0],
        f * (s * g[0] + g[1]),
        f * ((s * s + ds) * g[0] + 2.0 * s * g[1] + g[2]),
    ]
}

fn a2_jet(qn: QuantumNumbers, cp: &CouplingParameters, x: C) -> Result<[C; 3]> {
    if x == C::new(0.0, 0.0) {
        return Err(domain(
            "two-body eigenfunction evaluated at the coincidence point X = 0",
        ));
    }
    let p = power_exponent(ModelId::A2Radial, qn.sector, cp)?;
    let w = cp.omega;
    let f = branched_power(x, p)? * (-0.25 * w * x * x).exp();
    let s = p / x - 0.5 * w * x;
    let ds = -p / (x * x) - 0.5 * w;
    let [l, dl, ddl] = laguerre_jet(qn.n, p - 0.5, 0.5 * w * x * x);
    let du = w * x;
    Ok(product_jet(f, s, ds, [l, dl * du, ddl * du * du + dl * w]))
}

/// Two-body relative wavefunction: `X^(ell+1) exp(-omega X^2/4)
/// L_n^(ell+1/2)(omega X^2/2)` in the `Plus` sector and `X^(-ell)
/// exp(-omega X^2/4) L_n^(-ell-1/2)(omega X^2/2)` in the `Minus` sector.
pub fn a2_wavefunction(qn: QuantumNumbers, cp: &CouplingParameters, x: C) -> Result<C> {
    Ok(a2_jet(qn, cp, x)?[0])
}

/// True when the Gegenbauer factor of this angular state vanishes identically
/// and is replaced by its normalized limit.
pub fn angular_is_regularized(k: u32, sector: Sector, cp: &CouplingParameters) -> bool {
    gegenbauer_vanishes(k, 0.5 + sector.sign() * cp.alpha).is_some()
}

fn chi_jet(k: u32, sector: Sector, cp: &CouplingParameters, phi: C) -> Result<[C; 3]> {
    let (sn, cs) = (phi.sin(), phi.cos());
    if sn == C::new(0.0, 0.0) {
        return Err(domain(format!(
            "angular function evaluated at a zero of sin, phi = {phi}"
        )));
    }
    let lambda = 0.5 + sector.sign() * cp.alpha;
    let f = branched_power(sn, lambda)?;
    let s = lambda * cs / sn;
    let ds = -lambda / (sn * sn);
    let q = gegenbauer_jet(k, lambda, cs);
    // chain rule through z = cos(phi)
    let g = [q.value, -sn * q.d1, sn * sn * q.d2 - cs * q.d1];
    Ok(product_jet(f, s, ds, g))
}

/// Toy angular function `(sin phi)^(1/2 +- alpha) C_k^(1/2 +- alpha)(cos phi)`.
pub fn toy_angular_chi(k: u32, sector: Sector, cp: &CouplingParameters, phi: C) -> Result<C> {
    Ok(chi_jet(k, sector, cp, phi)?[0])
}

/// Full three-body angular function `chi_k(3 phi)`.
pub fn full_angular_f(k: u32, sector: Sector, cp: &CouplingParameters, phi: C) -> Result<C> {
    toy_angular_chi(k, sector, cp, 3.0 * phi)
}

fn full_jet(k: u32, sector: Sector, cp: &CouplingParameters, phi: C) -> Result<[C; 3]> {
    let [v, d1, d2] = chi_jet(k, sector, cp, 3.0 * phi)?;
    Ok([v, 3.0 * d1, 9.0 * d2])
}

/// `sqrt(3/8) omega`, the oscillator scale of the hyperradial equation.
fn radial_scale(cp: &CouplingParameters) -> f64 {
    (3.0f64 / 8.0).sqrt() * cp.omega
}

fn radial_jet(qn: QuantumNumbers, cp: &CouplingParameters, model: ModelId, rho: C) -> Result<(f64, [C; 3])> {
    let beta = beta_angular(qn.k, qn.sector, cp, model)?;
    if rho == C::new(0.0, 0.0) {
        return Err(domain("hyperradial function evaluated at rho = 0"));
    }
    let kappa = radial_scale(cp);
    let f = branched_power(rho, beta)? * (-0.5 * kappa * rho * rho).exp();
    let s = beta / rho - kappa * rho;
    let ds = -beta / (rho * rho) - kappa;
    let [l, dl, ddl] = laguerre_jet(qn.n, beta, kappa * rho * rho);
    let du = 2.0 * kappa * rho;
    Ok((
        beta,
        product_jet(f, s, ds, [l, dl * du, ddl * du * du + dl * 2.0 * kappa]),
    ))
}

/// Hyperradial function `rho^beta exp(-sqrt(3/32) omega rho^2)
/// L_n^beta(sqrt(3/8) omega rho^2)`, with `beta` the angular parameter of the
/// model (`k +- alpha + 1/2` or three times that).
pub fn radial_psi(qn: QuantumNumbers, cp: &CouplingParameters, model: ModelId, rho: C) -> Result<C> {
    Ok(radial_jet(qn, cp, model, rho)?.1[0])
}

/// `1 / X^2` on a contour, together with its split into real bounded parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSquare {
    pub value: C,
    /// `[1/(x^2+e^2), -2e^2/(x^2+e^2)^2, 2ixe/(x^2+e^2)^2]` with `e = eps(x)`.
    pub terms: [C; 3],
}

impl InverseSquare {
    pub fn decomposed(&self) -> C {
        self.terms.iter().sum()
    }
}

/// Regularized inverse-square potential `1/X(x)^2`; bounded by `1/eps^2`.
pub fn regularized_inverse_square(x: f64, c: &ContourSpec) -> Result<InverseSquare> {
    let e = c.depth(x);
    let guard = TOLERANCES.singular_guard;
    if e.abs() < guard && x.abs() < guard {
        return Err(domain(format!("contour touches the singularity at x = {x}")));
    }
    let point = C::new(x, -e);
    let d = x * x + e * e;
    Ok(InverseSquare {
        value: 1.0 / (point * point),
        terms: [
            C::new(1.0 / d, 0.0),
            C::new(-2.0 * e * e / (d * d), 0.0),
            C::new(0.0, 2.0 * x * e / (d * d)),
        ],
    })
}

/// Potential of the equation solved by the model's eigenfunctions, in the
/// model's own coordinate.
pub fn potential(model: ModelId, cp: &CouplingParameters, z: C) -> Result<C> {
    let g = cp.g;
    match model {
        ModelId::A2Radial => Ok(0.25 * cp.omega * cp.omega * z * z + 0.5 * g / (z * z)),
        ModelId::Toy3 => {
            let s = z.sin();
            Ok(0.5 * g / (s * s))
        }
        ModelId::Full3 => {
            let s = (3.0 * z).sin();
            Ok(4.5 * g / (s * s))
        }
        m => Err(domain(format!("no separated equation on a contour for model {m}"))),
    }
}

/// Eigenfunction of `model` at complex coordinate `z` (`X` or `phi`).
pub fn eigenfunction(model: ModelId, qn: QuantumNumbers, cp: &CouplingParameters, z: C) -> Result<C> {
    Ok(eigenfunction_jet(model, qn, cp, z)?[0])
}

/// Value, first and second derivative of the eigenfunction at `z`.
pub fn eigenfunction_jet(model: ModelId, qn: QuantumNumbers, cp: &CouplingParameters, z: C) -> Result<[C; 3]> {
    match model {
        ModelId::A2Radial => a2_jet(qn, cp, z),
        ModelId::Toy3 => chi_jet(qn.k, qn.sector, cp, z),
        ModelId::Full3 => full_jet(qn.k, qn.sector, cp, z),
        m => Err(domain(format!("no contour eigenfunction for model {m}"))),
    }
}

/// Real abscissae where the model's potential is singular.
pub fn singular_abscissae(model: ModelId) -> Vec<f64> {
    match model {
        ModelId::A2Radial => vec![0.0],
        ModelId::Toy3 => vec![-PI, 0.0, PI],
        ModelId::Full3 => (-3..=3).map(|j| j as f64 * PI / 3.0).collect(),
        ModelId::CentreOfMass { .. } => Vec::new(),
    }
}

fn required_domain(model: ModelId) -> Result<ContourDomain> {
    match model {
        ModelId::A2Radial => Ok(ContourDomain::Line),
        ModelId::Toy3 | ModelId::Full3 => Ok(ContourDomain::Periodic),
        m => Err(domain(format!("no contour eigenfunction for model {m}"))),
    }
}

/// Contour point for `x`, refusing parameters inside the guard band of a
/// singular abscissa where the contour is within the band of the real axis.
fn guarded_point(model: ModelId, contour: &ContourSpec, x: f64) -> Result<C> {
    let guard = TOLERANCES.singular_guard;
    let p = contour.point(x)?;
    if p.im.abs() < guard && singular_abscissae(model).iter().any(|a| (x - a).abs() < guard) {
        return Err(domain(format!("parameter {x} lies inside the singular guard band")));
    }
    Ok(p)
}

fn check_setup(model: ModelId, level: &Level, contour: &ContourSpec) -> Result<()> {
    if level.model != model {
        return Err(domain(format!("level belongs to {}, not {model}", level.model)));
    }
    let want = required_domain(model)?;
    if contour.domain != want {
        return Err(domain(format!("model {model} needs a {want:?} contour")));
    }
    Ok(())
}

/// Samples the eigenfunction of `qn` along `contour`.
pub fn sample_contour(
    model: ModelId,
    qn: QuantumNumbers,
    cp: &CouplingParameters,
    contour: &ContourSpec,
    parameters: &[f64],
) -> Result<Vec<ContourSample>> {
    if contour.domain != required_domain(model)? {
        return Err(domain(format!(
            "model {model} cannot be sampled on a {:?} contour",
            contour.domain
        )));
    }
    parameters
        .iter()
        .map(|&x| {
            let point = guarded_point(model, contour, x)?;
            Ok(ContourSample {
                parameter: x,
                point,
                value: eigenfunction(model, qn, cp, point)?,
            })
        })
        .collect()
}

fn relative(r: C, terms: &[C]) -> f64 {
    let scale = terms.iter().map(|t| t.norm()).fold(f64::MIN_POSITIVE, f64::max);
    r.norm() / scale
}

fn report(model: ModelId, level: &Level, samples: Vec<(f64, f64)>) -> ResidualReport {
    let max_relative_residual = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    ResidualReport {
        model,
        level: *level,
        samples,
        max_relative_residual,
    }
}

/// Pointwise residual `-u'' + V u - lambda u` of the separated equation along
/// the contour, relative to `max(|u''|, |V u|, |lambda u|)`. The eigenvalue
/// `lambda` is `E` on the line and `beta^2` for the angular equations.
pub fn ode_residual(
    model: ModelId,
    level: &Level,
    cp: &CouplingParameters,
    contour: &ContourSpec,
    parameters: &[f64],
) -> Result<ResidualReport> {
    check_setup(model, level, contour)?;
    let lambda = match model {
        ModelId::A2Radial => level.energy,
        _ => {
            let b = level.beta.ok_or_else(|| domain("angular level without beta"))?;
            b * b
        }
    };
    let samples = parameters
        .iter()
        .map(|&x| {
            let z = guarded_point(model, contour, x)?;
            let [u, _, ddu] = eigenfunction_jet(model, level.qn, cp, z)?;
            let vu = potential(model, cp, z)? * u;
            let eu = lambda * u;
            Ok((x, relative(-ddu + vu - eu, &[ddu, vu, eu])))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report(model, level, samples))
}

/// Residual of the hyperradial equation
/// `-psi'' - psi'/rho + (beta^2/rho^2 + kappa^2 rho^2) psi = E psi`,
/// `kappa = sqrt(3/8) omega`, at the complex radii `rho`.
pub fn radial_residual(level: &Level, cp: &CouplingParameters, radii: &[C]) -> Result<ResidualReport> {
    if !level.model.is_angular() {
        return Err(domain(format!("model {} has no hyperradial equation", level.model)));
    }
    let kappa = radial_scale(cp);
    let samples = radii
        .iter()
        .map(|&rho| {
            let (beta, [u, du, ddu]) = radial_jet(level.qn, cp, level.model, rho)?;
            let first = du / rho;
            let vu = (beta * beta / (rho * rho) + kappa * kappa * rho * rho) * u;
            let eu = level.energy * u;
            Ok((rho.re, relative(-ddu - first + vu - eu, &[ddu, first, vu, eu])))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report(level.model, level, samples))
}

/// Reflection centres of the PT symmetry and the open range of offsets used
/// around each of them.
pub fn reflection_walls(model: ModelId) -> Result<(Vec<f64>, f64)> {
    match model {
        ModelId::A2Radial => Ok((vec![0.0], f64::INFINITY)),
        ModelId::Toy3 => Ok((vec![0.0, PI], PI)),
        ModelId::Full3 => Ok(((-2..=3).map(|j| j as f64 * PI / 3.0).collect(), PI / 3.0)),
        m => Err(domain(format!("no reflection walls for model {m}"))),
    }
}

/// Closed-form quasi-parity phase `exp(-i pi p)`, with `p` the power exponent.
pub fn quasi_parity_phase(model: ModelId, sector: Sector, cp: &CouplingParameters) -> Result<C> {
    let p = power_exponent(model, sector, cp)?;
    Ok(C::from_polar(1.0, -PI * p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiParity {
    /// Mean of `psi(point(m - x)) / conj(psi(point(m + x)))` over walls and offsets.
    pub mean: C,
    /// Largest distance of a single ratio from the mean.
    pub dispersion: f64,
    /// `| |mean| - 1 |`.
    pub modulus_defect: f64,
    /// [`quasi_parity_phase`] for comparison.
    pub expected: C,
}

/// Quasi-parity of an eigenfunction under the PT reflection of the contour.
///
/// For every reflection wall `m` and offset `x` the ratio
/// `psi(point(m - x)) / conj(psi(point(m + x)))` is formed; an exact PT
/// covariant eigenfunction gives the same unimodular number everywhere.
/// Offsets must be positive and smaller than the wall spacing limit (none on
/// the line, `pi` for the toy model, `pi/3` for the full model).
pub fn quasi_parity_ratio(
    model: ModelId,
    level: &Level,
    cp: &CouplingParameters,
    contour: &ContourSpec,
    offsets: &[f64],
) -> Result<QuasiParity> {
    check_setup(model, level, contour)?;
    let (walls, limit) = reflection_walls(model)?;
    if offsets.is_empty() {
        return Err(domain("quasi-parity needs at least one offset"));
    }
    if let Some(x) = offsets.iter().find(|&&x| !(x > 0.0 && x < limit)) {
        return Err(domain(format!("offset {x} outside (0, {limit})")));
    }
    let guard = TOLERANCES.singular_guard;
    let mut ratios = Vec::with_capacity(walls.len() * offsets.len());
    for &m in &walls {
        for &x in offsets {
            let (a, b) = (contour.point_extended(m - x), contour.point_extended(m + x));
            if (a.im.abs() < guard || b.im.abs() < guard) && x < guard {
                return Err(domain(format!("offset {x} lies inside the singular guard band")));
            }
            let num = eigenfunction(model, level.qn, cp, a)?;
            let den = eigenfunction(model, level.qn, cp, b)?.conj();
            ratios.push(num / den);
        }
    }
    let mean = ratios.iter().sum::<C>() / ratios.len() as f64;
    let dispersion = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max);
    Ok(QuasiParity {
        mean,
        dispersion,
        modulus_defect: (mean.norm() - 1.0).abs(),
        expected: quasi_parity_phase(model, level.qn.sector, cp)?,
    })
}

/// Toy angular function built from the Gauss series in `sin^2 phi`:
/// `(sin phi)^(1/2 +- alpha) 2F1(u, v; 1 +- alpha; sin^2 phi)` for even `k` and
/// the same with an extra `cos phi` and shifted `u + 1/2`, `v + 1/2` for odd `k`.
/// Differs from [`toy_angular_chi`] by a constant factor.
pub fn toy_angular_hypergeometric(k: u32, sector: Sector, cp: &CouplingParameters, phi: C) -> Result<C> {
    beta_angular(k, sector, cp, ModelId::Toy3)?;
    let sa = sector.sign() * cp.alpha;
    // with beta = k +- alpha + 1/2 the upper parameters are -floor(k/2) and
    // lambda + ceil(k/2), already shifted by 1/2 for odd k
    let u = -((k / 2) as f64);
    let v = 0.5 + sa + (k - k / 2) as f64;
    let c = 1.0 + sa;
    let sn = phi.sin();
    let prefactor = branched_power(sn, 0.5 + sa)?;
    let z = sn * sn;
    let series = gauss_2f1(&HypergeometricParams::real(u, v, c), z)?;
    if k.is_multiple_of(2) {
        Ok(prefactor * series)
    } else {
        Ok(phi.cos() * prefactor * series)
    }
}

/// Chebyshev nodes of the first kind on `(a, b)`, ascending. They cluster
/// towards the ends, where singular abscissae usually sit.
pub fn chebyshev_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    (0..n)
        .rev()
        .map(|j| mid + half * ((2 * j + 1) as f64 * PI / (2 * n) as f64).cos())
        .collect()
}

/// Default 50-point residual grid: `|x| <= 6/sqrt(omega)` on the line, one
/// full period on periodic contours.
pub fn default_grid(model: ModelId, cp: &CouplingParameters, points: usize) -> Result<Vec<f64>> {
    match required_domain(model)? {
        ContourDomain::Line => {
            let l = 6.0 / cp.omega.sqrt();
            Ok(chebyshev_grid(-l, l, points))
        }
        ContourDomain::Periodic => Ok(chebyshev_grid(-PI, PI, points)),
    }
}

/// Trapezoid integral of `|psi|^2 dx` along a line contour over `|x| <= l`.
pub fn line_norm(qn: QuantumNumbers, cp: &CouplingParameters, contour: &ContourSpec, l: f64, step: f64) -> Result<f64> {
    if contour.domain != ContourDomain::Line {
        return Err(domain("line_norm needs a line contour"));
    }
    let n = (2.0 * l / step).ceil() as usize;
    let h = 2.0 * l / n as f64;
    let mut sum = 0.0;
    for j in 0..=n {
        let x = -l + h * j as f64;
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        sum += w * a2_wavefunction(qn, cp, contour.point(x)?)?.norm_sqr();
    }
    Ok(sum * h)
}

/// Least-squares slope of `ln |chi(point(0))|` against `ln eps0` over bump
/// contours of depth `eps0`, for the lowest admissible toy state of `sector`.
pub fn small_eps_slope(sector: Sector, cp: &CouplingParameters, eps0: &[f64]) -> Result<f64> {
    if eps0.len() < 2 {
        return Err(domain("slope needs at least two contour depths"));
    }
    let k = (0..)
        .find(|&k| beta_angular(k, sector, cp, ModelId::Toy3).is_ok())
        .expect("beta grows without bound in k");
    let pts = eps0
        .iter()
        .map(|&e| {
            let c = ContourSpec::bump(ContourDomain::Periodic, e, 1.0)?;
            let chi = toy_angular_chi(k, sector, cp, c.point(0.0)?)?;
            Ok((e.ln(), chi.norm().ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}
