//! Numerical rediscovery of the spectra.
//!
//! The two-body equation is shot from both ends of a PT-symmetric line
//! contour towards the middle and matched through a Wronskian. The angular
//! equations are integrated over one period of a shifted circle, and levels
//! are read off the monodromy matrix against the quasi-periodicity phase of
//! the sector. Roots are bracketed on a real scan, refined by bisection and
//! then continued into the complex plane by a secant iteration to measure how
//! far they sit from the real axis.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use log::{debug, warn};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::TOLERANCES;
use crate::error::{domain, Error, Result};
use crate::model::{ContourDomain, ContourFamily, ContourSpec, CouplingParameters, ModelId, QuantumNumbers, Sector};
use crate::ode::LinearPath;
use crate::polyfun::gegenbauer_jet;
use crate::spectra::{beta_angular, enumerate_levels, level, Level};
use crate::wavefun::{potential, power_exponent};

type C = Complex64;

pub const DEFAULT_SHOOT_STEPS: usize = 8000;
pub const DEFAULT_MONODROMY_STEPS: usize = 24000;
/// Spacing of the real scan in `beta` for the angular problems.
pub const MONODROMY_SCAN_STEP: f64 = 0.02;
/// A no-sign-change minimum counts as a double root when it is this much
/// deeper than its scan neighbours.
const DEPTH_RATIO: f64 = 1e-6;
/// Simple roots closer than this are merged into one double root.
const MERGE_DISTANCE: f64 = 1e-4;

/// One numerically located eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoundEigenvalue {
    /// Energy for the two-body problem, `beta` for the angular problems.
    pub eigenvalue: f64,
    /// `|Im|` of the root after continuation into the complex plane.
    pub imag_defect: f64,
    pub multiplicity: u32,
    pub matched: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSettings {
    pub method: String,
    pub contour: ContourSpec,
    /// Half-length `L` of the shooting interval.
    pub truncation: Option<f64>,
    /// Integration steps per path.
    pub steps: usize,
    pub step: f64,
    pub window: (f64, f64),
    pub scan_step: f64,
    pub tolerance: f64,
    /// Quasi-periodicity phase used for the angular problems.
    pub theta: Option<f64>,
    /// Largest `|det M - 1|` met during the run.
    pub max_det_defect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub model: ModelId,
    pub settings: OracleSettings,
    pub found: Vec<FoundEigenvalue>,
    pub missed: Vec<Level>,
    pub max_abs_error: f64,
    pub pass: bool,
}

impl OracleReport {
    /// Found eigenvalues that no closed-form level claimed.
    pub fn unmatched(&self) -> impl Iterator<Item = &FoundEigenvalue> {
        self.found.iter().filter(|f| f.matched.is_empty())
    }

    pub fn max_imag_defect(&self) -> f64 {
        self.found.iter().map(|f| f.imag_defect).fold(0.0, f64::max)
    }
}

// ----------------------------------------------------------------------------
// root finding

#[derive(Debug, Clone, Copy, PartialEq)]
struct RealRoot {
    x: f64,
    multiplicity: u32,
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || (b - a) <= 1e-14 * m.abs().max(1.0) {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Stationary point of `f` inside `[a, b]`, bisected on a central difference.
fn stationary<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<f64> {
    let h = 1e-4 * (b - a);
    let d = |x: f64| -> Result<f64> { Ok(f(x + h)? - f(x - h)?) };
    let (da, db) = (d(a)?, d(b)?);
    if (da < 0.0) == (db < 0.0) {
        return Ok(0.5 * (a + b));
    }
    bisect(&d, a, b, da)
}

/// Real roots of `f` on `grid`: sign changes, exact zeros and touching
/// minima. Evaluates the scan in parallel, then refines each candidate.
fn scan_roots<F>(f: &F, grid: &[f64]) -> Result<Vec<RealRoot>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let vals: Vec<f64> = grid.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
    #[derive(Clone, Copy)]
    enum Candidate {
        Exact(usize, u32),
        Bracket(usize),
        Touch(usize),
    }
    let n = vals.len();
    let mut cands = Vec::new();
    for i in 0..n {
        let v = vals[i];
        if v == 0.0 {
            let twofold = i > 0 && i + 1 < n && vals[i - 1] * vals[i + 1] > 0.0;
            cands.push(Candidate::Exact(i, if twofold { 2 } else { 1 }));
            continue;
        }
        if i + 1 < n && v * vals[i + 1] < 0.0 {
            cands.push(Candidate::Bracket(i));
        }
        if i > 0 && i + 1 < n {
            let (l, r) = (vals[i - 1], vals[i + 1]);
            if l * v > 0.0 && v * r > 0.0 && v.abs() <= l.abs() && v.abs() <= r.abs() {
                cands.push(Candidate::Touch(i));
            }
        }
    }
    let found: Vec<Vec<RealRoot>> = cands
        .par_iter()
        .map(|&c| -> Result<Vec<RealRoot>> {
            match c {
                Candidate::Exact(i, m) => Ok(vec![RealRoot {
                    x: grid[i],
                    multiplicity: m,
                }]),
                Candidate::Bracket(i) => Ok(vec![RealRoot {
                    x: bisect(f, grid[i], grid[i + 1], vals[i])?,
                    multiplicity: 1,
                }]),
                Candidate::Touch(i) => {
                    let (l, v, r) = (vals[i - 1], vals[i], vals[i + 1]);
                    let xs = stationary(f, grid[i - 1], grid[i + 1])?;
                    let fs = f(xs)?;
                    if fs * v < 0.0 {
                        Ok(vec![
                            RealRoot {
                                x: bisect(f, grid[i - 1], xs, l)?,
                                multiplicity: 1,
                            },
                            RealRoot {
                                x: bisect(f, xs, grid[i + 1], fs)?,
                                multiplicity: 1,
                            },
                        ])
                    } else if fs.abs() <= DEPTH_RATIO * l.abs().max(r.abs()) {
                        Ok(vec![RealRoot { x: xs, multiplicity: 2 }])
                    } else {
                        Ok(Vec::new())
                    }
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut roots: Vec<RealRoot> = found.into_iter().flatten().collect();
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut merged: Vec<RealRoot> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last_mut() {
            Some(last) if (r.x - last.x).abs() < MERGE_DISTANCE => {
                if last.multiplicity == 1 && r.multiplicity == 1 {
                    *last = RealRoot {
                        x: 0.5 * (last.x + r.x),
                        multiplicity: 2,
                    };
                } else {
                    // the same root reached twice, e.g. a bracket next to a touch
                    last.multiplicity = last.multiplicity.max(r.multiplicity);
                }
            }
            _ => merged.push(r),
        }
    }
    Ok(merged)
}

/// Secant iteration for a root of the analytic `f`, started on the real axis
/// at `x0` with a complex second point.
fn complex_secant<F: Fn(C) -> Result<C>>(f: &F, x0: f64, h: f64) -> Result<C> {
    let mut z0 = C::new(x0, 0.0);
    let mut z1 = C::new(x0 + h, 0.5 * h);
    let mut f0 = f(z0)?;
    let mut f1 = f(z1)?;
    for _ in 0..50 {
        let d = f1 - f0;
        if d.norm() == 0.0 || f1.norm() == 0.0 {
            break;
        }
        let z2 = z1 - f1 * (z1 - z0) / d;
        if !(z2.re.is_finite() && z2.im.is_finite()) {
            break;
        }
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f(z1)?;
        if (z1 - z0).norm() <= 1e-14 * z1.norm().max(1.0) {
            break;
        }
    }
    Ok(z1)
}

/// Continues a real root into the complex plane: on `f` for simple roots, on
/// its derivative for double roots.
fn refine_complex<F>(f: &F, root: RealRoot) -> Result<FoundEigenvalue>
where
    F: Fn(C) -> Result<C>,
{
    let h = 1e-6 * root.x.abs().max(1.0);
    let z = if root.multiplicity == 1 {
        complex_secant(f, root.x, h)?
    } else {
        let dh = 1e-5 * root.x.abs().max(1.0);
        let df = |z: C| -> Result<C> { Ok((f(z + dh)? - f(z - dh)?) / (2.0 * dh)) };
        complex_secant(&df, root.x, h)?
    };
    let (eigenvalue, imag_defect) = if (z - root.x).norm() <= 1e-3 {
        (z.re, z.im.abs())
    } else {
        warn!(
            "complex refinement of {} wandered to {z}; keeping the real root",
            root.x
        );
        (root.x, z.im.abs())
    };
    Ok(FoundEigenvalue {
        eigenvalue,
        imag_defect,
        multiplicity: root.multiplicity,
        matched: Vec::new(),
    })
}

fn scan_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / n as f64
            }
        })
        .collect()
}

// ----------------------------------------------------------------------------
// comparison

/// The quantity compared against numerics: energy on the line, `beta` for the
/// angular problems.
pub fn compared_value(l: &Level) -> f64 {
    if l.model.is_angular() {
        l.beta.unwrap_or(f64::NAN)
    } else {
        l.energy
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub level: Level,
    pub analytic: f64,
    pub numeric: Option<f64>,
    pub abs_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub pass: bool,
    pub rows: Vec<ComparisonRow>,
    pub missed: Vec<Level>,
    pub max_abs_error: f64,
    /// Found eigenvalues whose imaginary defect exceeds the tolerance.
    pub reality_violations: Vec<FoundEigenvalue>,
    pub notes: Vec<String>,
}

/// Greedy nearest matching of `analytic` against `found`, each found root
/// absorbing up to its multiplicity. Writes the matches into `found`.
fn match_levels(analytic: &[Level], found: &mut [FoundEigenvalue], tol: f64) -> Vec<Option<usize>> {
    let mut pairs = Vec::new();
    for (i, l) in analytic.iter().enumerate() {
        let a = compared_value(l);
        for (j, f) in found.iter().enumerate() {
            let d = (f.eigenvalue - a).abs();
            if d <= tol {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut assigned = vec![None; analytic.len()];
    let mut load = vec![0u32; found.len()];
    for f in found.iter_mut() {
        f.matched.clear();
    }
    for (_, i, j) in pairs {
        if assigned[i].is_none() && load[j] < found[j].multiplicity {
            assigned[i] = Some(j);
            load[j] += 1;
            found[j].matched.push(analytic[i]);
        }
    }
    assigned
}

/// Compares closed-form levels with an oracle run. Passes iff every analytic
/// level is matched within `tol` and every numeric eigenvalue has
/// `imag_defect < tol`.
pub fn compare_report(analytic: &[Level], numeric: &OracleReport, tol: f64) -> Comparison {
    let mut found = numeric.found.clone();
    let assigned = match_levels(analytic, &mut found, tol);
    let mut rows = Vec::with_capacity(analytic.len());
    let mut missed = Vec::new();
    let mut max_abs_error: f64 = 0.0;
    for (l, a) in analytic.iter().zip(&assigned) {
        let analytic_value = compared_value(l);
        let numeric_value = a.map(|j| found[j].eigenvalue);
        let abs_error = numeric_value.map(|v| (v - analytic_value).abs());
        if let Some(e) = abs_error {
            max_abs_error = max_abs_error.max(e);
        } else {
            missed.push(*l);
        }
        rows.push(ComparisonRow {
            level: *l,
            analytic: analytic_value,
            numeric: numeric_value,
            abs_error,
        });
    }
    let reality_violations: Vec<FoundEigenvalue> = found.iter().filter(|f| !(f.imag_defect < tol)).cloned().collect();
    let mut notes = Vec::new();
    for m in &missed {
        notes.push(format!("no numeric eigenvalue within {tol:e} of {}", compared_value(m)));
    }
    for v in &reality_violations {
        notes.push(format!(
            "reality violated at tolerance: eigenvalue {} has imaginary defect {:e}",
            v.eigenvalue, v.imag_defect
        ));
    }
    Comparison {
        pass: missed.is_empty() && reality_violations.is_empty(),
        rows,
        missed,
        max_abs_error,
        reality_violations,
        notes,
    }
}

fn finish(
    model: ModelId,
    settings: OracleSettings,
    mut found: Vec<FoundEigenvalue>,
    analytic: &[Level],
) -> OracleReport {
    let tol = settings.tolerance;
    match_levels(analytic, &mut found, tol);
    let mut report = OracleReport {
        model,
        settings,
        found,
        missed: Vec::new(),
        max_abs_error: 0.0,
        pass: false,
    };
    let cmp = compare_report(analytic, &report, tol);
    report.missed = cmp.missed;
    report.max_abs_error = cmp.max_abs_error;
    report.pass = cmp.pass;
    for n in &cmp.notes {
        debug!("{model}: {n}");
    }
    report
}

// ----------------------------------------------------------------------------
// two-body shooting

/// Smallest half-length meeting the decay requirement `omega L^2/4 >= e_max + 10`,
/// and never below `10/sqrt(omega)`.
pub fn default_length(omega: f64, e_max: f64) -> f64 {
    (10.0 / omega.sqrt()).max((4.0 * (e_max + 10.0) / omega).sqrt())
}

/// Default shooting window: from one unit below the lowest level to `e_max`.
pub fn default_energy_window(cp: &CouplingParameters, e_max: f64) -> (f64, f64) {
    let lowest = Sector::BOTH
        .iter()
        .map(|&s| crate::spectra::a2_energy(QuantumNumbers::radial(0, s), cp).energy)
        .fold(f64::INFINITY, f64::min);
    (lowest.min(e_max) - 1.0, e_max)
}

struct Shooter {
    left: LinearPath,
    right: LinearPath,
    seed_left: [C; 2],
    seed_right: [C; 2],
}

impl Shooter {
    fn new(cp: &CouplingParameters, contour: &ContourSpec, length: f64, steps: usize) -> Result<Self> {
        let (w, g) = (cp.omega, cp.g);
        let coeffs = |x: f64| {
            let z = contour.point_extended(x);
            (contour.tangent(x), 0.25 * w * w * z * z + 0.5 * g / (z * z))
        };
        let seed = |x: f64| -> Result<[C; 2]> {
            let z = contour.point_extended(x);
            let y = (-0.25 * w * z * z).exp();
            if !(y.norm() >= 1e-290) {
                return Err(Error::Truncation { length });
            }
            Ok([y, -0.5 * w * z * y])
        };
        Ok(Shooter {
            left: LinearPath::sample(-length, 0.0, steps, coeffs),
            right: LinearPath::sample(length, 0.0, steps, coeffs),
            seed_left: seed(-length)?,
            seed_right: seed(length)?,
        })
    }

    /// Raw Wronskian of the two decaying solutions at `x = 0` and the sum of
    /// magnitudes that fixes its scale.
    fn wronskian(&self, e: C) -> (C, f64) {
        let [yl, zl] = self.left.propagate(self.seed_left, e);
        let [yr, zr] = self.right.propagate(self.seed_right, e);
        (yl * zr - yr * zl, yl.norm() * zr.norm() + yr.norm() * zl.norm())
    }

    fn scan_value(&self, e: f64) -> f64 {
        let (w, scale) = self.wronskian(C::new(e, 0.0));
        w.re / scale
    }
}

/// Shooting oracle for the two-body relative equation with default step count.
pub fn shoot_a2(
    cp: &CouplingParameters,
    contour: &ContourSpec,
    e_window: (f64, f64),
    length: f64,
    tol: f64,
) -> Result<OracleReport> {
    shoot_a2_with_steps(cp, contour, e_window, length, tol, DEFAULT_SHOOT_STEPS)
}

/// Integrates `-psi'' + (omega^2 X^2/4 + g/(2X^2)) psi = E psi` along the line
/// contour from `-L` and `+L` to the middle, scans the phase-fixed Wronskian
/// over `e_window` in steps of `omega/8`, and matches the zeros against the
/// closed-form levels in the window.
pub fn shoot_a2_with_steps(
    cp: &CouplingParameters,
    contour: &ContourSpec,
    e_window: (f64, f64),
    length: f64,
    tol: f64,
    steps: usize,
) -> Result<OracleReport> {
    if contour.domain != ContourDomain::Line {
        return Err(domain("shooting needs a line contour"));
    }
    if !(tol >= 1e-8) {
        return Err(domain(format!("shooting tolerance {tol:e} below 1e-8")));
    }
    let (lo, hi) = e_window;
    if !(lo < hi) {
        return Err(domain(format!("empty energy window ({lo}, {hi})")));
    }
    if !(0.25 * cp.omega * length * length >= hi + 10.0) {
        return Err(domain(format!(
            "truncation L = {length} too short for energies up to {hi}"
        )));
    }
    if steps == 0 {
        return Err(domain("shooting needs at least one step"));
    }
    let shooter = Shooter::new(cp, contour, length, steps)?;
    let scan_step = (cp.omega / 8.0).min((hi - lo) / 16.0);
    let grid = scan_grid(lo, hi, scan_step);
    let roots = scan_roots(&|e| Ok(shooter.scan_value(e)), &grid)?;
    let raw = |e: C| -> Result<C> { Ok(shooter.wronskian(e).0) };
    let found = roots
        .par_iter()
        .map(|&r| refine_complex(&raw, r))
        .collect::<Result<Vec<_>>>()?;
    let analytic: Vec<Level> = enumerate_levels(ModelId::A2Radial, cp, hi)
        .into_iter()
        .filter(|l| l.energy >= lo)
        .collect();
    let settings = OracleSettings {
        method: "shooting".into(),
        contour: *contour,
        truncation: Some(length),
        steps,
        step: length / steps as f64,
        window: e_window,
        scan_step,
        tolerance: tol,
        theta: None,
        max_det_defect: None,
    };
    Ok(finish(ModelId::A2Radial, settings, found, &analytic))
}

// ----------------------------------------------------------------------------
// angular monodromy

/// Quasi-periodicity phase of one statistics sector:
/// `u(end) = exp(i theta) u(start)` over a full period of the contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromySector {
    pub model: ModelId,
    pub sector: Sector,
    pub theta: f64,
    pub k_ref: u32,
    /// `| |u(end)/u(start)| - 1 |`.
    pub modulus_defect: f64,
}

fn check_periodic(model: ModelId, contour: &ContourSpec) -> Result<()> {
    if !model.is_angular() {
        return Err(domain(format!("model {model} has no angular equation")));
    }
    if contour.domain != ContourDomain::Periodic {
        return Err(domain("angular problems need a periodic contour"));
    }
    if contour.family != ContourFamily::ConstantShift {
        return Err(domain(
            "the bump contour touches the real axis at xi = pi; use a constant shift",
        ));
    }
    Ok(())
}

fn angle_multiplier(model: ModelId) -> f64 {
    if model == ModelId::Full3 {
        3.0
    } else {
        1.0
    }
}

/// Continues the closed-form angular function of `(k_ref, sector)` from
/// `xi = -pi` to `xi = pi`, accumulating the argument of the `sin` factor
/// along the way, and returns the phase of `u(end)/u(start)`.
pub fn measure_theta(
    model: ModelId,
    sector: Sector,
    cp_ref: &CouplingParameters,
    k_ref: u32,
    contour: &ContourSpec,
) -> Result<MonodromySector> {
    check_periodic(model, contour)?;
    beta_angular(k_ref, sector, cp_ref, model)?;
    let m = angle_multiplier(model);
    let p = power_exponent(model, sector, cp_ref)?;
    let arg_at = |xi: f64| (m * contour.point_extended(xi)).sin();
    let steps = 4096 * m as usize;
    let mut prev = arg_at(-PI);
    let mut winding = 0.0;
    for j in 1..=steps {
        let xi = -PI + 2.0 * PI * j as f64 / steps as f64;
        let cur = arg_at(xi);
        // each step turns the argument by far less than pi
        winding += (cur / prev).arg();
        prev = cur;
    }
    let (s0, s1) = (arg_at(-PI), arg_at(PI));
    let (c0, c1) = (
        (m * contour.point_extended(-PI)).cos(),
        (m * contour.point_extended(PI)).cos(),
    );
    let q0 = gegenbauer_jet(k_ref, p, c0).value;
    let q1 = gegenbauer_jet(k_ref, p, c1).value;
    let ratio = (s1.norm() / s0.norm()).powf(p) * C::from_polar(1.0, p * winding) * q1 / q0;
    let modulus_defect = (ratio.norm() - 1.0).abs();
    if !(modulus_defect <= 1e-10) {
        return Err(domain(format!(
            "continued angular function changes modulus by {modulus_defect:e}"
        )));
    }
    Ok(MonodromySector {
        model,
        sector,
        theta: ratio.arg(),
        k_ref,
        modulus_defect,
    })
}

/// Smallest `k` with an admissible angular state in `sector`.
pub fn lowest_admissible_k(model: ModelId, sector: Sector, cp: &CouplingParameters) -> Result<u32> {
    (0..64)
        .find(|&k| beta_angular(k, sector, cp, model).is_ok())
        .ok_or_else(|| domain("no admissible angular state below k = 64"))
}

/// Closed-form angular levels (`n = 0`) of `sector` with `beta` in `window`.
pub fn angular_levels_in_window(
    model: ModelId,
    sector: Sector,
    cp: &CouplingParameters,
    window: (f64, f64),
) -> Vec<Level> {
    let mut out = Vec::new();
    for k in 0.. {
        match level(model, QuantumNumbers::three_body(0, k, sector), cp) {
            Ok(l) => {
                let b = l.beta.unwrap_or(f64::NAN);
                if b > window.1 {
                    break;
                }
                if b >= window.0 {
                    out.push(l);
                }
            }
            Err(_) if k < 64 => continue,
            Err(_) => break,
        }
    }
    out
}

/// Window in `beta` covering the admissible states of `sector` up to `kmax`.
pub fn default_beta_window(model: ModelId, sector: Sector, cp: &CouplingParameters, kmax: u32) -> Result<(f64, f64)> {
    let k0 = lowest_admissible_k(model, sector, cp)?;
    let lo = beta_angular(k0, sector, cp, model)?;
    let hi = beta_angular(kmax.max(k0), sector, cp, model)?;
    Ok(((lo - 0.3).max(0.05), hi + 0.3))
}

struct Monodromy {
    path: LinearPath,
    mu: C,
    det_defect_bits: AtomicU64,
}

impl Monodromy {
    fn new(model: ModelId, cp: &CouplingParameters, contour: &ContourSpec, theta: f64, steps: usize) -> Self {
        let path = LinearPath::sample(-PI, PI, steps, |xi| {
            let phi = contour.point_extended(xi);
            let v = potential(model, cp, phi).expect("angular model checked");
            (contour.tangent(xi), v)
        });
        Monodromy {
            path,
            mu: C::from_polar(1.0, theta),
            det_defect_bits: AtomicU64::new(0),
        }
    }

    /// Monodromy matrix at spectral parameter `beta`; columns propagate
    /// `(1, 0)` and `(0, 1)`.
    fn matrix(&self, beta: C) -> Result<[[C; 2]; 2]> {
        let e = beta * beta;
        let a = self.path.propagate([C::new(1.0, 0.0), C::new(0.0, 0.0)], e);
        let b = self.path.propagate([C::new(0.0, 0.0), C::new(1.0, 0.0)], e);
        let det = a[0] * b[1] - b[0] * a[1];
        let defect = (det - 1.0).norm();
        // nonnegative floats order like their bit patterns
        self.det_defect_bits
            .fetch_max(defect.to_bits(), AtomicOrdering::Relaxed);
        if !(defect <= TOLERANCES.monodromy_det) {
            return Err(Error::Conditioning { defect });
        }
        Ok([[a[0], b[0]], [a[1], b[1]]])
    }

    /// `det(M - mu) / mu`.
    fn characteristic(&self, beta: C) -> Result<C> {
        let m = self.matrix(beta)?;
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        Ok(self.mu - tr + det / self.mu)
    }

    fn max_det_defect(&self) -> f64 {
        f64::from_bits(self.det_defect_bits.load(AtomicOrdering::Relaxed))
    }
}

/// Trace of the monodromy matrix at real `beta`, for diagnostics.
pub fn monodromy_trace(
    model: ModelId,
    cp: &CouplingParameters,
    contour: &ContourSpec,
    beta: f64,
    steps: usize,
) -> Result<(C, f64)> {
    check_periodic(model, contour)?;
    let m = Monodromy::new(model, cp, contour, 0.0, steps);
    let mat = m.matrix(C::new(beta, 0.0))?;
    Ok((mat[0][0] + mat[1][1], m.max_det_defect()))
}

/// Monodromy oracle with the default step count.
pub fn monodromy_angular(
    model: ModelId,
    sector: Sector,
    cp: &CouplingParameters,
    contour: &ContourSpec,
    beta_window: (f64, f64),
    tol: f64,
) -> Result<OracleReport> {
    monodromy_angular_with_steps(model, sector, cp, contour, beta_window, tol, DEFAULT_MONODROMY_STEPS)
}

/// Integrates `-u'' + V u = beta^2 u` over one period of the shifted circle
/// for a scan of `beta` in `beta_window`, solves
/// `det(M(beta) - exp(i theta)) = 0` with `theta` measured from the closed
/// form of the sector, and matches the roots against `beta_angular`.
///
/// The condition also admits Floquet solutions of the other sector and, for
/// the full model, solutions without the six-wall structure. Those roots are
/// kept in the report with no matching level.
pub fn monodromy_angular_with_steps(
    model: ModelId,
    sector: Sector,
    cp: &CouplingParameters,
    contour: &ContourSpec,
    beta_window: (f64, f64),
    tol: f64,
    steps: usize,
) -> Result<OracleReport> {
    check_periodic(model, contour)?;
    let (lo, hi) = beta_window;
    if !(lo < hi) {
        return Err(domain(format!("empty beta window ({lo}, {hi})")));
    }
    if steps == 0 {
        return Err(domain("monodromy needs at least one step"));
    }
    let k_ref = lowest_admissible_k(model, sector, cp)?;
    let theta = measure_theta(model, sector, cp, k_ref, contour)?.theta;
    let mono = Monodromy::new(model, cp, contour, theta, steps);
    let grid = scan_grid(lo, hi, MONODROMY_SCAN_STEP);
    let roots = scan_roots(&|b| Ok(mono.characteristic(C::new(b, 0.0))?.re), &grid)?;
    let raw = |b: C| mono.characteristic(b);
    let found = roots
        .par_iter()
        .map(|&r| refine_complex(&raw, r))
        .collect::<Result<Vec<_>>>()?;
    let analytic = angular_levels_in_window(model, sector, cp, beta_window);
    let settings = OracleSettings {
        method: "monodromy".into(),
        contour: *contour,
        truncation: None,
        steps,
        step: 2.0 * PI / steps as f64,
        window: beta_window,
        scan_step: MONODROMY_SCAN_STEP,
        tolerance: tol,
        theta: Some(theta),
        max_det_defect: Some(mono.max_det_defect()),
    };
    Ok(finish(model, settings, found, &analytic))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(g: f64, omega: f64) -> CouplingParameters {
        CouplingParameters::new(g, omega).unwrap()
    }

    fn line(eps0: f64) -> ContourSpec {
        ContourSpec::constant_shift(ContourDomain::Line, eps0).unwrap()
    }

    fn ring(eps0: f64) -> ContourSpec {
        ContourSpec::constant_shift(ContourDomain::Periodic, eps0).unwrap()
    }

    fn eigenvalues(r: &OracleReport) -> Vec<f64> {
        r.found.iter().map(|f| f.eigenvalue).collect()
    }

    #[test]
    fn scan_finds_simple_and_touching_roots() {
        let f = |x: f64| Ok((x - 1.0) * (x - 2.5).powi(2) * (x - 4.0));
        let roots = scan_roots(&f, &scan_grid(0.0, 5.0, 0.3)).unwrap();
        let xs: Vec<(f64, u32)> = roots.iter().map(|r| (r.x, r.multiplicity)).collect();
        assert_eq!(xs.len(), 3);
        assert!((xs[0].0 - 1.0).abs() < 1e-12 && xs[0].1 == 1);
        assert!((xs[1].0 - 2.5).abs() < 1e-8 && xs[1].1 == 2);
        assert!((xs[2].0 - 4.0).abs() < 1e-12 && xs[2].1 == 1);
    }

    #[test]
    fn scan_merges_split_double_roots() {
        let f = |x: f64| Ok((x - 2.0).powi(2) - 1e-12);
        let roots = scan_roots(&f, &scan_grid(0.0, 5.0, 0.3)).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 2);
        assert!((roots[0].x - 2.0).abs() < 1e-5);
    }

    #[test]
    fn secant_measures_distance_from_real_axis() {
        let f = |z: C| Ok((z - C::new(1.5, 1e-3)) * (z + 3.0));
        let z = complex_secant(&f, 1.5, 1e-6).unwrap();
        assert!((z - C::new(1.5, 1e-3)).norm() < 1e-12);
    }

    fn levels_for(model: ModelId, vals: &[(u32, u32, Sector)], q: &CouplingParameters) -> Vec<Level> {
        vals.iter()
            .map(|&(n, k, s)| level(model, QuantumNumbers::three_body(n, k, s), q).unwrap())
            .collect()
    }

    fn fake_report(found: Vec<(f64, f64)>, tol: f64) -> OracleReport {
        OracleReport {
            model: ModelId::A2Radial,
            settings: OracleSettings {
                method: "test".into(),
                contour: line(0.5),
                truncation: None,
                steps: 0,
                step: 0.0,
                window: (0.0, 1.0),
                scan_step: 0.0,
                tolerance: tol,
                theta: None,
                max_det_defect: None,
            },
            found: found
                .into_iter()
                .map(|(e, im)| FoundEigenvalue {
                    eigenvalue: e,
                    imag_defect: im,
                    multiplicity: 1,
                    matched: vec![],
                })
                .collect(),
            missed: vec![],
            max_abs_error: 0.0,
            pass: false,
        }
    }

    #[test]
    fn compare_examples() {
        let q = cp(0.0, 2.0);
        let analytic = levels_for(
            ModelId::A2Radial,
            &[(0, 0, Sector::Minus), (0, 0, Sector::Plus), (1, 0, Sector::Minus)],
            &q,
        );
        let c = compare_report(
            &analytic,
            &fake_report(vec![(1.0, 0.0), (3.0, 0.0), (5.0, 0.0)], 1e-5),
            1e-5,
        );
        assert!(c.pass);
        assert_eq!(c.max_abs_error, 0.0);
        let c = compare_report(&analytic, &fake_report(vec![(1.0, 0.0), (5.0, 0.0)], 1e-5), 1e-5);
        assert!(!c.pass);
        assert_eq!(c.missed, vec![analytic[1]]);
        let c = compare_report(
            &analytic,
            &fake_report(vec![(1.0, 0.0), (3.0, 1e-3), (5.0, 0.0)], 1e-5),
            1e-5,
        );
        assert!(!c.pass);
        assert!(c.notes.iter().any(|n| n.contains("reality violated at tolerance")));
    }

    #[test]
    fn shooting_harmonic_oscillator() {
        let q = cp(0.0, 2.0);
        let r = shoot_a2(&q, &line(0.5), (0.0, 8.0), default_length(2.0, 8.0), 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        let e = eigenvalues(&r);
        assert_eq!(e.len(), 4);
        for (a, b) in e.iter().zip([1.0, 3.0, 5.0, 7.0]) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn shooting_finds_both_hierarchies() {
        let q = cp(2.0, 2.0);
        let win = default_energy_window(&q, 10.0);
        let r = shoot_a2(&q, &line(0.5), win, default_length(2.0, 10.0), 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.unmatched().count(), 0);
        assert!(r
            .found
            .iter()
            .any(|f| f.matched.iter().any(|l| l.qn.sector == Sector::Minus)));
        assert!(r.max_imag_defect() < 1e-6);
    }

    #[test]
    fn shooting_resolves_crossing_as_double_root() {
        let q = cp(1.5, 2.0);
        let r = shoot_a2(&q, &line(0.5), (3.9, 4.1), default_length(2.0, 4.1), 1e-5).unwrap();
        let total: u32 = r.found.iter().map(|f| f.multiplicity).sum();
        assert_eq!(total, 2, "{r:?}");
        assert!(r.found.iter().all(|f| (f.eigenvalue - 4.0).abs() < 1e-4));
        assert!(r.pass);
    }

    #[test]
    fn shooting_is_contour_independent() {
        let q = cp(0.3, 2.0);
        let runs: Vec<Vec<f64>> = [0.3, 0.5, 0.8]
            .iter()
            .map(|&e| eigenvalues(&shoot_a2(&q, &line(e), (-0.5, 10.0), default_length(2.0, 10.0), 1e-5).unwrap()))
            .collect();
        for r in &runs[1..] {
            assert_eq!(r.len(), runs[0].len());
            for (a, b) in r.iter().zip(&runs[0]) {
                assert!((a - b).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn shooting_step_halving_gate() {
        let q = cp(4.0, 2.0);
        let tol = 1e-5;
        let win = default_energy_window(&q, 12.0);
        let len = default_length(2.0, 12.0);
        let a = shoot_a2_with_steps(&q, &line(0.5), win, len, tol, DEFAULT_SHOOT_STEPS).unwrap();
        let b = shoot_a2_with_steps(&q, &line(0.5), win, len, tol, 2 * DEFAULT_SHOOT_STEPS).unwrap();
        for (x, y) in eigenvalues(&a).iter().zip(&eigenvalues(&b)) {
            assert!((x - y).abs() < 0.1 * tol);
        }
    }

    #[test]
    fn shooting_rejects_bad_setups() {
        let q = cp(1.0, 2.0);
        assert!(shoot_a2(&q, &ring(0.5), (0.0, 5.0), 10.0, 1e-5).is_err());
        assert!(shoot_a2(&q, &line(0.5), (0.0, 5.0), 10.0, 1e-9).is_err());
        assert!(shoot_a2(&q, &line(0.5), (0.0, 50.0), 5.0, 1e-5).is_err());
        assert!(matches!(
            shoot_a2(&q, &line(0.5), (0.0, 5.0), 40.0, 1e-5),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn theta_is_measured_and_sector_constant() {
        let q = cp(4.0, 1.0);
        let a = measure_theta(ModelId::Toy3, Sector::Plus, &q, 0, &ring(0.3)).unwrap();
        let b = measure_theta(ModelId::Toy3, Sector::Plus, &q, 2, &ring(0.3)).unwrap();
        assert!(a.modulus_defect < 1e-10);
        assert!((a.theta - b.theta).abs() < 1e-8);
        let q = cp(0.3, 1.0);
        for s in Sector::BOTH {
            let k0 = lowest_admissible_k(ModelId::Toy3, s, &q).unwrap();
            let t: Vec<f64> = (k0..k0 + 4)
                .map(|k| measure_theta(ModelId::Toy3, s, &q, k, &ring(0.4)).unwrap().theta)
                .collect();
            assert!(t.iter().all(|x| (x - t[0]).abs() < 1e-8));
        }
        let full = measure_theta(ModelId::Full3, Sector::Minus, &q, 1, &ring(0.3)).unwrap();
        let toy = measure_theta(ModelId::Toy3, Sector::Minus, &q, 1, &ring(0.3)).unwrap();
        assert!(full.modulus_defect < 1e-10);
        assert!((full.theta - toy.theta).abs() > 1e-3);
    }

    #[test]
    fn theta_rejects_bump_and_inadmissible_reference() {
        let q = cp(4.0, 1.0);
        let bump = ContourSpec::bump(ContourDomain::Periodic, 0.3, 1.0).unwrap();
        assert!(measure_theta(ModelId::Toy3, Sector::Plus, &q, 0, &bump).is_err());
        assert!(measure_theta(ModelId::Toy3, Sector::Minus, &q, 0, &ring(0.3)).is_err());
    }

    #[test]
    fn monodromy_trace_matches_free_winding() {
        // the trace does not depend on g: 2 cos(2 pi beta)
        for &g in &[0.0, 0.3, 4.0] {
            for model in [ModelId::Toy3, ModelId::Full3] {
                for &b in &[0.37, 1.8, 3.25] {
                    let (tr, det) =
                        monodromy_trace(model, &cp(g, 1.0), &ring(0.3), b, DEFAULT_MONODROMY_STEPS).unwrap();
                    assert!(
                        (tr - C::new(2.0 * (2.0 * PI * b).cos(), 0.0)).norm() < 1e-7,
                        "{model} g={g} b={b}: {tr}"
                    );
                    assert!(det < 1e-8);
                }
            }
        }
    }

    #[test]
    fn monodromy_toy_plus_at_integer_alpha_shift() {
        let q = cp(4.0, 1.0);
        let win = default_beta_window(ModelId::Toy3, Sector::Plus, &q, 3).unwrap();
        let r = monodromy_angular(ModelId::Toy3, Sector::Plus, &q, &ring(0.3), win, 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
        let matched: Vec<f64> = r
            .found
            .iter()
            .filter(|f| !f.matched.is_empty())
            .map(|f| f.eigenvalue)
            .collect();
        for (a, b) in matched.iter().zip([2.0, 3.0, 4.0, 5.0]) {
            assert!((a - b).abs() < 1e-5);
        }
        assert!(r.settings.max_det_defect.unwrap() < 1e-8);
    }

    #[test]
    fn monodromy_toy_minus_small_coupling() {
        let q = cp(0.3, 1.0);
        let win = default_beta_window(ModelId::Toy3, Sector::Minus, &q, 3).unwrap();
        let r = monodromy_angular(ModelId::Toy3, Sector::Minus, &q, &ring(0.3), win, 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.found.iter().filter(|f| !f.matched.is_empty()).count(), 3);
    }
}
