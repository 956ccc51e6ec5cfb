//! Closed-form spectra of the four separated problems, level enumeration,
//! two-body level crossings and the data behind the energy-versus-coupling
//! figures.

use std::cmp::Ordering;

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::{CouplingParameters, ModelId, QuantumNumbers, Sector};

/// One eigenstate of a separated problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub model: ModelId,
    pub qn: QuantumNumbers,
    pub energy: f64,
    /// Square root of the angular eigenvalue (three-body models only).
    pub beta: Option<f64>,
}

/// Deterministic level order: energy, then `Plus` before `Minus`, then `n`, then `k`.
pub fn level_order(a: &Level, b: &Level) -> Ordering {
    a.energy
        .total_cmp(&b.energy)
        .then(a.qn.sector.cmp(&b.qn.sector))
        .then(a.qn.n.cmp(&b.qn.n))
        .then(a.qn.k.cmp(&b.qn.k))
        .then(a.qn.big_n.cmp(&b.qn.big_n))
}

/// Centre-of-mass quantum `F_N = 2N + 1`.
pub fn cm_level(big_n: u32) -> u32 {
    2 * big_n + 1
}

/// Energy `omega sqrt(A/8) F_N` the bulk mode adds to every internal level.
pub fn cm_energy(big_n: u32, particles: u32, omega: f64) -> f64 {
    omega * (particles as f64 / 8.0).sqrt() * cm_level(big_n) as f64
}

/// Two-body relative-motion level: `(omega/2)(4n + 2 ell + 3)` in the `Plus`
/// sector, `(omega/2)(4n - 2 ell + 1)` in the `Minus` sector.
pub fn a2_energy(qn: QuantumNumbers, cp: &CouplingParameters) -> Level {
    let n = qn.n as f64;
    let bracket = match qn.sector {
        Sector::Plus => 4.0 * n + 2.0 * cp.ell + 3.0,
        Sector::Minus => 4.0 * n - 2.0 * cp.ell + 1.0,
    };
    Level {
        model: ModelId::A2Radial,
        qn: QuantumNumbers::radial(qn.n, qn.sector),
        energy: 0.5 * cp.omega * bracket,
        beta: None,
    }
}

/// Square root of the angular eigenvalue: `k +- alpha + 1/2` for the toy model
/// and three times that for the full model.
///
/// A negative result means the label has no admissible state. Zero is kept:
/// at `g = 0` it reproduces the isotropic planar oscillator.
pub fn beta_angular(k: u32, sector: Sector, cp: &CouplingParameters, model: ModelId) -> Result<f64> {
    let toy = k as f64 + sector.sign() * cp.alpha + 0.5;
    let beta = match model {
        ModelId::Toy3 => toy,
        ModelId::Full3 => 3.0 * toy,
        other => return Err(domain(format!("no angular equation for model {other}"))),
    };
    if beta < 0.0 {
        return Err(Error::NegativeBeta { k, beta });
    }
    Ok(beta)
}

fn three_body_scale(cp: &CouplingParameters) -> f64 {
    (3.0f64 / 8.0).sqrt() * cp.omega
}

/// Toy three-body level `sqrt(3/8) omega (4n + 2k +- 2 alpha + 3)`.
pub fn toy3_energy(qn: QuantumNumbers, cp: &CouplingParameters) -> Result<Level> {
    let beta = beta_angular(qn.k, qn.sector, cp, ModelId::Toy3)?;
    let (n, k, s) = (qn.n as f64, qn.k as f64, qn.sector.sign());
    Ok(Level {
        model: ModelId::Toy3,
        qn: QuantumNumbers::three_body(qn.n, qn.k, qn.sector),
        energy: three_body_scale(cp) * (4.0 * n + 2.0 * k + 2.0 * s * cp.alpha + 3.0),
        beta: Some(beta),
    })
}

/// Full three-body level `sqrt(3/8) omega (4n + 6k +- 6 alpha + 5)`.
pub fn full3_energy(qn: QuantumNumbers, cp: &CouplingParameters) -> Result<Level> {
    let beta = beta_angular(qn.k, qn.sector, cp, ModelId::Full3)?;
    let (n, k, s) = (qn.n as f64, qn.k as f64, qn.sector.sign());
    Ok(Level {
        model: ModelId::Full3,
        qn: QuantumNumbers::three_body(qn.n, qn.k, qn.sector),
        energy: three_body_scale(cp) * (4.0 * n + 6.0 * k + 6.0 * s * cp.alpha + 5.0),
        beta: Some(beta),
    })
}

/// Level of any model from its label.
pub fn level(model: ModelId, qn: QuantumNumbers, cp: &CouplingParameters) -> Result<Level> {
    match model {
        ModelId::CentreOfMass { particles } => Ok(Level {
            model,
            qn: QuantumNumbers::centre_of_mass(qn.big_n),
            energy: cm_energy(qn.big_n, particles, cp.omega),
            beta: None,
        }),
        ModelId::A2Radial => Ok(a2_energy(qn, cp)),
        ModelId::Toy3 => toy3_energy(qn, cp),
        ModelId::Full3 => full3_energy(qn, cp),
    }
}

/// Every admissible level with energy at most `e_max`, in [`level_order`].
pub fn enumerate_levels(model: ModelId, cp: &CouplingParameters, e_max: f64) -> Vec<Level> {
    let mut out = Vec::new();
    if !e_max.is_finite() {
        return out;
    }
    match model {
        ModelId::CentreOfMass { .. } => {
            for big_n in 0.. {
                let l = level(model, QuantumNumbers::centre_of_mass(big_n), cp).expect("cm levels always exist");
                if l.energy > e_max {
                    break;
                }
                out.push(l);
            }
        }
        ModelId::A2Radial => {
            for sector in Sector::BOTH {
                for n in 0.. {
                    let l = a2_energy(QuantumNumbers::radial(n, sector), cp);
                    if l.energy > e_max {
                        break;
                    }
                    out.push(l);
                }
            }
        }
        ModelId::Toy3 | ModelId::Full3 => {
            for sector in Sector::BOTH {
                for k in 0.. {
                    let mut any = false;
                    let mut skipped = false;
                    for n in 0.. {
                        match level(model, QuantumNumbers::three_body(n, k, sector), cp) {
                            Ok(l) if l.energy <= e_max => {
                                any = true;
                                out.push(l);
                            }
                            Ok(_) => break,
                            Err(e) => {
                                debug!("omitting {model} {sector} k={k}: {e}");
                                skipped = true;
                                break;
                            }
                        }
                    }
                    // energies grow with k once beta is admissible
                    if !any && !skipped {
                        break;
                    }
                }
            }
        }
    }
    out.sort_by(level_order);
    out
}

/// The `count` lowest levels in [`level_order`].
pub fn lowest_levels(model: ModelId, cp: &CouplingParameters, count: usize) -> Vec<Level> {
    let mut out = Vec::new();
    let c = count as u32;
    match model {
        ModelId::CentreOfMass { .. } => {
            for big_n in 0..c {
                out.extend(level(model, QuantumNumbers::centre_of_mass(big_n), cp));
            }
        }
        ModelId::A2Radial => {
            for sector in Sector::BOTH {
                out.extend((0..c).map(|n| a2_energy(QuantumNumbers::radial(n, sector), cp)));
            }
        }
        ModelId::Toy3 | ModelId::Full3 => {
            // a level with n >= count, or k >= count past the skipped labels,
            // has at least `count` lower levels of the same sector below it
            let k_extra = (0..)
                .take_while(|&k| beta_angular(k, Sector::Minus, cp, model).is_err())
                .count() as u32;
            for sector in Sector::BOTH {
                for k in 0..c + k_extra {
                    for n in 0..c {
                        if let Ok(l) = level(model, QuantumNumbers::three_body(n, k, sector), cp) {
                            out.push(l);
                        }
                    }
                }
            }
        }
    }
    out.sort_by(level_order);
    out.truncate(count);
    out
}

/// Pairs of neighbouring levels whose energies agree within `tol` (relative to
/// `max(1, |E|)`).
pub fn degenerate_pairs(levels: &[Level], tol: f64) -> Vec<(Level, Level)> {
    levels
        .windows(2)
        .filter(|w| (w[0].energy - w[1].energy).abs() <= tol * w[0].energy.abs().max(1.0))
        .map(|w| (w[0], w[1]))
        .collect()
}

/// A coupling at which a `Plus` and a `Minus` two-body level coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub k: u32,
    pub g: f64,
    pub ell: f64,
    /// Witness pair `(n = 0, Plus)` and `(n = k, Minus)`.
    pub plus: Level,
    pub minus: Level,
}

pub type CrossingList = Vec<Crossing>;

/// Two-body level crossings `g = 2k^2 - 1/2`, `k = 1..=kmax`, each checked
/// against its witness pair at spring constant `omega`.
pub fn find_crossings(kmax: u32, omega: f64) -> Result<CrossingList> {
    if kmax == 0 {
        return Err(domain("kmax must be at least 1"));
    }
    (1..=kmax)
        .map(|k| {
            let kf = k as f64;
            let g = 2.0 * kf * kf - 0.5;
            let cp = CouplingParameters::new(g, omega)?;
            let plus = a2_energy(QuantumNumbers::radial(0, Sector::Plus), &cp);
            let minus = a2_energy(QuantumNumbers::radial(k, Sector::Minus), &cp);
            let gap = (plus.energy - minus.energy).abs();
            if gap > 1e-12 * plus.energy.abs().max(1.0) {
                return Err(domain(format!("witness pair at k = {k} split by {gap:e}")));
            }
            Ok(Crossing {
                k,
                g,
                ell: kf - 0.5,
                plus,
                minus,
            })
        })
        .collect()
}

/// Spring constant of the published figure for a model: `2 sqrt(2/A)` for the
/// two-body fan and `sqrt(3/8) omega = 1` for the three-body fans.
pub fn figure_omega(model: ModelId) -> Result<f64> {
    match model {
        ModelId::A2Radial => Ok(2.0),
        ModelId::Toy3 | ModelId::Full3 => Ok((8.0f64 / 3.0).sqrt()),
        other => Err(domain(format!("no figure for model {other}"))),
    }
}

/// One CSV row `model,g,ell,alpha,sector,n,k,E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub model: String,
    pub g: f64,
    pub ell: f64,
    pub alpha: f64,
    pub sector: Option<Sector>,
    pub n: u32,
    pub k: Option<u32>,
    #[serde(rename = "E")]
    pub energy: f64,
}

impl TableRow {
    pub fn new(level: &Level, cp: &CouplingParameters) -> Self {
        let (sector, n, k) = match level.model {
            ModelId::CentreOfMass { .. } => (None, level.qn.big_n, None),
            ModelId::A2Radial => (Some(level.qn.sector), level.qn.n, None),
            ModelId::Toy3 | ModelId::Full3 => (Some(level.qn.sector), level.qn.n, Some(level.qn.k)),
        };
        TableRow {
            model: level.model.short_name().to_string(),
            g: cp.g,
            ell: cp.ell,
            alpha: cp.alpha,
            sector,
            n,
            k,
            energy: level.energy,
        }
    }
}

pub const TABLE_HEADER: [&str; 8] = ["model", "g", "ell", "alpha", "sector", "n", "k", "E"];

/// Figure rows plus grid points that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FigureData {
    pub rows: Vec<TableRow>,
    pub flagged: Vec<(f64, Error)>,
}

/// Lowest `level_budget` levels at every grid coupling, in grid order, using
/// the figure normalization of the model.
pub fn figure_data(model: ModelId, g_grid: &[f64], level_budget: usize) -> Result<FigureData> {
    let omega = figure_omega(model)?;
    let per_point: Vec<std::result::Result<Vec<TableRow>, Error>> = g_grid
        .par_iter()
        .map(|&g| {
            let cp = CouplingParameters::new(g, omega)?;
            Ok(lowest_levels(model, &cp, level_budget)
                .iter()
                .map(|l| TableRow::new(l, &cp))
                .collect())
        })
        .collect();
    let mut data = FigureData::default();
    for (&g, result) in g_grid.iter().zip(per_point) {
        match result {
            Ok(rows) => data.rows.extend(rows),
            Err(e) => data.flagged.push((g, e)),
        }
    }
    Ok(data)
}

/// `steps` equally spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}
