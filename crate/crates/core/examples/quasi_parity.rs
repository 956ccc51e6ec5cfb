//! PT quasi-parity: the ratio of an eigenfunction at mirrored contour points
//! to the conjugate is a constant phase `exp(-i pi p)`.

use std::f64::consts::PI;

use ptcal::model::{ContourDomain, ContourSpec, CouplingParameters, ModelId, QuantumNumbers, Sector};
use ptcal::spectra::level;
use ptcal::wavefun::{chebyshev_grid, quasi_parity_ratio};

fn main() -> Result<(), ptcal::Error> {
    let cp = CouplingParameters::new(1.5, 2.0)?;
    let line = ContourSpec::constant_shift(ContourDomain::Line, 0.5)?;
    let ring = ContourSpec::constant_shift(ContourDomain::Periodic, 0.3)?;
    let cases = [
        (ModelId::A2Radial, line, QuantumNumbers::radial(2, Sector::Plus), 4.0),
        (ModelId::A2Radial, line, QuantumNumbers::radial(2, Sector::Minus), 4.0),
        (ModelId::Toy3, ring, QuantumNumbers::three_body(0, 2, Sector::Minus), PI),
        (
            ModelId::Full3,
            ring,
            QuantumNumbers::three_body(0, 1, Sector::Plus),
            PI / 3.0,
        ),
    ];
    for (model, contour, qn, limit) in cases {
        let l = level(model, qn, &cp)?;
        let r = quasi_parity_ratio(model, &l, &cp, &contour, &chebyshev_grid(0.0, limit, 20))?;
        println!(
            "{model:<3} {:<5} n = {} k = {}: ratio {:.10} (expected {:.10}), dispersion {:.1e}",
            qn.sector, qn.n, qn.k, r.mean, r.expected, r.dispersion
        );
    }
    Ok(())
}
