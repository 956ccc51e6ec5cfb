//! Relative ODE residuals of closed-form eigenfunctions on complex contours.

use num_complex::Complex64;
use ptcal::model::{ContourDomain, ContourSpec, CouplingParameters, ModelId, QuantumNumbers, Sector};
use ptcal::spectra::level;
use ptcal::wavefun::{chebyshev_grid, default_grid, ode_residual, radial_residual};

fn main() -> Result<(), ptcal::Error> {
    let cp = CouplingParameters::new(4.0, 2.0)?;
    let line = ContourSpec::constant_shift(ContourDomain::Line, 0.5)?;
    let ring = ContourSpec::constant_shift(ContourDomain::Periodic, 0.3)?;

    let grid = default_grid(ModelId::A2Radial, &cp, 50)?;
    for s in Sector::BOTH {
        for n in 0..4 {
            let l = level(ModelId::A2Radial, QuantumNumbers::radial(n, s), &cp)?;
            let r = ode_residual(ModelId::A2Radial, &l, &cp, &line, &grid)?;
            println!("a2  {s:<5} n = {n}       residual {:.2e}", r.max_relative_residual);
        }
    }

    let radii: Vec<Complex64> = chebyshev_grid(0.1, 5.0, 50)
        .iter()
        .map(|&r| Complex64::new(r, -0.3))
        .collect();
    for model in [ModelId::Toy3, ModelId::Full3] {
        let grid = default_grid(model, &cp, 50)?;
        for s in Sector::BOTH {
            for k in 0..3 {
                let Ok(l) = level(model, QuantumNumbers::three_body(1, k, s), &cp) else {
                    continue;
                };
                let a = ode_residual(model, &l, &cp, &ring, &grid)?;
                let r = radial_residual(&l, &cp, &radii)?;
                println!(
                    "{model:<3} {s:<5} n = 1 k = {k} angular {:.2e}, radial {:.2e}",
                    a.max_relative_residual, r.max_relative_residual
                );
            }
        }
    }
    Ok(())
}
