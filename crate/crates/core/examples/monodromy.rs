//! Monodromy oracle for the three-body angular equations: one period of the
//! shifted circle, Floquet condition with the measured branch phase.

use ptcal::model::{ContourDomain, ContourSpec, CouplingParameters, ModelId, Sector};
use ptcal::verify::{default_beta_window, monodromy_angular, monodromy_trace};

fn main() -> Result<(), ptcal::Error> {
    let cp = CouplingParameters::new(4.0, 1.0)?;
    let contour = ContourSpec::constant_shift(ContourDomain::Periodic, 0.3)?;

    let (tr, det) = monodromy_trace(ModelId::Toy3, &cp, &contour, 2.25, 8000)?;
    println!(
        "toy trace at beta = 2.25: {tr:.8} (2 cos 2 pi beta = {:.8}), |det - 1| = {det:.1e}",
        2.0 * (2.0 * std::f64::consts::PI * 2.25).cos()
    );

    for model in [ModelId::Toy3, ModelId::Full3] {
        for s in Sector::BOTH {
            let window = default_beta_window(model, s, &cp, 2)?;
            let r = monodromy_angular(model, s, &cp, &contour, window, 1e-5)?;
            println!("{model} {s}: window ({:.3}, {:.3})", window.0, window.1);
            for f in &r.found {
                let label = f
                    .matched
                    .iter()
                    .map(|l| format!("k = {}", l.qn.k))
                    .collect::<Vec<_>>()
                    .join(", ");
                println!(
                    "  beta = {:.8}  {}",
                    f.eigenvalue,
                    if label.is_empty() { "unmatched".into() } else { label }
                );
            }
        }
    }
    Ok(())
}
