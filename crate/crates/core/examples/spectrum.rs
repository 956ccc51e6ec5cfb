//! Closed-form levels of the two-body relative motion and both three-body
//! models at one coupling.
//!
//! ```text
//! cargo run --example spectrum -- 4.0
//! ```

use ptcal::model::{CouplingParameters, ModelId};
use ptcal::spectra::{enumerate_levels, lowest_levels};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4.0);
    let cp = CouplingParameters::new(g, 2.0)?;
    println!("g = {g}: ell = {:.6}, alpha = {:.6}", cp.ell, cp.alpha);

    println!("\ntwo-body levels below E = 12 (omega = 2)");
    for l in enumerate_levels(ModelId::A2Radial, &cp, 12.0) {
        println!("  {:<5} n = {}  E = {:.6}", l.qn.sector, l.qn.n, l.energy);
    }

    for model in [ModelId::Toy3, ModelId::Full3] {
        println!("\n{model}: eight lowest levels");
        for l in lowest_levels(model, &cp, 8) {
            println!(
                "  {:<5} n = {} k = {}  beta = {:.4}  E = {:.6}",
                l.qn.sector,
                l.qn.n,
                l.qn.k,
                l.beta.unwrap(),
                l.energy
            );
        }
    }
    Ok(())
}
