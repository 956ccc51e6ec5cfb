//! Couplings where a `plus` and a `minus` two-body level become degenerate.

use ptcal::model::{CouplingParameters, ModelId};
use ptcal::spectra::{degenerate_pairs, enumerate_levels, find_crossings};

fn main() -> Result<(), ptcal::Error> {
    for c in find_crossings(5, 2.0)? {
        let cp = CouplingParameters::new(c.g, 2.0)?;
        let levels = enumerate_levels(ModelId::A2Radial, &cp, 30.0);
        let pairs = degenerate_pairs(&levels, 1e-12);
        println!(
            "k = {}: g = {:>5}, ell = {}, E = {:>4}, {} degenerate pairs below E = 30",
            c.k,
            c.g,
            c.ell,
            c.plus.energy,
            pairs.len()
        );
    }
    Ok(())
}
