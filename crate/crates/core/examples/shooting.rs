//! Shooting oracle for the two-body relative motion: integrates along the
//! shifted line from both ends and compares roots of the Wronskian with the
//! closed-form levels.

use ptcal::model::{ContourDomain, ContourSpec, CouplingParameters, ModelId};
use ptcal::spectra::enumerate_levels;
use ptcal::verify::{compare_report, default_energy_window, default_length, shoot_a2};

fn main() -> Result<(), ptcal::Error> {
    let cp = CouplingParameters::new(1.5, 2.0)?;
    let contour = ContourSpec::constant_shift(ContourDomain::Line, 0.5)?;
    let e_max = 12.0;
    let report = shoot_a2(
        &cp,
        &contour,
        default_energy_window(&cp, e_max),
        default_length(cp.omega, e_max),
        1e-5,
    )?;
    // levels sitting on the window edge are not bracketed by the scan
    let analytic: Vec<_> = enumerate_levels(ModelId::A2Radial, &cp, e_max)
        .into_iter()
        .filter(|l| l.energy < e_max)
        .collect();
    let cmp = compare_report(&analytic, &report, 1e-5);
    for row in &cmp.rows {
        let numeric = row.numeric.map_or("missed".to_string(), |e| format!("{e:.10}"));
        println!(
            "{:<5} n = {}: analytic {:>6}, numeric {numeric}",
            row.level.qn.sector, row.level.qn.n, row.analytic
        );
    }
    println!(
        "missed {}, max |Im E| = {:.2e}",
        cmp.missed.len(),
        report.max_imag_defect()
    );
    Ok(())
}
