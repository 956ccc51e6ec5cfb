//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use ptcal::cli::{self, Format};
use ptcal::model::{ContourDomain, ContourSpec, CouplingParameters, ModelId, QuantumNumbers, Sector};
use ptcal::spectra::{self, enumerate_levels};
use ptcal::verify::{self, OracleReport};
use ptcal::wavefun;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn cp(g: f64, omega: f64) -> CouplingParameters {
    CouplingParameters::new(g, omega).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn crossing_loci() -> Outcome {
    let dir = std::env::temp_dir().join(format!("ptcal-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let out = dir.join("crossings.csv");
    let code = cli::run(["ptcal", "crossings", "--kmax", "4", "--output", out.to_str().unwrap()]);
    ensure(code == 0, || format!("crossings exited with {code}"))?;
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let mut gs = Vec::new();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        gs.push(rec[1].parse::<f64>().map_err(|e| e.to_string())?);
    }
    ensure(gs == vec![1.5, 7.5, 17.5, 31.5], || format!("g column {gs:?}"))?;
    for c in spectra::find_crossings(4, 2.0).map_err(|e| e.to_string())? {
        let levels = enumerate_levels(ModelId::A2Radial, &cp(c.g, 2.0), c.plus.energy + 1.0);
        let at = levels
            .iter()
            .filter(|l| (l.energy - c.plus.energy).abs() <= 1e-12)
            .count();
        ensure(at == 2, || format!("k = {}: {at} levels at E = {}", c.k, c.plus.energy))?;
    }
    Ok(format!("g = {gs:?}, each a twofold degeneracy"))
}

fn harmonic_limit() -> Outcome {
    let e: Vec<f64> = enumerate_levels(ModelId::A2Radial, &cp(0.0, 2.0), 20.0)
        .iter()
        .map(|l| l.energy)
        .filter(|&e| e < 20.0)
        .collect();
    let want: Vec<f64> = (0..10).map(|j| (2 * j + 1) as f64).collect();
    ensure(e == want, || format!("got {e:?}"))?;
    Ok("levels {1, 3, ..., 19} once each".into())
}

fn shooting_oracle() -> Outcome {
    let mut worst_err: f64 = 0.0;
    let mut worst_im: f64 = 0.0;
    let mut levels = 0;
    for &g in &[0.3, 1.5, 4.0] {
        let q = cp(g, 2.0);
        for &eps0 in &[0.3, 0.5] {
            let contour = ContourSpec::constant_shift(ContourDomain::Line, eps0).unwrap();
            let window = verify::default_energy_window(&q, 12.0);
            let r = verify::shoot_a2(&q, &contour, window, verify::default_length(2.0, 12.0), 1e-5)
                .map_err(|e| format!("g = {g}, eps0 = {eps0}: {e}"))?;
            let analytic: Vec<_> = enumerate_levels(ModelId::A2Radial, &q, 12.0)
                .into_iter()
                .filter(|l| l.energy < 12.0)
                .collect();
            let cmp = verify::compare_report(&analytic, &r, 1e-5);
            ensure(cmp.missed.is_empty(), || {
                format!("g = {g}, eps0 = {eps0}: missed {:?}", cmp.missed)
            })?;
            let sectors = analytic
                .iter()
                .map(|l| l.qn.sector)
                .collect::<std::collections::BTreeSet<_>>();
            ensure(sectors.len() == 2, || format!("g = {g}: only one hierarchy below 12"))?;
            for row in &cmp.rows {
                worst_err = worst_err.max(row.abs_error.unwrap());
            }
            worst_im = worst_im.max(r.max_imag_defect());
            levels += analytic.len();
        }
    }
    ensure(worst_err <= 1e-5, || format!("max |error| {worst_err:e}"))?;
    ensure(worst_im < 1e-6, || format!("max |Im| {worst_im:e}"))?;
    Ok(format!(
        "{levels} levels matched, max |error| {worst_err:.1e}, max |Im| {worst_im:.1e}"
    ))
}

fn monodromy_oracle() -> Outcome {
    let mut worst_err: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    let mut matched = 0;
    let mut extra = 0;
    for model in [ModelId::Toy3, ModelId::Full3] {
        for &g in &[0.3, 4.0] {
            let q = cp(g, 1.0);
            let contour = ContourSpec::constant_shift(ContourDomain::Periodic, 0.3).unwrap();
            for s in Sector::BOTH {
                let window = verify::default_beta_window(model, s, &q, 3).map_err(|e| e.to_string())?;
                let r: OracleReport = verify::monodromy_angular(model, s, &q, &contour, window, 1e-5)
                    .map_err(|e| format!("{model} {s} g = {g}: {e}"))?;
                let analytic: Vec<_> = (0..=3)
                    .filter_map(|k| spectra::level(model, QuantumNumbers::three_body(0, k, s), &q).ok())
                    .filter(|l| l.beta.unwrap() > 0.0)
                    .collect();
                let cmp = verify::compare_report(&analytic, &r, 1e-5);
                ensure(cmp.missed.is_empty(), || {
                    format!("{model} {s} g = {g}: missed {:?}", cmp.missed)
                })?;
                for row in &cmp.rows {
                    worst_err = worst_err.max(row.abs_error.unwrap());
                }
                worst_det = worst_det.max(r.settings.max_det_defect.unwrap());
                matched += analytic.len();
                extra += r.unmatched().count();
            }
        }
    }
    ensure(worst_det < 1e-8, || format!("max |det M - 1| {worst_det:e}"))?;
    Ok(format!(
        "{matched} beta values matched, max |error| {worst_err:.1e}, max |det M - 1| {worst_det:.1e}, {extra} unmatched Floquet roots reported"
    ))
}

const GS: [f64; 4] = [0.3, 1.5, 4.0, 9.0];

fn residual_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let line = ContourSpec::constant_shift(ContourDomain::Line, 0.5).unwrap();
    let ring = ContourSpec::constant_shift(ContourDomain::Periodic, 0.3).unwrap();
    for &g in &GS {
        let q = cp(g, 2.0);
        for s in Sector::BOTH {
            let grid = wavefun::default_grid(ModelId::A2Radial, &q, 50).unwrap();
            for n in 0..=5 {
                let l = spectra::level(ModelId::A2Radial, QuantumNumbers::radial(n, s), &q).unwrap();
                let r = wavefun::ode_residual(ModelId::A2Radial, &l, &q, &line, &grid).map_err(|e| e.to_string())?;
                ensure(r.max_relative_residual < 1e-8, || {
                    format!("a2 g = {g} {s} n = {n}: {:e}", r.max_relative_residual)
                })?;
                worst = worst.max(r.max_relative_residual);
                count += 1;
            }
            for model in [ModelId::Toy3, ModelId::Full3] {
                let grid = wavefun::default_grid(model, &q, 50).unwrap();
                let radii: Vec<Complex64> = wavefun::chebyshev_grid(0.1, 5.0, 50)
                    .iter()
                    .map(|&r| Complex64::new(r, -0.3))
                    .collect();
                for k in 0..=5 {
                    for n in 0..=5 {
                        let Ok(l) = spectra::level(model, QuantumNumbers::three_body(n, k, s), &q) else {
                            continue;
                        };
                        if n == 0 {
                            let r = wavefun::ode_residual(model, &l, &q, &ring, &grid).map_err(|e| e.to_string())?;
                            ensure(r.max_relative_residual < 1e-8, || {
                                format!("{model} g = {g} {s} k = {k}: {:e}", r.max_relative_residual)
                            })?;
                            worst = worst.max(r.max_relative_residual);
                            count += 1;
                        }
                        let r = wavefun::radial_residual(&l, &q, &radii).map_err(|e| e.to_string())?;
                        ensure(r.max_relative_residual < 1e-8, || {
                            format!(
                                "{model} radial g = {g} {s} n = {n} k = {k}: {:e}",
                                r.max_relative_residual
                            )
                        })?;
                        worst = worst.max(r.max_relative_residual);
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} eigenfunctions, max relative residual {worst:.1e}"))
}

fn quasi_parity() -> Outcome {
    let mut worst_disp: f64 = 0.0;
    let mut worst_mod: f64 = 0.0;
    let mut count = 0;
    let line = ContourSpec::constant_shift(ContourDomain::Line, 0.5).unwrap();
    let ring = ContourSpec::constant_shift(ContourDomain::Periodic, 0.3).unwrap();
    for &g in &GS {
        let q = cp(g, 2.0);
        for s in Sector::BOTH {
            let offsets = wavefun::chebyshev_grid(0.0, 6.0 / q.omega.sqrt(), 25);
            for n in 0..=5 {
                let l = spectra::level(ModelId::A2Radial, QuantumNumbers::radial(n, s), &q).unwrap();
                let r = wavefun::quasi_parity_ratio(ModelId::A2Radial, &l, &q, &line, &offsets)
                    .map_err(|e| e.to_string())?;
                worst_disp = worst_disp.max(r.dispersion);
                worst_mod = worst_mod.max(r.modulus_defect);
                count += 1;
            }
            for (model, limit) in [(ModelId::Toy3, PI), (ModelId::Full3, PI / 3.0)] {
                let offsets = wavefun::chebyshev_grid(0.0, limit, 25);
                for k in 0..=5 {
                    let Ok(l) = spectra::level(model, QuantumNumbers::three_body(0, k, s), &q) else {
                        continue;
                    };
                    let r = wavefun::quasi_parity_ratio(model, &l, &q, &ring, &offsets).map_err(|e| e.to_string())?;
                    worst_disp = worst_disp.max(r.dispersion);
                    worst_mod = worst_mod.max(r.modulus_defect);
                    count += 1;
                }
            }
        }
    }
    ensure(worst_disp < 1e-10, || format!("max dispersion {worst_disp:e}"))?;
    ensure(worst_mod < 1e-10, || format!("max modulus defect {worst_mod:e}"))?;
    Ok(format!(
        "{count} eigenfunctions, max dispersion {worst_disp:.1e}, max modulus defect {worst_mod:.1e}"
    ))
}

fn small_eps_scaling() -> Outcome {
    let q = cp(4.0, 1.0);
    let mut parts = Vec::new();
    for s in Sector::BOTH {
        let slope = wavefun::small_eps_slope(s, &q, &[0.4, 0.2, 0.1]).map_err(|e| e.to_string())?;
        let want = 0.5 + s.sign() * q.alpha;
        ensure((slope - want).abs() <= 0.05, || format!("{s}: slope {slope} vs {want}"))?;
        parts.push(format!("{s} slope {slope:.4} vs {want}"));
    }
    Ok(parts.join(", "))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn figure_regression() -> Outcome {
    let mut sizes = Vec::new();
    for (name, model) in [
        ("a2", ModelId::A2Radial),
        ("toy", ModelId::Toy3),
        ("a3", ModelId::Full3),
    ] {
        let text = cli::figure_text(model, 0.0, 10.0, 41, 10, Format::Csv).map_err(|e| e.to_string())?;
        let path = golden_dir().join(format!("figure_{name}.csv"));
        let golden = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(text.as_bytes() == golden.as_slice(), || {
            format!("{name} differs from {}", path.display())
        })?;
        sizes.push(format!("{name} {} rows", text.lines().count() - 1));
    }
    Ok(format!("byte-identical ({})", sizes.join(", ")))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "crossing loci", crossing_loci, Duration::from_secs(1)),
        (2, "harmonic limit", harmonic_limit, Duration::from_secs(1)),
        (3, "shooting oracle", shooting_oracle, Duration::from_secs(30)),
        (4, "monodromy oracle", monodromy_oracle, Duration::from_secs(60)),
        (5, "ODE residuals", residual_suite, Duration::from_secs(10)),
        (6, "quasi-parity", quasi_parity, Duration::from_secs(5)),
        (7, "small-eps scaling", small_eps_scaling, Duration::from_secs(5)),
        (8, "figure regression", figure_regression, Duration::from_secs(2)),
    ];
    let mut failed = 0;
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > budget => Err(format!("{detail}; took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {id} ({name}): PASS in {took:.2?}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL in {took:.2?}: {reason}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
