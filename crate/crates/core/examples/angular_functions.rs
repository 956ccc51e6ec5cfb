//! Angular eigenfunctions of both three-body models on the shifted circle,
//! including the Gegenbauer and hypergeometric forms of the toy solution.

use num_complex::Complex64;
use ptcal::model::{CouplingParameters, Sector};
use ptcal::wavefun::{angular_is_regularized, full_angular_f, toy_angular_chi, toy_angular_hypergeometric};

fn main() -> Result<(), ptcal::Error> {
    let cp = CouplingParameters::new(0.3, 1.0)?;
    let phi = Complex64::new(0.7, -0.3);
    for s in Sector::BOTH {
        for k in 0..4 {
            let chi = toy_angular_chi(k, s, &cp, phi);
            let hyp = toy_angular_hypergeometric(k, s, &cp, phi);
            let f = full_angular_f(k, s, &cp, phi);
            match (chi, hyp, f) {
                (Ok(chi), Ok(hyp), Ok(f)) => println!(
                    "{s:<5} k = {k}: chi = {chi:.6}, chi/2F1 = {:.6}, f = {f:.6}{}",
                    chi / hyp,
                    if angular_is_regularized(k, s, &cp) {
                        " (regularized)"
                    } else {
                        ""
                    }
                ),
                (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => println!("{s:<5} k = {k}: {e}"),
            }
        }
    }
    Ok(())
}
