//! The regularized inverse-square potential `1/(x - i eps)^2` along a shifted
//! line, split into real and imaginary parts.

use ptcal::model::{ContourDomain, ContourSpec};
use ptcal::wavefun::regularized_inverse_square;

fn main() -> Result<(), ptcal::Error> {
    for contour in [
        ContourSpec::constant_shift(ContourDomain::Line, 0.5)?,
        ContourSpec::bump(ContourDomain::Line, 0.5, 1.0)?,
    ] {
        println!("{:?} eps0 = {}", contour.family, contour.eps0);
        for i in -4..=4 {
            let x = 0.5 * i as f64;
            let v = regularized_inverse_square(x, &contour)?;
            println!("  x = {x:>5}: {:.6}", v.value);
        }
    }
    Ok(())
}
