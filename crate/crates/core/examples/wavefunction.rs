//! Samples a two-body eigenfunction along the shifted line `x - 0.5 i` and
//! prints modulus and phase.

use num_complex::Complex64;
use ptcal::model::{ContourDomain, ContourSpec, CouplingParameters, ModelId, QuantumNumbers, Sector};
use ptcal::wavefun::{chebyshev_grid, sample_contour};

fn main() -> Result<(), ptcal::Error> {
    let cp = CouplingParameters::new(1.5, 2.0)?;
    let contour = ContourSpec::constant_shift(ContourDomain::Line, 0.5)?;
    let qn = QuantumNumbers::radial(2, Sector::Minus);
    let xs = chebyshev_grid(-4.0, 4.0, 21);
    println!("{:>8} {:>22} {:>12} {:>10}", "x", "z", "|psi|", "arg psi");
    for s in sample_contour(ModelId::A2Radial, qn, &cp, &contour, &xs)? {
        let Complex64 { re, im } = s.point;
        println!(
            "{:>8.4} {:>10.4}{:+.4}i {:>12.4e} {:>10.4}",
            s.parameter,
            re,
            im,
            s.value.norm(),
            s.value.arg()
        );
    }
    Ok(())
}
