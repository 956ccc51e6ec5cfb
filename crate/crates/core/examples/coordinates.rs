//! Jacobi and hyperspherical coordinates of a three-particle configuration.

use ptcal::model::{hyperspherical, jacobi_map, pair_separations};

fn main() -> Result<(), ptcal::Error> {
    let positions = [1.3, -0.4, 0.2];
    let j = jacobi_map(&positions)?;
    let y = j.y.expect("three particles");
    let (rho, phi) = hyperspherical(j.x, y)?;
    println!("R = {:.6}, X = {:.6}, Y = {:.6}", j.r, j.x, y);
    println!("rho = {rho:.6}, phi = {phi:.6}");
    println!("pair separations {:?}", pair_separations(j.x, y));
    Ok(())
}
