//! Flux theorem: divergence on the unit cube and flux through a sphere.
use std::f64::consts::PI;

use extcalc::geometry::{flux, stokes_flux_sides};
use extcalc::{Cell, Chain, Polynomial, PolynomialField, Quadrature, Signature};

fn main() -> extcalc::Result<()> {
    let s = Signature::euclidean3();
    let radial = PolynomialField::vector(s, (0..3).map(|i| Polynomial::var(3, i)).collect())?;
    let cube = Cell::unit_box(s, &[0, 1, 2])?;
    let (boundary, interior) = stokes_flux_sides(&radial, &cube, &Quadrature::gauss(2)?)?;
    println!("unit cube, Gauss order 2: boundary {boundary}, interior {interior}");

    let sphere = Chain::single(Cell::sphere(s, vec![0.0; 3], (0, 1, 2), 1.0)?);
    let through = flux(&radial, &sphere, &Quadrature::gauss(16)?)?;
    println!("unit sphere: flux {through}, 4π = {}", 4.0 * PI);
    Ok(())
}
