//! Circulation theorem on a disk and on a random affine patch.
use std::f64::consts::PI;

use extcalc::geometry::stokes_circulation_sides;
use extcalc::{rational, Cell, Polynomial, PolynomialField, Quadrature, Signature};

fn main() -> extcalc::Result<()> {
    let s = Signature::euclidean3();
    let x = |i| Polynomial::var(3, i);
    let v = PolynomialField::vector(s, vec![x(1).scale(&rational(-1, 1)), x(0), Polynomial::zero(3)])?;
    let disk = Cell::disk(s, vec![0.0; 3], (0, 1), 1.0)?;
    let (boundary, interior) = stokes_circulation_sides(&v, &disk, &Quadrature::gauss(16)?)?;
    println!("unit disk: boundary {boundary}, interior {interior}, 2π = {}", 2.0 * PI);

    let m = Signature::minkowski();
    let patch = Cell::affine(m, vec![0.1, -0.2, 0.3, 0.0], vec![vec![0.5, 1.0, 0.0, 0.2], vec![0.0, 0.3, -1.0, 0.7]])?;
    let f = extcalc::sampling::random_polynomial_field(&mut extcalc::sampling::Sampler::new(5), m, 1, 3);
    let (b, i) = stokes_circulation_sides(&f, &patch, &Quadrature::default())?;
    println!("(1,3) patch: boundary {b}\n             interior {i}");
    Ok(())
}
