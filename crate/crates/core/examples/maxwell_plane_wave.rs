//! A vacuum plane wave checked against the differential, classical and
//! integral forms of Maxwell's equations.
use extcalc::electromagnetism::{
    classical_residuals, faraday_terms, integral_homogeneous_check, integral_inhomogeneous_check, maxwell_residuals,
    plane_wave, Region,
};
use extcalc::fields::DEFAULT_FD_STEP;
use extcalc::{Position, Quadrature};

fn main() -> extcalc::Result<()> {
    let (f, j) = plane_wave(1.0, 1.0, DEFAULT_FD_STEP)?;
    let x = Position::new(vec![0.4, 0.1, -0.3, 0.8]);
    let (hom, inhom) = maxwell_residuals(&f, &j, &x)?;
    println!("d^F = {hom}\nd_|F - J = {inhom}");
    println!("classical residual max = {:e}", classical_residuals(&f, &j, &x)?.max_abs());

    let region = Region { t0: 0.25, t1: 1.5, square_axes: [1, 3], ..Region::default() };
    let v3 = region.spacetime_box()?;
    let q = Quadrature::gauss(12)?;
    let (caps, lateral) = faraday_terms(&f, &v3, &q)?;
    println!("Faraday: change of magnetic flux {caps:.12}, electric circulation {lateral:.12}");
    println!("boundary circulation of F: {}", integral_homogeneous_check(&f, &v3, &q)?);
    println!("boundary flux of F minus flux of J: {}", integral_inhomogeneous_check(&f, &j, &v3, &q)?);
    Ok(())
}
