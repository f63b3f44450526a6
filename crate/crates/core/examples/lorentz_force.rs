//! The force density J⌋F split into power (time part) and force (space part).
use extcalc::electromagnetism::{assemble_bivector, assemble_current, lorentz_density, spatial_cross};
use extcalc::{rational, Multivector, Rational, Signature};

fn main() -> extcalc::Result<()> {
    let m = Signature::minkowski();
    let v = |c: [i64; 3]| {
        Multivector::<Rational>::vector(m, &[rational(0, 1), rational(c[0], 1), rational(c[1], 1), rational(c[2], 1)])
    };
    let (e, b, jv) = (v([1, 0, 2])?, v([0, 0, 3])?, v([1, 1, 0])?);
    let rho = rational(2, 1);
    let f = assemble_bivector(&e, &b)?;
    let current = assemble_current(rho.clone(), &jv)?;
    println!("F = {f}\nJ = {current}");
    println!("J _| F        = {}", lorentz_density(&current, &f)?);
    println!("j . E         = {}", jv.dot(&e)?);
    println!("rho E + j x B = {}", &(&e * rho) + &spatial_cross(&jv, &b)?);
    Ok(())
}
