//! Wedge, dot, contractions and Hodge complements of basis blades in (1,3).
use extcalc::{Multivector, Rational, Signature};

fn main() -> extcalc::Result<()> {
    let m = Signature::minkowski();
    let e = |idx: &[usize]| Multivector::<Rational>::basis(m, idx);
    let (e0, e1, e01) = (e(&[0])?, e(&[1])?, e(&[0, 1])?);

    println!("e0 ^ e1       = {}", e0.wedge(&e1)?);
    println!("e1 ^ e0       = {}", e1.wedge(&e0)?);
    println!("e0 . e0       = {}", e0.dot(&e0)?);
    println!("e01 . e01     = {}", e01.dot(&e01)?);
    println!("e0 _| e01     = {}", e0.left_contraction(&e01)?);
    println!("e01 |_ e0     = {}", e01.right_contraction(&e0)?);
    println!("hodge(e0)     = {}", e0.hodge());
    println!("inv_hodge(e0) = {}", e0.inv_hodge());
    println!("hodge(1)      = {}", Multivector::<Rational>::one(m).hodge());

    let s = Signature::euclidean3();
    let a = Multivector::vector(s, &[extcalc::rational(1, 1), extcalc::rational(2, 1), extcalc::rational(0, 1)])?;
    let b = Multivector::basis(s, &[2])?;
    println!("(1,2,0) x e2  = {}", a.cross(&b)?);
    Ok(())
}
