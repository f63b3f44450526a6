//! Exterior and interior derivatives of polynomial fields, exact.
use extcalc::{rational, Polynomial, PolynomialField, Signature};

fn main() -> extcalc::Result<()> {
    let s = Signature::euclidean3();
    let x = |i| Polynomial::var(3, i);
    // φ = x0² x1
    let phi = PolynomialField::scalar(s, x(0).mul(&x(0)).mul(&x(1)))?;
    let grad = phi.exterior_derivative();
    println!("grad φ        at (1,2,3) = {}", grad.eval_exact(&[rational(1, 1), rational(2, 1), rational(3, 1)])?);
    println!("curl grad φ   is zero: {}", grad.curl3()?.is_zero());

    // v = x1 e0 − x0 e1 + x0 x2 e2
    let v = PolynomialField::vector(s, vec![x(1), x(0).scale(&rational(-1, 1)), x(0).mul(&x(2))])?;
    let p = [rational(1, 2), rational(-1, 1), rational(2, 1)];
    println!("div v         at p = {}", v.interior_derivative().eval_exact(&p)?);
    println!("curl v        at p = {}", v.curl3()?.eval_exact(&p)?);
    println!("div curl v    is zero: {}", v.curl3()?.interior_derivative().is_zero());

    let m = Signature::minkowski();
    let f = extcalc::sampling::random_polynomial_field(&mut extcalc::sampling::Sampler::new(1), m, 2, 3);
    println!("(1,3) bivector field: d^d^f zero: {}, d_|d_|f zero: {}",
        f.exterior_derivative().exterior_derivative().is_zero(),
        f.interior_derivative().interior_derivative().is_zero());
    Ok(())
}
