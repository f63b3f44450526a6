//! Polynomial fields and scenarios as JSON documents.
use extcalc::electromagnetism::Scenario;
use extcalc::{rational, Polynomial, PolynomialField, Signature};

fn main() -> extcalc::Result<()> {
    let s = Signature::minkowski();
    let f = PolynomialField::vector(
        s,
        vec![
            Polynomial::monomial(vec![1, 0, 0, 2], rational(3, 2)),
            Polynomial::var(4, 0),
            Polynomial::zero(4),
            Polynomial::constant(4, rational(-1, 1)),
        ],
    )?;
    let text = serde_json::to_string_pretty(&f).expect("serializable");
    println!("{text}");
    let back: PolynomialField = serde_json::from_str(&text).expect("round trip");
    println!("round trip equal: {}", back == f);

    let sc = Scenario::from_json(include_str!("../scenarios/plane-wave.json"))?;
    println!("scenario {} over a {}^4 grid, Gauss order {}", sc.name, sc.grid, sc.quadrature.order);
    Ok(())
}
