//! Derivatives of closure-defined fields by central differences, and the
//! second-order error decay when the step is halved.
use extcalc::fields::partial;
use extcalc::{AnalyticField, Multivector, Position, Signature};

fn main() -> extcalc::Result<()> {
    let s = Signature::new(0, 2)?;
    let x = Position::new(vec![0.3, -0.7]);
    let exact = 3.0 * (3.0 * 0.3f64).cos() * (-0.7f64).exp();
    let mut last = None;
    for h in [0.1, 0.05, 0.025, 0.0125] {
        let f = AnalyticField::new(s, move |p| Multivector::scalar(s, (3.0 * p[0]).sin() * p[1].exp())).with_step(h)?;
        let err = (partial(&f, 0, &x)?.scalar_part() - exact).abs();
        match last {
            Some(prev) => println!("h = {h:<7} error = {err:.3e}  ratio = {:.3}", prev / err),
            None => println!("h = {h:<7} error = {err:.3e}"),
        }
        last = Some(err);
    }
    Ok(())
}
