//! The expression language used by `extcalc eval`.
use extcalc::cli::{eval, parse};
use extcalc::Signature;

fn main() {
    let cases = [
        ("0,3", "1/2 * e1 ^ e2 + e2 ^ e1"),
        ("1,3", "(e0 ^ e1) . (e0 ^ e1)"),
        ("0,3", "e12 |_ e12"),
        ("1,3", "e0!"),
        ("1,3", "e0 _| (e0 ^ e1)"),
        ("0,3", "e1 ∧ e2 ⌊ e1"),
        ("1,3", "e0 ^ e4"),
    ];
    for (sig, src) in cases {
        let sig: Signature = sig.parse().expect("valid signature");
        match parse(src, sig).and_then(|e| eval(&e, sig)) {
            Ok(v) => println!("{sig}  {src:<28} = {v}"),
            Err(err) => println!("{sig}  {src:<28} ! {err}"),
        }
    }
}
