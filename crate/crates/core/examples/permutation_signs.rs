//! Sorting signs σ(I,J), merged lists ε(I,J), complements and the metric Δ.
use extcalc::signatures::{merge_eps_sigma, sigma, sort_count};
use extcalc::{IndexList, Signature};

fn main() -> extcalc::Result<()> {
    let i = IndexList::new(&[1, 3])?;
    let j = IndexList::new(&[0, 2])?;
    let merged = merge_eps_sigma(i, j);
    println!("sigma({i},{j}) = {}", sigma(i, j));
    println!("eps({i},{j})   = {:?} with sign {}", merged.list, merged.sign);
    println!("sort [2,1,3]       -> {:?}", sort_count(&[2, 1, 3]));
    println!("sort [1,1]         -> {:?}", sort_count(&[1, 1]));

    let m = Signature::minkowski();
    for l in [IndexList::new(&[0])?, IndexList::new(&[1, 2])?, IndexList::new(&[0, 1])?] {
        println!("in {m}: complement of {l} = {}, delta = {}", m.complement(l)?, m.delta(l));
    }
    Ok(())
}
