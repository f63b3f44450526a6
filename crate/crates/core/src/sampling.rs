//! Seeded random inputs for property checks and verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::{Polynomial, PolynomialField};
use crate::multivector::Multivector;
use crate::scalar::{rational, Rational};
use crate::signatures::{IndexList, Signature};

/// Deterministic generator; the same seed always yields the same stream.
pub struct Sampler(ChaCha8Rng);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform integer in `0..n` (`n >= 1`).
    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.random_range(lo..=hi)
    }

    pub fn unit(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.random_range(lo..hi)
    }

    pub fn coin(&mut self) -> bool {
        self.0.random::<bool>()
    }

    /// Small nonzero rational `p/q` with `|p| <= 9`, `1 <= q <= 4`.
    pub fn rational(&mut self) -> Rational {
        loop {
            let p = self.int(-9, 9);
            if p != 0 {
                return rational(p, self.int(1, 4));
            }
        }
    }

    pub fn blade(&mut self, sig: Signature, grade: Option<usize>) -> IndexList {
        match grade {
            Some(g) => {
                let all = IndexList::of_grade(sig.dim(), g);
                all[self.below(all.len())]
            }
            None => IndexList::from_mask(self.below(1 << sig.dim()) as u16),
        }
    }
}

/// Random rational multivector with up to `max_terms` terms, optionally of a single grade.
pub fn random_multivector(
    rng: &mut Sampler,
    sig: Signature,
    grade: Option<usize>,
    max_terms: usize,
) -> Multivector<Rational> {
    let count = 1 + rng.below(max_terms.max(1));
    let terms: Vec<_> = (0..count)
        .map(|_| (rng.blade(sig, grade), rng.rational()))
        .collect();
    Multivector::from_terms(sig, terms).expect("blades drawn inside the signature")
}

/// Random rational grade-1 multivector with every component drawn.
pub fn random_vector(rng: &mut Sampler, sig: Signature) -> Multivector<Rational> {
    let comps: Vec<Rational> = (0..sig.dim())
        .map(|_| if rng.below(5) == 0 { rational(0, 1) } else { rng.rational() })
        .collect();
    Multivector::vector(sig, &comps).expect("component count matches")
}

/// Random polynomial in `vars` variables with total degree at most `degree`.
pub fn random_polynomial(rng: &mut Sampler, vars: usize, degree: u32, max_terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(vars);
    for _ in 0..1 + rng.below(max_terms.max(1)) {
        let mut exps = vec![0u32; vars];
        let mut budget = rng.below(degree as usize + 1) as u32;
        while budget > 0 {
            exps[rng.below(vars)] += 1;
            budget -= 1;
        }
        p.add_monomial(exps, rng.rational());
    }
    p
}

/// Random polynomial field whose blades all have the given grade.
pub fn random_polynomial_field(
    rng: &mut Sampler,
    sig: Signature,
    grade: usize,
    degree: u32,
) -> PolynomialField {
    let blades = IndexList::of_grade(sig.dim(), grade);
    let mut entries = Vec::new();
    for b in blades {
        if rng.below(3) != 0 {
            entries.push((b, random_polynomial(rng, sig.dim(), degree, 3)));
        }
    }
    if entries.is_empty() {
        let b = rng.blade(sig, Some(grade));
        entries.push((b, random_polynomial(rng, sig.dim(), degree, 3)));
    }
    PolynomialField::new(sig, entries).expect("blades drawn inside the signature")
}
