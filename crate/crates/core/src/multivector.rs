//! The exterior-algebra value type and its products.
//!
//! A [`Multivector`] is a sparse map from canonical blades to coefficients,
//! tagged with the [`Signature`] it lives in. Every product is defined on
//! basis blades and extended bilinearly:
//!
//! | product | blade rule |
//! |---|---|
//! | wedge | `e_I ∧ e_J = σ(I,J) e_{ε(I,J)}` |
//! | dot | `e_I · e_J = Δ_{I,I}` if `I = J`, else 0 |
//! | left contraction | `e_I ⌋ e_J = Δ_{I,I} σ(ε(I,Jᶜ)ᶜ, I) e_{ε(I,Jᶜ)ᶜ}` |
//! | right contraction | `e_I ⌊ e_J = Δ_{J,J} σ(J, ε(Iᶜ,J)ᶜ) e_{ε(Iᶜ,J)ᶜ}` |
//! | Hodge | `e_Iᴴ = Δ_{I,I} σ(I,Iᶜ) e_{Iᶜ}` |
//! | inverse Hodge | `e_Iᴴ⁻¹ = Δ_{Iᶜ,Iᶜ} σ(Iᶜ,I) e_{Iᶜ}` |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::{sign_scalar, Scalar};
use crate::signatures::{merge_eps_sigma, sigma, sort_count, IndexList, Signature};

/// The set of grades present in a multivector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradeSet(BTreeSet<usize>);

impl GradeSet {
    pub fn contains(&self, grade: usize) -> bool {
        self.0.contains(&grade)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// `Some(m)` when exactly one grade is present.
    pub fn single(&self) -> Option<usize> {
        if self.0.len() == 1 {
            self.0.iter().next().copied()
        } else {
            None
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Multivector<S> {
    sig: Signature,
    terms: BTreeMap<IndexList, S>,
}

// Per-blade rules. `None` means the product vanishes.

pub(crate) fn wedge_blade(i: IndexList, j: IndexList) -> Option<(IndexList, i8)> {
    let m = merge_eps_sigma(i, j);
    m.list.map(|l| (l, m.sign))
}

pub(crate) fn left_blade(sig: Signature, i: IndexList, j: IndexList) -> Option<(IndexList, i8)> {
    let jc = sig.full().difference(j);
    let merged = merge_eps_sigma(i, jc).list?;
    let rest = sig.full().difference(merged);
    let s = sigma(rest, i);
    (s != 0).then(|| (rest, sig.delta(i) * s))
}

pub(crate) fn right_blade(sig: Signature, i: IndexList, j: IndexList) -> Option<(IndexList, i8)> {
    let ic = sig.full().difference(i);
    let merged = merge_eps_sigma(ic, j).list?;
    let rest = sig.full().difference(merged);
    let s = sigma(j, rest);
    (s != 0).then(|| (rest, sig.delta(j) * s))
}

pub(crate) fn hodge_blade(sig: Signature, i: IndexList) -> (IndexList, i8) {
    let ic = sig.full().difference(i);
    (ic, sig.delta(i) * sigma(i, ic))
}

pub(crate) fn inv_hodge_blade(sig: Signature, i: IndexList) -> (IndexList, i8) {
    let ic = sig.full().difference(i);
    (ic, sig.delta(ic) * sigma(ic, i))
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(sig: Signature) -> Self {
        Multivector {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: Signature, value: S) -> Self {
        let mut m = Multivector::zero(sig);
        m.add_term(IndexList::EMPTY, value);
        m
    }

    pub fn one(sig: Signature) -> Self {
        Multivector::scalar(sig, S::one())
    }

    /// `coeff · e_list`.
    pub fn blade(sig: Signature, list: IndexList, coeff: S) -> Result<Self> {
        sig.check(list)?;
        let mut m = Multivector::zero(sig);
        m.add_term(list, coeff);
        Ok(m)
    }

    /// Unit basis blade from strictly increasing indices, e.g. `basis(sig, &[0, 1])`.
    pub fn basis(sig: Signature, indices: &[usize]) -> Result<Self> {
        Multivector::blade(sig, IndexList::new(indices)?, S::one())
    }

    /// Grade-1 multivector with the given components on `e_0 … e_{k+n-1}`.
    pub fn vector(sig: Signature, components: &[S]) -> Result<Self> {
        if components.len() != sig.dim() {
            return Err(Error::PositionDimension {
                expected: sig.dim(),
                got: components.len(),
            });
        }
        let mut m = Multivector::zero(sig);
        for (i, c) in components.iter().enumerate() {
            m.add_term(IndexList::single(i), c.clone());
        }
        Ok(m)
    }

    /// Sums `(blade, coeff)` pairs, validating every blade against `sig`.
    pub fn from_terms(sig: Signature, terms: impl IntoIterator<Item = (IndexList, S)>) -> Result<Self> {
        let mut m = Multivector::zero(sig);
        for (l, c) in terms {
            sig.check(l)?;
            m.add_term(l, c);
        }
        Ok(m)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (IndexList, &S)> + '_ {
        self.terms.iter().map(|(l, c)| (*l, c))
    }

    /// Number of nonzero blade terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `e_list` (zero when absent).
    pub fn coefficient(&self, list: IndexList) -> S {
        self.terms.get(&list).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of the scalar blade.
    pub fn scalar_part(&self) -> S {
        self.coefficient(IndexList::EMPTY)
    }

    pub fn grades(&self) -> GradeSet {
        GradeSet(self.terms.keys().map(|l| l.grade()).collect())
    }

    /// Adds `coeff · e_list` in place, dropping the entry if it cancels.
    pub(crate) fn add_term(&mut self, list: IndexList, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(list) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn add_signed(&mut self, list: IndexList, sign: i8, coeff: S) {
        match sign {
            1 => self.add_term(list, coeff),
            -1 => self.add_term(list, -coeff),
            _ => {}
        }
    }

    fn same_sig(&self, other: &Self) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.sig,
                right: other.sig,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        let mut out = self.clone();
        for (l, c) in other.terms() {
            out.add_term(l, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        let mut out = self.clone();
        for (l, c) in other.terms() {
            out.add_term(l, -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Multivector::zero(self.sig);
        for (l, c) in self.terms() {
            out.add_term(l, c.clone() * s.clone());
        }
        out
    }

    fn bilinear(
        &self,
        other: &Self,
        rule: impl Fn(IndexList, IndexList) -> Option<(IndexList, i8)>,
    ) -> Result<Self> {
        self.same_sig(other)?;
        let mut out = Multivector::zero(self.sig);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                if let Some((l, s)) = rule(i, j) {
                    out.add_signed(l, s, a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    /// Exterior product `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.bilinear(other, wedge_blade)
    }

    /// Dot product; only equal blades pair up, weighted by `Δ_{I,I}`.
    pub fn dot(&self, other: &Self) -> Result<S> {
        self.same_sig(other)?;
        let mut acc = S::zero();
        for (l, a) in self.terms() {
            if let Some(b) = other.terms.get(&l) {
                acc = acc + sign_scalar::<S>(self.sig.delta(l)) * a.clone() * b.clone();
            }
        }
        Ok(acc)
    }

    /// Left interior product `self ⌋ other`; lowers grade by `|self|`.
    pub fn left_contraction(&self, other: &Self) -> Result<Self> {
        let sig = self.sig;
        self.bilinear(other, |i, j| left_blade(sig, i, j))
    }

    /// Right interior product `self ⌊ other`; lowers grade by `|other|`.
    pub fn right_contraction(&self, other: &Self) -> Result<Self> {
        let sig = self.sig;
        self.bilinear(other, |i, j| right_blade(sig, i, j))
    }

    /// Hodge complement `vᴴ`.
    pub fn hodge(&self) -> Self {
        let mut out = Multivector::zero(self.sig);
        for (l, c) in self.terms() {
            let (lc, s) = hodge_blade(self.sig, l);
            out.add_signed(lc, s, c.clone());
        }
        out
    }

    /// Inverse Hodge complement `vᴴ⁻¹`.
    pub fn inv_hodge(&self) -> Self {
        let mut out = Multivector::zero(self.sig);
        for (l, c) in self.terms() {
            let (lc, s) = inv_hodge_blade(self.sig, l);
            out.add_signed(lc, s, c.clone());
        }
        out
    }

    /// Cross product of two vectors of Euclidean 3-space: `(u ∧ v)ᴴ⁻¹`.
    pub fn cross(&self, other: &Self) -> Result<Self> {
        if self.sig != Signature::euclidean3() || other.sig != Signature::euclidean3() {
            return Err(Error::Domain {
                op: "cross",
                requirement: "signature (0,3)",
            });
        }
        if !self.is_grade(1) || !other.is_grade(1) {
            return Err(Error::Domain {
                op: "cross",
                requirement: "grade-1 operands",
            });
        }
        Ok(self.wedge(other)?.inv_hodge())
    }

    /// True when every term has grade `m` (the zero multivector counts).
    pub fn is_grade(&self, m: usize) -> bool {
        self.terms.keys().all(|l| l.grade() == m)
    }

    /// Keeps exactly the grade-`m` terms.
    pub fn grade_project(&self, m: usize) -> Result<Self> {
        if m > self.sig.dim() {
            return Err(Error::GradeOutOfRange {
                grade: m,
                dim: self.sig.dim(),
            });
        }
        Ok(Multivector {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| l.grade() == m)
                .map(|(l, c)| (*l, c.clone()))
                .collect(),
        })
    }

    /// Converts coefficients to another ring, dropping any that become zero.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        let mut out = Multivector::zero(self.sig);
        for (l, c) in self.terms() {
            out.add_term(l, f(c));
        }
        out
    }

    pub fn to_f64(&self) -> Multivector<f64> {
        self.map_scalars(|c| c.to_f64())
    }

    /// Moves the multivector into `target`, renaming index `i` to `map(i)`.
    ///
    /// A blade whose image has a repeated index vanishes; images that are out
    /// of order pick up the sorting sign. `None` from `map` is an error.
    pub fn reindex(&self, target: Signature, map: impl Fn(usize) -> Option<usize>) -> Result<Self> {
        let mut out = Multivector::zero(target);
        for (l, c) in self.terms() {
            let mut image = Vec::with_capacity(l.grade());
            for i in l.iter() {
                let j = map(i).ok_or(Error::Domain {
                    op: "reindex",
                    requirement: "every index to have an image",
                })?;
                if j >= target.dim() {
                    return Err(Error::IndexOutOfRange {
                        index: j,
                        dim: target.dim(),
                    });
                }
                image.push(j);
            }
            let sorted = sort_count(&image);
            if let Some(list) = sorted.list {
                out.add_signed(list, sorted.sign, c.clone());
            }
        }
        Ok(out)
    }

    /// Euclidean norm of the coefficient vector (not the metric norm).
    pub fn coefficient_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| {
                let x = c.to_f64();
                x * x
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }
}

impl Multivector<f64> {
    /// Drops coefficients with magnitude `<= tol`.
    pub fn prune(&self, tol: f64) -> Self {
        Multivector {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > tol)
                .map(|(l, c)| (*l, *c))
                .collect(),
        }
    }
}

/// Text name of a blade: `e013`, or `e{0,1,13}` when the space-time has ten
/// or more dimensions.
pub fn blade_name(sig: Signature, list: IndexList) -> String {
    if sig.dim() <= 10 {
        let mut s = String::from("e");
        for i in list.iter() {
            s.push(char::from(b'0' + i as u8));
        }
        s
    } else {
        let parts: Vec<String> = list.iter().map(|i| i.to_string()).collect();
        format!("e{{{}}}", parts.join(","))
    }
}

impl<S: Scalar> fmt::Display for Multivector<S> {
    /// Canonical rendering: `c*e013 + c*e2`, terms ordered by grade then
    /// lexicographically, negative coefficients shown as ` - |c|`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (l, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = (c.is_negative(), c.abs());
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if l.is_empty() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{}", blade_name(self.sig, *l))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector{}[{}]", self.sig, self)
    }
}

// Operator sugar. These panic on a signature mismatch; use the `checked_*`
// methods when the operands may come from different spaces.

impl<S: Scalar> Add for &Multivector<S> {
    type Output = Multivector<S>;
    fn add(self, rhs: Self) -> Multivector<S> {
        self.checked_add(rhs).expect("multivector addition")
    }
}

impl<S: Scalar> Add for Multivector<S> {
    type Output = Multivector<S>;
    fn add(self, rhs: Self) -> Multivector<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for &Multivector<S> {
    type Output = Multivector<S>;
    fn sub(self, rhs: Self) -> Multivector<S> {
        self.checked_sub(rhs).expect("multivector subtraction")
    }
}

impl<S: Scalar> Sub for Multivector<S> {
    type Output = Multivector<S>;
    fn sub(self, rhs: Self) -> Multivector<S> {
        &self - &rhs
    }
}

impl<S: Scalar> AddAssign<&Multivector<S>> for Multivector<S> {
    fn add_assign(&mut self, rhs: &Multivector<S>) {
        assert_eq!(self.sig, rhs.sig, "multivector addition");
        for (l, c) in rhs.terms() {
            self.add_term(l, c.clone());
        }
    }
}

impl<S: Scalar> SubAssign<&Multivector<S>> for Multivector<S> {
    fn sub_assign(&mut self, rhs: &Multivector<S>) {
        assert_eq!(self.sig, rhs.sig, "multivector subtraction");
        for (l, c) in rhs.terms() {
            self.add_term(l, -c.clone());
        }
    }
}

impl<S: Scalar> Neg for &Multivector<S> {
    type Output = Multivector<S>;
    fn neg(self) -> Multivector<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for Multivector<S> {
    type Output = Multivector<S>;
    fn neg(self) -> Multivector<S> {
        -&self
    }
}

impl<S: Scalar> Mul<S> for &Multivector<S> {
    type Output = Multivector<S>;
    fn mul(self, rhs: S) -> Multivector<S> {
        self.scale(&rhs)
    }
}

impl<S: Scalar> Mul<S> for Multivector<S> {
    type Output = Multivector<S>;
    fn mul(self, rhs: S) -> Multivector<S> {
        self.scale(&rhs)
    }
}
