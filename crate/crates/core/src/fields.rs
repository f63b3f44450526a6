//! Multivector-valued fields and the derivative operator `∂ = Σ Δ_ii e_i ∂_i`.
//!
//! Two representations implement [`Field`]:
//!
//! * [`PolynomialField`]: per-blade polynomials with rational coefficients.
//!   Derivatives are formal, so identities can be checked with zero tolerance.
//! * [`AnalyticField`]: an opaque closure, differentiated by central differences
//!   unless exact partials are supplied.
//!
//! `∂` itself is never a value; it only appears through [`exterior_derivative`]
//! and [`interior_derivative`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Index;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::scalar::{Rational, Scalar};
use crate::signatures::{sigma, IndexList, Signature};

/// Default central-difference half-step, `2⁻¹⁶`.
pub const DEFAULT_FD_STEP: f64 = 1.0 / 65536.0;

/// A space-time point; time coordinates come first.
#[derive(Debug, Clone, PartialEq)]
pub struct Position(Vec<f64>);

impl Position {
    pub fn new(coords: Vec<f64>) -> Self {
        Position(coords)
    }

    pub fn origin(sig: Signature) -> Self {
        Position(vec![0.0; sig.dim()])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn check(&self, sig: Signature) -> Result<()> {
        if self.0.len() == sig.dim() {
            Ok(())
        } else {
            Err(Error::PositionDimension {
                expected: sig.dim(),
                got: self.0.len(),
            })
        }
    }

    /// Copy with `coords[axis] += h`.
    pub fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut c = self.0.clone();
        c[axis] += h;
        Position(c)
    }

    /// The coordinates as exact rationals (every finite `f64` is a rational).
    pub fn to_rational(&self) -> Result<Vec<Rational>> {
        self.0
            .iter()
            .map(|&v| Rational::from_float(v).ok_or_else(|| Error::Invalid(format!("non-finite coordinate {v}"))))
            .collect()
    }
}

impl From<Vec<f64>> for Position {
    fn from(v: Vec<f64>) -> Self {
        Position(v)
    }
}

impl Index<usize> for Position {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A multivector-valued function of position. Implementations must be safe to
/// evaluate from several threads at once.
pub trait Field: Send + Sync {
    fn signature(&self) -> Signature;

    fn eval(&self, x: &Position) -> Result<Multivector<f64>>;

    /// `∂_axis f` at `x`. `axis` has already been range-checked.
    fn partial_unchecked(&self, axis: usize, x: &Position) -> Result<Multivector<f64>>;

    /// The exact representation, when there is one.
    fn as_polynomial(&self) -> Option<&PolynomialField> {
        None
    }
}

// ---------------------------------------------------------------------------
// Polynomials

/// Multivariate polynomial with rational coefficients, keyed by exponent vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(vars);
        p.add_monomial(vec![0; vars], c);
        p
    }

    /// The coordinate `x_i`.
    pub fn var(vars: usize, i: usize) -> Self {
        let mut exps = vec![0; vars];
        exps[i] = 1;
        let mut p = Polynomial::zero(vars);
        p.add_monomial(exps, Rational::one());
        p
    }

    /// `c · Π x_i^{exps[i]}`.
    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Polynomial::zero(exps.len());
        p.add_monomial(exps, c);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_monomial(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.vars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_monomial(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_monomial(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, other.vars, "polynomial variable count");
        let mut out = Polynomial::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_monomial(e, ca * cb);
            }
        }
        out
    }

    /// Formal `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_monomial(d, c * Rational::from_i64(e[i] as i64));
            }
        }
        out
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &p) in x.iter().zip(e) {
                for _ in 0..p {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| if p == 1 { format!("x{i}") } else { format!("x{i}^{p}") })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coefficients converted once for fast floating evaluation.
#[derive(Clone, Debug)]
struct Compiled(Vec<(IndexList, Vec<Monomial>)>);

/// Exponents and coefficient of one term.
type Monomial = (Vec<u32>, f64);

impl Compiled {
    fn new(terms: &BTreeMap<IndexList, Polynomial>) -> Self {
        Compiled(
            terms
                .iter()
                .map(|(b, p)| (*b, p.terms().map(|(e, c)| (e.to_vec(), c.to_f64())).collect()))
                .collect(),
        )
    }

    fn eval(&self, sig: Signature, x: &[f64]) -> Multivector<f64> {
        let terms = self.0.iter().map(|(b, poly)| {
            let v = poly
                .iter()
                .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&p, &xi)| acc * xi.powi(p as i32)))
                .sum::<f64>();
            (*b, v)
        });
        Multivector::from_terms(sig, terms).expect("blades validated at construction")
    }
}

// ---------------------------------------------------------------------------
// Polynomial fields

/// Field whose blade coefficients are polynomials in the `k+n` coordinates.
pub struct PolynomialField {
    sig: Signature,
    terms: BTreeMap<IndexList, Polynomial>,
    compiled: Compiled,
    partials: OnceLock<Vec<PolynomialField>>,
}

impl Clone for PolynomialField {
    fn clone(&self) -> Self {
        PolynomialField {
            sig: self.sig,
            terms: self.terms.clone(),
            compiled: self.compiled.clone(),
            partials: OnceLock::new(),
        }
    }
}

impl PartialEq for PolynomialField {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.terms == other.terms
    }
}

impl fmt::Debug for PolynomialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolynomialField")
            .field("sig", &self.sig)
            .field("terms", &self.terms)
            .finish()
    }
}

impl PolynomialField {
    /// Sums `(blade, polynomial)` pairs. Polynomials must use `k+n` variables.
    pub fn new(sig: Signature, entries: impl IntoIterator<Item = (IndexList, Polynomial)>) -> Result<Self> {
        let mut terms: BTreeMap<IndexList, Polynomial> = BTreeMap::new();
        for (b, p) in entries {
            sig.check(b)?;
            if p.vars() != sig.dim() {
                return Err(Error::PositionDimension {
                    expected: sig.dim(),
                    got: p.vars(),
                });
            }
            let sum = match terms.remove(&b) {
                Some(q) => q.add(&p),
                None => p,
            };
            if !sum.is_zero() {
                terms.insert(b, sum);
            }
        }
        Ok(Self::from_map(sig, terms))
    }

    fn from_map(sig: Signature, terms: BTreeMap<IndexList, Polynomial>) -> Self {
        let compiled = Compiled::new(&terms);
        PolynomialField {
            sig,
            terms,
            compiled,
            partials: OnceLock::new(),
        }
    }

    pub fn zero(sig: Signature) -> Self {
        Self::from_map(sig, BTreeMap::new())
    }

    /// Scalar field `p`.
    pub fn scalar(sig: Signature, p: Polynomial) -> Result<Self> {
        Self::new(sig, [(IndexList::EMPTY, p)])
    }

    /// Grade-1 field with component polynomials on `e_0 … e_{k+n-1}`.
    pub fn vector(sig: Signature, comps: Vec<Polynomial>) -> Result<Self> {
        if comps.len() != sig.dim() {
            return Err(Error::PositionDimension {
                expected: sig.dim(),
                got: comps.len(),
            });
        }
        Self::new(sig, comps.into_iter().enumerate().map(|(i, p)| (IndexList::single(i), p)))
    }

    /// Constant field with value `v`.
    pub fn constant(v: &Multivector<Rational>) -> Self {
        let sig = v.signature();
        let terms = v
            .terms()
            .map(|(b, c)| (b, Polynomial::constant(sig.dim(), c.clone())))
            .collect();
        Self::from_map(sig, terms)
    }

    /// The scalar coordinate field `x_i`.
    pub fn coordinate(sig: Signature, i: usize) -> Result<Self> {
        if i >= sig.dim() {
            return Err(Error::IndexOutOfRange { index: i, dim: sig.dim() });
        }
        Self::scalar(sig, Polynomial::var(sig.dim(), i))
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (IndexList, &Polynomial)> + '_ {
        self.terms.iter().map(|(b, p)| (*b, p))
    }

    pub fn component(&self, blade: IndexList) -> Polynomial {
        self.terms.get(&blade).cloned().unwrap_or_else(|| Polynomial::zero(self.sig.dim()))
    }

    pub fn degree(&self) -> u32 {
        self.terms.values().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// True when every blade has grade `m` (the zero field counts).
    pub fn is_grade(&self, m: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == m)
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Result<Multivector<Rational>> {
        if x.len() != self.sig.dim() {
            return Err(Error::PositionDimension {
                expected: self.sig.dim(),
                got: x.len(),
            });
        }
        Multivector::from_terms(self.sig, self.terms.iter().map(|(b, p)| (*b, p.eval_exact(x))))
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

    fn accumulate(&self, items: impl IntoIterator<Item = (IndexList, Polynomial)>) -> Self {
        Self::new(self.sig, items).expect("blades stay inside the signature")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        Ok(self.accumulate(self.terms.iter().chain(&other.terms).map(|(b, p)| (*b, p.clone()))))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        self.accumulate(self.terms.iter().map(|(b, p)| (*b, p.scale(s))))
    }

    /// Pointwise product with a scalar polynomial.
    pub fn mul_polynomial(&self, p: &Polynomial) -> Self {
        self.accumulate(self.terms.iter().map(|(b, q)| (*b, q.mul(p))))
    }

    /// Pointwise exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        let mut items = Vec::new();
        for (i, p) in &self.terms {
            for (j, q) in &other.terms {
                let m = crate::signatures::merge_eps_sigma(*i, *j);
                if let Some(l) = m.list {
                    items.push((l, p.mul(q).scale(&Rational::from_i64(m.sign as i64))));
                }
            }
        }
        Ok(self.accumulate(items))
    }

    /// Applies a linear blade map `e_I ↦ sign · e_J` to every term.
    pub(crate) fn map_blades(&self, f: impl Fn(IndexList) -> (IndexList, i8)) -> Self {
        self.accumulate(self.terms.iter().map(|(b, p)| {
            let (l, s) = f(*b);
            (l, p.scale(&Rational::from_i64(s as i64)))
        }))
    }

    pub fn hodge(&self) -> Self {
        let sig = self.sig;
        self.map_blades(|b| crate::multivector::hodge_blade(sig, b))
    }

    pub fn inv_hodge(&self) -> Self {
        let sig = self.sig;
        self.map_blades(|b| crate::multivector::inv_hodge_blade(sig, b))
    }

    pub fn grade_project(&self, m: usize) -> Self {
        Self::from_map(
            self.sig,
            self.terms
                .iter()
                .filter(|(b, _)| b.grade() == m)
                .map(|(b, p)| (*b, p.clone()))
                .collect(),
        )
    }

    /// Formal `∂_i` of every coefficient.
    pub fn partial_field(&self, i: usize) -> Result<Self> {
        if i >= self.sig.dim() {
            return Err(Error::IndexOutOfRange { index: i, dim: self.sig.dim() });
        }
        Ok(self.accumulate(self.terms.iter().map(|(b, p)| (*b, p.derivative(i)))))
    }

    fn cached_partials(&self) -> &[PolynomialField] {
        self.partials.get_or_init(|| {
            (0..self.sig.dim())
                .map(|i| self.partial_field(i).expect("axis in range"))
                .collect()
        })
    }

    /// Symbolic `∂∧f`.
    pub fn exterior_derivative(&self) -> Self {
        let mut items = Vec::new();
        for i in 0..self.sig.dim() {
            let di = IndexList::single(i);
            let metric = self.sig.metric(i);
            for (b, p) in &self.terms {
                let s = sigma(di, *b);
                if s != 0 {
                    let c = Rational::from_i64((metric * s) as i64);
                    items.push((di.union(*b), p.derivative(i).scale(&c)));
                }
            }
        }
        self.accumulate(items)
    }

    /// Symbolic `∂⌋f`.
    pub fn interior_derivative(&self) -> Self {
        let mut items = Vec::new();
        for (b, p) in &self.terms {
            for i in b.iter() {
                let rest = b.without(i);
                let s = sigma(rest, IndexList::single(i));
                items.push((rest, p.derivative(i).scale(&Rational::from_i64(s as i64))));
            }
        }
        self.accumulate(items)
    }

    /// Symbolic `(∂∧f)ᴴ⁻¹` for a grade-1 field of Euclidean 3-space.
    pub fn curl3(&self) -> Result<Self> {
        require_euclidean_vector("curl3", self.sig, self.is_grade(1))?;
        Ok(self.exterior_derivative().inv_hodge())
    }

    /// Component-wise `Σ_i Δ_ii ∂_i² f`.
    pub fn laplacian(&self) -> Self {
        let mut items = Vec::new();
        for i in 0..self.sig.dim() {
            let c = Rational::from_i64(self.sig.metric(i) as i64);
            for (b, p) in &self.terms {
                items.push((*b, p.derivative(i).derivative(i).scale(&c)));
            }
        }
        self.accumulate(items)
    }

    /// Moves the field into `target`, renaming coordinate and blade index `i`
    /// to `map(i)`. Coordinates of `target` without a preimage are unused.
    pub fn reindex(&self, target: Signature, map: impl Fn(usize) -> usize) -> Result<Self> {
        let mut items = Vec::new();
        for (b, p) in &self.terms {
            let image: Vec<usize> = b.iter().map(&map).collect();
            let sorted = crate::signatures::sort_count(&image);
            let Some(list) = sorted.list else { continue };
            let mut q = Polynomial::zero(target.dim());
            for (e, c) in p.terms() {
                let mut exps = vec![0u32; target.dim()];
                for (i, &pow) in e.iter().enumerate() {
                    if pow > 0 {
                        let j = map(i);
                        if j >= target.dim() {
                            return Err(Error::IndexOutOfRange { index: j, dim: target.dim() });
                        }
                        exps[j] += pow;
                    }
                }
                q.add_monomial(exps, c * Rational::from_i64(sorted.sign as i64));
            }
            items.push((list, q));
        }
        PolynomialField::new(target, items)
    }
}

impl Field for PolynomialField {
    fn signature(&self) -> Signature {
        self.sig
    }

    fn eval(&self, x: &Position) -> Result<Multivector<f64>> {
        x.check(self.sig)?;
        Ok(self.compiled.eval(self.sig, x.coords()))
    }

    fn partial_unchecked(&self, axis: usize, x: &Position) -> Result<Multivector<f64>> {
        self.cached_partials()[axis].eval(x)
    }

    fn as_polynomial(&self) -> Option<&PolynomialField> {
        Some(self)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldDoc {
    signature: Signature,
    blades: Vec<BladeDoc>,
}

#[derive(Serialize, Deserialize)]
struct BladeDoc {
    blade: Vec<usize>,
    poly: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    coeff: String,
    exps: Vec<u32>,
}

impl Serialize for PolynomialField {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let doc = FieldDoc {
            signature: self.sig,
            blades: self
                .terms
                .iter()
                .map(|(b, p)| BladeDoc {
                    blade: b.to_vec(),
                    poly: p
                        .terms()
                        .map(|(e, c)| TermDoc {
                            coeff: format!("{}/{}", c.numer(), c.denom()),
                            exps: e.to_vec(),
                        })
                        .collect(),
                })
                .collect(),
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolynomialField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = FieldDoc::deserialize(d)?;
        let sig = doc.signature;
        let mut entries = Vec::new();
        for b in doc.blades {
            let blade = IndexList::new(&b.blade).map_err(D::Error::custom)?;
            let mut p = Polynomial::zero(sig.dim());
            for t in b.poly {
                if t.exps.len() != sig.dim() {
                    return Err(D::Error::custom(format!(
                        "exponent vector has {} entries, signature needs {}",
                        t.exps.len(),
                        sig.dim()
                    )));
                }
                let c = Rational::from_str(t.coeff.trim())
                    .map_err(|_| D::Error::custom(format!("bad rational coefficient {:?}", t.coeff)))?;
                p.add_monomial(t.exps, c);
            }
            entries.push((blade, p));
        }
        PolynomialField::new(sig, entries).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Analytic fields

type EvalFn = dyn Fn(&Position) -> Multivector<f64> + Send + Sync;
type PartialFn = dyn Fn(usize, &Position) -> Multivector<f64> + Send + Sync;

/// Field given by a closure; partials by central differences unless exact
/// ones are attached with [`AnalyticField::with_partials`].
#[derive(Clone)]
pub struct AnalyticField {
    sig: Signature,
    f: Arc<EvalFn>,
    partials: Option<Arc<PartialFn>>,
    fd_step: f64,
}

impl AnalyticField {
    pub fn new(sig: Signature, f: impl Fn(&Position) -> Multivector<f64> + Send + Sync + 'static) -> Self {
        AnalyticField {
            sig,
            f: Arc::new(f),
            partials: None,
            fd_step: DEFAULT_FD_STEP,
        }
    }

    /// Sets the central-difference half-step `h`.
    pub fn with_step(mut self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidStep(h));
        }
        self.fd_step = h;
        Ok(self)
    }

    /// Supplies exact partial derivatives `(axis, x) ↦ ∂_axis f(x)`.
    pub fn with_partials(
        mut self,
        d: impl Fn(usize, &Position) -> Multivector<f64> + Send + Sync + 'static,
    ) -> Self {
        self.partials = Some(Arc::new(d));
        self
    }

    /// Opaque wrapper around any field, forgetting its exact derivatives.
    pub fn wrap(inner: Arc<dyn Field>) -> Self {
        let sig = inner.signature();
        AnalyticField::new(sig, move |x| inner.eval(x).expect("position checked by wrapper"))
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    fn call(&self, x: &Position) -> Result<Multivector<f64>> {
        let v = (self.f)(x);
        if v.signature() != self.sig {
            return Err(Error::SignatureMismatch {
                left: self.sig,
                right: v.signature(),
            });
        }
        Ok(v)
    }
}

impl Field for AnalyticField {
    fn signature(&self) -> Signature {
        self.sig
    }

    fn eval(&self, x: &Position) -> Result<Multivector<f64>> {
        x.check(self.sig)?;
        self.call(x)
    }

    fn partial_unchecked(&self, axis: usize, x: &Position) -> Result<Multivector<f64>> {
        if let Some(d) = &self.partials {
            return Ok(d(axis, x));
        }
        let h = self.fd_step;
        let fwd = self.call(&x.shifted(axis, h))?;
        let bwd = self.call(&x.shifted(axis, -h))?;
        Ok((&fwd - &bwd).scale(&(0.5 / h)))
    }
}

// ---------------------------------------------------------------------------
// Derivative operators at a point

/// `∂_axis f` at `x`.
pub fn partial(f: &dyn Field, axis: usize, x: &Position) -> Result<Multivector<f64>> {
    let sig = f.signature();
    if axis >= sig.dim() {
        return Err(Error::IndexOutOfRange { index: axis, dim: sig.dim() });
    }
    x.check(sig)?;
    f.partial_unchecked(axis, x)
}

/// `∂∧f` at `x`: `Σ_i Σ_I Δ_ii ∂_i f_I σ(i,I) e_{ε(i,I)}`.
pub fn exterior_derivative(f: &dyn Field, x: &Position) -> Result<Multivector<f64>> {
    let sig = f.signature();
    x.check(sig)?;
    let mut out = Multivector::zero(sig);
    for i in 0..sig.dim() {
        let di = IndexList::single(i);
        let metric = sig.metric(i) as f64;
        for (b, c) in f.partial_unchecked(i, x)?.terms() {
            let s = sigma(di, b);
            if s != 0 {
                out.add_term(di.union(b), metric * s as f64 * c);
            }
        }
    }
    Ok(out)
}

/// `∂⌋f` at `x`: `Σ_{i∈I} ∂_i f_I σ(I∖i, i) e_{I∖i}`.
pub fn interior_derivative(f: &dyn Field, x: &Position) -> Result<Multivector<f64>> {
    let sig = f.signature();
    x.check(sig)?;
    let mut out = Multivector::zero(sig);
    let partials: Vec<Multivector<f64>> = (0..sig.dim())
        .map(|i| f.partial_unchecked(i, x))
        .collect::<Result<_>>()?;
    for (i, d) in partials.iter().enumerate() {
        for (b, c) in d.terms() {
            if b.contains(i) {
                let rest = b.without(i);
                out.add_term(rest, sigma(rest, IndexList::single(i)) as f64 * c);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    Exterior,
    Interior,
}

/// `∂∧f` or `∂⌋f` of an opaque field, itself usable as a field; its own
/// partials are central differences with step `h`.
pub struct DerivedField<'a> {
    inner: &'a dyn Field,
    kind: Derivative,
    fd_step: f64,
}

impl Field for DerivedField<'_> {
    fn signature(&self) -> Signature {
        self.inner.signature()
    }

    fn eval(&self, x: &Position) -> Result<Multivector<f64>> {
        match self.kind {
            Derivative::Exterior => exterior_derivative(self.inner, x),
            Derivative::Interior => interior_derivative(self.inner, x),
        }
    }

    fn partial_unchecked(&self, axis: usize, x: &Position) -> Result<Multivector<f64>> {
        let h = self.fd_step;
        let fwd = self.eval(&x.shifted(axis, h))?;
        let bwd = self.eval(&x.shifted(axis, -h))?;
        Ok((&fwd - &bwd).scale(&(0.5 / h)))
    }
}

/// `∂∧f` or `∂⌋f` as a field: symbolic for polynomial fields, pointwise otherwise.
pub fn derived_field(f: &dyn Field, kind: Derivative) -> Box<dyn Field + '_> {
    match (f.as_polynomial(), kind) {
        (Some(p), Derivative::Exterior) => Box::new(p.exterior_derivative()),
        (Some(p), Derivative::Interior) => Box::new(p.interior_derivative()),
        (None, kind) => Box::new(DerivedField {
            inner: f,
            kind,
            fd_step: DEFAULT_FD_STEP,
        }),
    }
}

fn require_euclidean_vector(op: &'static str, sig: Signature, grade_one: bool) -> Result<()> {
    if sig != Signature::euclidean3() {
        return Err(Error::Domain {
            op,
            requirement: "signature (0,3)",
        });
    }
    if !grade_one {
        return Err(Error::Domain {
            op,
            requirement: "a grade-1 field",
        });
    }
    Ok(())
}

/// `∇φ = ∂∧φ` for a scalar field.
pub fn gradient(f: &dyn Field, x: &Position) -> Result<Multivector<f64>> {
    if !f.eval(x)?.is_grade(0) {
        return Err(Error::Domain {
            op: "gradient",
            requirement: "a scalar field",
        });
    }
    exterior_derivative(f, x)
}

/// `∇·v = ∂⌋v` for a grade-1 field.
pub fn divergence(f: &dyn Field, x: &Position) -> Result<Multivector<f64>> {
    if !f.eval(x)?.is_grade(1) {
        return Err(Error::Domain {
            op: "divergence",
            requirement: "a grade-1 field",
        });
    }
    interior_derivative(f, x)
}

/// `∇×v = (∂∧v)ᴴ⁻¹` for a grade-1 field of Euclidean 3-space.
pub fn curl3(f: &dyn Field, x: &Position) -> Result<Multivector<f64>> {
    let grade_one = f.eval(x)?.is_grade(1);
    require_euclidean_vector("curl3", f.signature(), grade_one)?;
    Ok(exterior_derivative(f, x)?.inv_hodge())
}

/// `(∂∧(∂∧f), ∂⌋(∂⌋f))` at `x`, computed exactly. Only polynomial fields qualify.
pub fn nabla_apply(f: &dyn Field, x: &Position) -> Result<(Multivector<Rational>, Multivector<Rational>)> {
    let p = f.as_polynomial().ok_or(Error::InexactField("nabla_apply"))?;
    let xr = x.to_rational()?;
    let outer = p.exterior_derivative().exterior_derivative();
    let inner = p.interior_derivative().interior_derivative();
    Ok((outer.eval_exact(&xr)?, inner.eval_exact(&xr)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_polynomial, random_polynomial_field, Sampler};
    use crate::scalar::rational;

    fn sig(k: usize, n: usize) -> Signature {
        Signature::new(k, n).unwrap()
    }

    fn r(p: i64) -> Rational {
        rational(p, 1)
    }

    fn mono(exps: &[u32], c: i64) -> Polynomial {
        Polynomial::monomial(exps.to_vec(), r(c))
    }

    fn b(idx: &[usize]) -> IndexList {
        IndexList::new(idx).unwrap()
    }

    fn exact(s: Signature, terms: &[(&[usize], i64)]) -> Multivector<Rational> {
        Multivector::from_terms(s, terms.iter().map(|(i, c)| (b(i), r(*c)))).unwrap()
    }

    #[test]
    fn partial_examples() {
        let s = sig(0, 3);
        let f = PolynomialField::new(s, [(b(&[2]), mono(&[0, 2, 0], 1))]).unwrap();
        let d = f.partial_field(1).unwrap();
        assert_eq!(d, PolynomialField::new(s, [(b(&[2]), mono(&[0, 1, 0], 2))]).unwrap());
        let x = Position::new(vec![0.5, 1.5, -2.0]);
        assert_eq!(partial(&f, 1, &x).unwrap().coefficient(b(&[2])), 3.0);

        let c = PolynomialField::constant(&exact(s, &[(&[0, 1], 4)]));
        assert!(partial(&c, 0, &x).unwrap().is_zero());
        assert!(matches!(partial(&c, 3, &x), Err(Error::IndexOutOfRange { .. })));

        let one = sig(0, 1);
        let h = DEFAULT_FD_STEP;
        let sine = AnalyticField::new(one, move |x| Multivector::scalar(one, x[0].sin()));
        let d = partial(&sine, 0, &Position::new(vec![0.0])).unwrap().scalar_part();
        assert!((d - 1.0).abs() <= h * h / 6.0 + 1e-15);
    }

    #[test]
    fn exterior_derivative_examples() {
        let e3 = sig(0, 3);
        let f = PolynomialField::coordinate(e3, 1).unwrap();
        assert_eq!(f.exterior_derivative(), PolynomialField::constant(&exact(e3, &[(&[1], 1)])));

        let m = sig(1, 3);
        let t = PolynomialField::coordinate(m, 0).unwrap();
        assert_eq!(t.exterior_derivative(), PolynomialField::constant(&exact(m, &[(&[0], -1)])));

        let p = sig(0, 2);
        let g = PolynomialField::new(p, [(b(&[1]), mono(&[1, 0], 1))]).unwrap();
        assert_eq!(g.exterior_derivative(), PolynomialField::constant(&exact(p, &[(&[0, 1], 1)])));
        let x = Position::new(vec![0.3, 0.7]);
        assert_eq!(exterior_derivative(&g, &x).unwrap(), exact(p, &[(&[0, 1], 1)]).to_f64());
    }

    #[test]
    fn interior_derivative_examples() {
        let s = sig(0, 3);
        let f = PolynomialField::new(s, [(b(&[1]), mono(&[0, 1, 0], 1))]).unwrap();
        assert_eq!(f.interior_derivative(), PolynomialField::constant(&exact(s, &[(&[], 1)])));

        let radial = PolynomialField::vector(s, (0..3).map(|i| Polynomial::var(3, i)).collect()).unwrap();
        assert_eq!(radial.interior_derivative(), PolynomialField::constant(&exact(s, &[(&[], 3)])));
        let x = Position::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(divergence(&radial, &x).unwrap().scalar_part(), 3.0);

        let phi = PolynomialField::scalar(s, mono(&[2, 1, 0], 5)).unwrap();
        assert!(phi.interior_derivative().is_zero());
    }

    #[test]
    fn curl_examples() {
        let s = sig(0, 3);
        let rot = PolynomialField::vector(s, vec![mono(&[0, 1, 0], -1), mono(&[1, 0, 0], 1), Polynomial::zero(3)])
            .unwrap();
        assert_eq!(rot.curl3().unwrap(), PolynomialField::constant(&exact(s, &[(&[2], 2)])));

        let mut rng = Sampler::new(3);
        let phi = PolynomialField::scalar(s, random_polynomial(&mut rng, 3, 4, 5)).unwrap();
        assert!(phi.exterior_derivative().curl3().unwrap().is_zero());

        let radial0 = PolynomialField::new(s, [(b(&[0]), mono(&[1, 0, 0], 1))]).unwrap();
        assert!(radial0.curl3().unwrap().is_zero());

        assert!(PolynomialField::coordinate(sig(1, 3), 0).unwrap().curl3().is_err());
        assert!(phi.curl3().is_err());
    }

    #[test]
    fn nabla_apply_examples() {
        let s = sig(1, 3);
        let mut rng = Sampler::new(4);
        let x = Position::new(vec![0.25, -1.0, 2.0, 0.5]);
        for grade in 0..=4 {
            let f = random_polynomial_field(&mut rng, s, grade, 4);
            let (a, c) = nabla_apply(&f, &x).unwrap();
            assert!(a.is_zero() && c.is_zero());
        }
        let analytic = AnalyticField::new(s, move |_| Multivector::zero(s));
        assert!(matches!(nabla_apply(&analytic, &x), Err(Error::InexactField(_))));
    }

    #[test]
    fn nilpotency_exact() {
        let mut rng = Sampler::new(17);
        for s in Signature::all_up_to(4) {
            for grade in 0..=s.dim() {
                for _ in 0..4 {
                    let f = random_polynomial_field(&mut rng, s, grade, 4);
                    assert!(f.exterior_derivative().exterior_derivative().is_zero());
                    assert!(f.interior_derivative().interior_derivative().is_zero());
                }
            }
        }
    }

    /// `(a·∂) b = Σ_i a_i ∂_i b` for a grade-1 field `a`.
    fn directional(a: &PolynomialField, b: &PolynomialField) -> PolynomialField {
        let mut out = PolynomialField::zero(b.signature());
        for i in 0..b.signature().dim() {
            let ai = a.component(IndexList::single(i));
            out = out.add(&b.partial_field(i).unwrap().mul_polynomial(&ai)).unwrap();
        }
        out
    }

    #[test]
    fn leibniz_rule() {
        let mut rng = Sampler::new(23);
        for s in Signature::all_up_to(4) {
            for _ in 0..5 {
                let v = random_polynomial_field(&mut rng, s, 1, 3);
                let w = random_polynomial_field(&mut rng, s, 1, 3);
                let lhs = v.wedge(&w).unwrap().interior_derivative();
                let div_w = w.interior_derivative().component(IndexList::EMPTY);
                let div_v = v.interior_derivative().component(IndexList::EMPTY);
                let divergence_part = v.mul_polynomial(&div_w).sub(&w.mul_polynomial(&div_v)).unwrap();
                let transport = directional(&w, &v).sub(&directional(&v, &w)).unwrap();
                assert_eq!(lhs, divergence_part.add(&transport).unwrap());
            }
        }
    }

    fn classical_curl(v: &PolynomialField) -> PolynomialField {
        let c = |i: usize| v.component(IndexList::single(i));
        let comps = vec![
            c(2).derivative(1).sub(&c(1).derivative(2)),
            c(0).derivative(2).sub(&c(2).derivative(0)),
            c(1).derivative(0).sub(&c(0).derivative(1)),
        ];
        PolynomialField::vector(v.signature(), comps).unwrap()
    }

    #[test]
    fn classical_operators_in_three_space() {
        let s = sig(0, 3);
        let mut rng = Sampler::new(29);
        for _ in 0..30 {
            let v = random_polynomial_field(&mut rng, s, 1, 4);
            let curl = v.curl3().unwrap();
            assert_eq!(curl, classical_curl(&v));
            // alternative spellings of the curl
            assert_eq!(curl, v.inv_hodge().interior_derivative());
            assert_eq!(curl, v.hodge().interior_derivative());

            let lhs = curl.curl3().unwrap();
            let rhs = v.interior_derivative().exterior_derivative().sub(&v.laplacian()).unwrap();
            assert_eq!(lhs, rhs);
            assert!(curl.interior_derivative().is_zero());

            let phi = PolynomialField::scalar(s, random_polynomial(&mut rng, 3, 4, 5)).unwrap();
            let grad = phi.exterior_derivative();
            let classical_grad =
                PolynomialField::vector(s, (0..3).map(|i| phi.component(IndexList::EMPTY).derivative(i)).collect())
                    .unwrap();
            assert_eq!(grad, classical_grad);
            assert_eq!(grad.interior_derivative(), phi.laplacian());
            assert!(grad.curl3().unwrap().is_zero());
        }
    }

    #[test]
    fn pointwise_matches_symbolic() {
        let mut rng = Sampler::new(31);
        for s in [sig(0, 2), sig(0, 3), sig(1, 3)] {
            for grade in 0..=s.dim() {
                let f = random_polynomial_field(&mut rng, s, grade, 3);
                let x = Position::new((0..s.dim()).map(|_| rng.uniform(-1.0, 1.0)).collect());
                let d = exterior_derivative(&f, &x).unwrap();
                let want = f.exterior_derivative().eval(&x).unwrap();
                assert!((&d - &want).max_abs() < 1e-12);
                let d = interior_derivative(&f, &x).unwrap();
                let want = f.interior_derivative().eval(&x).unwrap();
                assert!((&d - &want).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn analytic_agreement_and_order() {
        let mut rng = Sampler::new(37);
        let s = sig(1, 3);
        for grade in 0..=4 {
            let f = Arc::new(random_polynomial_field(&mut rng, s, grade, 3));
            let x = Position::new((0..4).map(|_| rng.uniform(-1.0, 1.0)).collect());
            let exact_d = f.exterior_derivative().eval(&x).unwrap();
            let err = |h: f64| {
                let a = AnalyticField::wrap(f.clone()).with_step(h).unwrap();
                (&exterior_derivative(&a, &x).unwrap() - &exact_d).max_abs()
            };
            // cubic coefficients: truncation error is h² f'''/6 per axis
            let bound = 8.0 * 81.0 * DEFAULT_FD_STEP * DEFAULT_FD_STEP + 1e-9;
            assert!(err(DEFAULT_FD_STEP) <= bound);
            let (e1, e2) = (err(0.05), err(0.025));
            if e1 > 1e-9 {
                let ratio = e1 / e2;
                assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
            }
        }
    }

    #[test]
    fn invalid_step_rejected() {
        let s = sig(0, 1);
        let f = AnalyticField::new(s, move |_| Multivector::zero(s));
        assert!(matches!(f.clone().with_step(0.0), Err(Error::InvalidStep(_))));
        assert!(f.with_step(-1.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut rng = Sampler::new(41);
        let f = random_polynomial_field(&mut rng, sig(1, 3), 2, 3);
        let text = serde_json::to_string(&f).unwrap();
        let back: PolynomialField = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let doc = r#"{"signature":{"k":0,"n":2},"blades":[{"blade":[1],"poly":[{"coeff":"1/2","exps":[1,0]}]}]}"#;
        let g: PolynomialField = serde_json::from_str(doc).unwrap();
        assert_eq!(g.component(b(&[1])), Polynomial::monomial(vec![1, 0], rational(1, 2)));
        let bad = r#"{"signature":{"k":0,"n":2},"blades":[{"blade":[2],"poly":[]}]}"#;
        assert!(serde_json::from_str::<PolynomialField>(bad).is_err());
    }

    #[test]
    fn reindex_moves_coordinates_and_blades() {
        let e3 = sig(0, 3);
        let m = sig(1, 3);
        let f = PolynomialField::new(e3, [(b(&[0, 2]), mono(&[1, 0, 2], 3))]).unwrap();
        let g = f.reindex(m, |i| i + 1).unwrap();
        assert_eq!(g, PolynomialField::new(m, [(b(&[1, 3]), mono(&[0, 1, 0, 2], 3))]).unwrap());
    }
}
