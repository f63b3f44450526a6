//! Electromagnetism in the `(1,3)` space-time.
//!
//! The field is the bivector `F = e0∧E + Bᴴ̃` and the source the vector
//! `J = ρe0 + j`, where `ᴴ̃` is the Hodge complement of the spatial indices
//! `1..3` only. Maxwell's equations read `∂∧F = 0` and `∂⌋F = J`; the force
//! density is `J⌋F`. Units are rationalized (no `ε₀`, `μ₀`, `c`).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{
    curl3, divergence, exterior_derivative, interior_derivative, partial, AnalyticField, Field, Polynomial,
    PolynomialField, Position, DEFAULT_FD_STEP,
};
use crate::geometry::{circulation, flux, Cell, Chain, Quadrature};
use crate::multivector::{hodge_blade, inv_hodge_blade, Multivector};
use crate::scalar::{Rational, Scalar};
use crate::signatures::{IndexList, Signature};

fn minkowski() -> Signature {
    Signature::minkowski()
}

fn require_minkowski(op: &'static str, sig: Signature) -> Result<()> {
    if sig == minkowski() {
        Ok(())
    } else {
        Err(Error::Domain {
            op,
            requirement: "signature (1,3)",
        })
    }
}

fn shift_down(list: IndexList) -> IndexList {
    IndexList::from_mask(list.mask() >> 1)
}

fn shift_up(list: IndexList) -> IndexList {
    IndexList::from_mask(list.mask() << 1)
}

/// Spatial Hodge of a blade with indices in `1..=3`.
pub(crate) fn spatial_hodge_blade(list: IndexList) -> (IndexList, i8) {
    let (l, s) = hodge_blade(Signature::euclidean3(), shift_down(list));
    (shift_up(l), s)
}

pub(crate) fn spatial_inv_hodge_blade(list: IndexList) -> (IndexList, i8) {
    let (l, s) = inv_hodge_blade(Signature::euclidean3(), shift_down(list));
    (shift_up(l), s)
}

fn map_spatial<S: Scalar>(
    op: &'static str,
    v: &Multivector<S>,
    f: impl Fn(IndexList) -> (IndexList, i8),
) -> Result<Multivector<S>> {
    require_minkowski(op, v.signature())?;
    if v.terms().any(|(l, _)| l.contains(0)) {
        return Err(Error::Domain {
            op,
            requirement: "spatial components only",
        });
    }
    let terms = v.terms().map(|(l, c)| {
        let (m, s) = f(l);
        (m, if s < 0 { -c.clone() } else { c.clone() })
    });
    Multivector::from_terms(minkowski(), terms)
}

/// `vᴴ̃`: the `(0,3)` Hodge complement acting on the indices `1..3`.
pub fn spatial_hodge<S: Scalar>(v: &Multivector<S>) -> Result<Multivector<S>> {
    map_spatial("spatial_hodge", v, spatial_hodge_blade)
}

pub fn spatial_inv_hodge<S: Scalar>(v: &Multivector<S>) -> Result<Multivector<S>> {
    map_spatial("spatial_inv_hodge", v, spatial_inv_hodge_blade)
}

fn require_spatial_vector<S: Scalar>(op: &'static str, v: &Multivector<S>) -> Result<()> {
    require_minkowski(op, v.signature())?;
    if !v.is_grade(1) || v.terms().any(|(l, _)| l.contains(0)) {
        return Err(Error::Domain {
            op,
            requirement: "grade-1 vectors on e1, e2, e3",
        });
    }
    Ok(())
}

/// Cross product of two spatial vectors of `(1,3)`.
pub fn spatial_cross<S: Scalar>(a: &Multivector<S>, b: &Multivector<S>) -> Result<Multivector<S>> {
    require_spatial_vector("spatial_cross", a)?;
    require_spatial_vector("spatial_cross", b)?;
    spatial_inv_hodge(&a.wedge(b)?)
}

/// `F = e0∧E + Bᴴ̃`.
pub fn assemble_bivector<S: Scalar>(e: &Multivector<S>, b: &Multivector<S>) -> Result<Multivector<S>> {
    require_spatial_vector("assemble_bivector", e)?;
    require_spatial_vector("assemble_bivector", b)?;
    let e0 = Multivector::basis(minkowski(), &[0])?;
    e0.wedge(e)?.checked_add(&spatial_hodge(b)?)
}

/// Inverse of [`assemble_bivector`]: `E_i` from `e0i`, `B` from the spatial part.
pub fn decompose_bivector<S: Scalar>(f: &Multivector<S>) -> Result<(Multivector<S>, Multivector<S>)> {
    require_minkowski("decompose_bivector", f.signature())?;
    if !f.is_grade(2) {
        return Err(Error::Domain {
            op: "decompose_bivector",
            requirement: "a pure bivector",
        });
    }
    let sig = minkowski();
    let mut e = Multivector::zero(sig);
    let mut space = Multivector::zero(sig);
    for (l, c) in f.terms() {
        if l.contains(0) {
            e.add_term(l.without(0), c.clone());
        } else {
            space.add_term(l, c.clone());
        }
    }
    Ok((e, spatial_inv_hodge(&space)?))
}

/// `J = ρe0 + j`.
pub fn assemble_current<S: Scalar>(rho: S, j: &Multivector<S>) -> Result<Multivector<S>> {
    require_spatial_vector("assemble_current", j)?;
    let mut out = j.clone();
    out.add_term(IndexList::single(0), rho);
    Ok(out)
}

/// `J⌋F` for given values of the current and field.
pub fn lorentz_density<S: Scalar>(current: &Multivector<S>, f: &Multivector<S>) -> Result<Multivector<S>> {
    current.left_contraction(f)
}

fn check_sig(op: &'static str, field: &dyn Field) -> Result<()> {
    require_minkowski(op, field.signature())
}

fn poly_spatial_hodge(b: &PolynomialField) -> Result<PolynomialField> {
    if !b.is_grade(1) || b.terms().any(|(l, _)| l.contains(0)) {
        return Err(Error::Domain {
            op: "EMField",
            requirement: "grade-1 spatial E and B",
        });
    }
    Ok(b.map_blades(spatial_hodge_blade))
}

/// Electromagnetic field given by its electric and magnetic parts.
#[derive(Clone)]
pub struct EMField {
    e: Arc<dyn Field>,
    b: Arc<dyn Field>,
    exact: Option<PolynomialField>,
}

impl EMField {
    /// `E` and `B` must be `(1,3)` fields with values on `e1, e2, e3`.
    pub fn new(e: Arc<dyn Field>, b: Arc<dyn Field>) -> Result<Self> {
        check_sig("EMField", e.as_ref())?;
        check_sig("EMField", b.as_ref())?;
        let exact = match (e.as_polynomial(), b.as_polynomial()) {
            (Some(pe), Some(pb)) => {
                let e0 = PolynomialField::constant(&Multivector::basis(minkowski(), &[0])?);
                poly_spatial_hodge(pe)?;
                let fe = e0.wedge(pe)?;
                Some(fe.add(&poly_spatial_hodge(pb)?)?)
            }
            _ => None,
        };
        Ok(EMField { e, b, exact })
    }

    pub fn polynomial(e: PolynomialField, b: PolynomialField) -> Result<Self> {
        EMField::new(Arc::new(e), Arc::new(b))
    }

    pub fn electric(&self) -> &dyn Field {
        self.e.as_ref()
    }

    pub fn magnetic(&self) -> &dyn Field {
        self.b.as_ref()
    }
}

impl Field for EMField {
    fn signature(&self) -> Signature {
        minkowski()
    }

    fn eval(&self, x: &Position) -> Result<Multivector<f64>> {
        assemble_bivector(&self.e.eval(x)?, &self.b.eval(x)?)
    }

    fn partial_unchecked(&self, axis: usize, x: &Position) -> Result<Multivector<f64>> {
        let de = self.e.partial_unchecked(axis, x)?;
        let db = self.b.partial_unchecked(axis, x)?;
        let e0 = Multivector::basis(minkowski(), &[0])?;
        e0.wedge(&de)?.checked_add(&spatial_hodge(&db)?)
    }

    fn as_polynomial(&self) -> Option<&PolynomialField> {
        self.exact.as_ref()
    }
}

/// Four-current given by a charge density and a spatial current density.
#[derive(Clone)]
pub struct CurrentDensity {
    rho: Arc<dyn Field>,
    j: Arc<dyn Field>,
    exact: Option<PolynomialField>,
}

impl CurrentDensity {
    pub fn new(rho: Arc<dyn Field>, j: Arc<dyn Field>) -> Result<Self> {
        check_sig("CurrentDensity", rho.as_ref())?;
        check_sig("CurrentDensity", j.as_ref())?;
        let exact = match (rho.as_polynomial(), j.as_polynomial()) {
            (Some(pr), Some(pj)) => {
                if !pr.is_grade(0) {
                    return Err(Error::Domain {
                        op: "CurrentDensity",
                        requirement: "a scalar charge density",
                    });
                }
                poly_spatial_hodge(pj)?;
                let rho_e0 = PolynomialField::new(minkowski(), [(IndexList::single(0), pr.component(IndexList::EMPTY))])?;
                Some(rho_e0.add(pj)?)
            }
            _ => None,
        };
        Ok(CurrentDensity { rho, j, exact })
    }

    pub fn polynomial(rho: PolynomialField, j: PolynomialField) -> Result<Self> {
        CurrentDensity::new(Arc::new(rho), Arc::new(j))
    }

    /// `ρ = 0`, `j = 0`.
    pub fn vacuum() -> Self {
        let z = PolynomialField::zero(minkowski());
        CurrentDensity::polynomial(z.clone(), z).expect("zero fields are valid")
    }

    pub fn charge(&self) -> &dyn Field {
        self.rho.as_ref()
    }

    pub fn current(&self) -> &dyn Field {
        self.j.as_ref()
    }
}

impl Field for CurrentDensity {
    fn signature(&self) -> Signature {
        minkowski()
    }

    fn eval(&self, x: &Position) -> Result<Multivector<f64>> {
        assemble_current(self.rho.eval(x)?.scalar_part(), &self.j.eval(x)?)
    }

    fn partial_unchecked(&self, axis: usize, x: &Position) -> Result<Multivector<f64>> {
        let dr = self.rho.partial_unchecked(axis, x)?.scalar_part();
        assemble_current(dr, &self.j.partial_unchecked(axis, x)?)
    }

    fn as_polynomial(&self) -> Option<&PolynomialField> {
        self.exact.as_ref()
    }
}

/// Lorentz force density `J⌋F` at `x`: time part `j·E`, space part `ρE + j×B`.
pub fn lorentz_force(current: &CurrentDensity, f: &EMField, x: &Position) -> Result<Multivector<f64>> {
    lorentz_density(&current.eval(x)?, &f.eval(x)?)
}

/// `(∂∧F, ∂⌋F − J)` at `x`.
pub fn maxwell_residuals(
    f: &EMField,
    current: &CurrentDensity,
    x: &Position,
) -> Result<(Multivector<f64>, Multivector<f64>)> {
    let homogeneous = exterior_derivative(f, x)?;
    let inhomogeneous = &interior_derivative(f, x)? - &current.eval(x)?;
    Ok((homogeneous, inhomogeneous))
}

/// The same residuals computed symbolically and evaluated exactly.
pub fn maxwell_residuals_exact(
    f: &EMField,
    current: &CurrentDensity,
    x: &[Rational],
) -> Result<(Multivector<Rational>, Multivector<Rational>)> {
    let pf = f.as_polynomial().ok_or(Error::InexactField("maxwell_residuals_exact"))?;
    let pj = current.as_polynomial().ok_or(Error::InexactField("maxwell_residuals_exact"))?;
    let homogeneous = pf.exterior_derivative().eval_exact(x)?;
    let inhomogeneous = pf.interior_derivative().sub(pj)?.eval_exact(x)?;
    Ok((homogeneous, inhomogeneous))
}

/// A `(1,3)` field seen at a fixed time as a field of Euclidean 3-space.
struct SpatialView<'a> {
    inner: &'a dyn Field,
    t: f64,
}

fn to_space(v: &Multivector<f64>) -> Result<Multivector<f64>> {
    v.reindex(Signature::euclidean3(), |i| i.checked_sub(1))
}

impl SpatialView<'_> {
    fn lift(&self, xs: &Position) -> Position {
        let mut c = vec![self.t];
        c.extend_from_slice(xs.coords());
        Position::new(c)
    }
}

impl Field for SpatialView<'_> {
    fn signature(&self) -> Signature {
        Signature::euclidean3()
    }

    fn eval(&self, x: &Position) -> Result<Multivector<f64>> {
        x.check(Signature::euclidean3())?;
        to_space(&self.inner.eval(&self.lift(x))?)
    }

    fn partial_unchecked(&self, axis: usize, x: &Position) -> Result<Multivector<f64>> {
        to_space(&self.inner.partial_unchecked(axis + 1, &self.lift(x))?)
    }
}

/// Residuals of the four classical laws at one point, as `(0,3)` multivectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalResiduals {
    /// `∇·E − ρ`
    pub gauss_electric: Multivector<f64>,
    /// `∇·B`
    pub gauss_magnetic: Multivector<f64>,
    /// `∇×E + ∂₀B`
    pub faraday: Multivector<f64>,
    /// `∇×B − ∂₀E − j`
    pub ampere_maxwell: Multivector<f64>,
}

impl ClassicalResiduals {
    pub fn max_abs(&self) -> f64 {
        [&self.gauss_electric, &self.gauss_magnetic, &self.faraday, &self.ampere_maxwell]
            .iter()
            .map(|m| m.max_abs())
            .fold(0.0, f64::max)
    }
}

/// `(∇·E − ρ, ∇·B, ∇×E + ∂₀B, ∇×B − ∂₀E − j)` at `x`.
pub fn classical_residuals(f: &EMField, current: &CurrentDensity, x: &Position) -> Result<ClassicalResiduals> {
    x.check(minkowski())?;
    let xs = Position::new(x.coords()[1..].to_vec());
    let e = SpatialView { inner: f.electric(), t: x[0] };
    let b = SpatialView { inner: f.magnetic(), t: x[0] };
    let rho = current.charge().eval(x)?.scalar_part();
    let j = to_space(&current.current().eval(x)?)?;
    let de_dt = to_space(&partial(f.electric(), 0, x)?)?;
    let db_dt = to_space(&partial(f.magnetic(), 0, x)?)?;
    let rho_mv = Multivector::scalar(Signature::euclidean3(), rho);
    Ok(ClassicalResiduals {
        gauss_electric: &divergence(&e, &xs)? - &rho_mv,
        gauss_magnetic: divergence(&b, &xs)?,
        faraday: &curl3(&e, &xs)? + &db_dt,
        ampere_maxwell: &(&curl3(&b, &xs)? - &de_dt) - &j,
    })
}

fn require_volume(v3: &Cell) -> Result<()> {
    require_minkowski("integral check", v3.signature())?;
    if v3.dim() != 3 {
        return Err(Error::CellDimension {
            dim: v3.dim(),
            space: 4,
        });
    }
    Ok(())
}

/// Circulation of `F` along `∂V³`; zero for every solution of `∂∧F = 0`.
pub fn integral_homogeneous_check(f: &EMField, v3: &Cell, q: &Quadrature) -> Result<Multivector<f64>> {
    require_volume(v3)?;
    circulation(f, &v3.boundary(), q)
}

/// Flux of `F` across `∂V³` minus flux of `J` across `V³`; zero when `∂⌋F = J`.
pub fn integral_inhomogeneous_check(
    f: &EMField,
    current: &CurrentDensity,
    v3: &Cell,
    q: &Quadrature,
) -> Result<Multivector<f64>> {
    require_volume(v3)?;
    let boundary = flux(f, &v3.boundary(), q)?;
    let source = flux(current, &Chain::single(v3.clone()), q)?;
    Ok(&boundary - &source)
}

/// Boundary of a cell built by [`Cell::time_extruded`], split into the two time
/// caps `t₀×S`, `t₁×S` and the lateral part `(t₀,t₁)×∂S`.
pub fn split_time_boundary(v3: &Cell) -> (Chain, Chain) {
    v3.boundary().partition(|c| c.fixed_axes().iter().any(|(a, _)| *a == 0))
}

/// The two sides of the integrated Faraday law over `(t₀,t₁)×S`:
/// `(caps, lateral) = (∫_S B(t₁)·dS − ∫_S B(t₀)·dS, ∫dt ∮_{∂S} E·dx)`.
pub fn faraday_terms(f: &EMField, v3: &Cell, q: &Quadrature) -> Result<(f64, f64)> {
    require_volume(v3)?;
    let (caps, lateral) = split_time_boundary(v3);
    Ok((circulation(f, &caps, q)?.scalar_part(), circulation(f, &lateral, q)?.scalar_part()))
}

/// The boundary-flux and source terms of the integrated Ampère–Maxwell law
/// over `(t₀,t₁)×S`: `(caps, lateral, source)`.
pub fn ampere_terms(f: &EMField, current: &CurrentDensity, v3: &Cell, q: &Quadrature) -> Result<(f64, f64, f64)> {
    require_volume(v3)?;
    let (caps, lateral) = split_time_boundary(v3);
    Ok((
        flux(f, &caps, q)?.scalar_part(),
        flux(f, &lateral, q)?.scalar_part(),
        flux(current, &Chain::single(v3.clone()), q)?.scalar_part(),
    ))
}

// ---------------------------------------------------------------------------
// Exact solutions

fn spatial_poly_vector(comps: [Polynomial; 3]) -> Result<PolynomialField> {
    let [a, b, c] = comps;
    PolynomialField::new(
        minkowski(),
        [(IndexList::single(1), a), (IndexList::single(2), b), (IndexList::single(3), c)],
    )
}

fn var(i: usize) -> Polynomial {
    Polynomial::var(4, i)
}

fn zero_poly() -> Polynomial {
    Polynomial::zero(4)
}

/// Linearly polarized vacuum wave `E = a·cos(w(x0−x3)) e1`, `B = a·cos(w(x0−x3)) e2`.
pub fn plane_wave(amplitude: f64, wavenumber: f64, fd_step: f64) -> Result<(EMField, CurrentDensity)> {
    let sig = minkowski();
    let wave = move |x: &Position, axis: usize| {
        let phase = wavenumber * (x[0] - x[3]);
        let v = amplitude * phase.cos();
        let mut m = Multivector::zero(sig);
        m.add_term(IndexList::single(axis), v);
        m
    };
    let e = AnalyticField::new(sig, move |x| wave(x, 1)).with_step(fd_step)?;
    let b = AnalyticField::new(sig, move |x| wave(x, 2)).with_step(fd_step)?;
    Ok((EMField::new(Arc::new(e), Arc::new(b))?, CurrentDensity::vacuum()))
}

/// `E = x1 e1`, `B = 0`, `ρ = 1`, `j = 0`.
pub fn static_linear_e() -> (EMField, CurrentDensity) {
    let e = spatial_poly_vector([var(1), zero_poly(), zero_poly()]).expect("valid blades");
    let f = EMField::polynomial(e, PolynomialField::zero(minkowski())).expect("spatial field");
    let rho = PolynomialField::scalar(minkowski(), Polynomial::constant(4, Rational::from_i64(1))).expect("scalar");
    let j = CurrentDensity::polynomial(rho, PolynomialField::zero(minkowski())).expect("valid current");
    (f, j)
}

/// Constant magnetic field `B`, no electric field or sources.
pub fn uniform_b(b: [Rational; 3]) -> (EMField, CurrentDensity) {
    let [b1, b2, b3] = b;
    let bf = spatial_poly_vector([Polynomial::constant(4, b1), Polynomial::constant(4, b2), Polynomial::constant(4, b3)])
        .expect("valid blades");
    let f = EMField::polynomial(PolynomialField::zero(minkowski()), bf).expect("spatial field");
    (f, CurrentDensity::vacuum())
}

/// `E = x1e1 + x2e2 + x3e3`, `B = 0`, `ρ = 3`, `j = 0`.
pub fn radial_e() -> (EMField, CurrentDensity) {
    let e = spatial_poly_vector([var(1), var(2), var(3)]).expect("valid blades");
    let f = EMField::polynomial(e, PolynomialField::zero(minkowski())).expect("spatial field");
    let rho = PolynomialField::scalar(minkowski(), Polynomial::constant(4, Rational::from_i64(3))).expect("scalar");
    let j = CurrentDensity::polynomial(rho, PolynomialField::zero(minkowski())).expect("valid current");
    (f, j)
}

// ---------------------------------------------------------------------------
// Scenario files

/// Field family named in a scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PlaneWave,
    StaticLinearE,
    UniformB,
    RadialE,
}

fn default_one() -> f64 {
    1.0
}

fn default_fd_step() -> f64 {
    DEFAULT_FD_STEP
}

fn default_grid() -> usize {
    5
}

fn default_b() -> [i64; 3] {
    [0, 0, 1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    #[serde(default = "default_one")]
    pub amplitude: f64,
    #[serde(default = "default_one")]
    pub wavenumber: f64,
    /// Integer components of the uniform magnetic field.
    #[serde(default = "default_b")]
    pub b: [i64; 3],
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams {
            amplitude: 1.0,
            wavenumber: 1.0,
            b: default_b(),
        }
    }
}

/// Integration regions: a space-time box `(t0,t1) × square` and a spatial cube.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub t0: f64,
    pub t1: f64,
    /// Spatial corner `(x1, x2, x3)` shared by the square and the cube.
    pub origin: [f64; 3],
    /// Edge length of the square and the cube.
    pub size: f64,
    /// Spatial axes (from `1..=3`) spanning the square.
    pub square_axes: [usize; 2],
}

impl Default for Region {
    fn default() -> Self {
        Region {
            t0: 0.0,
            t1: 1.0,
            origin: [0.0; 3],
            size: 1.0,
            square_axes: [1, 2],
        }
    }
}

impl Region {
    fn corner(&self, t: f64) -> Vec<f64> {
        let mut c = vec![t];
        c.extend_from_slice(&self.origin);
        c
    }

    fn edge(&self, axis: usize) -> Vec<f64> {
        let mut e = vec![0.0; 4];
        e[axis] = self.size;
        e
    }

    /// The spatial cube at time `t0`.
    pub fn cube(&self) -> Result<Cell> {
        Cell::affine(minkowski(), self.corner(self.t0), (1..=3).map(|a| self.edge(a)).collect())
    }

    /// `(t0,t1) × square`.
    pub fn spacetime_box(&self) -> Result<Cell> {
        let [a, b] = self.square_axes;
        if !(1..=3).contains(&a) || !(1..=3).contains(&b) || a == b {
            return Err(Error::Invalid(format!("square axes {a},{b} must be two distinct spatial axes")));
        }
        let square = Cell::affine(minkowski(), self.corner(self.t0), vec![self.edge(a), self.edge(b)])?;
        Cell::time_extruded(self.t0, self.t1, &square)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioQuadrature {
    pub order: usize,
    #[serde(default = "default_subdivisions")]
    pub subdivisions: usize,
}

fn default_subdivisions() -> usize {
    1
}

/// Tolerances for the point residuals and the integral laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub differential: f64,
    pub integral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            differential: 1e-8,
            integral: 1e-7,
        }
    }
}

/// A named field family with parameters, region, quadrature and tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub family: Family,
    #[serde(default)]
    pub params: FamilyParams,
    #[serde(default)]
    pub region: Region,
    pub quadrature: ScenarioQuadrature,
    /// Grid points per axis for the differential residual sweep.
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default)]
    pub tolerance: Tolerances,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("scenario: {e}")))?;
        s.quadrature()?;
        if s.grid == 0 {
            return Err(Error::Invalid("scenario: grid must be at least 1".into()));
        }
        Ok(s)
    }

    pub fn quadrature(&self) -> Result<Quadrature> {
        Quadrature::new(self.quadrature.order, self.quadrature.subdivisions)
    }

    pub fn fields(&self) -> Result<(EMField, CurrentDensity)> {
        match self.family {
            Family::PlaneWave => plane_wave(self.params.amplitude, self.params.wavenumber, self.fd_step),
            Family::StaticLinearE => Ok(static_linear_e()),
            Family::UniformB => Ok(uniform_b(self.params.b.map(Rational::from_i64))),
            Family::RadialE => Ok(radial_e()),
        }
    }

    /// Points of the uniform `grid⁴` lattice over `[t0,t1] × cube`.
    pub fn grid_points(&self) -> Vec<Position> {
        let g = self.grid;
        let r = &self.region;
        let coord = |lo: f64, hi: f64, i: usize| if g == 1 { lo } else { lo + (hi - lo) * i as f64 / (g - 1) as f64 };
        let mut out = Vec::with_capacity(g.pow(4));
        for a in 0..g {
            for b in 0..g {
                for c in 0..g {
                    for d in 0..g {
                        out.push(Position::new(vec![
                            coord(r.t0, r.t1, a),
                            coord(r.origin[0], r.origin[0] + r.size, b),
                            coord(r.origin[1], r.origin[1] + r.size, c),
                            coord(r.origin[2], r.origin[2] + r.size, d),
                        ]));
                    }
                }
            }
        }
        out
    }
}
