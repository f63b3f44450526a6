//! Oriented hypersurfaces, circulation and flux integrals, and the two Stokes
//! theorems.
//!
//! A [`Cell`] is a smooth map from the unit cube `[0,1]^ℓ` into space-time with
//! an orientation sign. Its tangent element is the wedge of the coordinate
//! partials of the map:
//!
//! ```text
//! d^ℓx = orientation · (∂x/∂u₁ ∧ ⋯ ∧ ∂x/∂u_ℓ) du₁⋯du_ℓ
//! ```
//!
//! and
//!
//! * circulation of `f` along the cell is `∫ d^ℓx ⌊ f`,
//! * flux of `f` across the cell is `∫ (d^ℓx)ᴴ⁻¹ ⌋ f`.
//!
//! Boundaries are [`Chain`]s of faces. The face with axis `i` (numbered from 1)
//! fixed at `a ∈ {0,1}` carries weight `(-1)^(i+a)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{derived_field, Derivative, Field, Position, DEFAULT_FD_STEP};
use crate::multivector::Multivector;
use crate::signatures::{IndexList, Signature};

/// Tensor-product Gauss–Legendre rule on `[0,1]^ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrature {
    order: usize,
    subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            order: 8,
            subdivisions: 1,
        }
    }
}

impl Quadrature {
    pub fn new(order: usize, subdivisions: usize) -> Result<Self> {
        if order == 0 || subdivisions == 0 {
            return Err(Error::InvalidQuadrature);
        }
        Ok(Quadrature { order, subdivisions })
    }

    pub fn gauss(order: usize) -> Result<Self> {
        Quadrature::new(order, 1)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    /// One-dimensional composite rule on `[0,1]` as `(node, weight)` pairs.
    pub fn rule(&self) -> Vec<(f64, f64)> {
        let (x, w) = gauss_legendre(self.order);
        // normalizing makes low-order rules (e.g. weights 1/2, 1/2) exact
        let total: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|wi| wi / total).collect();
        let s = self.subdivisions as f64;
        let mut out = Vec::with_capacity(self.order * self.subdivisions);
        for k in 0..self.subdivisions {
            for (xi, wi) in x.iter().zip(&w) {
                out.push(((k as f64 + 0.5 * (xi + 1.0)) / s, wi / s));
            }
        }
        out
    }

    /// Nodes and weights of the product rule on `[0,1]^dim`.
    pub fn product_rule(&self, dim: usize) -> Vec<(Vec<f64>, f64)> {
        let rule = self.rule();
        let mut out = vec![(Vec::with_capacity(dim), 1.0)];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|(u, w)| {
                    rule.iter().map(move |(x, wx)| {
                        let mut v = u.clone();
                        v.push(*x);
                        (v, w * wx)
                    })
                })
                .collect();
        }
        out
    }
}

/// Gauss–Legendre nodes and weights on `[-1,1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // P_n(z) by the three-term recurrence, then P_n'(z)
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

type MapFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type JacFn = dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync;

struct RootMap {
    sig: Signature,
    dim: usize,
    map: Arc<MapFn>,
    jacobian: Option<Arc<JacFn>>,
    fd_step: f64,
}

impl RootMap {
    fn point(&self, u: &[f64]) -> Vec<f64> {
        (self.map)(u)
    }

    /// Column `a` of the Jacobian: `∂x/∂u_a`.
    fn column(&self, u: &[f64], a: usize) -> Vec<f64> {
        if let Some(j) = &self.jacobian {
            return j(u).swap_remove(a);
        }
        let h = self.fd_step;
        let mut up = u.to_vec();
        let mut dn = u.to_vec();
        up[a] += h;
        dn[a] -= h;
        let (p, m) = (self.point(&up), self.point(&dn));
        p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect()
    }
}

/// An oriented ℓ-dimensional singular cube in space-time.
///
/// Faces share the map of the cell they came from and record which axes are
/// pinned to 0 or 1.
#[derive(Clone)]
pub struct Cell {
    root: Arc<RootMap>,
    fixed: Vec<Option<u8>>,
    orientation: i8,
}

impl std::fmt::Debug for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cell")
            .field("sig", &self.root.sig)
            .field("dim", &self.dim())
            .field("fixed", &self.fixed)
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl Cell {
    /// Cell from an arbitrary map `[0,1]^dim → R^{k+n}`; tangents by central
    /// differences unless a Jacobian is attached.
    pub fn from_map(
        sig: Signature,
        dim: usize,
        map: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim > sig.dim() {
            return Err(Error::CellDimension { dim, space: sig.dim() });
        }
        Ok(Cell {
            root: Arc::new(RootMap {
                sig,
                dim,
                map: Arc::new(map),
                jacobian: None,
                fd_step: DEFAULT_FD_STEP,
            }),
            fixed: vec![None; dim],
            orientation: 1,
        })
    }

    fn with_root(&self, f: impl FnOnce(&mut RootMap)) -> Self {
        let r = &self.root;
        let mut root = RootMap {
            sig: r.sig,
            dim: r.dim,
            map: r.map.clone(),
            jacobian: r.jacobian.clone(),
            fd_step: r.fd_step,
        };
        f(&mut root);
        Cell {
            root: Arc::new(root),
            fixed: self.fixed.clone(),
            orientation: self.orientation,
        }
    }

    /// Attaches an exact Jacobian: `u ↦ [∂x/∂u_1, …, ∂x/∂u_ℓ]`.
    pub fn with_jacobian(self, jac: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static) -> Self {
        self.with_root(|r| r.jacobian = Some(Arc::new(jac)))
    }

    pub fn with_step(self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidStep(h));
        }
        Ok(self.with_root(|r| r.fd_step = h))
    }

    /// Axis-aligned or skewed box `corner + Σ u_a edges[a]`.
    pub fn affine(sig: Signature, corner: Vec<f64>, edges: Vec<Vec<f64>>) -> Result<Self> {
        if corner.len() != sig.dim() {
            return Err(Error::PositionDimension {
                expected: sig.dim(),
                got: corner.len(),
            });
        }
        if let Some(e) = edges.iter().find(|e| e.len() != sig.dim()) {
            return Err(Error::PositionDimension {
                expected: sig.dim(),
                got: e.len(),
            });
        }
        let dim = edges.len();
        let e2 = edges.clone();
        let cell = Cell::from_map(sig, dim, move |u| {
            let mut x = corner.clone();
            for (ua, e) in u.iter().zip(&edges) {
                for (xi, ei) in x.iter_mut().zip(e) {
                    *xi += ua * ei;
                }
            }
            x
        })?;
        Ok(cell.with_jacobian(move |_| e2.clone()))
    }

    /// Unit cube spanned by the coordinate axes in `axes`, anchored at the origin.
    pub fn unit_box(sig: Signature, axes: &[usize]) -> Result<Self> {
        let mut edges = Vec::new();
        for &a in axes {
            if a >= sig.dim() {
                return Err(Error::IndexOutOfRange { index: a, dim: sig.dim() });
            }
            let mut e = vec![0.0; sig.dim()];
            e[a] = 1.0;
            edges.push(e);
        }
        Cell::affine(sig, vec![0.0; sig.dim()], edges)
    }

    fn plane_axes(sig: Signature, center: &[f64], axes: &[usize]) -> Result<()> {
        if center.len() != sig.dim() {
            return Err(Error::PositionDimension {
                expected: sig.dim(),
                got: center.len(),
            });
        }
        for (i, &a) in axes.iter().enumerate() {
            if a >= sig.dim() {
                return Err(Error::IndexOutOfRange { index: a, dim: sig.dim() });
            }
            if axes[..i].contains(&a) {
                return Err(Error::Invalid(format!("repeated axis {a}")));
            }
        }
        Ok(())
    }

    /// Disk of the given radius in the `(a, b)` coordinate plane, in polar
    /// parameters `(r, θ) = (radius·u₁, 2πu₂)`. Oriented as `e_a ∧ e_b`.
    pub fn disk(sig: Signature, center: Vec<f64>, (a, b): (usize, usize), radius: f64) -> Result<Self> {
        Cell::plane_axes(sig, &center, &[a, b])?;
        let c2 = center.clone();
        let cell = Cell::from_map(sig, 2, move |u| {
            let (s, c) = (2.0 * PI * u[1]).sin_cos();
            let mut x = c2.clone();
            x[a] += radius * u[0] * c;
            x[b] += radius * u[0] * s;
            x
        })?;
        let d = sig.dim();
        Ok(cell.with_jacobian(move |u| {
            let (s, c) = (2.0 * PI * u[1]).sin_cos();
            let mut du = vec![0.0; d];
            let mut dv = vec![0.0; d];
            du[a] = radius * c;
            du[b] = radius * s;
            dv[a] = -2.0 * PI * radius * u[0] * s;
            dv[b] = 2.0 * PI * radius * u[0] * c;
            vec![du, dv]
        }))
    }

    /// Circle of the given radius in the `(a, b)` plane, counterclockwise from `+e_a`.
    pub fn circle(sig: Signature, center: Vec<f64>, (a, b): (usize, usize), radius: f64) -> Result<Self> {
        Cell::plane_axes(sig, &center, &[a, b])?;
        let c2 = center.clone();
        let cell = Cell::from_map(sig, 1, move |u| {
            let (s, c) = (2.0 * PI * u[0]).sin_cos();
            let mut x = c2.clone();
            x[a] += radius * c;
            x[b] += radius * s;
            x
        })?;
        let d = sig.dim();
        Ok(cell.with_jacobian(move |u| {
            let (s, c) = (2.0 * PI * u[0]).sin_cos();
            let mut t = vec![0.0; d];
            t[a] = -2.0 * PI * radius * s;
            t[b] = 2.0 * PI * radius * c;
            vec![t]
        }))
    }

    /// Two-sphere in the `(a, b, c)` coordinate 3-space with polar angle `πu₁`
    /// from `+e_c` and azimuth `2πu₂`; the induced normal points outward.
    pub fn sphere(sig: Signature, center: Vec<f64>, (a, b, c): (usize, usize, usize), radius: f64) -> Result<Self> {
        Cell::plane_axes(sig, &center, &[a, b, c])?;
        let c2 = center.clone();
        let cell = Cell::from_map(sig, 2, move |u| {
            let (st, ct) = (PI * u[0]).sin_cos();
            let (sp, cp) = (2.0 * PI * u[1]).sin_cos();
            let mut x = c2.clone();
            x[a] += radius * st * cp;
            x[b] += radius * st * sp;
            x[c] += radius * ct;
            x
        })?;
        let d = sig.dim();
        Ok(cell.with_jacobian(move |u| {
            let (st, ct) = (PI * u[0]).sin_cos();
            let (sp, cp) = (2.0 * PI * u[1]).sin_cos();
            let mut dt = vec![0.0; d];
            let mut dp = vec![0.0; d];
            dt[a] = PI * radius * ct * cp;
            dt[b] = PI * radius * ct * sp;
            dt[c] = -PI * radius * st;
            dp[a] = -2.0 * PI * radius * st * sp;
            dp[b] = 2.0 * PI * radius * st * cp;
            vec![dt, dp]
        }))
    }

    /// The product `(t₀,t₁) × S` with time on the first axis. `space` lives in the
    /// same signature; its time coordinate is overwritten.
    pub fn time_extruded(t0: f64, t1: f64, space: &Cell) -> Result<Self> {
        let sig = space.signature();
        if sig.time_dims() == 0 {
            return Err(Error::Domain {
                op: "time_extruded",
                requirement: "a signature with a time axis",
            });
        }
        if space.dim() + 1 > sig.dim() {
            return Err(Error::CellDimension {
                dim: space.dim() + 1,
                space: sig.dim(),
            });
        }
        let (s1, s2) = (space.clone(), space.clone());
        let cell = Cell::from_map(sig, space.dim() + 1, move |u| {
            let mut x = s1.point_unchecked(&u[1..]);
            x[0] = t0 + (t1 - t0) * u[0];
            x
        })?;
        let d = sig.dim();
        Ok(cell.with_jacobian(move |u| {
            let mut dt = vec![0.0; d];
            dt[0] = t1 - t0;
            let mut cols = vec![dt];
            for mut v in s2.tangent_vectors_unchecked(&u[1..]) {
                v[0] = 0.0;
                cols.push(v);
            }
            cols
        }))
    }

    pub fn signature(&self) -> Signature {
        self.root.sig
    }

    pub fn dim(&self) -> usize {
        self.fixed.iter().filter(|f| f.is_none()).count()
    }

    /// Pinned parameter axes of the originating map, as `(axis, value)`.
    pub fn fixed_axes(&self) -> Vec<(usize, u8)> {
        self.fixed
            .iter()
            .enumerate()
            .filter_map(|(a, f)| f.map(|v| (a, v)))
            .collect()
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn reversed(&self) -> Self {
        let mut c = self.clone();
        c.orientation = -c.orientation;
        c
    }

    /// Precomposes the map with `φ: [0,1]^ℓ → [0,1]^ℓ` (with Jacobian `dφ`,
    /// `dφ[a][b] = ∂φ_b/∂u_a`).
    pub fn reparameterized(
        &self,
        phi: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        dphi: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    ) -> Result<Self> {
        let phi = Arc::new(phi);
        let (c1, c2, p2) = (self.clone(), self.clone(), phi.clone());
        let cell = Cell::from_map(self.signature(), self.dim(), move |u| c1.point_unchecked(&phi(u)))?;
        let cell = Cell {
            orientation: self.orientation,
            ..cell
        };
        Ok(cell.with_jacobian(move |u| {
            let v = p2(u);
            let inner = c2.tangent_vectors_unchecked(&v);
            dphi(u)
                .iter()
                .map(|row| {
                    let mut col = vec![0.0; inner.first().map_or(0, Vec::len)];
                    for (coef, t) in row.iter().zip(&inner) {
                        for (c, ti) in col.iter_mut().zip(t) {
                            *c += coef * ti;
                        }
                    }
                    col
                })
                .collect()
        }))
    }

    fn full_param(&self, u: &[f64]) -> Vec<f64> {
        let mut free = u.iter();
        self.fixed
            .iter()
            .map(|f| match f {
                Some(a) => *a as f64,
                None => *free.next().expect("parameter count checked"),
            })
            .collect()
    }

    fn check_param(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::PositionDimension {
                expected: self.dim(),
                got: u.len(),
            });
        }
        if u.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::OutsideCube(u.to_vec()));
        }
        Ok(())
    }

    fn point_unchecked(&self, u: &[f64]) -> Vec<f64> {
        self.root.point(&self.full_param(u))
    }

    fn tangent_vectors_unchecked(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let full = self.full_param(u);
        self.fixed
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_none())
            .map(|(a, _)| self.root.column(&full, a))
            .collect()
    }

    /// Image of the parameter point `u`.
    pub fn point(&self, u: &[f64]) -> Result<Position> {
        self.check_param(u)?;
        Ok(Position::new(self.point_unchecked(u)))
    }

    fn tangent_unchecked(&self, u: &[f64]) -> Multivector<f64> {
        let sig = self.signature();
        let mut t = Multivector::scalar(sig, self.orientation as f64);
        for v in self.tangent_vectors_unchecked(u) {
            let v = Multivector::vector(sig, &v).expect("map returns k+n coordinates");
            t = t.wedge(&v).expect("same signature");
        }
        t
    }

    /// `orientation · (∂x/∂u₁ ∧ ⋯ ∧ ∂x/∂u_ℓ)` at `u`.
    pub fn tangent_element(&self, u: &[f64]) -> Result<Multivector<f64>> {
        self.check_param(u)?;
        Ok(self.tangent_unchecked(u))
    }

    /// Unit normal `e_⊥ = e_∥ᴴ⁻¹ / (e_∥ᴴ⁻¹ · e_∥ᴴ⁻¹)` built from the unit tangent.
    pub fn normal_element(&self, u: &[f64]) -> Result<Multivector<f64>> {
        let t = self.tangent_element(u)?;
        let norm2 = t.coefficient_norm().powi(2);
        let self_dot = t.dot(&t)?;
        if norm2 == 0.0 || self_dot.abs() <= 1e-12 * norm2 {
            return Err(Error::SingularElement);
        }
        let unit = t.scale(&(1.0 / self_dot.abs().sqrt()));
        let n = unit.inv_hodge();
        let nn = n.dot(&n)?;
        Ok(n.scale(&(1.0 / nn)))
    }

    /// Faces with weights `(-1)^(i+a)`, `i` the 1-based free-axis position.
    pub fn boundary(&self) -> Chain {
        let mut faces = Vec::new();
        let free: Vec<usize> = (0..self.fixed.len()).filter(|&a| self.fixed[a].is_none()).collect();
        for (pos, &axis) in free.iter().enumerate() {
            for a in 0..=1u8 {
                let mut fixed = self.fixed.clone();
                fixed[axis] = Some(a);
                let face = Cell {
                    root: self.root.clone(),
                    fixed,
                    orientation: self.orientation,
                };
                let weight = if (pos + 1 + a as usize).is_multiple_of(2) { 1 } else { -1 };
                faces.push((face, weight));
            }
        }
        Chain { cells: faces }
    }
}

/// Formal integer combination of cells of one dimension.
#[derive(Clone, Debug, Default)]
pub struct Chain {
    cells: Vec<(Cell, i64)>,
}

impl Chain {
    pub fn new(cells: Vec<(Cell, i64)>) -> Result<Self> {
        if let Some((first, _)) = cells.first() {
            for (c, _) in &cells {
                if c.signature() != first.signature() {
                    return Err(Error::SignatureMismatch {
                        left: first.signature(),
                        right: c.signature(),
                    });
                }
                if c.dim() != first.dim() {
                    return Err(Error::CellDimension {
                        dim: c.dim(),
                        space: first.dim(),
                    });
                }
            }
        }
        Ok(Chain { cells })
    }

    pub fn single(cell: Cell) -> Self {
        Chain {
            cells: vec![(cell, 1)],
        }
    }

    pub fn cells(&self) -> &[(Cell, i64)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Splits the chain by a predicate on cells, keeping weights.
    pub fn partition(&self, pred: impl Fn(&Cell) -> bool) -> (Chain, Chain) {
        let (a, b) = self.cells.iter().cloned().partition(|(c, _)| pred(c));
        (Chain { cells: a }, Chain { cells: b })
    }

    pub fn boundary(&self) -> Chain {
        let mut out = Vec::new();
        for (c, w) in &self.cells {
            for (f, fw) in c.boundary().cells {
                out.push((f, w * fw));
            }
        }
        Chain { cells: out }
    }

    /// Merges copies of the same face (same map, same pinned axes) and drops
    /// those whose signed weights cancel.
    pub fn simplify(&self) -> Chain {
        type FaceKey = (usize, Vec<Option<u8>>);
        let mut merged: BTreeMap<FaceKey, (Cell, i64)> = BTreeMap::new();
        for (c, w) in &self.cells {
            let key = (Arc::as_ptr(&c.root) as *const () as usize, c.fixed.clone());
            let signed = w * c.orientation as i64;
            merged
                .entry(key)
                .and_modify(|e| e.1 += signed)
                .or_insert_with(|| {
                    let mut c = c.clone();
                    c.orientation = 1;
                    (c, signed)
                });
        }
        Chain {
            cells: merged.into_values().filter(|(_, w)| *w != 0).collect(),
        }
    }
}

fn integrate(
    f: &dyn Field,
    chain: &Chain,
    q: &Quadrature,
    integrand: impl Fn(&Multivector<f64>, &Multivector<f64>) -> Result<Multivector<f64>>,
) -> Result<Multivector<f64>> {
    let sig = f.signature();
    let mut total = Multivector::zero(sig);
    for (cell, weight) in &chain.cells {
        if cell.signature() != sig {
            return Err(Error::SignatureMismatch {
                left: sig,
                right: cell.signature(),
            });
        }
        let mut acc = Multivector::zero(sig);
        for (u, w) in q.product_rule(cell.dim()) {
            let t = cell.tangent_unchecked(&u);
            if t.is_zero() {
                continue;
            }
            let v = f.eval(&Position::new(cell.point_unchecked(&u)))?;
            acc += &integrand(&t, &v)?.scale(&w);
        }
        total += &acc.scale(&(*weight as f64));
    }
    Ok(total)
}

/// `∫ d^ℓx ⌊ f` over the chain.
pub fn circulation(f: &dyn Field, chain: &Chain, q: &Quadrature) -> Result<Multivector<f64>> {
    integrate(f, chain, q, |t, v| t.right_contraction(v))
}

/// `∫ (d^ℓx)ᴴ⁻¹ ⌋ f` over the chain.
pub fn flux(f: &dyn Field, chain: &Chain, q: &Quadrature) -> Result<Multivector<f64>> {
    integrate(f, chain, q, |t, v| t.inv_hodge().left_contraction(v))
}

fn require_boundary(c: &Cell) -> Result<()> {
    if c.dim() == 0 {
        return Err(Error::CellDimension { dim: 0, space: c.signature().dim() });
    }
    Ok(())
}

/// Both sides of the circulation theorem: `(∮_{∂c} f, ∫_c ∂∧f)`.
pub fn stokes_circulation_sides(
    f: &dyn Field,
    c: &Cell,
    q: &Quadrature,
) -> Result<(Multivector<f64>, Multivector<f64>)> {
    require_boundary(c)?;
    let df = derived_field(f, Derivative::Exterior);
    Ok((circulation(f, &c.boundary(), q)?, circulation(df.as_ref(), &Chain::single(c.clone()), q)?))
}

/// Both sides of the flux theorem: `(flux of f across ∂c, flux of ∂⌋f across c)`.
pub fn stokes_flux_sides(f: &dyn Field, c: &Cell, q: &Quadrature) -> Result<(Multivector<f64>, Multivector<f64>)> {
    require_boundary(c)?;
    let df = derived_field(f, Derivative::Interior);
    Ok((flux(f, &c.boundary(), q)?, flux(df.as_ref(), &Chain::single(c.clone()), q)?))
}

/// `circulation(f, ∂c) − circulation(∂∧f, c)`.
pub fn stokes_circulation_residual(f: &dyn Field, c: &Cell, q: &Quadrature) -> Result<Multivector<f64>> {
    let (lhs, rhs) = stokes_circulation_sides(f, c, q)?;
    Ok(&lhs - &rhs)
}

/// `flux(f, ∂c) − flux(∂⌋f, c)`.
pub fn stokes_flux_residual(f: &dyn Field, c: &Cell, q: &Quadrature) -> Result<Multivector<f64>> {
    let (lhs, rhs) = stokes_flux_sides(f, c, q)?;
    Ok(&lhs - &rhs)
}

/// Blade of the top grade `e_0 ∧ ⋯ ∧ e_{k+n-1}`.
pub fn volume_blade(sig: Signature) -> IndexList {
    sig.full()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{AnalyticField, Polynomial, PolynomialField};
    use crate::sampling::{random_polynomial_field, Sampler};
    use crate::scalar::rational;

    fn sig(k: usize, n: usize) -> Signature {
        Signature::new(k, n).unwrap()
    }

    fn b(idx: &[usize]) -> IndexList {
        IndexList::new(idx).unwrap()
    }

    fn close(a: &Multivector<f64>, b: &Multivector<f64>, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    fn blade(s: Signature, idx: &[usize], c: f64) -> Multivector<f64> {
        Multivector::blade(s, b(idx), c).unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..=20 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for p in 0..2 * n {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                let want = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} p={p}");
            }
        }
        assert!(Quadrature::new(0, 1).is_err());
        assert!(Quadrature::new(3, 0).is_err());
    }

    #[test]
    fn tangent_examples() {
        let e3 = sig(0, 3);
        let sq = Cell::from_map(e3, 2, |u| vec![u[0], u[1], 0.0]).unwrap();
        assert!(close(&sq.tangent_element(&[0.3, 0.6]).unwrap(), &blade(e3, &[0, 1], 1.0), 1e-9));
        let p = sig(0, 2);
        let seg = Cell::affine(p, vec![0.0, 0.0], vec![vec![0.0, 2.0]]).unwrap();
        assert_eq!(seg.tangent_element(&[0.5]).unwrap(), blade(p, &[1], 2.0));
        let circ = Cell::circle(e3, vec![0.0; 3], (0, 1), 1.0).unwrap();
        assert!(close(&circ.tangent_element(&[0.0]).unwrap(), &blade(e3, &[1], 2.0 * PI), 1e-12));
        assert!(matches!(seg.tangent_element(&[1.5]), Err(Error::OutsideCube(_))));
        let point = Cell::affine(p, vec![1.0, 1.0], vec![]).unwrap();
        assert_eq!(point.reversed().tangent_element(&[]).unwrap(), Multivector::scalar(p, -1.0));
    }

    #[test]
    fn normal_examples() {
        let e3 = sig(0, 3);
        let sq = Cell::unit_box(e3, &[1, 2]).unwrap();
        assert_eq!(sq.normal_element(&[0.5, 0.5]).unwrap(), blade(e3, &[0], 1.0));

        let cube = Cell::unit_box(e3, &[0, 1, 2]).unwrap();
        assert_eq!(cube.normal_element(&[0.5; 3]).unwrap(), Multivector::scalar(e3, 1.0));

        let m = sig(1, 3);
        let tplane = Cell::unit_box(m, &[0, 1]).unwrap();
        let n = tplane.normal_element(&[0.5, 0.5]).unwrap();
        assert_eq!(n, blade(m, &[2, 3], 1.0));
        let oriented = n.wedge(&tplane.tangent_element(&[0.5, 0.5]).unwrap()).unwrap();
        assert!(oriented.coefficient(m.full()) > 0.0);

        // light-like plane spanned by e0+e1 and e2
        let null = Cell::affine(m, vec![0.0; 4], vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]]).unwrap();
        assert!(matches!(null.normal_element(&[0.5, 0.5]), Err(Error::SingularElement)));
    }

    #[test]
    fn normal_orients_the_volume() {
        // e_⊥ ∧ e_∥ is a positive multiple of the volume blade
        let mut rng = Sampler::new(3);
        for s in [sig(0, 3), sig(1, 3), sig(1, 2), sig(2, 2)] {
            for l in 1..s.dim() {
                let edges = (0..l).map(|_| (0..s.dim()).map(|_| rng.uniform(-1.0, 1.0)).collect()).collect();
                let c = Cell::affine(s, vec![0.0; s.dim()], edges).unwrap();
                let u = vec![0.5; l];
                let Ok(n) = c.normal_element(&u) else { continue };
                let top = n.wedge(&c.tangent_element(&u).unwrap()).unwrap();
                assert!(top.coefficient(s.full()) > 0.0, "{s} l={l}");
                assert!((n.dot(&n).unwrap().abs() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let p = sig(0, 2);
        let seg = Cell::unit_box(p, &[0]).unwrap();
        let bd = seg.boundary();
        let weights: Vec<(f64, i64)> = bd.cells().iter().map(|(c, w)| (c.point(&[]).unwrap()[0], *w)).collect();
        assert_eq!(weights, vec![(0.0, -1), (1.0, 1)]);

        // counterclockwise: the boundary circulation of (−y, x) is twice the area
        let sq = Cell::unit_box(p, &[0, 1]).unwrap();
        let rot = PolynomialField::vector(
            p,
            vec![Polynomial::monomial(vec![0, 1], rational(-1, 1)), Polynomial::var(2, 0)],
        )
        .unwrap();
        let c = circulation(&rot, &sq.boundary(), &Quadrature::default()).unwrap();
        assert!((c.scalar_part() - 2.0).abs() < 1e-13);

        for l in 1..=4 {
            let c = Cell::unit_box(sig(0, 4), &(0..l).collect::<Vec<_>>()).unwrap();
            assert!(c.boundary().boundary().simplify().is_empty());
            assert_eq!(c.boundary().simplify().len(), 2 * l);
        }
    }

    #[test]
    fn circulation_examples() {
        let p = sig(0, 2);
        let q = Quadrature::default();
        let e0 = PolynomialField::constant(&Multivector::basis(p, &[0]).unwrap());
        let seg = Chain::single(Cell::unit_box(p, &[0]).unwrap());
        assert!((circulation(&e0, &seg, &q).unwrap().scalar_part() - 1.0).abs() < 1e-15);

        let bivector = PolynomialField::constant(&Multivector::basis(p, &[0, 1]).unwrap());
        assert!(circulation(&bivector, &seg, &q).unwrap().is_zero());
    }

    #[test]
    fn flux_examples() {
        let e3 = sig(0, 3);
        let q = Quadrature::default();
        let e0 = PolynomialField::constant(&Multivector::basis(e3, &[0]).unwrap());
        let sq = Chain::single(Cell::unit_box(e3, &[1, 2]).unwrap());
        assert!((flux(&e0, &sq, &q).unwrap().scalar_part() - 1.0).abs() < 1e-14);

        let one = PolynomialField::constant(&Multivector::one(e3));
        let cube = Chain::single(Cell::unit_box(e3, &[0, 1, 2]).unwrap());
        assert!((flux(&one, &cube, &q).unwrap().scalar_part() - 1.0).abs() < 1e-14);

        let seg = Chain::single(Cell::unit_box(e3, &[0]).unwrap());
        assert!(flux(&e0, &seg, &q).unwrap().is_zero());
    }

    #[test]
    fn divergence_cube_and_disk() {
        let e3 = sig(0, 3);
        let q = Quadrature::gauss(2).unwrap();
        let radial = PolynomialField::vector(e3, (0..3).map(|i| Polynomial::var(3, i)).collect()).unwrap();
        let cube = Cell::unit_box(e3, &[0, 1, 2]).unwrap();
        let (bd, vol) = stokes_flux_sides(&radial, &cube, &q).unwrap();
        assert_eq!(bd.scalar_part(), 3.0);
        assert_eq!(vol.scalar_part(), 3.0);

        let rot = PolynomialField::vector(
            e3,
            vec![
                Polynomial::monomial(vec![0, 1, 0], rational(-1, 1)),
                Polynomial::var(3, 0),
                Polynomial::zero(3),
            ],
        )
        .unwrap();
        let disk = Cell::disk(e3, vec![0.0; 3], (0, 1), 1.0).unwrap();
        let (lhs, rhs) = stokes_circulation_sides(&rot, &disk, &Quadrature::new(16, 1).unwrap()).unwrap();
        assert!((lhs.scalar_part() - 2.0 * PI).abs() < 1e-9);
        // interior side: circulation of ∂∧f = 2e01 along the disk is the scalar 2·area
        assert!((rhs.scalar_part() - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn hand_checked_square() {
        let p = sig(0, 2);
        let f = PolynomialField::new(p, [(b(&[1]), Polynomial::var(2, 0))]).unwrap();
        let sq = Cell::unit_box(p, &[0, 1]).unwrap();
        let (lhs, rhs) = stokes_circulation_sides(&f, &sq, &Quadrature::default()).unwrap();
        assert!((lhs.scalar_part() - 1.0).abs() < 1e-14);
        assert!((rhs.scalar_part() - 1.0).abs() < 1e-14);
    }

    fn random_affine(rng: &mut Sampler, s: Signature, l: usize) -> Cell {
        let corner = (0..s.dim()).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let edges = (0..l).map(|_| (0..s.dim()).map(|_| rng.uniform(-1.0, 1.0)).collect()).collect();
        Cell::affine(s, corner, edges).unwrap()
    }

    #[test]
    fn stokes_polynomial_residuals() {
        let mut rng = Sampler::new(13);
        let q = Quadrature::default();
        for s in [sig(0, 2), sig(0, 3), sig(1, 3)] {
            for l in 1..=3.min(s.dim()) {
                let c = random_affine(&mut rng, s, l);
                for m in 0..l {
                    let f = random_polynomial_field(&mut rng, s, m, 3);
                    let r = stokes_circulation_residual(&f, &c, &q).unwrap();
                    assert!(r.max_abs() < 1e-9, "{s} l={l} m={m} {r}");
                }
                for m in l..=s.dim() {
                    let f = random_polynomial_field(&mut rng, s, m, 3);
                    let r = stokes_flux_residual(&f, &c, &q).unwrap();
                    assert!(r.max_abs() < 1e-9, "{s} l={l} m={m} {r}");
                }
            }
        }
    }

    #[test]
    fn orientation_and_grade_selection() {
        let mut rng = Sampler::new(19);
        let q = Quadrature::gauss(4).unwrap();
        let s = sig(1, 3);
        for l in 1..=3 {
            let c = random_affine(&mut rng, s, l);
            for m in 0..=4 {
                let f = random_polynomial_field(&mut rng, s, m, 2);
                let ch = Chain::single(c.clone());
                let rev = Chain::single(c.reversed());
                let circ = circulation(&f, &ch, &q).unwrap();
                assert!(close(&circulation(&f, &rev, &q).unwrap(), &-&circ, 0.0));
                let fl = flux(&f, &ch, &q).unwrap();
                assert!(close(&flux(&f, &rev, &q).unwrap(), &-&fl, 0.0));
                if l >= m {
                    assert!(circ.is_grade(l - m));
                } else {
                    assert!(circ.is_zero());
                }
                if l + m >= s.dim() {
                    assert!(fl.is_grade(l + m - s.dim()));
                } else {
                    assert!(fl.is_zero());
                }
            }
        }
    }

    #[test]
    fn reparameterization_invariance() {
        let mut rng = Sampler::new(21);
        let s = sig(0, 3);
        let q = Quadrature::new(12, 2).unwrap();
        let c = random_affine(&mut rng, s, 2);
        let warped = c
            .reparameterized(
                |u| u.iter().map(|x| 0.5 * (x + x * x)).collect(),
                |u| {
                    (0..u.len())
                        .map(|a| (0..u.len()).map(|b| if a == b { 0.5 + u[a] } else { 0.0 }).collect())
                        .collect()
                },
            )
            .unwrap();
        for m in 0..=3 {
            let f = random_polynomial_field(&mut rng, s, m, 3);
            let a = circulation(&f, &Chain::single(c.clone()), &q).unwrap();
            let bb = circulation(&f, &Chain::single(warped.clone()), &q).unwrap();
            assert!(close(&a, &bb, 1e-10));
            let a = flux(&f, &Chain::single(c.clone()), &q).unwrap();
            let bb = flux(&f, &Chain::single(warped.clone()), &q).unwrap();
            assert!(close(&a, &bb, 1e-10));
        }
    }

    #[test]
    fn full_dimensional_flux_is_volume_integral() {
        let s = sig(1, 2);
        let q = Quadrature::default();
        let f = PolynomialField::scalar(s, Polynomial::monomial(vec![2, 1, 0], rational(3, 1))).unwrap();
        let cube = Chain::single(Cell::unit_box(s, &[0, 1, 2]).unwrap());
        // ∫ 3 t² x dt dx dy over the unit cube = 1/2
        assert!((flux(&f, &cube, &q).unwrap().scalar_part() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sphere_flux_of_radial_field() {
        let e3 = sig(0, 3);
        let radial = PolynomialField::vector(e3, (0..3).map(|i| Polynomial::var(3, i)).collect()).unwrap();
        let sphere = Chain::single(Cell::sphere(e3, vec![0.0; 3], (0, 1, 2), 1.0).unwrap());
        let fl = flux(&radial, &sphere, &Quadrature::new(16, 1).unwrap()).unwrap();
        assert!((fl.scalar_part() - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn smooth_integrand_converges() {
        let s = sig(0, 2);
        let f = AnalyticField::new(s, move |x| {
            Multivector::vector(s, &[(x[1] * 3.0).sin(), (x[0] * 2.0).cos() * x[1].exp()]).unwrap()
        });
        let c = Cell::unit_box(s, &[0, 1]).unwrap();
        let r2 = stokes_circulation_residual(&f, &c, &Quadrature::gauss(2).unwrap()).unwrap().max_abs();
        let r4 = stokes_circulation_residual(&f, &c, &Quadrature::gauss(4).unwrap()).unwrap().max_abs();
        assert!(r2 >= 10.0 * r4, "{r2} {r4}");
    }
}
