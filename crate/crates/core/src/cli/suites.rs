//! Seeded verification suites. Every case draws from its own generator
//! derived from `(seed, case index)`, so cases can run on any number of
//! threads and the report is byte-identical for a fixed configuration.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::report::{Case, QuadratureInfo, Report};
use crate::electromagnetism::{
    assemble_current, classical_residuals, ClassicalResiduals, integral_homogeneous_check, integral_inhomogeneous_check, lorentz_force,
    maxwell_residuals, maxwell_residuals_exact, spatial_cross, Scenario,
};
use crate::error::{Error, Result};
use crate::fields::{exterior_derivative, interior_derivative, AnalyticField, Field, Polynomial, PolynomialField, Position};
use crate::geometry::{stokes_circulation_sides, stokes_flux_sides, Cell, Quadrature};
use crate::multivector::Multivector;
use crate::sampling::{random_multivector, random_polynomial_field, random_vector, Sampler};
use crate::scalar::{rational, Rational, Scalar};
use crate::signatures::{IndexList, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Derivatives,
    Stokes,
    Maxwell,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Algebra, Suite::Derivatives, Suite::Stokes, Suite::Maxwell];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Derivatives => "derivatives",
            Suite::Stokes => "stokes",
            Suite::Maxwell => "maxwell",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}; expected algebra, derivatives, stokes or maxwell")))
    }
}

/// Largest `k+n` the exhaustive algebra suite accepts.
pub const MAX_ALGEBRA_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Restricts the suite to one signature; otherwise a per-suite default set.
    pub sig: Option<Signature>,
    pub max_dim: usize,
    pub gauss: usize,
    pub subdivisions: usize,
    pub cases: usize,
    pub degree: u32,
    pub scenario: Option<Scenario>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            sig: None,
            max_dim: 5,
            gauss: 8,
            subdivisions: 1,
            cases: 50,
            degree: 3,
            scenario: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_dim == 0 || self.max_dim > MAX_ALGEBRA_DIM {
            return Err(Error::Invalid(format!("max-dim must be in 1..={MAX_ALGEBRA_DIM}")));
        }
        if self.cases == 0 {
            return Err(Error::Invalid("cases must be at least 1".into()));
        }
        if self.degree > 8 {
            return Err(Error::Invalid("degree must be at most 8".into()));
        }
        Quadrature::new(self.gauss, self.subdivisions)?;
        Ok(())
    }

    fn quadrature(&self) -> Quadrature {
        Quadrature::new(self.gauss, self.subdivisions).expect("validated")
    }
}

fn case_rng(seed: u64, stream: u64) -> Sampler {
    Sampler::new(seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn exact_residual(diff: &Multivector<Rational>) -> f64 {
    if diff.is_zero() {
        0.0
    } else {
        // never report an exact mismatch as zero after rounding
        diff.coefficient_norm().max(f64::MIN_POSITIVE)
    }
}

/// Runs `name` and assembles the report.
pub fn run_suite(name: Suite, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    match name {
        Suite::Algebra => Ok(algebra(cfg)),
        Suite::Derivatives => Ok(derivatives(cfg)),
        Suite::Stokes => Ok(stokes(cfg)),
        Suite::Maxwell => maxwell(cfg),
    }
}

fn sig_names(sigs: &[Signature]) -> Vec<String> {
    sigs.iter().map(|s| s.to_string()).collect()
}

// ---------------------------------------------------------------------------
// algebra

type Mv = Multivector<Rational>;

fn parity(n: usize) -> Rational {
    rational(if n.is_multiple_of(2) { 1 } else { -1 }, 1)
}

struct Tally {
    checked: usize,
    failed: usize,
    worst: f64,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failed: 0,
            worst: 0.0,
            first: None,
        }
    }

    fn check(&mut self, lhs: &Mv, rhs: &Mv, what: impl FnOnce() -> String) {
        self.checked += 1;
        let r = exact_residual(&(lhs - rhs));
        if r > 0.0 {
            self.failed += 1;
            self.worst = self.worst.max(r);
            self.first.get_or_insert_with(|| format!("{}: {lhs} vs {rhs}", what()));
        }
    }

    fn case(self, id: String, inputs: String, expected: &str) -> Case {
        let got = match &self.first {
            None => format!("{} checked, all equal", self.checked),
            Some(f) => format!("{} of {} differ; first {f}", self.failed, self.checked),
        };
        Case::new(id, inputs, expected, got, self.worst, 0.0)
    }
}

type BladeRule = fn(Signature, IndexList, IndexList, &mut Tally);

fn unit(s: Signature, l: IndexList) -> Mv {
    Mv::blade(s, l, rational(1, 1)).expect("blade inside signature")
}

fn rule_skew(s: Signature, i: IndexList, j: IndexList, t: &mut Tally) {
    let (a, b) = (unit(s, i), unit(s, j));
    t.check(&a.wedge(&b).unwrap(), &(b.wedge(&a).unwrap() * parity(i.grade() * j.grade())), || format!("{i}^{j}"));
}

fn rule_left_right(s: Signature, i: IndexList, j: IndexList, t: &mut Tally) {
    let (a, b) = (unit(s, i), unit(s, j));
    let sign = parity(i.grade() * (j.grade() + 2 * MAX_ALGEBRA_DIM - i.grade()));
    t.check(&a.left_contraction(&b).unwrap(), &(b.right_contraction(&a).unwrap() * sign), || format!("{i}_|{j}"));
}

fn rule_left_hodge(s: Signature, i: IndexList, j: IndexList, t: &mut Tally) {
    let (a, b) = (unit(s, i), unit(s, j));
    t.check(&a.left_contraction(&b).unwrap(), &a.wedge(&b.hodge()).unwrap().inv_hodge(), || format!("{i}_|{j}"));
}

fn rule_right_hodge(s: Signature, i: IndexList, j: IndexList, t: &mut Tally) {
    let (a, b) = (unit(s, i), unit(s, j));
    t.check(&a.right_contraction(&b).unwrap(), &a.inv_hodge().wedge(&b).unwrap().hodge(), || format!("{i}|_{j}"));
}

fn rule_back_substitution(s: Signature, i: IndexList, j: IndexList, t: &mut Tally) {
    if !i.is_subset_of(j) {
        return;
    }
    let (a, b) = (unit(s, i), unit(s, j));
    let want = &b * Rational::from_i64(s.delta(i) as i64);
    t.check(&a.left_contraction(&b).unwrap().wedge(&a).unwrap(), &want, || format!("({i}_|{j})^{i}"));
    t.check(&a.wedge(&b.right_contraction(&a).unwrap()).unwrap(), &want, || format!("{i}^({j}|_{i})"));
}

fn rule_equal_grade(s: Signature, i: IndexList, j: IndexList, t: &mut Tally) {
    if i.grade() != j.grade() {
        return;
    }
    let (a, b) = (unit(s, i), unit(s, j));
    let dot = Mv::scalar(s, a.dot(&b).unwrap());
    t.check(&a.left_contraction(&b).unwrap(), &dot, || format!("{i}_|{j}"));
    t.check(&a.right_contraction(&b).unwrap(), &dot, || format!("{i}|_{j}"));
}

const BLADE_RULES: [(&str, &str, BladeRule); 6] = [
    ("skew", "u^w = (-1)^(|u||w|) w^u", rule_skew),
    ("left-right", "u_|w = (-1)^(|u|(|w|-|u|)) w|_u", rule_left_right),
    ("left-hodge", "u_|w = (u^w!)!!", rule_left_hodge),
    ("right-hodge", "u|_w = (u!!^w)!", rule_right_hodge),
    ("back-substitution", "(eI_|eJ)^eI = eI^(eJ|_eI) = D_II eJ for I in J", rule_back_substitution),
    ("equal-grade", "u_|w = u|_w = u.w for equal grades", rule_equal_grade),
];

fn random_algebra_case(s: Signature, mut rng: Sampler) -> Tally {
    let mut t = Tally::new();
    let d = s.dim();
    let u = random_vector(&mut rng, s);
    let v = random_vector(&mut rng, s);
    let rg = rng.below(d + 1);
    let w = random_multivector(&mut rng, s, Some(rg), 6);
    let lhs = u.left_contraction(&v.wedge(&w).unwrap()).unwrap();
    let rhs = &(&w * (u.dot(&v).unwrap() * parity(rg))) + &v.wedge(&u.left_contraction(&w).unwrap()).unwrap();
    t.check(&lhs, &rhs, || "triple product".into());

    let x = random_multivector(&mut rng, s, None, 8);
    let y = random_multivector(&mut rng, s, None, 8);
    t.check(&x.left_contraction(&y).unwrap(), &x.wedge(&y.hodge()).unwrap().inv_hodge(), || "left via Hodge".into());
    t.check(&x.right_contraction(&y).unwrap(), &x.inv_hodge().wedge(&y).unwrap().hodge(), || "right via Hodge".into());
    t.check(&x.hodge().inv_hodge(), &x, || "Hodge inverse".into());

    let (ga, gb) = (rng.below(d + 1), rng.below(d + 1));
    let a = random_multivector(&mut rng, s, Some(ga), 6);
    let b = random_multivector(&mut rng, s, Some(gb), 6);
    t.check(&a.wedge(&b).unwrap(), &(b.wedge(&a).unwrap() * parity(ga * gb)), || "skew".into());
    let sign = if gb >= ga { parity(ga * (gb - ga)) } else { parity(ga * (ga - gb)) };
    t.check(&a.left_contraction(&b).unwrap(), &(b.right_contraction(&a).unwrap() * sign), || "left-right".into());

    let c = random_multivector(&mut rng, s, Some(ga), 6);
    let d_ = Mv::scalar(s, a.dot(&c).unwrap() * parity(s.time_dims()));
    t.check(&Mv::scalar(s, a.hodge().dot(&c.hodge()).unwrap()), &d_, || "dot of complements".into());
    t
}

fn algebra(cfg: &SuiteConfig) -> Report {
    let sigs = cfg.sig.map_or_else(|| Signature::all_up_to(cfg.max_dim), |s| vec![s]);
    let width = cfg.cases.to_string().len();
    let mut jobs: Vec<(Signature, Option<usize>)> = Vec::new();
    for &s in &sigs {
        jobs.extend((0..BLADE_RULES.len()).map(|r| (s, Some(r))));
        jobs.extend((0..cfg.cases).map(|_| (s, None)));
    }
    // random cases are numbered per signature in job order
    let mut counters = std::collections::HashMap::new();
    let numbered: Vec<(usize, Signature, Option<usize>, usize)> = jobs
        .into_iter()
        .enumerate()
        .map(|(g, (s, r))| {
            let n = counters.entry((s, r.is_some())).or_insert(0usize);
            *n += 1;
            (g, s, r, *n - 1)
        })
        .collect();
    let cases: Vec<Case> = numbered
        .into_par_iter()
        .map(|(g, s, rule, n)| match rule {
            Some(r) => {
                let (name, statement, f) = BLADE_RULES[r];
                let mut t = Tally::new();
                for i in s.blades() {
                    for j in s.blades() {
                        f(s, i, j, &mut t);
                    }
                }
                t.case(format!("{s}/blades/{name}"), format!("all basis blade pairs of {s}"), statement)
            }
            None => random_algebra_case(s, case_rng(cfg.seed, g as u64)).case(
                format!("{s}/random/{n:0width$}"),
                format!("random rational multivectors, draw {n}"),
                "all identities exact",
            ),
        })
        .collect();
    Report::new("algebra", cfg.seed, sig_names(&sigs), None, cases)
}

// ---------------------------------------------------------------------------
// derivatives

const DEFAULT_CALCULUS_SIGS: [(usize, usize); 3] = [(0, 2), (0, 3), (1, 3)];

fn calculus_sigs(cfg: &SuiteConfig) -> Vec<Signature> {
    cfg.sig.map_or_else(
        || DEFAULT_CALCULUS_SIGS.iter().map(|&(k, n)| Signature::new(k, n).expect("valid")).collect(),
        |s| vec![s],
    )
}

fn random_rational_point(rng: &mut Sampler, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| rational(rng.int(-8, 8), 4)).collect()
}

fn to_f64_point(x: &[Rational]) -> Position {
    Position::new(x.iter().map(Scalar::to_f64).collect())
}

fn symbolic_zero(p: &PolynomialField, x: &[Rational]) -> (f64, String) {
    if p.is_zero() {
        (0.0, "0".into())
    } else {
        let v = p.eval_exact(x).expect("point dimension");
        (exact_residual(&v).max(f64::MIN_POSITIVE), v.to_string())
    }
}

fn derivative_cases(s: Signature, grade: usize, n: usize, degree: u32, mut rng: Sampler, width: usize) -> Vec<Case> {
    let f = random_polynomial_field(&mut rng, s, grade, degree);
    let x = random_rational_point(&mut rng, s.dim());
    let id = |what: &str| format!("{s}/grade{grade}/{what}/{n:0width$}");
    let inputs = format!("random polynomial field of grade {grade}, degree <= {degree}");
    let mut out = Vec::new();

    let (r, got) = symbolic_zero(&f.exterior_derivative().exterior_derivative(), &x);
    out.push(Case::new(id("outer-nilpotent"), inputs.clone(), "0", got, r, 0.0));
    let (r, got) = symbolic_zero(&f.interior_derivative().interior_derivative(), &x);
    out.push(Case::new(id("inner-nilpotent"), inputs.clone(), "0", got, r, 0.0));

    // finite differences against the symbolic derivative, through an opaque wrapper
    let opaque = AnalyticField::wrap(std::sync::Arc::new(f.clone()));
    let xf = to_f64_point(&x);
    for (what, fd, exact) in [
        ("outer-fd", exterior_derivative(&opaque, &xf), f.exterior_derivative().eval_exact(&x)),
        ("inner-fd", interior_derivative(&opaque, &xf), f.interior_derivative().eval_exact(&x)),
    ] {
        let case = match (fd, exact) {
            (Ok(fd), Ok(exact)) => {
                let exact = exact.to_f64();
                let scale = 1.0 + exact.max_abs();
                let r = (&fd - &exact).max_abs() / scale;
                Case::new(id(what), inputs.clone(), exact.to_string(), fd.to_string(), r, 1e-6)
            }
            (Err(e), _) | (_, Err(e)) => Case::error(id(what), inputs.clone(), e.to_string()),
        };
        out.push(case);
    }

    if s == Signature::euclidean3() && grade <= 1 {
        let checks: Vec<(&str, PolynomialField)> = if grade == 0 {
            vec![("curl-grad", f.exterior_derivative().curl3().expect("grade-1 field"))]
        } else {
            let curl = f.curl3().expect("grade-1 field");
            let curl_curl = curl.curl3().expect("grade-1 field");
            let grad_div = f.interior_derivative().exterior_derivative();
            vec![
                ("div-curl", curl.interior_derivative()),
                ("curl-curl", curl_curl.sub(&grad_div.sub(&f.laplacian()).expect("same signature")).expect("same signature")),
            ]
        };
        for (what, p) in checks {
            let (r, got) = symbolic_zero(&p, &x);
            out.push(Case::new(id(what), inputs.clone(), "0", got, r, 0.0));
        }
    }
    out
}

fn derivatives(cfg: &SuiteConfig) -> Report {
    let sigs = calculus_sigs(cfg);
    let width = cfg.cases.to_string().len();
    let jobs: Vec<(Signature, usize, usize)> = sigs
        .iter()
        .flat_map(|&s| (0..=s.dim()).flat_map(move |g| (0..cfg.cases).map(move |n| (s, g, n))))
        .collect();
    let cases: Vec<Case> = jobs
        .into_par_iter()
        .enumerate()
        .flat_map_iter(|(j, (s, g, n))| derivative_cases(s, g, n, cfg.degree, case_rng(cfg.seed, j as u64), width))
        .collect();
    Report::new("derivatives", cfg.seed, sig_names(&sigs), None, cases)
}

// ---------------------------------------------------------------------------
// stokes

/// Absolute residual bound for exactly integrable polynomial cases.
pub const STOKES_TOLERANCE: f64 = 1e-9;

fn random_affine(rng: &mut Sampler, s: Signature, l: usize) -> Cell {
    let corner = (0..s.dim()).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let edges = (0..l).map(|_| (0..s.dim()).map(|_| rng.uniform(-1.0, 1.0)).collect()).collect();
    Cell::affine(s, corner, edges).expect("edge count below dimension")
}

fn sides_case(
    id: String,
    inputs: String,
    sides: Result<(Multivector<f64>, Multivector<f64>)>,
    expected: Option<f64>,
    tol: f64,
) -> Case {
    match sides {
        Ok((lhs, rhs)) => {
            let mut r = (&lhs - &rhs).max_abs();
            let mut want = "boundary side = interior side".to_string();
            if let Some(v) = expected {
                r = r.max((lhs.scalar_part() - v).abs()).max((rhs.scalar_part() - v).abs());
                want = format!("both sides {v}");
            }
            Case::new(id, inputs, want, format!("boundary {lhs}; interior {rhs}"), r, tol)
        }
        Err(e) => Case::error(id, inputs, e.to_string()),
    }
}

fn stokes_random(s: Signature, n: usize, degree: u32, q: &Quadrature, mut rng: Sampler, width: usize) -> Vec<Case> {
    let l = 1 + rng.below(3.min(s.dim()));
    let cell = random_affine(&mut rng, s, l);
    let gc = rng.below(l);
    let gf = l + rng.below(s.dim() - l + 1);
    let fc = random_polynomial_field(&mut rng, s, gc, degree);
    let ff = random_polynomial_field(&mut rng, s, gf, degree);
    vec![
        sides_case(
            format!("{s}/circulation/{n:0width$}"),
            format!("affine {l}-cell, grade-{gc} polynomial field"),
            stokes_circulation_sides(&fc, &cell, q),
            None,
            STOKES_TOLERANCE,
        ),
        sides_case(
            format!("{s}/flux/{n:0width$}"),
            format!("affine {l}-cell, grade-{gf} polynomial field"),
            stokes_flux_sides(&ff, &cell, q),
            None,
            STOKES_TOLERANCE,
        ),
    ]
}

fn stokes_fixed() -> Vec<Case> {
    let e3 = Signature::euclidean3();
    let var = |i| Polynomial::var(3, i);
    let rot = PolynomialField::vector(e3, vec![var(1).scale(&rational(-1, 1)), var(0), Polynomial::zero(3)])
        .expect("three components");
    let disk = Cell::disk(e3, vec![0.0; 3], (0, 1), 1.0).expect("coordinate plane");
    let radial = PolynomialField::vector(e3, (0..3).map(var).collect()).expect("three components");
    let cube = Cell::unit_box(e3, &[0, 1, 2]).expect("axes in range");
    vec![
        sides_case(
            "fixed/disk-circulation".into(),
            "v = -x1 e0 + x0 e1 on the unit disk, Gauss order 16".into(),
            stokes_circulation_sides(&rot, &disk, &Quadrature::gauss(16).expect("order")),
            Some(2.0 * PI),
            STOKES_TOLERANCE,
        ),
        sides_case(
            "fixed/divergence-cube".into(),
            "v = x0 e0 + x1 e1 + x2 e2 on the unit cube, Gauss order 2".into(),
            stokes_flux_sides(&radial, &cube, &Quadrature::gauss(2).expect("order")),
            Some(3.0),
            0.0,
        ),
    ]
}

fn stokes(cfg: &SuiteConfig) -> Report {
    let sigs = calculus_sigs(cfg);
    let q = cfg.quadrature();
    let width = cfg.cases.to_string().len();
    let jobs: Vec<(Signature, usize)> = sigs.iter().flat_map(|&s| (0..cfg.cases).map(move |n| (s, n))).collect();
    let mut cases: Vec<Case> = jobs
        .into_par_iter()
        .enumerate()
        .flat_map_iter(|(j, (s, n))| stokes_random(s, n, cfg.degree, &q, case_rng(cfg.seed, j as u64), width))
        .collect();
    cases.extend(stokes_fixed());
    let info = QuadratureInfo {
        order: q.order(),
        subdivisions: q.subdivisions(),
    };
    Report::new("stokes", cfg.seed, sig_names(&sigs), Some(info), cases)
}

// ---------------------------------------------------------------------------
// maxwell

/// Scenario used when none is given on the command line.
pub const DEFAULT_SCENARIO: &str = include_str!("../../scenarios/plane-wave.json");

fn max_over<T: Send + Clone>(
    points: &[Position],
    f: impl Fn(&Position) -> Result<T> + Sync,
    norm: impl Fn(&T) -> f64 + Sync,
) -> Result<(f64, Option<T>)> {
    let vals: Vec<Result<T>> = points.par_iter().map(&f).collect();
    let mut best = (-1.0, None);
    for v in vals {
        let v = v?;
        let n = norm(&v);
        if n > best.0 || n.is_nan() {
            best = (n, Some(v));
        }
    }
    Ok((best.0.max(0.0), best.1))
}

fn maxwell(cfg: &SuiteConfig) -> Result<Report> {
    let sc = match &cfg.scenario {
        Some(s) => s.clone(),
        None => Scenario::from_json(DEFAULT_SCENARIO)?,
    };
    let (f, j) = sc.fields()?;
    let q = sc.quadrature()?;
    let pts = sc.grid_points();
    let tol = &sc.tolerance;
    let grid = format!("{}^4 grid over [{},{}] x cube", sc.grid, sc.region.t0, sc.region.t1);
    let mut cases = Vec::new();
    let push = |cases: &mut Vec<Case>, id: &str, inputs: &str, expected: &str, r: Result<(f64, String)>, tol: f64| {
        cases.push(match r {
            Ok((res, got)) => Case::new(id, inputs, expected, got, res, tol),
            Err(e) => Case::error(id, inputs, e.to_string()),
        })
    };

    let exact = f.as_polynomial().is_some() && j.as_polynomial().is_some();
    let diff = max_over(
        &pts,
        |x| {
            if exact {
                let (h, i) = maxwell_residuals_exact(&f, &j, &x.to_rational()?)?;
                Ok((h.to_f64(), i.to_f64()))
            } else {
                maxwell_residuals(&f, &j, x)
            }
        },
        |(h, i)| h.max_abs().max(i.max_abs()),
    )
    .map(|(r, v)| {
        let got = v.map_or_else(String::new, |(h, i)| format!("worst: d^F = {h}; d_|F - J = {i}"));
        (r, got)
    });
    push(&mut cases, "differential/spacetime", &grid, "d^F = 0 and d_|F = J", diff, tol.differential);

    let classical: Result<Vec<ClassicalResiduals>> = pts.par_iter().map(|x| classical_residuals(&f, &j, x)).collect();
    type Law = (&'static str, &'static str, fn(&ClassicalResiduals) -> f64);
    let laws: [Law; 4] = [
        ("gauss-electric", "div E = rho", |c| c.gauss_electric.max_abs()),
        ("gauss-magnetic", "div B = 0", |c| c.gauss_magnetic.max_abs()),
        ("faraday", "curl E + dB/dt = 0", |c| c.faraday.max_abs()),
        ("ampere-maxwell", "curl B - dE/dt = j", |c| c.ampere_maxwell.max_abs()),
    ];
    for (name, law, norm) in laws {
        let r = classical.as_ref().map_err(Clone::clone).map(|all| {
            let worst = all.iter().map(norm).fold(0.0, f64::max);
            (worst, format!("max residual {worst:e}"))
        });
        push(&mut cases, &format!("differential/{name}"), &grid, law, r, tol.differential);
    }

    let lorentz = max_over(
        &pts,
        |x| {
            let force = lorentz_force(&j, &f, x)?;
            let e = f.electric().eval(x)?;
            let b = f.magnetic().eval(x)?;
            let rho = j.charge().eval(x)?.scalar_part();
            let jv = j.current().eval(x)?;
            let mut want = &(&e * rho) + &spatial_cross(&jv, &b)?;
            want = &want + &assemble_current(jv.dot(&e)?, &Multivector::zero(want.signature()))?;
            Ok(&force - &want)
        },
        |d| d.max_abs(),
    )
    .map(|(r, _)| (r, format!("max deviation {r:e}")));
    push(&mut cases, "differential/lorentz", &grid, "J_|F = (j.E) e0 + rho E + j x B", lorentz, tol.differential);

    let boxed = sc.region.spacetime_box();
    let cube = sc.region.cube();
    let integral = |v3: &Result<Cell>, inhomogeneous: bool| -> Result<(f64, String)> {
        let v3 = v3.as_ref().map_err(Clone::clone)?;
        let r = if inhomogeneous {
            integral_inhomogeneous_check(&f, &j, v3, &q)?
        } else {
            integral_homogeneous_check(&f, v3, &q)?
        };
        Ok((r.max_abs(), r.to_string()))
    };
    let box_desc = format!("(t0,t1) x square on axes {:?}", sc.region.square_axes);
    let integral_laws = [
        ("integral/faraday", &box_desc, "circulation of F over the boundary = 0", &boxed, false),
        ("integral/ampere-maxwell", &box_desc, "flux of F over the boundary = flux of J", &boxed, true),
        ("integral/gauss-magnetic", &grid, "circulation of F over the cube boundary = 0", &cube, false),
        ("integral/gauss-electric", &grid, "flux of F over the cube boundary = flux of J", &cube, true),
    ];
    for (id, inputs, law, cell, inhom) in integral_laws {
        push(&mut cases, id, inputs, law, integral(cell, inhom), tol.integral);
    }

    let info = QuadratureInfo {
        order: q.order(),
        subdivisions: q.subdivisions(),
    };
    Ok(Report::new(&format!("maxwell:{}", sc.name), cfg.seed, vec!["(1,3)".into()], Some(info), cases))
}
