//! Acceptance checks, one PASS/FAIL line per criterion. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use extcalc::electromagnetism::{
    assemble_bivector, assemble_current, faraday_terms, integral_homogeneous_check, integral_inhomogeneous_check,
    lorentz_density, maxwell_residuals, maxwell_residuals_exact, plane_wave, radial_e, spatial_cross, static_linear_e,
    Region,
};
use extcalc::fields::{partial, DEFAULT_FD_STEP};
use extcalc::geometry::{flux, stokes_circulation_residual, stokes_circulation_sides, stokes_flux_residual, stokes_flux_sides};
use extcalc::sampling::{random_multivector, random_polynomial, random_polynomial_field, random_vector, Sampler};
use extcalc::signatures::sigma;
use extcalc::{
    rational, AnalyticField, Cell, Chain, IndexList, Multivector, Polynomial, PolynomialField, Position, Quadrature,
    Rational, Signature,
};

type Mv = Multivector<Rational>;
type Outcome = Result<String, String>;

fn sig(k: usize, n: usize) -> Signature {
    Signature::new(k, n).expect("valid signature")
}

fn parity(n: usize) -> Rational {
    rational(if n.is_multiple_of(2) { 1 } else { -1 }, 1)
}

fn unit(s: Signature, l: IndexList) -> Mv {
    Mv::blade(s, l, rational(1, 1)).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_s), || format!("took {elapsed:?}, limit {limit_s} s"))
}

// 1 -------------------------------------------------------------------------

fn algebra_identities() -> Outcome {
    let start = Instant::now();
    let sigs = Signature::all_up_to(5);
    let mut pairs = 0usize;
    for &s in &sigs {
        for i in s.blades() {
            for j in s.blades() {
                let (a, b) = (unit(s, i), unit(s, j));
                pairs += 1;
                let ctx = || format!("{s} e{i} e{j}");
                ensure(a.wedge(&b).unwrap() == &b.wedge(&a).unwrap() * parity(i.grade() * j.grade()), || {
                    format!("skew {}", ctx())
                })?;
                // left/right relation
                let diff = (j.grade() as i64 - i.grade() as i64).unsigned_abs() as usize;
                ensure(
                    a.left_contraction(&b).unwrap() == &b.right_contraction(&a).unwrap() * parity(i.grade() * diff),
                    || format!("left-right {}", ctx()),
                )?;
                ensure(a.left_contraction(&b).unwrap() == a.wedge(&b.hodge()).unwrap().inv_hodge(), || {
                    format!("left via Hodge {}", ctx())
                })?;
                ensure(a.right_contraction(&b).unwrap() == a.inv_hodge().wedge(&b).unwrap().hodge(), || {
                    format!("right via Hodge {}", ctx())
                })?;
                if i.is_subset_of(j) {
                    let want = &b * Rational::from_integer(s.delta(i).into());
                    ensure(a.left_contraction(&b).unwrap().wedge(&a).unwrap() == want, || format!("(20) {}", ctx()))?;
                    ensure(a.wedge(&b.right_contraction(&a).unwrap()).unwrap() == want, || format!("(21) {}", ctx()))?;
                }
            }
        }
    }
    let mut rng = Sampler::new(20_240_601);
    let mut draws = 0usize;
    for &s in &sigs {
        for _ in 0..60 {
            draws += 1;
            let d = s.dim();
            let u = random_vector(&mut rng, s);
            let v = random_vector(&mut rng, s);
            let r = rng.below(d + 1);
            let w = random_multivector(&mut rng, s, Some(r), 6);
            let lhs = u.left_contraction(&v.wedge(&w).unwrap()).unwrap();
            let rhs = &(&w * (u.dot(&v).unwrap() * parity(r))) + &v.wedge(&u.left_contraction(&w).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("triple product in {s}"))?;

            let x = random_multivector(&mut rng, s, None, 8);
            let y = random_multivector(&mut rng, s, None, 8);
            ensure(x.left_contraction(&y).unwrap() == x.wedge(&y.hodge()).unwrap().inv_hodge(), || format!("(15) {s}"))?;
            ensure(x.right_contraction(&y).unwrap() == x.inv_hodge().wedge(&y).unwrap().hodge(), || format!("(16) {s}"))?;

            let (ga, gb) = (rng.below(d + 1), rng.below(d + 1));
            let a = random_multivector(&mut rng, s, Some(ga), 6);
            let b = random_multivector(&mut rng, s, Some(gb), 6);
            ensure(a.wedge(&b).unwrap() == &b.wedge(&a).unwrap() * parity(ga * gb), || format!("skew {s}"))?;
            let diff = ga.abs_diff(gb);
            ensure(a.left_contraction(&b).unwrap() == &b.right_contraction(&a).unwrap() * parity(ga * diff), || {
                format!("left-right {s}")
            })?;
        }
    }
    let t = start.elapsed();
    ensure(draws >= 1000, || format!("only {draws} random draws"))?;
    within(t, 30)?;
    Ok(format!("{} signatures, {pairs} blade pairs, {draws} random draws, {t:.1?}", sigs.len()))
}

// 2 -------------------------------------------------------------------------

fn signature_identities() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    for d in 1..=6 {
        let full = IndexList::from_mask(((1u32 << d) - 1) as u16);
        let all = IndexList::all(d);
        for &big in &all {
            // circulation-proof identity: j ∉ J, I ⊆ J
            for j in (0..d).filter(|&j| !big.contains(j)) {
                let sj = IndexList::single(j);
                for &small in all.iter().filter(|s| s.is_subset_of(big)) {
                    let rest = big.difference(small);
                    checked += 1;
                    ensure(
                        sigma(sj, big) * sigma(small, rest) == sigma(sj, small) * sigma(small.with(j), rest),
                        || format!("circulation identity j={j} I={small} J={big}"),
                    )?;
                }
            }
            // the two flux-proof identities: j ∈ Jᶜ, L ⊆ J
            let comp = full.difference(big);
            for j in comp.iter() {
                let sj = IndexList::single(j);
                let cj = comp.without(j);
                checked += 1;
                ensure(sigma(sj, big) * sigma(cj, big.with(j)) == sigma(cj, sj) * sigma(comp, big), || {
                    format!("flux identity (a) j={j} J={big}")
                })?;
                for &l in all.iter().filter(|l| l.is_subset_of(big)) {
                    checked += 1;
                    ensure(sigma(cj, sj) * sigma(l, comp) == sigma(l, cj) * sigma(cj.union(l), sj), || {
                        format!("flux identity (b) j={j} L={l} J={big}")
                    })?;
                }
            }
        }
    }
    let t = start.elapsed();
    within(t, 10)?;
    Ok(format!("{checked} index configurations up to k+n = 6, {t:.1?}"))
}

// 3 -------------------------------------------------------------------------

fn nilpotency() -> Outcome {
    let start = Instant::now();
    let mut rng = Sampler::new(3);
    let mut fields = 0;
    for s in [sig(0, 2), sig(0, 3), sig(1, 3)] {
        for g in 0..=s.dim() {
            for _ in 0..200 {
                let f = random_polynomial_field(&mut rng, s, g, 3);
                fields += 1;
                ensure(f.exterior_derivative().exterior_derivative().is_zero(), || format!("d^d^ in {s} grade {g}"))?;
                ensure(f.interior_derivative().interior_derivative().is_zero(), || format!("d_|d_| in {s} grade {g}"))?;
            }
        }
    }
    let t = start.elapsed();
    within(t, 30)?;
    Ok(format!("{fields} polynomial fields, 200 per grade and signature, {t:.1?}"))
}

// 4 -------------------------------------------------------------------------

fn classical_operators() -> Outcome {
    let s = sig(0, 3);
    let mut rng = Sampler::new(4);
    let vec3 = |c: [Polynomial; 3]| PolynomialField::vector(s, c.to_vec()).unwrap();
    let same = |a: &PolynomialField, b: &PolynomialField| a.sub(b).unwrap().is_zero();
    let cases = 200;
    for _ in 0..cases {
        let phi = random_polynomial(&mut rng, 3, 4, 5);
        let v = [0, 1, 2].map(|_| random_polynomial(&mut rng, 3, 4, 4));
        let d = |p: &Polynomial, i| p.derivative(i);
        let pf = PolynomialField::scalar(s, phi.clone()).unwrap();
        let vf = vec3(v.clone());

        let grad_oracle = vec3([d(&phi, 0), d(&phi, 1), d(&phi, 2)]);
        ensure(same(&pf.exterior_derivative(), &grad_oracle), || "gradient".into())?;

        let div = d(&v[0], 0).add(&d(&v[1], 1)).add(&d(&v[2], 2));
        ensure(same(&vf.interior_derivative(), &PolynomialField::scalar(s, div.clone()).unwrap()), || "divergence".into())?;

        let curl = [
            d(&v[2], 1).sub(&d(&v[1], 2)),
            d(&v[0], 2).sub(&d(&v[2], 0)),
            d(&v[1], 0).sub(&d(&v[0], 1)),
        ];
        let curl_field = vec3(curl.clone());
        ensure(same(&vf.exterior_derivative().inv_hodge(), &curl_field), || "curl".into())?;
        ensure(same(&vf.curl3().unwrap(), &curl_field), || "curl3".into())?;

        let lap = |p: &Polynomial| d(&d(p, 0), 0).add(&d(&d(p, 1), 1)).add(&d(&d(p, 2), 2));
        let cc = [0, 1, 2].map(|i| d(&div, i).sub(&lap(&v[i])));
        ensure(same(&vf.curl3().unwrap().curl3().unwrap(), &vec3(cc)), || "curl of curl".into())?;
        ensure(pf.exterior_derivative().curl3().unwrap().is_zero(), || "curl grad".into())?;
        ensure(vf.curl3().unwrap().interior_derivative().is_zero(), || "div curl".into())?;
    }
    Ok(format!("{cases} random scalar/vector polynomial pairs, exact"))
}

// 5, 6 ----------------------------------------------------------------------

fn random_affine(rng: &mut Sampler, s: Signature, l: usize) -> Cell {
    let corner = (0..s.dim()).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let edges = (0..l).map(|_| (0..s.dim()).map(|_| rng.uniform(-1.0, 1.0)).collect()).collect();
    Cell::affine(s, corner, edges).unwrap()
}

const STOKES_TOL: f64 = 1e-9;

fn stokes_protocol(flux_side: bool) -> Result<(usize, f64), String> {
    let q = Quadrature::gauss(8).unwrap();
    let mut rng = Sampler::new(if flux_side { 6 } else { 5 });
    let (mut n, mut worst) = (0, 0.0f64);
    for s in [sig(0, 2), sig(0, 3), sig(1, 3)] {
        for l in 1..=3.min(s.dim()) {
            for _ in 0..50 {
                let cell = random_affine(&mut rng, s, l);
                let g = if flux_side { l + rng.below(s.dim() - l + 1) } else { rng.below(l) };
                let f = random_polynomial_field(&mut rng, s, g, 3);
                let r = if flux_side {
                    stokes_flux_residual(&f, &cell, &q)
                } else {
                    stokes_circulation_residual(&f, &cell, &q)
                }
                .map_err(|e| e.to_string())?
                .max_abs();
                n += 1;
                worst = worst.max(r);
                ensure(r <= STOKES_TOL, || format!("{s} l={l} grade {g}: residual {r:e}"))?;
            }
        }
    }
    Ok((n, worst))
}

fn stokes_circulation_theorem() -> Outcome {
    let start = Instant::now();
    let (n, worst) = stokes_protocol(false)?;
    let s = sig(0, 3);
    let x = |i| Polynomial::var(3, i);
    let v = PolynomialField::vector(s, vec![x(1).scale(&rational(-1, 1)), x(0), Polynomial::zero(3)]).unwrap();
    let disk = Cell::disk(s, vec![0.0; 3], (0, 1), 1.0).unwrap();
    let (lhs, rhs) = stokes_circulation_sides(&v, &disk, &Quadrature::gauss(8).unwrap()).map_err(|e| e.to_string())?;
    let (a, b) = (lhs.scalar_part(), rhs.scalar_part());
    ensure((a - 2.0 * PI).abs() <= STOKES_TOL && (b - 2.0 * PI).abs() <= STOKES_TOL, || format!("disk: {a} / {b}"))?;
    let t = start.elapsed();
    within(t, 60)?;
    Ok(format!("{n} cases, max residual {worst:.2e}; disk sides {a:.15} / {b:.15}; {t:.1?}"))
}

fn stokes_flux_theorem() -> Outcome {
    let start = Instant::now();
    let (n, worst) = stokes_protocol(true)?;
    let s = sig(0, 3);
    let radial = PolynomialField::vector(s, (0..3).map(|i| Polynomial::var(3, i)).collect()).unwrap();
    let cube = Cell::unit_box(s, &[0, 1, 2]).unwrap();
    let (lhs, rhs) = stokes_flux_sides(&radial, &cube, &Quadrature::gauss(2).unwrap()).map_err(|e| e.to_string())?;
    let (a, b) = (lhs.scalar_part(), rhs.scalar_part());
    ensure(a == 3.0 && b == 3.0 && lhs.is_grade(0) && rhs.is_grade(0), || format!("cube: {lhs} / {rhs}"))?;
    let t = start.elapsed();
    within(t, 60)?;
    Ok(format!("{n} cases, max residual {worst:.2e}; divergence cube {a} / {b} at Gauss order 2; {t:.1?}"))
}

// 7 -------------------------------------------------------------------------

fn grid(g: usize) -> Vec<Position> {
    let c = |i: usize| i as f64 / (g - 1) as f64;
    let mut pts = Vec::new();
    for a in 0..g {
        for b in 0..g {
            for cc in 0..g {
                for d in 0..g {
                    pts.push(Position::new(vec![c(a), c(b), c(cc), c(d)]));
                }
            }
        }
    }
    pts
}

fn differential_maxwell() -> Outcome {
    let (wave, vac) = plane_wave(1.0, 1.0, DEFAULT_FD_STEP).map_err(|e| e.to_string())?;
    ensure(DEFAULT_FD_STEP == 2f64.powi(-16), || "fd step".into())?;
    let mut worst = 0.0f64;
    for x in grid(5) {
        let (h, i) = maxwell_residuals(&wave, &vac, &x).map_err(|e| e.to_string())?;
        worst = worst.max(h.max_abs()).max(i.max_abs());
    }
    ensure(worst <= 1e-8, || format!("plane wave residual {worst:e}"))?;

    let (f, j) = static_linear_e();
    for x in grid(5) {
        let (h, i) = maxwell_residuals_exact(&f, &j, &x.to_rational().unwrap()).map_err(|e| e.to_string())?;
        ensure(h.is_zero() && i.is_zero(), || format!("static E residual {h} / {i}"))?;
        let (h, i) = maxwell_residuals(&f, &j, &x).map_err(|e| e.to_string())?;
        ensure(h.is_zero() && i.is_zero(), || format!("static E pointwise residual {h} / {i}"))?;
    }

    let m = Signature::minkowski();
    let mut rng = Sampler::new(7);
    let spatial = |rng: &mut Sampler| {
        let mut c = vec![rational(0, 1)];
        c.extend((0..3).map(|_| rng.rational()));
        Mv::vector(m, &c).unwrap()
    };
    let draws = 1000;
    for _ in 0..draws {
        let (e, b, jv, rho) = (spatial(&mut rng), spatial(&mut rng), spatial(&mut rng), rng.rational());
        let force = lorentz_density(&assemble_current(rho.clone(), &jv).unwrap(), &assemble_bivector(&e, &b).unwrap()).unwrap();
        let time = force.grade_project(1).unwrap().coefficient(IndexList::single(0));
        ensure(time == jv.dot(&e).unwrap(), || "power density".into())?;
        let space = &force - &Mv::blade(m, IndexList::single(0), time).unwrap();
        ensure(space == &(&e * rho) + &spatial_cross(&jv, &b).unwrap(), || "force density".into())?;
    }
    Ok(format!("plane wave max residual {worst:.2e} on 5^4 grid; static E exactly 0; {draws} Lorentz draws exact"))
}

// 8 -------------------------------------------------------------------------

fn integral_maxwell() -> Outcome {
    let (wave, vac) = plane_wave(1.0, 1.0, DEFAULT_FD_STEP).map_err(|e| e.to_string())?;
    let q = Quadrature::gauss(12).unwrap();
    let mut worst = 0.0f64;
    for axes in [[1, 2], [1, 3], [2, 3]] {
        let region = Region { square_axes: axes, ..Region::default() };
        let v3 = region.spacetime_box().unwrap();
        let h = integral_homogeneous_check(&wave, &v3, &q).map_err(|e| e.to_string())?.max_abs();
        let i = integral_inhomogeneous_check(&wave, &vac, &v3, &q).map_err(|e| e.to_string())?.max_abs();
        worst = worst.max(h).max(i);
        ensure(h <= 1e-7 && i <= 1e-7, || format!("square {axes:?}: {h:e} / {i:e}"))?;
    }
    // a box off the symmetric position, where both Faraday terms are far from zero
    let region = Region { t0: 0.25, t1: 1.5, square_axes: [1, 3], ..Region::default() };
    let (caps, lateral) = faraday_terms(&wave, &region.spacetime_box().unwrap(), &q).map_err(|e| e.to_string())?;
    ensure(caps.abs() > 0.1 && (caps + lateral).abs() <= 1e-7, || format!("faraday terms {caps} {lateral}"))?;

    let (radial, rho) = radial_e();
    let cube = Cell::unit_box(Signature::minkowski(), &[1, 2, 3]).unwrap();
    let q2 = Quadrature::gauss(2).unwrap();
    let bd = flux(&radial, &cube.boundary(), &q2).map_err(|e| e.to_string())?;
    let src = flux(&rho, &Chain::single(cube), &q2).map_err(|e| e.to_string())?;
    ensure(bd.scalar_part() == 3.0 && src.scalar_part() == 3.0 && bd.is_grade(0) && src.is_grade(0), || {
        format!("Gauss cube {bd} / {src}")
    })?;
    Ok(format!(
        "plane-wave box residual {worst:.2e} at Gauss order 12; Faraday terms {caps:.6} / {lateral:.6}; Gauss cube {} = {}",
        bd.scalar_part(),
        src.scalar_part()
    ))
}

// 9 -------------------------------------------------------------------------

fn smooth_field(s: Signature) -> AnalyticField {
    let value = move |x: &Position| {
        let c = vec![(1.3 * x[1]).sin() * x[0].exp(), (0.7 * x[0]).cos() + (x[1] * x[0]).sin()];
        Multivector::vector(s, &c).unwrap()
    };
    let derivs = move |axis: usize, x: &Position| {
        let c = if axis == 0 {
            vec![(1.3 * x[1]).sin() * x[0].exp(), -0.7 * (0.7 * x[0]).sin() + x[1] * (x[1] * x[0]).cos()]
        } else {
            vec![1.3 * (1.3 * x[1]).cos() * x[0].exp(), x[0] * (x[1] * x[0]).cos()]
        };
        Multivector::vector(s, &c).unwrap()
    };
    AnalyticField::new(s, value).with_partials(derivs)
}

fn convergence() -> Outcome {
    let s = sig(0, 2);
    let f = smooth_field(s);
    let cell = Cell::affine(s, vec![-0.3, 0.2], vec![vec![1.1, 0.3], vec![-0.2, 0.9]]).unwrap();
    let mut ratios = Vec::new();
    for (lo, hi) in [(2, 4), (3, 6), (4, 8)] {
        for flux_side in [false, true] {
            let r = |o| {
                let q = Quadrature::gauss(o).unwrap();
                if flux_side {
                    stokes_flux_residual(&f, &cell, &q)
                } else {
                    stokes_circulation_residual(&f, &cell, &q)
                }
                .map(|m| m.max_abs())
            };
            let (a, b) = (r(lo).map_err(|e| e.to_string())?, r(hi).map_err(|e| e.to_string())?);
            ensure(a >= 10.0 * b, || format!("order {lo}->{hi}: {a:e} -> {b:e}"))?;
            ratios.push(a / b);
        }
    }

    let g = AnalyticField::new(s, move |x| Multivector::scalar(s, (2.0 * x[0]).sin() * (0.5 * x[1]).exp()));
    let x = Position::new(vec![0.4, -0.3]);
    let exact = 2.0 * (0.8f64).cos() * (-0.15f64).exp();
    let err = |h: f64| {
        let gh = g.clone().with_step(h).unwrap();
        (partial(&gh, 0, &x).unwrap().scalar_part() - exact).abs()
    };
    let mut fd = Vec::new();
    for h in [0.1, 0.05, 0.025] {
        let ratio = err(h) / err(h / 2.0);
        ensure((3.5..=4.5).contains(&ratio), || format!("fd ratio at h={h}: {ratio}"))?;
        fd.push(ratio);
    }
    let fmt = |v: &[f64]| v.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join(", ");
    let fmt_fd = fd.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", ");
    Ok(format!("quadrature ratios [{}]; fd ratios [{fmt_fd}]", fmt(&ratios)))
}

// 10 ------------------------------------------------------------------------

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_extcalc"));
    c.env_remove("EC_SEED");
    c
}

fn golden(name: &str) -> Vec<(String, String, String)> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let parts: Vec<&str> = l.split('\t').collect();
            assert_eq!(parts.len(), 3, "malformed golden line {l:?}");
            (parts[0].to_string(), parts[1].to_string(), parts[2].to_string())
        })
        .collect()
}

fn run(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn cli() -> Outcome {
    let cases = golden("eval.tsv");
    ensure(cases.len() >= 20, || format!("only {} golden expressions", cases.len()))?;
    let joined: String = cases.iter().map(|c| c.1.as_str()).collect();
    for op in ["^", ".", "_|", "|_", "+", "-", "*", "!", "!!"] {
        ensure(joined.contains(op), || format!("no golden case uses {op}"))?;
    }
    for (s, expr, want) in &cases {
        let (code, out, err) = run(&["eval", "--sig", s, expr]);
        ensure(code == 0 && out == format!("{want}\n").into_bytes(), || {
            format!("eval {expr:?} in ({s}): exit {code}, stdout {:?}, stderr {err:?}", String::from_utf8_lossy(&out))
        })?;
    }
    let errors = golden("eval_errors.tsv");
    for (s, expr, offset) in &errors {
        let (code, out, err) = run(&["eval", "--sig", s, expr]);
        ensure(code == 2 && out.is_empty() && err.contains(&format!("at byte {offset}:")), || {
            format!("bad expression {expr:?}: exit {code}, stderr {err:?}")
        })?;
    }

    let scenario = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/plane-wave.json");
    let scenario = scenario.to_str().unwrap();
    let suites: [&[&str]; 4] = [
        &["verify", "algebra", "--max-dim", "5", "--seed", "7", "--format", "json"],
        &["verify", "stokes", "--sig", "1,3", "--gauss", "8", "--cases", "50", "--seed", "7", "--format", "json"],
        &["verify", "derivatives", "--seed", "7", "--cases", "10", "--format", "json"],
        &["verify", "maxwell", "--scenario", scenario, "--format", "json"],
    ];
    for args in suites {
        let (c1, o1, e1) = run(args);
        let (c2, o2, _) = run(args);
        ensure(c1 == 0, || format!("{args:?} exit {c1}: {e1}"))?;
        ensure(o1 == o2 && c1 == c2, || format!("{args:?} not deterministic"))?;
        let json: serde_json::Value = serde_json::from_slice(&o1).map_err(|e| e.to_string())?;
        ensure(json["summary"]["failed"] == 0, || format!("{args:?} reports failures"))?;
    }
    let (c, o, _) = run(&["verify-maxwell", "--scenario", scenario, "--format", "json"]);
    ensure(c == 0 && o == run(suites[3]).1, || "verify-maxwell alias differs".into())?;

    let a = run(&["verify", "stokes", "--sig", "0,2", "--cases", "5", "--seed", "1", "--format", "json"]).1;
    let b = run(&["verify", "stokes", "--sig", "0,2", "--cases", "5", "--seed", "2", "--format", "json"]).1;
    ensure(a != b, || "seed has no effect".into())?;
    let env_run = bin()
        .env("EC_SEED", "1")
        .args(["verify", "stokes", "--sig", "0,2", "--cases", "5", "--format", "json"])
        .output()
        .unwrap();
    ensure(env_run.stdout == a, || "EC_SEED not used as default seed".into())?;

    let (fail, _, _) = run(&["verify", "stokes", "--sig", "0,3", "--gauss", "1", "--cases", "5"]);
    ensure(fail == 1, || format!("failing suite exit {fail}"))?;
    for bad in [
        &["verify", "algebra", "--max-dim", "0"][..],
        &["verify", "nosuch"],
        &["verify", "stokes", "--gauss", "0"],
        &["verify", "maxwell", "--scenario", "/nonexistent/scenario.json"],
        &["eval", "e0"],
        &["frobnicate"],
    ] {
        let (code, _, _) = run(bad);
        ensure(code == 2, || format!("{bad:?} exit {code}, expected 2"))?;
    }
    Ok(format!("{} golden expressions, {} error cases, determinism and exit codes", cases.len(), errors.len()))
}

fn main() {
    type Check = (&'static str, fn() -> Outcome);
    let checks: [Check; 10] = [
        ("1 algebraic identities", algebra_identities),
        ("2 signature identities", signature_identities),
        ("3 derivative nilpotency", nilpotency),
        ("4 classical operators", classical_operators),
        ("5 circulation theorem", stokes_circulation_theorem),
        ("6 flux theorem", stokes_flux_theorem),
        ("7 differential Maxwell", differential_maxwell),
        ("8 integral Maxwell", integral_maxwell),
        ("9 quadrature and fd convergence", convergence),
        ("10 command line", cli),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS  {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL  {name}: panicked");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
