//! End-to-end acceptance checks. Runs without the libtest harness so the
//! one-line verdicts always reach the output.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wickrot_core::calabi::{calabi_dual, calabi_inverse, compare_mod_sign, sample, CalabiOptions};
use wickrot_core::catalog::Catalog;
use wickrot_core::geometry::{analyze_point, CausalCharacter, LIGHTLIKE_TOL};
use wickrot_core::lightlike::{
    classify_line, conjugate_parts, klyachin_classify, transform_alpha_check, AlphaClass,
    Dichotomy, NullCurve, GRAD_TOL,
};
use wickrot_core::wick::{
    mirrored_probes, parity_classify, sup_difference, transform, wick_apply, WickOptions,
    PARITY_TOL,
};
use wickrot_core::{Error, GraphKind, Rect, Slot, SurfaceGraph};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: wickrot_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn cat() -> Catalog {
    Catalog::bundled()
}

fn entry_graph(id: &str) -> Result<SurfaceGraph, String> {
    ok(ok(cat().get(id).cloned())?.graph())
}

fn grid41() -> WickOptions {
    WickOptions::default()
}

/// Rotates `src_id` by `t` onto `domain` and compares with `dsl`.
fn rotate_and_compare(
    src_id: &str,
    t: &str,
    domain: Rect,
    dsl: &str,
    sign: f64,
) -> Result<(f64, f64), String> {
    let s = entry_graph(src_id)?;
    let out = ok(wick_apply(&s, &ok(transform(t))?, domain, grid41()))?;
    ensure!(
        out.report.pass,
        "{src_id} {t}: {} failed points",
        out.report.failed_points
    );
    let closed = ok(SurfaceGraph::from_dsl(dsl, out.graph.kind, domain))?;
    let diff = ok(sup_difference(&out.graph, &closed, sign, &domain, 41))?;
    ensure!(diff < 1e-9, "{src_id} {t}: sup diff {diff:e}");
    ensure!(
        out.report.max_residual < 1e-8,
        "{src_id} {t}: residual {:e}",
        out.report.max_residual
    );
    Ok((diff, out.report.max_residual))
}

fn scherk_triple() -> Outcome {
    let start = Instant::now();
    let (d1, r1) = rotate_and_compare(
        "scherk-E3",
        "T5",
        Rect::square(2.0),
        "log(cosh(x)/cosh(y))",
        1.0,
    )?;
    let (d2, r2) = rotate_and_compare(
        "scherk-E3",
        "T1",
        ok(Rect::new(-1.5, 1.5, -1.4, 1.4))?,
        "log(cos(x)/cosh(t))",
        1.0,
    )?;
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 5.0, "took {secs:.2} s");
    Ok(format!(
        "T5 diff {d1:.1e} residual {r1:.1e}; T1 diff {d2:.1e} residual {r2:.1e}; {secs:.2} s"
    ))
}

fn catenoid_web() -> Outcome {
    let c = cat();
    // Pairs related by a rotation in the catenoid example.
    let links = [
        ("catenoid-E3", "timelike-hyperbolic-catenoid-I"),
        ("catenoid-E3-rotated", "timelike-elliptic-catenoid"),
        (
            "timelike-elliptic-catenoid",
            "spacelike-hyperbolic-catenoid",
        ),
        (
            "spacelike-elliptic-catenoid",
            "timelike-hyperbolic-catenoid-II",
        ),
    ];
    let mut worst: f64 = 0.0;
    let mut edges = 0;
    for (a, b) in links {
        for (from, to) in [(a, b), (b, a)] {
            let e = ok(c.get(from))?;
            let Some(edge) = e.edges.iter().find(|x| x.target == to) else {
                if from == a {
                    return Err(format!("no edge {from} -> {to}"));
                }
                continue;
            };
            let target = ok(c.get(to))?;
            let sign = if edge.negate { -1.0 } else { 1.0 };
            let (d, _) =
                rotate_and_compare(from, &edge.transform, ok(target.rect())?, &target.dsl, sign)?;
            worst = worst.max(d);
            edges += 1;
        }
    }

    // Timelike Euclidean rotations have K < 0 at every sampled timelike point.
    let mut counted = 0;
    for id in [
        "timelike-hyperbolic-catenoid-I",
        "timelike-elliptic-catenoid",
    ] {
        let g = entry_graph(id)?;
        for p in g.domain.grid(41) {
            let a = ok(analyze_point(&g, p, LIGHTLIKE_TOL))?;
            if a.character == CausalCharacter::Timelike {
                let k = a.gauss.ok_or("missing K")?;
                ensure!(k < 0.0, "{id} {p:?}: K = {k}");
                counted += 1;
            }
        }
    }

    // ZMC to BI rotations flip the sign of K on the axis.
    let flips = [
        (
            "spacelike-hyperbolic-catenoid",
            "timelike-elliptic-catenoid",
        ),
        (
            "timelike-hyperbolic-catenoid-II",
            "spacelike-elliptic-catenoid",
        ),
    ];
    let mut flipped = 0;
    for (zmc, bi) in flips {
        let g = entry_graph(zmc)?;
        let h = entry_graph(bi)?;
        for y in h.domain.axes(21).0 {
            if !g.domain.contains([0.0, y]) {
                continue;
            }
            let kg = ok(analyze_point(&g, [0.0, y], LIGHTLIKE_TOL))?
                .gauss
                .ok_or("K")?;
            let kh = ok(analyze_point(&h, [y, 0.0], LIGHTLIKE_TOL))?
                .gauss
                .ok_or("K")?;
            ensure!(kg * kh < 0.0, "{zmc}/{bi} at y = {y}: K {kg} and {kh}");
            flipped += 1;
        }
    }
    ensure!(flipped > 20, "only {flipped} axis points compared");
    Ok(format!(
        "{edges} edges, max diff {worst:.1e}; K < 0 at {counted} timelike points; K sign flip at {flipped} axis points"
    ))
}

/// Gaussian curvature of a Euclidean graph from hand-derived partials.
fn k_euclid(fx: f64, fy: f64, fxx: f64, fxy: f64, fyy: f64) -> f64 {
    (fxx * fyy - fxy * fxy) / (1.0 + fx * fx + fy * fy).powi(2)
}

/// Gaussian curvature of a ZMC graph from hand-derived partials.
fn k_zmc(gx: f64, gy: f64, gxx: f64, gxy: f64, gyy: f64) -> f64 {
    -(gxx * gyy - gxy * gxy) / (1.0 - gx * gx - gy * gy).powi(2)
}

fn helicoid_pair() -> Outcome {
    let helicoid = ok(ok(cat().get("helicoid"))?.rect())?;
    let (d, _) = rotate_and_compare("kobayashi-graph", "T5-odd", helicoid, "x*tan(y)", 1.0)?;
    // x tan y: f_xy = sec^2 y = 1 at the origin, all else 0; same for x tanh y.
    let (kh_oracle, kg_oracle) = (
        k_euclid(0.0, 0.0, 0.0, 1.0, 0.0),
        k_zmc(0.0, 0.0, 0.0, 1.0, 0.0),
    );
    let kh = ok(analyze_point(
        &entry_graph("helicoid")?,
        [0.0, 0.0],
        LIGHTLIKE_TOL,
    ))?
    .gauss
    .ok_or("K")?;
    let kg = ok(analyze_point(
        &entry_graph("kobayashi-graph")?,
        [0.0, 0.0],
        LIGHTLIKE_TOL,
    ))?
    .gauss
    .ok_or("K")?;
    ensure!(
        (kh - kh_oracle).abs() < 1e-9 && kh_oracle == -1.0,
        "helicoid K = {kh}"
    );
    ensure!(
        (kg - kg_oracle).abs() < 1e-9 && kg_oracle == 1.0,
        "kobayashi K = {kg}"
    );
    Ok(format!("T5-odd diff {d:.1e}; K(0,0) = {kh} and {kg}"))
}

fn line_of(id: &str) -> Result<(SurfaceGraph, wickrot_core::catalog::LineSpec), String> {
    let e = ok(cat().get(id).cloned())?;
    let spec = e
        .properties
        .line
        .clone()
        .ok_or(format!("{id} has no line"))?;
    Ok((ok(e.graph())?, spec))
}

fn alpha_suite() -> Outcome {
    let expected = [
        ("alpha-plus-scherk", AlphaClass::Plus, None, 1.0),
        (
            "translated-spacelike-hyp-catenoid",
            AlphaClass::ZeroII,
            Some(1.0),
            0.0,
        ),
        (
            "timelike-singly-periodic-scherk",
            AlphaClass::MinusI,
            None,
            -1.0,
        ),
        ("lightlike-plane", AlphaClass::ZeroI, None, 0.0),
    ];
    let mut parts = Vec::new();
    for (id, class, c, mu) in expected {
        let (g, spec) = line_of(id)?;
        let (_, lc) = ok(classify_line(
            &g,
            spec.witness,
            spec.range,
            41,
            LIGHTLIKE_TOL,
        ))?;
        let f = &lc.fit;
        ensure!(f.class == class, "{id}: class {}", f.class);
        ensure!((f.mu - mu).abs() < 1e-6, "{id}: mu {}", f.mu);
        ensure!(
            lc.profile.spread < 1e-6,
            "{id}: spread {:e}",
            lc.profile.spread
        );
        ensure!(f.residual < 1e-7, "{id}: residual {:e}", f.residual);
        if let Some(c) = c {
            ensure!((f.c - c).abs() < 1e-6, "{id}: c {}", f.c);
        }
        parts.push(format!("{}={}", id, f.class));
    }

    let c = cat();
    let odd_src = ok(c.get("translated-spacelike-scherk"))?;
    let odd_tgt = ok(ok(c.get("timelike-singly-periodic-scherk"))?.rect())?;
    let spec = odd_src.properties.line.clone().ok_or("line")?;
    let odd = ok(transform_alpha_check(
        &ok(odd_src.graph())?,
        &ok(transform("T4"))?,
        spec.witness,
        odd_tgt,
        spec.range,
        41,
        LIGHTLIKE_TOL,
    ))?;
    ensure!(
        odd.pass && odd.source_class == AlphaClass::Plus && odd.target_class == AlphaClass::MinusI,
        "odd pair: {} -> {}, pointwise {:e}",
        odd.source_class,
        odd.target_class,
        odd.max_pointwise
    );
    let back_src = ok(c.get("timelike-singly-periodic-scherk"))?;
    let back = ok(transform_alpha_check(
        &ok(back_src.graph())?,
        &ok(transform("T4-inv"))?,
        [0.0, 0.0],
        ok(odd_src.rect())?,
        spec.range,
        41,
        LIGHTLIKE_TOL,
    ))?;
    ensure!(
        back.pass && back.target_class == AlphaClass::Plus,
        "odd pair reversed: {}",
        back.target_class
    );

    let even_src = ok(c.get("translated-spacelike-hyp-catenoid"))?;
    let even_tgt = ok(ok(c.get("translated-timelike-hyp-catenoid"))?.rect())?;
    let spec = even_src.properties.line.clone().ok_or("line")?;
    let even = ok(transform_alpha_check(
        &ok(even_src.graph())?,
        &ok(transform("T3"))?,
        spec.witness,
        even_tgt,
        spec.range,
        41,
        LIGHTLIKE_TOL,
    ))?;
    ensure!(
        even.pass && even.max_pointwise < 1e-7,
        "even pair: {:e}",
        even.max_pointwise
    );
    Ok(format!(
        "{}; involution {}<->{} ({:.1e}); even pair samplewise {:.1e}",
        parts.join(", "),
        odd.source_class,
        odd.target_class,
        odd.max_pointwise.max(back.max_pointwise),
        even.max_pointwise
    ))
}

fn causal_sides() -> Outcome {
    let cases = [
        ("alpha-plus-scherk", Some(CausalCharacter::Spacelike)),
        (
            "spacelike-doubly-periodic-scherk",
            Some(CausalCharacter::Spacelike),
        ),
        (
            "translated-spacelike-scherk",
            Some(CausalCharacter::Spacelike),
        ),
        (
            "timelike-singly-periodic-scherk",
            Some(CausalCharacter::Timelike),
        ),
        ("timelike-scherk-2nd", Some(CausalCharacter::Timelike)),
        ("translated-spacelike-hyp-catenoid", None),
        ("translated-timelike-hyp-catenoid", None),
        ("spacelike-hyp-catenoid-sin", None),
    ];
    // With mu = 0 nothing is asserted; across these entries both
    // characters occur next to the line.
    let mut zero_mu_sides = Vec::new();
    for (id, want) in cases {
        let (g, spec) = line_of(id)?;
        let (_, lc) = ok(classify_line(
            &g,
            spec.witness,
            spec.range,
            41,
            LIGHTLIKE_TOL,
        ))?;
        let s = &lc.sides;
        ensure!(s.delta == 1e-2, "{id}: delta {}", s.delta);
        ensure!(s.asserted == want, "{id}: asserted {:?}", s.asserted);
        match want {
            Some(c) => ensure!(
                s.left.iter().chain(&s.right).all(|x| *x == c),
                "{id}: sides not all {}",
                c.name()
            ),
            None => {
                ensure!(
                    lc.fit.class == AlphaClass::ZeroII,
                    "{id}: class {}",
                    lc.fit.class
                );
                zero_mu_sides.extend(s.left.iter().chain(&s.right).copied());
            }
        }
    }
    let spacelike = zero_mu_sides
        .iter()
        .filter(|c| **c == CausalCharacter::Spacelike)
        .count();
    let timelike = zero_mu_sides
        .iter()
        .filter(|c| **c == CausalCharacter::Timelike)
        .count();
    ensure!(
        spacelike > 0 && timelike > 0,
        "alpha0_II sides not mixed: {spacelike}/{timelike}"
    );
    Ok(format!(
        "{} entries at offset 1e-2; alpha0_II sides unasserted, {spacelike} spacelike and {timelike} timelike samples",
        cases.len()
    ))
}

fn klyachin() -> Outcome {
    let g = entry_graph("scherk-kobayashi")?;
    let mut null_points = 0;
    for k in 0..9 {
        let x = 0.3 + 0.15 * k as f64;
        let y = (1.0 - x.tanh().powi(2)).sqrt().atanh();
        for p in [[x, y], [y, -x], [-x, -y]] {
            let r = ok(klyachin_classify(&g, p, LIGHTLIKE_TOL, GRAD_TOL))?;
            ensure!(
                r.dichotomy == Dichotomy::NullCurvePoint,
                "{p:?} is {:?}",
                r.dichotomy
            );
            null_points += 1;
        }
    }

    let along = [
        ("alpha-plus-scherk", [0.0, 1.0]),
        ("translated-spacelike-hyp-catenoid", [0.0, 1.0]),
        ("timelike-singly-periodic-scherk", [1.0, 0.0]),
        ("lightlike-plane", [0.0, 1.0]),
        ("translated-spacelike-scherk", [1.0, 0.0]),
        ("timelike-scherk-2nd", [0.0, 1.0]),
    ];
    let mut line_points = 0;
    let mut grid_points = 0;
    for (id, dir) in along {
        let (g, spec) = line_of(id)?;
        for k in -4..=4 {
            let s = 0.1 * k as f64;
            let p = [spec.witness[0] + s * dir[0], spec.witness[1] + s * dir[1]];
            let r = ok(klyachin_classify(&g, p, LIGHTLIKE_TOL, GRAD_TOL))?;
            ensure!(
                r.dichotomy == Dichotomy::LinePoint,
                "{id} {p:?} is {:?}",
                r.dichotomy
            );
            line_points += 1;
        }
        for p in g.domain.grid(41) {
            if ok(analyze_point(&g, p, LIGHTLIKE_TOL))?.character == CausalCharacter::Lightlike {
                ok(klyachin_classify(&g, p, LIGHTLIKE_TOL, GRAD_TOL))
                    .map_err(|e| format!("{id} {p:?} unclassified: {e}"))?;
                grid_points += 1;
            }
        }
    }
    Ok(format!(
        "{null_points} null curve points, {line_points} line points, {grid_points} lightlike grid samples classified"
    ))
}

fn conjugate() -> Outcome {
    let curve = ok(NullCurve::parse(["s", "cos(s)", "sin(s)"]))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let points: Vec<[f64; 2]> = (0..100)
        .map(|_| {
            [
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(-1.5..1.5),
            ]
        })
        .collect();
    let samples = ok(conjugate_parts(&curve, &points))?;
    let mut immersed = 0;
    let mut worst_h: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for s in &samples {
        if let (Some(a), Some(b)) = (s.mean_phi, s.mean_psi) {
            immersed += 1;
            worst_h = worst_h.max(a.abs()).max(b.abs());
        }
        worst_gap = worst_gap.max(s.wick_gap);
    }
    ensure!(immersed >= 90, "only {immersed} immersed samples");
    ensure!(worst_h < 1e-7, "|H| = {worst_h:e}");
    ensure!(worst_gap < 1e-9, "Phi(u, iv) - Psi(u, v) = {worst_gap:e}");
    Ok(format!(
        "{immersed} immersed points, max |H| {worst_h:.1e}, max gap {worst_gap:.1e}"
    ))
}

fn calabi() -> Outcome {
    let dom = Rect::square(1.0);
    let n = 21;
    let opts = CalabiOptions {
        grid: n,
        ..CalabiOptions::default()
    };
    let f = ok(SurfaceGraph::from_dsl(
        "log(cos(x)/cos(y))",
        GraphKind::E3,
        dom,
    ))?;
    let dual = ok(calabi_dual(&f, [0.0, 0.0], opts))?;
    let reference = ok(SurfaceGraph::from_dsl(
        "arcsin(sin(x)*sin(y))",
        GraphKind::ZMC,
        dom,
    ))?;
    let (sign, err) = compare_mod_sign(&dual.table, &ok(sample(&reference, &dom, n))?);
    ensure!(err < 1e-6, "dual differs by {err:e}");

    let back = ok(calabi_inverse(&dual.graph, [0.0, 0.0], opts))?;
    let (_, e1) = compare_mod_sign(&back.table, &ok(sample(&f, &dom, n))?);
    ensure!(e1 < 1e-6, "inverse of dual differs by {e1:e}");

    let inv = ok(calabi_inverse(&reference, [0.0, 0.0], opts))?;
    let again = ok(calabi_dual(&inv.graph, [0.0, 0.0], opts))?;
    let (_, e2) = compare_mod_sign(&again.table, &ok(sample(&reference, &dom, n))?);
    ensure!(e2 < 1e-6, "dual of inverse differs by {e2:e}");

    let bad = ok(SurfaceGraph::from_dsl(
        "log(cos(x)/cos(y))+0.1*x^3",
        GraphKind::E3,
        dom,
    ))?;
    match calabi_dual(&bad, [0.0, 0.0], opts) {
        Err(Error::NotMinimal(r)) => Ok(format!(
            "dual diff {err:.1e} (sign {sign:+}), roundtrips {e1:.1e} and {e2:.1e}, control rejected (residual {r:.1e})"
        )),
        Err(e) => Err(format!("control failed with the wrong error: {e}")),
        Ok(_) => Err("non-minimal control accepted".into()),
    }
}

fn property_suites() -> Outcome {
    let c = cat();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-5;
    let mut fd_checks = 0;
    let mut parity_checks = 0;
    let mut involutions = 0;
    let mut traces = 0;
    let mut worst_inv: f64 = 0.0;
    for e in c.list() {
        let g = ok(e.graph())?;
        let r = g.domain.shrink(20, 1).ok_or("tiny domain")?;
        for _ in 0..20 {
            let p = [rng.gen_range(r.u[0]..r.u[1]), rng.gen_range(r.v[0]..r.v[1])];
            let d = ok(g.height.partials(p))?;
            let f = |q: [f64; 2]| ok(g.eval(q));
            let fx = (f([p[0] + h, p[1]])? - f([p[0] - h, p[1]])?) / (2.0 * h);
            let fy = (f([p[0], p[1] + h])? - f([p[0], p[1] - h])?) / (2.0 * h);
            let fxx = (d_x(&g, [p[0] + h, p[1]])? - d_x(&g, [p[0] - h, p[1]])?) / (2.0 * h);
            let fyy = (d_y(&g, [p[0], p[1] + h])? - d_y(&g, [p[0], p[1] - h])?) / (2.0 * h);
            let fxy = (d_x(&g, [p[0], p[1] + h])? - d_x(&g, [p[0], p[1] - h])?) / (2.0 * h);
            for (jet, fd) in [
                (d.fx, fx),
                (d.fy, fy),
                (d.fxx, fxx),
                (d.fxy, fxy),
                (d.fyy, fyy),
            ] {
                let rel = (jet - fd).abs() / jet.abs().max(1.0);
                ensure!(rel < 1e-6, "{} at {p:?}: jet {jet} vs fd {fd}", e.id);
                fd_checks += 1;
            }
        }
        for slot in [Slot::V0, Slot::V1] {
            if let Some(d) = e.declared_parity(slot) {
                let probes = ok(mirrored_probes(&g.domain, slot, 32))?;
                let found = ok(parity_classify(&g.height, slot, &probes, PARITY_TOL))?;
                ensure!(found == d, "{}: {found:?} vs declared {d:?}", e.id);
                parity_checks += 1;
            }
        }
        for edge in &e.edges {
            let t = ok(transform(&edge.transform))?;
            let mid = ok(ok(c.get(&edge.target))?.rect())?;
            let opts = WickOptions {
                grid: 5,
                ..WickOptions::default()
            };
            let once = ok(wick_apply(&g, &t, mid, opts))?;
            let back = ok(wick_apply(
                &once.graph,
                &ok(transform(t.inverse))?,
                g.domain,
                opts,
            ))?;
            let diff = ok(sup_difference(&back.graph, &g, 1.0, &g.domain, 21))?;
            ensure!(diff < 1e-9, "{} via {}: {diff:e}", e.id, t.name);
            worst_inv = worst_inv.max(diff);
            involutions += 1;
        }
        for p in g.domain.grid(21) {
            let a = ok(analyze_point(&g, p, LIGHTLIKE_TOL))?;
            if let (Some(tr), Some(hm), Some(eps)) = (a.trace, a.mean, a.eps) {
                ensure!(
                    (tr - 2.0 * eps * hm).abs() <= 1e-9 * (1.0 + tr.abs()),
                    "{} trace at {p:?}",
                    e.id
                );
                traces += 1;
            }
        }
    }
    Ok(format!(
        "{fd_checks} jet/fd partials, {parity_checks} parities, {involutions} involutions (max {worst_inv:.1e}), {traces} trace identities"
    ))
}

/// Complex-step first partials: independent of the jet arithmetic.
fn d_x(g: &SurfaceGraph, p: [f64; 2]) -> Result<f64, String> {
    let s = 1e-20;
    Ok(ok(g.height.eval_complex([C::new(p[0], s), C::new(p[1], 0.0)]))?.im / s)
}

fn d_y(g: &SurfaceGraph, p: [f64; 2]) -> Result<f64, String> {
    let s = 1e-20;
    Ok(ok(g.height.eval_complex([C::new(p[0], 0.0), C::new(p[1], s)]))?.im / s)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Scherk triple", scherk_triple),
        ("catenoid web", catenoid_web),
        ("helicoid pair", helicoid_pair),
        ("alpha classification", alpha_suite),
        ("causal sides of lightlike lines", causal_sides),
        ("Klyachin dichotomy", klyachin),
        ("conjugate parts", conjugate),
        ("Calabi correspondence", calabi),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(msg) => println!("PASS {}. {name} [{secs:.2} s]: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name} [{secs:.2} s]: {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
