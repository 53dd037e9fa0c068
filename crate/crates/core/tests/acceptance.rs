//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one PASS/FAIL line; the test fails if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::*;
use modelock::dynamics::alternates_between_halves;
use modelock::manifold::sample_invariant_curve;
use modelock::*;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Collects named sub-checks of one criterion.
#[derive(Default)]
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, ok: bool) {
        let name = name.into();
        if !ok {
            println!("    failed check: {name}");
        }
        self.0.push((name, ok));
    }

    fn outcome(self) -> Outcome {
        let failed: Vec<&str> = self.0.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
        let n = self.0.len();
        if failed.is_empty() {
            Outcome::new(true, format!("{n}/{n} checks"))
        } else {
            Outcome::new(false, format!("{}/{n} checks; failed: {}", n - failed.len(), failed.join("; ")))
        }
    }
}

fn triple_close(got: &EigenTriple, want: [f64; 3], tol: f64) -> (bool, String) {
    let Some(r) = got.roles() else { return (false, format!("complex multipliers {got}")) };
    let g = r.as_array();
    let ok = g.iter().zip(want).all(|(a, b)| (a - b).abs() <= tol);
    (ok, format!("({:.4}, {:.4}, {:.4})", g[0], g[1], g[2]))
}

fn table_check(name: &str, map: &BoundMap, x0: State3, period: usize, stable: [f64; 3], saddle: [f64; 3]) -> Outcome {
    let s = attractor_cycle(map, x0, 20_000);
    if s.period != period {
        return Outcome::new(false, format!("{name}: attractor period {} instead of {period}", s.period));
    }
    let sd = saddle_for(map, &s, period);
    let (ok1, d1) = triple_close(&eigs(map, &s), stable, 2e-3);
    let (ok2, d2) = triple_close(&eigs(map, &sd), saddle, 2e-3);
    Outcome::new(ok1 && ok2, format!("{name} stable {d1} saddle {d2}"))
}

fn criterion_1() -> Outcome {
    table_check("mira B=-0.58", &mira(-0.58), MIRA_X0, 5, [0.3550, -0.7131, 0.2593], [1.3963, -0.7878, 0.0597])
}

fn criterion_2() -> Outcome {
    table_check("henon a=1.2", &henon(1.2), HENON_X0, 4, [0.1795, -0.9813, -0.0006], [1.6217, -0.6890, -0.0001])
}

/// Events of `kind` on the branch from `cycle`, continued from `from` to `to`.
fn events(map: &BoundMap, cycle: &Cycle, param: &str, from: f64, to: f64, kind: EventKind) -> Vec<f64> {
    let opts = ContinuationOptions::default();
    match continue_cycle(map, cycle, param, from, to, 1e-3, &opts).and_then(|b| detect_bifurcations(&b, 1e-6)) {
        Ok(ev) => ev.iter().filter(|e| e.kind == kind).map(|e| e.param).collect(),
        Err(e) => {
            println!("    continuation error: {e}");
            Vec::new()
        }
    }
}

fn criterion_3() -> Outcome {
    let mut checks = Checks::default();
    let mut found = Vec::new();
    let mut expect = |label: &str, got: Vec<f64>, want: f64, tol: f64| {
        let best = got.iter().copied().min_by(|a, b| (a - want).abs().total_cmp(&(b - want).abs()));
        let ok = best.is_some_and(|v| (v - want).abs() <= tol);
        found.push(format!("{label} {}", best.map_or("none".into(), |v| format!("{v:.5}"))));
        checks.add(format!("{label} near {want}"), ok);
    };

    let m = mira(-0.58);
    let s = attractor_cycle(&m, MIRA_X0, 20_000);
    let sd = saddle_for(&m, &s, 5);
    expect("mira saddle flip", events(&m, &sd, "B", -0.58, -0.52, EventKind::Flip), -0.5627, 2e-3);
    expect("mira node flip", events(&m, &s, "B", -0.58, -0.53, EventKind::Flip), -0.55, 2e-3);

    let h = henon(1.2);
    let s = attractor_cycle(&h, HENON_X0, 20_000);
    expect("henon node flip", events(&h, &s, "a", 1.2, 1.3, EventKind::Flip), 1.204, 2e-3);

    let l = lv(-0.59);
    let s = attractor_cycle(&l, LV_X0, 20_000);
    expect("lv complex", events(&l, &s, "beta", -0.59, -1.0, EventKind::EigenvaluesTurnComplex), -0.646, 2e-3);
    expect("lv ns", events(&l, &s, "beta", -0.59, -1.0, EventKind::NeimarkSacker), -0.968, 2e-3);

    let b = bcnf(1.4);
    let s = attractor_cycle(&b, BCNF_X0, 20_000);
    expect("bcnf ns", events(&b, &s, "delta_R", 1.4, 1.5, EventKind::NeimarkSacker), 1.455, 2e-3);

    let c = coupled(27.2);
    let s = attractor_cycle(&c, COUPLED_X0, 20_000);
    let p10 = s.period;
    expect("coupled p10 fold", events(&c, &s, "a", 27.2, 27.0, EventKind::Fold), 27.1107, 5e-3);
    let c = coupled(27.521);
    let s = attractor_cycle(&c, COUPLED_X0, 20_000);
    let p20 = s.period;
    expect("coupled p20 fold", events(&c, &s, "a", 27.521, 27.4, EventKind::Fold), 27.46, 5e-3);
    checks.add("coupled period 10 at a=27.2", p10 == 10);
    checks.add("coupled period 20 at a=27.521", p20 == 20);

    let mut o = checks.outcome();
    o.detail = format!("{} [{}]", o.detail, found.join(", "));
    o
}

fn grow_and_classify(map: &BoundMap, stable: &Cycle, saddle: &Cycle, st: &ManifoldSettings) -> Result<(Vec<ManifoldCurve>, ConnectionReport)> {
    let curves = grow_branches(map, saddle, &stable.points, st)?;
    let report = classify_connection(map, saddle, stable, &curves)?;
    Ok((curves, report))
}

fn criterion_4() -> Outcome {
    let mut checks = Checks::default();
    let st = ManifoldSettings::default();

    let p1 = predict_doubling_type(
        &EigenTriple::from_real([0.3550, -0.7131, 0.2593]),
        &EigenTriple::from_real([1.3963, -0.7878, 0.0597]),
    );
    checks.add("table I prediction disjoint-loops", p1.kind == DoublingType::DisjointLoops);
    let m = mira(-0.54);
    let s = attractor_cycle(&m, MIRA_X0, 20_000);
    let sd = saddle_for(&m, &s, 10);
    let mira_topology = grow_and_classify(&m, &s, &sd, &st).map(|r| r.1.topology);
    checks.add("mira B=-0.54 disjoint-loops(2)", matches!(mira_topology, Ok(Topology::DisjointLoops(2))));

    let p2 = predict_doubling_type(
        &EigenTriple::from_real([0.1795, -0.9813, -0.0006]),
        &EigenTriple::from_real([1.6217, -0.6890, -0.0001]),
    );
    checks.add("table II prediction mobius-length-doubled", p2.kind == DoublingType::MobiusLengthDoubled);
    let h = henon(1.3);
    let s = attractor_cycle(&h, HENON_X0, 20_000);
    let sd = saddle_for(&h, &s, 8);
    let henon_topology = grow_and_classify(&h, &s, &sd, &st).map(|r| r.1.topology);
    checks.add("henon a=1.3 length-doubled", matches!(henon_topology, Ok(Topology::LengthDoubled)));

    // the same prediction from computed multipliers
    let m = mira(-0.58);
    let s = attractor_cycle(&m, MIRA_X0, 20_000);
    let sd = saddle_for(&m, &s, 5);
    checks.add("computed mira triples agree", predict_doubling_type(&eigs(&m, &s), &eigs(&m, &sd)).kind == p1.kind);
    let h = henon(1.2);
    let s = attractor_cycle(&h, HENON_X0, 20_000);
    let sd = saddle_for(&h, &s, 4);
    checks.add("computed henon triples agree", predict_doubling_type(&eigs(&h, &s), &eigs(&h, &sd)).kind == p2.kind);

    let show = |t: &Result<Topology>| t.as_ref().map_or_else(|e| e.to_string(), |t| t.to_string());
    let mut o = checks.outcome();
    o.detail = format!(
        "{} [{} / {}, {} / {}]",
        o.detail,
        p1.kind,
        show(&mira_topology),
        p2.kind,
        show(&henon_topology)
    );
    o
}

fn census(sample: &[State3], n: usize, lyapunov: Option<f64>) -> Result<LoopCensus> {
    count_cyclic_loops(sample, n, 1e-4, lyapunov)
}

fn criterion_5() -> Outcome {
    let mut checks = Checks::default();
    let mut verdicts = Vec::new();

    let x = follow_attractor(lv, LV_X0, -0.59, -1.0, 0.01, 3000);
    let l = lv(-1.0);
    let o = iterate_orbit(&l, x, 10_000, 20_000);
    let lam = max_lyapunov(&l, x, 200_000).ok();
    let c = census(&o.points, 6, lam);
    verdicts.push(format!("lv {}", c.as_ref().map_or_else(|e| e.to_string(), |c| c.verdict.to_string())));
    checks.add("lv beta=-1 cyclic-loops(6)", matches!(c.map(|c| c.verdict), Ok(Verdict::CyclicLoops(6))));

    let b = bcnf(1.5);
    let o = iterate_orbit(&b, BCNF_X0, 10_000, 21_000);
    let lam = max_lyapunov(&b, BCNF_X0, 200_000).ok();
    let c = census(&o.points, 7, lam);
    verdicts.push(format!("bcnf {}", c.as_ref().map_or_else(|e| e.to_string(), |c| c.verdict.to_string())));
    checks.add("bcnf delta_R=1.5 cyclic-loops(7)", matches!(c.map(|c| c.verdict), Ok(Verdict::CyclicLoops(7))));

    // two stable and two saddle period-20 cycles, mirror images under
    // x <-> y; each loop carries arcs of both saddles
    let cm = coupled(27.521);
    let s = attractor_cycle(&cm, COUPLED_X0, 20_000);
    let sd = saddle_for(&cm, &s, 20);
    let swap = |p: State3| State3::new(p.y, p.x, p.z);
    let mirrored = solve_cycle(&cm, swap(sd.points[0]), 20, &NewtonOptions::default()).map(|m| {
        let k = (0..m.period).min_by(|a, b| m.points[*a].dist(sd.points[0]).total_cmp(&m.points[*b].dist(sd.points[0])));
        m.rotated(k.unwrap_or(0))
    });
    let sample = mirrored.and_then(|m| {
        let mut v = sample_invariant_curve(&cm, &sd, 100, 400, 1e-6)?;
        v.extend(sample_invariant_curve(&cm, &m, 100, 400, 1e-6)?);
        checks.add("coupled mirrored saddle is a distinct cycle", m.points.iter().all(|p| sd.points.iter().all(|q| p.dist(*q) > 1e-6)));
        Ok(v)
    });
    match sample {
        Ok(sample) => {
            let c = census(&sample, 10, None);
            verdicts.push(format!("coupled {}", c.as_ref().map_or_else(|e| e.to_string(), |c| c.verdict.to_string())));
            checks.add("coupled a=27.521 cyclic-loops(10)", matches!(c.map(|c| c.verdict), Ok(Verdict::CyclicLoops(10))));
            let orbit = iterate_orbit(&cm, COUPLED_X0, 20_000, 2_000);
            checks.add("coupled iterates toggle between two loops", alternates_between_halves(&orbit.points));
            checks.add("coupled manifold sample toggles between two loops", alternates_between_halves(&sample));
        }
        Err(e) => checks.add(format!("coupled manifold sample: {e}"), false),
    }

    let mut o = checks.outcome();
    o.detail = format!("{} [{}]", o.detail, verdicts.join(", "));
    o
}

fn criterion_6() -> Outcome {
    let mut checks = Checks::default();
    let cases: Vec<(&str, BoundMap, State3)> = vec![
        ("mira B=-0.58", mira(-0.58), MIRA_X0),
        ("mira B=-0.54", mira(-0.54), MIRA_X0),
        ("henon a=1.2", henon(1.2), HENON_X0),
        ("lv beta=-0.59", lv(-0.59), LV_X0),
        ("bcnf delta_R=1.4", bcnf(1.4), BCNF_X0),
        ("coupled a=27.2", coupled(27.2), COUPLED_X0),
    ];
    let mut worst: f64 = 0.0;
    for (name, map, x0) in &cases {
        let c = attractor_cycle(map, *x0, 20_000);
        let expected = eigs(map, &c).max_modulus().ln() / c.period as f64;
        let got = max_lyapunov(map, c.points[0] + State3::splat(1e-7), 200_000);
        let err = got.as_ref().map_or(f64::INFINITY, |g| (g - expected).abs());
        worst = worst.max(err);
        checks.add(format!("{name} |dl| = {err:.2e}"), err <= 2e-3);
    }
    let t = Instant::now();
    let h = henon(1.0);
    let lam = max_lyapunov(&h, HENON_X0, 1_000_000);
    let secs = t.elapsed().as_secs_f64();
    let lam_v = lam.as_ref().copied().unwrap_or(f64::NAN);
    checks.add(format!("henon a=1.0 |l| = {:.2e}", lam_v.abs()), lam_v.abs() <= 5e-3);
    checks.add(format!("1e6-step run in {secs:.1}s"), secs <= 60.0);
    let mut o = checks.outcome();
    o.detail = format!("{} [worst cycle error {worst:.2e}, henon a=1.0 {lam_v:.2e}]", o.detail);
    o
}

fn dist_to_polyline(p: State3, line: &[State3]) -> f64 {
    let mut best = f64::INFINITY;
    for w in line.windows(2) {
        let d = w[1] - w[0];
        let l2 = d.dot(d);
        let t = if l2 > 0.0 { ((p - w[0]).dot(d) / l2).clamp(0.0, 1.0) } else { 0.0 };
        best = best.min(p.dist(w[0] + d * t));
    }
    if line.len() == 1 {
        best = p.dist(line[0]);
    }
    best
}

fn max_offset(points: &[State3], map: &BoundMap, iterations: usize, line: &[State3]) -> f64 {
    points
        .iter()
        .map(|p| {
            let mut x = *p;
            for _ in 0..iterations {
                x = map.apply(x);
            }
            dist_to_polyline(x, line)
        })
        .fold(0.0, f64::max)
}

fn edge_map(r: &ConnectionReport) -> BTreeMap<BranchId, usize> {
    r.edges.iter().map(|e| (e.branch, e.target)).collect()
}

fn arclength_change(a: &ConnectionReport, b: &ConnectionReport) -> f64 {
    let la: f64 = a.arclengths.iter().sum();
    let lb: f64 = b.arclengths.iter().sum();
    (la - lb).abs() / la
}

fn criterion_7() -> Outcome {
    let mut checks = Checks::default();
    let mut rng = Lcg(7);

    // analytic against central-difference Jacobians
    let mut cubic = ParamSet::new();
    for var in ["x", "y", "z"] {
        for i in 0..=3 {
            for j in 0..=3 - i {
                for k in 0..=3 - i - j {
                    cubic.push(&format!("{var}_{i}{j}{k}"), 0.6 * rng.next() - 0.3);
                }
            }
        }
    }
    let smooth: Vec<BoundMap> = vec![
        mira(-0.58),
        henon(1.2),
        lv(-0.59),
        coupled(27.3),
        MapDef::new(MapKind::UserCubic).bind(&cubic).expect("cubic coefficients"),
    ];
    for map in &smooth {
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let x = rng.in_box(-1.0, 1.0);
            let j = map.jacobian(x);
            for c in 0..3 {
                let mut e = State3::ZERO.to_array();
                let h = 1e-6 * x.to_array()[c].abs().max(1.0);
                e[c] = h;
                let e = State3::from_array(e);
                let fd = (map.apply(x + e) - map.apply(x - e)) * (0.5 / h);
                for r in 0..3 {
                    let scale = j.max_abs().max(1.0);
                    worst = worst.max((fd[r] - j.0[r][c]).abs() / scale);
                }
            }
        }
        checks.add(format!("{} jacobian vs difference {worst:.1e}", map.id()), worst <= 1e-6);
    }

    // det J = B for Mira
    let mut worst: f64 = 0.0;
    for b in [-0.58, -0.54, 0.3, 1.7] {
        let m = mira(b);
        for _ in 0..200 {
            worst = worst.max((m.jacobian(rng.in_box(-3.0, 3.0)).det() - b).abs());
        }
    }
    checks.add(format!("mira det J = B ({worst:.1e})"), worst <= 1e-12);

    // cyclic consistency and basepoint rotation
    let cycles: Vec<(BoundMap, Cycle)> = vec![
        (mira(-0.58), attractor_cycle(&mira(-0.58), MIRA_X0, 20_000)),
        (henon(1.2), attractor_cycle(&henon(1.2), HENON_X0, 20_000)),
        (lv(-0.59), attractor_cycle(&lv(-0.59), LV_X0, 20_000)),
        (bcnf(1.4), attractor_cycle(&bcnf(1.4), BCNF_X0, 20_000)),
        (coupled(27.2), attractor_cycle(&coupled(27.2), COUPLED_X0, 20_000)),
    ];
    for (map, c) in &cycles {
        let n = c.period;
        let cyc = (0..n)
            .map(|i| map.apply(c.points[i]).dist(c.points[(i + 1) % n]) / c.points[(i + 1) % n].norm().max(1.0))
            .fold(0.0, f64::max);
        checks.add(format!("{} period {n} cyclic consistency {cyc:.1e}", map.id()), cyc <= 1e-8);
        let base = eigs(map, c);
        let rho = base.max_modulus().max(1.0);
        let mut rot: f64 = 0.0;
        for k in 1..n {
            let e = eigs(map, &c.rotated(k));
            for (a, b) in base.values.iter().zip(e.values.iter()) {
                rot = rot.max((a - b).norm() / rho);
            }
        }
        checks.add(format!("{} basepoint rotation {rot:.1e}", map.id()), rot <= 1e-8);
    }

    // manifold invariance under F^n and delta0-halving stability
    let st = ManifoldSettings::default();
    let half = ManifoldSettings { delta0: st.delta0 / 2.0, ..st.clone() };
    let m = mira(-0.58);
    let s = attractor_cycle(&m, MIRA_X0, 20_000);
    let sd = saddle_for(&m, &s, 5);
    match (grow_and_classify(&m, &s, &sd, &st), grow_and_classify(&m, &s, &sd, &half)) {
        (Ok((curves, r)), Ok((_, rh))) => {
            let worst = curves
                .iter()
                .map(|c| max_offset(&c.points, &m, sd.period, &c.points))
                .fold(0.0, f64::max);
            checks.add(format!("mira B=-0.58 invariance offset {worst:.1e}"), worst <= 2.0 * st.h_max);
            checks.add("mira B=-0.58 halving delta0 keeps targets", edge_map(&r) == edge_map(&rh));
            let dl = arclength_change(&r, &rh);
            checks.add(format!("mira B=-0.58 halving delta0 changes arclength by {:.2}%", 100.0 * dl), dl < 0.01);
        }
        (a, b) => checks.add(format!("mira B=-0.58 manifolds: {:?} {:?}", a.err(), b.err()), false),
    }
    let h = henon(1.3);
    let s = attractor_cycle(&h, HENON_X0, 20_000);
    let sd = saddle_for(&h, &s, 8);
    match (grow_and_classify(&h, &s, &sd, &st), grow_and_classify(&h, &s, &sd, &half)) {
        (Ok((_, r)), Ok((_, rh))) => {
            checks.add("henon a=1.3 halving delta0 keeps topology", r.topology == rh.topology);
            // minus branches straddle the stable set of the period-4 flip
            // saddle, so their end points are reported but not asserted
            let same = edge_map(&r).iter().filter(|(b, t)| edge_map(&rh).get(b) == Some(t)).count();
            println!("    info: henon a=1.3 halving delta0 keeps {same}/{} terminal assignments", r.edges.len());
        }
        (a, b) => checks.add(format!("henon a=1.3 manifolds: {:?} {:?}", a.err(), b.err()), false),
    }

    // disjoint loops swap under F and return under F^2
    let m = mira(-0.54);
    let s = attractor_cycle(&m, MIRA_X0, 20_000);
    let sd = saddle_for(&m, &s, 10);
    match (grow_and_classify(&m, &s, &sd, &st), grow_and_classify(&m, &s, &sd, &half)) {
        (Ok((curves, r)), Ok((_, rh))) => {
            checks.add("mira B=-0.54 halving delta0 keeps targets", edge_map(&r) == edge_map(&rh));
            let dl = arclength_change(&r, &rh);
            checks.add(format!("mira B=-0.54 halving delta0 changes arclength by {:.2}%", 100.0 * dl), dl < 0.01);
            // loop membership of saddle points from the connection graph
            let mut comp: Vec<usize> = (0..sd.period).collect();
            for _ in 0..sd.period {
                for a in &r.edges {
                    for b in &r.edges {
                        if a.target == b.target {
                            let k = comp[a.branch.point].min(comp[b.branch.point]);
                            comp[a.branch.point] = k;
                            comp[b.branch.point] = k;
                        }
                    }
                }
            }
            let n = sd.period;
            let swap = (0..n).all(|i| comp[(i + 1) % n] != comp[i]);
            let fixed = (0..n).all(|i| comp[(i + 2) % n] == comp[i]);
            checks.add("mira B=-0.54 graph loops swap under F", swap);
            checks.add("mira B=-0.54 graph loops return under F^2", fixed);
            // F carries branch (i, d) into branch (i + 1, d)
            let by_id: BTreeMap<BranchId, &ManifoldCurve> = curves.iter().map(|c| (c.branch, c)).collect();
            let offset = |c: &ManifoldCurve, iters: usize| {
                let image = BranchId { point: (c.branch.point + iters) % n, direction: c.branch.direction };
                let other = &by_id[&image].points;
                let off = c
                    .points
                    .iter()
                    .step_by(10)
                    .map(|p| {
                        let mut x = *p;
                        for _ in 0..iters {
                            x = m.apply(x);
                        }
                        dist_to_polyline(x, other)
                    })
                    .fold(0.0, f64::max);
                (off, comp[image.point] == comp[c.branch.point])
            };
            let loop_a: Vec<&ManifoldCurve> = curves.iter().filter(|c| comp[c.branch.point] == comp[0]).collect();
            let one: Vec<(f64, bool)> = loop_a.iter().map(|c| offset(c, 1)).collect();
            let two: Vec<(f64, bool)> = loop_a.iter().map(|c| offset(c, 2)).collect();
            let f1 = one.iter().map(|o| o.0).fold(0.0, f64::max);
            let f2 = two.iter().map(|o| o.0).fold(0.0, f64::max);
            checks.add("mira B=-0.54 images of loop A under F lie on loop B", one.iter().all(|o| !o.1));
            checks.add("mira B=-0.54 images of loop A under F^2 lie on loop A", two.iter().all(|o| o.1));
            checks.add(format!("mira B=-0.54 F maps loop A onto loop B ({f1:.1e})"), f1 <= 2.0 * st.h_max);
            checks.add(format!("mira B=-0.54 F^2 maps loop A onto itself ({f2:.1e})"), f2 <= 2.0 * st.h_max);
        }
        (a, b) => checks.add(format!("mira B=-0.54 manifolds: {:?} {:?}", a.err(), b.err()), false),
    }
    checks.outcome()
}

fn criterion_8() -> Outcome {
    let mut checks = Checks::default();
    let m = mira(-0.555);
    let s = attractor_cycle(&m, MIRA_X0, 20_000);
    checks.add("mira B=-0.555 stable period 5", s.period == 5);
    let sd = find_saddle_between(&m, &s, 10, &NewtonOptions::default());
    let mira_ok = sd.as_ref().is_ok_and(|sd| sd.period == 10 && eigs(&m, sd).unstable_count() == 1);
    checks.add("mira B=-0.555 saddle period 10 coexists", mira_ok);
    if let Ok(sd) = &sd {
        let r = grow_and_classify(&m, &s, sd, &ManifoldSettings::default());
        let reported = r.as_ref().is_ok_and(|(_, r)| r.saddle_period == 10 && r.stable_period == 5);
        checks.add("mira B=-0.555 report lists periods 10 and 5", reported);
    }
    let h = henon(1.25);
    let s = attractor_cycle(&h, HENON_X0, 20_000);
    checks.add("henon a=1.25 stable period 8", s.period == 8 && eigs(&h, &s).max_modulus() < 1.0);
    let sd = find_saddle_between(&h, &s, 4, &NewtonOptions::default());
    let henon_ok = sd.as_ref().is_ok_and(|sd| sd.period == 4 && eigs(&h, sd).unstable_count() == 1);
    checks.add("henon a=1.25 saddle period 4 coexists", henon_ok);
    checks.outcome()
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 mira period-5 multipliers", criterion_1),
        ("2 henon period-4 multipliers", criterion_2),
        ("3 bifurcation localization", criterion_3),
        ("4 doubling prediction vs manifold topology", criterion_4),
        ("5 loop censuses", criterion_5),
        ("6 lyapunov consistency", criterion_6),
        ("7 property suites", criterion_7),
        ("8 intermediate structures", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {name}: {tag} ({:.1}s) {}", t.elapsed().as_secs_f64(), o.detail);
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
