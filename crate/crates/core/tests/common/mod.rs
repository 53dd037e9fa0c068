#![allow(dead_code)]

use modelock::cycles::{find_doubled_cycle, find_saddle_between};
use modelock::{
    cycle_multipliers, iterate_orbit, seed_cycles_from_orbit, solve_cycle, BoundMap, Cycle, EigenTriple, MapDef,
    MapKind, NewtonOptions, State3,
};

pub fn bind(kind: MapKind, overrides: &[(&str, f64)]) -> BoundMap {
    let d = MapDef::new(kind);
    d.bind(&d.params_with(overrides)).expect("valid parameters")
}

pub fn mira(b: f64) -> BoundMap {
    bind(MapKind::Mira, &[("A", -2.269), ("B", b), ("C", -2.1)])
}

pub fn henon(a: f64) -> BoundMap {
    bind(MapKind::GenHenon, &[("a", a), ("b", 0.1)])
}

pub fn lv(beta: f64) -> BoundMap {
    bind(MapKind::LotkaVolterra, &[("R", 1.0), ("alpha", 1.0), ("beta", beta)])
}

pub fn bcnf(delta_r: f64) -> BoundMap {
    bind(MapKind::BorderCollision, &[("delta_R", delta_r)])
}

pub fn coupled(a: f64) -> BoundMap {
    bind(MapKind::CoupledQuartic, &[("a", a)])
}

pub const MIRA_X0: State3 = State3::new(0.1, 0.1, 0.1);
pub const HENON_X0: State3 = State3::new(0.1, 0.1, 0.1);
pub const LV_X0: State3 = State3::new(0.62893, 0.95831, 0.41276);
pub const BCNF_X0: State3 = State3::new(0.01, 0.0, 0.0);
pub const COUPLED_X0: State3 = State3::new(0.051, 0.149, -0.038);

/// Attracting cycle reached from `x0` by simulation and Newton polish.
pub fn attractor_cycle(map: &BoundMap, x0: State3, transient: usize) -> Cycle {
    let o = iterate_orbit(map, x0, transient, 400);
    assert!(!o.escaped(), "orbit escaped for {}", map.params());
    let seeds = seed_cycles_from_orbit(&o.points, 64, 1e-7);
    let (n, g) = *seeds.first().unwrap_or_else(|| panic!("no recurrence for {}", map.params()));
    solve_cycle(map, g, n, &NewtonOptions::default()).expect("newton converges on the attractor")
}

pub fn saddle_for(map: &BoundMap, stable: &Cycle, period: usize) -> Cycle {
    find_saddle_between(map, stable, period, &NewtonOptions::default()).expect("saddle found")
}

pub fn doubled(map: &BoundMap, c: &Cycle) -> Cycle {
    find_doubled_cycle(map, c, &NewtonOptions::default()).expect("doubled cycle found")
}

pub fn eigs(map: &BoundMap, c: &Cycle) -> EigenTriple {
    cycle_multipliers(map, c).expect("finite multipliers")
}

/// Final state of an attractor followed in small parameter steps.
pub fn follow_attractor(
    make: impl Fn(f64) -> BoundMap,
    x0: State3,
    from: f64,
    to: f64,
    step: f64,
    iterations: usize,
) -> State3 {
    let n = ((to - from) / step).abs().round() as usize;
    let mut x = x0;
    for k in 0..=n {
        let p = from + (to - from) * k as f64 / n.max(1) as f64;
        let o = iterate_orbit(&make(p), x, iterations, 1);
        assert!(!o.escaped(), "escaped while following at {p}");
        x = o.points[0];
    }
    x
}

/// Deterministic uniform numbers in [0, 1).
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn in_box(&mut self, lo: f64, hi: f64) -> State3 {
        State3::new(lo + (hi - lo) * self.next(), lo + (hi - lo) * self.next(), lo + (hi - lo) * self.next())
    }
}
