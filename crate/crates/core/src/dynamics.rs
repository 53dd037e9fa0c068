//! Orbit simulation, bifurcation scans, maximal Lyapunov exponents and
//! the census of cyclic closed curves.

use std::fmt;

use rayon::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::State3;
use crate::maps::{BoundMap, ParamSet};

pub const ESCAPE_RADIUS: f64 = 1e6;
pub const LYAPUNOV_TRANSIENT: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSample {
    pub map_id: String,
    pub params: ParamSet,
    pub initial: State3,
    pub transient: usize,
    pub points: Vec<State3>,
    /// Iteration count at which the orbit left the escape radius.
    pub escaped_at: Option<usize>,
}

impl OrbitSample {
    pub fn escaped(&self) -> bool {
        self.escaped_at.is_some()
    }

    pub fn last(&self) -> Option<State3> {
        self.points.last().copied()
    }
}

fn escaped(s: State3) -> bool {
    !s.is_finite() || s.norm_inf() > ESCAPE_RADIUS
}

/// Discards `n_transient` iterates and keeps the next `n_keep`.
pub fn iterate_orbit(map: &BoundMap, x0: State3, n_transient: usize, n_keep: usize) -> OrbitSample {
    let mut s = x0;
    let mut points = Vec::with_capacity(n_keep);
    let mut escaped_at = None;
    for k in 0..n_transient + n_keep {
        s = map.apply(s);
        if escaped(s) {
            escaped_at = Some(k + 1);
            break;
        }
        if k >= n_transient {
            points.push(s);
        }
    }
    OrbitSample {
        map_id: map.id().to_string(),
        params: map.params().clone(),
        initial: x0,
        transient: n_transient,
        points,
        escaped_at,
    }
}

/// Benettin estimate of the maximal Lyapunov exponent over `n_steps`
/// after a transient of [`LYAPUNOV_TRANSIENT`] steps.
pub fn max_lyapunov(map: &BoundMap, x0: State3, n_steps: usize) -> Result<f64> {
    max_lyapunov_with(map, x0, LYAPUNOV_TRANSIENT, n_steps)
}

pub fn max_lyapunov_with(map: &BoundMap, x0: State3, n_transient: usize, n_steps: usize) -> Result<f64> {
    if n_steps == 0 {
        return Err(Error::Precondition("n_steps must be positive".into()));
    }
    let mut s = x0;
    for k in 0..n_transient {
        s = map.apply(s);
        if escaped(s) {
            return Err(Error::Escaped { steps: k + 1 });
        }
    }
    let mut v = State3::new(1.0, 1.0, 1.0).normalized();
    let mut sum = 0.0;
    for k in 0..n_steps {
        let w = map.jacobian(s).mul_vec(v);
        s = map.apply(s);
        if escaped(s) {
            return Err(Error::Escaped { steps: n_transient + k + 1 });
        }
        let norm = w.norm();
        if norm > 0.0 && norm.is_finite() {
            sum += norm.ln();
            v = w * (1.0 / norm);
        } else {
            // tangent collapsed onto a null direction; restart it
            sum += f64::MIN_POSITIVE.ln();
            v = State3::new(1.0, -1.0, 1.0).normalized();
        }
    }
    Ok(sum / n_steps as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedPolicy {
    /// Every grid point starts from the same initial state.
    Fixed,
    /// Each grid point starts from the previous point's final state.
    Follow,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub param: f64,
    pub index: usize,
    pub state: State3,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanDataset {
    pub param_name: String,
    pub rows: Vec<ScanRow>,
    /// Grid values whose orbit escaped.
    pub escapes: Vec<f64>,
}

impl ScanDataset {
    /// States recorded at one grid value.
    pub fn states_at(&self, param: f64) -> Vec<State3> {
        self.rows.iter().filter(|r| r.param == param).map(|r| r.state).collect()
    }
}

/// Brute-force bifurcation diagram over `grid`.
pub fn bifurcation_scan(
    map: &BoundMap,
    param: &str,
    grid: &[f64],
    policy: SeedPolicy,
    x0: State3,
    n_transient: usize,
    n_keep: usize,
) -> Result<ScanDataset> {
    if grid.windows(2).any(|w| !(w[1] > w[0]) && !(w[1] < w[0])) {
        return Err(Error::Precondition("scan grid must be strictly monotone".into()));
    }
    let maps: Vec<BoundMap> = grid.iter().map(|&v| map.with_param(param, v)).collect::<Result<_>>()?;
    let samples: Vec<OrbitSample> = match policy {
        SeedPolicy::Fixed => maps.par_iter().map(|m| iterate_orbit(m, x0, n_transient, n_keep)).collect(),
        SeedPolicy::Follow => {
            let mut out = Vec::with_capacity(maps.len());
            let mut seed = x0;
            for m in &maps {
                let s = iterate_orbit(m, seed, n_transient, n_keep);
                if let Some(last) = s.last().filter(|_| !s.escaped()) {
                    seed = last;
                }
                out.push(s);
            }
            out
        }
    };
    let mut ds = ScanDataset { param_name: param.to_string(), ..Default::default() };
    for (v, s) in grid.iter().zip(samples) {
        if s.escaped() {
            ds.escapes.push(*v);
        }
        ds.rows.extend(s.points.into_iter().enumerate().map(|(index, state)| ScanRow { param: *v, index, state }));
    }
    Ok(ds)
}

/// Number of distinct values in `xs` up to `tol`.
pub fn distinct_values(xs: &[f64], tol: f64) -> usize {
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for x in v {
        if x - last > tol {
            count += 1;
        }
        last = x;
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    PeriodicPoints,
    CyclicLoops(usize),
    MergedStructure,
    Chaotic,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::PeriodicPoints => f.write_str("periodic-points"),
            Verdict::CyclicLoops(n) => write!(f, "cyclic-loops({n})"),
            Verdict::MergedStructure => f.write_str("merged-structure"),
            Verdict::Chaotic => f.write_str("chaotic"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopCensus {
    pub multiplicity: usize,
    pub diameters: Vec<f64>,
    pub scores: Vec<f64>,
    /// Smallest distance between points of different classes.
    pub class_gap: f64,
    pub lyapunov: Option<f64>,
    pub verdict: Verdict,
}

impl LoopCensus {
    pub fn summary(&self) -> String {
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ");
        let mut s = format!("verdict = {}\nmultiplicity = {}\n", self.verdict, self.multiplicity);
        s.push_str(&format!("diameters = {}\n", fmt(&self.diameters)));
        s.push_str(&format!("scores = {}\n", fmt(&self.scores)));
        s.push_str(&format!("class_gap = {:.6e}\n", self.class_gap));
        match self.lyapunov {
            Some(l) => s.push_str(&format!("lyapunov = {l:.6e}\n")),
            None => s.push_str("lyapunov = none\n"),
        }
        s
    }
}

pub const CURVE_SCORE_THRESHOLD: f64 = 0.8;
const MAX_CLASS_POINTS: usize = 3000;

/// Fixed-seed random subsample, kept in order. A regular stride would
/// alias with any hidden sub-period of the class.
fn thin(points: Vec<State3>) -> Vec<State3> {
    if points.len() <= MAX_CLASS_POINTS {
        return points;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut idx = rand::seq::index::sample(&mut rng, points.len(), MAX_CLASS_POINTS).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| points[i]).collect()
}

fn diameter(p: &[State3]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            d = d.max(p[i].dist(p[j]));
        }
    }
    d
}

/// Curve-likeness: fraction of points whose nearest neighbour `a` and
/// nearest neighbour `b` on the opposite side (`(b-p).(a-p) < 0`) point in
/// nearly antipodal directions (`cos < -0.8`). Also returns the mean
/// nearest-neighbour spacing.
pub fn curve_likeness(p: &[State3]) -> (f64, f64) {
    if p.len() < 3 {
        return (0.0, 0.0);
    }
    let mut good = 0usize;
    let mut spacing = 0.0;
    for (k, &x) in p.iter().enumerate() {
        let mut a = None;
        let mut da = f64::INFINITY;
        for (j, &y) in p.iter().enumerate() {
            let d = x.dist(y);
            if j != k && d < da && d > 0.0 {
                da = d;
                a = Some(y - x);
            }
        }
        let Some(a) = a else { continue };
        spacing += da;
        let mut b = None;
        let mut db = f64::INFINITY;
        for (j, &y) in p.iter().enumerate() {
            let v = y - x;
            let d = v.norm();
            if j != k && d > 0.0 && d < db && v.dot(a) < 0.0 {
                db = d;
                b = Some(v);
            }
        }
        if let Some(b) = b {
            if a.dot(b) / (a.norm() * b.norm()) < -CURVE_SCORE_THRESHOLD {
                good += 1;
            }
        }
    }
    (good as f64 / p.len() as f64, spacing / p.len() as f64)
}

/// Number of groups of `p` under single linkage at distance `radius`.
pub fn linked_groups(p: &[State3], radius: f64) -> usize {
    let mut parent: Vec<usize> = (0..p.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i].dist(p[j]) <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    (0..p.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Partitions iterates by index modulo `n` and decides whether they form
/// `n` separated closed curves visited cyclically.
///
/// Each class must also hang together as one piece under single linkage
/// at a tenth of its diameter.
///
/// `lyapunov` is the caller's estimate of the maximal exponent; above
/// 1e-3 the verdict is chaotic, and loops require it (when given) to be
/// at most 1e-3.
pub fn count_cyclic_loops(sample: &[State3], n: usize, point_tol: f64, lyapunov: Option<f64>) -> Result<LoopCensus> {
    if n == 0 || sample.len() < 100 * n {
        return Err(Error::Precondition(format!("sample of {} points too short for multiplicity {n}", sample.len())));
    }
    if sample.iter().any(|p| escaped(*p)) {
        return Err(Error::Precondition("sample is not bounded".into()));
    }
    let classes: Vec<Vec<State3>> =
        (0..n).map(|r| thin(sample.iter().skip(r).step_by(n).copied().collect())).collect();
    let stats: Vec<(f64, f64, f64, usize)> = classes
        .par_iter()
        .map(|c| {
            let (score, spacing) = curve_likeness(c);
            let d = diameter(c);
            (d, score, spacing, linked_groups(c, 0.1 * d))
        })
        .collect();
    let diameters: Vec<f64> = stats.iter().map(|s| s.0).collect();
    let scores: Vec<f64> = stats.iter().map(|s| s.1).collect();
    let spacing = stats.iter().map(|s| s.2).fold(0.0, f64::max);

    let mut class_gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            for p in &classes[i] {
                for q in &classes[j] {
                    class_gap = class_gap.min(p.dist(*q));
                }
            }
        }
    }

    let chaotic = lyapunov.is_some_and(|l| l > 1e-3);
    let verdict = if chaotic {
        Verdict::Chaotic
    } else if diameters.iter().all(|d| *d < point_tol) {
        Verdict::PeriodicPoints
    } else if n > 1 && class_gap < 3.0 * spacing {
        Verdict::MergedStructure
    } else if diameters.iter().all(|d| *d > point_tol)
        && scores.iter().all(|s| *s >= CURVE_SCORE_THRESHOLD)
        && stats.iter().all(|s| s.3 == 1)
    {
        Verdict::CyclicLoops(n)
    } else {
        Verdict::MergedStructure
    };
    Ok(LoopCensus { multiplicity: n, diameters, scores, class_gap, lyapunov, verdict })
}

/// Whether even and odd iterates occupy two separated halves: the
/// projections onto the line joining the two centroids do not overlap.
pub fn alternates_between_halves(points: &[State3]) -> bool {
    let even: Vec<State3> = points.iter().step_by(2).copied().collect();
    let odd: Vec<State3> = points.iter().skip(1).step_by(2).copied().collect();
    if even.is_empty() || odd.is_empty() {
        return false;
    }
    let mean = |v: &[State3]| v.iter().fold(State3::ZERO, |a, p| a + *p) * (1.0 / v.len() as f64);
    let d = mean(&even) - mean(&odd);
    let lo_even = even.iter().map(|p| p.dot(d)).fold(f64::INFINITY, f64::min);
    let hi_odd = odd.iter().map(|p| p.dot(d)).fold(f64::NEG_INFINITY, f64::max);
    lo_even > hi_odd
}
