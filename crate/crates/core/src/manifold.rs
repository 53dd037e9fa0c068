//! One-dimensional unstable manifolds of saddle cycles, grown by the
//! method of fundamental domains, and classification of the
//! saddle-to-node connections they form.

use std::fmt;

use rayon::prelude::*;

use crate::cycles::{cycle_multipliers, Cycle, EigenTriple};
use crate::error::{Error, Result};
use crate::linalg::{complex_eigenvector, real_eigenvector, CharPoly, Matrix3, State3};
use crate::maps::BoundMap;

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldSettings {
    /// Offset of the first fundamental domain from the saddle.
    pub delta0: f64,
    /// Maximal spacing between consecutive polyline points.
    pub h_max: f64,
    /// Maximal turning angle between consecutive segments (radians).
    pub angle_max: f64,
    pub length_budget: f64,
    /// Attractor tolerance: a branch has converged once the end of its
    /// newest fundamental domain lies this close to an attractor point.
    pub eps_att: f64,
    pub escape_radius: f64,
    pub max_points: usize,
    /// Cap on the points of a single fundamental domain.
    pub max_domain_points: usize,
    pub max_levels: usize,
}

impl Default for ManifoldSettings {
    fn default() -> Self {
        Self {
            delta0: 1e-4,
            h_max: 1e-3,
            angle_max: 0.2,
            length_budget: 1e3,
            eps_att: 1e-6,
            escape_radius: 1e6,
            max_points: 4_000_000,
            max_domain_points: 200_000,
            max_levels: 20_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Plus => 1.0,
            Direction::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Direction::Plus => '+',
            Direction::Minus => '-',
        }
    }
}

/// Branch `(i, ±)`: the side of the saddle point `p_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchId {
    pub point: usize,
    pub direction: Direction,
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.point, self.direction.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    Converged { point: usize },
    BudgetExhausted,
    Escaped,
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Terminal::Converged { point } => write!(f, "converged-to-attractor({point})"),
            Terminal::BudgetExhausted => f.write_str("budget-exhausted"),
            Terminal::Escaped => f.write_str("escaped"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldCurve {
    pub branch: BranchId,
    pub saddle_period: usize,
    /// Polyline ordered along the branch, starting next to the saddle.
    pub points: Vec<State3>,
    /// Fundamental-domain parameter of each point: `s = k + t` is the
    /// `k`-th image of the seed segment at fraction `t`.
    pub params: Vec<f64>,
    pub arclength: f64,
    pub terminal: Terminal,
    /// Largest distance of the final fundamental domain from the terminal
    /// attractor point. Above `eps_att` when part of the domain follows
    /// another route (the branch passes close to the stable set of some
    /// other saddle); infinite when not converged.
    pub domain_spread: f64,
    /// Unstable multiplier of the saddle.
    pub multiplier: f64,
    /// Seed was moved to the other side because its image landed on the wrong side.
    pub direction_flipped: bool,
}

impl ManifoldCurve {
    pub fn target(&self) -> Option<usize> {
        match self.terminal {
            Terminal::Converged { point } => Some(point),
            _ => None,
        }
    }
}

/// Unstable multiplier and eigenvector at `p_0`.
fn unstable_direction(map: &BoundMap, saddle: &Cycle) -> Result<(f64, State3, Matrix3)> {
    let m = saddle.monodromy(map, 0);
    let e = EigenTriple::of_matrix(&m);
    let unstable: Vec<_> = e.values.iter().filter(|z| z.norm() > 1.0).collect();
    if unstable.iter().any(|z| !EigenTriple::is_real(**z)) {
        return Err(Error::UnsupportedBranch(format!("complex unstable pair {e}")));
    }
    if unstable.len() != 1 {
        return Err(Error::UnsupportedBranch(format!("{} unstable multipliers {e}", unstable.len())));
    }
    let lambda = e.values[0].re;
    Ok((lambda, real_eigenvector(&m, lambda), m))
}

struct Grower<'a> {
    map: &'a BoundMap,
    /// Applications of F per step of G.
    m: usize,
    q0: State3,
    q1: State3,
}

impl Grower<'_> {
    fn g(&self, mut s: State3) -> State3 {
        for _ in 0..self.m {
            s = self.map.apply(s);
        }
        s
    }

    fn point_at(&self, s: f64) -> State3 {
        let k = s.floor();
        let t = s - k;
        let mut x = self.q0.lerp(self.q1, t);
        for _ in 0..k as usize {
            x = self.g(x);
        }
        x
    }
}

fn turn_angle(a: State3, b: State3, c: State3) -> f64 {
    let (u, v) = (b - a, c - b);
    let (nu, nv) = (u.norm(), v.norm());
    if nu < 1e-12 || nv < 1e-12 {
        return 0.0;
    }
    (u.dot(v) / (nu * nv)).clamp(-1.0, 1.0).acos()
}

/// Inserts preimage-parameter midpoints into `seg` until spacing and
/// turning angle are within bounds.
fn refine(gr: &Grower<'_>, seg: &mut Vec<(f64, State3)>, st: &ManifoldSettings) {
    for _ in 0..60 {
        let n = seg.len();
        let mut split = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if seg[i].1.dist(seg[i + 1].1) > st.h_max {
                split[i] = true;
            }
            if i + 2 < n && turn_angle(seg[i].1, seg[i + 1].1, seg[i + 2].1) > st.angle_max {
                split[i] = true;
                split[i + 1] = true;
            }
        }
        let mut changed = false;
        let mut out = Vec::with_capacity(n + split.iter().filter(|b| **b).count());
        for i in 0..n {
            out.push(seg[i]);
            if i + 1 < n && split[i] {
                let (sa, sb) = (seg[i].0, seg[i + 1].0);
                if sb - sa > 1e-13 * sb.max(1.0) {
                    let sm = 0.5 * (sa + sb);
                    out.push((sm, gr.point_at(sm)));
                    changed = true;
                }
            }
        }
        *seg = out;
        if !changed {
            break;
        }
    }
}

fn nearest(targets: &[State3], p: State3) -> (usize, f64) {
    targets
        .iter()
        .enumerate()
        .map(|(j, t)| (j, t.dist(p)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, f64::INFINITY))
}

/// Grows one branch of the unstable manifold of `saddle`.
///
/// `G = F^n` when the unstable multiplier is positive and `F^{2n}`
/// otherwise. Branch `(i, ±)` is seeded at `F^i(p_0 ± δ v_0)` with `δ`
/// scaled so the seed lies within `delta0` of `p_i`; branches are then
/// images of each other under `F`. Growth stops once the end of the newest
/// fundamental domain is within `eps_att` of one of `targets` and the whole
/// domain has collapsed there (or the domain cap is hit, or 20 further
/// levels pass), on escape, or when a budget runs out.
pub fn grow_unstable_manifold(
    map: &BoundMap,
    saddle: &Cycle,
    branch: BranchId,
    targets: &[State3],
    st: &ManifoldSettings,
) -> Result<ManifoldCurve> {
    let n = saddle.period;
    if branch.point >= n {
        return Err(Error::Precondition(format!("branch point {} out of range", branch.point)));
    }
    let (lambda, v0, _) = unstable_direction(map, saddle)?;
    let m = if lambda > 0.0 { n } else { 2 * n };

    // tangent images of v0 along the cycle fix the seed scale
    let mut tangents = Vec::with_capacity(n);
    let mut w = v0;
    for k in 0..n {
        tangents.push(w);
        w = map.jacobian(saddle.points[k]).mul_vec(w);
    }
    let gain = tangents.iter().map(|t| t.norm()).fold(0.0, f64::max).max(1.0);
    // margin for the nonlinear part of F^i
    let delta = 0.99 * st.delta0 / gain;

    let seed = |sign: f64| {
        let mut q = saddle.points[0] + v0 * (sign * delta);
        for _ in 0..branch.point {
            q = map.apply(q);
        }
        q
    };
    let pi = saddle.points[branch.point];
    let wi = tangents[branch.point];
    let mut sign = branch.direction.sign();
    let mut q0 = seed(sign);
    let mut gr = Grower { map, m, q0, q1: q0 };
    let mut q1 = gr.g(q0);
    let mut direction_flipped = false;
    if (q1 - pi).dot(wi) * (q0 - pi).dot(wi) < 0.0 {
        sign = -sign;
        q0 = seed(sign);
        gr.q0 = q0;
        q1 = gr.g(q0);
        direction_flipped = true;
    }
    gr.q0 = q0;
    gr.q1 = q1;

    let n0 = ((q1.dist(q0) / st.h_max).ceil() as usize).max(1) + 1;
    let mut domain: Vec<(f64, State3)> =
        (0..n0).map(|j| j as f64 / (n0 - 1) as f64).map(|s| (s, gr.point_at(s))).collect();
    domain[n0 - 1] = (1.0, q1);
    refine(&gr, &mut domain, st);

    let mut curve: Vec<(f64, State3)> = domain.clone();
    let mut arclength: f64 = curve.windows(2).map(|w| w[0].1.dist(w[1].1)).sum();
    let mut terminal = Terminal::BudgetExhausted;
    let mut domain_spread = f64::INFINITY;
    let mut settled_levels = 0usize;
    for _level in 0..st.max_levels {
        if let Some(k) = domain.iter().position(|(_, p)| !p.is_finite() || p.norm_inf() > st.escape_radius) {
            let cut = curve.len() - domain.len() + k;
            curve.truncate(cut);
            terminal = Terminal::Escaped;
            break;
        }
        let (j, d_end) = nearest(targets, domain[domain.len() - 1].1);
        if d_end < st.eps_att {
            let spread = domain.iter().map(|(_, p)| p.dist(targets[j])).fold(0.0, f64::max);
            settled_levels += 1;
            if spread < st.eps_att || domain.len() > st.max_domain_points || settled_levels > 20 {
                terminal = Terminal::Converged { point: j };
                domain_spread = spread;
                break;
            }
        }
        if arclength > st.length_budget || curve.len() > st.max_points || domain.len() > st.max_domain_points {
            break;
        }
        let mut next: Vec<(f64, State3)> = Vec::with_capacity(domain.len());
        next.push(domain[domain.len() - 1]);
        for &(s, p) in &domain[1..] {
            next.push((s + 1.0, gr.g(p)));
        }
        refine(&gr, &mut next, st);
        arclength += next.windows(2).map(|w| w[0].1.dist(w[1].1)).sum::<f64>();
        curve.extend_from_slice(&next[1..]);
        domain = next;
    }
    let arclength = curve.windows(2).map(|w| w[0].1.dist(w[1].1)).sum();
    Ok(ManifoldCurve {
        branch,
        saddle_period: n,
        params: curve.iter().map(|c| c.0).collect(),
        points: curve.into_iter().map(|c| c.1).collect(),
        arclength,
        terminal,
        domain_spread,
        multiplier: lambda,
        direction_flipped,
    })
}

/// All `2n` branches of the saddle, grown in parallel.
pub fn grow_branches(
    map: &BoundMap,
    saddle: &Cycle,
    targets: &[State3],
    st: &ManifoldSettings,
) -> Result<Vec<ManifoldCurve>> {
    let ids: Vec<BranchId> = (0..saddle.period)
        .flat_map(|i| [Direction::Plus, Direction::Minus].map(|direction| BranchId { point: i, direction }))
        .collect();
    ids.par_iter().map(|b| grow_unstable_manifold(map, saddle, *b, targets, st)).collect()
}

/// Dense sample of the invariant curve through a saddle: orbit chunks of
/// `steps` iterates started on a fundamental domain on both sides of
/// `p_0`. `steps` must be a multiple of the saddle period so that chunk
/// indices stay aligned modulo the period.
pub fn sample_invariant_curve(
    map: &BoundMap,
    saddle: &Cycle,
    seeds_per_side: usize,
    steps: usize,
    delta: f64,
) -> Result<Vec<State3>> {
    if steps % saddle.period != 0 {
        return Err(Error::Precondition("chunk length must be a multiple of the saddle period".into()));
    }
    let (lambda, v0, _) = unstable_direction(map, saddle)?;
    let mut out = Vec::with_capacity(2 * seeds_per_side * steps);
    for sign in [1.0, -1.0] {
        for j in 0..seeds_per_side {
            let t = j as f64 / seeds_per_side as f64;
            let mut q = saddle.points[0] + v0 * (sign * delta * lambda.abs().powf(t));
            for _ in 0..steps {
                out.push(q);
                q = map.step(q)?;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    SingleLoop,
    DisjointLoops(usize),
    LengthDoubled,
    SaddleFocusSpiral,
    Indeterminate,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::SingleLoop => f.write_str("single-loop"),
            Topology::DisjointLoops(k) => write!(f, "disjoint-loops({k})"),
            Topology::LengthDoubled => f.write_str("length-doubled"),
            Topology::SaddleFocusSpiral => f.write_str("saddle-focus-spiral"),
            Topology::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub branch: BranchId,
    /// Index of the stable point the branch converges to.
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionReport {
    pub topology: Topology,
    pub saddle_period: usize,
    pub stable_period: usize,
    pub edges: Vec<Edge>,
    /// Number of branches ending at each stable point.
    pub node_degrees: Vec<usize>,
    pub components: usize,
    /// Winding of a single loop around the stable-point centroid.
    pub winding: Option<f64>,
    pub arclengths: Vec<f64>,
    /// Turns of the approach direction in the contracting eigenplane.
    pub spiral_turns: Vec<f64>,
    pub structure: String,
}

impl ConnectionReport {
    /// Structured `key = value` summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("topology = {}\n", self.topology));
        s.push_str(&format!("saddle_period = {}\n", self.saddle_period));
        s.push_str(&format!("stable_period = {}\n", self.stable_period));
        s.push_str(&format!("components = {}\n", self.components));
        match self.winding {
            Some(w) => s.push_str(&format!("winding = {w:.4}\n")),
            None => s.push_str("winding = none\n"),
        }
        let edges: Vec<String> = self.edges.iter().map(|e| format!("{}->{}", e.branch, e.target)).collect();
        s.push_str(&format!("edges = {}\n", edges.join(" ")));
        let degs: Vec<String> = self.node_degrees.iter().map(|d| d.to_string()).collect();
        s.push_str(&format!("node_degrees = {}\n", degs.join(" ")));
        let lens: Vec<String> = self.arclengths.iter().map(|l| format!("{l:.6}")).collect();
        s.push_str(&format!("arclengths = {}\n", lens.join(" ")));
        if !self.spiral_turns.is_empty() {
            let t: Vec<String> = self.spiral_turns.iter().map(|l| format!("{l:.3}")).collect();
            s.push_str(&format!("spiral_turns = {}\n", t.join(" ")));
        }
        s.push_str(&format!("structure = {}\n", self.structure));
        s
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut k = i;
        while self.0[k] != r {
            let next = self.0[k];
            self.0[k] = r;
            k = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Orthonormal basis of the best-fit plane through `pts`, with centroid.
fn principal_plane(pts: &[State3]) -> (State3, State3, State3) {
    let n = pts.len().max(1) as f64;
    let c = pts.iter().fold(State3::ZERO, |a, p| a + *p) * (1.0 / n);
    let mut cov = [[0.0; 3]; 3];
    for p in pts {
        let d = (*p - c).to_array();
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += d[i] * d[j] / n;
            }
        }
    }
    let cov = Matrix3(cov);
    let mut ev: Vec<f64> = CharPoly::of(&cov).roots().iter().map(|z| z.re).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    let e1 = real_eigenvector(&cov, ev[0]);
    let normal = real_eigenvector(&cov, ev[2]);
    let mut e2 = normal.cross(e1);
    if e2.norm() < 1e-9 {
        e2 = real_eigenvector(&cov, ev[1]);
    }
    (c, e1, e2.normalized())
}

/// Unwrapped angle swept by `path` around `c` in the plane `(e1, e2)`.
fn swept_angle(path: &[State3], c: State3, e1: State3, e2: State3) -> f64 {
    let ang = |p: State3| {
        let d = p - c;
        d.dot(e2).atan2(d.dot(e1))
    };
    let mut total = 0.0;
    for w in path.windows(2) {
        let mut d = ang(w[1]) - ang(w[0]);
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d <= -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        total += d;
    }
    total
}

/// Turns of the approach to `target` measured in the contracting
/// eigenplane of a focus, over the tail of the curve inside a ball of
/// radius `radius`.
fn spiral_turns(curve: &ManifoldCurve, target: State3, basis: &Matrix3, radius: f64) -> f64 {
    let start = curve.points.iter().rposition(|p| p.dist(target) > radius).map_or(0, |k| k + 1);
    let tail = &curve.points[start..];
    let coords: Vec<(f64, f64)> = tail
        .iter()
        .filter_map(|p| basis.solve(*p - target))
        .map(|x| (x.x, x.y))
        .collect();
    let mut total = 0.0;
    for w in coords.windows(2) {
        let a0 = w[0].1.atan2(w[0].0);
        let a1 = w[1].1.atan2(w[1].0);
        let mut d = a1 - a0;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d <= -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        total += d;
    }
    total.abs() / (2.0 * std::f64::consts::PI)
}

/// Builds the saddle-to-stable connection graph and tags its topology.
///
/// With every stable point reached by exactly two branches the graph is a
/// union of cycles: `k >= 2` components give disjoint loops, a single
/// component is a single loop or a length-doubled loop depending on its
/// winding around the centroid of the stable points. Branches that spiral
/// into a focus for at least 1.5 turns give a saddle-focus connection.
pub fn classify_connection(
    map: &BoundMap,
    saddle: &Cycle,
    stable: &Cycle,
    curves: &[ManifoldCurve],
) -> Result<ConnectionReport> {
    let bad: Vec<String> = curves.iter().filter(|c| c.target().is_none()).map(|c| format!("{} ({})", c.branch, c.terminal)).collect();
    if !bad.is_empty() {
        return Err(Error::Precondition(format!("unconverged branches: {}", bad.join(", "))));
    }
    let ns = saddle.period;
    let nn = stable.period;
    let edges: Vec<Edge> =
        curves.iter().map(|c| Edge { branch: c.branch, target: c.target().expect("checked above") }).collect();
    if edges.iter().any(|e| e.target >= nn || e.branch.point >= ns) {
        return Err(Error::Precondition("branch target outside the stable cycle".into()));
    }
    let mut node_degrees = vec![0usize; nn];
    for e in &edges {
        node_degrees[e.target] += 1;
    }
    let mut uf = UnionFind::new(ns + nn);
    for e in &edges {
        uf.union(e.branch.point, ns + e.target);
    }
    let mut roots: Vec<usize> = (0..ns + nn).map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    let components = roots.len();
    let arclengths: Vec<f64> = curves.iter().map(|c| c.arclength).collect();

    // spiral test into foci
    let stable_eigs = cycle_multipliers(map, stable)?;
    let mut spiral = Vec::new();
    if stable_eigs.has_complex_pair() {
        let mut others: Vec<State3> = stable.points.clone();
        others.extend_from_slice(&saddle.points);
        for c in curves {
            let j = c.target().expect("checked above");
            let t = stable.points[j];
            let radius = 0.25
                * others.iter().filter(|p| p.dist(t) > 1e-9).map(|p| p.dist(t)).fold(f64::INFINITY, f64::min);
            let mj = stable.monodromy(map, j);
            let e = EigenTriple::of_matrix(&mj);
            let Some(lc) = e.complex_pair() else { continue };
            let real = e.values.iter().find(|z| EigenTriple::is_real(**z)).map_or(0.0, |z| z.re);
            let (re, im) = complex_eigenvector(&mj, lc);
            let w3 = real_eigenvector(&mj, real);
            let basis = Matrix3([[re.x, im.x, w3.x], [re.y, im.y, w3.y], [re.z, im.z, w3.z]]);
            spiral.push(spiral_turns(c, t, &basis, radius.min(1.0)));
        }
    }

    let all_two = node_degrees.iter().all(|d| *d == 2);
    let mut winding = None;
    let topology = if !spiral.is_empty() && spiral.iter().all(|t| *t >= 1.5) {
        Topology::SaddleFocusSpiral
    } else if !all_two {
        Topology::Indeterminate
    } else if components >= 2 {
        Topology::DisjointLoops(components)
    } else {
        let w = loop_winding(saddle, stable, &edges);
        winding = Some(w);
        match w.round() as i64 {
            1 => Topology::SingleLoop,
            2 => Topology::LengthDoubled,
            _ => Topology::Indeterminate,
        }
    };

    let mut hist: Vec<(usize, usize)> = Vec::new();
    for d in &node_degrees {
        match hist.iter_mut().find(|(k, _)| k == d) {
            Some(h) => h.1 += 1,
            None => hist.push((*d, 1)),
        }
    }
    hist.sort_unstable();
    let hist: Vec<String> = hist.iter().map(|(d, c)| format!("{c}x{d}")).collect();
    let spread = curves.iter().map(|c| c.domain_spread).fold(0.0, f64::max);
    let structure = format!(
        "saddle period {ns}, stable period {nn}, {components} component(s), stable-point degrees {}, final-domain spread {spread:.2e}",
        hist.join(",")
    );
    Ok(ConnectionReport {
        topology,
        saddle_period: ns,
        stable_period: nn,
        edges,
        node_degrees,
        components,
        winding,
        arclengths,
        spiral_turns: spiral,
        structure,
    })
}

/// Winding of the closed graph cycle (stable point, saddle point, stable
/// point, ...) around the centroid of the stable points, measured on the
/// polygon through the graph vertices in their best-fit plane.
fn loop_winding(saddle: &Cycle, stable: &Cycle, edges: &[Edge]) -> f64 {
    let (c, e1, e2) = principal_plane(&stable.points);
    let mut used = vec![false; edges.len()];
    let mut path: Vec<State3> = Vec::new();
    let Some(first) = edges.first() else { return 0.0 };
    let mut node = first.target;
    let mut edge = 0usize;
    path.push(stable.points[node]);
    loop {
        used[edge] = true;
        let i = edges[edge].branch.point;
        path.push(saddle.points[i]);
        let Some(twin) = (0..edges.len()).find(|&k| !used[k] && edges[k].branch.point == i) else { break };
        used[twin] = true;
        node = edges[twin].target;
        path.push(stable.points[node]);
        match (0..edges.len()).find(|&k| !used[k] && edges[k].target == node) {
            Some(k) => edge = k,
            None => break,
        }
    }
    swept_angle(&path, c, e1, e2).abs() / (2.0 * std::f64::consts::PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoublingType {
    DisjointLoops,
    MobiusLengthDoubled,
    Indeterminate,
}

impl fmt::Display for DoublingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DoublingType::DisjointLoops => "disjoint-loops",
            DoublingType::MobiusLengthDoubled => "mobius-length-doubled",
            DoublingType::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoublingPrediction {
    pub kind: DoublingType,
    pub node_third: Option<f64>,
    pub saddle_third: Option<f64>,
}

/// Torus-doubling type from the sign of the third multiplier of the node
/// and the saddle before the flip.
pub fn predict_doubling_type(node: &EigenTriple, saddle: &EigenTriple) -> DoublingPrediction {
    let node_third = node.roles().map(|r| r.third);
    let saddle_third = saddle.roles().map(|r| r.third);
    let kind = match (node_third, saddle_third) {
        (Some(a), Some(b)) if a > 0.0 && b > 0.0 => DoublingType::DisjointLoops,
        (Some(a), Some(b)) if a < 0.0 && b < 0.0 => DoublingType::MobiusLengthDoubled,
        _ => DoublingType::Indeterminate,
    };
    DoublingPrediction { kind, node_third, saddle_third }
}
