//! Periodic orbits: Newton on the n-th iterate, multipliers and
//! stability classification.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, real_eigenvector, sort_eigenvalues, CharPoly, Matrix3, State3};
use crate::maps::{BoundMap, ParamSet, Symbol};

/// Newton solver settings.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Condition estimate of `DF^n - I` above which the solve is refused.
    pub max_condition: f64,
    /// Minimal pairwise distance between cycle points.
    pub separation: f64,
    /// Reject any single Newton step longer than this (inf-norm).
    pub max_step: Option<f64>,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 50, max_condition: 1e14, separation: 1e-8, max_step: None }
    }
}

/// A converged periodic orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct Cycle {
    pub map_id: String,
    pub params: ParamSet,
    pub period: usize,
    /// Points ordered by iteration, `points[i+1] = F(points[i])`.
    pub points: Vec<State3>,
    /// Branch symbols for piecewise maps, empty otherwise.
    pub symbols: Vec<Symbol>,
    pub residual: f64,
}

impl Cycle {
    pub fn symbol_string(&self) -> String {
        self.symbols.iter().map(|s| s.as_char()).collect()
    }

    /// Composed Jacobian `J(p_{i+n-1}) ... J(p_i)` starting at point `i`.
    pub fn monodromy(&self, map: &BoundMap, start: usize) -> Matrix3 {
        let n = self.points.len();
        let mut m = Matrix3::IDENTITY;
        for k in 0..n {
            m = map.jacobian(self.points[(start + k) % n]) * m;
        }
        m
    }

    /// Cycle with points rotated so that `points[0]` is the old `points[k]`.
    pub fn rotated(&self, k: usize) -> Cycle {
        let n = self.points.len();
        let mut c = self.clone();
        c.points = (0..n).map(|i| self.points[(i + k) % n]).collect();
        if !self.symbols.is_empty() {
            c.symbols = (0..n).map(|i| self.symbols[(i + k) % n]).collect();
        }
        c
    }

    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                best = best.min(self.points[i].dist_inf(self.points[j]));
            }
        }
        best
    }
}

/// Multipliers of a cycle, sorted by descending modulus (ties: descending
/// real part), conjugate pairs adjacent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenTriple {
    pub values: [Complex64; 3],
}

/// Role view of a real triple: the flip eigenvalue is the most negative,
/// the leading one the largest of the other two, the third the remainder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Roles {
    pub leading: f64,
    pub flip: f64,
    pub third: f64,
}

impl Roles {
    pub fn as_array(&self) -> [f64; 3] {
        [self.leading, self.flip, self.third]
    }
}

const IMAG_TOL: f64 = 1e-12;

impl EigenTriple {
    pub fn new(mut values: [Complex64; 3]) -> Self {
        sort_eigenvalues(&mut values);
        Self { values }
    }

    pub fn of_matrix(m: &Matrix3) -> Self {
        Self { values: eigenvalues(m) }
    }

    pub fn from_real(v: [f64; 3]) -> Self {
        Self::new(v.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn is_real(z: Complex64) -> bool {
        z.im.abs() <= IMAG_TOL * z.norm().max(1.0)
    }

    pub fn has_complex_pair(&self) -> bool {
        self.values.iter().any(|z| !Self::is_real(*z))
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn product(&self) -> Complex64 {
        self.values[0] * self.values[1] * self.values[2]
    }

    pub fn unstable_count(&self) -> usize {
        self.values.iter().filter(|z| z.norm() > 1.0).count()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Real eigenvalues, or `None` if a complex pair is present.
    pub fn real_values(&self) -> Option<[f64; 3]> {
        if self.has_complex_pair() {
            None
        } else {
            Some(self.values.map(|z| z.re))
        }
    }

    pub fn roles(&self) -> Option<Roles> {
        let mut v = self.real_values()?;
        v.sort_by(f64::total_cmp);
        Some(Roles { flip: v[0], leading: v[2], third: v[1] })
    }

    /// The complex eigenvalue with positive imaginary part, if any.
    pub fn complex_pair(&self) -> Option<Complex64> {
        self.values.iter().copied().find(|z| !Self::is_real(*z) && z.im > 0.0)
    }
}

impl fmt::Display for EigenTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|z| if Self::is_real(*z) { format!("{:.6}", z.re) } else { format!("{:.6}{:+.6}i", z.re, z.im) })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleTag {
    StableNode,
    StableFocus,
    Saddle,
    FlipSaddle,
    SaddleFocus,
    Repeller,
}

impl CycleTag {
    pub fn name(self) -> &'static str {
        match self {
            CycleTag::StableNode => "stable-node",
            CycleTag::StableFocus => "stable-focus",
            CycleTag::Saddle => "saddle",
            CycleTag::FlipSaddle => "flip-saddle",
            CycleTag::SaddleFocus => "saddle-focus",
            CycleTag::Repeller => "repeller",
        }
    }

    pub fn is_stable(self) -> bool {
        matches!(self, CycleTag::StableNode | CycleTag::StableFocus)
    }
}

impl fmt::Display for CycleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleClass {
    pub tag: CycleTag,
    pub unstable_count: usize,
    pub complex_pair: bool,
    /// Some multiplier lies within 1e-9 of the unit circle.
    pub near_bifurcation: bool,
}

/// Stability class from the multipliers.
pub fn classify_cycle(e: &EigenTriple) -> CycleClass {
    let unstable_count = e.unstable_count();
    let complex_pair = e.has_complex_pair();
    let near_bifurcation = e.values.iter().any(|z| (z.norm() - 1.0).abs() < 1e-9);
    let flip_unstable = e.values.iter().any(|z| EigenTriple::is_real(*z) && z.re < -1.0);
    let tag = match unstable_count {
        0 if complex_pair => CycleTag::StableFocus,
        0 => CycleTag::StableNode,
        3 => CycleTag::Repeller,
        _ if complex_pair => CycleTag::SaddleFocus,
        _ if flip_unstable => CycleTag::FlipSaddle,
        _ => CycleTag::Saddle,
    };
    CycleClass { tag, unstable_count, complex_pair, near_bifurcation }
}

/// Multipliers of `cycle`, from the product started at its first point.
pub fn cycle_multipliers(map: &BoundMap, cycle: &Cycle) -> Result<EigenTriple> {
    let m = cycle.monodromy(map, 0);
    if !m.is_finite() {
        return Err(Error::Overflow { state: cycle.points[0] });
    }
    Ok(EigenTriple::of_matrix(&m))
}

struct Pass {
    points: Vec<State3>,
    image: State3,
    jac: Matrix3,
}

fn orbit_pass(map: &BoundMap, x: State3, n: usize) -> Result<Pass> {
    let mut points = Vec::with_capacity(n);
    let mut jac = Matrix3::IDENTITY;
    let mut s = x;
    for _ in 0..n {
        points.push(s);
        jac = map.jacobian(s) * jac;
        s = map.step(s)?;
    }
    if !jac.is_finite() {
        return Err(Error::Overflow { state: x });
    }
    Ok(Pass { points, image: s, jac })
}

fn symbols_of(map: &BoundMap, pts: &[State3]) -> Vec<Symbol> {
    if map.is_piecewise() {
        pts.iter().map(|p| Symbol::of(*p)).collect()
    } else {
        Vec::new()
    }
}

fn symbol_string(s: &[Symbol]) -> String {
    s.iter().map(|c| c.as_char()).collect()
}

/// Newton-Raphson for a period-`period` orbit of a bound map.
///
/// Each step solves `(DF^n - I) d = -(F^n(x) - x)`. A solution whose
/// points collapse onto a divisor-period orbit is re-solved and returned
/// with that period.
pub fn solve_cycle(map: &BoundMap, guess: State3, period: usize, opts: &NewtonOptions) -> Result<Cycle> {
    if period == 0 {
        return Err(Error::Precondition("period must be positive".into()));
    }
    if !guess.is_finite() {
        return Err(Error::Overflow { state: guess });
    }
    let mut x = guess;
    let mut start_symbols: Option<Vec<Symbol>> = None;
    let mut residual = f64::INFINITY;
    for it in 0..=opts.max_iter {
        let pass = orbit_pass(map, x, period)?;
        let syms = symbols_of(map, &pass.points);
        match &start_symbols {
            None => start_symbols = Some(syms.clone()),
            Some(s0) if *s0 != syms => {
                return Err(Error::SymbolFlip { from: symbol_string(s0), to: symbol_string(&syms) });
            }
            _ => {}
        }
        let r = pass.image - x;
        residual = r.norm_inf();
        if residual <= opts.tol {
            return finish(map, pass.points, syms, residual, opts);
        }
        let a = pass.jac.sub_identity(1.0);
        let cond = a.condition_1();
        if !(cond <= opts.max_condition) {
            return Err(Error::NearBifurcation { condition: cond });
        }
        let d = a.solve(-r).ok_or(Error::NearBifurcation { condition: f64::INFINITY })?;
        if let Some(cap) = opts.max_step {
            if d.norm_inf() > cap {
                return Err(Error::Divergence { iterations: it, residual });
            }
        }
        x = x + d;
        if !x.is_finite() || x.norm_inf() > 1e6 {
            return Err(Error::Divergence { iterations: it, residual });
        }
    }
    Err(Error::Divergence { iterations: opts.max_iter, residual })
}

fn finish(map: &BoundMap, points: Vec<State3>, symbols: Vec<Symbol>, residual: f64, opts: &NewtonOptions) -> Result<Cycle> {
    let n = points.len();
    for d in 1..n {
        if n % d == 0 && points[d].dist_inf(points[0]) < opts.separation {
            return solve_cycle(map, points[0], d, opts);
        }
    }
    Ok(Cycle { map_id: map.id().to_string(), params: map.params().clone(), period: n, points, symbols, residual })
}

/// [`solve_cycle`] on a map given by definition and parameters.
pub fn find_cycle(
    map: &crate::maps::MapDef,
    params: &ParamSet,
    guess: State3,
    period: usize,
    opts: &NewtonOptions,
) -> Result<Cycle> {
    solve_cycle(&map.bind(params)?, guess, period, opts)
}

/// Recurrence detection on a transient-free orbit: the minimal `n` with
/// `|s_{k+n} - s_k| < cluster_tol` for every `k`, with `s_0` as seed.
pub fn seed_cycles_from_orbit(orbit: &[State3], max_period: usize, cluster_tol: f64) -> Vec<(usize, State3)> {
    for n in 1..=max_period {
        if orbit.len() <= n {
            break;
        }
        if (0..orbit.len() - n).all(|k| orbit[k + n].dist_inf(orbit[k]) < cluster_tol) {
            return vec![(n, orbit[0])];
        }
    }
    Vec::new()
}

/// Searches for a saddle cycle of the given period on guesses placed
/// between pairs of points of a stable cycle, nearest pairs first. Accepts
/// cycles with exactly one unstable, real multiplier whose points stay
/// within the stable cycle's bounding box (grown by its diameter).
pub fn find_saddle_between(map: &BoundMap, stable: &Cycle, period: usize, opts: &NewtonOptions) -> Result<Cycle> {
    let pts = &stable.points;
    let mut pairs = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            pairs.push((pts[i].dist(pts[j]), i, j));
        }
    }
    if pts.len() == 1 {
        pairs.push((0.0, 0, 0));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = State3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = State3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    let pad = (hi - lo).norm_inf().max(1e-3);
    let inside = |p: &State3| {
        (0..3).all(|k| p[k] >= lo[k] - pad && p[k] <= hi[k] + pad)
    };

    let mut last_err = Error::Precondition("no saddle found".into());
    for (_, i, j) in pairs {
        for t in [0.5, 0.3, 0.7, 0.1, 0.9, 0.2, 0.8, 0.4, 0.6] {
            let guess = if i == j { pts[i] + State3::splat(0.05 * (t - 0.5)) } else { pts[i].lerp(pts[j], t) };
            let c = match solve_cycle(map, guess, period, opts) {
                Ok(c) => c,
                Err(e) => {
                    last_err = e;
                    continue;
                }
            };
            if c.period != period || !c.points.iter().all(inside) {
                continue;
            }
            if c.points.iter().any(|p| pts.iter().any(|q| p.dist_inf(*q) < 1e-6)) {
                continue;
            }
            let e = cycle_multipliers(map, &c)?;
            if e.unstable_count() == 1 && EigenTriple::is_real(e.values[0]) {
                return Ok(c);
            }
        }
    }
    Err(last_err)
}

/// Seeds for the period-doubled cycle: `p_0 ± δ v` with `v` the
/// eigenvector of the most negative real multiplier.
pub fn doubling_seeds(map: &BoundMap, cycle: &Cycle, delta: f64) -> Result<[State3; 2]> {
    let m = cycle.monodromy(map, 0);
    let e = EigenTriple::of_matrix(&m);
    let flip = e
        .values
        .iter()
        .filter(|z| EigenTriple::is_real(**z))
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    if !flip.is_finite() || flip >= 0.0 {
        return Err(Error::Precondition("cycle has no negative real multiplier".into()));
    }
    let v = real_eigenvector(&m, flip);
    Ok([cycle.points[0] + v * delta, cycle.points[0] - v * delta])
}

/// Attempts to find the doubled cycle near a flipped one, trying a few
/// offsets along the flip eigenvector.
pub fn find_doubled_cycle(map: &BoundMap, cycle: &Cycle, opts: &NewtonOptions) -> Result<Cycle> {
    let mut last = Error::Precondition("no doubled cycle found".into());
    for delta in [1e-4, 1e-3, 1e-2, 3e-2, 1e-1] {
        for seed in doubling_seeds(map, cycle, delta)? {
            match solve_cycle(map, seed, 2 * cycle.period, opts) {
                Ok(c) if c.period == 2 * cycle.period => return Ok(c),
                Ok(_) => {}
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}

/// Determinant of the composed Jacobian via the characteristic polynomial.
pub fn monodromy_determinant(m: &Matrix3) -> f64 {
    -CharPoly::of(m).c
}
