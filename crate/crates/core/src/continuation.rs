//! Natural-parameter continuation of cycles and detection of flip, fold,
//! Neimark-Sacker and real/complex collision events along a branch.

use std::fmt;

use num_complex::Complex64;

use crate::cycles::{classify_cycle, cycle_multipliers, solve_cycle, Cycle, EigenTriple, NewtonOptions};
use crate::error::{Error, Result};
use crate::linalg::CharPoly;
use crate::maps::BoundMap;

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationOptions {
    pub newton: NewtonOptions,
    /// Upper bound on the point-wise jump between consecutive records.
    pub max_jump: f64,
    /// Steps are halved down to `step0 / min_step_divisor`.
    pub min_step_divisor: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self {
            newton: NewtonOptions { max_step: Some(0.05), ..NewtonOptions::default() },
            max_jump: 0.1,
            min_step_divisor: 1024.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    RangeEnd,
    NewtonFailure,
    PeriodCollapse,
    SymbolFlip,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::RangeEnd => "range-end",
            Termination::NewtonFailure => "newton-failure",
            Termination::PeriodCollapse => "period-collapse",
            Termination::SymbolFlip => "symbol-flip",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchRecord {
    pub param: f64,
    pub cycle: Cycle,
    /// Multipliers in canonical (modulus) order.
    pub eigs: EigenTriple,
    /// Multipliers in continuity-matched slots along the branch.
    pub tracked: [Complex64; 3],
    /// Pairing fell back to modulus order between this record and the previous one.
    pub collision: bool,
}

#[derive(Clone, Debug)]
pub struct ContinuationBranch {
    pub map: BoundMap,
    pub param_name: String,
    /// Label attached to events (e.g. "stable" or "saddle").
    pub label: String,
    pub records: Vec<BranchRecord>,
    pub step_history: Vec<f64>,
    pub termination: Termination,
    /// Parameter of the last failed attempt, when the branch ended early.
    pub failed_at: Option<f64>,
    pub options: ContinuationOptions,
}

impl ContinuationBranch {
    pub fn map_id(&self) -> &str {
        self.map.id()
    }

    pub fn period(&self) -> usize {
        self.records.first().map_or(0, |r| r.cycle.period)
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }
}

/// Permutation of `next` (as indices into `next.values`) assigned to the
/// slots of `prev`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub order: [usize; 3],
    /// The number of complex pairs differs, so modulus order was used.
    pub collision: bool,
}

impl Pairing {
    pub fn apply(&self, next: &[Complex64; 3]) -> [Complex64; 3] {
        self.order.map(|i| next[i])
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn complex_count(v: &[Complex64; 3]) -> usize {
    v.iter().filter(|z| !EigenTriple::is_real(**z)).count()
}

/// Matches `next` to the slots of `prev`, minimising the summed distance in
/// the complex plane while keeping conjugate pairs in adjacent slots.
pub fn pair_eigenvalues(prev: &[Complex64; 3], next: &[Complex64; 3]) -> Pairing {
    if complex_count(prev) != complex_count(next) {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| next[b].norm().total_cmp(&next[a].norm()).then(next[b].re.total_cmp(&next[a].re)));
        return Pairing { order, collision: true };
    }
    let adjacent_pairs = |v: [Complex64; 3]| {
        let c: Vec<usize> = (0..3).filter(|&k| !EigenTriple::is_real(v[k])).collect();
        c.len() != 2 || c[1] - c[0] == 1
    };
    let mut best = ([0, 1, 2], f64::INFINITY);
    for perm in PERMUTATIONS {
        let cand = perm.map(|i| next[i]);
        if !adjacent_pairs(cand) {
            continue;
        }
        let cost: f64 = (0..3).map(|k| (prev[k] - cand[k]).norm()).sum();
        if cost < best.1 {
            best = (perm, cost);
        }
    }
    Pairing { order: best.0, collision: false }
}

fn max_point_jump(a: &Cycle, b: &Cycle) -> f64 {
    a.points.iter().zip(&b.points).map(|(p, q)| p.dist_inf(*q)).fold(0.0, f64::max)
}

/// Natural-parameter continuation from `from` to `to` with the previous
/// cycle as predictor. Failed steps are halved down to
/// `step0 / 1024`; successful ones grow back towards `step0`.
pub fn continue_cycle(
    map: &BoundMap,
    start: &Cycle,
    param: &str,
    from: f64,
    to: f64,
    step0: f64,
    opts: &ContinuationOptions,
) -> Result<ContinuationBranch> {
    if !(step0 > 0.0) {
        return Err(Error::Precondition("step0 must be positive".into()));
    }
    let base = map.with_param(param, from)?;
    let first = solve_cycle(&base, start.points[0], start.period, &opts.newton)
        .map_err(|e| Error::StartInvalid(format!("start cycle does not converge at {param}={from}: {e}")))?;
    if first.period != start.period {
        return Err(Error::StartInvalid(format!("start cycle collapses to period {}", first.period)));
    }
    let eigs = cycle_multipliers(&base, &first)?;
    let label = if classify_cycle(&eigs).tag.is_stable() { "stable" } else { "saddle" };
    let mut records =
        vec![BranchRecord { param: from, cycle: first, eigs, tracked: eigs.values, collision: false }];
    let mut step_history = Vec::new();
    let dir = if to >= from { 1.0 } else { -1.0 };
    let h_min = step0 / opts.min_step_divisor;
    let mut h = step0;
    let mut p = from;
    let mut rate: Option<f64> = None;
    let mut termination = Termination::RangeEnd;
    let mut failed_at = None;

    while (to - p) * dir > 1e-12 * step0 {
        let h_eff = h.min((to - p).abs());
        let pn = if h_eff == (to - p).abs() { to } else { p + dir * h_eff };
        let prev = records.last().expect("branch has a record");
        let attempt = map.with_param(param, pn).and_then(|m| {
            let c = solve_cycle(&m, prev.cycle.points[0], prev.cycle.period, &opts.newton)?;
            Ok((m, c))
        });
        let failure = match attempt {
            Ok((m, c)) if c.period == prev.cycle.period => {
                let jump = max_point_jump(&prev.cycle, &c);
                let allowed = match rate {
                    Some(r) => opts.max_jump.min(10.0 * h_eff * r + 1e-9),
                    None => opts.max_jump,
                };
                if jump <= allowed {
                    let eigs = cycle_multipliers(&m, &c)?;
                    let pairing = pair_eigenvalues(&prev.tracked, &eigs.values);
                    let tracked = pairing.apply(&eigs.values);
                    rate = Some(jump / h_eff);
                    records.push(BranchRecord { param: pn, cycle: c, eigs, tracked, collision: pairing.collision });
                    step_history.push(h_eff);
                    p = pn;
                    h = (2.0 * h).min(step0);
                    continue;
                }
                Termination::NewtonFailure
            }
            Ok(_) => Termination::PeriodCollapse,
            Err(Error::SymbolFlip { .. }) => Termination::SymbolFlip,
            Err(_) => Termination::NewtonFailure,
        };
        h /= 2.0;
        if h < h_min {
            termination = failure;
            failed_at = Some(pn);
            break;
        }
    }
    if records.len() < 2 && termination != Termination::RangeEnd {
        return Err(Error::StartInvalid(format!(
            "no step possible from {param}={from} ({})",
            termination.name()
        )));
    }
    Ok(ContinuationBranch {
        map: base,
        param_name: param.to_string(),
        label: label.to_string(),
        records,
        step_history,
        termination,
        failed_at,
        options: opts.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    Flip,
    Fold,
    NeimarkSacker,
    EigenvaluesTurnComplex,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Flip => "flip",
            EventKind::Fold => "fold",
            EventKind::NeimarkSacker => "neimark-sacker",
            EventKind::EigenvaluesTurnComplex => "eigenvalues-turn-complex",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BifurcationEvent {
    pub kind: EventKind,
    pub param: f64,
    pub cycle_label: String,
    pub period: usize,
    pub critical: Complex64,
    /// Bracketing interval after localization.
    pub interval: (f64, f64),
    pub tolerance: f64,
    /// Bisection could not reach the tolerance.
    pub degraded: bool,
    /// Non-degeneracy: for Neimark-Sacker the third multiplier is more than
    /// 1e-3 away from the unit circle; for flips the critical value is real.
    pub nondegenerate: bool,
}

impl BifurcationEvent {
    pub fn width(&self) -> f64 {
        (self.interval.1 - self.interval.0).abs()
    }
}

struct Probe {
    param: f64,
    cycle: Cycle,
    tracked: [Complex64; 3],
    disc: f64,
}

type TestFn<'a> = &'a dyn Fn(&[Complex64; 3], f64) -> Option<f64>;

fn discriminant(map: &BoundMap, c: &Cycle) -> f64 {
    CharPoly::of(&c.monodromy(map, 0)).discriminant()
}

fn probe_of(branch: &ContinuationBranch, r: &BranchRecord) -> Result<Probe> {
    let m = branch.map.with_param(&branch.param_name, r.param)?;
    Ok(Probe { param: r.param, cycle: r.cycle.clone(), tracked: r.tracked, disc: discriminant(&m, &r.cycle) })
}

fn solve_probe(branch: &ContinuationBranch, from: &Probe, param: f64) -> Result<Probe> {
    let m = branch.map.with_param(&branch.param_name, param)?;
    let c = solve_cycle(&m, from.cycle.points[0], from.cycle.period, &branch.options.newton)?;
    if c.period != from.cycle.period {
        return Err(Error::Precondition("period collapse during bisection".into()));
    }
    let e = cycle_multipliers(&m, &c)?;
    let tracked = pair_eigenvalues(&from.tracked, &e.values).apply(&e.values);
    let disc = discriminant(&m, &c);
    Ok(Probe { param, cycle: c, tracked, disc })
}

/// Bisection with fresh Newton solves on a sign change of `g`.
fn bisect(branch: &ContinuationBranch, lo: Probe, hi: Probe, g: TestFn<'_>, loc_tol: f64) -> (Probe, Probe, bool) {
    let (mut lo, mut hi) = (lo, hi);
    let Some(g_lo) = g(&lo.tracked, lo.disc) else { return (lo, hi, true) };
    while (hi.param - lo.param).abs() > loc_tol {
        let mid = 0.5 * (lo.param + hi.param);
        let Ok(pm) = solve_probe(branch, &lo, mid) else { return (lo, hi, true) };
        match g(&pm.tracked, pm.disc) {
            Some(v) if v.signum() == g_lo.signum() => lo = pm,
            Some(_) => hi = pm,
            None => return (lo, hi, true),
        }
    }
    (lo, hi, false)
}

fn is_real(z: Complex64) -> bool {
    EigenTriple::is_real(z)
}

/// Scans the branch for sign changes of the flip, fold and
/// Neimark-Sacker test functions on the matched multiplier paths and of
/// the characteristic-polynomial discriminant, localizing each by
/// bisection to `loc_tol`. A fold that ends the branch (Newton failure
/// with a multiplier close to +1) is localized by bisection on existence.
pub fn detect_bifurcations(branch: &ContinuationBranch, loc_tol: f64) -> Result<Vec<BifurcationEvent>> {
    if branch.records.len() < 2 {
        return Err(Error::Precondition("branch needs at least two records".into()));
    }
    let mut events = Vec::new();
    for w in branch.records.windows(2) {
        let (r0, r1) = (&w[0], &w[1]);
        let mut tests: Vec<(EventKind, usize)> = Vec::new();
        if !r1.collision {
            for k in 0..3 {
                let (a, b) = (r0.tracked[k], r1.tracked[k]);
                if is_real(a) && is_real(b) {
                    if (a.re + 1.0).signum() != (b.re + 1.0).signum() {
                        tests.push((EventKind::Flip, k));
                    }
                    if (a.re - 1.0).signum() != (b.re - 1.0).signum() {
                        tests.push((EventKind::Fold, k));
                    }
                } else if !is_real(a) && !is_real(b) && a.im > 0.0 && (a.norm() - 1.0).signum() != (b.norm() - 1.0).signum() {
                    tests.push((EventKind::NeimarkSacker, k));
                }
            }
        }
        let p0 = probe_of(branch, r0)?;
        let p1 = probe_of(branch, r1)?;
        if p0.disc.signum() != p1.disc.signum() {
            tests.push((EventKind::EigenvaluesTurnComplex, 0));
        }
        for (kind, slot) in tests {
            let lo = probe_of(branch, r0)?;
            let hi = probe_of(branch, r1)?;
            let g = move |v: &[Complex64; 3], disc: f64| -> Option<f64> {
                let z = v[slot];
                match kind {
                    EventKind::Flip => is_real(z).then_some(z.re + 1.0),
                    EventKind::Fold => is_real(z).then_some(z.re - 1.0),
                    EventKind::NeimarkSacker => (!is_real(z)).then_some(z.norm() - 1.0),
                    EventKind::EigenvaluesTurnComplex => Some(disc),
                }
            };
            let (lo, hi, degraded) = bisect(branch, lo, hi, &g, loc_tol);
            let critical = match kind {
                EventKind::EigenvaluesTurnComplex => {
                    // the colliding pair: the two closest multipliers
                    let v = lo.tracked;
                    let pairs = [(0, 1), (0, 2), (1, 2)];
                    let (i, j) = pairs
                        .into_iter()
                        .min_by(|a, b| (v[a.0] - v[a.1]).norm().total_cmp(&(v[b.0] - v[b.1]).norm()))
                        .unwrap_or((0, 1));
                    (v[i] + v[j]) * 0.5
                }
                _ => lo.tracked[slot],
            };
            let nondegenerate = match kind {
                EventKind::NeimarkSacker => (0..3)
                    .filter(|&k| k != slot && lo.tracked[k] != critical.conj())
                    .all(|k| (lo.tracked[k].norm() - 1.0).abs() > 1e-3),
                EventKind::Flip | EventKind::Fold => critical.im.abs() < 1e-9,
                EventKind::EigenvaluesTurnComplex => true,
            };
            events.push(BifurcationEvent {
                kind,
                param: 0.5 * (lo.param + hi.param),
                cycle_label: branch.label.clone(),
                period: branch.period(),
                critical,
                interval: (lo.param.min(hi.param), lo.param.max(hi.param)),
                tolerance: loc_tol,
                degraded,
                nondegenerate,
            });
        }
    }
    if let Some(ev) = terminal_fold(branch, loc_tol)? {
        events.push(ev);
    }
    events.sort_by(|a, b| {
        let dir = if branch.records[1].param >= branch.records[0].param { 1.0 } else { -1.0 };
        (dir * a.param).total_cmp(&(dir * b.param))
    });
    Ok(events)
}

/// A branch ending in Newton failure next to a multiplier +1 is a fold;
/// locate the existence boundary by bisection.
fn terminal_fold(branch: &ContinuationBranch, loc_tol: f64) -> Result<Option<BifurcationEvent>> {
    let (Termination::NewtonFailure, Some(failed)) = (branch.termination, branch.failed_at) else {
        return Ok(None);
    };
    let last = branch.records.last().expect("non-empty branch");
    let near_one = last
        .tracked
        .iter()
        .copied()
        .filter(|z| is_real(*z))
        .min_by(|a, b| (a.re - 1.0).abs().total_cmp(&(b.re - 1.0).abs()));
    let Some(crit) = near_one else { return Ok(None) };
    if (crit.re - 1.0).abs() > 0.05 {
        return Ok(None);
    }
    let mut lo = probe_of(branch, last)?;
    let mut hi = failed;
    let mut degraded = false;
    let mut iterations = 0;
    while (hi - lo.param).abs() > loc_tol {
        let mid = 0.5 * (lo.param + hi);
        match solve_probe(branch, &lo, mid) {
            Ok(p) if max_point_jump(&lo.cycle, &p.cycle) <= branch.options.max_jump => lo = p,
            _ => hi = mid,
        }
        iterations += 1;
        if iterations > 200 {
            degraded = true;
            break;
        }
    }
    let critical = lo
        .tracked
        .iter()
        .copied()
        .filter(|z| is_real(*z))
        .min_by(|a, b| (a.re - 1.0).abs().total_cmp(&(b.re - 1.0).abs()))
        .unwrap_or(crit);
    Ok(Some(BifurcationEvent {
        kind: EventKind::Fold,
        param: 0.5 * (lo.param + hi),
        cycle_label: branch.label.clone(),
        period: branch.period(),
        critical,
        interval: (lo.param.min(hi), lo.param.max(hi)),
        tolerance: loc_tol,
        degraded,
        nondegenerate: true,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pairing_nearest_neighbour() {
        let prev = [c(0.9, 0.0), c(-0.7, 0.0), c(0.1, 0.0)];
        let next = [c(-0.71, 0.0), c(0.88, 0.0), c(0.12, 0.0)];
        let p = pair_eigenvalues(&prev, &next);
        assert_eq!(p.order, [1, 0, 2]);
        assert!(!p.collision);
        assert_eq!(p.apply(&next), [c(0.88, 0.0), c(-0.71, 0.0), c(0.12, 0.0)]);
    }

    #[test]
    fn pairing_keeps_conjugates_adjacent() {
        let prev = [c(0.5, 0.6), c(0.5, -0.6), c(0.3, 0.0)];
        let next = [c(0.31, 0.0), c(0.48, -0.62), c(0.48, 0.62)];
        let p = pair_eigenvalues(&prev, &next);
        assert_eq!(p.apply(&next), [c(0.48, 0.62), c(0.48, -0.62), c(0.31, 0.0)]);
    }

    #[test]
    fn pairing_falls_back_on_collision() {
        let prev = [c(0.5, 0.0), c(0.45, 0.0), c(0.1, 0.0)];
        let next = [c(0.1, 0.0), c(0.47, 0.01), c(0.47, -0.01)];
        let p = pair_eigenvalues(&prev, &next);
        assert!(p.collision);
        let v = p.apply(&next);
        assert!(v[0].norm() >= v[1].norm() && v[1].norm() >= v[2].norm());
    }
}
