//! CSV and key-value text formats.
//!
//! Floats are written with Rust's shortest round-trip representation, so
//! identical values always produce identical bytes.
//!
//! | file | header |
//! |------|--------|
//! | cycle | `map,params,period,symbols,residual,l1_re,l1_im,l2_re,l2_im,l3_re,l3_im,x0,y0,z0,...` |
//! | branch | `param,period,residual,l1_re,l1_im,l2_re,l2_im,l3_re,l3_im,x0,y0,z0,...` |
//! | events | `kind,param,cycle,period,crit_re,crit_im,lo,hi,degraded,nondegenerate` |
//! | manifold | `saddle_point,direction,index,s,x,y,z` |
//! | scan | `param,index,x,y,z` |
//! | orbit | `index,x,y,z` |
//!
//! `params` is `name=value` pairs joined by `;`. Branch eigenvalues are
//! written in continuity-matched slots.

use std::fmt::Write as _;

use crate::continuation::{BifurcationEvent, ContinuationBranch};
use crate::cycles::{Cycle, EigenTriple};
use crate::dynamics::{OrbitSample, ScanDataset};
use crate::linalg::State3;
use crate::manifold::ManifoldCurve;
use crate::maps::MapDef;

fn eig_cols(out: &mut String, v: &[num_complex::Complex64; 3]) {
    for z in v {
        let _ = write!(out, ",{},{}", z.re, z.im);
    }
}

fn point_cols(out: &mut String, pts: &[State3]) {
    for p in pts {
        let _ = write!(out, ",{},{},{}", p.x, p.y, p.z);
    }
}

fn point_header(out: &mut String, n: usize) {
    for i in 0..n {
        let _ = write!(out, ",x{i},y{i},z{i}");
    }
}

pub fn cycles_csv(rows: &[(Cycle, EigenTriple)]) -> String {
    let n = rows.iter().map(|r| r.0.points.len()).max().unwrap_or(0);
    let mut s = String::from("map,params,period,symbols,residual,l1_re,l1_im,l2_re,l2_im,l3_re,l3_im");
    point_header(&mut s, n);
    s.push('\n');
    for (c, e) in rows {
        let _ = write!(s, "{},{},{},{},{}", c.map_id, c.params, c.period, c.symbol_string(), c.residual);
        eig_cols(&mut s, &e.values);
        point_cols(&mut s, &c.points);
        s.push('\n');
    }
    s
}

pub fn branch_csv(b: &ContinuationBranch) -> String {
    let n = b.records.iter().map(|r| r.cycle.points.len()).max().unwrap_or(0);
    let mut s = String::from("param,period,residual,l1_re,l1_im,l2_re,l2_im,l3_re,l3_im");
    point_header(&mut s, n);
    s.push('\n');
    for r in &b.records {
        let _ = write!(s, "{},{},{}", r.param, r.cycle.period, r.cycle.residual);
        eig_cols(&mut s, &r.tracked);
        point_cols(&mut s, &r.cycle.points);
        s.push('\n');
    }
    s
}

pub fn events_csv(events: &[BifurcationEvent]) -> String {
    let mut s = String::from("kind,param,cycle,period,crit_re,crit_im,lo,hi,degraded,nondegenerate\n");
    for e in events {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            e.kind, e.param, e.cycle_label, e.period, e.critical.re, e.critical.im, e.interval.0, e.interval.1,
            e.degraded, e.nondegenerate
        );
    }
    s
}

pub fn manifold_csv(curves: &[ManifoldCurve]) -> String {
    let mut s = String::from("saddle_point,direction,index,s,x,y,z\n");
    for c in curves {
        for (k, (p, t)) in c.points.iter().zip(&c.params).enumerate() {
            let _ = writeln!(s, "{},{},{},{},{},{},{}", c.branch.point, c.branch.direction.symbol(), k, t, p.x, p.y, p.z);
        }
    }
    s
}

pub fn scan_csv(d: &ScanDataset) -> String {
    let mut s = String::from("param,index,x,y,z\n");
    for r in &d.rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.param, r.index, r.state.x, r.state.y, r.state.z);
    }
    s
}

pub fn orbit_csv(o: &OrbitSample) -> String {
    points_csv(&o.points)
}

pub fn points_csv(pts: &[State3]) -> String {
    let mut s = String::from("index,x,y,z\n");
    for (k, p) in pts.iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{}", k, p.x, p.y, p.z);
    }
    s
}

/// Map schema as `key = value` lines: one `param.<name> = <default>`
/// line per parameter with its description as a trailing comment.
pub fn schema_text(map: &MapDef) -> String {
    let mut s = format!("map = {}\nsmoothness = {:?}\ndescription = {}\n", map.id(), map.smoothness(), map.description());
    for p in map.schema() {
        let _ = writeln!(s, "param.{} = {}  # {}", p.name, p.default, p.doc);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapKind;

    #[test]
    fn points_csv_round_trips_floats() {
        let p = State3::new(0.1, -1.0 / 3.0, 1e-300);
        let csv = points_csv(&[p]);
        let line = csv.lines().nth(1).unwrap();
        let v: Vec<f64> = line.split(',').skip(1).map(|t| t.parse().unwrap()).collect();
        assert_eq!(State3::new(v[0], v[1], v[2]), p);
    }

    #[test]
    fn schema_lists_every_parameter() {
        let m = MapDef::new(MapKind::BorderCollision);
        let t = schema_text(&m);
        assert_eq!(t.lines().filter(|l| l.starts_with("param.")).count(), 7);
        assert!(t.contains("param.delta_R = 1.4"));
    }
}
