//! Command implementations.

use anyhow::Result;
use modelock::dynamics::{alternates_between_halves, distinct_values, max_lyapunov_with};
use modelock::io;
use modelock::manifold::sample_invariant_curve;
use modelock::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{config_err, parse_list, Config};
use crate::output::Outputs;
use crate::svg::{Marker, Plot};

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"];

pub struct Run<'a> {
    cfg: &'a Config,
    pub out: Outputs,
    pub checks: Vec<String>,
    pub failed: usize,
    seed: Option<u64>,
}

impl<'a> Run<'a> {
    pub fn new(cfg: &'a Config, out: Outputs, seed: Option<u64>) -> Self {
        Self { cfg, out, checks: Vec::new(), failed: 0, seed }
    }

    fn check(&mut self, pass: bool, what: String) {
        let line = format!("{} {what}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        self.failed += usize::from(!pass);
        self.checks.push(line);
    }

    pub fn execute(&mut self) -> Result<()> {
        let command = self.cfg.command()?;
        self.cfg.string("command", "");
        match command.as_str() {
            "orbit" => self.orbit(),
            "lyapunov" => self.lyapunov(),
            "scan" => self.scan(),
            "find-cycle" => self.find_cycle(),
            "continue" => self.continuation(),
            "manifold" => self.manifold(false),
            "classify" => self.manifold(true),
            "census" => self.census(),
            _ => Err(config_err(format!("`{command}` needs a preset"))),
        }
    }

    fn x0(&self) -> Result<State3> {
        self.cfg.state("x0", State3::new(0.1, 0.1, 0.1))
    }

    fn axes(&self) -> Result<(usize, usize, String, String)> {
        let v = self.cfg.string("svg.axes", "x,y");
        let idx = |t: &str| match t.trim() {
            "x" => Some(0),
            "y" => Some(1),
            "z" => Some(2),
            _ => None,
        };
        match v.split(',').map(idx).collect::<Vec<_>>()[..] {
            [Some(a), Some(b)] => Ok((a, b, ["x", "y", "z"][a].into(), ["x", "y", "z"][b].into())),
            _ => Err(config_err(format!("bad `svg.axes` value `{v}`; expected two of x,y,z"))),
        }
    }

    fn newton(&self) -> Result<NewtonOptions> {
        let d = NewtonOptions::default();
        Ok(NewtonOptions { tol: self.cfg.get("newton.tol", d.tol)?, max_iter: self.cfg.get("newton.max_iter", d.max_iter)?, ..d })
    }

    /// Attracting cycle reached by simulation from `x0`, polished by Newton.
    fn attractor(&self, map: &BoundMap) -> Result<Cycle> {
        let x0 = self.x0()?;
        let transient = self.cfg.get("transient", 10_000usize)?;
        let period = self.cfg.get("period", 0usize)?;
        attractor_from(map, x0, transient, period, &self.newton()?)
    }

    fn grid(&self) -> Result<(String, Vec<f64>)> {
        let name: String = self.cfg.require("scan.param")?;
        let from: f64 = self.cfg.require("scan.from")?;
        let to: f64 = self.cfg.require("scan.to")?;
        let count: usize = self.cfg.require("scan.count")?;
        let grid = match count {
            0 => Vec::new(),
            1 => vec![from],
            _ => (0..count).map(|k| from + (to - from) * k as f64 / (count - 1) as f64).collect(),
        };
        Ok((name, grid))
    }

    fn seed_policy(&self) -> Result<SeedPolicy> {
        match self.cfg.string("scan.seed_policy", "fixed").as_str() {
            "fixed" => Ok(SeedPolicy::Fixed),
            "follow" => Ok(SeedPolicy::Follow),
            v => Err(config_err(format!("bad `scan.seed_policy` value `{v}`; expected fixed or follow"))),
        }
    }

    fn project(&self, pts: &[State3]) -> Result<Vec<(f64, f64)>> {
        let (a, b, ..) = self.axes()?;
        Ok(pts.iter().map(|p| (p[a], p[b])).collect())
    }

    fn plot_xy(&self, title: &str) -> Result<Plot> {
        let (.., xa, ya) = self.axes()?;
        Ok(Plot::new(title, &xa, &ya))
    }

    fn orbit(&mut self) -> Result<()> {
        let map = self.cfg.bound_map()?;
        let x0 = self.x0()?;
        let transient = self.cfg.get("transient", 10_000usize)?;
        let samples = self.cfg.get("samples", 1000usize)?;
        let o = iterate_orbit(&map, x0, transient, samples);
        self.out.write("orbit.csv", &io::orbit_csv(&o))?;
        let mut plot = self.plot_xy(&format!("{} orbit", map.id()))?;
        plot.points(self.project(&o.points)?, PALETTE[0], Marker::Dot, 1.0);
        self.out.write("orbit.svg", &plot.render())?;
        if let Some(steps) = o.escaped_at {
            return Err(Error::Escaped { steps }.into());
        }
        println!("{} points written", o.points.len());
        Ok(())
    }

    fn lyapunov(&mut self) -> Result<()> {
        let map = self.cfg.bound_map()?;
        let x0 = self.x0()?;
        let transient = self.cfg.get("transient", 10_000usize)?;
        let steps = self.cfg.get("steps", 200_000usize)?;
        if self.cfg.raw("scan.param").is_none() {
            let l = max_lyapunov_with(&map, x0, transient, steps)?;
            println!("lyapunov = {l}");
            self.out.write("lyapunov.csv", &format!("lyapunov\n{l}\n"))?;
            return Ok(());
        }
        let (name, grid) = self.grid()?;
        let policy = self.seed_policy()?;
        let maps: Vec<BoundMap> = grid.iter().map(|v| map.with_param(&name, *v)).collect::<modelock::Result<_>>()?;
        let values: Vec<f64> = match policy {
            SeedPolicy::Fixed => {
                maps.par_iter().map(|m| max_lyapunov_with(m, x0, transient, steps).unwrap_or(f64::NAN)).collect()
            }
            SeedPolicy::Follow => {
                let mut x = x0;
                let mut v = Vec::with_capacity(maps.len());
                for m in &maps {
                    let o = iterate_orbit(m, x, transient, 1);
                    if let (false, Some(last)) = (o.escaped(), o.last()) {
                        x = last;
                    }
                    v.push(max_lyapunov_with(m, x, 0, steps).unwrap_or(f64::NAN));
                }
                v
            }
        };
        if grid.is_empty() {
            eprintln!("warning: empty parameter grid");
        }
        for (p, _) in grid.iter().zip(&values).filter(|(_, l)| l.is_nan()) {
            eprintln!("warning: orbit escaped at {name} = {p}; exponent recorded as NaN");
        }
        let mut csv = String::from("param,lyapunov\n");
        for (p, l) in grid.iter().zip(&values) {
            csv.push_str(&format!("{p},{l}\n"));
        }
        self.out.write("lyapunov.csv", &csv)?;
        let mut plot = Plot::new(&format!("{} maximal Lyapunov exponent", map.id()), &name, "lambda_max");
        plot.line(grid.iter().zip(&values).map(|(p, l)| (*p, *l)).collect(), PALETTE[0]);
        plot.line(vec![(grid.first().copied().unwrap_or(0.0), 0.0), (grid.last().copied().unwrap_or(1.0), 0.0)], "#999999");
        self.out.write("lyapunov.svg", &plot.render())?;

        if let Some(spec) = self.cfg.opt_string("check.sign") {
            for item in spec.split(',') {
                let (p, want) = item
                    .split_once(':')
                    .and_then(|(p, s)| Some((p.trim().parse::<f64>().ok()?, s.trim().to_string())))
                    .ok_or_else(|| config_err(format!("bad `check.sign` entry `{item}`; expected value:sign")))?;
                let Some(k) = nearest(&grid, p) else {
                    self.check(false, format!("lyapunov sign at {name}={p}: empty grid"));
                    continue;
                };
                let l = values[k];
                let got = if l < -1e-3 {
                    "negative"
                } else if l > 1e-3 {
                    "positive"
                } else {
                    "zero"
                };
                let ok = match want.as_str() {
                    "negative" | "positive" => got == want,
                    "zero" => l.abs() <= 5e-3,
                    _ => return Err(config_err(format!("bad sign `{want}`; expected negative, zero or positive"))),
                };
                self.check(ok, format!("lyapunov at {name}={}: {l:.4e} is {want}", grid[k]));
            }
        }
        Ok(())
    }

    fn scan(&mut self) -> Result<()> {
        let map = self.cfg.bound_map()?;
        let x0 = self.x0()?;
        let transient = self.cfg.get("transient", 10_000usize)?;
        let samples = self.cfg.get("samples", 200usize)?;
        let (name, grid) = self.grid()?;
        let policy = self.seed_policy()?;
        let (a, _, xa, _) = self.axes()?;
        if map.param(&name).is_none() {
            return Err(config_err(format!("map `{}` has no parameter `{name}`", map.id())));
        }
        let ds = bifurcation_scan(&map, &name, &grid, policy, x0, transient, samples)?;
        if grid.is_empty() {
            eprintln!("warning: empty parameter grid; nothing to scan");
        }
        if let (Some(lo), Some(hi)) = (ds.escapes.first(), ds.escapes.last()) {
            eprintln!("warning: orbit escaped at {} grid values (first {name} = {lo}, last {hi})", ds.escapes.len());
        }
        self.out.write("scan.csv", &io::scan_csv(&ds))?;
        let mut plot = Plot::new(&format!("{} bifurcation diagram", map.id()), &name, &xa);
        plot.points(ds.rows.iter().map(|r| (r.param, r.state[a])).collect(), PALETTE[0], Marker::Dot, 0.6);
        self.out.write("scan.svg", &plot.render())?;
        println!("{} rows over {} grid values", ds.rows.len(), grid.len());

        if let Some(spec) = self.cfg.opt_string("check.distinct") {
            for item in spec.split(',') {
                let (p, want) = item
                    .split_once(':')
                    .and_then(|(p, n)| Some((p.trim().parse::<f64>().ok()?, n.trim().parse::<usize>().ok()?)))
                    .ok_or_else(|| config_err(format!("bad `check.distinct` entry `{item}`; expected value:count")))?;
                let Some(k) = nearest(&grid, p) else {
                    self.check(false, format!("distinct values at {name}={p}: empty grid"));
                    continue;
                };
                let xs: Vec<f64> = ds.states_at(grid[k]).iter().map(|s| s[a]).collect();
                let got = distinct_values(&xs, 1e-6);
                self.check(got == want, format!("distinct {xa} values at {name}={}: {got} (expected {want})", grid[k]));
            }
        }
        Ok(())
    }

    fn find_cycle(&mut self) -> Result<()> {
        let map = self.cfg.bound_map()?;
        let newton = self.newton()?;
        let mut stable = vec![self.attractor(&map)?];
        let starts = self.cfg.get("multistart", 0usize)?;
        if starts > 0 {
            let radius = self.cfg.get("multistart.radius", 0.1f64)?;
            let seed = match self.seed {
                Some(s) => s,
                None => self.cfg.get("seed", 0u64)?,
            };
            self.cfg.get("seed", seed)?;
            let x0 = self.x0()?;
            let transient = self.cfg.get("transient", 10_000usize)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let guesses: Vec<State3> = (0..starts)
                .map(|_| x0 + State3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * radius)
                .collect();
            let found: Vec<Cycle> =
                guesses.par_iter().filter_map(|g| attractor_from(&map, *g, transient, 0, &newton).ok()).collect();
            for c in found {
                if !stable.iter().any(|s| same_cycle(s, &c)) {
                    stable.push(c);
                }
            }
        }
        let sp = self.cfg.get("saddle_period", 0usize)?;
        let saddle = if sp > 0 { Some(find_saddle_between(&map, &stable[0], sp, &newton)?) } else { None };

        let mut rows = Vec::new();
        for c in stable.iter().chain(saddle.iter()) {
            rows.push((c.clone(), cycle_multipliers(&map, c)?));
        }
        for (c, e) in &rows {
            let class = classify_cycle(e);
            println!("period {} {}: multipliers {e}", c.period, class.tag.name());
        }
        self.out.write("cycles.csv", &io::cycles_csv(&rows))?;
        let mut plot = self.plot_xy(&format!("{} cycles", map.id()))?;
        for (i, s) in stable.iter().enumerate() {
            plot.points(self.project(&s.points)?, PALETTE[i % PALETTE.len()], Marker::Triangle, 4.0);
        }
        if let Some(sd) = &saddle {
            plot.points(self.project(&sd.points)?, "black", Marker::Square, 3.0);
        }
        self.out.write("cycles.svg", &plot.render())?;

        let tol = self.cfg.get("check.tol", 1e-3f64)?;
        let stable_e = rows[0].1.clone();
        let saddle_e = saddle.as_ref().map(|_| rows.last().unwrap().1.clone());
        for (key, e) in [("check.stable", Some(stable_e)), ("check.saddle", saddle_e)] {
            let Some(spec) = self.cfg.opt_string(key) else { continue };
            let want: Vec<f64> = parse_list(&spec)
                .filter(|v: &Vec<f64>| v.len() == 3)
                .ok_or_else(|| config_err(format!("bad `{key}` value `{spec}`; expected three numbers")))?;
            let what = &key[6..];
            let Some(e) = e else {
                self.check(false, format!("{what} multipliers: no saddle requested"));
                continue;
            };
            match e.roles() {
                Some(r) => {
                    for ((name, got), w) in ["lambda1", "lambda2", "lambda3"].iter().zip(r.as_array()).zip(&want) {
                        let d = (got - w).abs();
                        self.check(d <= tol, format!("{what} {name} {got:.4} vs {w} (|diff| {d:.1e}, tol {tol:e})"));
                    }
                }
                None => self.check(false, format!("{what} multipliers {e} are not all real")),
            }
        }
        Ok(())
    }

    fn continuation(&mut self) -> Result<()> {
        let map = self.cfg.bound_map()?;
        let newton = self.newton()?;
        let which = self.cfg.string("cycle", "stable");
        let name: String = self.cfg.require("cont.param")?;
        let to: f64 = self.cfg.require("cont.to")?;
        let back: Option<f64> = self.cfg.opt("cont.back")?;
        let step = self.cfg.get("cont.step", 1e-3f64)?;
        let loc_tol = self.cfg.get("cont.loc_tol", 1e-6f64)?;
        let plot_kind = self.cfg.string("plot", "points");
        let start = map
            .param(&name)
            .ok_or_else(|| config_err(format!("map `{}` has no parameter `{name}`", map.id())))?;
        if !["points", "moduli", "imag"].contains(&plot_kind.as_str()) {
            return Err(config_err(format!("bad `plot` value `{plot_kind}`; expected points, moduli or imag")));
        }
        let stable = self.attractor(&map)?;
        let mut cycles = Vec::new();
        if which == "stable" || which == "both" {
            cycles.push(("stable", stable.clone()));
        }
        if which == "saddle" || which == "both" {
            let sp = self.cfg.get("saddle_period", stable.period)?;
            cycles.push(("saddle", find_saddle_between(&map, &stable, sp, &newton)?));
        }
        if cycles.is_empty() {
            return Err(config_err(format!("bad `cycle` value `{which}`; expected stable, saddle or both")));
        }
        let opts = ContinuationOptions { newton: NewtonOptions { max_step: Some(0.05), ..newton }, ..Default::default() };

        let mut events = Vec::new();
        let mut branches = Vec::new();
        for (label, c) in cycles {
            let (m0, c0, p0) = match back {
                Some(b) => {
                    let br = continue_cycle(&map, &c, &name, start, b, step, &opts)?;
                    let last = br.records.last().expect("branch has its start record");
                    println!("{label}: carried back to {name} = {}", last.param);
                    (map.with_param(&name, last.param)?, last.cycle.clone(), last.param)
                }
                None => (map.clone(), c, start),
            };
            let br = continue_cycle(&m0, &c0, &name, p0, to, step, &opts)?.with_label(label);
            let ev = detect_bifurcations(&br, loc_tol)?;
            println!(
                "{label}: period {} over {name} in [{}, {}], {} records, ended by {}",
                br.period(),
                br.records.first().map_or(p0, |r| r.param),
                br.records.last().map_or(p0, |r| r.param),
                br.records.len(),
                br.termination.name()
            );
            for e in &ev {
                println!("  {} at {name} = {:.6} (critical {:.4}{:+.4}i)", e.kind, e.param, e.critical.re, e.critical.im);
            }
            self.out.write(&format!("branch_{label}.csv"), &io::branch_csv(&br))?;
            events.extend(ev);
            branches.push(br);
        }
        self.out.write("events.csv", &io::events_csv(&events))?;

        let (a, _, xa, _) = self.axes()?;
        let ylabel = match plot_kind.as_str() {
            "points" => xa,
            "moduli" => "|lambda|".to_string(),
            _ => "Im lambda".to_string(),
        };
        let mut plot = Plot::new(&format!("{} continuation", map.id()), &name, &ylabel);
        for br in &branches {
            let base = if br.label == "saddle" { 3 } else { 0 };
            match plot_kind.as_str() {
                "points" => {
                    for i in 0..br.period() {
                        let pts = br.records.iter().map(|r| (r.param, r.cycle.points.get(i).map_or(f64::NAN, |p| p[a])));
                        plot.line(pts.collect(), if br.label == "saddle" { "black" } else { PALETTE[0] });
                    }
                }
                kind => {
                    for k in 0..3 {
                        let f = |z: num_complex::Complex64| if kind == "moduli" { z.norm() } else { z.im };
                        let pts = br.records.iter().map(|r| (r.param, f(r.tracked[k])));
                        plot.line(pts.collect(), PALETTE[base + k]);
                    }
                }
            }
        }
        self.out.write("branch.svg", &plot.render())?;

        if let Some(spec) = self.cfg.opt_string("check.events") {
            let tol = self.cfg.get("check.tol", 2e-3f64)?;
            for item in spec.split(',') {
                let parts: Vec<&str> = item.trim().splitn(3, ':').collect();
                let [label, kind, value] = parts[..] else {
                    return Err(config_err(format!("bad `check.events` entry `{item}`; expected cycle:kind:value")));
                };
                let value: f64 =
                    value.parse().map_err(|_| config_err(format!("bad value in `check.events` entry `{item}`")))?;
                let best = events
                    .iter()
                    .filter(|e| e.cycle_label == label && e.kind.name() == kind)
                    .min_by(|x, y| (x.param - value).abs().total_cmp(&(y.param - value).abs()));
                match best {
                    Some(e) => {
                        let d = (e.param - value).abs();
                        self.check(d <= tol, format!("{label} {kind} at {name} = {:.5} vs {value} (|diff| {d:.1e}, tol {tol:e})", e.param));
                    }
                    None => self.check(false, format!("{label} {kind} near {name} = {value}: not detected")),
                }
            }
        }
        Ok(())
    }

    fn settings(&self) -> Result<ManifoldSettings> {
        let d = ManifoldSettings::default();
        Ok(ManifoldSettings {
            delta0: self.cfg.get("manifold.delta0", d.delta0)?,
            h_max: self.cfg.get("manifold.h_max", d.h_max)?,
            angle_max: self.cfg.get("manifold.angle_max", d.angle_max)?,
            length_budget: self.cfg.get("manifold.length_budget", d.length_budget)?,
            eps_att: self.cfg.get("manifold.eps_att", d.eps_att)?,
            ..d
        })
    }

    fn manifold(&mut self, classify: bool) -> Result<()> {
        let map = self.cfg.bound_map()?;
        let newton = self.newton()?;
        let stable = self.attractor(&map)?;
        let sp = self.cfg.get("saddle_period", stable.period)?;
        let saddle = find_saddle_between(&map, &stable, sp, &newton)?;
        let st = self.settings()?;
        let curves = grow_branches(&map, &saddle, &stable.points, &st)?;
        let rows = vec![
            (stable.clone(), cycle_multipliers(&map, &stable)?),
            (saddle.clone(), cycle_multipliers(&map, &saddle)?),
        ];
        println!("stable period {} multipliers {}", stable.period, rows[0].1);
        println!("saddle period {} multipliers {}", saddle.period, rows[1].1);
        self.out.write("cycles.csv", &io::cycles_csv(&rows))?;
        self.out.write("manifold.csv", &io::manifold_csv(&curves))?;
        let mut plot = self.plot_xy(&format!("{} unstable manifolds", map.id()))?;
        for c in &curves {
            plot.line(self.project(&c.points)?, "#d62728");
        }
        plot.points(self.project(&stable.points)?, PALETTE[0], Marker::Triangle, 4.0);
        plot.points(self.project(&saddle.points)?, "black", Marker::Square, 3.0);
        self.out.write("manifold.svg", &plot.render())?;
        if !classify {
            return Ok(());
        }

        let report = classify_connection(&map, &saddle, &stable, &curves)?;
        let mut text = report.summary();
        let prediction = match self.cfg.opt_string("predict.at") {
            Some(spec) => {
                let (name, value) = spec
                    .split_once(':')
                    .and_then(|(n, v)| Some((n.trim().to_string(), v.trim().parse::<f64>().ok()?)))
                    .ok_or_else(|| config_err(format!("bad `predict.at` value `{spec}`; expected param:value")))?;
                let m = map.with_param(&name, value).map_err(|e| config_err(e.to_string()))?;
                let s = self.attractor(&m)?;
                let d = find_saddle_between(&m, &s, s.period, &newton)?;
                let p = predict_doubling_type(&cycle_multipliers(&m, &s)?, &cycle_multipliers(&m, &d)?);
                text.push_str(&format!("prediction = {}\nprediction_at = {name}={value}\n", p.kind));
                Some(p.kind)
            }
            None => None,
        };
        print!("{text}");
        self.out.write("report.txt", &text)?;

        if let Some(spec) = self.cfg.opt_string("check.periods") {
            let want: Vec<usize> = parse_list(&spec)
                .filter(|v: &Vec<usize>| v.len() == 2)
                .ok_or_else(|| config_err(format!("bad `check.periods` value `{spec}`; expected stable,saddle")))?;
            let ok = stable.period == want[0] && saddle.period == want[1];
            self.check(ok, format!("stable period {} and saddle period {} (expected {} and {})", stable.period, saddle.period, want[0], want[1]));
        }
        if let Some(want) = self.cfg.opt_string("check.topology") {
            let got = report.topology.to_string();
            self.check(got == want, format!("topology {got} (expected {want})"));
        }
        if let Some(want) = self.cfg.opt_string("check.prediction") {
            match prediction {
                Some(p) => self.check(p.to_string() == want, format!("doubling prediction {p} (expected {want})")),
                None => return Err(config_err("`check.prediction` needs `predict.at`")),
            }
        }
        Ok(())
    }

    fn census(&mut self) -> Result<()> {
        let map = self.cfg.bound_map()?;
        let x0 = self.x0()?;
        let transient = self.cfg.get("transient", 10_000usize)?;
        let n: usize = self.cfg.require("n")?;
        let point_tol = self.cfg.get("point_tol", 1e-4f64)?;
        let lsteps = self.cfg.get("lyapunov_steps", 200_000usize)?;
        let source = self.cfg.string("census.source", "orbit");
        let orbit_len = self.cfg.get("samples", 20_000usize)?;
        let orbit = iterate_orbit(&map, x0, transient, orbit_len);
        if let Some(steps) = orbit.escaped_at {
            return Err(Error::Escaped { steps }.into());
        }
        let lyapunov = if lsteps > 0 { Some(max_lyapunov_with(&map, x0, transient, lsteps)?) } else { None };
        let sample = match source.as_str() {
            "orbit" => orbit.points.clone(),
            "saddle-curves" => {
                let newton = self.newton()?;
                let stable = self.attractor(&map)?;
                let sp = self.cfg.get("saddle_period", stable.period)?;
                let saddle = find_saddle_between(&map, &stable, sp, &newton)?;
                let seeds = self.cfg.get("census.seeds", 100usize)?;
                let steps = self.cfg.get("census.steps", 400usize)?;
                let delta = self.cfg.get("census.delta", 1e-6f64)?;
                let mut pts = sample_invariant_curve(&map, &saddle, seeds, steps, delta)?;
                if self.cfg.get("census.mirror", false)? {
                    let m = mirrored_saddle(&map, &saddle, &newton)?;
                    pts.extend(sample_invariant_curve(&map, &m, seeds, steps, delta)?);
                }
                pts
            }
            v => return Err(config_err(format!("bad `census.source` value `{v}`; expected orbit or saddle-curves"))),
        };
        let census = count_cyclic_loops(&sample, n, point_tol, lyapunov)?;
        let text = census.summary();
        print!("{text}");
        self.out.write("census.txt", &text)?;
        self.out.write("census_points.csv", &io::points_csv(&sample))?;
        let mut plot = self.plot_xy(&format!("{} census, n = {n}", map.id()))?;
        for r in 0..n {
            let class: Vec<State3> = sample.iter().skip(r).step_by(n).copied().collect();
            plot.points(self.project(&class)?, PALETTE[r % PALETTE.len()], Marker::Dot, 0.6);
        }
        self.out.write("census.svg", &plot.render())?;

        if let Some(want) = self.cfg.opt_string("check.verdict") {
            let got = census.verdict.to_string();
            self.check(got == want, format!("census verdict {got} (expected {want})"));
        }
        if self.cfg.opt::<bool>("check.toggle")?.unwrap_or(false) {
            let short = &orbit.points[..orbit.points.len().min(2000)];
            self.check(alternates_between_halves(short), "iterates toggle between two halves".into());
            if source == "saddle-curves" {
                self.check(alternates_between_halves(&sample), "invariant-curve sample toggles between two halves".into());
            }
        }
        Ok(())
    }
}

fn attractor_from(map: &BoundMap, x0: State3, transient: usize, period: usize, newton: &NewtonOptions) -> Result<Cycle> {
    let o = iterate_orbit(map, x0, transient, 400);
    if let Some(steps) = o.escaped_at {
        return Err(Error::Escaped { steps }.into());
    }
    let seeds = seed_cycles_from_orbit(&o.points, 64, 1e-7);
    let seed = seeds.iter().find(|(n, _)| period == 0 || *n == period).copied();
    let Some((n, g)) = seed else {
        return Err(Error::Precondition("no periodic recurrence on the attractor (period <= 64)".into()).into());
    };
    Ok(solve_cycle(map, g, n, newton)?)
}

fn same_cycle(a: &Cycle, b: &Cycle) -> bool {
    a.period == b.period && b.points.iter().any(|p| p.dist(a.points[0]) < 1e-8)
}

/// Saddle cycle through the x <-> y mirror image of `saddle`, rotated so
/// that its first point is the one closest to the first point of `saddle`.
fn mirrored_saddle(map: &BoundMap, saddle: &Cycle, newton: &NewtonOptions) -> Result<Cycle> {
    let p = saddle.points[0];
    let m = solve_cycle(map, State3::new(p.y, p.x, p.z), saddle.period, newton)?;
    if same_cycle(saddle, &m) {
        return Err(Error::Precondition("mirror image lies on the same saddle cycle".into()).into());
    }
    let k = (0..m.period).min_by(|a, b| m.points[*a].dist(p).total_cmp(&m.points[*b].dist(p))).unwrap_or(0);
    Ok(m.rotated(k))
}

fn nearest(grid: &[f64], p: f64) -> Option<usize> {
    (0..grid.len()).min_by(|a, b| (grid[*a] - p).abs().total_cmp(&(grid[*b] - p).abs()))
}
