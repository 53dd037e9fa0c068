//! Flat `key = value` experiment configs.
//!
//! One entry per line, `#` starts a comment, blank lines are ignored.
//! Keys are unique. `param.<name>` overrides a map parameter; every other
//! key must be known to the selected command.

use std::cell::RefCell;
use std::fmt::Display;
use std::str::FromStr;

use modelock::{lookup, BoundMap, MapDef, State3};

/// Invalid configuration; exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

pub const COMMANDS: [&str; 9] =
    ["orbit", "lyapunov", "scan", "find-cycle", "continue", "manifold", "classify", "census", "reproduce"];

const COMMON: &[&str] = &["command", "map", "x0", "transient", "out", "seed", "svg.axes"];
const CYCLE: &[&str] = &["period", "newton.tol", "newton.max_iter"];
const GRID: &[&str] = &["scan.param", "scan.from", "scan.to", "scan.count", "scan.seed_policy"];
const MANIFOLD: &[&str] = &[
    "saddle_period",
    "manifold.delta0",
    "manifold.h_max",
    "manifold.angle_max",
    "manifold.length_budget",
    "manifold.eps_att",
];

fn command_keys(command: &str) -> Vec<&'static str> {
    let mut keys = COMMON.to_vec();
    match command {
        "orbit" => keys.push("samples"),
        "lyapunov" => {
            keys.extend(GRID);
            keys.extend(["steps", "check.sign"]);
        }
        "scan" => {
            keys.extend(GRID);
            keys.extend(["samples", "check.distinct"]);
        }
        "find-cycle" => {
            keys.extend(CYCLE);
            keys.extend([
                "saddle_period",
                "multistart",
                "multistart.radius",
                "check.stable",
                "check.saddle",
                "check.tol",
            ]);
        }
        "continue" => {
            keys.extend(CYCLE);
            keys.extend([
                "saddle_period",
                "cycle",
                "cont.param",
                "cont.to",
                "cont.back",
                "cont.step",
                "cont.loc_tol",
                "plot",
                "check.events",
                "check.tol",
            ]);
        }
        "manifold" | "classify" => {
            keys.extend(CYCLE);
            keys.extend(MANIFOLD);
            if command == "classify" {
                keys.extend(["predict.at", "check.topology", "check.periods", "check.prediction"]);
            }
        }
        "census" => {
            keys.extend(CYCLE);
            keys.extend([
                "n",
                "samples",
                "point_tol",
                "lyapunov_steps",
                "census.source",
                "census.mirror",
                "census.seeds",
                "census.steps",
                "census.delta",
                "saddle_period",
                "check.verdict",
                "check.toggle",
            ]);
        }
        "reproduce" => keys.push("preset"),
        _ => {}
    }
    keys
}

#[derive(Debug, Default)]
pub struct Config {
    entries: Vec<(String, String)>,
    resolved: RefCell<Vec<(String, String)>>,
}

impl Config {
    pub fn parse(text: &str) -> anyhow::Result<Config> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_err(format!("line {}: expected `key = value`, got `{}`", k + 1, raw.trim())));
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(config_err(format!("line {}: empty key or value", k + 1)));
            }
            if entries.iter().any(|(k2, _)| k2 == key) {
                return Err(config_err(format!("line {}: duplicate key `{key}`", k + 1)));
            }
            entries.push((key.to_string(), value.to_string()));
        }
        Ok(Config { entries, resolved: RefCell::default() })
    }

    /// `top` entries replace entries of `self` with the same key.
    pub fn overlay(mut self, top: &Config) -> Config {
        for (k, v) in &top.entries {
            match self.entries.iter_mut().find(|(k2, _)| k2 == k) {
                Some(e) => e.1 = v.clone(),
                None => self.entries.push((k.clone(), v.clone())),
            }
        }
        self
    }

    pub fn set(&mut self, key: &str, value: &str) {
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value.to_string(),
            None => self.entries.push((key.to_string(), value.to_string())),
        }
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.retain(|(k, _)| k != key);
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn command(&self) -> anyhow::Result<String> {
        let c = self.raw("command").ok_or_else(|| config_err("missing `command`"))?;
        if !COMMANDS.contains(&c) {
            return Err(config_err(format!("unknown command `{c}`; expected one of {}", COMMANDS.join(", "))));
        }
        Ok(c.to_string())
    }

    /// Rejects keys the command does not read.
    pub fn validate(&self) -> anyhow::Result<()> {
        let command = self.command()?;
        let known = command_keys(&command);
        for (k, _) in &self.entries {
            let ok = known.contains(&k.as_str()) || (k.starts_with("param.") && command != "reproduce");
            if !ok {
                return Err(config_err(format!("unknown key `{k}` for command `{command}`")));
            }
        }
        Ok(())
    }

    fn record(&self, key: &str, value: String) {
        let mut r = self.resolved.borrow_mut();
        match r.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => r.push((key.to_string(), value)),
        }
    }

    pub fn opt<T: FromStr + Display>(&self, key: &str) -> anyhow::Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => {
                let t = v.parse::<T>().map_err(|_| config_err(format!("bad value `{v}` for `{key}`")))?;
                self.record(key, t.to_string());
                Ok(Some(t))
            }
        }
    }

    pub fn get<T: FromStr + Display>(&self, key: &str, default: T) -> anyhow::Result<T> {
        match self.opt(key)? {
            Some(t) => Ok(t),
            None => {
                self.record(key, default.to_string());
                Ok(default)
            }
        }
    }

    pub fn require<T: FromStr + Display>(&self, key: &str) -> anyhow::Result<T> {
        self.opt(key)?.ok_or_else(|| config_err(format!("missing `{key}`")))
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        let v = self.raw(key).unwrap_or(default).to_string();
        self.record(key, v.clone());
        v
    }

    pub fn opt_string(&self, key: &str) -> Option<String> {
        let v = self.raw(key)?.to_string();
        self.record(key, v.clone());
        Some(v)
    }

    pub fn state(&self, key: &str, default: State3) -> anyhow::Result<State3> {
        let s = match self.raw(key) {
            None => default,
            Some(v) => parse_state(v).ok_or_else(|| config_err(format!("bad state `{v}` for `{key}`; expected x,y,z")))?,
        };
        self.record(key, format!("{},{},{}", s.x, s.y, s.z));
        Ok(s)
    }

    pub fn map_def(&self) -> anyhow::Result<MapDef> {
        let id = self.string("map", "mira");
        lookup(&id).map_err(|e| config_err(e.to_string()))
    }

    /// Map bound to its defaults overridden by `param.*` entries.
    pub fn bound_map(&self) -> anyhow::Result<BoundMap> {
        let def = self.map_def()?;
        let mut params = def.defaults();
        for (k, v) in &self.entries {
            if let Some(name) = k.strip_prefix("param.") {
                if params.get(name).is_none() {
                    return Err(config_err(format!("map `{}` has no parameter `{name}`", def.id())));
                }
                let x: f64 = v.parse().map_err(|_| config_err(format!("bad value `{v}` for `{k}`")))?;
                params.set(name, x);
            }
        }
        let map = def.bind(&params).map_err(|e| config_err(e.to_string()))?;
        for (name, x) in map.params().iter() {
            self.record(&format!("param.{name}"), x.to_string());
        }
        Ok(map)
    }

    /// Every value the run actually used, defaults included, in a form
    /// that parses back to the same run.
    pub fn resolved_text(&self) -> String {
        let r = self.resolved.borrow();
        let mut out = String::new();
        let order = |k: &str| match k {
            "command" => 0,
            "map" => 1,
            _ if k.starts_with("param.") => 2,
            _ if k.starts_with("check.") => 4,
            _ => 3,
        };
        let mut keys: Vec<&(String, String)> = r.iter().filter(|(k, _)| k != "out").collect();
        keys.sort_by_key(|(k, _)| order(k));
        for (k, v) in keys {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

pub fn parse_state(v: &str) -> Option<State3> {
    let xs: Vec<f64> = v.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
    (xs.len() == 3).then(|| State3::new(xs[0], xs[1], xs[2]))
}

pub fn parse_list<T: FromStr>(v: &str) -> Option<Vec<T>> {
    v.split(',').map(|t| t.trim().parse().ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blank_lines_and_duplicates() {
        let c = Config::parse("# run\ncommand = orbit  # inline\n\nmap = mira\n").unwrap();
        assert_eq!(c.raw("command"), Some("orbit"));
        assert!(Config::parse("a = 1\na = 2\n").is_err());
        assert!(Config::parse("just words\n").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let c = Config::parse("command = orbit\nsteps = 10\n").unwrap();
        assert!(c.validate().is_err());
        let c = Config::parse("command = lyapunov\nsteps = 10\nparam.B = -0.5\n").unwrap();
        assert!(c.validate().is_ok());
    }

    #[test]
    fn resolved_values_parse_back() {
        let c = Config::parse("command = orbit\nx0 = 0.1, 0.2 ,0.3\n").unwrap();
        c.string("command", "");
        c.state("x0", State3::ZERO).unwrap();
        c.get("transient", 1e-6f64).unwrap();
        let back = Config::parse(&c.resolved_text()).unwrap();
        assert_eq!(back.raw("x0"), Some("0.1,0.2,0.3"));
        assert_eq!(back.raw("transient").unwrap().parse::<f64>().unwrap(), 1e-6);
    }
}
