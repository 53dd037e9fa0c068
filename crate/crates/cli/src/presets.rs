//! Built-in experiment presets. Each is an ordinary config; `check.*`
//! keys hold the reference numbers a run is compared against.

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: &'static str,
}

const MIRA: &str = "map = mira\nparam.A = -2.269\nparam.C = -2.1\nx0 = 0.1,0.1,0.1\n";
const HENON: &str = "map = henon3d\nparam.b = 0.1\nx0 = 0.1,0.1,0.1\n";
const LV: &str = "map = lotka-volterra\nparam.R = 1\nparam.alpha = 1\n";
const BCNF: &str = "map = bcnf\nx0 = 0.01,0,0\n";
const COUPLED: &str = "map = coupled\nx0 = 0.051,0.149,-0.038\n";

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "table1",
        description: "Mira B=-0.58: multipliers of the stable and saddle period-5 cycles",
        config: "command = find-cycle\nparam.B = -0.58\nsaddle_period = 5\n\
                 check.stable = 0.3550,-0.7131,0.2593\ncheck.saddle = 1.3963,-0.7878,0.0597\ncheck.tol = 0.002\n",
    },
    Preset {
        name: "table2",
        description: "Henon a=1.2, b=0.1: multipliers of the stable and saddle period-4 cycles",
        config: "command = find-cycle\nparam.a = 1.2\nsaddle_period = 4\n\
                 check.stable = 0.1795,-0.9813,-0.0006\ncheck.saddle = 1.6217,-0.6890,-0.0001\ncheck.tol = 0.002\n",
    },
    Preset {
        name: "fig4a",
        description: "Mira bifurcation diagram of x against B",
        config: "command = scan\nparam.B = -0.6\nscan.param = B\nscan.from = -0.6\nscan.to = -0.4\nscan.count = 201\n\
                 scan.seed_policy = follow\nsamples = 200\ncheck.distinct = -0.58:5,-0.54:10\n",
    },
    Preset {
        name: "fig5",
        description: "Mira multipliers of the saddle and stable cycles continued in B",
        config: "command = continue\nparam.B = -0.58\ncycle = both\nsaddle_period = 5\ncont.param = B\n\
                 cont.back = -0.6\ncont.to = -0.5\nplot = moduli\n\
                 check.events = saddle:flip:-0.5627,stable:flip:-0.55\ncheck.tol = 0.001\n",
    },
    Preset {
        name: "fig6a",
        description: "Mira B=-0.58: unstable manifolds of the period-5 saddle close a single loop",
        config: "command = classify\nparam.B = -0.58\nsaddle_period = 5\ncheck.periods = 5,5\n",
    },
    Preset {
        name: "fig6b",
        description: "Mira B=-0.555: saddle period 10 connecting to the stable period-5 cycle",
        config: "command = classify\nparam.B = -0.555\nsaddle_period = 10\ncheck.periods = 5,10\n",
    },
    Preset {
        name: "fig6c",
        description: "Mira B=-0.54: two disjoint loops formed by the period-10 saddle",
        config: "command = classify\nparam.B = -0.54\nsaddle_period = 10\npredict.at = B:-0.58\n\
                 check.periods = 10,10\ncheck.topology = disjoint-loops(2)\ncheck.prediction = disjoint-loops\n",
    },
    Preset {
        name: "fig8a",
        description: "Henon bifurcation diagram of x against a",
        config: "command = scan\nparam.a = 0.7\nscan.param = a\nscan.from = 0.7\nscan.to = 1.5\nscan.count = 161\n\
                 scan.seed_policy = fixed\nsamples = 200\n",
    },
    Preset {
        name: "fig8b",
        description: "Henon maximal Lyapunov exponent against a",
        config: "command = lyapunov\nparam.a = 0.7\nscan.param = a\nscan.from = 0.7\nscan.to = 1.5\nscan.count = 81\n\
                 scan.seed_policy = fixed\nsteps = 100000\ncheck.sign = 1.2:negative\n",
    },
    Preset {
        name: "fig9",
        description: "Henon stable and saddle period-4 cycles continued in a",
        config: "command = continue\nparam.a = 1.2\ncycle = both\nsaddle_period = 4\ncont.param = a\n\
                 cont.back = 1.1\ncont.to = 1.3\nplot = points\ncheck.events = stable:flip:1.204\ncheck.tol = 0.002\n",
    },
    Preset {
        name: "fig10",
        description: "Henon multipliers of the saddle and stable cycles continued in a",
        config: "command = continue\nparam.a = 1.2\ncycle = both\nsaddle_period = 4\ncont.param = a\n\
                 cont.back = 1.1\ncont.to = 1.3\nplot = moduli\ncheck.events = stable:flip:1.204\ncheck.tol = 0.002\n",
    },
    Preset {
        name: "fig12b",
        description: "Henon a=1.3: period-8 saddle-node connection of doubled length",
        config: "command = classify\nparam.a = 1.3\nsaddle_period = 8\npredict.at = a:1.2\n\
                 check.periods = 8,8\ncheck.topology = length-doubled\ncheck.prediction = mobius-length-doubled\n",
    },
    Preset {
        name: "fig15a",
        description: "Lotka-Volterra beta=-0.59: saddle-node connection of period-6 cycles",
        config: "command = classify\nparam.beta = -0.59\nx0 = 0.62893,0.95831,0.41276\nsaddle_period = 6\n\
                 check.periods = 6,6\ncheck.topology = single-loop\n",
    },
    Preset {
        name: "fig15b",
        description: "Lotka-Volterra beta=-0.91: saddle-focus connection of period-6 cycles",
        config: "command = classify\nparam.beta = -0.91\nx0 = 0.52356,0.21778,1.25866\nsaddle_period = 6\n\
                 check.periods = 6,6\ncheck.topology = saddle-focus-spiral\n",
    },
    Preset {
        name: "fig15c",
        description: "Lotka-Volterra beta=-1: six cyclic closed invariant curves",
        config: "command = census\nparam.beta = -1\nx0 = 0.46842,1.39641,0.20074\nn = 6\nsamples = 20000\n\
                 check.verdict = cyclic-loops(6)\n",
    },
    Preset {
        name: "fig16",
        description: "Lotka-Volterra multipliers continued in beta: complex pair, then Neimark-Sacker",
        config: "command = continue\nparam.beta = -0.59\nx0 = 0.62893,0.95831,0.41276\ncycle = both\nsaddle_period = 6\n\
                 cont.param = beta\ncont.to = -1\nplot = moduli\n\
                 check.events = stable:eigenvalues-turn-complex:-0.646,stable:neimark-sacker:-0.968\ncheck.tol = 0.002\n",
    },
    Preset {
        name: "fig17",
        description: "Border-collision normal form delta_R=1.5: seven cyclic closed invariant curves",
        config: "command = census\nparam.delta_R = 1.5\nn = 7\nsamples = 21000\ncheck.verdict = cyclic-loops(7)\n",
    },
    Preset {
        name: "fig18",
        description: "Border-collision normal form multipliers continued in delta_R",
        config: "command = continue\nparam.delta_R = 1.4\ncycle = both\nsaddle_period = 7\ncont.param = delta_R\n\
                 cont.to = 1.5\nplot = moduli\ncheck.events = stable:neimark-sacker:1.455\ncheck.tol = 0.001\n",
    },
    Preset {
        name: "fig20",
        description: "Coupled map bifurcation diagram of x against a",
        config: "command = scan\nparam.a = 27\nscan.param = a\nscan.from = 27\nscan.to = 27.6\nscan.count = 121\n\
                 scan.seed_policy = follow\nsamples = 400\n",
    },
    Preset {
        name: "fig21",
        description: "Coupled map a=27.521: ten cyclic loops, iterates toggle between two bigger loops",
        config: "command = census\nparam.a = 27.521\nn = 10\nsaddle_period = 20\ncensus.source = saddle-curves\n\
                 census.mirror = true\nlyapunov_steps = 0\ncheck.verdict = cyclic-loops(10)\ncheck.toggle = true\n",
    },
    Preset {
        name: "fig22",
        description: "Coupled map period-20 cycle continued in a down to its fold",
        config: "command = continue\nparam.a = 27.521\ncycle = stable\ncont.param = a\ncont.to = 27.4\nplot = points\n\
                 check.events = stable:fold:27.46\ncheck.tol = 0.005\n",
    },
];

fn base(name: &str) -> &'static str {
    match name {
        "table1" | "fig4a" | "fig5" | "fig6a" | "fig6b" | "fig6c" => MIRA,
        "table2" | "fig8a" | "fig8b" | "fig9" | "fig10" | "fig12b" => HENON,
        "fig15a" | "fig15b" | "fig15c" | "fig16" => LV,
        "fig17" | "fig18" => BCNF,
        _ => COUPLED,
    }
}

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

/// Full config text of a preset.
pub fn config_text(p: &Preset) -> String {
    let mut s = String::from(base(p.name));
    s.push_str(p.config);
    s
}

pub fn catalog() -> String {
    PRESETS.iter().map(|p| format!("{:<8} {}\n", p.name, p.description)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn catalog_lists_every_preset() {
        let c = catalog();
        for name in ["table1", "table2", "fig17"] {
            assert!(c.lines().any(|l| l.starts_with(name)));
        }
        assert_eq!(PRESETS.len(), 21);
    }

    #[test]
    fn presets_are_valid_configs() {
        for p in PRESETS {
            let c = Config::parse(&config_text(p)).unwrap_or_else(|e| panic!("{}: {e}", p.name));
            c.validate().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            c.bound_map().unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
    }
}
