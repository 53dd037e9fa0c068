mod config;
mod output;
mod presets;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;

use config::{config_err, Config, ConfigError};
use output::{manifest, ManifestInfo, Outputs};

/// Finds, continues and classifies mode-locked orbits of 3D maps.
///
/// A run is described by a flat `key = value` config. `--preset` starts
/// from a built-in config, `--config` entries override it and trailing
/// `key=value` arguments override both.
#[derive(Parser, Debug)]
#[command(name = "modelock", version)]
struct Cli {
    /// Config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset, e.g. table1 or fig6c.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for randomised multistart.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the preset catalog and exit.
    #[arg(long)]
    list_presets: bool,
    /// Print a map's parameter schema and exit.
    #[arg(long, value_name = "MAP")]
    schema: Option<String>,
    /// `key=value` overrides, or `reproduce <preset>`.
    args: Vec<String>,
}

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_TOLERANCE: u8 = 4;

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ConfigError>().is_some() || e.downcast_ref::<clap::Error>().is_some() {
        return EXIT_CONFIG;
    }
    match e.downcast_ref::<modelock::Error>() {
        Some(modelock::Error::Schema { .. } | modelock::Error::UnknownMap(_)) => EXIT_CONFIG,
        Some(_) => EXIT_NUMERICAL,
        None => EXIT_IO,
    }
}

/// Preset, then config file, then command-line entries.
fn resolve(cli: &Cli) -> anyhow::Result<(Config, Option<String>)> {
    let mut user = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| config_err(format!("reading {}: {e}", p.display())))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    let mut preset = cli.preset.clone();
    let mut rest = cli.args.iter().peekable();
    if rest.peek().is_some_and(|a| *a == "reproduce") {
        rest.next();
        let name = rest.next().ok_or_else(|| config_err("`reproduce` needs a preset name"))?;
        preset = Some(name.clone());
    }
    for a in rest {
        let (k, v) = a.split_once('=').ok_or_else(|| config_err(format!("expected key=value, got `{a}`")))?;
        user.set(k.trim(), v.trim());
    }
    if user.raw("command") == Some("reproduce") {
        let name = user.raw("preset").ok_or_else(|| config_err("`command = reproduce` needs `preset`"))?;
        preset = Some(name.to_string());
    }
    let Some(name) = preset else {
        user.validate()?;
        return Ok((user, None));
    };
    let p = presets::find(&name).ok_or_else(|| config_err(format!("unknown preset `{name}`; see --list-presets")))?;
    if user.raw("command") == Some("reproduce") {
        user.remove("command");
    }
    user.remove("preset");
    let cfg = Config::parse(&presets::config_text(p))?.overlay(&user);
    cfg.validate()?;
    Ok((cfg, Some(name)))
}

fn real_main() -> anyhow::Result<u8> {
    let cli = Cli::try_parse().map_err(|e| {
        let _ = e.print();
        e
    })?;
    if cli.list_presets {
        print!("{}", presets::catalog());
        return Ok(0);
    }
    if let Some(id) = &cli.schema {
        let def = modelock::lookup(id).map_err(|e| config_err(e.to_string()))?;
        print!("{}", modelock::io::schema_text(&def));
        return Ok(0);
    }
    let (cfg, preset) = resolve(&cli)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let out_dir = match &cli.out {
        Some(p) => p.clone(),
        None => PathBuf::from(cfg.raw("out").unwrap_or("out")),
    };
    let started = Instant::now();
    let mut run = run::Run::new(&cfg, Outputs::new(&out_dir)?, cli.seed);
    let result = run.execute();
    let status = match &result {
        Ok(()) if run.failed > 0 => format!("{} check(s) failed", run.failed),
        Ok(()) => "ok".to_string(),
        Err(e) => format!("error: {e}"),
    };
    let text = manifest(
        &cfg.resolved_text(),
        &ManifestInfo {
            preset: preset.as_deref(),
            elapsed_ms: started.elapsed().as_millis(),
            threads: rayon::current_num_threads(),
            files: run.out.files(),
            checks: &run.checks,
            status: &status,
        },
    );
    output::write_atomic(&run.out.dir().join("manifest.txt"), &text)?;
    result?;
    Ok(if run.failed > 0 { EXIT_TOLERANCE } else { 0 })
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if e.downcast_ref::<clap::Error>().is_none() {
                eprintln!("error: {e:#}");
            }
            let code = match e.downcast_ref::<clap::Error>() {
                Some(c) if !c.use_stderr() => 0,
                _ => exit_code(&e),
            };
            ExitCode::from(code)
        }
    }
}
