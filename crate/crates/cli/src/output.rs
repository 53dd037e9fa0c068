//! Output directory handling: atomic writes and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;

pub struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    pub fn new(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    /// Writes `name` through a temporary file and a rename.
    pub fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<()> {
        write_atomic(&self.dir.join(name), contents)?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(())
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path).with_context(|| format!("renaming {} to {}", tmp.display(), path.display()))?;
    Ok(())
}

pub struct ManifestInfo<'a> {
    pub preset: Option<&'a str>,
    pub elapsed_ms: u128,
    pub threads: usize,
    pub files: &'a [String],
    pub checks: &'a [String],
    pub status: &'a str,
}

/// Manifest text: `#` comment header with provenance and timings, then
/// the resolved config, which parses as a config of its own.
pub fn manifest(config_text: &str, info: &ManifestInfo) -> String {
    let mut s = String::from("# modelock run manifest\n");
    s.push_str(&format!("# version = {}\n", env!("CARGO_PKG_VERSION")));
    if let Some(p) = info.preset {
        s.push_str(&format!("# preset = {p}\n"));
    }
    s.push_str(&format!("# threads = {}\n", info.threads));
    s.push_str(&format!("# elapsed_ms = {}\n", info.elapsed_ms));
    s.push_str(&format!("# status = {}\n", info.status));
    for f in info.files {
        s.push_str(&format!("# output = {f}\n"));
    }
    for c in info.checks {
        s.push_str(&format!("# check = {c}\n"));
    }
    s.push_str(config_text);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_leaves_no_temporaries() {
        let dir = std::env::temp_dir().join(format!("modelock-out-{}", std::process::id()));
        let mut o = Outputs::new(&dir).unwrap();
        o.write("a.csv", "x\n").unwrap();
        o.write("a.csv", "y\n").unwrap();
        assert_eq!(fs::read_to_string(dir.join("a.csv")).unwrap(), "y\n");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        assert_eq!(o.files(), ["a.csv"]);
        fs::remove_dir_all(dir).unwrap();
    }
}
