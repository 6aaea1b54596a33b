use std::fs;
use std::path::{Path, PathBuf};

use crate::harness::config::RunConfig;
use crate::harness::scenarios::{check_scenario, run_oracles, run_scenario, ScenarioOutput, ALL, SCENARIOS};
use crate::{Error, Result};

/// A table of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    /// File name inside the run directory.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(name: String, header: &[&str]) -> Self {
        Self::with_header(name, header.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_header(name: String, header: Vec<String>) -> Self {
        Self {
            name,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Header row, then one line per row; comma separated, LF terminated.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Writes the config snapshot, every table and `summary.json` into `dir`.
pub fn write_artifacts(dir: &Path, cfg: &RunConfig, out: &ScenarioOutput) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join("config.toml"), cfg.to_toml().as_bytes())?;
    for t in &out.tables {
        write(&dir.join(&t.name), &t.to_bytes()?)?;
    }
    let mut summary = serde_json::to_string_pretty(&out.report)?;
    summary.push('\n');
    write(&dir.join("summary.json"), summary.as_bytes())
}

fn scenarios_of(cfg: &RunConfig) -> Result<Vec<&'static str>> {
    check_scenario(&cfg.scenario)?;
    Ok(if cfg.scenario == ALL {
        SCENARIOS.iter().map(|s| s.0).collect()
    } else {
        SCENARIOS.iter().map(|s| s.0).filter(|s| *s == cfg.scenario).collect()
    })
}

pub fn run_dir(cfg: &RunConfig, scenario: &str) -> PathBuf {
    cfg.out_dir.join(format!("{scenario}-seed{}", cfg.seed))
}

/// Runs the configured scenario (every scenario for `all`) and returns the
/// directories written.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let mut dirs = Vec::new();
    for name in scenarios_of(cfg)? {
        let dir = run_dir(cfg, name);
        // Fail on an unwritable output root before spending time on the run.
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let out = run_scenario(cfg, name)?;
        write_artifacts(&dir, cfg, &out)?;
        dirs.push(dir);
    }
    Ok(dirs)
}

/// Brute-force maps only.
pub fn run_oracle_only(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let mut dirs = Vec::new();
    for name in scenarios_of(cfg)? {
        let dir = cfg.out_dir.join(format!("{name}-seed{}-oracle", cfg.seed));
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let out = run_oracles(cfg, name)?;
        write_artifacts(&dir, cfg, &out)?;
        dirs.push(dir);
    }
    Ok(dirs)
}
