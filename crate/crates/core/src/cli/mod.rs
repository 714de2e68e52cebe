//! The experiment runner behind the `fockcycle` binary.

mod config;
mod suites;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gaussian_dynamics::DeformationReport;

pub use config::{
    operator_size, BimoduleConfig, CohomologyConfig, DeformationConfig, ExperimentConfig, InvariantConfig,
    MalleabilityConfig, MomentsConfig, PsTraceConfig, SemigroupConfig, SmoothingConfig, SuiteConfig,
    MAX_OPERATOR_DIM, SUITES,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RESOURCE_CAP: i32 = 3;

/// Exit code for a run that stopped with an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceCap { .. } => EXIT_RESOURCE_CAP,
        _ => EXIT_CONFIG,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes iff `residual ≤ tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            pass: residual <= tolerance,
            residual,
            tolerance,
        }
    }

    pub fn equal(name: impl Into<String>, got: usize, expected: usize) -> Self {
        Check::at_most(name, got.abs_diff(expected) as f64, 0.0)
    }
}

/// A named CSV table.
#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub csv: Vec<u8>,
}

impl Table {
    pub fn from_rows(name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(csv_err)?;
        for r in rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let csv = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(Table { name: name.into(), csv })
    }

    pub fn from_report(name: &str, report: &DeformationReport) -> Result<Self> {
        let mut csv = Vec::new();
        report.write_csv(&mut csv)?;
        Ok(Table { name: name.into(), csv })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl SuiteOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub config: Value,
    pub checks: Vec<Check>,
    /// Table name to CSV path, relative to the report.
    pub tables: BTreeMap<String, String>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

/// Runs the configured suite without touching the file system.
pub fn execute(cfg: &ExperimentConfig, parallel: bool) -> Result<SuiteOutput> {
    suites::run_suite(cfg, parallel)
}

/// Runs the configured suite and writes `<suite>.json` and
/// `<suite>_<table>.csv` into `out`.
pub fn run(cfg: &ExperimentConfig, out: &Path, parallel: bool) -> Result<RunReport> {
    let output = execute(cfg, parallel)?;
    let suite = cfg.suite.name();
    fs::create_dir_all(out)?;
    let mut tables = BTreeMap::new();
    for t in &output.tables {
        let file = format!("{suite}_{}.csv", t.name);
        fs::write(out.join(&file), &t.csv)?;
        tables.insert(t.name.clone(), file);
    }
    let report = RunReport {
        suite: suite.into(),
        config: cfg.echo(),
        checks: output.checks,
        tables,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    fs::write(out.join(format!("{suite}.json")), json)?;
    Ok(report)
}

/// Maps `f` over grid points, in parallel if asked; results keep input order.
pub(crate) fn grid_map<T, R, F>(parallel: bool, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

pub(crate) fn fmt(x: f64) -> String {
    format!("{x:e}")
}
