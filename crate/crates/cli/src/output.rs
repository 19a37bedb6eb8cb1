use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use jobswitch::DerivedConstants;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub seconds: f64,
    pub ok: bool,
    pub tolerance: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FileRecord {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Written to `manifest.json` in every run directory, also when the run fails.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub started: String,
    pub status: String,
    pub failure_stage: Option<String>,
    pub error: Option<String>,
    pub config: serde_json::Value,
    pub derived: Option<DerivedConstants>,
    pub stages: Vec<StageRecord>,
    pub files: Vec<FileRecord>,
}

/// One timestamped output directory and the manifest describing it.
pub struct RunDir {
    pub path: PathBuf,
    pub manifest: RunManifest,
    quiet: bool,
}

impl RunDir {
    pub fn create(out: &Path, command: &str, config: serde_json::Value, quiet: bool) -> Result<Self, Failure> {
        let now = chrono::Local::now();
        let stamp = now.format("%Y%m%dT%H%M%S%.3f").to_string();
        fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
        let mut path = out.join(format!("{command}-{stamp}"));
        let mut k = 1;
        while path.exists() {
            path = out.join(format!("{command}-{stamp}-{k}"));
            k += 1;
        }
        fs::create_dir(&path).map_err(|e| Failure::io(&path, e))?;
        Ok(RunDir {
            path,
            manifest: RunManifest {
                command: command.to_string(),
                started: now.to_rfc3339(),
                status: "running".into(),
                failure_stage: None,
                error: None,
                config,
                derived: None,
                stages: Vec::new(),
                files: Vec::new(),
            },
            quiet,
        })
    }

    pub fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }

    /// Runs one named stage, timing it and recording a failure against it.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T, Failure>) -> Result<T, Failure> {
        let start = Instant::now();
        let out = f();
        let seconds = start.elapsed().as_secs_f64();
        self.manifest.stages.push(StageRecord {
            name: name.into(),
            seconds,
            ok: out.is_ok(),
            tolerance: None,
            residual: None,
        });
        if out.is_err() && self.manifest.failure_stage.is_none() {
            self.manifest.failure_stage = Some(name.into());
        }
        self.say(format!("{name}: {seconds:.2} s"));
        out
    }

    /// Attaches a tolerance and achieved residual to the most recent stage.
    pub fn annotate(&mut self, tolerance: f64, residual: f64) {
        if let Some(s) = self.manifest.stages.last_mut() {
            s.tolerance = Some(tolerance);
            s.residual = Some(residual);
        }
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), Failure> {
        let path = self.path.join(name);
        fs::write(&path, bytes).map_err(|e| Failure::io(&path, e))?;
        self.manifest.files.push(FileRecord {
            name: name.into(),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Numerical(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn write_csv(&mut self, name: &str, table: &Table) -> Result<(), Failure> {
        self.write(name, table.render().as_bytes())
    }

    /// Writes the manifest with the final status.
    pub fn finish(mut self, result: &Result<(), Failure>) -> Result<PathBuf, Failure> {
        match result {
            Ok(()) => self.manifest.status = "ok".into(),
            Err(e) => {
                self.manifest.status = "failed".into();
                self.manifest.error = Some(e.to_string());
            }
        }
        let text = serde_json::to_string_pretty(&self.manifest).map_err(|e| Failure::Numerical(e.to_string()))?;
        let path = self.path.join("manifest.json");
        fs::write(&path, text + "\n").map_err(|e| Failure::io(&path, e))?;
        Ok(self.path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// A CSV table with a fixed header. Missing values are written as empty cells.
pub struct Table {
    header: &'static [&'static str],
    rows: Vec<String>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        debug_assert_eq!(cells.len(), self.header.len());
        let line = cells.iter().map(Cell::render).collect::<Vec<_>>().join(",");
        self.rows.push(line);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }
}

pub enum Cell {
    Num(f64),
    Opt(Option<f64>),
    Int(usize),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Opt(Some(v)) => fmt_num(*v),
            Cell::Opt(None) => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.12e}")
    } else {
        String::new()
    }
}
