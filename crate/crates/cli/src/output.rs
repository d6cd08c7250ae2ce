use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::ValueEnum;
use harmonic_annulus::Tolerances;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Provenance embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub timestamp: String,
    pub tolerances: Option<Tolerances>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Manifest {
    pub fn new(command: String, args: Vec<String>) -> Self {
        Self {
            command,
            args,
            seed: None,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tolerances: None,
            notes: Vec::new(),
        }
    }

    pub fn with_tolerances(mut self, t: Tolerances) -> Self {
        self.tolerances = Some(t);
        self
    }

    fn csv_header(&self) -> anyhow::Result<String> {
        let mut s = String::new();
        s.push_str(&format!("# command: {}\n", self.command));
        s.push_str(&format!("# args: {}\n", serde_json::to_string(&self.args)?));
        if let Some(seed) = self.seed {
            s.push_str(&format!("# seed: {seed}\n"));
        }
        s.push_str(&format!("# version: {}\n", self.version));
        s.push_str(&format!("# timestamp: {}\n", self.timestamp));
        if let Some(t) = &self.tolerances {
            s.push_str(&format!("# tolerances: {}\n", serde_json::to_string(t)?));
        }
        for note in &self.notes {
            s.push_str(&format!("# {note}\n"));
        }
        Ok(s)
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    manifest: &'a Manifest,
    report: &'a T,
}

#[derive(Serialize)]
struct Table<'a, C: Serialize> {
    columns: &'a [&'a str],
    rows: &'a [Vec<C>],
}

/// Destination and encoding of command output.
pub struct Sink {
    out: Option<PathBuf>,
    format: Option<Format>,
    manifest: Manifest,
}

impl Sink {
    pub fn new(out: Option<PathBuf>, format: Option<Format>, manifest: Manifest) -> Self {
        Self { out, format, manifest }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.manifest.seed = Some(seed);
        self
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.manifest.notes.push(note);
        self
    }

    fn write(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                Ok(stdout.flush()?)
            }
        }
    }

    fn csv<C: Display>(&self, columns: &[&str], rows: &[Vec<C>]) -> anyhow::Result<String> {
        let mut s = self.manifest.csv_header()?;
        s.push_str(&columns.join(","));
        s.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        Ok(s)
    }

    fn json<T: Serialize>(&self, report: &T) -> anyhow::Result<String> {
        let mut s = serde_json::to_string_pretty(&Envelope {
            manifest: &self.manifest,
            report,
        })?;
        s.push('\n');
        Ok(s)
    }

    /// A report as JSON, or its table as CSV.
    pub fn emit<T: Serialize>(&self, report: &T, columns: &[&str], rows: &[Vec<f64>]) -> anyhow::Result<()> {
        self.emit_strings(report, columns, &stringify(rows))
    }

    pub fn emit_strings<T: Serialize>(&self, report: &T, columns: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
        match self.format.unwrap_or(Format::Json) {
            Format::Json => self.write(&self.json(report)?),
            Format::Csv => self.write(&self.csv(columns, rows)?),
        }
    }

    /// A numeric table; CSV unless JSON was requested.
    pub fn emit_table(&self, columns: &[&str], rows: &[Vec<f64>]) -> anyhow::Result<()> {
        match self.format.unwrap_or(Format::Csv) {
            Format::Json => self.write(&self.json(&Table { columns, rows })?),
            Format::Csv => self.write(&self.csv(columns, rows)?),
        }
    }

    /// Always JSON.
    pub fn emit_json<T: Serialize>(&self, report: &T) -> anyhow::Result<()> {
        self.write(&self.json(report)?)
    }

    /// Text written verbatim.
    pub fn emit_raw(&self, text: &str) -> anyhow::Result<()> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        self.write(&text)
    }
}

fn stringify(rows: &[Vec<f64>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}
