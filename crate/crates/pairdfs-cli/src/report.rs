//! Verdicts, the run report, and the CSV trace writer.

use std::io::Write;
use std::path::{Path, PathBuf};

use pairdfs::dynamics::EvolutionTrace;

use crate::CliError;

/// How a measured value is compared against the expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// |measured - expected| <= tolerance.
    AbsErr,
    /// measured <= expected + tolerance.
    AtMost,
    /// measured >= expected - tolerance.
    AtLeast,
}

impl Check {
    fn label(&self) -> &'static str {
        match self {
            Check::AbsErr => "abs-err",
            Check::AtMost => "at-most",
            Check::AtLeast => "at-least",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: String,
    pub check: Check,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(
        name: impl Into<String>,
        check: Check,
        measured: f64,
        expected: f64,
        tolerance: f64,
        tol_scale: f64,
    ) -> Self {
        let tolerance = tolerance * tol_scale;
        let pass = match check {
            Check::AbsErr => (measured - expected).abs() <= tolerance,
            Check::AtMost => measured <= expected + tolerance,
            Check::AtLeast => measured >= expected - tolerance,
        };
        Self {
            name: name.into(),
            check,
            measured,
            expected,
            tolerance,
            pass,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub seed: Option<u64>,
    pub tol_scale: f64,
    /// Effective configuration after defaults, serialized for reproduction.
    pub config_echo: String,
    pub verdicts: Vec<Verdict>,
    pub csv_paths: Vec<PathBuf>,
    pub wall_seconds: f64,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Deterministic rendering (no wall time) written to report.txt.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario: {}\n", self.scenario));
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        if self.tol_scale != 1.0 {
            out.push_str(&format!(
                "tolerance scale: {} (DEBUG ONLY: verdict tolerances are scaled)\n",
                self.tol_scale
            ));
        }
        out.push_str(&format!(
            "status: {}\n",
            if self.all_pass() { "PASS" } else { "FAIL" }
        ));
        out.push_str("verdicts:\n");
        for v in &self.verdicts {
            out.push_str(&format!(
                "  [{}] {}: measured={:.9e} expected={:.9e} tolerance={:.3e} ({})\n",
                if v.pass { "PASS" } else { "FAIL" },
                v.name,
                v.measured,
                v.expected,
                v.tolerance,
                v.check.label(),
            ));
            if let Some(note) = &v.note {
                out.push_str(&format!("        note: {note}\n"));
            }
        }
        if !self.csv_paths.is_empty() {
            out.push_str("csv:\n");
            for p in &self.csv_paths {
                // File names only: the rendering must not depend on where
                // the output directory happens to live.
                let name = p
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| p.display().to_string());
                out.push_str(&format!("  {name}\n"));
            }
        }
        out.push_str("configuration (defaults applied):\n");
        for line in self.config_echo.lines() {
            out.push_str(&format!("  {line}\n"));
        }
        out
    }

    pub fn write_report_txt(&self, out_dir: &Path) -> Result<PathBuf, CliError> {
        let path = out_dir.join("report.txt");
        std::fs::write(&path, self.render())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

fn format_full(v: f64) -> String {
    // 17 significant digits round-trip every f64.
    format!("{v:.16e}")
}

/// Write an evolution trace as CSV: fixed header, one row per time, full
/// double precision, newline-terminated.
pub fn write_trace_csv(trace: &EvolutionTrace, path: &Path) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    let io_err = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    writeln!(w, "time,fidelity,coherence,purity,leakage").map_err(io_err)?;
    for i in 0..trace.len() {
        writeln!(
            w,
            "{},{},{},{},{}",
            format_full(trace.times[i]),
            format_full(trace.fidelities[i]),
            format_full(trace.coherences[i]),
            format_full(trace.purities[i]),
            format_full(trace.leakages[i]),
        )
        .map_err(io_err)?;
    }
    Ok(())
}

/// Write a generic small table (header plus full-precision rows).
pub fn write_table_csv(header: &str, rows: &[Vec<f64>], path: &Path) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    let io_err = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    writeln!(w, "{header}").map_err(io_err)?;
    for row in rows {
        let line = row
            .iter()
            .map(|&v| format_full(v))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{line}").map_err(io_err)?;
    }
    Ok(())
}
