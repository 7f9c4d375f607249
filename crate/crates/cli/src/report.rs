//! CSV tables, summaries and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use bearingcap::CapacitanceUnit;
use thiserror::Error;

use crate::sweep::{unit_label, SweepReport};

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("cannot write {path}: {cause}")]
    Io { path: PathBuf, cause: std::io::Error },
    #[error("CSV encoding failed: {0}")]
    Csv(csv::Error),
}

impl From<csv::Error> for EmitError {
    fn from(e: csv::Error) -> Self {
        EmitError::Csv(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    /// A cell that could not be computed, with its cause.
    Failed(String),
    Empty,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(v) => format!("{v:.8e}"),
            Field::Int(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Failed(cause) => format!("failed: {cause}"),
            Field::Empty => String::new(),
        }
    }

    pub fn as_num(&self) -> Option<f64> {
        match self {
            Field::Num(v) => Some(*v),
            Field::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column by name; failed or empty cells come back as `None`.
    pub fn numbers(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.column(name)?;
        Some(self.rows.iter().map(|r| r[j].as_num()).collect())
    }

    pub fn to_csv(&self) -> Result<String, EmitError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::render))?;
        }
        let bytes = w.into_inner().map_err(|e| EmitError::Io {
            path: PathBuf::from("<memory>"),
            cause: std::io::Error::other(e.to_string()),
        })?;
        Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
    }
}

/// One gap per row: capacitances in pF/m or pF, then signed deviations
/// against the reference.
pub fn sweep_table(report: &SweepReport) -> Table {
    let mut columns = vec!["gap_um".to_string()];
    columns.extend(report.methods.iter().map(|m| format!("{}_{}", m.tag(), unit_label(*m))));
    let compared = report.compared();
    columns.extend(compared.iter().map(|m| format!("dev_{}_vs_{}", m.tag(), report.reference.tag())));
    let mut table = Table::new(columns);
    for (g, gap) in report.gaps_um.iter().enumerate() {
        let mut row = vec![Field::Num(*gap)];
        row.extend(report.cells[g].iter().map(|cell| match cell {
            Ok(r) => Field::Num(r.unit.to_pico(r.value)),
            Err(cause) => Field::Failed(cause.clone()),
        }));
        row.extend(compared.iter().map(|&m| match report.deviation(g, m) {
            Some(d) => Field::Num(d),
            None => Field::Failed("no value".into()),
        }));
        table.push(row);
    }
    table
}

pub fn sweep_summary(report: &SweepReport, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{title}");
    let _ = writeln!(
        s,
        "{} gaps in [{}, {}] um, reference {}, {} failed cells, wall time {:.3} s",
        report.gaps_um.len(),
        report.gaps_um.iter().copied().fold(f64::INFINITY, f64::min),
        report.gaps_um.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        report.reference,
        report.failures(),
        report.wall_time.as_secs_f64(),
    );
    let _ = writeln!(s, "{:<6} {:>8} {:>14} {:>14} {:>12} {:>12} {:>10}", "method", "unit", "dev min", "dev max", "max err", "work", "time s");
    for (j, &m) in report.methods.iter().enumerate() {
        let devs: Vec<f64> = (0..report.gaps_um.len()).filter_map(|g| report.deviation(g, m)).collect();
        let (lo, hi) = devs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| (a.min(d), b.max(d)));
        let ok: Vec<_> = report.cells.iter().filter_map(|row| row[j].as_ref().ok()).collect();
        let rel_err = ok.iter().map(|r| r.diagnostics.error_estimate / r.value).fold(0.0, f64::max);
        let work: usize = ok.iter().map(|r| r.diagnostics.work).sum();
        let unit = match m.unit() {
            CapacitanceUnit::PerLength => "pF/m",
            CapacitanceUnit::Absolute => "pF",
        };
        let dev = |v: f64| if devs.is_empty() { "-".to_string() } else { format!("{:+.4}%", 100.0 * v) };
        let _ = writeln!(
            s,
            "{:<6} {:>8} {:>14} {:>14} {:>12.3e} {:>12} {:>10.3}",
            m.tag(),
            unit,
            dev(lo),
            dev(hi),
            rel_err,
            work,
            report.method_time(j).as_secs_f64()
        );
    }
    for (g, row) in report.cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if let Err(cause) = cell {
                let _ = writeln!(s, "failed: gap {} um, {}: {}", report.gaps_um[g], report.methods[j], cause);
            }
        }
    }
    s
}

/// Writes to a sibling temporary file, then renames over the target.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), EmitError> {
    let io = |cause| EmitError::Io { path: path.to_path_buf(), cause };
    let name = path.file_name().ok_or_else(|| io(std::io::Error::other("path has no file name")))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)
}

/// A named output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, EmitError> {
    fs::create_dir_all(dir).map_err(|cause| EmitError::Io { path: dir.to_path_buf(), cause })?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.file_name);
            write_atomic(&path, &a.contents)?;
            Ok(path)
        })
        .collect()
}

/// `<stem>.csv` and `<stem>_summary.txt` for a sweep.
pub fn emit(report: &SweepReport, dir: &Path, stem: &str) -> Result<Vec<PathBuf>, EmitError> {
    let csv = sweep_table(report).to_csv()?;
    write_artifacts(
        dir,
        &[
            Artifact { file_name: format!("{stem}.csv"), contents: csv },
            Artifact { file_name: format!("{stem}_summary.txt"), contents: sweep_summary(report, stem) },
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use bearingcap::{CapacitanceResult, Method};
    use std::time::Duration;

    fn report() -> SweepReport {
        let ok = |m: Method, v: f64| Ok(CapacitanceResult::exact(m, v));
        SweepReport {
            gaps_um: vec![0.5, 1.0],
            methods: vec![Method::B, Method::E, Method::F],
            reference: Method::F,
            cells: vec![
                vec![ok(Method::B, 9e-10), ok(Method::E, 1e-11), ok(Method::F, 1e-9)],
                vec![Err("bad, \"quoted\"".into()), ok(Method::E, 2e-11), ok(Method::F, 2e-9)],
            ],
            timings: vec![vec![Duration::ZERO; 3]; 2],
            wall_time: Duration::ZERO,
        }
    }

    #[test]
    fn csv_layout() {
        let csv = sweep_table(&report()).to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "gap_um,B_pF_per_m,E_pF,F_pF_per_m,dev_B_vs_F");
        assert_eq!(lines[1], "5.00000000e-1,9.00000000e2,1.00000000e1,1.00000000e3,-1.00000000e-1");
        assert!(lines[2].starts_with("1.00000000e0,\"failed: bad, \"\"quoted\"\"\",2.00000000e1,"));
        assert!(lines[2].ends_with(",failed: no value"));
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(Field::Num(std::f64::consts::PI).render(), "3.14159265e0");
        assert_eq!(Field::Num(-1.0e-12).render(), "-1.00000000e-12");
    }

    #[test]
    fn summary_lists_failures() {
        let s = sweep_summary(&report(), "t");
        assert!(s.contains("1 failed cells"));
        assert!(s.contains("failed: gap 1 um, B"));
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn io_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("no/such/dir/x.csv");
        let err = write_atomic(&missing, "x").unwrap_err();
        assert!(err.to_string().contains("no/such/dir"));
    }
}
