//! Per-check report records and their CSV / JSON-lines serialization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One verification record: identity, parameter draw, residual vs tolerance.
/// `pass` holds exactly when `residual <= tolerance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity_id: String,
    /// Traceability anchor of the identity being checked.
    pub anchor: String,
    pub seed: u64,
    /// Compact rendering of the sampled parameters.
    pub params: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub n_used: usize,
    /// Wall-clock milliseconds (JSON report only; the CSV column is pinned
    /// to 0 so reruns are byte-identical).
    pub runtime_ms: u64,
}

impl ResidualReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        identity_id: impl Into<String>,
        anchor: impl Into<String>,
        seed: u64,
        params: impl Into<String>,
        residual: f64,
        tolerance: f64,
        n_used: usize,
        runtime_ms: u64,
    ) -> Self {
        ResidualReport {
            identity_id: identity_id.into(),
            anchor: anchor.into(),
            seed,
            params: params.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            n_used,
            runtime_ms,
        }
    }
}

/// CSV table with the fixed header
/// `identity_id,seed,residual,tolerance,pass,N,runtime_ms`.
///
/// The runtime column is written as 0: wall-clock times are not reproducible
/// and identical configurations must produce byte-identical tables.
pub fn csv_string(records: &[ResidualReport]) -> String {
    let mut out = String::from("identity_id,seed,residual,tolerance,pass,N,runtime_ms\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},0\n",
            r.identity_id, r.seed, r.residual, r.tolerance, r.pass, r.n_used
        ));
    }
    out
}

/// JSON-lines report: one object per record, fields exactly as the type.
pub fn jsonl_string(records: &[ResidualReport]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Io {
            path: "<report>".into(),
            message: e.to_string(),
        })?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_report_files(records: &[ResidualReport], dir: &std::path::Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let csv_path = dir.join("residuals.csv");
    std::fs::write(&csv_path, csv_string(records)).map_err(|e| Error::Io {
        path: csv_path.display().to_string(),
        message: e.to_string(),
    })?;
    let jsonl_path = dir.join("report.jsonl");
    std::fs::write(&jsonl_path, jsonl_string(records)?).map_err(|e| Error::Io {
        path: jsonl_path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_record_list_gives_header_only() {
        let s = csv_string(&[]);
        assert_eq!(s, "identity_id,seed,residual,tolerance,pass,N,runtime_ms\n");
    }

    #[test]
    fn three_records_give_three_lines() {
        let recs: Vec<ResidualReport> = (0..3)
            .map(|i| ResidualReport::new(format!("id{}", i), "Eq. (x)", 7, "", 1e-9, 1e-8, 128, 12))
            .collect();
        let s = csv_string(&recs);
        assert_eq!(s.lines().count(), 4);
        assert!(s.lines().nth(1).unwrap().starts_with("id0,7,"));
    }

    #[test]
    fn pass_flag_tracks_tolerance() {
        let r = ResidualReport::new("x", "a", 0, "", 2e-8, 1e-8, 64, 0);
        assert!(!r.pass);
        let r = ResidualReport::new("x", "a", 0, "", 2e-9, 1e-8, 64, 0);
        assert!(r.pass);
    }

    #[test]
    fn csv_excludes_wall_clock() {
        let a = ResidualReport::new("x", "a", 0, "", 1e-9, 1e-8, 64, 17);
        let b = ResidualReport::new("x", "a", 0, "", 1e-9, 1e-8, 64, 29);
        assert_eq!(csv_string(&[a]), csv_string(&[b]));
    }
}
