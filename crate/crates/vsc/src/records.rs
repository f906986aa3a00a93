//! Line-delimited result records.
//!
//! Every cross-validation or sweep outcome serializes to one JSON object
//! per line with a fixed field order and schema version. Floats use
//! shortest round-trip formatting, so re-reading a record reproduces the
//! original values bit for bit, and identical runs produce byte-identical
//! files.

use serde::{Deserialize, Serialize};

use crate::error::{Result, VscError};
use crate::eval::{CvResult, ScaleMode, SweepGrid};

/// Version stamped into every record.
pub const SCHEMA_VERSION: u32 = 1;

/// Sweep-specific fields attached to a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepInfo {
    pub k: usize,
    pub lambda: f64,
    pub normalized_mean_f1: f64,
    /// What the normalization reference was.
    pub reference: String,
}

/// One serialized result: a cross-validation run, optionally tagged as a
/// sweep grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub schema_version: u32,
    /// `"cv"` or `"sweep"`.
    pub kind: String,
    pub classifier_id: String,
    pub dataset_id: String,
    pub dataset_source: String,
    pub n_folds: usize,
    pub seed: u64,
    pub scale_mode: ScaleMode,
    pub params: Vec<(String, String)>,
    pub fold_f1: Vec<f64>,
    pub mean_f1: f64,
    pub std_f1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepInfo>,
}

impl Record {
    /// Wraps a cross-validation result.
    pub fn from_cv(result: &CvResult) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: "cv".into(),
            classifier_id: result.classifier_id.clone(),
            dataset_id: result.dataset_id.clone(),
            dataset_source: result.dataset_source.clone(),
            n_folds: result.n_folds,
            seed: result.seed,
            scale_mode: result.scale_mode,
            params: result.params.clone(),
            fold_f1: result.fold_f1.clone(),
            mean_f1: result.mean_f1,
            std_f1: result.std_f1,
            sweep: None,
        }
    }

    /// One record per grid point, in grid order.
    pub fn from_sweep(grid: &SweepGrid) -> Vec<Self> {
        grid.points
            .iter()
            .map(|p| {
                let mut r = Self::from_cv(&p.result);
                r.kind = "sweep".into();
                r.sweep = Some(SweepInfo {
                    k: p.k,
                    lambda: p.lambda,
                    normalized_mean_f1: p.normalized_mean_f1,
                    reference: grid.reference.clone(),
                });
                r
            })
            .collect()
    }

    /// Serializes to one JSON line (no trailing newline).
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }
}

/// Serializes records as newline-delimited JSON.
pub fn write_records(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_json_line());
        out.push('\n');
    }
    out
}

/// Parses newline-delimited JSON records, validating the schema version
/// and the kind/sweep-field consistency. Blank lines are ignored; errors
/// carry 1-based line numbers.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(line).map_err(|e| VscError::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        if record.schema_version != SCHEMA_VERSION {
            return Err(VscError::Parse {
                line: line_no,
                msg: format!(
                    "unsupported schema version {} (expected {SCHEMA_VERSION})",
                    record.schema_version
                ),
            });
        }
        match (record.kind.as_str(), record.sweep.is_some()) {
            ("cv", false) | ("sweep", true) => {}
            ("cv", true) => {
                return Err(VscError::Parse {
                    line: line_no,
                    msg: "cv record carries sweep fields".into(),
                })
            }
            ("sweep", false) => {
                return Err(VscError::Parse {
                    line: line_no,
                    msg: "sweep record is missing sweep fields".into(),
                })
            }
            (other, _) => {
                return Err(VscError::Parse {
                    line: line_no,
                    msg: format!("unknown record kind '{other}'"),
                })
            }
        }
        records.push(record);
    }
    Ok(records)
}

/// Converts a record back into the runtime result type.
pub fn to_cv_result(record: &Record) -> CvResult {
    CvResult {
        classifier_id: record.classifier_id.clone(),
        params: record.params.clone(),
        dataset_id: record.dataset_id.clone(),
        dataset_source: record.dataset_source.clone(),
        n_folds: record.n_folds,
        seed: record.seed,
        scale_mode: record.scale_mode,
        fold_f1: record.fold_f1.clone(),
        mean_f1: record.mean_f1,
        std_f1: record.std_f1,
    }
}

/// CSV rendering of records: one row per record, fold scores joined with
/// `|` in the last column. Sweep-only columns are empty for cv records.
pub fn records_to_csv(records: &[Record]) -> String {
    let mut out = String::from(
        "kind,classifier_id,dataset_id,dataset_source,n_folds,seed,scale_mode,\
         k,lambda,normalized_mean_f1,reference,mean_f1,std_f1,fold_f1\n",
    );
    for r in records {
        let (k, lambda, norm, reference) = match &r.sweep {
            Some(s) => (
                s.k.to_string(),
                format!("{}", s.lambda),
                format!("{}", s.normalized_mean_f1),
                s.reference.clone(),
            ),
            None => (String::new(), String::new(), String::new(), String::new()),
        };
        let folds: Vec<String> = r.fold_f1.iter().map(|f| format!("{f}")).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.kind,
            r.classifier_id,
            r.dataset_id,
            r.dataset_source,
            r.n_folds,
            r.seed,
            r.scale_mode.as_str(),
            k,
            lambda,
            norm,
            reference,
            r.mean_f1,
            r.std_f1,
            folds.join("|"),
        ));
    }
    out
}
