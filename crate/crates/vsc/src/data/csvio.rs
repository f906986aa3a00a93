//! CSV reading and writing for datasets.
//!
//! The writer puts every feature column first (using the dataset's feature
//! names) and the class label last under the header `class`, so a written
//! file can be parsed back into an identical dataset.

use crate::data::Dataset;
use crate::error::{Result, VscError};
use crate::linalg::{Matrix, Vector};

/// Header name used for the label column by [`write_csv`].
pub const LABEL_COLUMN: &str = "class";

fn parse_err(line: usize, msg: impl Into<String>) -> VscError {
    VscError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses CSV text with a header row into a [`Dataset`].
///
/// `label_column` names the column holding class labels; every other
/// column must be numeric and becomes a feature. Rows whose label equals
/// `positive_label` map to `+1`, all others to `-1`.
pub fn parse_csv(text: &str, label_column: &str, positive_label: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(parse_err(1, "empty header row"));
    }
    let label_matches: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| h.as_str() == label_column)
        .map(|(i, _)| i)
        .collect();
    let label_idx = match label_matches.as_slice() {
        [i] => *i,
        [] => {
            return Err(parse_err(
                1,
                format!("label column '{label_column}' not found in header"),
            ))
        }
        _ => {
            return Err(parse_err(
                1,
                format!("label column '{label_column}' appears more than once"),
            ))
        }
    };
    let feature_idx: Vec<usize> = (0..headers.len()).filter(|&i| i != label_idx).collect();
    if feature_idx.is_empty() {
        return Err(parse_err(1, "no feature columns"));
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != headers.len() {
            return Err(parse_err(
                line,
                format!("row has {} values, expected {}", record.len(), headers.len()),
            ));
        }
        let mut row = Vec::with_capacity(feature_idx.len());
        for &i in &feature_idx {
            let cell = record[i].trim();
            let v: f64 = cell.parse().map_err(|_| {
                parse_err(
                    line,
                    format!("column '{}': invalid number '{cell}'", headers[i]),
                )
            })?;
            if !v.is_finite() {
                return Err(parse_err(
                    line,
                    format!("column '{}': non-finite value", headers[i]),
                ));
            }
            row.push(v);
        }
        rows.push(row);
        labels.push(record[label_idx].trim().to_string());
    }
    if rows.is_empty() {
        return Err(parse_err(1, "no data rows"));
    }
    if !labels.iter().any(|l| l == positive_label) {
        return Err(VscError::Parameter(format!(
            "positive class '{positive_label}' does not occur in column '{label_column}'"
        )));
    }
    let negative = labels
        .iter()
        .find(|l| l.as_str() != positive_label)
        .cloned()
        .unwrap_or_else(|| format!("not-{positive_label}"));

    let y = Vector::new(
        labels
            .iter()
            .map(|l| if l == positive_label { 1.0 } else { -1.0 })
            .collect(),
    )?;
    let x = Matrix::from_rows(&rows)?;
    let feature_names = feature_idx.iter().map(|&i| headers[i].clone()).collect();
    Dataset::new(x, y, feature_names, positive_label, negative, "csv")
}

/// Serializes a dataset to CSV: feature columns in order, then the label
/// column named [`LABEL_COLUMN`]. Floats use Rust's shortest round-trip
/// formatting, so parsing the output reproduces the values exactly.
pub fn write_csv(dataset: &Dataset) -> String {
    let mut out = String::new();
    for name in dataset.feature_names() {
        out.push_str(name);
        out.push(',');
    }
    out.push_str(LABEL_COLUMN);
    out.push('\n');
    for i in 0..dataset.n_samples() {
        for v in dataset.x().row(i) {
            out.push_str(&format!("{v}"));
            out.push(',');
        }
        let label = if dataset.y().get(i) == 1.0 {
            dataset.positive_class_name()
        } else {
            dataset.negative_class_name()
        };
        out.push_str(label);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::parse_keel;

    const SAMPLE: &str = "\
a,b,class
0.5,1.25,yes
-0.125,2.0,no
3.5,-1.0,yes
0.0,0.0,no
";

    #[test]
    fn parses_basic_csv() {
        let d = parse_csv(SAMPLE, "class", "yes").unwrap();
        assert_eq!(d.n_samples(), 4);
        assert_eq!(d.feature_names(), ["a", "b"]);
        assert_eq!(d.y().as_slice(), &[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(d.x().row(2), &[3.5, -1.0]);
        assert_eq!(d.negative_class_name(), "no");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = SAMPLE.replace("-0.125,2.0,no", "-0.125,huh,no");
        match parse_csv(&text, "class", "yes") {
            Err(VscError::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("huh"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        assert!(matches!(
            parse_csv(SAMPLE, "label", "yes"),
            Err(VscError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_csv(SAMPLE, "class", "maybe"),
            Err(VscError::Parameter(_))
        ));
    }

    #[test]
    fn rejects_ragged_rows() {
        let text = "a,b,class\n1.0,2.0,yes\n1.0,no\n";
        assert!(matches!(
            parse_csv(text, "class", "yes"),
            Err(VscError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn write_then_parse_round_trips() {
        let d = parse_csv(SAMPLE, "class", "yes").unwrap();
        let text = write_csv(&d);
        let back = parse_csv(&text, LABEL_COLUMN, d.positive_class_name()).unwrap();
        assert_eq!(back.x(), d.x());
        assert_eq!(back.y(), d.y());
        assert_eq!(back.feature_names(), d.feature_names());
        assert_eq!(back.positive_class_name(), d.positive_class_name());
        assert_eq!(back.negative_class_name(), d.negative_class_name());
        assert_eq!(back.fingerprint(), d.fingerprint());
    }

    #[test]
    fn keel_to_csv_round_trips() {
        let keel = "\
@relation t
@attribute u real
@attribute v real
@attribute Class {p, q}
@data
0.1, -2.5, p
1e-3, 4.25, q
7.0, 0.625, p
";
        let d = parse_keel(keel, None).unwrap();
        let text = write_csv(&d);
        let back = parse_csv(&text, LABEL_COLUMN, "p").unwrap();
        assert_eq!(back.x(), d.x());
        assert_eq!(back.y(), d.y());
        assert_eq!(back.feature_names(), d.feature_names());
        assert_eq!(back.fingerprint(), d.fingerprint());
    }
}
