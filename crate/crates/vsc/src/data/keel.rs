//! Parser for the KEEL attribute-header dataset format.
//!
//! The format starts with `@relation`, declares attributes with
//! `@attribute name domain`, optionally lists `@inputs`/`@outputs`, and
//! carries comma-separated rows after `@data`. Numeric attributes (`real`
//! or `integer`, with or without a range) become features; a nominal
//! attribute may only appear as the output. Rows containing missing
//! values (`?`) are rejected.

use crate::data::Dataset;
use crate::error::{Result, VscError};
use crate::linalg::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq)]
enum Domain {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Debug)]
struct Attribute {
    name: String,
    domain: Domain,
    line: usize,
}

fn parse_err(line: usize, msg: impl Into<String>) -> VscError {
    VscError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_attribute(line_no: usize, rest: &str) -> Result<Attribute> {
    let rest = rest.trim();
    let (name, spec) = match rest.find(|c: char| c.is_whitespace() || c == '{') {
        Some(pos) => (&rest[..pos], rest[pos..].trim_start()),
        None => (rest, ""),
    };
    if name.is_empty() {
        return Err(parse_err(line_no, "attribute declaration without a name"));
    }
    let domain = if let Some(body) = spec.strip_prefix('{') {
        let body = body
            .strip_suffix('}')
            .ok_or_else(|| parse_err(line_no, "unterminated nominal domain"))?;
        let values: Vec<String> = body
            .split(',')
            .map(|v| v.trim().to_string())
            .filter(|v| !v.is_empty())
            .collect();
        if values.is_empty() {
            return Err(parse_err(line_no, "empty nominal domain"));
        }
        Domain::Nominal(values)
    } else {
        let kind = spec
            .split_whitespace()
            .next()
            .unwrap_or("real")
            .to_ascii_lowercase();
        match kind.as_str() {
            "real" | "integer" | "numeric" => Domain::Numeric,
            other => {
                return Err(parse_err(
                    line_no,
                    format!("unsupported attribute type '{other}'"),
                ))
            }
        }
    };
    Ok(Attribute {
        name: name.to_string(),
        domain,
        line: line_no,
    })
}

fn split_name_list(rest: &str) -> Vec<String> {
    rest.split(',')
        .flat_map(|chunk| chunk.split_whitespace())
        .map(str::to_string)
        .collect()
}

/// Parses KEEL-formatted text into a [`Dataset`].
///
/// `positive_class` overrides which output value maps to `+1`; when it is
/// `None`, the first value of the output attribute's nominal domain (or,
/// for a non-nominal output, the first data row's label) is used.
pub fn parse_keel(text: &str, positive_class: Option<&str>) -> Result<Dataset> {
    let mut relation = String::from("keel");
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut inputs: Option<(Vec<String>, usize)> = None;
    let mut outputs: Option<(Vec<String>, usize)> = None;
    let mut data_rows: Vec<(usize, Vec<String>)> = Vec::new();
    let mut in_data = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if in_data {
            let cells: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
            data_rows.push((line_no, cells));
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if let Some(rest) = line.get(9..).filter(|_| lower.starts_with("@relation")) {
            relation = rest.trim().to_string();
        } else if let Some(rest) = line.get(10..).filter(|_| lower.starts_with("@attribute")) {
            attributes.push(parse_attribute(line_no, rest)?);
        } else if let Some(rest) = line.get(7..).filter(|_| lower.starts_with("@inputs")) {
            inputs = Some((split_name_list(rest), line_no));
        } else if let Some(rest) = line.get(8..).filter(|_| lower.starts_with("@outputs")) {
            outputs = Some((split_name_list(rest), line_no));
        } else if lower.starts_with("@data") {
            in_data = true;
        } else {
            return Err(parse_err(line_no, format!("unrecognized directive '{line}'")));
        }
    }

    if !in_data {
        return Err(parse_err(last_line, "missing @data section"));
    }
    if attributes.is_empty() {
        return Err(parse_err(last_line, "no @attribute declarations"));
    }

    let find = |name: &str, line: usize| -> Result<usize> {
        attributes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| parse_err(line, format!("unknown attribute '{name}'")))
    };

    let output_idx = match &outputs {
        Some((names, line)) => {
            if names.len() != 1 {
                return Err(parse_err(*line, "exactly one output attribute is required"));
            }
            find(&names[0], *line)?
        }
        None => attributes.len() - 1,
    };
    let input_idx: Vec<usize> = match &inputs {
        Some((names, line)) => names
            .iter()
            .map(|n| find(n, *line))
            .collect::<Result<_>>()?,
        None => (0..attributes.len()).filter(|&i| i != output_idx).collect(),
    };
    if input_idx.is_empty() {
        return Err(parse_err(last_line, "no input attributes"));
    }
    if input_idx.contains(&output_idx) {
        return Err(parse_err(
            last_line,
            "output attribute also listed as an input",
        ));
    }
    for &i in &input_idx {
        if let Domain::Nominal(_) = attributes[i].domain {
            return Err(VscError::Categorical(attributes[i].name.clone()));
        }
    }
    if data_rows.is_empty() {
        return Err(parse_err(last_line, "no data rows"));
    }

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(data_rows.len());
    let mut labels: Vec<String> = Vec::with_capacity(data_rows.len());
    for (line_no, cells) in &data_rows {
        if cells.len() != attributes.len() {
            return Err(parse_err(
                *line_no,
                format!(
                    "row has {} values, expected {}",
                    cells.len(),
                    attributes.len()
                ),
            ));
        }
        if cells.iter().any(|c| c == "?") {
            return Err(parse_err(*line_no, "missing value '?'"));
        }
        let mut row = Vec::with_capacity(input_idx.len());
        for &i in &input_idx {
            let cell = &cells[i];
            let v: f64 = cell.parse().map_err(|_| {
                parse_err(
                    *line_no,
                    format!("attribute '{}': invalid number '{cell}'", attributes[i].name),
                )
            })?;
            if !v.is_finite() {
                return Err(parse_err(
                    *line_no,
                    format!("attribute '{}': non-finite value", attributes[i].name),
                ));
            }
            row.push(v);
        }
        rows.push(row);
        labels.push(cells[output_idx].clone());
    }

    let positive = match positive_class {
        Some(p) => p.to_string(),
        None => match &attributes[output_idx].domain {
            Domain::Nominal(values) => values[0].clone(),
            Domain::Numeric => labels[0].clone(),
        },
    };
    if let Domain::Nominal(values) = &attributes[output_idx].domain {
        if !values.contains(&positive) {
            return Err(VscError::Parameter(format!(
                "positive class '{positive}' is not in the domain of '{}' (declared on line {})",
                attributes[output_idx].name, attributes[output_idx].line
            )));
        }
    }
    if !labels.iter().any(|l| l == &positive) {
        return Err(VscError::Parameter(format!(
            "positive class '{positive}' does not occur in the data"
        )));
    }
    let negative = labels
        .iter()
        .find(|l| **l != positive)
        .cloned()
        .unwrap_or_else(|| format!("not-{positive}"));

    let y = Vector::new(
        labels
            .iter()
            .map(|l| if *l == positive { 1.0 } else { -1.0 })
            .collect(),
    )?;
    let x = Matrix::from_rows(&rows)?;
    let feature_names = input_idx
        .iter()
        .map(|&i| attributes[i].name.clone())
        .collect();
    Dataset::new(x, y, feature_names, positive, negative, relation)
}
