//! CSV dataset ingestion and export. Comma-separated, mandatory header
//! row, decimal point, exactly two distinct label values.

use std::io::Write;
use std::path::Path;

use crate::error::{FusionError, Result};
use crate::types::{ClassLabel, Dataset, Sample};

/// Label column selector: by header name or positional index.
#[derive(Debug, Clone)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

pub fn ingest_csv(path: &Path, label_column: &LabelColumn, positive_label: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| FusionError::Ingest(format!("{}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| FusionError::Ingest(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let label_idx = match label_column {
        LabelColumn::Index(i) if *i < headers.len() => *i,
        LabelColumn::Index(i) => {
            return Err(FusionError::Ingest(format!(
                "label column index {i} out of range for {} columns",
                headers.len()
            )))
        }
        LabelColumn::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| FusionError::Ingest(format!("label column `{name}` not found")))?,
    };
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut samples = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record.map_err(|e| FusionError::Ingest(format!("row {}: {e}", row_no + 2)))?;
        if record.len() != headers.len() {
            return Err(FusionError::Ingest(format!(
                "row {}: expected {} fields, got {}",
                row_no + 2,
                headers.len(),
                record.len()
            )));
        }
        let mut features = Vec::with_capacity(headers.len() - 1);
        for (col, field) in record.iter().enumerate() {
            if col == label_idx {
                raw_labels.push(field.to_string());
                continue;
            }
            let value: f64 = field.trim().parse().map_err(|_| {
                FusionError::Ingest(format!(
                    "row {}: non-numeric feature cell `{field}` in column `{}`",
                    row_no + 2,
                    headers[col]
                ))
            })?;
            if !value.is_finite() {
                return Err(FusionError::Ingest(format!(
                    "row {}: non-finite feature value in column `{}`",
                    row_no + 2,
                    headers[col]
                )));
            }
            features.push(value);
        }
        samples.push(Sample::new(features));
    }

    let mut distinct: Vec<&String> = Vec::new();
    for l in &raw_labels {
        if !distinct.contains(&l) {
            distinct.push(l);
        }
        if distinct.len() > 2 {
            return Err(FusionError::Ingest(format!(
                "more than two distinct label values: {distinct:?}"
            )));
        }
    }
    if !distinct.iter().any(|l| l.as_str() == positive_label) {
        return Err(FusionError::Ingest(format!(
            "positive label `{positive_label}` never occurs (saw {distinct:?})"
        )));
    }
    let labels: Vec<ClassLabel> = raw_labels
        .iter()
        .map(|l| if l == positive_label { ClassLabel::Omega2 } else { ClassLabel::Omega1 })
        .collect();

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    let mut d = Dataset::new(name, samples, labels)?;
    d.feature_names = Some(feature_names);
    Ok(d)
}

/// Writes a dataset with one `label` column holding `omega1`/`omega2`.
/// Feature values use shortest round-trip formatting, so re-ingestion
/// reproduces the dataset exactly.
pub fn export_csv(dataset: &Dataset, writer: &mut dyn Write) -> std::io::Result<()> {
    let names: Vec<String> = match &dataset.feature_names {
        Some(n) => n.clone(),
        None => (0..dataset.dimension()).map(|i| format!("f{i}")).collect(),
    };
    writeln!(writer, "{},label", names.join(","))?;
    for (sample, label) in dataset.samples.iter().zip(&dataset.labels) {
        let fields: Vec<String> = sample.features.iter().map(|v| format!("{v}")).collect();
        let tag = match label {
            ClassLabel::Omega1 => "omega1",
            ClassLabel::Omega2 => "omega2",
        };
        writeln!(writer, "{},{tag}", fields.join(","))?;
    }
    Ok(())
}
