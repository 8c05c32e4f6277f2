//! Dataset CSV format: header `id,label,f0,...,f{d-1}`, labels 0 (normal),
//! 1 (anomalous) or -1 (unknown), floats written with 17 significant digits.

use std::io::Write;
use std::path::Path;

use purifier_core::{Dataset, Label, Role, Sample};

use crate::{HarnessError, Result};

fn header(dim: usize) -> Vec<String> {
    let mut h = vec!["id".to_string(), "label".to_string()];
    h.extend((0..dim).map(|j| format!("f{j}")));
    h
}

/// Serialises `dataset` to CSV text with LF line endings.
pub fn to_csv_string(dataset: &Dataset) -> String {
    let mut out = header(dataset.dim()).join(",");
    out.push('\n');
    for s in dataset.samples() {
        out.push_str(&s.id.to_string());
        out.push(',');
        out.push_str(&s.label.code().to_string());
        for v in &s.features {
            out.push(',');
            out.push_str(&format!("{v:.16e}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    file.write_all(to_csv_string(dataset).as_bytes())
        .map_err(|e| HarnessError::io(path, e))
}

pub fn read_dataset(path: &Path, role: Role) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_dataset(&text, role).map_err(|m| HarnessError::config(path, m))
}

pub fn parse_dataset(text: &str, role: Role) -> std::result::Result<Dataset, String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let head = reader.headers().map_err(|e| format!("line 1: {e}"))?.clone();
    let dim = head.len().saturating_sub(2);
    let expected = header(dim);
    if dim == 0 || head.iter().ne(expected.iter().map(String::as_str)) {
        return Err(format!(
            "line 1: header must be `id,label,f0,...`, got `{}`",
            head.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| match e.position() {
            Some(p) => format!("line {}: {e}", p.line()),
            None => e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let id: u64 = record[0]
            .trim()
            .parse()
            .map_err(|_| format!("line {line}, field `id`: {:?} is not an unsigned integer", &record[0]))?;
        let label = record[1]
            .trim()
            .parse::<i8>()
            .ok()
            .and_then(Label::from_code)
            .ok_or_else(|| format!("line {line}, field `label`: {:?} is not one of 0, 1, -1", &record[1]))?;
        let features = (0..dim)
            .map(|j| {
                let raw = record[j + 2].trim();
                raw.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("line {line}, field `f{j}`: {raw:?} is not a finite number"))
            })
            .collect::<std::result::Result<Vec<f64>, String>>()?;
        samples.push(Sample::new(id, features, label));
    }
    Dataset::new(samples, role).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_set() -> Dataset {
        Dataset::new(
            vec![
                Sample::new(0, vec![0.1, -2.5e-300], Label::Normal),
                Sample::new(4, vec![1.0 / 3.0, 12345.678], Label::Anomalous),
                Sample::new(9, vec![-0.0, f64::MAX], Label::Unknown),
            ],
            Role::Train,
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_value_identical() {
        let d = sample_set();
        let text = to_csv_string(&d);
        assert!(text.starts_with("id,label,f0,f1\n0,0,1.0000000000000001e-1,"));
        assert!(!text.contains('\r'));
        let back = parse_dataset(&text, Role::Train).unwrap();
        for (a, b) in d.samples().iter().zip(back.samples()) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.label, b.label);
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&a.features), bits(&b.features));
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_header = "id,lab,f0\n0,0,1.0\n";
        assert!(parse_dataset(bad_header, Role::Train).unwrap_err().contains("line 1"));
        let bad_label = "id,label,f0\n0,0,1.0\n1,7,2.0\n";
        let e = parse_dataset(bad_label, Role::Train).unwrap_err();
        assert!(e.contains("line 3") && e.contains("label"), "{e}");
        let bad_value = "id,label,f0\n0,0,nan\n";
        assert!(parse_dataset(bad_value, Role::Train).unwrap_err().contains("f0"));
        let ragged = "id,label,f0,f1\n0,0,1.0\n";
        assert!(parse_dataset(ragged, Role::Train).unwrap_err().contains("line 2"));
        let unsorted = "id,label,f0\n3,0,1.0\n1,0,1.0\n";
        assert!(parse_dataset(unsorted, Role::Train).is_err());
    }
}
