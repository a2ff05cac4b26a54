//! n-dimensional fuzzy sets over a finite, ordered universe.

use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ndim_negation::NDimNegation;
use crate::simplex::{format_significant, NDInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetFormat {
    Csv,
    Json,
}

impl SetFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => SetFormat::Json,
            _ => SetFormat::Csv,
        }
    }
}

/// Labels in insertion order, each with a membership in `L_n([0,1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct NDFuzzySet {
    dim: usize,
    members: IndexMap<String, NDInterval<f64>>,
}

#[derive(Serialize, Deserialize)]
struct JsonSet {
    dim: usize,
    elements: IndexMap<String, Vec<f64>>,
}

impl NDFuzzySet {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("fuzzy set dimension must be at least 1".into()));
        }
        Ok(Self { dim, members: IndexMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&NDInterval<f64>> {
        self.members.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &NDInterval<f64>)> {
        self.members.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn insert(&mut self, label: impl Into<String>, mu: NDInterval<f64>) -> Result<()> {
        let label = label.into();
        if mu.dim() != self.dim {
            return Err(Error::Argument(format!(
                "membership of '{label}' has dimension {}, set has {}",
                mu.dim(),
                self.dim
            )));
        }
        if self.members.contains_key(&label) {
            return Err(Error::Argument(format!("duplicate element '{label}'")));
        }
        self.members.insert(label, mu);
        Ok(())
    }

    pub fn load(path: &Path, format: SetFormat) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        match format {
            SetFormat::Csv => Self::from_csv(&text),
            SetFormat::Json => Self::from_json(&text),
        }
    }

    pub fn save(&self, path: &Path, format: SetFormat) -> Result<()> {
        let text = match format {
            SetFormat::Csv => self.to_csv(),
            SetFormat::Json => self.to_json(),
        };
        fs::write(path, text)?;
        Ok(())
    }

    /// Parses `element,mu1,…,mun` rows. Every bad row is reported, numbered
    /// from 1 for the first data row after the header.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut records = reader.records();
        let header = match records.next() {
            None => return Err(Error::Ingestion(vec!["missing header 'element,mu1,…,mun'".into()])),
            Some(r) => r.map_err(|e| Error::Ingestion(vec![format!("header: {e}")]))?,
        };
        let dim = header.len().saturating_sub(1);
        let header_ok = header.get(0) == Some("element")
            && (1..=dim).all(|i| header.get(i) == Some(format!("mu{i}").as_str()));
        if dim == 0 || !header_ok {
            return Err(Error::Ingestion(vec![format!(
                "header must be 'element,mu1,…,mun', got '{}'",
                header.iter().collect::<Vec<_>>().join(",")
            )]));
        }
        let mut set = Self::new(dim)?;
        let mut errors = Vec::new();
        for (row, record) in records.enumerate() {
            let row = row + 1;
            let record = match record {
                Ok(r) => r,
                Err(e) => {
                    errors.push(format!("row {row}: {e}"));
                    continue;
                }
            };
            if record.len() == 1 && record.get(0) == Some("") {
                continue;
            }
            if record.len() != dim + 1 {
                errors.push(format!("row {row}: expected {} fields, found {}", dim + 1, record.len()));
                continue;
            }
            let label = record.get(0).unwrap_or_default().to_string();
            let values: std::result::Result<Vec<f64>, _> = record.iter().skip(1).map(str::parse::<f64>).collect();
            let values = match values {
                Ok(v) => v,
                Err(e) => {
                    errors.push(format!("row {row} ('{label}'): {e}"));
                    continue;
                }
            };
            if let Err(e) = Self::admit(&mut set, label.clone(), values) {
                errors.push(format!("row {row} ('{label}'): {e}"));
            }
        }
        if errors.is_empty() {
            Ok(set)
        } else {
            Err(Error::Ingestion(errors))
        }
    }

    /// Parses `{"dim": n, "elements": {"label": [..], …}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: JsonSet = serde_json::from_str(text).map_err(|e| Error::Ingestion(vec![e.to_string()]))?;
        let mut set = Self::new(raw.dim).map_err(|e| Error::Ingestion(vec![e.to_string()]))?;
        let mut errors = Vec::new();
        for (row, (label, values)) in raw.elements.into_iter().enumerate() {
            if values.len() != raw.dim {
                errors.push(format!("element {} ('{label}'): expected {} values, found {}", row + 1, raw.dim, values.len()));
                continue;
            }
            if let Err(e) = Self::admit(&mut set, label.clone(), values) {
                errors.push(format!("element {} ('{label}'): {e}", row + 1));
            }
        }
        if errors.is_empty() {
            Ok(set)
        } else {
            Err(Error::Ingestion(errors))
        }
    }

    fn admit(set: &mut Self, label: String, values: Vec<f64>) -> Result<()> {
        if label.is_empty() {
            return Err(Error::Argument("empty element label".into()));
        }
        set.insert(label, NDInterval::new(values)?)
    }

    /// CSV with the shortest representation that parses back bit-exactly.
    pub fn to_csv(&self) -> String {
        self.write_csv(|v| v.to_string())
    }

    /// CSV with `digits` significant digits per membership value.
    pub fn to_csv_digits(&self, digits: usize) -> String {
        self.write_csv(|v| format_significant(v, digits))
    }

    fn write_csv(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["element".to_string()];
        header.extend((1..=self.dim).map(|i| format!("mu{i}")));
        w.write_record(&header).expect("in-memory write");
        for (label, mu) in &self.members {
            let mut row = vec![label.clone()];
            row.extend(mu.values().iter().map(|v| fmt(*v)));
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_json(&self) -> String {
        let raw = JsonSet {
            dim: self.dim,
            elements: self.members.iter().map(|(k, v)| (k.clone(), v.unpack())).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("sets serialize")
    }

    /// Pointwise image of every membership under `neg`.
    pub fn complement(&self, neg: &NDimNegation) -> Result<Self> {
        if neg.dim() != self.dim {
            return Err(Error::Argument(format!(
                "negation has dimension {}, set has {}",
                neg.dim(),
                self.dim
            )));
        }
        let members = self
            .members
            .iter()
            .map(|(k, v)| Ok((k.clone(), neg.eval(v)?)))
            .collect::<Result<_>>()?;
        Ok(Self { dim: self.dim, members })
    }

    /// Largest componentwise distance between two sets over the same labels.
    pub fn max_distance(&self, other: &Self) -> Option<f64> {
        if self.dim != other.dim || self.len() != other.len() {
            return None;
        }
        self.members.iter().try_fold(0.0f64, |acc, (k, a)| {
            let b = other.members.get(k)?;
            Some(a.values().iter().zip(b.values()).fold(acc, |m, (x, y)| m.max((x - y).abs())))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ndim_automorphism::NDimAutomorphism;
    use crate::unit_automorphism::UnitAutomorphism;

    #[test]
    fn csv_rows_load() {
        let s = NDFuzzySet::from_csv("element,mu1,mu2,mu3\ne1,0.1,0.4,0.9\n").unwrap();
        assert_eq!(s.get("e1").unwrap().values(), &[0.1, 0.4, 0.9]);
    }

    #[test]
    fn ordering_violations_name_the_row() {
        let err = NDFuzzySet::from_csv("element,mu1,mu2,mu3\ne1,0.1,0.4,0.9\ne2,0.5,0.3,0.9\ne3,0,0,2\n").unwrap_err();
        let Error::Ingestion(rows) = err else { panic!("{err:?}") };
        assert_eq!(rows.len(), 2);
        assert!(rows[0].starts_with("row 2"));
        assert!(rows[1].starts_with("row 3"));
    }

    #[test]
    fn header_only_gives_empty_set() {
        let s = NDFuzzySet::from_csv("element,mu1,mu2\n").unwrap();
        assert!(s.is_empty());
        assert_eq!(s.dim(), 2);
        assert!(NDFuzzySet::from_csv("").is_err());
    }

    #[test]
    fn formats_round_trip() {
        let s = NDFuzzySet::from_csv("element,mu1,mu2\na,0.1,0.30000000000000004\nb,0,1\n").unwrap();
        assert_eq!(NDFuzzySet::from_csv(&s.to_csv()).unwrap(), s);
        assert_eq!(NDFuzzySet::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn strong_double_complement_restores() {
        let s = NDFuzzySet::from_csv("element,mu1,mu2,mu3\na,0.1,0.4,0.9\nb,0.2,0.2,0.3\n").unwrap();
        let phi = NDimAutomorphism::from_unit(UnitAutomorphism::power(3.0).unwrap(), 3).unwrap();
        let neg = NDimNegation::strong_from_auto(phi).unwrap();
        let back = s.complement(&neg).unwrap().complement(&neg).unwrap();
        assert!(back.max_distance(&s).unwrap() <= 1e-9);
        assert!(s.complement(&NDimNegation::standard(2).unwrap()).is_err());
    }
}
