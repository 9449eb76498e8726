//! Labeled tabular datasets for training and evaluation.
//!
//! The on-disk format is CSV with a header row: every column but the last
//! holds a numeric attribute, the last column holds the class label. Class
//! names are collected from the data and sorted lexicographically, so class
//! indices — and therefore frame element order — depend only on the label
//! set, not on row order.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// An in-memory dataset: row-major attribute values plus one class index
/// per row.
#[derive(Debug, Clone)]
pub struct Dataset {
    attributes: Vec<String>,
    classes: Vec<String>,
    samples: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset from already-parsed parts. `labels` holds indices
    /// into `classes`.
    pub fn new(
        attributes: Vec<String>,
        classes: Vec<String>,
        samples: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        if attributes.is_empty() || classes.is_empty() || samples.is_empty() {
            return Err(Error::DatasetShape);
        }
        if samples.len() != labels.len() {
            return Err(Error::DatasetShape);
        }
        for (row, values) in samples.iter().enumerate() {
            if values.len() != attributes.len() {
                return Err(Error::Dataset {
                    row,
                    message: format!(
                        "expected {} attribute values, got {}",
                        attributes.len(),
                        values.len()
                    ),
                });
            }
            if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::Dataset {
                    row,
                    message: format!("attribute value {bad} is not finite"),
                });
            }
        }
        if let Some((row, _)) = labels
            .iter()
            .enumerate()
            .find(|(_, &label)| label >= classes.len())
        {
            return Err(Error::Dataset {
                row,
                message: "label index out of range".into(),
            });
        }
        Ok(Dataset {
            attributes,
            classes,
            samples,
            labels,
        })
    }

    /// Reads a CSV file: header row, numeric attribute columns, label last.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file)
    }

    /// Reads CSV from any byte source; see [`Dataset::from_csv_path`].
    pub fn from_csv_reader(reader: impl Read) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = csv.headers()?.clone();
        if header.len() < 2 {
            return Err(Error::DatasetShape);
        }
        let attributes: Vec<String> = header
            .iter()
            .take(header.len() - 1)
            .map(str::to_owned)
            .collect();

        let mut samples = Vec::new();
        let mut raw_labels: Vec<String> = Vec::new();
        for (row, record) in csv.records().enumerate() {
            let record = record?;
            if record.len() != header.len() {
                return Err(Error::Dataset {
                    row,
                    message: format!("expected {} fields, got {}", header.len(), record.len()),
                });
            }
            let mut values = Vec::with_capacity(attributes.len());
            for (column, field) in record.iter().take(attributes.len()).enumerate() {
                let value: f64 = field.parse().map_err(|_| Error::Dataset {
                    row,
                    message: format!(
                        "column `{}` holds non-numeric value {field:?}",
                        attributes[column]
                    ),
                })?;
                if !value.is_finite() {
                    return Err(Error::Dataset {
                        row,
                        message: format!(
                            "column `{}` holds non-finite value {field:?}",
                            attributes[column]
                        ),
                    });
                }
                values.push(value);
            }
            let label = record.get(attributes.len()).expect("length checked");
            if label.is_empty() {
                return Err(Error::Dataset {
                    row,
                    message: "empty class label".into(),
                });
            }
            samples.push(values);
            raw_labels.push(label.to_owned());
        }
        if samples.is_empty() {
            return Err(Error::DatasetShape);
        }

        let mut classes: Vec<String> = raw_labels.clone();
        classes.sort();
        classes.dedup();
        let labels = raw_labels
            .iter()
            .map(|label| {
                classes
                    .binary_search(label)
                    .expect("every label is in the sorted class list")
            })
            .collect();
        Dataset::new(attributes, classes, samples, labels)
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    /// Class names, lexicographically sorted; row labels index into this.
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Attribute values and class index of one row.
    pub fn row(&self, index: usize) -> (&[f64], usize) {
        (&self.samples[index], self.labels[index])
    }

    /// Row indices belonging to one class, in dataset order.
    pub fn class_rows(&self, class: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &label)| label == class)
            .map(|(row, _)| row)
            .collect()
    }

    /// A new dataset holding the given rows (in the given order) with the
    /// same attribute and class lists.
    pub fn select(&self, rows: &[usize]) -> Dataset {
        Dataset {
            attributes: self.attributes.clone(),
            classes: self.classes.clone(),
            samples: rows.iter().map(|&r| self.samples[r].clone()).collect(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
        }
    }

    /// One attribute's values over the rows of one class, in dataset order.
    pub fn column_for_class(&self, attribute: usize, class: usize) -> Vec<f64> {
        self.samples
            .iter()
            .zip(&self.labels)
            .filter(|(_, &label)| label == class)
            .map(|(values, _)| values[attribute])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
x,y,kind
1.0,2.0,beta
3.5,4.0,alpha
5.0,6.5,beta
";

    #[test]
    fn parses_csv_and_sorts_classes() {
        let data = Dataset::from_csv_reader(SMALL.as_bytes()).unwrap();
        assert_eq!(data.attributes(), ["x", "y"]);
        assert_eq!(data.classes(), ["alpha", "beta"]); // sorted, not first-seen
        assert_eq!(data.len(), 3);
        assert_eq!(data.labels(), [1, 0, 1]);
        assert_eq!(data.row(1), (&[3.5, 4.0][..], 0));
    }

    #[test]
    fn class_rows_and_columns() {
        let data = Dataset::from_csv_reader(SMALL.as_bytes()).unwrap();
        assert_eq!(data.class_rows(1), [0, 2]);
        assert_eq!(data.column_for_class(0, 1), [1.0, 5.0]);
        assert_eq!(data.column_for_class(1, 0), [4.0]);
    }

    #[test]
    fn select_keeps_class_list_stable() {
        let data = Dataset::from_csv_reader(SMALL.as_bytes()).unwrap();
        let subset = data.select(&[2, 0]);
        assert_eq!(subset.len(), 2);
        assert_eq!(subset.classes(), ["alpha", "beta"]);
        assert_eq!(subset.labels(), [1, 1]);
        assert_eq!(subset.samples()[0], [5.0, 6.5]);
    }

    #[test]
    fn rejects_malformed_files() {
        // no attribute columns
        assert!(matches!(
            Dataset::from_csv_reader("kind\nalpha\n".as_bytes()),
            Err(Error::DatasetShape)
        ));
        // no data rows
        assert!(matches!(
            Dataset::from_csv_reader("x,kind\n".as_bytes()),
            Err(Error::DatasetShape)
        ));
        // non-numeric attribute
        let err = Dataset::from_csv_reader("x,kind\noops,alpha\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Dataset { row: 0, .. }), "{err}");
        // non-finite attribute
        let err = Dataset::from_csv_reader("x,kind\nNaN,alpha\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Dataset { row: 0, .. }), "{err}");
        // empty label
        let err = Dataset::from_csv_reader("x,kind\n1.0,\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Dataset { row: 0, .. }), "{err}");
    }
}
