//! Label spaces, label mappings, and per-segment probability tables.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered set of category names. Node unaries, weight matrices, and metric
/// reports all index into one of these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    names: Vec<String>,
}

impl LabelSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::LabelSetTooSmall(names.len()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        Ok(Self { names })
    }

    /// The four-class space used throughout the pipeline defaults.
    pub fn four_class() -> Self {
        Self::new(["ground", "sky", "vegetation", "object"]).expect("static names are valid")
    }

    /// The binary ground / non-ground variant.
    pub fn binary() -> Self {
        Self::new(["ground", "non-ground"]).expect("static names are valid")
    }

    pub fn count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// Index of the `sky` label, if the set has one. 3D nodes must mark it
    /// inadmissible: the lidar never observes sky.
    pub fn sky_index(&self) -> Option<usize> {
        self.index_of("sky")
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(", "))
    }
}

/// Total map from an old label space onto a coarser one, e.g. the 4-class to
/// ground / non-ground merge. New labels are ordered by first appearance.
#[derive(Debug, Clone)]
pub struct LabelMapping {
    old: LabelSet,
    new: LabelSet,
    /// `assignment[old_index] = new_index`
    assignment: Vec<usize>,
}

impl LabelMapping {
    pub fn new(old: &LabelSet, pairs: &BTreeMap<String, String>) -> Result<Self> {
        let mut new_names: Vec<String> = Vec::new();
        let mut assignment = Vec::with_capacity(old.count());
        for name in old.names() {
            let target = pairs.get(name).ok_or_else(|| Error::MappingNotTotal(name.clone()))?;
            let idx = match new_names.iter().position(|n| n == target) {
                Some(i) => i,
                None => {
                    new_names.push(target.clone());
                    new_names.len() - 1
                }
            };
            assignment.push(idx);
        }
        let new = LabelSet::new(new_names)?;
        Ok(Self { old: old.clone(), new, assignment })
    }

    /// Convenience: merge every label except `kept` into `merged_name`.
    pub fn keep_one(old: &LabelSet, kept: &str, merged_name: &str) -> Result<Self> {
        old.require(kept)?;
        let mut pairs = BTreeMap::new();
        for name in old.names() {
            let target = if name == kept { name.clone() } else { merged_name.to_string() };
            pairs.insert(name.clone(), target);
        }
        Self::new(old, &pairs)
    }

    pub fn old(&self) -> &LabelSet {
        &self.old
    }

    pub fn new_labels(&self) -> &LabelSet {
        &self.new
    }

    pub fn map_index(&self, old_index: usize) -> usize {
        self.assignment[old_index]
    }

    /// Composition `second ∘ self` (apply `self`, then `second`).
    pub fn compose(&self, second: &LabelMapping) -> Result<LabelMapping> {
        if second.old != self.new {
            return Err(Error::Validation(
                "composition mismatch: second mapping's domain differs".into(),
            ));
        }
        let assignment: Vec<usize> =
            self.assignment.iter().map(|&m| second.assignment[m]).collect();
        Ok(LabelMapping { old: self.old.clone(), new: second.new.clone(), assignment })
    }
}

/// Rows of per-segment (or per-point) class probabilities over one label set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbabilityTable {
    labels: LabelSet,
    rows: Vec<Vec<f64>>,
}

impl ProbabilityTable {
    pub fn new(labels: LabelSet, rows: Vec<Vec<f64>>) -> Result<Self> {
        for row in &rows {
            validate_distribution(row, labels.count())?;
        }
        Ok(Self { labels, rows })
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// Rejects rows that are not a probability distribution of the expected
/// length (entry in [0,1] up to rounding, sum within 1e-6 of 1).
pub fn validate_distribution(row: &[f64], expected_len: usize) -> Result<()> {
    if row.len() != expected_len {
        return Err(Error::LengthMismatch(row.len(), expected_len));
    }
    let mut sum = 0.0;
    for &p in row {
        if !p.is_finite() || !(-1e-12..=1.0 + 1e-9).contains(&p) {
            return Err(Error::InvalidDistribution(format!("entry {p} outside [0, 1]")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidDistribution(format!("sum {sum} differs from 1")));
    }
    Ok(())
}
