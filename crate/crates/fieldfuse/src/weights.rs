//! Learnable CRF parameters: one weight matrix and one bias matrix per edge
//! family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeKind;

/// Dense `n x n` matrix indexed by label pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelMatrix {
    n: usize,
    data: Vec<f64>,
}

impl LabelMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch(row.len(), n));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] += value;
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 0.0)
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// The learnable CRF parameters (Fig. 8 layout): symmetric weight matrices for
/// the 2D, 3D, and temporal families, an asymmetric matrix for cross-modal
/// edges (row = 2D label, column = 3D label), one bias matrix per family with
/// the same symmetry pattern, and the L2 strength applied to non-bias weights.
///
/// Diagonals are structurally zero: the pairwise potentials carry a
/// `different-labels` indicator, so same-label entries are not parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    pub w2d: LabelMatrix,
    pub w3d: LabelMatrix,
    pub w2d3d: LabelMatrix,
    pub wtime: LabelMatrix,
    pub b2d: LabelMatrix,
    pub b3d: LabelMatrix,
    pub b2d3d: LabelMatrix,
    pub btime: LabelMatrix,
    pub l2_lambda: f64,
}

impl WeightSet {
    pub fn zeros(label_count: usize) -> Self {
        Self {
            w2d: LabelMatrix::zeros(label_count),
            w3d: LabelMatrix::zeros(label_count),
            w2d3d: LabelMatrix::zeros(label_count),
            wtime: LabelMatrix::zeros(label_count),
            b2d: LabelMatrix::zeros(label_count),
            b3d: LabelMatrix::zeros(label_count),
            b2d3d: LabelMatrix::zeros(label_count),
            btime: LabelMatrix::zeros(label_count),
            l2_lambda: 0.0,
        }
    }

    /// Uniform off-diagonal weight per family, zero biases. Handy for
    /// hand-tuned decoding without a training pass.
    pub fn uniform(label_count: usize, w_2d: f64, w_3d: f64, w_2d3d: f64, w_time: f64) -> Self {
        let mut out = Self::zeros(label_count);
        for i in 0..label_count {
            for j in 0..label_count {
                if i != j {
                    out.w2d.set(i, j, w_2d);
                    out.w3d.set(i, j, w_3d);
                    out.w2d3d.set(i, j, w_2d3d);
                    out.wtime.set(i, j, w_time);
                }
            }
        }
        out
    }

    pub fn label_count(&self) -> usize {
        self.w2d.size()
    }

    pub fn weight(&self, kind: EdgeKind) -> &LabelMatrix {
        match kind {
            EdgeKind::Spatial2D => &self.w2d,
            EdgeKind::Spatial3D => &self.w3d,
            EdgeKind::CrossModal => &self.w2d3d,
            EdgeKind::Temporal => &self.wtime,
        }
    }

    pub fn bias(&self, kind: EdgeKind) -> &LabelMatrix {
        match kind {
            EdgeKind::Spatial2D => &self.b2d,
            EdgeKind::Spatial3D => &self.b3d,
            EdgeKind::CrossModal => &self.b2d3d,
            EdgeKind::Temporal => &self.btime,
        }
    }

    pub fn weight_mut(&mut self, kind: EdgeKind) -> &mut LabelMatrix {
        match kind {
            EdgeKind::Spatial2D => &mut self.w2d,
            EdgeKind::Spatial3D => &mut self.w3d,
            EdgeKind::CrossModal => &mut self.w2d3d,
            EdgeKind::Temporal => &mut self.wtime,
        }
    }

    pub fn bias_mut(&mut self, kind: EdgeKind) -> &mut LabelMatrix {
        match kind {
            EdgeKind::Spatial2D => &mut self.b2d,
            EdgeKind::Spatial3D => &mut self.b3d,
            EdgeKind::CrossModal => &mut self.b2d3d,
            EdgeKind::Temporal => &mut self.btime,
        }
    }

    /// Checks the structural invariants: matching sizes, exact symmetry for
    /// the 2D / 3D / temporal families and their biases, all-zero diagonals,
    /// nonnegative regularization.
    pub fn validate(&self, label_count: usize) -> Result<()> {
        let matrices: [(&LabelMatrix, &str, bool); 8] = [
            (&self.w2d, "w2d", true),
            (&self.w3d, "w3d", true),
            (&self.wtime, "wtime", true),
            (&self.w2d3d, "w2d3d", false),
            (&self.b2d, "b2d", true),
            (&self.b3d, "b3d", true),
            (&self.btime, "btime", true),
            (&self.b2d3d, "b2d3d", false),
        ];
        for (m, name, symmetric) in matrices {
            if m.size() != label_count {
                return Err(Error::Validation(format!(
                    "{name} has size {} but the label set has {label_count} labels",
                    m.size()
                )));
            }
            if !m.has_zero_diagonal() {
                return Err(Error::Validation(format!("{name} diagonal is not zero")));
            }
            if symmetric && !m.is_symmetric() {
                return Err(Error::Validation(format!("{name} is not symmetric")));
            }
            if m.entries().iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!("{name} has a non-finite entry")));
            }
        }
        if !(self.l2_lambda >= 0.0) {
            return Err(Error::Validation(format!("l2_lambda {} is negative", self.l2_lambda)));
        }
        Ok(())
    }

    /// Sum of squares of the non-bias weights (the L2-regularized subset).
    pub fn weight_norm_sq(&self) -> f64 {
        [&self.w2d, &self.w3d, &self.w2d3d, &self.wtime]
            .iter()
            .flat_map(|m| m.entries())
            .map(|v| v * v)
            .sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        [
            &self.w2d, &self.w3d, &self.w2d3d, &self.wtime, &self.b2d, &self.b3d, &self.b2d3d,
            &self.btime,
        ]
        .iter()
        .flat_map(|m| m.entries())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

pub const EDGE_KINDS: [EdgeKind; 4] =
    [EdgeKind::Spatial2D, EdgeKind::Spatial3D, EdgeKind::CrossModal, EdgeKind::Temporal];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_catches_asymmetry_and_diagonal() {
        let mut w = WeightSet::zeros(3);
        assert!(w.validate(3).is_ok());

        w.w2d.set(0, 1, 1.0);
        assert!(w.validate(3).is_err());
        w.w2d.set(1, 0, 1.0);
        assert!(w.validate(3).is_ok());

        w.w3d.set(2, 2, 0.5);
        assert!(w.validate(3).is_err());
        w.w3d.set(2, 2, 0.0);

        // Cross-modal entries may be asymmetric; Fig. 8c even shows a
        // negative learned weight.
        w.w2d3d.set(0, 1, 1.0);
        w.w2d3d.set(1, 0, -0.2);
        assert!(w.validate(3).is_ok());
    }

    #[test]
    fn uniform_fills_off_diagonals() {
        let w = WeightSet::uniform(2, 0.5, 0.25, 0.125, 0.0625);
        assert_eq!(w.w2d.get(0, 1), 0.5);
        assert_eq!(w.w2d.get(0, 0), 0.0);
        assert_eq!(w.w3d.get(1, 0), 0.25);
        assert_eq!(w.w2d3d.get(1, 0), 0.125);
        assert_eq!(w.wtime.get(0, 1), 0.0625);
        assert!(w.validate(2).is_ok());
    }
}
