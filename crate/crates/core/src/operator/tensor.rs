use super::{CMatrix, DensityMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// A composite system of `N >= 2` units with local dimensions `d_1..d_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSystem {
    unit_dims: Vec<usize>,
    total_dim: usize,
}

impl TensorSystem {
    pub fn new(unit_dims: Vec<usize>) -> Result<Self> {
        if unit_dims.len() < 2 {
            return Err(Error::InvalidArgument(
                "a composite system needs at least two units".into(),
            ));
        }
        if unit_dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidArgument("unit dimensions must be >= 2".into()));
        }
        let total_dim = unit_dims.iter().product();
        Ok(Self {
            unit_dims,
            total_dim,
        })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn unit_dims(&self) -> &[usize] {
        &self.unit_dims
    }

    pub fn units(&self) -> usize {
        self.unit_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn is_qubits(&self) -> bool {
        self.unit_dims.iter().all(|&d| d == 2)
    }

    /// Digits of a flat index, most significant unit first.
    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.units()];
        for (slot, &d) in out.iter_mut().zip(&self.unit_dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::from_raw(a.matrix().kronecker(b.matrix()))
}

/// Marginal of `rho` on the units in `keep` (0-based, any order; the result
/// is ordered by ascending unit index).
pub fn partial_trace(
    rho: &DensityMatrix,
    system: &TensorSystem,
    keep: &[usize],
) -> Result<DensityMatrix> {
    if rho.dim() != system.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: system.total_dim(),
            found: rho.dim(),
        });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.iter().any(|&u| u >= system.units()) {
        return Err(Error::InvalidArgument(format!("unit index out of range in {keep:?}")));
    }
    let kept_dims: Vec<usize> = kept.iter().map(|&u| system.unit_dims[u]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced: Vec<usize> = (0..system.units()).filter(|u| !kept.contains(u)).collect();

    let n = system.total_dim();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| system.digits(i)).collect();
    let sub_index = |d: &[usize], units: &[usize]| -> usize {
        units
            .iter()
            .fold(0usize, |acc, &u| acc * system.unit_dims[u] + d[u])
    };
    let kept_idx: Vec<usize> = digits.iter().map(|d| sub_index(d, &kept)).collect();
    let traced_idx: Vec<usize> = digits.iter().map(|d| sub_index(d, &traced)).collect();

    let m = rho.matrix();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    for i in 0..n {
        for j in 0..n {
            if traced_idx[i] == traced_idx[j] {
                out[(kept_idx[i], kept_idx[j])] += m[(i, j)];
            }
        }
    }
    Ok(DensityMatrix::from_psd_unnormalized(out))
}
