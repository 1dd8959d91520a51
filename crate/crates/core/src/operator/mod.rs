//! Dense Hermitian linear algebra on `M_d`: spectral decomposition,
//! functional calculus, compressions, tensor products, partial traces and
//! entropies.

mod entropy;
mod tensor;

pub use entropy::{relative_entropy, trace_distance, von_neumann_entropy};
pub use tensor::{partial_trace, tensor, TensorSystem};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Trace inner product `tr(ab)` of two Hermitian matrices, which is real.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    // tr(ab) = sum_ij a_ij b_ji
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// A dense self-adjoint `d x d` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
}

impl HermitianOperator {
    /// Validates self-adjointness within `tol` (max-abs entrywise) and stores
    /// the exact Hermitian part.
    pub fn new(entries: CMatrix, tol: f64) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "operator must be a non-empty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let max_dev = max_abs(&(&entries - entries.adjoint()));
        if max_dev.is_nan() || max_dev > tol {
            return Err(Error::NonHermitian { max_dev });
        }
        Ok(Self {
            entries: hermitian_part(&entries),
        })
    }

    /// Symmetrizes `entries` without validation. For results of operations
    /// that are Hermitian up to roundoff.
    pub(crate) fn from_raw(entries: CMatrix) -> Self {
        Self {
            entries: hermitian_part(&entries),
        }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument("data length does not match shape".into()));
        }
        let m = CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(m, ToleranceConfig::default().tol_herm)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self {
            entries: CMatrix::from_diagonal(&v),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    /// `<a, b> = tr(ab)`.
    pub fn inner(&self, other: &Self) -> f64 {
        trace_product(&self.entries, &other.entries)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            entries: self.entries.scale(c),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            entries: &self.entries + &other.entries,
        }
    }

    /// Linear combination `sum_i c_i a_i`; all operands must share a dimension.
    pub fn linear_combination(coeffs: &[f64], ops: &[HermitianOperator]) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty operator list".into()))?;
        if coeffs.len() != ops.len() {
            return Err(Error::DimensionMismatch {
                expected: ops.len(),
                found: coeffs.len(),
            });
        }
        let d = first.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (c, op) in coeffs.iter().zip(ops) {
            if op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: op.dim(),
                });
            }
            acc += op.entries.scale(*c);
        }
        Ok(Self { entries: acc })
    }

    /// Direct sum `a ⊕ b` as a block-diagonal matrix.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (m, n) = (self.dim(), other.dim());
        let mut out = CMatrix::zeros(m + n, m + n);
        out.view_mut((0, 0), (m, m)).copy_from(&self.entries);
        out.view_mut((m, m), (n, n)).copy_from(&other.entries);
        Self { entries: out }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(&self.entries - &other.entries))
    }
}

/// A unit-trace positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    /// Validates trace and positivity within `tol_state`. Eigenvalues in
    /// `[-tol_state, 0)` are clipped to zero and the result renormalized.
    pub fn new(op: HermitianOperator, cfg: &ToleranceConfig) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > cfg.tol_state.max(1e-10) {
            return Err(Error::NotAState(format!("trace {tr} differs from 1")));
        }
        let spec = eig(&op);
        let min = spec.eigenvalues[0];
        if min < -cfg.tol_state {
            return Err(Error::NotAState(format!("negative eigenvalue {min:.3e}")));
        }
        if min < 0.0 {
            return Ok(Self::from_spectrum_clipped(&spec));
        }
        Ok(Self { op })
    }

    pub fn from_matrix(m: CMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianOperator::new(m, cfg.tol_herm)?, cfg)
    }

    fn from_spectrum_clipped(spec: &SpectralDecomposition) -> Self {
        let vals: Vec<f64> = spec.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = vals.iter().sum();
        let scaled: Vec<f64> = vals.iter().map(|x| x / total).collect();
        Self {
            op: spec.reconstruct_with(&scaled),
        }
    }

    /// Normalizes a positive semidefinite operator by its trace.
    pub(crate) fn from_psd_unnormalized(m: CMatrix) -> Self {
        let op = HermitianOperator::from_raw(m);
        let tr = op.trace();
        Self { op: op.scale(1.0 / tr) }
    }

    /// Pure state `|v><v| / <v|v>`.
    pub fn pure(v: &DVector<Complex64>) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let u = v.unscale(n);
        Ok(Self {
            op: HermitianOperator::from_raw(&u * u.adjoint()),
        })
    }

    /// Pure state on a computational basis vector.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut diag = vec![0.0; dim];
        diag[index] = 1.0;
        Self {
            op: HermitianOperator::from_diagonal(&diag),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Convex combination `(1 - t) self + t other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            op: self.op.scale(1.0 - t).add(&other.op.scale(t)),
        })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    /// Eigenvalues clipped at zero, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        eig(&self.op).eigenvalues.iter().map(|&x| x.max(0.0)).collect()
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.spectrum().iter().filter(|&&x| x > tol).count()
    }
}

/// An orthogonal projection `p = p^2 = p^*`, stored together with an
/// orthonormal basis of its range.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    op: HermitianOperator,
    rank: usize,
    basis: CMatrix,
}

impl Projector {
    /// Projector onto the span of the orthonormal columns of `basis`.
    pub fn from_orthonormal_basis(basis: CMatrix) -> Result<Self> {
        let rank = basis.ncols();
        if rank == 0 || rank > basis.nrows() {
            return Err(Error::NotAProjector(format!(
                "basis with {} columns in dimension {}",
                rank,
                basis.nrows()
            )));
        }
        let gram = basis.adjoint() * &basis;
        let dev = max_abs(&(gram - CMatrix::identity(rank, rank)));
        if dev > 1e-8 {
            return Err(Error::NotAProjector(format!("basis not orthonormal ({dev:.3e})")));
        }
        let op = HermitianOperator::from_raw(&basis * basis.adjoint());
        Ok(Self { op, rank, basis })
    }

    /// Validates `p^2 = p` within `tol_proj` and extracts a range basis.
    pub fn from_operator(op: HermitianOperator, cfg: &ToleranceConfig) -> Result<Self> {
        let sq = op.matrix() * op.matrix();
        let dev = max_abs(&(sq - op.matrix()));
        if dev > cfg.tol_proj {
            return Err(Error::NotAProjector(format!("p^2 != p ({dev:.3e})")));
        }
        let spec = eig(&op);
        let cols: Vec<usize> = (0..op.dim()).filter(|&i| spec.eigenvalues[i] > 0.5).collect();
        if cols.is_empty() {
            return Err(Error::NotAProjector("zero projector".into()));
        }
        let basis = spec.eigenvectors.select_columns(cols.iter());
        let rank = cols.len();
        if (op.trace() - rank as f64).abs() > 1e-8 {
            return Err(Error::NotAProjector("trace does not match rank".into()));
        }
        Ok(Self { op, rank, basis })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim),
            rank: dim,
            basis: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    /// Orthonormal basis of the range, as a `dim x rank` isometry.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// `p / tr(p)`.
    pub fn normalized_state(&self) -> DensityMatrix {
        DensityMatrix {
            op: self.op.scale(1.0 / self.rank as f64),
        }
    }

    /// Whether the range of `other` is contained in the range of `self`.
    pub fn contains(&self, other: &Projector, tol: f64) -> bool {
        let resid = other.basis() - self.op.matrix() * other.basis();
        max_abs(&resid) <= tol
    }
}

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `U diag(values) U*`.
    pub fn reconstruct_with(&self, values: &[f64]) -> HermitianOperator {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        HermitianOperator::from_raw(scaled * u.adjoint())
    }

    /// Projector onto the eigenvectors with the given indices.
    pub(crate) fn projector(&self, cols: &[usize]) -> Projector {
        let basis = self.eigenvectors.select_columns(cols.iter());
        let op = HermitianOperator::from_raw(&basis * basis.adjoint());
        Projector {
            op,
            rank: cols.len(),
            basis,
        }
    }

    /// Absolute degeneracy threshold `tol_gap * (width + 1)`.
    pub(crate) fn gap_threshold(&self, tol_gap: f64) -> f64 {
        tol_gap * (self.max() - self.min() + 1.0)
    }

    /// Indices of eigenvalues within the relative gap of the smallest one.
    pub(crate) fn bottom_cluster(&self, tol_gap: f64) -> Vec<usize> {
        let thr = self.gap_threshold(tol_gap);
        let lo = self.min();
        (0..self.dim()).filter(|&i| self.eigenvalues[i] <= lo + thr).collect()
    }

    /// Indices of eigenvalues within the relative gap of the largest one.
    pub(crate) fn top_cluster(&self, tol_gap: f64) -> Vec<usize> {
        let thr = self.gap_threshold(tol_gap);
        let hi = self.max();
        (0..self.dim()).filter(|&i| self.eigenvalues[i] >= hi - thr).collect()
    }
}

/// Spectral decomposition of a Hermitian operator, eigenvalues ascending.
pub fn eig(a: &HermitianOperator) -> SpectralDecomposition {
    eig_matrix(a.matrix())
}

pub(crate) fn eig_matrix(m: &CMatrix) -> SpectralDecomposition {
    let n = m.nrows();
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let eigenvectors = se.eigenvectors.select_columns(order.iter());
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Validating variant of [`eig`] for raw matrices.
pub fn eig_checked(m: &CMatrix, cfg: &ToleranceConfig) -> Result<SpectralDecomposition> {
    let h = HermitianOperator::new(m.clone(), cfg.tol_herm)?;
    Ok(eig(&h))
}

/// `U f(diag) U*`. A non-finite `f(λ)` for some eigenvalue `λ` is reported
/// as a domain error.
pub fn func_calc<F: Fn(f64) -> f64>(a: &HermitianOperator, f: F) -> Result<HermitianOperator> {
    let spec = eig(a);
    let mut vals = Vec::with_capacity(spec.dim());
    for &x in spec.eigenvalues.iter() {
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::Domain(x));
        }
        vals.push(y);
    }
    Ok(spec.reconstruct_with(&vals))
}

pub fn expm(a: &HermitianOperator) -> HermitianOperator {
    let spec = eig(a);
    let vals: Vec<f64> = spec.eigenvalues.iter().map(|x| x.exp()).collect();
    spec.reconstruct_with(&vals)
}

pub fn logm(a: &HermitianOperator) -> Result<HermitianOperator> {
    func_calc(a, f64::ln)
}

/// Projector onto the eigenspace of the smallest eigenvalue, with degeneracy
/// decided by the relative gap `tol_gap * (λ_max - λ_min + 1)`.
pub fn ground_space_projector(h: &HermitianOperator, tol_gap: f64) -> Projector {
    let spec = eig(h);
    spec.projector(&spec.bottom_cluster(tol_gap))
}

/// Projector onto the eigenspace of the largest eigenvalue, i.e. the ground
/// space of `-h`.
pub fn top_space_projector(h: &HermitianOperator, tol_gap: f64) -> Projector {
    let spec = eig(h);
    spec.projector(&spec.top_cluster(tol_gap))
}

/// `pap` written in the orthonormal range basis of `p`, together with that
/// basis for lifting back.
#[derive(Debug, Clone)]
pub struct Compression {
    pub op: HermitianOperator,
    pub basis: CMatrix,
}

impl Compression {
    /// Embeds an operator on the range of `p` into the ambient space.
    pub fn lift(&self, b: &HermitianOperator) -> HermitianOperator {
        lift(b, &self.basis)
    }
}

pub fn compress(a: &HermitianOperator, p: &Projector) -> Result<Compression> {
    if a.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: a.dim(),
        });
    }
    let v = p.basis();
    Ok(Compression {
        op: HermitianOperator::from_raw(v.adjoint() * a.matrix() * v),
        basis: v.clone(),
    })
}

/// `V b V*` for an isometry `V`.
pub fn lift(b: &HermitianOperator, basis: &CMatrix) -> HermitianOperator {
    HermitianOperator::from_raw(basis * b.matrix() * basis.adjoint())
}


