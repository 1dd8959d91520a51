//! Gibbs states, Hermitian pencils, the expected-value functional, the
//! log-partition function with its derivatives, and (+1)-geodesics with
//! their limits.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::{
    compress, eig, lift, top_space_projector, ground_space_projector, CMatrix, DensityMatrix,
    HermitianOperator, Projector, SpectralDecomposition,
};

/// A point of `R^r` in the image of the expected-value functional.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedValue {
    coords: Vec<f64>,
}

impl ExpectedValue {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("expected value has non-finite entries".into()));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn distance(&self, other: &ExpectedValue) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &ExpectedValue, t: f64) -> ExpectedValue {
        ExpectedValue {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        }
    }
}

impl From<Vec<f64>> for ExpectedValue {
    fn from(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

/// The Gibbs family of a list of Hamiltonians `H_1..H_r`.
///
/// After compression to a face the Hamiltonians are stored in the range
/// basis of the face projector; `embedding` is the isometry from that range
/// into the original space.
#[derive(Debug, Clone)]
pub struct GibbsFamily {
    hamiltonians: Vec<HermitianOperator>,
    embedding: CMatrix,
    label: String,
}

impl GibbsFamily {
    pub fn new(hamiltonians: Vec<HermitianOperator>, label: impl Into<String>) -> Result<Self> {
        let d = hamiltonians
            .first()
            .ok_or_else(|| Error::InvalidArgument("a Gibbs family needs at least one Hamiltonian".into()))?
            .dim();
        if let Some(h) = hamiltonians.iter().find(|h| h.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: h.dim(),
            });
        }
        Ok(Self {
            hamiltonians,
            embedding: CMatrix::identity(d, d),
            label: label.into(),
        })
    }

    pub fn hamiltonians(&self) -> &[HermitianOperator] {
        &self.hamiltonians
    }

    /// Number of observables `r`.
    pub fn r(&self) -> usize {
        self.hamiltonians.len()
    }

    /// Dimension of the (possibly compressed) algebra the family lives on.
    pub fn dim(&self) -> usize {
        self.hamiltonians[0].dim()
    }

    /// Dimension of the original, uncompressed space.
    pub fn root_dim(&self) -> usize {
        self.embedding.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn embedding(&self) -> &CMatrix {
        &self.embedding
    }

    pub fn is_compressed(&self) -> bool {
        self.dim() != self.root_dim()
    }

    /// Projector of the original space onto the algebra of this family.
    pub fn ambient_projector(&self) -> Projector {
        Projector::from_orthonormal_basis(self.embedding.clone())
            .expect("embedding columns are orthonormal")
    }

    /// `H(λ) = λ_1 H_1 + ... + λ_r H_r`.
    pub fn pencil(&self, lambda: &[f64]) -> Result<HermitianOperator> {
        if lambda.len() != self.r() {
            return Err(Error::DimensionMismatch {
                expected: self.r(),
                found: lambda.len(),
            });
        }
        HermitianOperator::linear_combination(lambda, &self.hamiltonians)
    }

    /// `E(ρ) = (tr H_1 ρ, ..., tr H_r ρ)` for a state of this family's algebra.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<ExpectedValue> {
        self.expectation_of(rho.op())
    }

    pub fn expectation_of(&self, a: &HermitianOperator) -> Result<ExpectedValue> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.dim(),
            });
        }
        Ok(ExpectedValue {
            coords: self.hamiltonians.iter().map(|h| h.inner(a)).collect(),
        })
    }

    /// Restriction of the family to the range of `p` (a projector of this
    /// family's algebra).
    pub fn compress(&self, p: &Projector) -> Result<GibbsFamily> {
        let hamiltonians = self
            .hamiltonians
            .iter()
            .map(|h| compress(h, p).map(|c| c.op))
            .collect::<Result<Vec<_>>>()?;
        Ok(GibbsFamily {
            hamiltonians,
            embedding: &self.embedding * p.basis(),
            label: self.label.clone(),
        })
    }

    /// Embeds a state of this family's algebra into the original space.
    pub fn lift_state(&self, rho: &DensityMatrix) -> DensityMatrix {
        if !self.is_compressed() {
            return rho.clone();
        }
        DensityMatrix::from_psd_unnormalized(lift(rho.op(), &self.embedding).into_matrix())
    }

    /// `e^{H(λ)} / tr e^{H(λ)}`.
    pub fn state(&self, lambda: &[f64]) -> Result<DensityMatrix> {
        Ok(normalized_exp(&self.pencil(lambda)?))
    }
}

/// Eigendecomposition together with Boltzmann weights `e^{μ_j} / Z`,
/// computed with the largest eigenvalue shifted to zero.
pub(crate) struct Thermal {
    pub spec: SpectralDecomposition,
    pub log_z: f64,
    pub weights: Vec<f64>,
}

impl Thermal {
    pub fn new(h: &HermitianOperator) -> Self {
        Self::from_spec(eig(h))
    }

    pub fn from_spec(spec: SpectralDecomposition) -> Self {
        let top = spec.max();
        let raw: Vec<f64> = spec.eigenvalues.iter().map(|&x| (x - top).exp()).collect();
        let z: f64 = raw.iter().sum();
        Self {
            log_z: top + z.ln(),
            weights: raw.into_iter().map(|w| w / z).collect(),
            spec,
        }
    }

    pub fn state(&self) -> DensityMatrix {
        DensityMatrix::from_psd_unnormalized(self.spec.reconstruct_with(&self.weights).into_matrix())
    }

    /// Mean values and Kubo-Mori covariance matrix of `ops` in this state.
    pub fn moments(&self, ops: &[CMatrix]) -> (Vec<f64>, DMatrix<f64>) {
        let n = self.spec.dim();
        let u = &self.spec.eigenvectors;
        let top = self.spec.max();
        let shifted: Vec<f64> = self.spec.eigenvalues.iter().map(|x| x - top).collect();
        let z = (self.log_z - top).exp();
        let mut kernel = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                kernel[(j, k)] = exp_divided_difference(shifted[j], shifted[k]) / z;
            }
        }
        let rotated: Vec<CMatrix> = ops.iter().map(|a| u.adjoint() * a * u).collect();
        let means: Vec<f64> = rotated
            .iter()
            .map(|a| (0..n).map(|j| self.weights[j] * a[(j, j)].re).sum())
            .collect();
        let centered: Vec<CMatrix> = rotated
            .into_iter()
            .zip(&means)
            .map(|(mut a, &m)| {
                for j in 0..n {
                    a[(j, j)].re -= m;
                }
                a
            })
            .collect();
        let r = ops.len();
        let mut cov = DMatrix::<f64>::zeros(r, r);
        for a in 0..r {
            for b in a..r {
                let (x, y) = (&centered[a], &centered[b]);
                let mut acc = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        acc += kernel[(j, k)] * (x[(j, k)] * y[(k, j)]).re;
                    }
                }
                cov[(a, b)] = acc;
                cov[(b, a)] = acc;
            }
        }
        (means, cov)
    }
}

/// First divided difference of `exp` at `(x, y)`, `e^x` on the diagonal.
pub(crate) fn exp_divided_difference(x: f64, y: f64) -> f64 {
    let d = x - y;
    if d.abs() > 0.5 {
        (x.exp() - y.exp()) / d
    } else if d == 0.0 {
        x.exp()
    } else {
        y.exp() * d.exp_m1() / d
    }
}

fn normalized_exp(h: &HermitianOperator) -> DensityMatrix {
    Thermal::new(h).state()
}

/// `g_H(β) = e^{-βH} / tr e^{-βH}`.
pub fn gibbs_state(h: &HermitianOperator, beta: f64) -> Result<DensityMatrix> {
    if beta.is_nan() || beta <= 0.0 || beta.is_infinite() {
        return Err(Error::InvalidArgument(format!("inverse temperature must be positive, got {beta}")));
    }
    Ok(normalized_exp(&h.scale(-beta)))
}

/// `lim_{β→∞} g_H(β) = p / tr(p)` with `p` the ground-space projector of `h`.
pub fn zero_temperature_limit(h: &HermitianOperator, tol_gap: f64) -> DensityMatrix {
    ground_space_projector(h, tol_gap).normalized_state()
}

/// `H̃(θ) = H(cos θ, sin θ)` of a two-parameter family.
pub fn angle_pencil(fam: &GibbsFamily, angle: f64) -> Result<HermitianOperator> {
    if fam.r() != 2 {
        return Err(Error::UnsupportedRank(fam.r()));
    }
    fam.pencil(&[angle.cos(), angle.sin()])
}

/// Zero-temperature state of `H̃(θ)` and its expected value.
#[derive(Debug, Clone)]
pub struct GroundStatePoint {
    pub angle: f64,
    pub degeneracy: usize,
    pub state: DensityMatrix,
    pub alpha: ExpectedValue,
}

pub fn ground_state_scan(fam: &GibbsFamily, angles: &[f64], tol_gap: f64) -> Result<Vec<GroundStatePoint>> {
    angles
        .iter()
        .map(|&angle| {
            let h = angle_pencil(fam, angle)?;
            let p = ground_space_projector(&h, tol_gap);
            let state = p.normalized_state();
            Ok(GroundStatePoint {
                angle,
                degeneracy: p.rank(),
                alpha: fam.expectation(&state)?,
                state,
            })
        })
        .collect()
}

/// Value, gradient and Hessian of `Λ(λ) = ln tr e^{H(λ)}`.
#[derive(Debug, Clone)]
pub struct LogPartition {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: DMatrix<f64>,
}

pub fn log_partition(fam: &GibbsFamily, lambda: &[f64]) -> Result<LogPartition> {
    let thermal = Thermal::new(&fam.pencil(lambda)?);
    let ops: Vec<CMatrix> = fam.hamiltonians().iter().map(|h| h.matrix().clone()).collect();
    let (gradient, hessian) = thermal.moments(&ops);
    Ok(LogPartition {
        value: thermal.log_z,
        gradient,
        hessian,
    })
}

/// `g_{H0,H}(t) = e^{H0 + tH} / tr e^{H0 + tH}`.
pub fn plus_one_geodesic(h0: &HermitianOperator, h: &HermitianOperator, t: f64) -> Result<DensityMatrix> {
    if h0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h0.dim(),
            found: h.dim(),
        });
    }
    Ok(normalized_exp(&h0.add(&h.scale(t))))
}

/// Closed form of `lim_{t→∞} g_{H0,H}(t) = p e^{p H0 p} / tr(p e^{p H0 p})`
/// where `p` projects onto the ground space of `-H`.
pub fn plus_one_geodesic_limit(
    h0: &HermitianOperator,
    h: &HermitianOperator,
    tol_gap: f64,
) -> Result<DensityMatrix> {
    if h0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h0.dim(),
            found: h.dim(),
        });
    }
    let p = top_space_projector(h, tol_gap);
    let block = compress(h0, &p)?;
    let inner = normalized_exp(&block.op);
    Ok(DensityMatrix::from_psd_unnormalized(block.lift(inner.op()).into_matrix()))
}

