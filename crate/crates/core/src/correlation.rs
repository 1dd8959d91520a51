//! k-local operator spaces, MaxEnt reconstruction from marginals and the
//! hierarchy of irreducible correlations.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::gibbs::GibbsFamily;
use crate::maxent::{flag_jumps, projection_solution, MaxEntSolution};
use crate::operator::{
    partial_trace, tensor, trace_distance, von_neumann_entropy, CMatrix, DensityMatrix,
    HermitianOperator, TensorSystem,
};

/// Orthogonal basis of the space of Hamiltonians that are sums of terms
/// acting on at most `k` units. The first element is the identity.
#[derive(Debug, Clone)]
pub struct LocalHamiltonianSpace {
    pub system: TensorSystem,
    pub k: usize,
    pub basis: Vec<HermitianOperator>,
    /// Per basis element, the local operator index on each unit (0 is the
    /// identity).
    pub labels: Vec<Vec<usize>>,
}

impl LocalHamiltonianSpace {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Pauli-string labels such as `XIZ`; `None` unless all units are qubits.
    pub fn pauli_labels(&self) -> Option<Vec<String>> {
        self.system.is_qubits().then(|| {
            self.labels
                .iter()
                .map(|l| l.iter().map(|&i| ['I', 'X', 'Y', 'Z'][i]).collect())
                .collect()
        })
    }

    /// The Gibbs family of the non-identity basis elements.
    pub fn family(&self) -> Result<GibbsFamily> {
        GibbsFamily::new(self.basis[1..].to_vec(), format!("{}-local", self.k))
    }
}

/// Generalized Gell-Mann matrices of `M_d` preceded by the identity. For
/// `d = 2` these are `I, X, Y, Z`.
pub fn gell_mann(d: usize) -> Vec<HermitianOperator> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut out = vec![HermitianOperator::identity(d)];
    for j in 0..d {
        for k in j + 1..d {
            let mut s = CMatrix::zeros(d, d);
            s[(j, k)] = c(1.0, 0.0);
            s[(k, j)] = c(1.0, 0.0);
            out.push(HermitianOperator::from_raw(s));
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = c(0.0, -1.0);
            a[(k, j)] = c(0.0, 1.0);
            out.push(HermitianOperator::from_raw(a));
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|j| match j.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        out.push(HermitianOperator::from_diagonal(&diag));
    }
    out
}

pub fn k_local_basis(system: &TensorSystem, k: usize) -> Result<LocalHamiltonianSpace> {
    let n = system.units();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let locals: Vec<Vec<HermitianOperator>> = system.unit_dims().iter().map(|&d| gell_mann(d)).collect();
    let mut labels: Vec<Vec<usize>> = vec![Vec::new()];
    for unit in &locals {
        labels = labels
            .into_iter()
            .flat_map(|prefix| {
                (0..unit.len()).map(move |i| {
                    let mut l = prefix.clone();
                    l.push(i);
                    l
                })
            })
            .filter(|l| l.iter().filter(|&&i| i != 0).count() <= k)
            .collect();
    }
    // weight-major order keeps lower levels as a prefix
    labels.sort_by_key(|l| l.iter().filter(|&&i| i != 0).count());
    let basis = labels
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .map(|(u, &i)| locals[u][i].clone())
                .reduce(|acc, op| tensor(&acc, &op))
                .expect("at least two units")
        })
        .collect();
    Ok(LocalHamiltonianSpace {
        system: system.clone(),
        k,
        basis,
        labels,
    })
}

/// Subsets of `{0..n}` of size `k` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All marginals on `k` units, keyed by the (sorted) unit subset.
pub fn k_rdms(rho: &DensityMatrix, system: &TensorSystem, k: usize) -> Result<Vec<(Vec<usize>, DensityMatrix)>> {
    let n = system.units();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    subsets(n, k)
        .into_par_iter()
        .map(|s| {
            let m = partial_trace(rho, system, &s)?;
            Ok((s, m))
        })
        .collect()
}

/// `π_{E(H_k)}(ρ)`: the maximum-entropy state with the same `k`-body
/// marginals as `rho`.
pub fn maxent_from_rdms(
    rho: &DensityMatrix,
    system: &TensorSystem,
    k: usize,
    cfg: &ToleranceConfig,
) -> Result<DensityMatrix> {
    Ok(match rdm_projection(rho, system, k, cfg)? {
        Some(sol) => sol.state,
        None => rho.clone(),
    })
}

/// `d_{E(H_k)}(ρ)`.
pub fn divergence_from_level(rho: &DensityMatrix, system: &TensorSystem, k: usize, cfg: &ToleranceConfig) -> Result<f64> {
    match rdm_projection(rho, system, k, cfg)? {
        Some(sol) => sol.relative_entropy_from(rho, cfg.tol_ker),
        None => Ok(0.0),
    }
}

/// The projection onto `E(H_k)`; `None` for `k = N`, where it is the
/// identity.
fn rdm_projection(
    rho: &DensityMatrix,
    system: &TensorSystem,
    k: usize,
    cfg: &ToleranceConfig,
) -> Result<Option<MaxEntSolution>> {
    if rho.dim() != system.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: system.total_dim(),
            found: rho.dim(),
        });
    }
    let space = k_local_basis(system, k)?;
    if k == system.units() {
        return Ok(None);
    }
    projection_solution(&space.family()?, rho, cfg).map(Some)
}

fn check_level(system: &TensorSystem, k: usize) -> Result<()> {
    let n = system.units();
    if k < 2 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(())
}

/// `C_k(ρ) = H(π_{k-1}(ρ)) - H(π_k(ρ))`.
pub fn irreducible_correlation(
    rho: &DensityMatrix,
    system: &TensorSystem,
    k: usize,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_level(system, k)?;
    let lower = maxent_from_rdms(rho, system, k - 1, cfg)?;
    let upper = maxent_from_rdms(rho, system, k, cfg)?;
    Ok(von_neumann_entropy(&lower) - von_neumann_entropy(&upper))
}

/// `C_k(ρ) = d_{E(H_{k-1})}(ρ) - d_{E(H_k)}(ρ)`, through relative entropies.
pub fn irreducible_correlation_divergence(
    rho: &DensityMatrix,
    system: &TensorSystem,
    k: usize,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_level(system, k)?;
    Ok(divergence_from_level(rho, system, k - 1, cfg)? - divergence_from_level(rho, system, k, cfg)?)
}

/// `I(ρ) = Σ_i H(ρ_i) - H(ρ)`.
pub fn multi_information(rho: &DensityMatrix, system: &TensorSystem) -> Result<f64> {
    let singles = k_rdms(rho, system, 1)?;
    Ok(singles.iter().map(|(_, m)| von_neumann_entropy(m)).sum::<f64>() - von_neumann_entropy(rho))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationDecomposition {
    /// `C_2, ..., C_N`.
    pub irreducible: Vec<f64>,
    pub multi_information: f64,
    /// `|I - Σ C_k|`.
    pub residual: f64,
}

pub fn correlation_decomposition(
    rho: &DensityMatrix,
    system: &TensorSystem,
    cfg: &ToleranceConfig,
) -> Result<CorrelationDecomposition> {
    let levels = reconstructions(rho, system, cfg)?;
    decomposition_from(rho, system, &levels)
}

/// `π_1(ρ), ..., π_N(ρ)`.
fn reconstructions(rho: &DensityMatrix, system: &TensorSystem, cfg: &ToleranceConfig) -> Result<Vec<DensityMatrix>> {
    (1..=system.units())
        .into_par_iter()
        .map(|k| maxent_from_rdms(rho, system, k, cfg))
        .collect()
}

fn decomposition_from(
    rho: &DensityMatrix,
    system: &TensorSystem,
    levels: &[DensityMatrix],
) -> Result<CorrelationDecomposition> {
    let entropies: Vec<f64> = levels.iter().map(von_neumann_entropy).collect();
    let irreducible: Vec<f64> = entropies.windows(2).map(|w| w[0] - w[1]).collect();
    let multi_information = multi_information(rho, system)?;
    let residual = (multi_information - irreducible.iter().sum::<f64>()).abs();
    Ok(CorrelationDecomposition {
        irreducible,
        multi_information,
        residual,
    })
}

/// `(|0...0> + |1...1>) / √2` on `n` qubits.
pub fn ghz_vector(n: usize) -> DVector<Complex64> {
    let d = 1usize << n;
    let mut v = DVector::from_element(d, Complex64::new(0.0, 0.0));
    v[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[d - 1] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v
}

pub fn ghz_state(n: usize) -> DensityMatrix {
    DensityMatrix::pure(&ghz_vector(n)).expect("GHZ vector is normalized")
}

/// A fixed three-qubit pure state dominated by the single-excitation
/// sector, with all amplitudes non-zero and unequal phases.
pub fn w_like_vector() -> DVector<Complex64> {
    let amps = [0.21, 0.52, 0.41, 0.13, 0.62, 0.17, 0.09, 0.05];
    let phases = [0.0, 0.37, 1.21, 2.03, -0.66, 0.94, -1.48, 2.71];
    let v = DVector::from_iterator(8, amps.iter().zip(phases).map(|(&a, p)| Complex64::from_polar(a, p)));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// `|ψ(t)> ∝ (1 - t)|w> + t|GHZ>` on three qubits.
pub fn ghz_approach_state(t: f64) -> DensityMatrix {
    let v = w_like_vector() * Complex64::new(1.0 - t, 0.0) + ghz_vector(3) * Complex64::new(t, 0.0);
    let n = v.norm();
    DensityMatrix::pure(&(v / Complex64::new(n, 0.0))).expect("normalized")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub t: f64,
    /// `C_2, ..., C_N`.
    pub irreducible: Vec<f64>,
    pub multi_information: f64,
    pub residual: f64,
    pub jump: bool,
}

/// Correlation hierarchy along a path of states on `t_i = i/(n-1)`. A jump
/// is flagged where the reconstruction from `(N-1)`-body marginals moves by
/// more than the jump threshold and more than the jump ratio times the step
/// of the input state, both in trace distance.
pub fn c3_discontinuity_probe<F>(
    system: &TensorSystem,
    path: F,
    n: usize,
    cfg: &ToleranceConfig,
) -> Result<Vec<ProbeRow>>
where
    F: Fn(f64) -> DensityMatrix + Sync,
{
    if n < 2 {
        return Err(Error::InvalidArgument("a probe needs at least two points".into()));
    }
    let units = system.units();
    let ts: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let rows: Vec<(DensityMatrix, DensityMatrix, CorrelationDecomposition)> = ts
        .par_iter()
        .map(|&t| {
            let rho = path(t);
            let levels = reconstructions(&rho, system, cfg)?;
            let dec = decomposition_from(&rho, system, &levels)?;
            Ok((rho, levels[units - 2].clone(), dec))
        })
        .collect::<Result<_>>()?;
    let mut gaps = Vec::with_capacity(n - 1);
    let mut steps = Vec::with_capacity(n - 1);
    for w in rows.windows(2) {
        gaps.push(trace_distance(&w[0].1, &w[1].1)?);
        steps.push(trace_distance(&w[0].0, &w[1].0)?);
    }
    let flags = flag_jumps(&gaps, &steps, cfg.jump_threshold, cfg.jump_ratio, false);
    Ok(ts
        .into_iter()
        .zip(rows)
        .zip(flags)
        .map(|((t, (_, _, dec)), jump)| ProbeRow {
            t,
            irreducible: dec.irreducible,
            multi_information: dec.multi_information,
            residual: dec.residual,
            jump,
        })
        .collect())
}
