use super::{eig, eig_matrix, DensityMatrix};
use crate::error::{Error, Result};

fn entropy_of_spectrum<'a>(vals: impl Iterator<Item = &'a f64>) -> f64 {
    vals.filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

/// `H(ρ) = -tr ρ log ρ` in nats, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let spec = eig(rho.op());
    let clipped: Vec<f64> = spec.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
    entropy_of_spectrum(clipped.iter()).clamp(0.0, (rho.dim() as f64).ln())
}

/// `D(ρ, σ) = tr ρ (log ρ - log σ)`, or `+∞` when the kernel of `σ` is not
/// contained in the kernel of `ρ`. Eigenvalues of `σ` at or below `tol_ker`
/// span its kernel.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, tol_ker: f64) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let s = eig(sigma.op());
    let v = &s.eigenvectors;
    // diagonal of ρ in the eigenbasis of σ
    let rho_in_sigma = v.adjoint() * rho.matrix() * v;
    let mut cross = 0.0;
    for j in 0..s.dim() {
        let weight = rho_in_sigma[(j, j)].re;
        let sj = s.eigenvalues[j];
        if sj <= tol_ker {
            if weight > tol_ker {
                return Ok(f64::INFINITY);
            }
        } else {
            cross += weight * sj.ln();
        }
    }
    let d = -von_neumann_entropy(rho) - cross;
    Ok(d.max(0.0))
}

/// `(1/2) ||ρ - σ||_1`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let diff = rho.matrix() - sigma.matrix();
    let spec = eig_matrix(&diff);
    Ok(0.5 * spec.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}
