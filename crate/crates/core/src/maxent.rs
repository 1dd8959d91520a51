//! Maximum-entropy inference `ρ*`, its boundary extension, the projection
//! onto the extension and the entropy distance from a Gibbs family.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ToleranceConfig;
use crate::convex_support::{check_membership, FaceChain};
use crate::error::{Error, Result};
use crate::gibbs::{log_partition, ExpectedValue, GibbsFamily};
use crate::operator::{
    lift, relative_entropy, trace_distance, von_neumann_entropy, CMatrix, DensityMatrix, HermitianOperator,
};
use crate::solver::{self, DualOutcome, Reduced};

/// Dual parameter of a MaxEnt solution. States on proper faces of the
/// convex support are limits of the family and have none.
#[derive(Debug, Clone, PartialEq)]
pub enum DualParameter {
    Interior(Vec<f64>),
    Boundary,
}

#[derive(Debug, Clone)]
pub struct MaxEntSolution {
    pub alpha: ExpectedValue,
    /// `ρ*(α)` in the algebra of the family it was solved for.
    pub state: DensityMatrix,
    pub dual: DualParameter,
    /// Parameter of the terminal compressed family; the state is
    /// `e^{H(λ)} / tr e^{H(λ)}` there, lifted through the face chain.
    pub terminal_dual: Vec<f64>,
    pub face_chain: FaceChain,
    /// Isometry from the terminal algebra onto the support of `state`.
    pub support: CMatrix,
    pub iterations: usize,
    /// `|E(state) - α|` in the 2-norm.
    pub residual: f64,
}

impl MaxEntSolution {
    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(&self.state)
    }

    /// `log ρ*` on its support, in terminal coordinates:
    /// `H_T(λ) - Λ_T(λ) 𝟙`.
    pub fn log_state(&self) -> Result<HermitianOperator> {
        let fam = &self.face_chain.terminal_family;
        let lp = log_partition(fam, &self.terminal_dual)?;
        Ok(fam.pencil(&self.terminal_dual)?.add(&HermitianOperator::identity(fam.dim()).scale(-lp.value)))
    }

    /// `D(ρ, ρ*)`. The logarithm of `ρ*` comes from the dual parameter, so
    /// eigenvalues of `ρ*` far below machine precision still enter with
    /// their exact logarithm. `+∞` when `rho` has weight above `tol_ker`
    /// off the support.
    pub fn relative_entropy_from(&self, rho: &DensityMatrix, tol_ker: f64) -> Result<f64> {
        if rho.dim() != self.state.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.state.dim(),
                found: rho.dim(),
            });
        }
        let inside = self.support.adjoint() * rho.matrix() * &self.support;
        if 1.0 - inside.trace().re > tol_ker {
            return Ok(f64::INFINITY);
        }
        let cross = (inside * self.log_state()?.matrix()).trace().re;
        Ok((-von_neumann_entropy(rho) - cross).max(0.0))
    }
}

fn residual(fam: &GibbsFamily, state: &DensityMatrix, alpha: &[f64]) -> Result<f64> {
    let got = fam.expectation(state)?;
    Ok(got.coords().iter().zip(alpha).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
}

fn finish(fam: &GibbsFamily, alpha: &ExpectedValue, descent: solver::Descent) -> Result<MaxEntSolution> {
    let chain = FaceChain {
        steps: descent.steps,
        terminal_family: descent.terminal,
        terminal_dim: descent.terminal_dim,
    };
    // isometry from the terminal algebra into the algebra of `fam`
    let w = fam.embedding().adjoint() * chain.terminal_family.embedding();
    let state = DensityMatrix::from_psd_unnormalized(lift(descent.state.op(), &w).into_matrix());
    let residual = residual(fam, &state, alpha.coords())?;
    let dual = if chain.is_empty() {
        DualParameter::Interior(descent.lambda.clone())
    } else {
        DualParameter::Boundary
    };
    Ok(MaxEntSolution {
        alpha: alpha.clone(),
        state,
        dual,
        terminal_dual: descent.lambda,
        face_chain: chain,
        support: w,
        iterations: descent.iterations,
        residual,
    })
}

/// `ρ*(α)` for `α` in the relative interior, by damped Newton on the dual
/// `Λ(λ) - <λ, α>`.
pub fn maxent_interior(fam: &GibbsFamily, alpha: &ExpectedValue, cfg: &ToleranceConfig) -> Result<MaxEntSolution> {
    check_membership(fam, alpha.coords(), cfg)?;
    let red = Reduced::new(fam);
    let norm = alpha.coords().iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = red.reduce(alpha.coords(), cfg.tol_face * (1.0 + norm))?;
    let (lambda, state, iterations) = if red.m() == 0 {
        (vec![0.0; fam.r()], DensityMatrix::maximally_mixed(fam.dim()), 0)
    } else {
        let mut reject = |_face, norm, _iterations| -> Result<Option<()>> { Err(Error::BoundaryDetected { norm }) };
        match solver::solve_dual(&red, &a, cfg, &mut reject)? {
            DualOutcome::Interior {
                mu,
                state,
                iterations,
            } => (red.to_original(&mu), state, iterations),
            DualOutcome::Boundary { .. } => unreachable!("every face is rejected"),
        }
    };
    let descent = solver::Descent {
        steps: Vec::new(),
        terminal: fam.clone(),
        terminal_dim: red.m(),
        lambda,
        state,
        iterations,
    };
    finish(fam, alpha, descent)
}

/// `ρ*(α)` for any `α` in the convex support, through the minimal face.
pub fn maxent_extension(fam: &GibbsFamily, alpha: &ExpectedValue, cfg: &ToleranceConfig) -> Result<MaxEntSolution> {
    check_membership(fam, alpha.coords(), cfg)?;
    solve_unchecked(fam, alpha, cfg)
}

fn solve_unchecked(fam: &GibbsFamily, alpha: &ExpectedValue, cfg: &ToleranceConfig) -> Result<MaxEntSolution> {
    let descent = solver::descend(fam, alpha.coords(), cfg)?;
    finish(fam, alpha, descent)
}

/// `π_E(ρ)`: the state of the extension with the same expected values.
pub fn project_onto_extension(fam: &GibbsFamily, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<DensityMatrix> {
    Ok(projection_solution(fam, rho, cfg)?.state)
}

pub fn projection_solution(fam: &GibbsFamily, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<MaxEntSolution> {
    let alpha = fam.expectation(rho)?;
    solve_unchecked(fam, &alpha, cfg)
}

/// `d_E(ρ) = D(ρ, π_E(ρ))`.
pub fn divergence_from_family(fam: &GibbsFamily, rho: &DensityMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    projection_solution(fam, rho, cfg)?.relative_entropy_from(rho, cfg.tol_ker)
}

/// The three divergences of the Pythagorean relation and the mismatch
/// `|D(ρ,σ) - D(ρ,π) - D(π,σ)|`. The mismatch is zero when both sides are
/// infinite and infinite when exactly one is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PythagoreanCheck {
    pub rho_sigma: f64,
    pub rho_pi: f64,
    pub pi_sigma: f64,
    pub residual: f64,
}

pub fn verify_pythagorean(
    fam: &GibbsFamily,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    cfg: &ToleranceConfig,
) -> Result<PythagoreanCheck> {
    let sol = projection_solution(fam, rho, cfg)?;
    let pi = &sol.state;
    let rho_sigma = relative_entropy(rho, sigma, cfg.tol_ker)?;
    let rho_pi = sol.relative_entropy_from(rho, cfg.tol_ker)?;
    let pi_sigma = relative_entropy(pi, sigma, cfg.tol_ker)?;
    let rhs = rho_pi + pi_sigma;
    let residual = match (rho_sigma.is_finite(), rhs.is_finite()) {
        (true, true) => (rho_sigma - rhs).abs(),
        (false, false) => 0.0,
        _ => f64::INFINITY,
    };
    Ok(PythagoreanCheck {
        rho_sigma,
        rho_pi,
        pi_sigma,
        residual,
    })
}

/// `ρ*((1-t) α0 + t α1)`.
pub fn minus_one_geodesic(
    fam: &GibbsFamily,
    alpha0: &ExpectedValue,
    alpha1: &ExpectedValue,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("geodesic parameter {t} outside [0, 1]")));
    }
    Ok(maxent_extension(fam, &alpha0.lerp(alpha1, t), cfg)?.state)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub t: f64,
    pub alpha: Vec<f64>,
    pub entropy: f64,
    pub jump: bool,
}

/// Marks the jump positions in a sequence of samples. `gaps[i]` compares
/// sample `i` with sample `i + 1` (wrapping when `closed`). A pair counts as
/// a jump when the output moves by more than `threshold` and by more than
/// `ratio` times the input step. Two flagged pairs sharing a sample flag the
/// shared sample; an isolated flagged pair flags its second sample.
pub fn flag_jumps(output_gaps: &[f64], input_steps: &[f64], threshold: f64, ratio: f64, closed: bool) -> Vec<bool> {
    let n_pairs = output_gaps.len();
    let n = if closed { n_pairs } else { n_pairs + 1 };
    let pair: Vec<bool> = output_gaps
        .iter()
        .zip(input_steps)
        .map(|(&d, &s)| d > threshold && d > ratio * s)
        .collect();
    let at = |i: isize| -> bool {
        if closed {
            pair[i.rem_euclid(n_pairs as isize) as usize]
        } else {
            i >= 0 && (i as usize) < n_pairs && pair[i as usize]
        }
    };
    let mut flags = vec![false; n];
    for (s, flag) in flags.iter_mut().enumerate() {
        let s = s as isize;
        let (left, right) = (at(s - 1), at(s));
        let isolated_left = left && !at(s - 2);
        *flag = (left && right) || (isolated_left && !right);
    }
    flags
}

/// Evaluates `ρ*` along `path(t)` at `n` parameters (`t_i = i/n` for closed
/// paths, `i/(n-1)` otherwise) and flags discontinuities.
pub fn discontinuity_scan<F>(
    fam: &GibbsFamily,
    path: F,
    n: usize,
    closed: bool,
    cfg: &ToleranceConfig,
) -> Result<Vec<ScanPoint>>
where
    F: Fn(f64) -> Vec<f64> + Sync,
{
    if n < 2 {
        return Err(Error::InvalidArgument("a scan needs at least two points".into()));
    }
    let denom = if closed { n } else { n - 1 } as f64;
    let ts: Vec<f64> = (0..n).map(|i| i as f64 / denom).collect();
    let solved: Vec<(Vec<f64>, MaxEntSolution)> = ts
        .par_iter()
        .map(|&t| {
            let alpha = path(t);
            let sol = maxent_extension(fam, &ExpectedValue::new(alpha.clone())?, cfg)?;
            Ok((alpha, sol))
        })
        .collect::<Result<_>>()?;
    let n_pairs = if closed { n } else { n - 1 };
    let mut gaps = Vec::with_capacity(n_pairs);
    let mut steps = Vec::with_capacity(n_pairs);
    for i in 0..n_pairs {
        let j = (i + 1) % n;
        gaps.push(trace_distance(&solved[i].1.state, &solved[j].1.state)?);
        let step = DVector::from_column_slice(&solved[i].0) - DVector::from_column_slice(&solved[j].0);
        steps.push(step.norm());
    }
    let flags = flag_jumps(&gaps, &steps, cfg.jump_threshold, cfg.jump_ratio, closed);
    Ok(ts
        .into_iter()
        .zip(solved)
        .zip(flags)
        .map(|((t, (alpha, sol)), jump)| ScanPoint {
            t,
            alpha,
            entropy: sol.entropy(),
            jump,
        })
        .collect())
}
