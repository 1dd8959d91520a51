//! Dual Newton solver for maximum-entropy inference with facial descent.
//!
//! The solver works in reduced coordinates: the centered Hamiltonians of a
//! family are orthonormalized in the trace inner product, which removes the
//! identity component and linear dependencies. For `α` in the relative
//! interior, damped Newton on `Λ(μ) - <μ, a>` converges. On the relative
//! boundary the iterates escape to infinity; the escaping Gibbs states
//! concentrate on a cluster of eigenvectors, and a supporting direction
//! with an exactly degenerate top eigenspace is recovered from that cluster
//! by Gauss-Newton. The family is then compressed to that exposed face and
//! the search repeats, so non-exposed faces are reached as exposed faces of
//! exposed faces.

use finitediff::vec::jacobian::central_jacobian_vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::gibbs::{GibbsFamily, Thermal};
use crate::correlation::gell_mann;
use crate::operator::{eig_matrix, CMatrix, DensityMatrix, HermitianOperator, Projector};

/// Relative weight outside an eigenvector cluster below which the cluster
/// is taken as the support of the limit state.
const CLUSTER_OUTSIDE_WEIGHT: f64 = 1e-12;
/// Minimum log-weight gap between a cluster and the rest.
const CLUSTER_LOG_GAP: f64 = 20.0;
const REFINE_ITERS: usize = 60;

/// Orthonormal traceless coordinates for a Gibbs family.
pub(crate) struct Reduced {
    basis: Vec<CMatrix>,
    /// `r x m`; original parameters are `λ = T μ` up to the identity part.
    to_original: DMatrix<f64>,
    /// `m x r`; reduced target `a = A (α - c)`.
    from_alpha: DMatrix<f64>,
    /// `r x (r - m)` directions along which the family is constant.
    null: DMatrix<f64>,
    center: Vec<f64>,
    dim: usize,
}

impl Reduced {
    pub fn new(fam: &GibbsFamily) -> Self {
        let k = fam.dim();
        let r = fam.r();
        let center: Vec<f64> = fam.hamiltonians().iter().map(|h| h.trace() / k as f64).collect();
        let centered: Vec<CMatrix> = fam
            .hamiltonians()
            .iter()
            .zip(&center)
            .map(|(h, &c)| h.matrix() - CMatrix::identity(k, k).scale(c))
            .collect();
        let mut gram = DMatrix::<f64>::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let v = crate::operator::trace_product(&centered[i], &centered[j]);
                gram[(i, j)] = v;
                gram[(j, i)] = v;
            }
        }
        let scale: f64 = fam.hamiltonians().iter().map(|h| h.inner(h)).sum::<f64>().max(1e-300);
        let se = gram.symmetric_eigen();
        let g_max = se.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let thr = (1e-16 * scale).max(1e-14 * g_max);
        let kept: Vec<usize> = (0..r).filter(|&l| se.eigenvalues[l] > thr).collect();
        let dropped: Vec<usize> = (0..r).filter(|&l| se.eigenvalues[l] <= thr).collect();
        let m = kept.len();
        let mut to_original = DMatrix::<f64>::zeros(r, m);
        let mut from_alpha = DMatrix::<f64>::zeros(m, r);
        let mut basis = Vec::with_capacity(m);
        for (col, &l) in kept.iter().enumerate() {
            let s = se.eigenvalues[l].sqrt();
            let w = se.eigenvectors.column(l);
            let mut b = CMatrix::zeros(k, k);
            for i in 0..r {
                b += centered[i].scale(w[i] / s);
                to_original[(i, col)] = w[i] / s;
                from_alpha[(col, i)] = w[i] / s;
            }
            basis.push(b);
        }
        let null = se.eigenvectors.select_columns(dropped.iter());
        Self {
            basis,
            to_original,
            from_alpha,
            null,
            center,
            dim: k,
        }
    }

    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// Reduced target; fails if `α` leaves the affine hull of the convex
    /// support by more than `tol`.
    pub fn reduce(&self, alpha: &[f64], tol: f64) -> Result<DVector<f64>> {
        let shifted = DVector::from_iterator(
            alpha.len(),
            alpha.iter().zip(&self.center).map(|(a, c)| a - c),
        );
        if self.null.ncols() > 0 {
            let off = self.null.transpose() * &shifted;
            let gap = off.norm();
            if gap > tol {
                return Err(Error::NotInConvexSupport { gap });
            }
        }
        Ok(&self.from_alpha * shifted)
    }

    pub fn pencil(&self, mu: &DVector<f64>) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for (b, &c) in self.basis.iter().zip(mu.iter()) {
            acc += b.scale(c);
        }
        acc
    }

    pub fn to_original(&self, mu: &DVector<f64>) -> Vec<f64> {
        (&self.to_original * mu).iter().cloned().collect()
    }
}

struct Eval {
    thermal: Thermal,
    value: f64,
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

fn evaluate(red: &Reduced, a: &DVector<f64>, mu: &DVector<f64>) -> Eval {
    let thermal = Thermal::from_spec(eig_matrix(&red.pencil(mu)));
    let (means, hess) = thermal.moments(red.basis());
    let grad = DVector::from_vec(means) - a;
    let value = thermal.log_z - mu.dot(a);
    Eval {
        thermal,
        value,
        grad,
        hess,
    }
}

fn value_only(red: &Reduced, a: &DVector<f64>, mu: &DVector<f64>) -> f64 {
    let thermal = Thermal::from_spec(eig_matrix(&red.pencil(mu)));
    thermal.log_z - mu.dot(a)
}

/// A supporting direction (reduced coordinates) and its exposed face.
pub(crate) struct RawFace {
    pub direction: DVector<f64>,
    pub projector: Projector,
}

pub(crate) enum DualOutcome<T> {
    Interior {
        mu: DVector<f64>,
        state: DensityMatrix,
        iterations: usize,
    },
    /// A candidate face accepted by the caller.
    Boundary { accepted: T },
}

/// Decides on a candidate face: `Ok(None)` rejects it and the dual
/// iteration continues. The second argument is the current `|μ|`.
pub(crate) type FaceAcceptor<'a, T> = dyn FnMut(RawFace, f64, usize) -> Result<Option<T>> + 'a;

fn newton_direction(hess: &DMatrix<f64>, grad: &DVector<f64>) -> DVector<f64> {
    let m = grad.len();
    let mut reg = 1e-12 * hess.trace().abs() + 1e-300;
    for _ in 0..40 {
        let shifted = hess + DMatrix::<f64>::identity(m, m) * reg;
        if let Some(ch) = shifted.cholesky() {
            let d = -ch.solve(grad);
            if d.iter().all(|x| x.is_finite()) {
                return d;
            }
        }
        reg = (reg * 10.0).max(1e-14);
    }
    -grad.clone()
}

#[derive(Debug, Clone, Copy)]
enum SplitRule {
    /// Outside weight and log gap both past the cluster thresholds.
    Strict,
    /// Outside weight at most the given value.
    Below(f64),
    /// The dominant eigenvector, then the widest gaps.
    Widest,
}

/// Candidate cluster sizes `s` (top-`s` eigenvectors carrying the weight).
fn cluster_splits(thermal: &Thermal, rule: SplitRule) -> Vec<usize> {
    let n = thermal.spec.dim();
    // descending log-weights
    let top = thermal.spec.max();
    let logs: Vec<f64> = (0..n).rev().map(|j| thermal.spec.eigenvalues[j] - top).collect();
    let weights: Vec<f64> = (0..n).rev().map(|j| thermal.weights[j]).collect();
    let mut splits: Vec<(usize, f64)> = Vec::new();
    for s in 1..n {
        let gap = logs[s - 1] - logs[s];
        let outside: f64 = weights[s..].iter().sum();
        let keep = match rule {
            SplitRule::Strict => outside <= CLUSTER_OUTSIDE_WEIGHT && gap >= CLUSTER_LOG_GAP,
            SplitRule::Below(w) => outside <= w,
            SplitRule::Widest => true,
        };
        if keep {
            splits.push((s, gap));
        }
    }
    if !matches!(rule, SplitRule::Widest) {
        splits.into_iter().map(|(s, _)| s).collect()
    } else {
        // the dominant eigenvector first, then the widest gaps
        splits.sort_by(|x, y| (x.0 != 1).cmp(&(y.0 != 1)).then(y.1.total_cmp(&x.1)));
        splits.into_iter().take(4).map(|(s, _)| s).collect()
    }
}

/// Gauss-Newton on a possibly rank-deficient system, with minimum-norm
/// steps and backtracking on the residual norm.
fn gauss_newton<R, J>(x0: DVector<f64>, scale: f64, residual: R, jacobian: J) -> Option<DVector<f64>>
where
    R: Fn(&DVector<f64>) -> Option<DVector<f64>>,
    J: Fn(&DVector<f64>) -> Option<DMatrix<f64>>,
{
    let mut x = x0;
    let mut res = residual(&x)?;
    for _ in 0..REFINE_ITERS {
        let rnorm = res.norm();
        if rnorm <= 1e-15 * scale {
            break;
        }
        let Some(jac) = jacobian(&x) else {
            break;
        };
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        let Ok(step) = svd.solve(&(-&res), 1e-12 * smax.max(1e-300)) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = &x + &step * t;
            if let Some(r2) = residual(&cand) {
                if r2.norm() < rnorm {
                    x = cand;
                    res = r2;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Some(x)
}

/// Refines `seed` to a direction `u` whose top eigenspace of dimension `s`
/// is exactly degenerate and carries a trace-one operator with expectation
/// `a`. For `s = 1` this is the first-order condition `∇h(u) = a`. For
/// larger `s` the operator on the eigenspace is solved for jointly with
/// `u`, starting from the compression of `rho`.
fn refine_direction(
    red: &Reduced,
    a: &DVector<f64>,
    seed: &DVector<f64>,
    s: usize,
    rho: &CMatrix,
) -> Option<DVector<f64>> {
    let n = red.dim;
    let norm = seed.norm();
    if norm == 0.0 || !norm.is_finite() || s >= n {
        return None;
    }
    let u0 = seed / norm;
    let scale = 1.0 + a.norm();
    let u = if s == 1 {
        let res = |u: &DVector<f64>| top_vector_system(red, a, u).map(|(r, _)| r);
        let jac = |u: &DVector<f64>| top_vector_system(red, a, u).map(|(_, j)| j);
        gauss_newton(u0, scale, res, jac)?
    } else {
        let m = red.m();
        let spec = eig_matrix(&red.pencil(&u0));
        let top: Vec<usize> = (n - s..n).collect();
        let w0 = spec.eigenvectors.select_columns(top.iter());
        let sigma0 = w0.adjoint() * rho * &w0;
        let tr = sigma0.trace().re;
        let generators = &gell_mann(s)[1..];
        let coeffs: Vec<f64> = generators
            .iter()
            .map(|g| {
                if tr > 1e-300 {
                    (g.matrix() * &sigma0).trace().re / tr / g.inner(g)
                } else {
                    0.0
                }
            })
            .collect();
        let x0 = DVector::from_iterator(m + coeffs.len(), u0.iter().copied().chain(coeffs));
        let system = FaceSystem {
            red,
            a,
            s,
            w0: &w0,
            generators,
        };
        let res = |x: &DVector<f64>| system.residual(x);
        let jac = |x: &DVector<f64>| {
            let f = |p: &Vec<f64>| -> anyhow::Result<Vec<f64>> {
                system
                    .residual(&DVector::from_column_slice(p))
                    .map(|r| r.data.into())
                    .ok_or_else(|| anyhow::anyhow!("eigenspace lost"))
            };
            let rows = central_jacobian_vec(x.as_slice(), &f).ok()?;
            Some(DMatrix::from_fn(rows.len(), x.len(), |i, l| rows[i][l]))
        };
        let x = gauss_newton(x0, scale, res, jac)?;
        x.rows(0, m).into_owned()
    };
    let n_u = u.norm();
    (n_u > 0.0).then(|| u / n_u)
}

/// Residual and analytic Jacobian of `E(v v*) = a`, `|u| = 1` for the top
/// eigenvector `v` of `H(u)`.
fn top_vector_system(red: &Reduced, a: &DVector<f64>, u: &DVector<f64>) -> Option<(DVector<f64>, DMatrix<f64>)> {
    let m = red.m();
    let n = red.dim;
    let spec = eig_matrix(&red.pencil(u));
    let rotated: Vec<CMatrix> = red
        .basis()
        .iter()
        .map(|b| spec.eigenvectors.adjoint() * b * &spec.eigenvectors)
        .collect();
    let t = n - 1;
    let mu_top = spec.eigenvalues[t];
    let mut r = DVector::<f64>::zeros(m + 1);
    let mut j = DMatrix::<f64>::zeros(m + 1, m);
    for q in 0..m {
        r[q] = rotated[q][(t, t)].re - a[q];
        for l in 0..m {
            let mut acc = 0.0;
            for k in 0..t {
                let gap = mu_top - spec.eigenvalues[k];
                if gap <= 1e-14 {
                    return None;
                }
                acc += 2.0 * (rotated[q][(t, k)] * rotated[l][(k, t)]).re / gap;
            }
            j[(q, l)] = acc;
        }
    }
    r[m] = u.dot(u) - 1.0;
    for l in 0..m {
        j[(m, l)] = 2.0 * u[l];
    }
    Some((r, j))
}

/// Unknowns `(u, c)`: the direction and the coefficients of a trace-one
/// operator `σ = 1/s + Σ c_k G_k` on the top eigenspace of `H(u)`, written
/// in the basis obtained by projecting the fixed reference frame `w0` onto
/// that eigenspace (which keeps the residual a smooth function of `u`).
struct FaceSystem<'a> {
    red: &'a Reduced,
    a: &'a DVector<f64>,
    s: usize,
    w0: &'a CMatrix,
    generators: &'a [HermitianOperator],
}

impl FaceSystem<'_> {
    fn residual(&self, x: &DVector<f64>) -> Option<DVector<f64>> {
        let (m, n, s) = (self.red.m(), self.red.dim, self.s);
        let u = x.rows(0, m).into_owned();
        let h = self.red.pencil(&u);
        let spec = eig_matrix(&h);
        let top: Vec<usize> = (n - s..n).collect();
        let v = spec.eigenvectors.select_columns(top.iter());
        let b = &v * (v.adjoint() * self.w0);
        // Löwdin orthonormalization of the projected frame
        let overlap = eig_matrix(&(b.adjoint() * &b));
        if overlap.min() < 1e-6 {
            return None;
        }
        let inv_sqrt = overlap.reconstruct_with(&overlap.eigenvalues.iter().map(|x| x.powf(-0.5)).collect::<Vec<_>>());
        let w = b * inv_sqrt.matrix();
        let block = w.adjoint() * &h * &w;
        let mean = (0..s).map(|p| block[(p, p)].re).sum::<f64>() / s as f64;
        let mut sigma = CMatrix::identity(s, s) / Complex64::new(s as f64, 0.0);
        for (g, c) in self.generators.iter().zip(x.iter().skip(m)) {
            sigma += g.matrix() * Complex64::new(*c, 0.0);
        }
        let op = &w * sigma * w.adjoint();
        let mut rows = Vec::with_capacity(s * s + m);
        for p in 0..s {
            rows.push(block[(p, p)].re - mean);
            for q in p + 1..s {
                rows.push(block[(p, q)].re);
                rows.push(block[(p, q)].im);
            }
        }
        rows.extend(
            self.red
                .basis()
                .iter()
                .zip(self.a.iter())
                .map(|(bq, aq)| (bq * &op).trace().re - aq),
        );
        rows.push(u.dot(&u) - 1.0);
        Some(DVector::from_vec(rows))
    }
}

/// Validates a refined direction: strict top eigenspace, proper subspace,
/// and support contact at `a`.
fn exposed_face_at(
    red: &Reduced,
    a: &DVector<f64>,
    u: &DVector<f64>,
    cfg: &ToleranceConfig,
) -> Result<Option<RawFace>> {
    let spec = eig_matrix(&red.pencil(u));
    let cols = spec.top_cluster(cfg.tol_gap);
    if cols.len() >= red.dim {
        return Ok(None);
    }
    let h = spec.max();
    let contact = h - u.dot(a);
    let tol = cfg.tol_face * (1.0 + h.abs());
    if contact < -tol {
        return Err(Error::NotInConvexSupport { gap: -contact });
    }
    if contact > tol {
        return Ok(None);
    }
    Ok(Some(RawFace {
        direction: u.clone(),
        projector: spec.projector(&cols),
    }))
}

fn face_candidates(
    red: &Reduced,
    a: &DVector<f64>,
    thermal: &Thermal,
    seeds: &[DVector<f64>],
    rule: SplitRule,
    cfg: &ToleranceConfig,
) -> Result<Vec<RawFace>> {
    let mut out: Vec<RawFace> = Vec::new();
    let rho = thermal.state().matrix().clone();
    for s in cluster_splits(thermal, rule) {
        for seed in seeds {
            let Some(u) = refine_direction(red, a, seed, s, &rho) else {
                continue;
            };
            if let Some(face) = exposed_face_at(red, a, &u, cfg)? {
                let dup = out.iter().any(|f| {
                    f.projector.rank() == face.projector.rank()
                        && f.projector.op().max_abs_diff(face.projector.op()) < 1e-8
                });
                if !dup {
                    out.push(face);
                }
            }
        }
    }
    Ok(out)
}

/// Damped Newton on the dual objective in reduced coordinates.
pub(crate) fn solve_dual<T>(
    red: &Reduced,
    a: &DVector<f64>,
    cfg: &ToleranceConfig,
    accept: &mut FaceAcceptor<'_, T>,
) -> Result<DualOutcome<T>> {
    let m = red.m();
    let conv = 1e-3 * cfg.tol_solve;
    let mut mu = DVector::<f64>::zeros(m);
    let mut ev = evaluate(red, a, &mu);
    let mut last_step = DVector::<f64>::zeros(m);
    let mut stalled = 0usize;
    let mut attempted_at: Option<usize> = None;
    let mut iterations = 0usize;

    while iterations < cfg.max_newton_iter {
        let converged = ev.grad.norm() <= conv;
        // at convergence a cluster missing less than tol_solve of the weight
        // cannot be told apart from a face at the requested accuracy
        let rule = if converged {
            SplitRule::Below(cfg.tol_solve)
        } else {
            SplitRule::Strict
        };
        let clustered = !cluster_splits(&ev.thermal, rule).is_empty();
        let norm = mu.norm();
        if !converged && norm > 0.0 {
            // λ_max(H(μ)) - <μ, a> <= f(μ); negative means a separating direction
            let h = ev.thermal.spec.max() / norm;
            let gap = h - mu.dot(a) / norm;
            if gap < -cfg.tol_face * (1.0 + h.abs()) {
                return Err(Error::NotInConvexSupport { gap: -gap });
            }
        }
        let due = converged || attempted_at.is_none_or(|at| iterations >= at + 5);
        if clustered && due {
            attempted_at = Some(iterations);
            let seeds = [last_step.clone(), mu.clone()];
            for face in face_candidates(red, a, &ev.thermal, &seeds, rule, cfg)? {
                if let Some(accepted) = accept(face, norm, iterations)? {
                    return Ok(DualOutcome::Boundary { accepted });
                }
            }
        }
        if converged {
            let state = ev.thermal.state();
            return Ok(DualOutcome::Interior {
                mu,
                state,
                iterations,
            });
        }
        if norm > cfg.lambda_cap || stalled >= 5 {
            break;
        }

        let dir = {
            let d = newton_direction(&ev.hess, &ev.grad);
            if d.dot(&ev.grad) < 0.0 {
                d
            } else {
                -ev.grad.clone()
            }
        };
        let slope = dir.dot(&ev.grad);
        if -slope <= 1e-10 * (1.0 + ev.value.abs()) {
            // objective differences are below roundoff here; judge the full
            // Newton step by the gradient instead
            let cand = &mu + &dir;
            let trial = evaluate(red, a, &cand);
            if trial.grad.norm() < ev.grad.norm() {
                last_step = &cand - &mu;
                mu = cand;
                ev = trial;
                iterations += 1;
                continue;
            }
        }
        let mut t = 1.0;
        let mut next: Option<DVector<f64>> = None;
        for _ in 0..60 {
            let cand = &mu + &dir * t;
            let v = value_only(red, a, &cand);
            if v <= ev.value + 1e-4 * t * slope {
                next = Some(cand);
                break;
            }
            t *= 0.5;
        }
        let next = match next {
            Some(n) => n,
            None => {
                // roundoff floor of the objective; accept a full step that
                // still reduces the gradient
                let cand = &mu + &dir;
                let trial = evaluate(red, a, &cand);
                if trial.grad.norm() < ev.grad.norm() {
                    last_step = &cand - &mu;
                    mu = cand;
                    ev = trial;
                    iterations += 1;
                    continue;
                }
                stalled = 5;
                continue;
            }
        };
        let new_ev = evaluate(red, a, &next);
        let decrease = (ev.value - new_ev.value) / ev.value.abs().max(1.0);
        stalled = if decrease < 1e-14 { stalled + 1 } else { 0 };
        last_step = &next - &mu;
        mu = next;
        ev = new_ev;
        iterations += 1;
    }

    let norm = mu.norm();
    let seeds = [last_step.clone(), mu.clone()];
    for rule in [SplitRule::Strict, SplitRule::Widest] {
        for face in face_candidates(red, a, &ev.thermal, &seeds, rule, cfg)? {
            if let Some(accepted) = accept(face, norm, iterations)? {
                return Ok(DualOutcome::Boundary { accepted });
            }
        }
    }
    Err(Error::BoundaryDetected { norm })
}

/// One exposed-face step: the supporting direction in the family's own
/// coordinates and the face projector in the algebra of that level.
#[derive(Debug, Clone)]
pub struct FaceStep {
    pub direction: Vec<f64>,
    pub projector: Projector,
}

pub(crate) struct Descent {
    pub steps: Vec<FaceStep>,
    pub terminal: GibbsFamily,
    pub terminal_dim: usize,
    pub lambda: Vec<f64>,
    pub state: DensityMatrix,
    pub iterations: usize,
}

/// Walks down the face lattice until `alpha` lies in the relative interior
/// of the compressed family's convex support.
pub(crate) fn descend(fam: &GibbsFamily, alpha: &[f64], cfg: &ToleranceConfig) -> Result<Descent> {
    descend_inner(fam, alpha, cfg, 0)
}

fn descend_inner(fam: &GibbsFamily, alpha: &[f64], cfg: &ToleranceConfig, depth: usize) -> Result<Descent> {
    if alpha.len() != fam.r() {
        return Err(Error::DimensionMismatch {
            expected: fam.r(),
            found: alpha.len(),
        });
    }
    let alpha_norm = alpha.iter().map(|x| x * x).sum::<f64>().sqrt();
    let red = Reduced::new(fam);
    let a = red.reduce(alpha, cfg.tol_face * (1.0 + alpha_norm))?;
    let finish = |lambda: Vec<f64>, state: DensityMatrix, iterations: usize| -> Result<Descent> {
        let achieved = fam.expectation(&state)?;
        let residual = achieved
            .coords()
            .iter()
            .zip(alpha)
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual > cfg.tol_solve && depth > 0 {
            return Err(Error::FaceSearchFailed(format!("residual {residual:.3e} on compressed face")));
        }
        Ok(Descent {
            steps: Vec::new(),
            terminal: fam.clone(),
            terminal_dim: red.m(),
            lambda,
            state,
            iterations,
        })
    };
    if red.m() == 0 {
        return finish(vec![0.0; fam.r()], DensityMatrix::maximally_mixed(fam.dim()), 0);
    }
    let mut accept = |face: RawFace, _norm: f64, iterations: usize| -> Result<Option<Descent>> {
        let sub = fam.compress(&face.projector)?;
        match descend_inner(&sub, alpha, cfg, depth + 1) {
            Ok(mut below) => {
                let direction = unit(red.to_original(&face.direction));
                below.steps.insert(
                    0,
                    FaceStep {
                        direction,
                        projector: face.projector,
                    },
                );
                below.iterations += iterations;
                Ok(Some(below))
            }
            Err(Error::NotInConvexSupport { .. } | Error::FaceSearchFailed(_) | Error::BoundaryDetected { .. }) => {
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };
    match solve_dual(&red, &a, cfg, &mut accept)? {
        DualOutcome::Interior {
            mu,
            state,
            iterations,
        } => finish(red.to_original(&mu), state, iterations),
        DualOutcome::Boundary { accepted, .. } => Ok(accepted),
    }
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.into_iter().map(|x| x / n).collect()
    } else {
        v
    }
}
