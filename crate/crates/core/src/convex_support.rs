//! Convex support `L = E(M_d)` of a Gibbs family: support function, exposed
//! faces, minimal faces and planar boundary tracing.

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::gibbs::{ExpectedValue, GibbsFamily};
use crate::operator::{eig, top_space_projector, DensityMatrix, Projector};
use crate::random::random_direction;
use crate::solver::{self, Reduced};

pub use crate::solver::FaceStep;

/// Exposed faces of exposed faces, ending at a face that contains the
/// target in its relative interior.
#[derive(Debug, Clone)]
pub struct FaceChain {
    pub steps: Vec<FaceStep>,
    pub terminal_family: GibbsFamily,
    /// Affine dimension of the terminal face.
    pub terminal_dim: usize,
}

impl FaceChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.projector.rank()).collect()
    }

    /// The terminal face projector as an operator on the original space.
    pub fn terminal_projector(&self) -> Projector {
        self.terminal_family.ambient_projector()
    }

    /// Embeds a state of the terminal algebra into the original space.
    pub fn lift(&self, rho: &DensityMatrix) -> DensityMatrix {
        self.terminal_family.lift_state(rho)
    }
}

/// One sample of the support function.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPoint {
    pub direction: Vec<f64>,
    pub value: f64,
    pub face_dim: usize,
}

/// A sample of a planar boundary trace. For 0-faces both endpoints coincide
/// with the exposed point; `x1` lies on the counter-clockwise side.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub angle: f64,
    pub support: SupportPoint,
    pub x0: [f64; 2],
    pub x1: [f64; 2],
}

/// The compressed family over an exposed face. Its expected values are
/// already coordinates in `L`, so the map back is the identity.
#[derive(Debug, Clone)]
pub struct ExposedFace {
    pub projector: Projector,
    pub family: GibbsFamily,
}

fn check_direction(fam: &GibbsFamily, u: &[f64]) -> Result<()> {
    if u.len() != fam.r() {
        return Err(Error::DimensionMismatch {
            expected: fam.r(),
            found: u.len(),
        });
    }
    if u.iter().all(|x| *x == 0.0) {
        return Err(Error::ZeroDirection);
    }
    Ok(())
}

/// `h(u) = max_ρ <u, E(ρ)> = λ_max(H(u))`.
pub fn support_function(fam: &GibbsFamily, u: &[f64]) -> Result<f64> {
    check_direction(fam, u)?;
    Ok(eig(&fam.pencil(u)?).max())
}

/// Projector onto the top eigenspace of `H(u)`.
pub fn exposed_face_projector(fam: &GibbsFamily, u: &[f64], cfg: &ToleranceConfig) -> Result<Projector> {
    check_direction(fam, u)?;
    Ok(top_space_projector(&fam.pencil(u)?, cfg.tol_gap))
}

pub fn exposed_face_range(fam: &GibbsFamily, u: &[f64], cfg: &ToleranceConfig) -> Result<ExposedFace> {
    let projector = exposed_face_projector(fam, u, cfg)?;
    let family = fam.compress(&projector)?;
    Ok(ExposedFace { projector, family })
}

/// Affine dimension of the convex support of a family.
pub fn affine_dimension(fam: &GibbsFamily) -> usize {
    Reduced::new(fam).m()
}

fn probe_directions(r: usize, n: usize) -> Vec<Vec<f64>> {
    match r {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..n)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let mut rng = StdRng::seed_from_u64(0);
            let mut dirs: Vec<Vec<f64>> = (0..r)
                .flat_map(|i| {
                    let mut e = vec![0.0; r];
                    e[i] = 1.0;
                    let mut m = e.clone();
                    m[i] = -1.0;
                    [e, m]
                })
                .collect();
            dirs.extend((0..n).map(|_| random_direction(&mut rng, r)));
            dirs
        }
    }
}

/// Largest normalized violation `(<u, α> - h(u)) / (1 + |h(u)|)` over a fixed
/// set of probe directions.
pub fn separation_gap(fam: &GibbsFamily, alpha: &[f64], n_probes: usize) -> Result<f64> {
    if alpha.len() != fam.r() {
        return Err(Error::DimensionMismatch {
            expected: fam.r(),
            found: alpha.len(),
        });
    }
    probe_directions(fam.r(), n_probes.max(4))
        .par_iter()
        .map(|u| {
            let h = support_function(fam, u)?;
            let s: f64 = u.iter().zip(alpha).map(|(a, b)| a * b).sum();
            Ok((s - h) / (1.0 + h.abs()))
        })
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))
}

pub(crate) fn check_membership(fam: &GibbsFamily, alpha: &[f64], cfg: &ToleranceConfig) -> Result<()> {
    if let Some(bad) = alpha.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("expected value has non-finite entry {bad}")));
    }
    let gap = separation_gap(fam, alpha, cfg.probe_directions)?;
    if gap > cfg.tol_face {
        return Err(Error::NotInConvexSupport { gap });
    }
    Ok(())
}

/// Finds the face of `L` containing `alpha` in its relative interior, as a
/// chain of exposed-face compressions.
pub fn minimal_face(fam: &GibbsFamily, alpha: &ExpectedValue, cfg: &ToleranceConfig) -> Result<FaceChain> {
    check_membership(fam, alpha.coords(), cfg)?;
    let descent = solver::descend(fam, alpha.coords(), cfg)?;
    Ok(FaceChain {
        steps: descent.steps,
        terminal_family: descent.terminal,
        terminal_dim: descent.terminal_dim,
    })
}

struct Exposure {
    value: f64,
    face_dim: usize,
    x0: [f64; 2],
    x1: [f64; 2],
}

fn point_of(fam: &GibbsFamily, p: &Projector) -> Result<[f64; 2]> {
    let c = fam.expectation(&p.normalized_state())?;
    Ok([c.coords()[0], c.coords()[1]])
}

fn expose(fam: &GibbsFamily, angle: f64, cfg: &ToleranceConfig) -> Result<Exposure> {
    let u = [angle.cos(), angle.sin()];
    let pencil = fam.pencil(&u)?;
    let value = eig(&pencil).max();
    let face = exposed_face_range(fam, &u, cfg)?;
    let face_dim = affine_dimension(&face.family).min(1);
    if face_dim == 0 {
        let x = point_of(fam, &face.projector)?;
        return Ok(Exposure {
            value,
            face_dim,
            x0: x,
            x1: x,
        });
    }
    let t = [-angle.sin(), angle.cos()];
    let end = |sign: f64| -> Result<[f64; 2]> {
        let dir = [sign * t[0], sign * t[1]];
        let sub = exposed_face_projector(&face.family, &dir, cfg)?;
        let c = face.family.expectation(&sub.normalized_state())?;
        Ok([c.coords()[0], c.coords()[1]])
    };
    Ok(Exposure {
        value,
        face_dim,
        x0: end(-1.0)?,
        x1: end(1.0)?,
    })
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

const JUMP_TOL: f64 = 1e-7;

/// Limiting angle and the two one-sided exposed points.
type Jump = (f64, [f64; 2], [f64; 2]);

/// Locates a jump of the exposed point inside `(a, b)`.
fn bisect_jump(
    fam: &GibbsFamily,
    mut a: f64,
    mut b: f64,
    mut xa: [f64; 2],
    mut xb: [f64; 2],
    cfg: &ToleranceConfig,
) -> Result<Option<Jump>> {
    for _ in 0..60 {
        if b - a <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        let m = 0.5 * (a + b);
        let e = expose(fam, m, cfg)?;
        if e.face_dim == 1 {
            // landed on the segment normal within the degeneracy tolerance
            return Ok(Some((m, e.x0, e.x1)));
        }
        if dist(xa, e.x0) >= dist(e.x0, xb) {
            b = m;
            xb = e.x0;
        } else {
            a = m;
            xa = e.x0;
        }
    }
    Ok((dist(xa, xb) > JUMP_TOL).then_some((0.5 * (a + b), xa, xb)))
}

/// Samples the boundary of a planar convex support on `n_angles` equally
/// spaced directions in `[0, 2π)`. Exposed segments missed by the grid are
/// located by bisection and inserted in angle order.
pub fn boundary_trace(fam: &GibbsFamily, n_angles: usize, cfg: &ToleranceConfig) -> Result<Vec<BoundarySample>> {
    if fam.r() != 2 {
        return Err(Error::UnsupportedRank(fam.r()));
    }
    if n_angles < 8 {
        return Err(Error::InvalidArgument(format!("boundary trace needs at least 8 angles, got {n_angles}")));
    }
    let angles: Vec<f64> = (0..n_angles).map(|i| 2.0 * PI * i as f64 / n_angles as f64).collect();
    let grid: Vec<Exposure> = angles.par_iter().map(|&a| expose(fam, a, cfg)).collect::<Result<_>>()?;

    let refined: Vec<Option<BoundarySample>> = (0..n_angles)
        .into_par_iter()
        .map(|i| {
            let j = (i + 1) % n_angles;
            let (ei, ej) = (&grid[i], &grid[j]);
            if ei.face_dim == 1 || ej.face_dim == 1 || dist(ei.x0, ej.x0) <= JUMP_TOL {
                return Ok(None);
            }
            let b = if j == 0 { 2.0 * PI } else { angles[j] };
            let Some((theta, xa, xb)) = bisect_jump(fam, angles[i], b, ei.x0, ej.x0, cfg)? else {
                return Ok(None);
            };
            let u = vec![theta.cos(), theta.sin()];
            let value = support_function(fam, &u)?;
            Ok(Some(BoundarySample {
                angle: theta,
                support: SupportPoint {
                    direction: u,
                    value,
                    face_dim: 1,
                },
                x0: xa,
                x1: xb,
            }))
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(n_angles);
    for (i, e) in grid.into_iter().enumerate() {
        out.push(BoundarySample {
            angle: angles[i],
            support: SupportPoint {
                direction: vec![angles[i].cos(), angles[i].sin()],
                value: e.value,
                face_dim: e.face_dim,
            },
            x0: e.x0,
            x1: e.x1,
        });
        if let Some(extra) = &refined[i] {
            if extra.angle < 2.0 * PI {
                out.push(extra.clone());
            }
        }
    }
    Ok(out)
}

/// Endpoints of exposed segments that are not exposed points themselves.
///
/// An endpoint is exposed exactly when directions rotated slightly past the
/// segment normal, towards that endpoint, keep exposing it.
pub fn non_exposed_points(fam: &GibbsFamily, n_angles: usize, cfg: &ToleranceConfig) -> Result<Vec<ExpectedValue>> {
    let trace = boundary_trace(fam, n_angles, cfg)?;
    let n = trace.len();
    let same = |a: [f64; 2], b: [f64; 2]| dist(a, b) <= 1e-9 * (1.0 + a[0].abs() + a[1].abs());
    let mut found: Vec<[f64; 2]> = Vec::new();
    for (i, s) in trace.iter().enumerate() {
        if s.support.face_dim != 1 {
            continue;
        }
        let next = &trace[(i + 1) % n];
        let prev = &trace[(i + n - 1) % n];
        for (end, neighbour) in [(s.x1, next.x0), (s.x0, prev.x1)] {
            if !same(end, neighbour) && !found.iter().any(|f| dist(*f, end) <= 1e-6) {
                found.push(end);
            }
        }
    }
    Ok(found.into_iter().map(|p| ExpectedValue::from(p.to_vec())).collect())
}
