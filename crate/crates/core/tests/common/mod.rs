#![allow(dead_code)]

use argmin::core::{CostFunction, Error, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use finitediff::vec::central_diff;
use nalgebra::DMatrix;
use num_complex::Complex64;
use qmaxent_core::random::{random_hermitian, random_state};
use qmaxent_core::{CMatrix, DensityMatrix, GibbsFamily, ToleranceConfig};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn random_family<R: Rng>(rng: &mut R, dim: usize, r: usize) -> GibbsFamily {
    GibbsFamily::new((0..r).map(|_| random_hermitian(rng, dim)).collect(), "random").unwrap()
}

/// An interior point: the expected value of a random full-rank state.
pub fn interior_alpha<R: Rng>(rng: &mut R, fam: &GibbsFamily) -> Vec<f64> {
    let rho = random_state(rng, fam.dim(), fam.dim());
    fam.expectation(&rho).unwrap().coords().to_vec()
}

/// `L L* / tr(L L*)` for a lower-triangular `L` with real diagonal.
fn state_from_params(p: &[f64], d: usize) -> CMatrix {
    let mut l = CMatrix::zeros(d, d);
    let mut k = 0;
    for i in 0..d {
        l[(i, i)] = Complex64::new(p[k], 0.0);
        k += 1;
        for j in 0..i {
            l[(i, j)] = Complex64::new(p[k], p[k + 1]);
            k += 2;
        }
    }
    let m = &l * l.adjoint();
    let tr = m.trace().re;
    m / Complex64::new(tr, 0.0)
}

fn entropy_of(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum()
}

struct Penalized<'a> {
    ops: &'a [CMatrix],
    alpha: &'a [f64],
    d: usize,
    weight: f64,
}

impl Penalized<'_> {
    fn value(&self, p: &[f64]) -> f64 {
        let rho = state_from_params(p, self.d);
        let violation: f64 = self
            .ops
            .iter()
            .zip(self.alpha)
            .map(|(h, a)| ((h * &rho).trace().re - a).powi(2))
            .sum();
        -entropy_of(&rho) + 0.5 * self.weight * violation
    }
}

impl CostFunction for Penalized<'_> {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, p: &Vec<f64>) -> Result<f64, Error> {
        Ok(self.value(p))
    }
}

impl Gradient for Penalized<'_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;
    fn gradient(&self, p: &Vec<f64>) -> Result<Vec<f64>, Error> {
        let f = |x: &Vec<f64>| -> Result<f64, Error> { Ok(self.value(x)) };
        // the differentiator borrows `f` and must be dropped before it
        let grad = central_diff(&f)(p);
        grad
    }
}

/// Brute-force primal maximizer of the von Neumann entropy under the linear
/// constraints `tr(H_i ρ) = α_i`, by quadratic penalty with continuation.
pub fn primal_maxent(fam: &GibbsFamily, alpha: &[f64]) -> DMatrix<Complex64> {
    let d = fam.dim();
    let ops: Vec<CMatrix> = fam.hamiltonians().iter().map(|h| h.matrix().clone()).collect();
    let mut params: Vec<f64> = (0..d).flat_map(|i| std::iter::once(1.0).chain(std::iter::repeat_n(0.0, 2 * i))).collect();
    for weight in [1e1, 1e3, 1e5, 1e7] {
        let problem = Penalized {
            ops: &ops,
            alpha,
            d,
            weight,
        };
        let solver = LBFGS::new(MoreThuenteLineSearch::new(), 12)
            .with_tolerance_grad(1e-11)
            .unwrap()
            .with_tolerance_cost(1e-15)
            .unwrap();
        let res = Executor::new(problem, solver)
            .configure(|s| s.param(params.clone()).max_iters(2000))
            .run()
            .unwrap();
        params = res.state().get_best_param().unwrap().clone();
    }
    state_from_params(&params, d)
}

pub fn trace_norm_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * (a - b).symmetric_eigen().eigenvalues.iter().map(|x| x.abs()).sum::<f64>()
}

pub fn state(m: CMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix(m, &cfg()).unwrap()
}
