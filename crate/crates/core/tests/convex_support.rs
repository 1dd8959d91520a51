mod common;

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qmaxent_core::families::{example1, example2, example3};
use qmaxent_core::random::{random_direction, random_state};
use qmaxent_core::*;

use common::{cfg, random_family, rng};

fn ev(x: &[f64]) -> ExpectedValue {
    ExpectedValue::new(x.to_vec()).unwrap()
}

fn unit(a: f64) -> Vec<f64> {
    vec![a.cos(), a.sin()]
}

fn diag_proj(d: &[f64]) -> HermitianOperator {
    HermitianOperator::from_diagonal(d)
}

#[test]
fn support_function_examples() {
    for i in 0..36 {
        let a = 2.0 * PI * i as f64 / 36.0 + 0.01;
        assert_abs_diff_eq!(support_function(&example2(), &unit(a)).unwrap(), 1.0, epsilon = 1e-12);
        let drop = support_function(&example3(), &unit(a)).unwrap();
        assert_abs_diff_eq!(drop, (2.0 * a.cos()).max(1.0), epsilon = 1e-12);
    }
    let h = support_function(&example1(), &[SQRT_2 / 2.0, SQRT_2 / 2.0]).unwrap();
    assert_abs_diff_eq!(h, SQRT_2, epsilon = 1e-14);
    assert!(matches!(support_function(&example1(), &[0.0, 0.0]), Err(Error::ZeroDirection)));
    assert!(matches!(support_function(&example1(), &[1.0]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn exposed_face_projector_examples() {
    let fam = example1();
    let e2 = diag_proj(&[0.0, 1.0, 0.0]);
    for i in 1..20 {
        let a = 3.0 * FRAC_PI_4 + 0.75 * PI * i as f64 / 20.0;
        let p = exposed_face_projector(&fam, &unit(a), &cfg()).unwrap();
        assert!(p.op().max_abs_diff(&e2) < 1e-12, "angle {a}");
    }

    let p = exposed_face_projector(&example2(), &[-1.0, 0.0], &cfg()).unwrap();
    assert_eq!(p.rank(), 1);
    let v = p.basis().column(0);
    assert_abs_diff_eq!((v[0] + v[1]).norm(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(v[2].norm(), 0.0, epsilon = 1e-12);

    let mut r = rng(41);
    let fam = random_family(&mut r, 5, 3);
    let p = exposed_face_projector(&fam, &random_direction(&mut r, 3), &cfg()).unwrap();
    assert_eq!(p.rank(), 1);
}

#[test]
fn exposed_face_range_examples() {
    let fam = example1();
    let face = exposed_face_range(&fam, &[0.0, -1.0], &cfg()).unwrap();
    assert_eq!(face.projector.rank(), 2);
    assert!(face.projector.op().max_abs_diff(&diag_proj(&[0.0, 1.0, 1.0])) < 1e-12);
    // endpoints of the compressed family's own support in the edge direction
    let left = exposed_face_range(&face.family, &[-1.0, 0.0], &cfg()).unwrap();
    let right = exposed_face_range(&face.family, &[1.0, 0.0], &cfg()).unwrap();
    let xl = face.family.expectation(&left.projector.normalized_state()).unwrap();
    let xr = face.family.expectation(&right.projector.normalized_state()).unwrap();
    assert!(xl.distance(&ev(&[-1.0, -1.0])) < 1e-12);
    assert!(xr.distance(&ev(&[1.0, -1.0])) < 1e-12);

    let vertex = exposed_face_range(&fam, &[1.0, 1.5], &cfg()).unwrap();
    assert_eq!(vertex.projector.rank(), 1);
    let x = fam.expectation(&vertex.projector.normalized_state()).unwrap();
    assert!(x.distance(&ev(&[1.0, 1.0])) < 1e-12);
}

#[test]
fn minimal_face_examples() {
    let fam = example1();
    let chain = minimal_face(&fam, &ev(&[0.0, -1.0]), &cfg()).unwrap();
    assert_eq!(chain.ranks(), vec![2]);
    assert!(chain.terminal_projector().op().max_abs_diff(&diag_proj(&[0.0, 1.0, 1.0])) < 1e-9);
    assert_eq!(chain.terminal_dim, 1);

    let centre = fam.expectation(&DensityMatrix::maximally_mixed(3)).unwrap();
    let chain = minimal_face(&fam, &centre, &cfg()).unwrap();
    assert!(chain.is_empty());
    assert_eq!(chain.terminal_dim, 2);

    let chain = minimal_face(&example3(), &ev(&[0.5, 3f64.sqrt() / 2.0]), &cfg()).unwrap();
    assert_eq!(chain.ranks(), vec![2, 1]);
    let u = &chain.steps[0].direction;
    assert_abs_diff_eq!(u[0], FRAC_PI_3.cos(), epsilon = 1e-8);
    assert_abs_diff_eq!(u[1], FRAC_PI_3.sin(), epsilon = 1e-8);
    assert_eq!(chain.terminal_dim, 0);

    assert!(matches!(minimal_face(&fam, &ev(&[1.5, 0.0]), &cfg()), Err(Error::NotInConvexSupport { .. })));
}

#[test]
fn triangle_trace_has_three_edges() {
    let trace = boundary_trace(&example1(), 720, &cfg()).unwrap();
    let edges: Vec<&BoundarySample> = trace.iter().filter(|s| s.support.face_dim == 1).collect();
    assert_eq!(edges.len(), 3);
    let mut vertices: Vec<[f64; 2]> = Vec::new();
    for s in &trace {
        for x in [s.x0, s.x1] {
            if !vertices.iter().any(|v| (v[0] - x[0]).hypot(v[1] - x[1]) < 1e-9) {
                vertices.push(x);
            }
        }
    }
    assert_eq!(vertices.len(), 3);
    for want in [[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]] {
        assert!(vertices.iter().any(|v| (v[0] - want[0]).hypot(v[1] - want[1]) < 1e-12));
    }
    // exposed_face_range endpoints agree with the traced edges
    for e in edges {
        let face = exposed_face_range(&example1(), &e.support.direction, &cfg()).unwrap();
        let t = [-e.angle.sin(), e.angle.cos()];
        for (sign, x) in [(-1.0, e.x0), (1.0, e.x1)] {
            let sub = exposed_face_projector(&face.family, &[sign * t[0], sign * t[1]], &cfg()).unwrap();
            let y = face.family.expectation(&sub.normalized_state()).unwrap();
            assert!((y.coords()[0] - x[0]).hypot(y.coords()[1] - x[1]) < 1e-8);
        }
    }
}

#[test]
fn disk_trace_is_the_unit_circle() {
    let trace = boundary_trace(&example2(), 360, &cfg()).unwrap();
    assert_eq!(trace.len(), 360);
    for s in &trace {
        assert_eq!(s.support.face_dim, 0);
        assert_abs_diff_eq!(s.x0[0].hypot(s.x0[1]), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.support.value, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn drop_trace_has_two_segments_meeting_at_the_tip() {
    for n in [8, 99, 720] {
        let trace = boundary_trace(&example3(), n, &cfg()).unwrap();
        let edges: Vec<&BoundarySample> = trace.iter().filter(|s| s.support.face_dim == 1).collect();
        assert_eq!(edges.len(), 2, "n = {n}");
        for e in &edges {
            let tip = if e.x0[0] > e.x1[0] { e.x0 } else { e.x1 };
            assert_abs_diff_eq!(tip[0], 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(tip[1], 0.0, epsilon = 1e-12);
        }
        for s in trace.iter().filter(|s| s.support.face_dim == 0 && s.support.value < 1.0 + 1e-12) {
            assert_abs_diff_eq!(s.x0[0].hypot(s.x0[1]), 1.0, epsilon = 1e-9);
        }
    }
}

#[test]
fn non_exposed_points_examples() {
    for n in [8, 99, 720] {
        let mut pts: Vec<Vec<f64>> = non_exposed_points(&example3(), n, &cfg())
            .unwrap()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect();
        pts.sort_by(|a, b| a[1].total_cmp(&b[1]));
        assert_eq!(pts.len(), 2, "n = {n}");
        let h = 3f64.sqrt() / 2.0;
        for (p, y) in pts.iter().zip([-h, h]) {
            assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-6);
            assert_abs_diff_eq!(p[1], y, epsilon = 1e-6);
        }
    }
    assert!(non_exposed_points(&example1(), 720, &cfg()).unwrap().is_empty());
    assert!(non_exposed_points(&example2(), 720, &cfg()).unwrap().is_empty());
}

#[test]
fn planar_operations_reject_other_ranks() {
    let fam = random_family(&mut rng(42), 3, 3);
    assert!(matches!(boundary_trace(&fam, 64, &cfg()), Err(Error::UnsupportedRank(3))));
    assert!(matches!(non_exposed_points(&fam, 64, &cfg()), Err(Error::UnsupportedRank(3))));
    assert!(boundary_trace(&example1(), 4, &cfg()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn support_function_is_positively_homogeneous(seed in any::<u64>(), d in 2usize..6, r in 1usize..4, c in 0.01f64..100.0) {
        let mut g = rng(seed);
        let fam = random_family(&mut g, d, r);
        let u = random_direction(&mut g, r);
        let cu: Vec<f64> = u.iter().map(|x| c * x).collect();
        let (a, b) = (support_function(&fam, &cu).unwrap(), c * support_function(&fam, &u).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
    }

    #[test]
    fn expectations_lie_below_the_support_function(seed in any::<u64>(), d in 2usize..6, r in 1usize..4, k in 1usize..6) {
        let mut g = rng(seed);
        let fam = random_family(&mut g, d, r);
        let rho = random_state(&mut g, d, k.min(d));
        let x = fam.expectation(&rho).unwrap();
        let u = random_direction(&mut g, r);
        let lhs: f64 = u.iter().zip(x.coords()).map(|(a, b)| a * b).sum();
        prop_assert!(lhs <= support_function(&fam, &u).unwrap() + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Boundary points from exposed faces of random qutrit and ququart
    /// families: ranks decrease along the chain, the chain is no longer than
    /// the dimension, and the terminal family has the target in its relative
    /// interior.
    #[test]
    fn face_chains_are_consistent(seed in any::<u64>(), d in 3usize..5, r in 2usize..4) {
        let mut g = rng(seed);
        let fam = random_family(&mut g, d, r);
        let u = random_direction(&mut g, r);
        let face = exposed_face_range(&fam, &u, &cfg()).unwrap();
        let alpha = fam.expectation(&face.projector.normalized_state()).unwrap();
        let chain = minimal_face(&fam, &alpha, &cfg()).unwrap();
        let ranks = chain.ranks();
        prop_assert!(!ranks.is_empty());
        prop_assert!(ranks.windows(2).all(|w| w[0] > w[1]));
        prop_assert!(ranks[0] < d);
        prop_assert!(chain.len() <= d);
        let inner = maxent_interior(&chain.terminal_family, &alpha, &cfg()).unwrap();
        prop_assert!(inner.residual <= 1e-8);
    }
}
