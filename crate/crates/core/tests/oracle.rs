mod common;

use common::*;
use qmaxent_core::*;

#[test]
fn dual_newton_matches_primal_maximizer_on_random_qutrit_families() {
    let mut rng = rng(11);
    for _ in 0..20 {
        let fam = random_family(&mut rng, 3, 2);
        let alpha = interior_alpha(&mut rng, &fam);
        let sol = maxent_interior(&fam, &ExpectedValue::new(alpha.clone()).unwrap(), &cfg()).unwrap();
        let oracle = primal_maxent(&fam, &alpha);
        let d = trace_norm_distance(sol.state.matrix(), &oracle);
        assert!(d < 1e-4);
    }
}
