/// Numeric tolerances threaded through every computation.
///
/// One record is passed explicitly instead of module-level constants so that
/// the CLI can override individual knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceConfig {
    /// Max-abs entrywise deviation from self-adjointness.
    pub tol_herm: f64,
    /// Trace and positivity slack for density matrices.
    pub tol_state: f64,
    /// Idempotence slack for projectors.
    pub tol_proj: f64,
    /// Relative eigenvalue gap for ground spaces, scaled by `width + 1`.
    pub tol_gap: f64,
    /// Eigenvalue threshold below which a state's eigenvector is in its kernel.
    pub tol_ker: f64,
    /// Relative support-contact tolerance for faces of the convex support.
    pub tol_face: f64,
    /// Required accuracy of the expectation of a maximum-entropy state (2-norm).
    pub tol_solve: f64,
    /// Dual norm above which the Newton solver gives up on an interior solution.
    pub lambda_cap: f64,
    pub max_newton_iter: usize,
    /// Trace distance above which consecutive scan states count as a jump.
    pub jump_threshold: f64,
    /// Minimum ratio of state change to input change for a flagged jump.
    pub jump_ratio: f64,
    /// Number of probe directions in the convex-support membership check.
    pub probe_directions: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_herm: 1e-12,
            tol_state: 1e-10,
            tol_proj: 1e-10,
            tol_gap: 1e-9,
            tol_ker: 1e-10,
            tol_face: 1e-8,
            tol_solve: 1e-9,
            lambda_cap: 1e4,
            max_newton_iter: 400,
            jump_threshold: 0.1,
            jump_ratio: 10.0,
            probe_directions: 64,
        }
    }
}
