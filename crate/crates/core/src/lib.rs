//! Quantum maximum-entropy inference over Gibbs families.
//!
//! Dense Hermitian linear algebra, Gibbs states and log-partition
//! derivatives, the geometry of convex supports, the maximum-entropy map
//! including its extension to the boundary, and irreducible correlations of
//! small multipartite systems.

pub mod config;
pub mod convex_support;
pub mod correlation;
pub mod error;
pub mod families;
pub mod gibbs;
pub mod io;
pub mod maxent;
pub mod operator;
pub mod random;
mod solver;

pub use config::ToleranceConfig;
pub use convex_support::{
    boundary_trace, exposed_face_projector, exposed_face_range, minimal_face, non_exposed_points, support_function,
    BoundarySample, ExposedFace, FaceChain, FaceStep, SupportPoint,
};
pub use correlation::{
    correlation_decomposition, divergence_from_level, irreducible_correlation, irreducible_correlation_divergence,
    k_local_basis, k_rdms, maxent_from_rdms, multi_information, LocalHamiltonianSpace,
};
pub use error::{Error, Result};
pub use gibbs::{
    angle_pencil, gibbs_state, ground_state_scan, log_partition, plus_one_geodesic, plus_one_geodesic_limit,
    zero_temperature_limit, ExpectedValue, GibbsFamily, GroundStatePoint, LogPartition,
};
pub use maxent::{
    discontinuity_scan, divergence_from_family, maxent_extension, maxent_interior, minus_one_geodesic,
    project_onto_extension, projection_solution, verify_pythagorean, DualParameter, MaxEntSolution, PythagoreanCheck,
};
pub use operator::{
    compress, eig, expm, func_calc, ground_space_projector, logm, partial_trace, relative_entropy, tensor,
    top_space_projector, trace_distance, von_neumann_entropy, CMatrix, DensityMatrix, HermitianOperator, Projector,
    SpectralDecomposition, TensorSystem,
};
