//! Coamoeba shells of exponential polynomials.
//!
//! Given f(z) = Σ c_α e^{α·z} with support in Z^n, this crate computes the
//! shell of its coamoeba as a weighted toric hyperplane arrangement, the
//! symmetric matrix S_f attached to it, an explicit convex piecewise-affine
//! potential with that arrangement as its second derivative, and exact
//! counts and two-sided bounds for the arrangement's torus vertices and
//! complement components — all cross-checked against built-in brute-force
//! oracles.
//!
//! The pipeline:
//!
//! 1. [`ExpPoly`] — the input object;
//! 2. [`newton_polytope`] — vertices, edges, normal cones, external angles;
//! 3. [`edge_spectrum`] — per-edge one-variable roots with multiplicities;
//! 4. [`build_shell`] / [`s_matrix`] — the arrangement and S_f;
//! 5. [`RonkinEval`] — the potential, its gradient map and skew lattice;
//! 6. [`count`] — exact modular solving, |I_f|, bounds, component census;
//! 7. [`verify`] — coamoeba sampling and directional limit checks.

pub mod count;
pub mod error;
pub mod expoly;
pub mod lattice;
pub mod polytope;
pub mod ronkin;
pub mod shell;
pub mod spectrum;
pub mod verify;

pub use count::{
    component_count_2d, components_2d, estimate_bounds, generic_count, intersection_set,
    ma_mass_identity, parallelogram_lattice_count, solve_modular, torus_distance,
    Components2d, EdgeTupleReport, EstimateBounds, GenericCount, IntersectionSet, TorusPoint,
};
pub use error::{Error, Result};
pub use expoly::{int_norm, primitive_vector, unit_ball_volume, ExpPoly, Term};
pub use num_complex::Complex64;
pub use polytope::{
    newton_polytope, AngleEstimate, AngleOptions, Edge, EdgePoint, NewtonPolytope, NormalCone,
};
pub use ronkin::{
    gradient_classes, phi_basis, GradientClasses, RonkinEval, RonkinTerm, SkewLattice,
};
pub use shell::{
    build_shell, build_shell_with, canonical_plane_key, phase_distance, s_matrix, trace_mass,
    trace_mass_via_v, trace_mass_via_v_with, SMatrix, ShellArrangement, ShellHyperplane,
};
pub use spectrum::{
    edge_spectrum, edge_spectrum_with, find_roots, normalize_phase, restrict_to_edge,
    EdgeSpectrum, SpectrumRoot,
};
pub use verify::{sample_coamoeba_2d, shell_limit_check, CloudPoint, SampleCloud};
