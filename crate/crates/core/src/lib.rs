//! Infinitesimal rigidity of bar-joint frameworks in normed matrix spaces
//! and in product-norm spaces.
//!
//! A [`Framework`] couples a [`Graph`] with a placement in a [`Space`]. The
//! [`rigidity`] module builds the rigidity matrix from support functionals of
//! the norm, [`motions`] supplies the trivial flexes, [`sparsity`] runs the
//! pebble game and [`product`] handles product norms and their colourings.

pub mod constructions;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod matspace;
pub mod motions;
pub mod norms;
pub mod product;
pub mod rigidity;
pub mod space;
pub mod sparsity;
pub mod tolerance;

pub use constructions::{
    construct_k6_minus_e, construct_k7_hyper, construct_k7_hyper_with, construct_km,
    euclidean_regularity_check, Construction, ConstructionOptions, CylKind,
};
pub use error::{Error, Result};
pub use graph::Graph;
pub use linalg::CMatrix;
pub use matspace::{make_chart, motion_param_space, Field, Kind, MatrixElement, MatrixSpaceChart};
pub use motions::{is_completely_full, is_full, trivial_flex_basis, TrivialMotionBasis};
pub use norms::{is_smooth_at, norm_value, singular_values, support_functional, NormArg, NormSpec};
pub use product::{
    colour_edges, decompose, product_analyze, psi_cyl, psi_cyl_inv, psi_hcyl, psi_hcyl_inv,
    ColourReport, ProductAnalysis, ProductNormSpace,
};
pub use rigidity::{
    analyze, classical_rigidity_matrix, finite_difference_check, flex_dim, is_well_positioned,
    maxwell_edge_count, rigidity_matrix, Framework, RigidityReport, Verdict,
};
pub use space::Space;
pub use sparsity::{
    brute_force_sparsity, is_laman, is_spanning_tree, pebble_game, SparsityVerdict,
};
pub use tolerance::ToleranceConfig;
