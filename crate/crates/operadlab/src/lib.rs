//! Configuration spaces of points in the plane, their Fulton–MacPherson
//! compactifications, the little disks and Swiss-cheese operads, and an
//! explicit operad map `ν` from the former to the latter.
//!
//! Library indices (leaves, slots, disks) are zero-based. The JSON formats
//! and the command line use one-based labels for leaves, permutations and
//! composition slots.

// `!(x > 0.0)` and friends are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod color;
pub mod config_space;
pub mod error;
pub mod fm_operad;
pub mod homotopy_map;
pub mod little_disks;
pub mod permutation;
pub mod random;
pub mod render;
pub mod suites;
pub mod swiss_cheese;
pub mod trees;

pub use color::Color;
pub use config_space::{
    normalize, HalfPlaneConfiguration, NormalizedConfiguration, Pairing, PlanePoint,
    PointConfiguration, Tolerances,
};
pub use error::{Error, Result};
pub use fm_operad::{
    evaluate_chart, gamma_insert, graft_decorated, ChartPoint, ChartValue, ColoredChartPoint,
    ColoredDecoratedTree, DecoratedTree, GammaResult, ScaleVector,
};
pub use homotopy_map::{bump, mu, nu, nu_boundary, nu_interior, Bump, CollarParams};
pub use little_disks::{convex_blend, Disk, DiskConfiguration, Violation};
pub use permutation::Permutation;
pub use swiss_cheese::{ColoredLabel, SCConfiguration, SwissCheeseValue};
pub use trees::{enumerate_trees, face_poset, Child, ColoredTree, FacePoset, LabeledTree};
