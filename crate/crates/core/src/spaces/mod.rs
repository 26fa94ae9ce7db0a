//! Catalog spaces with exact structural annotations, and the pair/space
//! constructors (products, cones, one-point compactifications, spiked bases).

mod annotated;
mod catalog;
mod construct;
mod retraction;
mod urysohn;

pub use annotated::{AnnotatedSpace, AnrKind, ClopenStructure, SpacePair};
pub use catalog::{earring_circle, earring_circle_loop, make_space, n_points, SpaceSpec};
pub use construct::{cone, opc_disjoint_union, product_with, spiked_base_pair, Factor};
pub use retraction::Retraction;
pub use urysohn::urysohn;

pub use annotated::SpaceSource;
pub(crate) use catalog::{earring_circle_count, sine_y};
pub(crate) use construct::{cone_levels, opc_block};
