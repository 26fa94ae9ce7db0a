//! Finite metric machinery: nets, spatial queries, ε-graphs, moduli of continuity
//! and the sup metric on sampled maps.

mod graph;
mod index;
mod modulus;
mod net;
mod sup;

pub use graph::{
    build_epsilon_graph, components_at_scale, graph_components, reachable_avoiding,
    shortest_path_avoiding, widest_path_value, EpsilonGraph, UnionFind,
};
pub use index::SpatialIndex;
pub use modulus::{check_modulus_values, Modulus};
pub use net::{Block, Metric, Net};
pub use sup::{sup_distance, sup_distance_bound, SupBound};
