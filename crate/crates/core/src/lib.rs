//! Equitable partitions and perfect sets of regular graphs, with
//! character-theoretic necessary conditions for normal Cayley graphs.

pub mod bitset;
pub mod conditions;
pub mod graph;
pub mod group;
pub mod linalg;
pub mod partition;
pub mod search;
