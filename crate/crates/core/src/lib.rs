//! Exact tools for counting and sampling list colourings of locally sparse
//! graphs.

pub mod bounds;
pub mod counting;
pub mod generators;
pub mod graph;
pub mod sampler;
pub mod verify;
