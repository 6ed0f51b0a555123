//! Simulation and verification tools for uniform attachment random graphs.

pub mod error;
pub mod expansion;
mod flow;
pub mod graph;
pub mod harness;
pub mod oracles;
pub mod percolation;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod structure;
pub mod trials;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{AttachmentGraph, SimpleGraphView, Vertex};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    struct Intro;
    #[doc = include_str!("../../../book/src/model.md")]
    struct Model;
    #[doc = include_str!("../../../book/src/oracles.md")]
    struct Oracles;
    #[doc = include_str!("../../../book/src/structure.md")]
    struct Structure;
    #[doc = include_str!("../../../book/src/expansion.md")]
    struct Expansion;
    #[doc = include_str!("../../../book/src/random-walk.md")]
    struct RandomWalk;
    #[doc = include_str!("../../../book/src/percolation.md")]
    struct Percolation;
    #[doc = include_str!("../../../book/src/harness.md")]
    struct Harness;
}
