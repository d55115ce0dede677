//! Exact combinatorics of limit canonical series on nodal curves.

pub mod error;
pub mod linalg;
pub mod lp;
pub mod rat;
pub mod setfn;

pub use error::{Error, Result};
pub mod fixtures;
pub mod graph;
pub mod residue;
pub mod circuits;
pub mod potential;
pub mod cones;
pub mod bricks;
pub mod qlinalg;
pub mod genus0;

/// The user guide from `book/`, one module per chapter. Its code blocks run as doctests.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/set-functions.md")]
    pub mod set_functions {}
    #[doc = include_str!("../../../book/src/level-graphs.md")]
    pub mod level_graphs {}
    #[doc = include_str!("../../../book/src/residues.md")]
    pub mod residues {}
    #[doc = include_str!("../../../book/src/potentials.md")]
    pub mod potentials {}
    #[doc = include_str!("../../../book/src/cones.md")]
    pub mod cones {}
    #[doc = include_str!("../../../book/src/bricks.md")]
    pub mod bricks {}
    #[doc = include_str!("../../../book/src/realization.md")]
    pub mod realization {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
