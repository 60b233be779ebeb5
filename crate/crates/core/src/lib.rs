//! Local refinement of polygonal meshes, with a lowest-order virtual element
//! solver for the Poisson problem and an adaptive
//! solve / estimate / mark / refine loop on top.
//!
//! ```
//! use polyrefine::{mesh::Mesh, refine::refine};
//!
//! let square = Mesh::unit_square_grid(1, 1);
//! let refined = refine(&square, &[0]).unwrap();
//! assert_eq!((refined.num_nodes(), refined.num_elements()), (9, 4));
//! ```
//!
//! The guide in `book/` walks through the data structures and algorithms.

pub mod adapt;
pub mod io;
pub mod mesh;
pub mod refine;
pub mod samples;
pub mod vem;

pub use mesh::{Mesh, Point};
pub use refine::refine;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/mesh.md")]
    mod mesh {}
    #[doc = include_str!("../../../book/src/refinement.md")]
    mod refinement {}
    #[doc = include_str!("../../../book/src/vem.md")]
    mod vem {}
    #[doc = include_str!("../../../book/src/adaptivity.md")]
    mod adaptivity {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
