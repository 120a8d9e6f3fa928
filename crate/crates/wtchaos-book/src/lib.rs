//! mdbook cannot run book snippets against crate dependencies, so each
//! chapter is included here as a module doc and `cargo test --doc` keeps
//! the book's Rust listings compiling and passing.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/groups-and-weights.md")]
pub mod groups_and_weights {}

#[doc = include_str!("../../../book/src/operators-and-orbits.md")]
pub mod operators_and_orbits {}

#[doc = include_str!("../../../book/src/densities-and-pairs.md")]
pub mod densities_and_pairs {}

#[doc = include_str!("../../../book/src/the-criterion.md")]
pub mod the_criterion {}

#[doc = include_str!("../../../book/src/synthesis.md")]
pub mod synthesis {}

#[doc = include_str!("../../../book/src/irregular-vectors.md")]
pub mod irregular_vectors {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
