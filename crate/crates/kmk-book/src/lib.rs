//! Runs the guide's code blocks as doctests.
//!
//! mdbook renders `book/` but cannot execute its Rust snippets against the
//! workspace, so each chapter is included here as module documentation and
//! `cargo test --doc -p kmk-book` keeps the book honest. One module per
//! chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/root-data.md")]
pub mod root_data {}

#[doc = include_str!("../../../book/src/weyl-groups.md")]
pub mod weyl_groups {}

#[doc = include_str!("../../../book/src/characters.md")]
pub mod characters {}

#[doc = include_str!("../../../book/src/localization.md")]
pub mod localization {}

#[doc = include_str!("../../../book/src/structure-constants.md")]
pub mod structure_constants {}

#[doc = include_str!("../../../book/src/dualizing.md")]
pub mod dualizing {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
