//! Proof words for trivial words in finitely presented groups.

pub mod bracelets;
pub mod cli;
pub mod cosetenum;
pub mod engel;
pub mod fixtures;
pub mod freegroup;
pub mod proofword;
pub mod search;

pub use freegroup::{Alphabet, Letter, Word, WordError};
