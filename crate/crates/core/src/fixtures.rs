//! Reference proof words shipped with the crate.

use crate::proofword::ProofWord;

/// The fifth Engel word as a product of 26 conjugated fourth powers of words
/// of length at most five, in the parenthesized standard form.
pub const ENGEL5_PROOF: &str = include_str!("../fixtures/engel5.pf");

pub fn engel5_proof() -> ProofWord {
    ProofWord::parse(ENGEL5_PROOF).expect("bundled proof word parses")
}
