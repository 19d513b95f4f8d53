//! Reduced bracelets: freely and cyclically reduced words up to rotation and
//! inversion. Lyndon words here are the reduced bracelets that are not proper
//! powers.

use crate::freegroup::{Alphabet, Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraceletClass {
    canonical: Word,
}

impl BraceletClass {
    pub fn of(w: &Word) -> Result<Self, WordError> {
        Ok(BraceletClass {
            canonical: bracelet_canon(w)?,
        })
    }

    pub fn canonical(&self) -> &Word {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    /// Number of distinct words in the class.
    pub fn size(&self) -> usize {
        let p = self.canonical.period();
        let inv = self.canonical.inverse();
        let inv_canon = inv.rotate_left(inv.least_rotation());
        // The inverse orbit either coincides with the forward orbit or is disjoint.
        let self_inverse = (0..p).any(|k| self.canonical.rotate_left(k) == inv_canon);
        if self_inverse {
            p
        } else {
            2 * p
        }
    }
}

/// Least word among all rotations of `w` and of `w⁻¹`, letter order `a < A < b < B`.
pub fn bracelet_canon(w: &Word) -> Result<Word, WordError> {
    if w.is_empty() || !w.is_cyclically_reduced() {
        return Err(WordError::NotCyclicallyReduced(w.clone()));
    }
    let forward = w.rotate_left(w.least_rotation());
    let inv = w.inverse();
    let backward = inv.rotate_left(inv.least_rotation());
    Ok(forward.min(backward))
}

/// True iff `w = v^k` for some `k ≥ 2`.
pub fn is_proper_power(w: &Word) -> bool {
    !w.is_empty() && w.period() < w.len()
}

/// One canonical representative per class of freely and cyclically reduced
/// words of the given length, sorted.
pub fn enumerate_reduced_bracelets(alphabet: Alphabet, length: usize) -> Vec<BraceletClass> {
    let mut out = Vec::new();
    if length == 0 {
        return out;
    }
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut buf = Vec::with_capacity(length);
    // A canonical word starts with the smallest generator it uses, uninverted.
    for first in letters.iter().copied().filter(|l| !l.is_inverse()) {
        buf.clear();
        buf.push(first);
        extend(&letters, first.generator(), length, &mut buf, &mut out);
    }
    out.sort();
    out
}

fn extend(
    letters: &[Letter],
    min_generator: usize,
    length: usize,
    buf: &mut Vec<Letter>,
    out: &mut Vec<BraceletClass>,
) {
    if buf.len() == length {
        let w = Word::from_letters(buf.clone());
        if w.is_cyclically_reduced() && bracelet_canon(&w).as_ref() == Ok(&w) {
            out.push(BraceletClass { canonical: w });
        }
        return;
    }
    let prev = *buf.last().expect("buffer starts non-empty");
    for &l in letters {
        if l.generator() < min_generator || l == prev.inverse() {
            continue;
        }
        buf.push(l);
        extend(letters, min_generator, length, buf, out);
        buf.pop();
    }
}

pub fn enumerate_lyndon(alphabet: Alphabet, length: usize) -> Vec<BraceletClass> {
    enumerate_reduced_bracelets(alphabet, length)
        .into_iter()
        .filter(|c| !is_proper_power(c.canonical()))
        .collect()
}

/// Concatenated enumerations for lengths `1..=max_length`, shortest first.
pub fn enumerate_upto(
    alphabet: Alphabet,
    max_length: usize,
    lyndon_only: bool,
) -> Vec<BraceletClass> {
    (1..=max_length)
        .flat_map(|n| {
            if lyndon_only {
                enumerate_lyndon(alphabet, n)
            } else {
                enumerate_reduced_bracelets(alphabet, n)
            }
        })
        .collect()
}
