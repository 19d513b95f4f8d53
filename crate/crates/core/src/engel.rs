//! Commutators and Engel words on the generators `a` and `b`.

use thiserror::Error;

use crate::freegroup::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngelError {
    #[error("Engel words are defined for n >= 1")]
    ZeroIndex,
}

/// `[x, y] = x⁻¹y⁻¹xy`, freely reduced.
pub fn commutator(x: &Word, y: &Word) -> Word {
    x.inverse().product(&y.inverse()).product(x).product(y)
}

fn a() -> Word {
    Word::from_letters(vec![Letter::new(1)])
}

fn b() -> Word {
    Word::from_letters(vec![Letter::new(2)])
}

/// `E₁ = [a, b]`, `Eₙ = [Eₙ₋₁, b]`, freely reduced.
pub fn engel_word(n: usize) -> Result<Word, EngelError> {
    if n == 0 {
        return Err(EngelError::ZeroIndex);
    }
    let y = b();
    let mut e = commutator(&a(), &y);
    for _ in 1..n {
        e = commutator(&e, &y);
    }
    Ok(e)
}

/// The nested commutator written out letter by letter with no cancellation.
pub fn engel_word_unreduced(n: usize) -> Result<Word, EngelError> {
    if n == 0 {
        return Err(EngelError::ZeroIndex);
    }
    let y = b();
    let expand = |x: &Word| x.inverse().concat(&y.inverse()).concat(x).concat(&y);
    let mut e = expand(&a());
    for _ in 1..n {
        e = expand(&e);
    }
    Ok(e)
}

/// A search target: a cyclically reduced core together with the conjugator
/// that turns it back into the original word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngelTarget {
    pub core: Word,
    pub outer_conjugator: Word,
}

impl EngelTarget {
    pub fn from_word(w: &Word) -> EngelTarget {
        let (core, outer_conjugator) = w.cyclic_reduce();
        EngelTarget {
            core,
            outer_conjugator,
        }
    }

    pub fn engel(n: usize) -> Result<EngelTarget, EngelError> {
        Ok(EngelTarget::from_word(&engel_word(n)?))
    }

    /// The freely reduced word the core stands for.
    pub fn full(&self) -> Word {
        self.core.conjugate(&self.outer_conjugator)
    }
}

/// Target for `E₅`: the 64-letter core and the conjugator `bbbb`.
pub fn engel_target() -> EngelTarget {
    EngelTarget::engel(5).expect("n = 5 is valid")
}
