//! Words in a free group of finite rank.
//!
//! Generators are written as lowercase letters `a..z`, their inverses as the
//! matching uppercase letter. Internally a letter is a signed integer: `+g`
//! for generator `g` (1-based) and `-g` for its inverse.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const MAX_RANK: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid character {ch:?} at position {position}")]
    InvalidChar { ch: char, position: usize },
    #[error("letter {ch:?} at position {position} is outside an alphabet of rank {rank}")]
    OutsideAlphabet {
        ch: char,
        position: usize,
        rank: usize,
    },
    #[error("alphabet rank must be in 1..={MAX_RANK}, got {0}")]
    BadRank(usize),
    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(Word),
    #[error("word {0} is not freely reduced")]
    NotFreelyReduced(Word),
}

/// Number of generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self, WordError> {
        if (1..=MAX_RANK).contains(&rank) {
            Ok(Alphabet { rank })
        } else {
            Err(WordError::BadRank(rank))
        }
    }

    pub fn two() -> Self {
        Alphabet { rank: 2 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All letters in canonical order `a < A < b < B < ...`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (1..=self.rank as i8).flat_map(|g| [Letter(g), Letter(-g)])
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.generator() <= self.rank
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::two()
    }
}

/// A generator or the inverse of a generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i8);

impl Letter {
    /// `value` is `+g` for generator `g` or `-g` for its inverse.
    pub fn new(value: i8) -> Letter {
        assert!(
            value != 0 && value.unsigned_abs() as usize <= MAX_RANK,
            "letter value out of range: {value}"
        );
        Letter(value)
    }

    pub fn value(self) -> i8 {
        self.0
    }

    /// 1-based generator index.
    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Dense 0-based index: a=0, A=1, b=2, B=3, ...
    ///
    /// This is also the sort key, and `index ^ 1` is the index of the inverse.
    pub fn index(self) -> usize {
        2 * (self.generator() - 1) + usize::from(self.is_inverse())
    }

    pub fn from_index(index: usize) -> Letter {
        let g = (index / 2 + 1) as i8;
        Letter(if index.is_multiple_of(2) { g } else { -g })
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        if ch.is_ascii_lowercase() {
            Some(Letter((ch as u8 - b'a' + 1) as i8))
        } else if ch.is_ascii_uppercase() {
            Some(Letter(-((ch as u8 - b'A' + 1) as i8)))
        } else {
            None
        }
    }

    pub fn to_char(self) -> char {
        let offset = (self.generator() - 1) as u8;
        if self.is_inverse() {
            (b'A' + offset) as char
        } else {
            (b'a' + offset) as char
        }
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A sequence of letters, not necessarily freely reduced.
///
/// Ordering is lexicographic in the letter order `a < A < b < B < ...`, with
/// a proper prefix sorting first.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word { letters }
    }

    /// Builds a word from signed integers, e.g. `[-1, -2, 1, 2]` is `ABab`.
    pub fn from_values(values: &[i8]) -> Word {
        Word {
            letters: values.iter().map(|&v| Letter::new(v)).collect(),
        }
    }

    /// Parses the letter notation, ignoring whitespace. Never reduces.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(text.len());
        for (position, ch) in text.chars().enumerate() {
            if ch.is_whitespace() {
                continue;
            }
            let letter = Letter::from_char(ch).ok_or(WordError::InvalidChar { ch, position })?;
            if !alphabet.contains(letter) {
                return Err(WordError::OutsideAlphabet {
                    ch,
                    position,
                    rank: alphabet.rank(),
                });
            }
            letters.push(letter);
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn values(&self) -> Vec<i8> {
        self.letters.iter().map(|l| l.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.generator())
            .max()
            .unwrap_or(0)
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    /// Appends `letter`, cancelling it against the last letter if they are
    /// mutually inverse. Keeps a freely reduced word freely reduced.
    pub fn push_reduced(&mut self, letter: Letter) {
        if self.letters.last() == Some(&letter.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(letter);
        }
    }

    /// Unreduced concatenation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Freely reduced product. `self` need not be reduced.
    pub fn product(&self, other: &Word) -> Word {
        let mut out = self.free_reduce();
        for &l in &other.letters {
            out.push_reduced(l);
        }
        out
    }

    pub fn free_reduce(&self) -> Word {
        let mut out = Word {
            letters: Vec::with_capacity(self.len()),
        };
        for &l in &self.letters {
            out.push_reduced(l);
        }
        out
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.first(), self.last()) {
                (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `free_reduce(u⁻¹ · self · u)`.
    pub fn conjugate(&self, u: &Word) -> Word {
        u.inverse().product(self).product(u)
    }

    /// Splits the freely reduced form into a cyclically reduced core and a
    /// conjugator `u` with `core.conjugate(u) == self.free_reduce()`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = self.free_reduce();
        let n = w.len();
        let mut k = 0;
        while 2 * k + 1 < n && w.letters[k] == w.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let core = Word::from_letters(w.letters[k..n - k].to_vec());
        let conjugator = Word::from_letters(w.letters[n - k..].to_vec());
        (core, conjugator)
    }

    /// Cyclic shift moving the first `k` letters to the end.
    pub fn rotate_left(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut letters = Vec::with_capacity(self.len());
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Distinct cyclic shifts, in shift order starting with `self`.
    pub fn rotations(&self) -> Result<Vec<Word>, WordError> {
        if !self.is_cyclically_reduced() {
            return Err(WordError::NotCyclicallyReduced(self.clone()));
        }
        if self.is_empty() {
            return Ok(vec![Word::empty()]);
        }
        let period = self.period();
        Ok((0..period).map(|k| self.rotate_left(k)).collect())
    }

    /// Smallest `p` dividing `len` with `self` equal to its own shift by `p`.
    pub fn period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|&p| {
                n.is_multiple_of(p) && (p..n).all(|i| self.letters[i] == self.letters[i - p])
            })
            .unwrap_or(0)
    }

    /// `e`-fold concatenation.
    pub fn power(&self, e: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * e);
        for _ in 0..e {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    /// If `self == base^e` for some base, returns the base.
    pub fn root(&self, e: usize) -> Option<Word> {
        if e == 0 || self.is_empty() || !self.len().is_multiple_of(e) {
            return None;
        }
        let m = self.len() / e;
        let base = &self.letters[..m];
        self.letters
            .chunks(m)
            .all(|c| c == base)
            .then(|| Word::from_letters(base.to_vec()))
    }

    /// Start index of the lexicographically least rotation (Booth).
    pub fn least_rotation(&self) -> usize {
        least_rotation(&self.letters)
    }
}

/// Booth's algorithm: index of the least cyclic shift of `s`.
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: isize| &s[i as usize % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k: isize = 0;
    for j in 1..2 * n as isize {
        let sj = at(j);
        let mut i = f[(j - k - 1) as usize];
        while i != -1 && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = f[i as usize];
        }
        if sj != at(k + i + 1) {
            if sj < at(k) {
                k = j;
            }
            f[(j - k) as usize] = -1;
        } else {
            f[(j - k) as usize] = i + 1;
        }
    }
    k as usize % n
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Parses with the full 26-letter alphabet.
impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s, Alphabet { rank: MAX_RANK })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parse_maps_letters() {
        assert_eq!(w("ABab").values(), vec![-1, -2, 1, 2]);
        assert_eq!(w("aA").values(), vec![1, -1]);
        assert_eq!(w("bAbAbAbA").values(), vec![2, -1, 2, -1, 2, -1, 2, -1]);
        assert_eq!(w("ab\n  AB").to_string(), "abAB");
    }

    #[test]
    fn parse_errors_name_position() {
        let two = Alphabet::two();
        assert_eq!(
            Word::parse("ab(a", two),
            Err(WordError::InvalidChar {
                ch: '(',
                position: 2
            })
        );
        assert!(matches!(
            Word::parse("abc", two),
            Err(WordError::OutsideAlphabet { position: 2, .. })
        ));
        assert_eq!(Alphabet::new(0), Err(WordError::BadRank(0)));
        assert_eq!(Alphabet::new(27), Err(WordError::BadRank(27)));
    }

    #[test]
    fn letter_order() {
        let letters: Vec<Letter> = Alphabet::two().letters().collect();
        assert_eq!(letters, vec![Letter(1), Letter(-1), Letter(2), Letter(-2)]);
        assert!(w("aB") < w("b"));
        assert!(w("A") < w("b"));
        for i in 0..8 {
            assert_eq!(Letter::from_index(i).index(), i);
            assert_eq!(Letter::from_index(i).inverse().index(), i ^ 1);
        }
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w("aAb").free_reduce(), w("b"));
        assert_eq!(Word::empty().free_reduce(), Word::empty());
        assert_eq!(w("abBAab").free_reduce(), w("ab"));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").inverse(), w("BA"));
        assert_eq!(Word::empty().inverse(), Word::empty());
        assert_eq!(w("aaB").inverse(), w("bAA"));
    }

    #[test]
    fn conjugate_examples() {
        // u⁻¹wu: conjugating by A gives aababababA, by a gives the rotation.
        assert_eq!(w("abababab").conjugate(&w("a")), w("babababa"));
        assert_eq!(w("abababab").conjugate(&w("A")), w("aababababA"));
        assert_eq!(w("abAB").conjugate(&Word::empty()), w("abAB"));
        assert_eq!(w("aAb").conjugate(&Word::empty()), w("b"));
        assert_eq!(w("bAbAbAbA").conjugate(&w("b")), w("AbAbAbAb"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("aba").cyclic_reduce(), (w("aba"), Word::empty()));
        assert_eq!(w("Bab").cyclic_reduce(), (w("a"), w("b")));
        assert_eq!(w("aA").cyclic_reduce(), (Word::empty(), Word::empty()));
        assert_eq!(w("abA").cyclic_reduce(), (w("b"), w("A")));
    }

    #[test]
    fn rotations_and_powers() {
        assert_eq!(
            w("AbA").rotations().unwrap(),
            vec![w("AbA"), w("bAA"), w("AAb")]
        );
        assert_eq!(w("aa").rotations().unwrap(), vec![w("aa")]);
        assert_eq!(w("abab").rotations().unwrap(), vec![w("abab"), w("baba")]);
        assert!(matches!(
            w("abA").rotations(),
            Err(WordError::NotCyclicallyReduced(_))
        ));
        assert_eq!(w("bA").power(4), w("bAbAbAbA"));
        assert_eq!(w("bAbAbAbA").root(4), Some(w("bA")));
        assert_eq!(w("bAbAbAbb").root(4), None);
        assert_eq!(w("aaa").root(4), None);
    }

    #[test]
    fn least_rotation_small() {
        assert_eq!(w("baa").least_rotation(), 1);
        assert_eq!(w("abab").least_rotation(), 0);
        assert_eq!(w("BbBa").least_rotation(), 3);
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 0..max_len)
            .prop_map(|v| Word::from_values(&v))
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent_and_parity_preserving(x in arb_word(40)) {
            let r = x.free_reduce();
            prop_assert!(r.is_freely_reduced());
            prop_assert_eq!(r.free_reduce(), r.clone());
            prop_assert!(r.len() <= x.len());
            prop_assert_eq!(r.len() % 2, x.len() % 2);
        }

        #[test]
        fn word_times_inverse_is_trivial(x in arb_word(40)) {
            prop_assert!(x.concat(&x.inverse()).free_reduce().is_empty());
            prop_assert_eq!(x.inverse().inverse(), x);
        }

        #[test]
        fn conjugation_undoes(x in arb_word(30), u in arb_word(10)) {
            prop_assert_eq!(x.conjugate(&u).conjugate(&u.inverse()), x.free_reduce());
        }

        #[test]
        fn cyclic_reduce_round_trip(x in arb_word(40)) {
            let (core, conj) = x.cyclic_reduce();
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(core.conjugate(&conj), x.free_reduce());
        }

        #[test]
        fn powers_of_cyclically_reduced(x in arb_word(12), e in 1usize..6) {
            let (core, _) = x.cyclic_reduce();
            let p = core.power(e);
            prop_assert_eq!(p.len(), e * core.len());
            prop_assert!(p.is_cyclically_reduced());
        }

        #[test]
        fn booth_matches_naive(x in arb_word(24)) {
            let n = x.len();
            let naive = (0..n.max(1)).map(|k| x.rotate_left(k)).min().unwrap();
            prop_assert_eq!(x.rotate_left(x.least_rotation()), naive);
        }
    }
}
