//! Proof words: products of conjugated relators written in the parenthesized
//! standard form, e.g. `BBa(bAbAbAbA)Ab(aaaa)A`.
//!
//! A proof word with relators `r₁..r_N` is stored as `N + 1` conjugating
//! segments interleaved with the relators. The parentheses only mark where the
//! relators are; they are not letters of the proof.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::bracelets::bracelet_canon;
use crate::freegroup::{Alphabet, Letter, Word, WordError, MAX_RANK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseProblem {
    #[error("invalid character {0:?}")]
    InvalidChar(char),
    #[error("nested '('")]
    Nested,
    #[error("')' without matching '('")]
    Unopened,
    #[error("'(' is never closed")]
    Unclosed,
    #[error("empty relator")]
    EmptyRelator,
    #[error("conjugating segment {0} is not freely reduced")]
    UnreducedConjugator(Word),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("line {line}, column {column}: {problem}")]
    Parse {
        line: usize,
        column: usize,
        problem: ParseProblem,
    },
    #[error("relator {index} ({relator}) is not a power with exponent {exponent} of a cyclically reduced word")]
    NotAPower {
        index: usize,
        relator: Word,
        exponent: usize,
    },
    #[error("a proof word needs one more conjugating segment than relators")]
    Shape,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Relators `w^e` for a set of base words, closed under rotation and inversion.
#[derive(Debug, Clone)]
pub struct RelatorSet {
    exponent: usize,
    bases: BTreeSet<Word>,
    members: Vec<Word>,
    lookup: HashSet<Word>,
}

impl RelatorSet {
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    /// Canonical bracelet representatives of the base words, sorted.
    pub fn bases(&self) -> impl Iterator<Item = &Word> {
        self.bases.iter()
    }

    pub fn base_count(&self) -> usize {
        self.bases.len()
    }

    /// Every rotation of every `w^e` and `(w⁻¹)^e`, sorted.
    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.lookup.contains(w)
    }

    /// Membership decided from the base alone: `w = v^e` with `v` cyclically
    /// reduced and in one of the base classes.
    pub fn contains_by_base(&self, w: &Word) -> bool {
        w.root(self.exponent)
            .and_then(|v| bracelet_canon(&v).ok())
            .is_some_and(|c| self.bases.contains(&c))
    }

    /// One `e`th power per base class, in canonical order.
    pub fn presentation(&self) -> Vec<Word> {
        self.bases.iter().map(|b| b.power(self.exponent)).collect()
    }
}

/// Closes `{w^e : w ∈ bases}` under rotation and inversion.
pub fn symmetrize(bases: &[Word], exponent: usize) -> Result<RelatorSet, WordError> {
    assert!(exponent >= 1, "exponent must be positive");
    let mut canon = BTreeSet::new();
    for b in bases {
        canon.insert(bracelet_canon(b)?);
    }
    let mut members = BTreeSet::new();
    for b in &canon {
        for v in [b.clone(), b.inverse()] {
            for r in v.rotations()? {
                members.insert(r.power(exponent));
            }
        }
    }
    let members: Vec<Word> = members.into_iter().collect();
    let lookup = members.iter().cloned().collect();
    Ok(RelatorSet {
        exponent,
        bases: canon,
        members,
        lookup,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment<'a> {
    Conj(&'a Word),
    Rel(&'a Word),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofWord {
    conjugators: Vec<Word>,
    relators: Vec<Word>,
}

impl ProofWord {
    /// `conjugators` must have exactly one more entry than `relators`.
    pub fn new(conjugators: Vec<Word>, relators: Vec<Word>) -> Result<ProofWord, ProofError> {
        if conjugators.len() != relators.len() + 1 {
            return Err(ProofError::Shape);
        }
        Ok(ProofWord {
            conjugators,
            relators,
        })
    }

    /// Standard form of `∏ uᵢ⁻¹ rᵢ uᵢ` for pairs `(rᵢ, uᵢ)`: the conjugating
    /// strings `u₁⁻¹`, `uᵢ₋₁uᵢ⁻¹` and `u_N` are freely reduced.
    pub fn from_conjugates(pairs: &[(Word, Word)]) -> ProofWord {
        let mut conjugators = Vec::with_capacity(pairs.len() + 1);
        let mut relators = Vec::with_capacity(pairs.len());
        let mut prev = Word::empty();
        for (r, u) in pairs {
            conjugators.push(prev.product(&u.inverse()));
            relators.push(r.clone());
            prev = u.free_reduce();
        }
        conjugators.push(prev);
        ProofWord {
            conjugators,
            relators,
        }
    }

    pub fn parse(text: &str) -> Result<ProofWord, ProofError> {
        parse_proof(text)
    }

    pub fn conjugators(&self) -> &[Word] {
        &self.conjugators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<'_>> {
        let rels = self
            .relators
            .iter()
            .map(Segment::Rel)
            .map(Some)
            .chain([None]);
        self.conjugators
            .iter()
            .map(Segment::Conj)
            .zip(rels)
            .flat_map(|(c, r)| [Some(c), r])
            .flatten()
    }

    /// Concatenation of every segment, freely reduced.
    pub fn flatten(&self) -> Word {
        let mut out = Word::empty();
        for seg in self.segments() {
            let (Segment::Conj(w) | Segment::Rel(w)) = seg;
            for &l in w.letters() {
                out.push_reduced(l);
            }
        }
        out
    }

    /// What is left after deleting the relators, freely reduced.
    pub fn excision(&self) -> Word {
        let mut out = Word::empty();
        for c in &self.conjugators {
            for &l in c.letters() {
                out.push_reduced(l);
            }
        }
        out
    }

    /// Symbols outside the parentheses.
    pub fn outside_symbols(&self) -> usize {
        self.conjugators.iter().map(Word::len).sum()
    }

    /// Symbols including the parentheses.
    pub fn overall_length(&self) -> usize {
        self.outside_symbols() + self.relators.iter().map(|r| r.len() + 2).sum::<usize>()
    }

    /// Folds bordering `x ( r ) x⁻¹` patterns into the relator until none remain.
    pub fn fold(&self) -> ProofWord {
        let mut p = self.clone();
        loop {
            let mut changed = false;
            for i in 0..p.relators.len() {
                while p.fold_at(i) {
                    changed = true;
                }
            }
            if !changed {
                return p;
            }
        }
    }

    fn fold_at(&mut self, i: usize) -> bool {
        let (Some(x), Some(y)) = (self.conjugators[i].last(), self.conjugators[i + 1].first())
        else {
            return false;
        };
        let r = &self.relators[i];
        if y != x.inverse() || !r.is_cyclically_reduced() || r.is_empty() {
            return false;
        }
        // x·r·x⁻¹ is a rotation of r exactly when r ends in x or starts with x⁻¹.
        let rotated = if r.last() == Some(x) {
            r.rotate_left(r.len() - 1)
        } else if r.first() == Some(y) {
            r.rotate_left(1)
        } else {
            return false;
        };
        self.relators[i] = rotated;
        let mut before = self.conjugators[i].clone().into_letters();
        before.pop();
        self.conjugators[i] = Word::from_letters(before);
        self.conjugators[i + 1] =
            Word::from_letters(self.conjugators[i + 1].letters()[1..].to_vec());
        true
    }

    /// Base word of every relator, i.e. its `e`th root.
    pub fn bases(&self, exponent: usize) -> Result<Vec<Word>, ProofError> {
        self.relators
            .iter()
            .enumerate()
            .map(|(index, r)| {
                r.root(exponent)
                    .filter(|v| v.is_cyclically_reduced())
                    .ok_or_else(|| ProofError::NotAPower {
                        index,
                        relator: r.clone(),
                        exponent,
                    })
            })
            .collect()
    }

    pub fn stats(&self, exponent: usize) -> Result<ProofStats, ProofError> {
        let bases = self.bases(exponent)?;
        let relator_count = self.relators.len();
        let relator_length_sum = self.relators.iter().map(Word::len).sum();
        let outside = self.outside_symbols();
        let base_length_sum: usize = bases.iter().map(Word::len).sum();
        Ok(ProofStats {
            overall_length: self.overall_length(),
            relator_count,
            relator_length_sum,
            mean_base_length: Ratio::new(base_length_sum, relator_count),
            conjugating_pairs: outside / 2,
            outside_symbols: outside,
            pairs_per_relator: Ratio::new(outside / 2, relator_count),
            distinct_relators: self.distinct_presentation(exponent)?.len(),
        })
    }

    /// The presentation implicit in the proof: one `e`th power per distinct
    /// base class, in canonical order.
    pub fn distinct_presentation(&self, exponent: usize) -> Result<Vec<Word>, ProofError> {
        let mut classes = BTreeSet::new();
        for b in self.bases(exponent)? {
            classes.insert(bracelet_canon(&b)?);
        }
        Ok(classes.into_iter().map(|b| b.power(exponent)).collect())
    }

    pub fn verify(&self, target: &Word, check: &RelatorCheck<'_>) -> VerifyReport {
        let flattened = self.flatten();
        let excision = self.excision();
        let mut segments = Vec::new();
        for (index, r) in self.relators.iter().enumerate() {
            if let Err(problem) = check.check(r) {
                segments.push(SegmentDiagnostic {
                    index,
                    relator: r.clone(),
                    problem,
                });
            }
        }
        VerifyReport {
            flattens_to_target: flattened == target.free_reduce(),
            every_segment_is_relator: segments.is_empty(),
            excision_trivial: excision.is_empty(),
            flattened,
            excision,
            segments,
        }
    }
}

impl fmt::Display for ProofWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seg in self.segments() {
            match seg {
                Segment::Conj(w) => write!(f, "{w}")?,
                Segment::Rel(w) => write!(f, "({w})")?,
            }
        }
        Ok(())
    }
}

/// Parses the standard notation. Whitespace is ignored and lines whose first
/// non-blank character is `#` are comments.
pub fn parse_proof(text: &str) -> Result<ProofWord, ProofError> {
    let all = Alphabet::new(MAX_RANK).expect("valid rank");
    let mut conjugators = Vec::new();
    let mut relators = Vec::new();
    let mut current = Vec::new();
    let mut inside = false;
    let mut seg_start = (1, 1);
    for (line_no, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for (col, ch) in line.chars().enumerate() {
            let at = (line_no + 1, col + 1);
            let err = |problem| ProofError::Parse {
                line: at.0,
                column: at.1,
                problem,
            };
            match ch {
                '(' if inside => return Err(err(ParseProblem::Nested)),
                '(' => {
                    let conj = Word::from_letters(std::mem::take(&mut current));
                    if !conj.is_freely_reduced() {
                        return Err(ProofError::Parse {
                            line: seg_start.0,
                            column: seg_start.1,
                            problem: ParseProblem::UnreducedConjugator(conj),
                        });
                    }
                    conjugators.push(conj);
                    inside = true;
                    seg_start = at;
                }
                ')' if !inside => return Err(err(ParseProblem::Unopened)),
                ')' => {
                    if current.is_empty() {
                        return Err(err(ParseProblem::EmptyRelator));
                    }
                    relators.push(Word::from_letters(std::mem::take(&mut current)));
                    inside = false;
                    seg_start = (at.0, at.1 + 1);
                }
                c if c.is_whitespace() => {}
                c => match Letter::from_char(c) {
                    Some(l) if all.contains(l) => current.push(l),
                    _ => return Err(err(ParseProblem::InvalidChar(c))),
                },
            }
        }
    }
    if inside {
        return Err(ProofError::Parse {
            line: seg_start.0,
            column: seg_start.1,
            problem: ParseProblem::Unclosed,
        });
    }
    let conj = Word::from_letters(current);
    if !conj.is_freely_reduced() {
        return Err(ProofError::Parse {
            line: seg_start.0,
            column: seg_start.1,
            problem: ParseProblem::UnreducedConjugator(conj),
        });
    }
    conjugators.push(conj);
    ProofWord::new(conjugators, relators)
}

/// How relator segments are checked by [`ProofWord::verify`].
#[derive(Debug, Clone, Copy)]
pub enum RelatorCheck<'a> {
    /// Membership in a symmetrized relator set.
    Set(&'a RelatorSet),
    /// Any `e`th power of a cyclically reduced word, optionally with a bound
    /// on the base length.
    Powers {
        exponent: usize,
        max_base_len: Option<usize>,
    },
}

impl RelatorCheck<'_> {
    fn check(&self, r: &Word) -> Result<(), String> {
        match *self {
            RelatorCheck::Set(set) => {
                if set.contains(r) {
                    Ok(())
                } else {
                    Err(format!(
                        "not in the relator set (exponent {})",
                        set.exponent()
                    ))
                }
            }
            RelatorCheck::Powers {
                exponent,
                max_base_len,
            } => {
                let base = r
                    .root(exponent)
                    .filter(|v| v.is_cyclically_reduced())
                    .ok_or_else(|| {
                        format!("not a power with exponent {exponent} of a cyclically reduced word")
                    })?;
                match max_base_len {
                    Some(k) if base.len() > k => Err(format!("base {base} is longer than {k}")),
                    _ => Ok(()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentDiagnostic {
    pub index: usize,
    pub relator: Word,
    pub problem: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub flattens_to_target: bool,
    pub every_segment_is_relator: bool,
    pub excision_trivial: bool,
    pub flattened: Word,
    pub excision: Word,
    /// One entry per failing relator segment.
    pub segments: Vec<SegmentDiagnostic>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.flattens_to_target && self.every_segment_is_relator && self.excision_trivial
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "flattens to target: {}", yes_no(self.flattens_to_target))?;
        writeln!(
            f,
            "every segment is a relator: {}",
            yes_no(self.every_segment_is_relator)
        )?;
        writeln!(f, "excision trivial: {}", yes_no(self.excision_trivial))?;
        for d in &self.segments {
            writeln!(f, "relator {} ({}): {}", d.index + 1, d.relator, d.problem)?;
        }
        if !self.excision_trivial {
            writeln!(f, "excision word: {}", self.excision)?;
        }
        write!(f, "{}", if self.is_valid() { "VALID" } else { "INVALID" })
    }
}

/// A non-negative rational shown to two decimals, rounding half up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: usize,
    pub den: usize,
}

impl Ratio {
    pub fn new(num: usize, den: usize) -> Ratio {
        Ratio { num, den }
    }

    /// Value in hundredths, rounded half up. Zero denominators give 0.
    pub fn hundredths(&self) -> usize {
        if self.den == 0 {
            return 0;
        }
        (200 * self.num + self.den) / (2 * self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.hundredths();
        write!(f, "{}.{:02}", h / 100, h % 100)
    }
}

/// Reduced proof word statistics, one field per row of the usual table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStats {
    pub overall_length: usize,
    pub relator_count: usize,
    pub relator_length_sum: usize,
    pub mean_base_length: Ratio,
    pub conjugating_pairs: usize,
    pub outside_symbols: usize,
    pub pairs_per_relator: Ratio,
    pub distinct_relators: usize,
}

impl ProofStats {
    /// `overall = relator sum + 2·count + 2·pairs`.
    pub fn identity_holds(&self) -> bool {
        self.overall_length
            == self.relator_length_sum + 2 * self.relator_count + 2 * self.conjugating_pairs
    }
}

impl fmt::Display for ProofStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "overall length {}", self.overall_length)?;
        writeln!(f, "count of relators {}", self.relator_count)?;
        writeln!(f, "sum of relator lengths {}", self.relator_length_sum)?;
        writeln!(f, "mean base word length {}", self.mean_base_length)?;
        writeln!(f, "conjugating pairs {}", self.conjugating_pairs)?;
        writeln!(f, "pairs per relator {}", self.pairs_per_relator)?;
        write!(f, "distinct relators {}", self.distinct_relators)
    }
}
