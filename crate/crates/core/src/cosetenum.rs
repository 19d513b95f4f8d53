//! Todd–Coxeter coset enumeration over the trivial subgroup, HLT style.
//!
//! Cosets are scanned in definition order against every relator, defining new
//! cosets to complete each scan. When the table is full a lookahead pass
//! scans every live coset without defining anything, then dead cosets are
//! compacted away. Coincidences are processed with a union-find forest.

use std::fmt;

use thiserror::Error;

use crate::freegroup::{Alphabet, Word};

pub const DEFAULT_MAX_COSETS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("relator {index} is trivial in the free group")]
    TrivialRelator { index: usize },
    #[error("relator {index} ({relator}) uses generators outside an alphabet of rank {rank}")]
    OutsideAlphabet {
        index: usize,
        relator: Word,
        rank: usize,
    },
    #[error("max_cosets must be at least 1")]
    NoRoom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl Presentation {
    /// Relators are stored cyclically reduced, which does not change the group.
    pub fn new(alphabet: Alphabet, relators: &[Word]) -> Result<Presentation, CosetError> {
        let mut out = Vec::with_capacity(relators.len());
        for (index, r) in relators.iter().enumerate() {
            if r.max_generator() > alphabet.rank() {
                return Err(CosetError::OutsideAlphabet {
                    index,
                    relator: r.clone(),
                    rank: alphabet.rank(),
                });
            }
            let (core, _) = r.cyclic_reduce();
            if core.is_empty() {
                return Err(CosetError::TrivialRelator { index });
            }
            out.push(core);
        }
        Ok(Presentation {
            alphabet,
            relators: out,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Order(usize),
    /// The table limit was reached; nothing is known about the order.
    Overflow,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Order(n) => write!(f, "{n}"),
            Outcome::Overflow => write!(f, "OVERFLOW"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub outcome: Outcome,
    /// Cosets defined over the whole run, including ones later found equal.
    pub total_defined: usize,
    /// Largest number of simultaneously allocated rows.
    pub max_active: usize,
    pub lookaheads: usize,
    /// The completed table, present only on success.
    pub table: Option<CosetTable>,
}

/// A complete coset table with cosets numbered `0..len`, coset 0 being the
/// subgroup. Columns follow letter indices: a, A, b, B, ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    ncols: usize,
    entries: Vec<u32>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.entries.len() / self.ncols
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn act(&self, coset: usize, word: &Word) -> usize {
        word.letters().iter().fold(coset, |c, l| {
            self.entries[c * self.ncols + l.index()] as usize
        })
    }

    /// Inverse columns agree and every relator fixes every coset.
    pub fn is_consistent(&self, relators: &[Word]) -> bool {
        let n = self.len();
        let inverses_ok = (0..n).all(|c| {
            (0..self.ncols).all(|x| {
                let d = self.entries[c * self.ncols + x] as usize;
                d < n && self.entries[d * self.ncols + (x ^ 1)] as usize == c
            })
        });
        inverses_ok && (0..n).all(|c| relators.iter().all(|r| self.act(c, r) == c))
    }
}

const NONE: u32 = 0;

enum Scan {
    Done,
    Full,
}

struct Enumerator {
    ncols: usize,
    relators: Vec<Vec<usize>>,
    // Row-major, 1-based cosets; row 0 is unused.
    table: Vec<u32>,
    parent: Vec<u32>,
    allocated: usize,
    live: usize,
    max: usize,
    total_defined: usize,
    max_active: usize,
    lookaheads: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    fn new(p: &Presentation, max: usize) -> Enumerator {
        let ncols = 2 * p.alphabet().rank();
        let relators = p
            .relators()
            .iter()
            .map(|r| r.letters().iter().map(|l| l.index()).collect())
            .collect();
        Enumerator {
            ncols,
            relators,
            table: vec![NONE; 2 * ncols],
            parent: vec![0, 1],
            allocated: 1,
            live: 1,
            max,
            total_defined: 1,
            max_active: 1,
            lookaheads: 0,
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.ncols + x] = d;
    }

    #[inline]
    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> bool {
        if self.allocated >= self.max {
            return false;
        }
        self.allocated += 1;
        let d = self.allocated as u32;
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.parent.push(d);
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        self.live += 1;
        self.total_defined += 1;
        self.max_active = self.max_active.max(self.allocated);
        true
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (keep, drop) = (a.min(b), a.max(b));
            self.parent[drop as usize] = keep;
            self.live -= 1;
            self.queue.push(drop);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                self.set(d, x ^ 1, NONE);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let fwd = self.get(mu, x);
                if fwd != NONE {
                    self.merge(nu, fwd);
                    continue;
                }
                let back = self.get(nu, x ^ 1);
                if back != NONE {
                    self.merge(mu, back);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, x ^ 1, mu);
                }
            }
        }
    }

    /// Scans `rel` from coset `alpha`, filling gaps with new cosets when
    /// `fill` is set. Deductions and coincidences are applied as found.
    fn scan(&mut self, alpha: u32, r: usize, fill: bool) -> Scan {
        let len = self.relators[r].len();
        let mut f = alpha;
        let mut i = 0;
        let mut b = alpha;
        let mut j = len;
        loop {
            while i < j {
                let next = self.get(f, self.relators[r][i]);
                if next == NONE {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != alpha {
                    self.coincidence(f, alpha);
                }
                return Scan::Done;
            }
            while j > i {
                let next = self.get(b, self.relators[r][j - 1] ^ 1);
                if next == NONE {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Scan::Done;
            }
            if j == i + 1 {
                let x = self.relators[r][i];
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                return Scan::Done;
            }
            if !fill {
                return Scan::Done;
            }
            if !self.define(f, self.relators[r][i]) {
                return Scan::Full;
            }
        }
    }

    fn lookahead(&mut self) {
        self.lookaheads += 1;
        for c in 1..=self.allocated as u32 {
            for r in 0..self.relators.len() {
                if !self.alive(c) {
                    break;
                }
                self.scan(c, r, false);
            }
        }
    }

    /// Renumbers live cosets `1..=live` in order; returns the new number of
    /// the first live coset at or after `cursor`.
    fn compact(&mut self, cursor: u32) -> u32 {
        let mut map = vec![NONE; self.allocated + 1];
        let mut next = 0u32;
        let mut new_cursor = None;
        for c in 1..=self.allocated as u32 {
            if self.alive(c) {
                next += 1;
                map[c as usize] = next;
                if c >= cursor && new_cursor.is_none() {
                    new_cursor = Some(next);
                }
            }
        }
        let mut table = vec![NONE; (next as usize + 1) * self.ncols];
        for c in 1..=self.allocated as u32 {
            if !self.alive(c) {
                continue;
            }
            let nc = map[c as usize] as usize;
            for x in 0..self.ncols {
                let d = self.get(c, x);
                if d != NONE {
                    let d = self.rep(d);
                    table[nc * self.ncols + x] = map[d as usize];
                }
            }
        }
        self.table = table;
        self.allocated = next as usize;
        self.parent = (0..=next).collect();
        new_cursor.unwrap_or(next + 1)
    }

    fn run(&mut self) -> Outcome {
        let mut alpha = 1u32;
        'cosets: while alpha as usize <= self.allocated {
            if self.alive(alpha) {
                for r in 0..self.relators.len() {
                    if let Scan::Full = self.scan(alpha, r, true) {
                        if !self.make_room(&mut alpha) {
                            return Outcome::Overflow;
                        }
                        continue 'cosets;
                    }
                    if !self.alive(alpha) {
                        break;
                    }
                }
                for x in 0..self.ncols {
                    if !self.alive(alpha) {
                        break;
                    }
                    if self.get(alpha, x) == NONE && !self.define(alpha, x) {
                        if !self.make_room(&mut alpha) {
                            return Outcome::Overflow;
                        }
                        continue 'cosets;
                    }
                }
            }
            alpha += 1;
        }
        Outcome::Order(self.live)
    }

    fn make_room(&mut self, alpha: &mut u32) -> bool {
        let before = self.allocated;
        self.lookahead();
        *alpha = self.compact(*alpha);
        self.allocated < before
    }

    fn finish(mut self) -> CosetTable {
        self.compact(1);
        let n = self.allocated;
        let entries = self.table[self.ncols..]
            .iter()
            .map(|&d| d - 1)
            .collect::<Vec<u32>>();
        debug_assert_eq!(entries.len(), n * self.ncols);
        CosetTable {
            ncols: self.ncols,
            entries,
        }
    }
}

/// Enumerates the cosets of the trivial subgroup, i.e. the group elements.
pub fn enumerate_cosets(p: &Presentation, max_cosets: usize) -> Result<Enumeration, CosetError> {
    if max_cosets == 0 {
        return Err(CosetError::NoRoom);
    }
    let mut e = Enumerator::new(p, max_cosets);
    let outcome = e.run();
    let (total_defined, max_active, lookaheads) = (e.total_defined, e.max_active, e.lookaheads);
    let table = match outcome {
        Outcome::Order(_) => Some(e.finish()),
        Outcome::Overflow => None,
    };
    Ok(Enumeration {
        outcome,
        total_defined,
        max_active,
        lookaheads,
        table,
    })
}

/// Group order, or `None` on overflow.
pub fn group_order(
    alphabet: Alphabet,
    relators: &[Word],
    max_cosets: usize,
) -> Result<Option<usize>, CosetError> {
    let p = Presentation::new(alphabet, relators)?;
    Ok(match enumerate_cosets(&p, max_cosets)?.outcome {
        Outcome::Order(n) => Some(n),
        Outcome::Overflow => None,
    })
}
