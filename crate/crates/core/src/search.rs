//! Proof search by relator-append and conjugation moves.
//!
//! Starting from `T⁻¹`, a word is driven to the empty word by conjugating with
//! single letters and appending relators. A sequence of such moves ending at
//! the empty word is a [`MoveLog`], and every completed log can be turned into
//! a proof word for `T` ([`reconstruct`]). Conversely every valid proof word
//! can be turned back into a completed log ([`decompile`]).
//!
//! The search itself is a beam search over cyclically reduced words. Each
//! expansion step rotates the current word (a run of single-letter
//! conjugations), appends a relator that cancels about half of itself
//! against the tail (see [`SearchConfig::cancel_slack`]), and cyclically
//! reduces the result (more conjugations). Words shorter than a relator may
//! take it with any amount of cancellation. States are ordered by length,
//! then by move count, and deduplicated up to rotation.

use std::cmp::Reverse;
use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::freegroup::{Letter, Word, WordError};
use crate::proofword::{symmetrize, ProofWord, RelatorCheck, RelatorSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("move log does not reach the empty word (ends at {0})")]
    Incomplete(Word),
    #[error("move log starts at {found}, expected the inverse target {expected}")]
    WrongStart { expected: Word, found: Word },
    #[error("proof word does not excise to the empty word")]
    BadExcision,
    #[error("proof word flattens to {found}, not to the conjugated target {expected}")]
    WrongTarget { expected: Word, found: Word },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    /// `w ↦ g⁻¹ w g`
    Conjugate(Letter),
    /// `w ↦ w r`
    Append(Word),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Conjugate(g) => write!(f, "conjugate {g}"),
            Move::Append(r) => write!(f, "append ({r})"),
        }
    }
}

/// Applies a move to a freely reduced word; the result is freely reduced.
pub fn apply_move(w: &Word, m: &Move) -> Word {
    match m {
        Move::Conjugate(g) => {
            let mut out = Word::from_letters(vec![g.inverse()]).product(w);
            out.push_reduced(*g);
            out
        }
        Move::Append(r) => w.product(r),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveLog {
    pub start: Word,
    pub moves: Vec<Move>,
}

impl MoveLog {
    /// The word reached after every move.
    pub fn replay(&self) -> Word {
        self.moves
            .iter()
            .fold(self.start.free_reduce(), |w, m| apply_move(&w, m))
    }

    pub fn is_complete(&self) -> bool {
        self.replay().is_empty()
    }

    pub fn append_count(&self) -> usize {
        self.moves
            .iter()
            .filter(|m| matches!(m, Move::Append(_)))
            .count()
    }
}

impl fmt::Display for MoveLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "start {}", self.start)?;
        for m in &self.moves {
            write!(f, "\n{m}")?;
        }
        Ok(())
    }
}

/// Builds the proof word certified by a completed log: a product of
/// conjugated relators equal to `outer⁻¹ · target · outer`, folded.
pub fn reconstruct(
    log: &MoveLog,
    target: &Word,
    outer_conjugator: &Word,
) -> Result<ProofWord, SearchError> {
    let expected = target.inverse().free_reduce();
    if log.start.free_reduce() != expected {
        return Err(SearchError::WrongStart {
            expected,
            found: log.start.clone(),
        });
    }
    let end = log.replay();
    if !end.is_empty() {
        return Err(SearchError::Incomplete(end));
    }
    // After the moves the current word is V⁻¹ T⁻¹ V · ∏ sᵢ⁻¹ rᵢ sᵢ where
    // Vᵢ sᵢ = V and Vᵢ is the accumulated conjugator when rᵢ was appended.
    // Hence T = ∏ (Vᵢ⁻¹)⁻¹ rᵢ Vᵢ⁻¹ and the outer conjugator goes on the right.
    let mut v = Word::empty();
    let mut pairs = Vec::new();
    for m in &log.moves {
        match m {
            Move::Conjugate(g) => v.push_reduced(*g),
            Move::Append(r) => pairs.push((r.clone(), v.inverse().product(outer_conjugator))),
        }
    }
    Ok(ProofWord::from_conjugates(&pairs).fold())
}

/// A completed log for the word `p` proves, starting from its inverse.
pub fn decompile(p: &ProofWord) -> Result<MoveLog, SearchError> {
    decompile_for(p, &p.flatten(), &Word::empty())
}

/// A completed log starting from `target⁻¹`, where `p` proves
/// `outer⁻¹ · target · outer`.
pub fn decompile_for(
    p: &ProofWord,
    target: &Word,
    outer_conjugator: &Word,
) -> Result<MoveLog, SearchError> {
    if !p.excision().is_empty() {
        return Err(SearchError::BadExcision);
    }
    let expected = target.conjugate(outer_conjugator);
    let found = p.flatten();
    if found != expected {
        return Err(SearchError::WrongTarget { expected, found });
    }
    let mut moves: Vec<Move> = outer_conjugator
        .free_reduce()
        .letters()
        .iter()
        .map(|&g| Move::Conjugate(g))
        .collect();
    for (conj, rel) in p.conjugators().iter().zip(p.relators()) {
        moves.extend(conj.letters().iter().map(|&g| Move::Conjugate(g)));
        moves.push(Move::Append(rel.clone()));
    }
    Ok(MoveLog {
        start: target.inverse().free_reduce(),
        moves,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub beam_width: usize,
    /// Most relator appends along one search path.
    pub max_moves: usize,
    /// Longest intermediate word kept; `None` means four times the target.
    pub max_word_length: Option<usize>,
    /// Extra runs after the first.
    pub restarts: usize,
    pub seed: u64,
    /// Draw this many base words at random for each run.
    pub base_subset_size: Option<usize>,
    /// Worker threads for restarts; results match a single thread.
    pub threads: usize,
    /// An append must cancel at least `⌈|r|/2⌉ - cancel_slack` letters of
    /// the relator, and at least one. With no slack every move is length
    /// non-increasing, which leaves the fifth Engel word without a single
    /// legal move.
    pub cancel_slack: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            beam_width: 1000,
            max_moves: 200,
            max_word_length: None,
            restarts: 0,
            seed: 0,
            base_subset_size: None,
            threads: 1,
            cancel_slack: 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub runs: usize,
    pub states_visited: usize,
    pub moves_tried: usize,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        log: MoveLog,
        /// Index of the successful run, 0 for the first.
        run: usize,
        /// Base words available to that run.
        bases: Vec<Word>,
    },
    NotFound,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn log(&self) -> Option<&MoveLog> {
        match &self.outcome {
            SearchOutcome::Found { log, .. } => Some(log),
            SearchOutcome::NotFound => None,
        }
    }
}

/// Searches for moves taking `target⁻¹` to the empty word.
pub fn search(target: &Word, relators: &RelatorSet, config: &SearchConfig) -> SearchResult {
    let started = Instant::now();
    let target = target.free_reduce();
    let max_len = config
        .max_word_length
        .unwrap_or(4 * target.len())
        .max(target.len());
    let runs = config.restarts + 1;
    let cutoff = AtomicUsize::new(usize::MAX);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, RunResult)>> = Mutex::new(Vec::new());

    let worker = || loop {
        let run = next.fetch_add(1, Ordering::SeqCst);
        if run >= runs || run > cutoff.load(Ordering::SeqCst) {
            return;
        }
        let r = run_once(&target, relators, config, max_len, run, &cutoff);
        if r.log.is_some() {
            cutoff.fetch_min(run, Ordering::SeqCst);
        }
        results.lock().expect("no worker panicked").push((run, r));
    };
    let threads = config.threads.clamp(1, runs);
    if threads == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(worker);
            }
        });
    }

    let mut results = results.into_inner().expect("no worker panicked");
    results.sort_by_key(|(run, _)| *run);
    let mut stats = SearchStats {
        runs: results.len(),
        ..SearchStats::default()
    };
    let mut outcome = SearchOutcome::NotFound;
    for (run, r) in results {
        stats.states_visited += r.states_visited;
        stats.moves_tried += r.moves_tried;
        if let (Some(log), SearchOutcome::NotFound) = (r.log, &outcome) {
            outcome = SearchOutcome::Found {
                log,
                run,
                bases: r.bases,
            };
        }
    }
    stats.elapsed = started.elapsed();
    SearchResult { outcome, stats }
}

/// Runs [`search`], then reconstructs and verifies the proof against the
/// full word `outer⁻¹ · target · outer`.
pub fn prove(
    target: &Word,
    outer_conjugator: &Word,
    relators: &RelatorSet,
    config: &SearchConfig,
) -> (Option<ProofWord>, SearchStats) {
    let result = search(target, relators, config);
    let proof = result.log().map(|log| {
        let p = reconstruct(log, target, outer_conjugator).expect("search returns completed logs");
        let report = p.verify(
            &target.conjugate(outer_conjugator),
            &RelatorCheck::Set(relators),
        );
        assert!(
            report.is_valid(),
            "search produced an invalid proof:\n{report}"
        );
        p
    });
    (proof, result.stats)
}

struct RunResult {
    log: Option<MoveLog>,
    bases: Vec<Word>,
    states_visited: usize,
    moves_tried: usize,
}

fn run_once(
    target: &Word,
    relators: &RelatorSet,
    config: &SearchConfig,
    max_len: usize,
    run: usize,
    cutoff: &AtomicUsize,
) -> RunResult {
    let mut rng =
        ChaCha8Rng::seed_from_u64(config.seed ^ (run as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut bases: Vec<Word> = relators.bases().cloned().collect();
    let subset;
    let relators = match config.base_subset_size {
        Some(k) if k < bases.len() => {
            bases.shuffle(&mut rng);
            bases.truncate(k);
            bases.sort();
            subset = symmetrize(&bases, relators.exponent()).expect("bases are canonical");
            &subset
        }
        _ => relators,
    };
    let mut beam = Beam::new(target, relators, config.beam_width, max_len, run > 0);
    beam.slack = config.cancel_slack;
    let log = beam.run(config.max_moves, &mut rng, || {
        cutoff.load(Ordering::SeqCst) < run
    });
    RunResult {
        log,
        bases,
        states_visited: beam.states_visited,
        moves_tried: beam.moves_tried,
    }
}

/// Relators arranged in a trie for finding the ones whose prefix cancels
/// against the tail of a word.
struct RelatorIndex {
    relators: Vec<Vec<Letter>>,
    ncols: usize,
    children: Vec<u32>,
    // Relator ids passing through each node, sorted by length.
    through: Vec<Vec<u32>>,
    max_len: usize,
}

const NO_CHILD: u32 = u32::MAX;

impl RelatorIndex {
    fn new(set: &RelatorSet) -> RelatorIndex {
        let relators: Vec<Vec<Letter>> =
            set.members().iter().map(|r| r.letters().to_vec()).collect();
        let rank = relators
            .iter()
            .flatten()
            .map(|l| l.generator())
            .max()
            .unwrap_or(1);
        let ncols = 2 * rank;
        let mut index = RelatorIndex {
            relators,
            ncols,
            children: vec![NO_CHILD; ncols],
            through: vec![Vec::new()],
            max_len: 0,
        };
        for id in 0..index.relators.len() {
            let mut node = 0usize;
            index.through[0].push(id as u32);
            for d in 0..index.relators[id].len() {
                let x = index.relators[id][d].index();
                let slot = node * ncols + x;
                if index.children[slot] == NO_CHILD {
                    index.children[slot] = index.through.len() as u32;
                    index.children.extend(std::iter::repeat_n(NO_CHILD, ncols));
                    index.through.push(Vec::new());
                }
                node = index.children[slot] as usize;
                index.through[node].push(id as u32);
            }
            index.max_len = index.max_len.max(index.relators[id].len());
        }
        for list in &mut index.through {
            list.sort_by_key(|&id| (index.relators[id as usize].len(), id));
        }
        index
    }

    fn child(&self, node: usize, letter: Letter) -> Option<usize> {
        let x = letter.index();
        if x >= self.ncols {
            return None;
        }
        let c = self.children[node * self.ncols + x];
        (c != NO_CHILD).then_some(c as usize)
    }
}

struct Node {
    word: Word,
    parent: u32,
    rotation: usize,
    relator: u32,
    micro_moves: usize,
}

struct Candidate {
    len: usize,
    micro_moves: usize,
    tie: u64,
    word: Word,
    parent: u32,
    rotation: usize,
    relator: u32,
}

struct Beam<'a> {
    index: RelatorIndex,
    relators: &'a RelatorSet,
    width: usize,
    max_len: usize,
    slack: usize,
    randomized: bool,
    nodes: Vec<Node>,
    root_moves: Vec<Move>,
    start: Word,
    visited: HashSet<Word>,
    states_visited: usize,
    moves_tried: usize,
}

/// Conjugations that cyclically reduce `w`, and the result.
fn cyclic_reduction_moves(w: &Word) -> (Vec<Move>, Word) {
    let mut moves = Vec::new();
    let mut cur = w.clone();
    while cur.len() >= 2 && cur.first() == cur.last().map(Letter::inverse) {
        let g = cur.first().expect("non-empty");
        moves.push(Move::Conjugate(g));
        cur = apply_move(&cur, &Move::Conjugate(g));
    }
    (moves, cur)
}

fn canonical_rotation(w: &Word) -> Word {
    w.rotate_left(w.least_rotation())
}

impl<'a> Beam<'a> {
    fn new(
        target: &Word,
        relators: &'a RelatorSet,
        width: usize,
        max_len: usize,
        randomized: bool,
    ) -> Beam<'a> {
        let start = target.inverse().free_reduce();
        let (root_moves, root) = cyclic_reduction_moves(&start);
        Beam {
            index: RelatorIndex::new(relators),
            relators,
            width: width.max(1),
            max_len,
            slack: 0,
            randomized,
            nodes: vec![Node {
                micro_moves: root_moves.len(),
                word: root,
                parent: u32::MAX,
                rotation: 0,
                relator: u32::MAX,
            }],
            root_moves,
            start,
            visited: HashSet::new(),
            states_visited: 1,
            moves_tried: 0,
        }
    }

    fn run(
        &mut self,
        max_moves: usize,
        rng: &mut ChaCha8Rng,
        cancelled: impl Fn() -> bool,
    ) -> Option<MoveLog> {
        if self.nodes[0].word.is_empty() {
            return Some(self.log_for(0));
        }
        self.visited.insert(canonical_rotation(&self.nodes[0].word));
        let mut frontier = vec![0u32];
        for _ in 0..max_moves {
            if frontier.is_empty() || cancelled() {
                return None;
            }
            let mut candidates = Vec::new();
            for &id in &frontier {
                if let Some(done) = self.expand(id, rng, &mut candidates) {
                    return Some(self.log_for(done));
                }
            }
            candidates.sort_by(|a, b| {
                (a.len, a.micro_moves, a.tie)
                    .cmp(&(b.len, b.micro_moves, b.tie))
                    .then_with(|| a.word.cmp(&b.word))
                    .then_with(|| {
                        (a.parent, a.rotation, a.relator).cmp(&(b.parent, b.rotation, b.relator))
                    })
            });
            frontier.clear();
            for c in candidates {
                if frontier.len() >= self.width {
                    break;
                }
                if !self.visited.insert(canonical_rotation(&c.word)) {
                    continue;
                }
                frontier.push(self.nodes.len() as u32);
                self.nodes.push(Node {
                    word: c.word,
                    parent: c.parent,
                    rotation: c.rotation,
                    relator: c.relator,
                    micro_moves: c.micro_moves,
                });
                self.states_visited += 1;
            }
        }
        None
    }

    /// Pushes every child of node `id`; returns the id of a solved child.
    fn expand(&mut self, id: u32, rng: &mut ChaCha8Rng, out: &mut Vec<Candidate>) -> Option<u32> {
        let w = self.nodes[id as usize].word.letters().to_vec();
        let len = w.len();
        let period = Word::from_letters(w.clone()).period();
        let base_moves = self.nodes[id as usize].micro_moves;
        let mut pending: Vec<(usize, u32, usize)> = Vec::new();
        for k in 0..period {
            // Tail of the rotated word, read backwards and inverted.
            let tail = |d: usize| w[(k + len - d) % len].inverse();
            // Short words may take any relator longer than themselves.
            if len < self.index.max_len {
                for (rid, r) in self.index.relators.iter().enumerate() {
                    if r.len() > len {
                        let c = (1..=len).take_while(|&d| r[d - 1] == tail(d)).count();
                        pending.push((k, rid as u32, c));
                    }
                }
            }
            let mut node = 0usize;
            let mut depth = 0usize;
            loop {
                let next_letter = (depth < len).then(|| tail(depth + 1));
                let next_node = next_letter.and_then(|l| self.index.child(node, l));
                if depth > 0 {
                    for &rid in &self.index.through[node] {
                        let r = &self.index.relators[rid as usize];
                        if r.len() > 2 * (depth + self.slack) {
                            break;
                        }
                        if r.len() > len {
                            continue;
                        }
                        let continues = r.len() > depth && next_letter == Some(r[depth]);
                        if !continues {
                            pending.push((k, rid, depth));
                        }
                    }
                }
                match next_node {
                    Some(n) => {
                        node = n;
                        depth += 1;
                    }
                    None => break,
                }
            }
        }
        for (k, rid, c) in pending {
            self.moves_tried += 1;
            let r = &self.index.relators[rid as usize];
            let mut letters = Vec::with_capacity(len - c + r.len() - c);
            letters.extend((0..len - c).map(|i| w[(k + i) % len]));
            letters.extend_from_slice(&r[c..]);
            let mut lo = 0;
            let mut hi = letters.len();
            while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
                lo += 1;
                hi -= 1;
            }
            let strips = lo;
            let child = Word::from_letters(letters[lo..hi].to_vec());
            if child.len() > self.max_len {
                continue;
            }
            let rotate_moves = k.min(len - k);
            let micro_moves = base_moves + rotate_moves + 1 + strips;
            if child.is_empty() {
                self.nodes.push(Node {
                    word: child,
                    parent: id,
                    rotation: k,
                    relator: rid,
                    micro_moves,
                });
                return Some(self.nodes.len() as u32 - 1);
            }
            let tie = if self.randomized { rng.gen() } else { 0 };
            out.push(Candidate {
                len: child.len(),
                micro_moves,
                tie,
                word: child,
                parent: id,
                rotation: k,
                relator: rid,
            });
        }
        None
    }

    fn log_for(&self, id: u32) -> MoveLog {
        let mut path = Vec::new();
        let mut cur = id;
        while cur != 0 {
            path.push(cur);
            cur = self.nodes[cur as usize].parent;
        }
        path.reverse();
        let mut moves = self.root_moves.clone();
        let mut word = self.nodes[0].word.clone();
        for id in path {
            let node = &self.nodes[id as usize];
            let len = word.len();
            let k = node.rotation;
            let rotation: Vec<Move> = if k <= len - k {
                word.letters()[..k]
                    .iter()
                    .map(|&g| Move::Conjugate(g))
                    .collect()
            } else {
                word.letters()[k..]
                    .iter()
                    .rev()
                    .map(|&g| Move::Conjugate(g.inverse()))
                    .collect()
            };
            for m in rotation {
                word = apply_move(&word, &m);
                moves.push(m);
            }
            let r = Word::from_letters(self.index.relators[node.relator as usize].clone());
            debug_assert!(self.relators.contains(&r));
            let m = Move::Append(r);
            word = apply_move(&word, &m);
            moves.push(m);
            let (reduce, reduced) = cyclic_reduction_moves(&word);
            moves.extend(reduce);
            word = reduced;
            debug_assert_eq!(word, node.word);
        }
        MoveLog {
            start: self.start.clone(),
            moves,
        }
    }
}

/// Outcome of [`reduce_presentation`]: the surviving relators and, for each
/// removed relator, a proof of it from the relators that survived.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub survivors: Vec<Word>,
    pub removed: Vec<(Word, ProofWord)>,
}

/// Greedily drops relators that the search can derive from the rest,
/// longest first. Every removal is backed by a verified proof.
pub fn reduce_presentation(
    relators: &[Word],
    exponent: usize,
    budget: &SearchConfig,
) -> Result<Reduction, SearchError> {
    let mut bases = Vec::with_capacity(relators.len());
    for r in relators {
        let base = r
            .root(exponent)
            .ok_or_else(|| WordError::NotCyclicallyReduced(r.clone()))?;
        crate::bracelets::bracelet_canon(&base)?;
        bases.push(base);
    }
    let mut alive: Vec<bool> = vec![true; relators.len()];
    let mut order: Vec<usize> = (0..relators.len()).collect();
    order.sort_by_key(|&i| (Reverse(relators[i].len()), Reverse(relators[i].clone())));
    let mut removed = Vec::new();
    for i in order {
        let others: Vec<Word> = (0..relators.len())
            .filter(|&j| j != i && alive[j])
            .map(|j| bases[j].clone())
            .collect();
        if others.is_empty() {
            continue;
        }
        let set = symmetrize(&others, exponent)?;
        let (proof, _) = prove(&relators[i], &Word::empty(), &set, budget);
        if let Some(p) = proof {
            alive[i] = false;
            removed.push((relators[i].clone(), p));
        }
    }
    let survivors = relators
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(r, _)| r.clone())
        .collect();
    Ok(Reduction { survivors, removed })
}
