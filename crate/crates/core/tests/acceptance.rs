//! Acceptance suite, run without the libtest harness so its report is always
//! shown. Every check prints one PASS/FAIL line; the target exits non-zero if
//! any check fails.

use std::collections::{HashSet, VecDeque};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relproof::bracelets::{enumerate_lyndon, enumerate_reduced_bracelets};
use relproof::cosetenum::{
    enumerate_cosets, group_order, Outcome, Presentation, DEFAULT_MAX_COSETS,
};
use relproof::engel::{engel_target, engel_word};
use relproof::fixtures::engel5_proof;
use relproof::proofword::{symmetrize, ProofWord, RelatorCheck};
use relproof::search::{decompile, decompile_for, prove, reconstruct, SearchConfig};
use relproof::{Alphabet, Letter, Word};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn within(limit: Duration, started: Instant) {
    let took = started.elapsed();
    assert!(took <= limit, "took {took:?}, limit {limit:?}");
}

fn random_reduced(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_index(rng.gen_range(0..4));
        if letters.last().is_none_or(|&p| p != l.inverse()) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

fn random_cyclically_reduced(rng: &mut ChaCha8Rng, len: usize) -> Word {
    loop {
        let v = random_reduced(rng, len);
        if v.is_cyclically_reduced() {
            return v;
        }
    }
}

/// A proof of `∏ uᵢ⁻¹ rᵢ uᵢ` with `rᵢ` fourth powers of short bases.
fn random_proof(rng: &mut ChaCha8Rng, max_relators: usize, max_conj: usize) -> ProofWord {
    let n = rng.gen_range(1..=max_relators);
    let pairs: Vec<(Word, Word)> = (0..n)
        .map(|_| {
            let base_len = rng.gen_range(1..=3);
            let r = random_cyclically_reduced(rng, base_len).power(4);
            let u_len = rng.gen_range(0..=max_conj);
            (r, random_reduced(rng, u_len))
        })
        .collect();
    ProofWord::from_conjugates(&pairs)
}

fn bracelet_counts() {
    let started = Instant::now();
    let reduced = [2, 4, 6, 13, 26, 66, 158, 418, 1098, 2968];
    let lyndon = [2, 2, 4, 9, 24, 58, 156, 405, 1092, 2940];
    for len in 1..=10 {
        assert_eq!(
            enumerate_reduced_bracelets(Alphabet::two(), len).len(),
            reduced[len - 1],
            "reduced, length {len}"
        );
        assert_eq!(
            enumerate_lyndon(Alphabet::two(), len).len(),
            lyndon[len - 1],
            "Lyndon, length {len}"
        );
    }
    within(Duration::from_secs(60), started);
}

fn engel_target_shape() {
    let e5 = engel_word(5).unwrap();
    let text = e5.to_string();
    assert_eq!(e5.len(), 72);
    assert!(e5.is_freely_reduced());
    assert!(text.starts_with("BBBB"), "{text}");
    assert!(text.ends_with("bbbb"), "{text}");
    let (core, conj) = e5.cyclic_reduce();
    assert_eq!(core.len(), 64);
    assert_eq!(conj, w("bbbb"));
    assert_eq!(engel_target().core, core);
}

fn fixture_verification() {
    let started = Instant::now();
    let p = engel5_proof();
    assert_eq!(p.relator_count(), 26);
    for r in p.relators() {
        let base = r
            .root(4)
            .unwrap_or_else(|| panic!("{r} is not a fourth power"));
        assert!(base.is_cyclically_reduced(), "{base}");
        assert!((1..=5).contains(&base.len()), "{base}");
    }
    assert_eq!(p.flatten(), engel_word(5).unwrap());
    assert!(p.excision().is_empty());
    let report = p.verify(
        &engel_word(5).unwrap(),
        &RelatorCheck::Powers {
            exponent: 4,
            max_base_len: Some(5),
        },
    );
    assert!(report.is_valid(), "{report}");
    within(Duration::from_secs(1), started);
}

fn fixture_statistics() {
    let s = engel5_proof().stats(4).unwrap();
    assert_eq!(s.overall_length, 444);
    assert_eq!(s.relator_count, 26);
    assert_eq!(s.relator_length_sum, 272);
    assert_eq!(s.mean_base_length.to_string(), "2.62");
    assert_eq!(s.conjugating_pairs, 60);
    assert_eq!(s.pairs_per_relator.to_string(), "2.31");
    assert_eq!(s.distinct_relators, 13);
    assert!(s.identity_holds());
    // (overall, count, sum, pairs) for each of the published proof words.
    let columns = [
        (3180, 250, 1912, 384),
        (616, 28, 408, 76),
        (444, 26, 272, 60),
        (716, 48, 440, 90),
        (842, 60, 552, 85),
    ];
    for (overall, count, sum, pairs) in columns {
        assert_eq!(
            overall,
            sum + 2 * count + 2 * pairs,
            "overall length {overall}"
        );
    }
}

fn folding() {
    let p = ProofWord::parse("a(babababa)A").unwrap();
    assert_eq!(p.fold().to_string(), "(abababab)");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let p = random_proof(&mut rng, 5, 4);
        let once = p.fold();
        assert_eq!(once.fold(), once, "fold is not idempotent on {p}");
        assert_eq!(once.flatten(), p.flatten());
        assert!(once.excision().is_empty());
    }
}

fn bracelet_bases(max_len: usize) -> Vec<Word> {
    (1..=max_len)
        .flat_map(|len| enumerate_reduced_bracelets(Alphabet::two(), len))
        .map(|c| c.canonical().clone())
        .collect()
}

fn search_exponent_two() {
    let started = Instant::now();
    let target = w("ABab");
    // The identity ABab = (AB)²(baB)²(b)² holds in the free group.
    assert_eq!(
        w("AB")
            .power(2)
            .product(&w("baB").power(2))
            .product(&w("b").power(2)),
        target
    );
    let set = symmetrize(&bracelet_bases(3), 2).unwrap();
    let (proof, _) = prove(&target, &Word::empty(), &set, &SearchConfig::default());
    let proof = proof.expect("no proof of ABab found");
    assert!(proof.relator_count() <= 3, "{proof}");
    assert!(proof.verify(&target, &RelatorCheck::Set(&set)).is_valid());
    within(Duration::from_secs(10), started);
}

fn search_exponent_three() {
    let started = Instant::now();
    let target = engel_word(2).unwrap();
    assert_eq!(target, w("BAbaBABabb"));
    let set = symmetrize(&bracelet_bases(4), 3).unwrap();
    let (proof, _) = prove(&target, &Word::empty(), &set, &SearchConfig::default());
    let proof = proof.expect("no proof of E2 found");
    let report = proof.verify(&target, &RelatorCheck::Set(&set));
    assert!(report.is_valid(), "{report}");
    within(Duration::from_secs(300), started);
}

/// Closure of the permutations `(0 1)` and `(1 2)` on three points.
fn s3_oracle() -> usize {
    let a = [1usize, 0, 2];
    let b = [0usize, 2, 1];
    let compose = |p: &[usize; 3], q: &[usize; 3]| [q[p[0]], q[p[1]], q[p[2]]];
    let id = [0usize, 1, 2];
    let power = |p: &[usize; 3], n: usize| (0..n).fold(id, |acc, _| compose(&acc, p));
    assert_eq!(power(&a, 2), id);
    assert_eq!(power(&b, 2), id);
    assert_eq!(power(&compose(&a, &b), 3), id);
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in [&a, &b] {
            let q = compose(&p, g);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

fn coset_enumeration() {
    let s3 = [w("aa"), w("bb"), w("ababab")];
    let order = group_order(Alphabet::two(), &s3, DEFAULT_MAX_COSETS).unwrap();
    // The permutation group satisfies the relators, so it is a quotient and
    // the order is at least its size; 6 is also the full symmetric group.
    assert_eq!(s3_oracle(), 6);
    assert_eq!(order, Some(6));

    let started = Instant::now();
    let relators = engel5_proof().distinct_presentation(4).unwrap();
    assert_eq!(relators.len(), 13);
    let p = Presentation::new(Alphabet::two(), &relators).unwrap();
    let e = enumerate_cosets(&p, DEFAULT_MAX_COSETS).unwrap();
    assert_eq!(e.outcome, Outcome::Order(8192));
    assert!(
        e.total_defined < 2_000_000,
        "{} cosets defined",
        e.total_defined
    );
    within(Duration::from_secs(60), started);
}

fn move_log_round_trip() {
    let p = engel5_proof();
    let t = engel_target();
    let log = decompile_for(&p, &t.core, &t.outer_conjugator).unwrap();
    assert_eq!(log.start, t.core.inverse());
    assert!(log.replay().is_empty());
    let rebuilt = reconstruct(&log, &t.core, &t.outer_conjugator).unwrap();
    let report = rebuilt.verify(
        &engel_word(5).unwrap(),
        &RelatorCheck::Powers {
            exponent: 4,
            max_base_len: Some(5),
        },
    );
    assert!(report.is_valid(), "{report}");
    assert_eq!(rebuilt.relator_count(), 26);

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let p = random_proof(&mut rng, 4, 3);
        for q in [p.clone(), p.fold()] {
            let log = decompile(&q).unwrap();
            assert!(log.replay().is_empty(), "{q}");
        }
    }
}

fn main() {
    let criteria: [(&str, fn()); 9] = [
        ("bracelet counts", bracelet_counts),
        ("Engel target", engel_target_shape),
        ("fixture verification", fixture_verification),
        ("fixture statistics", fixture_statistics),
        ("folding", folding),
        ("search, exponent 2", search_exponent_two),
        ("search, exponent 3", search_exponent_three),
        ("coset enumeration", coset_enumeration),
        ("move log round trip", move_log_round_trip),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!("{status} {name} ({:.2?})", started.elapsed());
        if outcome.is_err() {
            failed.push(name);
        }
    }
    println!("INFO stretch targets are not gated; see the ignored tests in tests/stretch.rs");
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
