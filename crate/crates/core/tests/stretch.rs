//! Long-running benchmarks, ignored by default:
//!
//! ```text
//! cargo test --release -p relproof --test stretch -- --ignored --nocapture
//! ```
//!
//! They report what the search achieves on the fifth Engel word rather than
//! gating on it.

use std::time::Instant;

use relproof::bracelets::enumerate_upto;
use relproof::cosetenum::{group_order, DEFAULT_MAX_COSETS};
use relproof::engel::{engel_target, engel_word};
use relproof::fixtures::engel5_proof;
use relproof::proofword::{symmetrize, RelatorCheck};
use relproof::search::{prove, reduce_presentation, SearchConfig};
use relproof::{Alphabet, Word};

#[test]
#[ignore]
fn engel5_from_lyndon_bases() {
    let bases: Vec<Word> = enumerate_upto(Alphabet::two(), 5, true)
        .into_iter()
        .map(|c| c.canonical().clone())
        .collect();
    assert_eq!(bases.len(), 41);
    let set = symmetrize(&bases, 4).unwrap();
    let t = engel_target();
    let config = SearchConfig {
        restarts: 8,
        threads: 4,
        ..SearchConfig::default()
    };
    let started = Instant::now();
    let (proof, stats) = prove(&t.core, &t.outer_conjugator, &set, &config);
    let proof = proof.expect("no proof of the fifth Engel word found");
    let report = proof.verify(&engel_word(5).unwrap(), &RelatorCheck::Set(&set));
    assert!(report.is_valid(), "{report}");
    let s = proof.stats(4).unwrap();
    println!("{proof}");
    println!("{s}");
    println!(
        "found after {} runs, {:.2?}, {} states, {} moves tried",
        stats.runs,
        started.elapsed(),
        stats.states_visited,
        stats.moves_tried
    );
    let relators = proof.distinct_presentation(4).unwrap();
    let order = group_order(Alphabet::two(), &relators, DEFAULT_MAX_COSETS).unwrap();
    println!("order of the distinct presentation: {order:?}");
    println!(
        "{} at most 26 relators ({})",
        if s.relator_count <= 26 {
            "REACHED"
        } else {
            "MISSED"
        },
        s.relator_count
    );
}

#[test]
#[ignore]
fn reduce_engel5_presentation() {
    let relators = engel5_proof().distinct_presentation(4).unwrap();
    let started = Instant::now();
    let reduction = reduce_presentation(&relators, 4, &SearchConfig::default()).unwrap();
    for (r, p) in &reduction.removed {
        let set = symmetrize(
            &reduction
                .survivors
                .iter()
                .chain(reduction.removed.iter().map(|(q, _)| q))
                .filter(|q| *q != r)
                .map(|q| q.root(4).unwrap())
                .collect::<Vec<_>>(),
            4,
        )
        .unwrap();
        assert!(p.verify(r, &RelatorCheck::Set(&set)).is_valid());
        println!("removed {r} with {} relators", p.relator_count());
    }
    let order = group_order(Alphabet::two(), &reduction.survivors, DEFAULT_MAX_COSETS).unwrap();
    println!(
        "{} of {} relators survive after {:.2?}; order {order:?}",
        reduction.survivors.len(),
        relators.len(),
        started.elapsed()
    );
    assert_eq!(order, Some(8192));
}
