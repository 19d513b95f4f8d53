//! Command-line front end. Every subcommand is a thin layer over the library.
//!
//! Exit codes: 0 on success (valid proof, proof found, order computed),
//! 1 on a negative or failed result, 2 on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bracelets::{enumerate_lyndon, enumerate_reduced_bracelets, enumerate_upto};
use crate::cosetenum::{enumerate_cosets, Outcome, Presentation, DEFAULT_MAX_COSETS};
use crate::engel::{engel_word, EngelTarget};
use crate::freegroup::{Alphabet, Word, MAX_RANK};
use crate::proofword::{symmetrize, ProofWord, RelatorCheck};
use crate::search::{prove, SearchConfig};

#[derive(Debug, Parser)]
#[command(
    name = "relproof",
    about = "Proof words for products of conjugated powers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the nth Engel word [..[[a,b],b],..,b].
    Engel {
        #[arg(long)]
        n: usize,
        /// Print the cyclically reduced core instead.
        #[arg(long)]
        cyclic: bool,
    },
    /// List or count reduced bracelets (or Lyndon words).
    Bracelets {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long = "len")]
        length: usize,
        #[arg(long)]
        lyndon: bool,
        #[arg(long)]
        count: bool,
        /// All lengths from 1 up to --len.
        #[arg(long)]
        upto: bool,
    },
    /// Check a proof word against a target.
    Verify {
        #[arg(long)]
        proof: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        exponent: usize,
        #[arg(long, conflicts_with = "bases")]
        max_base_len: Option<usize>,
        /// Base words, one per line.
        #[arg(long)]
        bases: Option<PathBuf>,
    },
    /// Print proof word statistics.
    Stats {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long, default_value_t = 4)]
        exponent: usize,
    },
    /// Fold bordering letter pairs into the relators.
    Fold {
        #[arg(long)]
        proof: PathBuf,
    },
    /// Search for a proof word.
    Search(SearchArgs),
    /// Order of a finitely presented group by coset enumeration.
    Order {
        /// Relators, one per line.
        #[arg(long)]
        relators: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Number of generators; defaults to the largest one used.
        #[arg(long)]
        rank: Option<usize>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// File holding the target word.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Use the nth Engel word as the target.
    #[arg(long)]
    engel: Option<usize>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct BaseArgs {
    /// Base words, one per line.
    #[arg(long)]
    bases: Option<PathBuf>,
    /// All Lyndon words of length 1..=K on two generators.
    #[arg(long)]
    lyndon_upto: Option<usize>,
    /// All reduced bracelets of length 1..=K on two generators.
    #[arg(long)]
    bracelets_upto: Option<usize>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long)]
    exponent: usize,
    #[command(flatten)]
    bases: BaseArgs,
    #[arg(long, default_value_t = 1000)]
    beam: usize,
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_moves: usize,
    #[arg(long)]
    max_word_length: Option<usize>,
    /// Random subset of this many base words per run.
    #[arg(long)]
    subset: Option<usize>,
    /// Run restarts on this many threads.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Accept appends cancelling up to this many letters less than half the relator.
    #[arg(long, default_value_t = 1)]
    slack: usize,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Engel { n, cyclic } => {
            let e = engel_word(n)?;
            if cyclic {
                let t = EngelTarget::from_word(&e);
                writeln!(out, "{}", t.core)?;
                writeln!(err, "outer conjugator: {}", t.outer_conjugator)?;
            } else {
                writeln!(out, "{e}")?;
            }
            Ok(0)
        }
        Command::Bracelets {
            rank,
            length,
            lyndon,
            count,
            upto,
        } => {
            let alphabet = Alphabet::new(rank)?;
            let classes = if upto {
                enumerate_upto(alphabet, length, lyndon)
            } else if lyndon {
                enumerate_lyndon(alphabet, length)
            } else {
                enumerate_reduced_bracelets(alphabet, length)
            };
            if count {
                writeln!(out, "{}", classes.len())?;
            } else {
                for c in classes {
                    writeln!(out, "{}", c.canonical())?;
                }
            }
            Ok(0)
        }
        Command::Verify {
            proof,
            target,
            exponent,
            max_base_len,
            bases,
        } => {
            let p = read_proof(&proof)?;
            let target = full_target(&target)?;
            let set;
            let check = match bases {
                Some(path) => {
                    set = symmetrize(&read_words(&path)?, exponent)?;
                    RelatorCheck::Set(&set)
                }
                None => RelatorCheck::Powers {
                    exponent,
                    max_base_len,
                },
            };
            let report = p.verify(&target, &check);
            writeln!(out, "{report}")?;
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Stats { proof, exponent } => {
            let p = read_proof(&proof)?;
            writeln!(out, "{}", p.stats(exponent)?)?;
            Ok(0)
        }
        Command::Fold { proof } => {
            let p = read_proof(&proof)?;
            writeln!(out, "{}", p.fold())?;
            Ok(0)
        }
        Command::Search(args) => search_command(args, out, err),
        Command::Order {
            relators,
            max_cosets,
            rank,
        } => {
            let words = read_words(&relators)?;
            let used = words
                .iter()
                .map(Word::max_generator)
                .max()
                .unwrap_or(1)
                .max(1);
            let alphabet = Alphabet::new(rank.unwrap_or(used))?;
            let p = Presentation::new(alphabet, &words)?;
            let e = enumerate_cosets(&p, max_cosets)?;
            writeln!(out, "{}", e.outcome)?;
            writeln!(
                err,
                "cosets defined: {}, max active: {}, lookaheads: {}",
                e.total_defined, e.max_active, e.lookaheads
            )?;
            Ok(match e.outcome {
                Outcome::Order(_) => 0,
                Outcome::Overflow => 1,
            })
        }
    }
}

#[derive(Serialize)]
struct SearchSummary<'a> {
    found: bool,
    relators: Option<usize>,
    #[serde(flatten)]
    stats: &'a crate::search::SearchStats,
    config: &'a SearchConfig,
}

fn search_command(
    args: SearchArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let target = match (&args.target.target, args.target.engel) {
        (Some(path), _) => EngelTarget::from_word(&read_word(path)?),
        (None, Some(n)) => EngelTarget::engel(n)?,
        (None, None) => unreachable!("clap enforces one target"),
    };
    let bases: Vec<Word> = match (
        &args.bases.bases,
        args.bases.lyndon_upto,
        args.bases.bracelets_upto,
    ) {
        (Some(path), _, _) => read_words(path)?,
        (None, Some(k), _) => canonical_words(enumerate_upto(Alphabet::two(), k, true)),
        (None, None, Some(k)) => canonical_words(enumerate_upto(Alphabet::two(), k, false)),
        _ => unreachable!("clap enforces one base source"),
    };
    let set = symmetrize(&bases, args.exponent)?;
    let config = SearchConfig {
        beam_width: args.beam,
        max_moves: args.max_moves,
        max_word_length: args.max_word_length,
        restarts: args.restarts,
        seed: args.seed,
        base_subset_size: args.subset,
        threads: args.threads,
        cancel_slack: args.slack,
    };
    let (proof, stats) = prove(&target.core, &target.outer_conjugator, &set, &config);
    let summary = SearchSummary {
        found: proof.is_some(),
        relators: proof.as_ref().map(ProofWord::relator_count),
        stats: &stats,
        config: &config,
    };
    writeln!(err, "{}", serde_json::to_string(&summary)?)?;
    match proof {
        Some(p) => {
            writeln!(out, "{p}")?;
            Ok(0)
        }
        None => {
            writeln!(out, "NOT FOUND")?;
            Ok(1)
        }
    }
}

fn canonical_words(classes: Vec<crate::bracelets::BraceletClass>) -> Vec<Word> {
    classes.into_iter().map(|c| c.canonical().clone()).collect()
}

fn full_target(args: &TargetArgs) -> Result<Word, Failure> {
    match (&args.target, args.engel) {
        (Some(path), _) => Ok(read_word(path)?.free_reduce()),
        (None, Some(n)) => Ok(engel_word(n)?),
        (None, None) => unreachable!("clap enforces one target"),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn all_letters() -> Alphabet {
    Alphabet::new(MAX_RANK).expect("valid rank")
}

fn read_proof(path: &Path) -> Result<ProofWord, Failure> {
    ProofWord::parse(&read_text(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// A single word, possibly spread over several lines.
fn read_word(path: &Path) -> Result<Word, Failure> {
    let text = read_text(path)?;
    let joined: String = content_lines(&text).collect();
    Word::parse(&joined, all_letters()).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// One word per line.
fn read_words(path: &Path) -> Result<Vec<Word>, Failure> {
    let text = read_text(path)?;
    content_lines(&text)
        .map(|l| {
            Word::parse(l, all_letters()).map_err(|e| Failure(format!("{}: {e}", path.display())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("relproof").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn engel_subcommand() {
        assert_eq!(run_str(&["engel", "--n", "1"]).1, "ABab\n");
        let (code, out, err) = run_str(&["engel", "--n", "5", "--cyclic"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim().len(), 64);
        assert!(err.contains("bbbb"));
        assert_eq!(run_str(&["engel", "--n", "0"]).0, 1);
    }

    #[test]
    fn bracelets_subcommand() {
        assert_eq!(
            run_str(&["bracelets", "--rank", "2", "--len", "4", "--count"]).1,
            "13\n"
        );
        assert_eq!(
            run_str(&["bracelets", "--len", "2", "--lyndon"]).1,
            "ab\naB\n"
        );
        assert_eq!(
            run_str(&["bracelets", "--len", "5", "--lyndon", "--upto", "--count"]).1,
            "41\n"
        );
        assert_eq!(run_str(&["bracelets", "--rank", "0", "--len", "3"]).0, 1);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&[]).0, 2);
        assert_eq!(run_str(&["bracelets", "--len", "3", "--bogus"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["engel"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }
}
