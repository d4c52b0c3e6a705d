//! `resprove`: prove sequents, check proofs, and sweep small corpora
//! against the brute-force oracle.
//!
//! Exit codes: 0 success, 1 not proved / invalid / disagreement, 2 bad
//! input or usage.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use resprove_core::corpus::{exhaustive_mll, random_mll_sequent, CorpusBounds};
use resprove_core::verify::recheck_resource_proof;
use resprove_core::{
    brute_force_prove, extract, parse_sequent, prove, validate, Error, FailReason, Logic, Outcome, PlainSequent,
    ProofDoc, SearchConfig, Strategy, BRUTE_FORCE_BOUND,
};

const SEED_VAR: &str = "RESOURCE_PROVER_SEED";

#[derive(Parser)]
#[command(name = "resprove", version, about = "Resource-distribution proof search for MLL, PLL and BI")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for a proof and print the extracted plain proof.
    Prove {
        #[arg(long, default_value = "mll")]
        logic: Logic,
        #[arg(long, default_value = "lazy")]
        strategy: Strategy,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        contraction_bound: Option<usize>,
        /// Node budget.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        output: OutputFormat,
        /// Print the rule trace to standard error.
        #[arg(long)]
        trace: bool,
        /// The sequent, or @FILE to read it from a file.
        sequent: String,
    },
    /// Check a JSON proof.
    Check {
        file: PathBuf,
        #[arg(long)]
        logic: Logic,
    },
    /// Compare strategies and the brute-force oracle over a corpus.
    Sweep {
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        /// Largest sequent size (atoms, units and connectives).
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value = "mll")]
        logic: Logic,
        #[arg(long, value_delimiter = ',', default_value = "lazy,eager,n=2,fact-first")]
        strategies: Vec<Strategy>,
        /// Leaf occurrences (atoms and units) per sequent.
        #[arg(long, default_value_t = 3)]
        max_leaves: usize,
        #[arg(long, default_value_t = 3)]
        max_formulas: usize,
        /// Extra random sequents, seeded from RESOURCE_PROVER_SEED.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long)]
        budget: Option<usize>,
        /// Write the CSV report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Exit {
        Exit(2, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Prove {
            logic,
            strategy,
            max_depth,
            contraction_bound,
            budget,
            output,
            trace,
            sequent,
        } => {
            let mut cfg = SearchConfig::with_strategy(strategy);
            if let Some(d) = max_depth {
                cfg.limits.max_depth = d;
            }
            if let Some(c) = contraction_bound {
                cfg.limits.contraction_bound = c;
            }
            if let Some(b) = budget {
                cfg.limits.node_budget = b;
            }
            cfg.trace = trace;
            cmd_prove(logic, &cfg, output, &sequent)
        }
        Cmd::Check { file, logic } => cmd_check(&file, logic),
        Cmd::Sweep {
            atoms,
            max_size,
            logic,
            strategies,
            max_leaves,
            max_formulas,
            samples,
            budget,
            report,
        } => {
            let sw = Sweep {
                atoms,
                max_size,
                logic,
                strategies,
                max_leaves,
                max_formulas,
                samples,
                budget,
            };
            cmd_sweep(&sw, report.as_ref())
        }
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(code)
        }
    }
}

fn read_input(arg: &str) -> Result<String, Exit> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Exit(2, format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

// the message plus a caret under the offending column
fn syntax_diagnostic(input: &str, e: &Error) -> String {
    match e {
        Error::Syntax { pos, .. } | Error::NotInLogic { pos, .. } => {
            format!("error: {e}\n  {input}\n  {}^", " ".repeat(pos.saturating_sub(1)))
        }
        _ => format!("error: {e}"),
    }
}

fn cmd_prove(logic: Logic, cfg: &SearchConfig, output: OutputFormat, arg: &str) -> Result<(), Exit> {
    let input = read_input(arg)?;
    let seq = parse_sequent(&input, logic).map_err(|e| Exit(2, syntax_diagnostic(&input, &e)))?;
    let res = prove(&seq, logic, cfg)?;
    for line in &res.trace {
        eprintln!("{line}");
    }
    let st = res.stats;
    eprintln!(
        "nodes: {}  solver calls: {}  final checks: {} ({} unsat)",
        st.nodes, st.solver_calls, st.final_checks, st.final_unsat
    );
    let proof = match &res.outcome {
        Outcome::Proved(p) => p,
        Outcome::NotProved(FailReason::Exhausted) => return Err(Exit(1, "not proved".into())),
        Outcome::NotProved(FailReason::Budget) => {
            return Err(Exit(1, "not proved within the search limits".into()))
        }
    };
    let plain = extract(proof)?;
    let mut out = io::stdout().lock();
    let written = match output {
        OutputFormat::Text => writeln!(out, "{}assignment: {}", plain.render(true), proof.assignment),
        OutputFormat::Json => writeln!(out, "{}", ProofDoc::from_plain(&plain, Some(&proof.assignment)).to_json()),
    };
    written.map_err(|e| Exit(2, format!("cannot write output: {e}")))
}

fn cmd_check(file: &PathBuf, logic: Logic) -> Result<(), Exit> {
    let text = fs::read_to_string(file).map_err(|e| Exit(2, format!("cannot read {}: {e}", file.display())))?;
    let doc = ProofDoc::parse(&text)?;
    if doc.logic != logic {
        return Err(Exit(1, format!("invalid: the proof is for {}, not {logic}", doc.logic)));
    }
    let plain = if doc.is_resource() {
        let rp = doc.to_resource()?;
        recheck_resource_proof(&rp).map_err(|e| Exit(1, format!("invalid: {e}")))?;
        extract(&rp)?
    } else {
        doc.to_plain(logic)?
    };
    match validate(&plain, logic) {
        Ok(()) => {
            println!("valid");
            Ok(())
        }
        Err(f) => Err(Exit(1, format!("invalid: {f}"))),
    }
}

struct Sweep {
    atoms: usize,
    max_size: usize,
    logic: Logic,
    strategies: Vec<Strategy>,
    max_leaves: usize,
    max_formulas: usize,
    samples: usize,
    budget: Option<usize>,
}

fn outcome_word(o: &Outcome) -> &'static str {
    match o {
        Outcome::Proved(_) => "proved",
        Outcome::NotProved(FailReason::Exhausted) => "unprovable",
        Outcome::NotProved(FailReason::Budget) => "budget",
    }
}

fn sweep_corpus(sw: &Sweep) -> Result<Vec<PlainSequent>, Exit> {
    if sw.logic != Logic::Mll {
        return Err(Exit(2, format!("the oracle covers MLL only, not {}", sw.logic)));
    }
    if !(1..=3).contains(&sw.atoms) {
        return Err(Exit(2, format!("--atoms must be between 1 and 3, got {}", sw.atoms)));
    }
    if sw.max_size > BRUTE_FORCE_BOUND {
        return Err(Exit(
            2,
            format!("--max-size {} exceeds the oracle bound {BRUTE_FORCE_BOUND}", sw.max_size),
        ));
    }
    if sw.max_leaves > 4 || sw.max_formulas > 4 {
        return Err(Exit(2, "--max-leaves and --max-formulas are limited to 4".into()));
    }
    let bounds = CorpusBounds {
        atoms: sw.atoms,
        max_connectives: sw.max_size,
        max_leaves: sw.max_leaves,
        max_formulas: sw.max_formulas,
        atomic_negation: true,
    };
    let mut corpus: Vec<PlainSequent> = exhaustive_mll(&bounds)
        .into_iter()
        .filter(|s| s.size() <= sw.max_size)
        .collect();
    if sw.samples > 0 {
        let seed = match std::env::var(SEED_VAR) {
            Ok(v) => v.trim().parse::<u64>().map_err(|_| Exit(2, format!("{SEED_VAR} must be an integer")))?,
            Err(_) => 0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sw.samples {
            corpus.push(random_mll_sequent(&mut rng, sw.atoms, sw.max_size, sw.max_size));
        }
    }
    Ok(corpus)
}

fn cmd_sweep(sw: &Sweep, report: Option<&PathBuf>) -> Result<(), Exit> {
    if sw.strategies.is_empty() {
        return Err(Exit(2, "no strategies given".into()));
    }
    let corpus = sweep_corpus(sw)?;
    let sink: Box<dyn Write> = match report {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| Exit(2, format!("cannot create {}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| Exit(2, format!("cannot write report: {e}"));

    let names: Vec<String> = sw.strategies.iter().map(Strategy::to_string).collect();
    let mut header = vec!["sequent".to_string()];
    header.extend(names.iter().cloned());
    header.push("oracle".into());
    header.extend(names.iter().map(|n| format!("{n} nodes")));
    header.extend(names.iter().map(|n| format!("{n} solver calls")));
    w.write_record(&header).map_err(csv_err)?;

    let (mut disagreements, mut budget_hits) = (0usize, 0usize);
    for seq in &corpus {
        let oracle = brute_force_prove(seq, BRUTE_FORCE_BOUND)?;
        let mut words = Vec::new();
        let mut nodes = Vec::new();
        let mut calls = Vec::new();
        for st in &sw.strategies {
            let mut cfg = SearchConfig::with_strategy(*st);
            if let Some(b) = sw.budget {
                cfg.limits.node_budget = b;
            }
            let r = prove(seq, sw.logic, &cfg)?;
            match &r.outcome {
                Outcome::NotProved(FailReason::Budget) => budget_hits += 1,
                o if o.is_proved() != oracle => {
                    disagreements += 1;
                    eprintln!("disagreement: {seq} under {st}: {} but the oracle says {oracle}", outcome_word(o));
                }
                _ => {}
            }
            words.push(outcome_word(&r.outcome).to_string());
            nodes.push(r.stats.nodes.to_string());
            calls.push(r.stats.solver_calls.to_string());
        }
        let mut row = vec![seq.to_string()];
        row.extend(words);
        row.push(if oracle { "provable" } else { "unprovable" }.into());
        row.extend(nodes);
        row.extend(calls);
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Exit(2, format!("cannot write report: {e}")))?;
    eprintln!(
        "{} sequents, {} strategies, {disagreements} disagreements, {budget_hits} budget stops",
        corpus.len(),
        sw.strategies.len()
    );
    if disagreements > 0 {
        return Err(Exit(1, String::new()));
    }
    Ok(())
}
