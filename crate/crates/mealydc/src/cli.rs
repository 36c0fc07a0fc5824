//! Command-line front end: parse kind-tagged JSON documents, dispatch
//! checking and construction subcommands, print one JSON report per
//! invocation. Exit codes: 0 laws hold / construction succeeded, 1 a
//! violation was found (report carries the witness), 2 input error.
//!
//! Reports are deterministic byte for byte for fixed inputs and seeds:
//! object keys are emitted in sorted order and all randomness comes from
//! the mandatory `--seed`.

use std::ffi::OsString;
use std::io::Read;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::doc::{parse_document_str, Document};
use crate::doublecat::{
    check_interchange, check_loose_adjunction, companion, conjoint_search, cotabulator,
    cotabulator_factor, double_pullback, terminal_cell,
};
use crate::finset::FinFun;
use crate::gen::{random_grid, rng_from_seed};
use crate::mealy::{check_cell, loose_compose, MealyMachine};
use crate::monad::{
    check_free_monad, check_loose_monad_map, check_matching_relation, check_module, check_monad,
    check_tight_monad_morphism, derive_matched_pair, enumerate_monads, free_monad,
    free_monad_discrepancy_report, induced_bicrossed_hom, module_to_representation,
    representation_to_module, DThreading, FreeMonadConfig, MuOrder,
};
use crate::monoid::{
    bicrossed_cayley, bicrossed_multiply, check_bicrossed_equations, BicrossedElement,
};
use crate::verdict::{Error, Result, Verdict};

#[derive(Parser)]
#[command(
    name = "mealydc",
    version,
    about = "Workbench for the double category of finite Mealy machines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Word-length bound for word-indexed checks and searches.
    #[arg(long, global = true, default_value_t = 4)]
    bound: usize,
    /// Seed for randomized suites (never wall-clock derived).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; json is the only format.
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThreadingArg {
    Threaded,
    Pointwise,
}

#[derive(Clone, Copy, ValueEnum)]
enum MuOrderArg {
    Concat,
    ReversedConcat,
}

#[derive(Subcommand)]
enum Command {
    /// Check the two commuting squares of a cell document.
    CheckCell { file: String },
    /// Cascade-compose two or more machine documents left to right.
    Compose {
        #[arg(num_args = 2..)]
        files: Vec<String>,
    },
    /// Check the six monad laws of a monad document.
    CheckMonad { file: String },
    /// List every monad on the given alphabet and state sizes.
    EnumerateMonads {
        #[arg(long)]
        alphabet: usize,
        #[arg(long)]
        states: usize,
    },
    /// Derive the matched pair of a lawful monad document.
    MatchedPair { file: String },
    /// Bicrossed product operations on a matched-pair document.
    #[command(subcommand)]
    Bicrossed(BicrossedCmd),
    /// Build the truncated free monad of an endo machine document, or sweep
    /// the interpretation flags over all small machines (--law-search).
    FreeMonad {
        file: Option<String>,
        /// Reverse the tail at each step of the output-word recursion.
        #[arg(long)]
        reverse: bool,
        #[arg(long, value_enum, default_value_t = ThreadingArg::Threaded)]
        threading: ThreadingArg,
        #[arg(long, value_enum, default_value_t = MuOrderArg::Concat)]
        mu_order: MuOrderArg,
        /// Sweep all interpretation flag combinations over every endo
        /// machine with at most two letters and two states.
        #[arg(long)]
        law_search: bool,
    },
    /// Check the four module laws of a module document.
    CheckModule { file: String },
    /// Convert between module and bicrossed-representation presentations.
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Check a representation document against a monad document.
    CheckMatching {
        monad: String,
        representation: String,
    },
    /// Companion of a function document, with its two structure cells.
    Companion { file: String },
    /// Conjoint of a function document, when one exists.
    Conjoint { file: String },
    /// Cotabulator of a machine document; with --cell, factor a cell into
    /// an identity machine through it.
    Cotabulator {
        file: String,
        #[arg(long)]
        cell: Option<String>,
    },
    /// The unique cell from a machine document into the terminal identity.
    Terminal { file: String },
    /// Pullback of two function documents over a shared codomain, as a
    /// double-category limit; optional witness cells get a mediating cell.
    Pullback {
        f: String,
        g: String,
        #[arg(long, requires = "witness_b")]
        witness_a: Option<String>,
        #[arg(long, requires = "witness_a")]
        witness_b: Option<String>,
    },
    /// Interchange law on one explicit 2x2 grid of cell documents, or on
    /// seeded random grids (--random).
    Interchange {
        #[arg(num_args = 0..=4)]
        files: Vec<String>,
        #[arg(long, conflicts_with = "files")]
        random: bool,
        /// Number of random grids.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Largest boundary size sampled for random grids.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Zig-zag identities for candidate loose-adjunction data.
    Adjunction {
        left: String,
        right: String,
        eta: String,
        epsilon: String,
    },
    /// Monad morphism checks.
    #[command(subcommand)]
    MonadMap(MonadMapCmd),
}

#[derive(Subcommand)]
enum BicrossedCmd {
    /// Multiply two elements, given as JSON {"e": i, "w": [letters]}.
    Multiply {
        file: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Check unit fixpoints, cospan relations, and word extensions.
    Check { file: String },
    /// Cayley fragment of the product on all elements up to --bound.
    Cayley { file: String },
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Module document to its bicrossed representation.
    ToAction { file: String },
    /// Module-data document (representation plus output table) to a module.
    ToModule { file: String },
}

#[derive(Subcommand)]
enum MonadMapCmd {
    /// Tight monad morphism: cell, unit, and multiplication compatibility.
    Tight {
        src: String,
        dst: String,
        morphism: String,
        /// Also list the induced bicrossed homomorphism up to --bound and
        /// check it on all products within the bound.
        #[arg(long)]
        hom: bool,
    },
    /// Loose monad map: unit, action, fugality, and cell equations.
    Loose {
        src: String,
        dst: String,
        map: String,
        /// Check only the fugality equation.
        #[arg(long)]
        fugality_only: bool,
    },
}

fn load(path: &str) -> Result<Document> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    parse_document_str(&text)
}

fn load_machine(path: &str) -> Result<MealyMachine> {
    load(path)?.into_machine()
}

fn load_fun(path: &str) -> Result<FinFun> {
    load(path)?.into_fun()
}

/// Verdicts print the violated law under the field name "axiom".
fn report(v: &Verdict) -> Value {
    let mut out = json!({ "pass": v.pass });
    if let Some(law) = &v.law {
        out["axiom"] = json!(law);
    }
    if let Some(w) = &v.witness {
        out["witness"] = w.clone();
    }
    out
}

fn verdict_exit(v: &Verdict) -> i32 {
    if v.pass {
        0
    } else {
        1
    }
}

fn element(text: &str) -> Result<BicrossedElement> {
    Ok(serde_json::from_str(text)?)
}

fn run(cli: Cli) -> Result<(i32, Value)> {
    if cli.format != "json" {
        return Err(Error::Invalid(format!(
            "unsupported format {:?}",
            cli.format
        )));
    }
    let bound = cli.bound;
    match cli.command {
        Command::CheckCell { file } => {
            let v = check_cell(&load(&file)?.into_cell()?);
            Ok((verdict_exit(&v), report(&v)))
        }
        Command::Compose { files } => {
            let mut machines = files.iter().map(|f| load_machine(f));
            let first = machines.next().expect("clap enforces at least two files")?;
            let composite = machines.try_fold(first, |acc, m| loose_compose(&acc, &m?))?;
            Ok((0, Document::Machine(composite).to_value()))
        }
        Command::CheckMonad { file } => {
            let v = check_monad(&load(&file)?.into_monad()?);
            Ok((verdict_exit(&v), report(&v)))
        }
        Command::EnumerateMonads { alphabet, states } => {
            let monads = enumerate_monads(alphabet, states)?;
            let docs: Vec<Value> = monads
                .into_iter()
                .map(|m| Document::Monad(m).to_value())
                .collect();
            Ok((0, Value::Array(docs)))
        }
        Command::MatchedPair { file } => {
            let monad = load(&file)?.into_monad()?;
            let v = check_monad(&monad);
            if !v.pass {
                return Ok((1, report(&v)));
            }
            let pair = derive_matched_pair(&monad)?;
            Ok((0, Document::MatchedPair(pair).to_value()))
        }
        Command::Bicrossed(cmd) => match cmd {
            BicrossedCmd::Multiply { file, left, right } => {
                let pair = load(&file)?.into_matched_pair()?;
                let product = bicrossed_multiply(&pair, &element(&left)?, &element(&right)?)?;
                Ok((0, serde_json::to_value(product)?))
            }
            BicrossedCmd::Check { file } => {
                let pair = load(&file)?.into_matched_pair()?;
                let v = check_bicrossed_equations(&pair, bound);
                Ok((verdict_exit(&v), report(&v)))
            }
            BicrossedCmd::Cayley { file } => {
                let pair = load(&file)?.into_matched_pair()?;
                let fragment = bicrossed_cayley(&pair, bound)?;
                Ok((0, serde_json::to_value(fragment)?))
            }
        },
        Command::FreeMonad {
            file,
            reverse,
            threading,
            mu_order,
            law_search,
        } => {
            if law_search {
                return Ok((0, free_monad_discrepancy_report(bound)));
            }
            let Some(file) = file else {
                return Err(Error::Invalid(
                    "free-monad needs a machine file unless --law-search".into(),
                ));
            };
            let machine = load_machine(&file)?;
            let config = FreeMonadConfig {
                bound,
                s_reverse: reverse,
                d_threading: match threading {
                    ThreadingArg::Threaded => DThreading::Threaded,
                    ThreadingArg::Pointwise => DThreading::Pointwise,
                },
                mu_order: match mu_order {
                    MuOrderArg::Concat => MuOrder::Concat,
                    MuOrderArg::ReversedConcat => MuOrder::ReversedConcat,
                },
            };
            let fm = free_monad(&machine, config)?;
            let v = check_free_monad(&fm);
            Ok((
                verdict_exit(&v),
                json!({
                    "machine": Document::Machine(fm.machine.clone()).to_value(),
                    "words": fm.words,
                    "e0": fm.e0,
                    "mu": fm.mu,
                    "nu": Document::Cell(fm.nu.clone()).to_value(),
                    "config": serde_json::to_value(fm.config)?,
                    "verdict": report(&v),
                }),
            ))
        }
        Command::CheckModule { file } => {
            let v = check_module(&load(&file)?.into_module()?);
            Ok((verdict_exit(&v), report(&v)))
        }
        Command::Convert(cmd) => match cmd {
            ConvertCmd::ToAction { file } => {
                let module = load(&file)?.into_module()?;
                let v = check_module(&module);
                if !v.pass {
                    return Ok((1, report(&v)));
                }
                let rep = module_to_representation(&module)?;
                Ok((0, Document::Representation(rep).to_value()))
            }
            ConvertCmd::ToModule { file } => {
                let data = load(&file)?.into_module_data()?;
                match representation_to_module(
                    &data.monad,
                    &data.representation,
                    &data.sigma,
                    &data.output,
                    bound,
                )? {
                    Ok(module) => Ok((0, Document::Module(module).to_value())),
                    Err(v) => Ok((1, report(&v))),
                }
            }
        },
        Command::CheckMatching {
            monad,
            representation,
        } => {
            let m = load(&monad)?.into_monad()?;
            let r = load(&representation)?.into_representation()?;
            let v = check_matching_relation(&m, &r, bound)?;
            Ok((verdict_exit(&v), report(&v)))
        }
        Command::Companion { file } => {
            let c = companion(&load_fun(&file)?);
            Ok((
                0,
                Value::Array(vec![
                    Document::Machine(c.machine).to_value(),
                    Document::Cell(c.epsilon).to_value(),
                    Document::Cell(c.eta).to_value(),
                ]),
            ))
        }
        Command::Conjoint { file } => {
            let f = load_fun(&file)?;
            match conjoint_search(&f) {
                Some(c) => Ok((
                    0,
                    Value::Array(vec![
                        Document::Machine(c.machine).to_value(),
                        Document::Cell(c.eta).to_value(),
                        Document::Cell(c.epsilon).to_value(),
                    ]),
                )),
                None => Ok((1, json!({ "found": false, "bijective": f.is_bijective() }))),
            }
        }
        Command::Cotabulator { file, cell } => {
            let machine = load_machine(&file)?;
            let cot = cotabulator(&machine);
            match cell {
                None => Ok((
                    0,
                    Value::Array(vec![
                        Document::Set(cot.carrier.clone()).to_value(),
                        Document::Fun(cot.q.clone()).to_value(),
                        Document::Cell(cot.tau.clone()).to_value(),
                    ]),
                )),
                Some(path) => {
                    let xi = load(&path)?.into_cell()?;
                    match cotabulator_factor(&machine, &cot, &xi)? {
                        Ok(h) => Ok((0, Document::Fun(h).to_value())),
                        Err(v) => Ok((1, report(&v))),
                    }
                }
            }
        }
        Command::Terminal { file } => {
            let machine = load_machine(&file)?;
            Ok((0, Document::Cell(terminal_cell(&machine)).to_value()))
        }
        Command::Pullback {
            f,
            g,
            witness_a,
            witness_b,
        } => {
            let f = load_fun(&f)?;
            let g = load_fun(&g)?;
            let witnesses = match (&witness_a, &witness_b) {
                (Some(a), Some(b)) => Some((load(a)?.into_cell()?, load(b)?.into_cell()?)),
                _ => None,
            };
            let dpb = double_pullback(&f, &g, witnesses.as_ref().map(|(a, b)| (a, b)))?;
            Ok((
                0,
                json!({
                    "object": Document::Set(dpb.object).to_value(),
                    "proj_a": Document::Fun(dpb.proj_a).to_value(),
                    "proj_b": Document::Fun(dpb.proj_b).to_value(),
                    "cell_a": Document::Cell(dpb.cell_a).to_value(),
                    "cell_b": Document::Cell(dpb.cell_b).to_value(),
                    "mediating": dpb.mediating.map(|c| Document::Cell(c).to_value()),
                }),
            ))
        }
        Command::Interchange {
            files,
            random,
            count,
            max_size,
        } => {
            if random {
                let mut rng = rng_from_seed(cli.seed);
                for i in 0..count {
                    let (tl, tr, bl, br) = random_grid(&mut rng, max_size);
                    let v = check_interchange(&tl, &tr, &bl, &br)?;
                    if !v.pass {
                        return Ok((
                            1,
                            json!({
                                "pass": false,
                                "grid": i,
                                "cells": [
                                    Document::Cell(tl).to_value(),
                                    Document::Cell(tr).to_value(),
                                    Document::Cell(bl).to_value(),
                                    Document::Cell(br).to_value(),
                                ],
                                "verdict": report(&v),
                            }),
                        ));
                    }
                }
                return Ok((0, json!({ "pass": true, "grids": count, "seed": cli.seed })));
            }
            if files.len() != 4 {
                return Err(Error::Invalid(
                    "interchange needs four cell files (tl tr bl br) or --random".into(),
                ));
            }
            let cells: Vec<_> = files
                .iter()
                .map(|p| load(p).and_then(Document::into_cell))
                .collect::<Result<_>>()?;
            let v = check_interchange(&cells[0], &cells[1], &cells[2], &cells[3])?;
            Ok((verdict_exit(&v), report(&v)))
        }
        Command::Adjunction {
            left,
            right,
            eta,
            epsilon,
        } => {
            let l = load_machine(&left)?;
            let r = load_machine(&right)?;
            let eta = load(&eta)?.into_cell()?;
            let epsilon = load(&epsilon)?.into_cell()?;
            let adj = check_loose_adjunction(&l, &r, &eta, &epsilon)?;
            let mut out = report(&adj.verdict);
            out["carriers_are_singletons"] = json!(adj.carriers_are_singletons);
            Ok((verdict_exit(&adj.verdict), out))
        }
        Command::MonadMap(cmd) => match cmd {
            MonadMapCmd::Tight {
                src,
                dst,
                morphism,
                hom,
            } => {
                let src = load(&src)?.into_monad()?;
                let dst = load(&dst)?.into_monad()?;
                let t = load(&morphism)?.into_tight_morphism()?;
                let v = check_tight_monad_morphism(&src, &dst, &t)?;
                if !v.pass || !hom {
                    return Ok((verdict_exit(&v), report(&v)));
                }
                let (pairs, hv) = induced_bicrossed_hom(&src, &dst, &t, bound)?;
                Ok((
                    verdict_exit(&hv),
                    json!({ "verdict": report(&hv), "pairs": serde_json::to_value(pairs)? }),
                ))
            }
            MonadMapCmd::Loose {
                src,
                dst,
                map,
                fugality_only,
            } => {
                let m = load(&src)?.into_monad()?;
                let n = load(&dst)?.into_monad()?;
                let u = load(&map)?.into_loose_map()?;
                let v = check_loose_monad_map(&m, &n, &u, fugality_only)?;
                Ok((verdict_exit(&v), report(&v)))
            }
        },
    }
}

/// Parses and runs one invocation; returns the exit code and the exact text
/// to print. Never panics on bad input.
pub fn run_command<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return (0, e.to_string());
        }
        Err(e) => return (2, json!({ "error": e.to_string() }).to_string()),
    };
    match run(cli) {
        Ok((code, value)) => (code, value.to_string()),
        Err(e) => (e.exit_code(), json!({ "error": e.to_string() }).to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn write_doc(dir: &std::path::Path, name: &str, v: &Value) -> String {
        let path = dir.join(name);
        std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn tempdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "mealydc-cli-{}-{:?}",
            std::process::id(),
            std::thread::current().id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn absorbing_monad_value() -> Value {
        json!({
            "kind": "monad",
            "machine": {
                "input": { "size": 2 }, "output": { "size": 2 }, "states": { "size": 2 },
                "d": [[0, 1], [0, 1]], "s": [[0, 0], [1, 0]],
            },
            "e0": 0,
            "mu": [[0, 1], [1, 1]],
        })
    }

    #[test]
    fn check_monad_passes_and_fails_with_exit_codes() {
        let dir = tempdir();
        let good = write_doc(&dir, "good-monad.json", &absorbing_monad_value());
        let (code, out) = run_command(["mealydc", "check-monad", &good]);
        assert_eq!((code, out.as_str()), (0, "{\"pass\":true}"));

        let mut broken = absorbing_monad_value();
        broken["mu"] = json!([[0, 1], [0, 1]]);
        let bad = write_doc(&dir, "bad-monad.json", &broken);
        let (code, out) = run_command(["mealydc", "check-monad", &bad]);
        assert_eq!(code, 1);
        let report: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(report["axiom"], "ma_2");
        assert_eq!(report["witness"]["e"], 1);
    }

    #[test]
    fn input_errors_exit_2() {
        let (code, out) = run_command(["mealydc", "check-monad", "/nonexistent.json"]);
        assert_eq!(code, 2);
        assert!(out.contains("error"));
        let dir = tempdir();
        let bad = write_doc(&dir, "bad-kind.json", &json!({ "kind": "widget" }));
        let (code, _) = run_command(["mealydc", "check-monad", &bad]);
        assert_eq!(code, 2);
        let (code, _) = run_command(["mealydc", "no-such-command"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn compose_output_reparses() {
        let dir = tempdir();
        let m = json!({
            "kind": "machine",
            "input": { "size": 2 }, "output": { "size": 2 }, "states": { "size": 2 },
            "d": [[0, 1], [0, 1]], "s": [[0, 0], [1, 0]],
        });
        let path = write_doc(&dir, "m.json", &m);
        let (code, out) = run_command(["mealydc", "compose", &path, &path]);
        assert_eq!(code, 0);
        let doc = crate::doc::parse_document_str(&out).unwrap();
        assert_eq!(doc.into_machine().unwrap().states().size(), 4);
    }

    #[test]
    fn enumerate_monads_is_deterministic_and_bounded() {
        let (c1, out1) = run_command([
            "mealydc",
            "enumerate-monads",
            "--alphabet",
            "2",
            "--states",
            "2",
        ]);
        let (c2, out2) = run_command([
            "mealydc",
            "enumerate-monads",
            "--alphabet",
            "2",
            "--states",
            "2",
        ]);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(out1, out2);
        let arr: Value = serde_json::from_str(&out1).unwrap();
        assert_eq!(arr.as_array().unwrap().len(), 32);
        let (code, out) = run_command([
            "mealydc",
            "enumerate-monads",
            "--alphabet",
            "3",
            "--states",
            "3",
        ]);
        assert_eq!(code, 2);
        assert!(out.contains("budget"));
    }

    #[test]
    fn bicrossed_multiply_trivial_actions_is_direct_product() {
        let dir = tempdir();
        // trivial actions: d(a, e) = e, s(a, e) = a on Z2 with alphabet 2
        let pair = json!({
            "kind": "matched-pair",
            "monoid": { "carrier": { "size": 2 }, "unit": 0, "mult": [[0, 1], [1, 0]] },
            "alphabet": { "size": 2 },
            "d": [[0, 1], [0, 1]],
            "s": [[0, 0], [1, 1]],
        });
        let path = write_doc(&dir, "pair.json", &pair);
        let (code, out) = run_command([
            "mealydc",
            "bicrossed",
            "multiply",
            &path,
            "--left",
            r#"{"e":1,"w":[0]}"#,
            "--right",
            r#"{"e":1,"w":[1]}"#,
        ]);
        assert_eq!(code, 0);
        // monoid components multiply, words concatenate
        assert_eq!(out, r#"{"e":0,"w":[0,1]}"#);
        let (code, _) = run_command(["mealydc", "bicrossed", "check", &path, "--bound", "3"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn free_monad_law_search_matches_library_report() {
        let (code, out) = run_command(["mealydc", "free-monad", "--law-search", "--bound", "3"]);
        assert_eq!(code, 0);
        let got: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(got, free_monad_discrepancy_report(3));
    }

    #[test]
    fn free_monad_literal_flags_find_the_violation() {
        let dir = tempdir();
        let m = json!({
            "kind": "machine",
            "input": { "size": 2 }, "output": { "size": 2 }, "states": { "size": 2 },
            "d": [[0, 0], [0, 0]], "s": [[0, 1], [0, 0]],
        });
        let path = write_doc(&dir, "literal.json", &m);
        let (code, out) = run_command([
            "mealydc",
            "free-monad",
            &path,
            "--reverse",
            "--threading",
            "pointwise",
            "--bound",
            "3",
        ]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"]["axiom"], "mc_1");
        let (code, out) = run_command(["mealydc", "free-monad", &path, "--bound", "3"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], json!({ "pass": true }));
        // the machine document inside the report re-parses
        crate::doc::parse_document(&v["machine"]).unwrap();
    }

    #[test]
    fn companion_and_conjoint_round_trip() {
        let dir = tempdir();
        let f =
            json!({ "kind": "fun", "dom": { "size": 2 }, "cod": { "size": 2 }, "table": [1, 0] });
        let path = write_doc(&dir, "swap.json", &f);
        let (code, out) = run_command(["mealydc", "companion", &path]);
        assert_eq!(code, 0);
        let docs: Vec<Value> = serde_json::from_str(&out).unwrap();
        assert_eq!(docs.len(), 3);
        for d in &docs {
            crate::doc::parse_document(d).unwrap();
        }
        let (code, _) = run_command(["mealydc", "conjoint", &path]);
        assert_eq!(code, 0);
        // non-bijective map: no conjoint, exit 1
        let g =
            json!({ "kind": "fun", "dom": { "size": 2 }, "cod": { "size": 2 }, "table": [0, 0] });
        let gpath = write_doc(&dir, "collapse.json", &g);
        let (code, out) = run_command(["mealydc", "conjoint", &gpath]);
        assert_eq!(code, 1);
        assert_eq!(out, r#"{"bijective":false,"found":false}"#);
    }

    #[test]
    fn interchange_random_suite_is_seeded() {
        let (c1, o1) = run_command([
            "mealydc",
            "interchange",
            "--random",
            "--count",
            "20",
            "--seed",
            "5",
        ]);
        let (c2, o2) = run_command([
            "mealydc",
            "interchange",
            "--random",
            "--count",
            "20",
            "--seed",
            "5",
        ]);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(o1, o2);
    }

    #[test]
    fn convert_round_trips_through_files() {
        let dir = tempdir();
        let monad = absorbing_monad_value();
        let module = json!({
            "kind": "module",
            "monad": monad,
            "machine": monad["machine"],
            "xi": monad["mu"],
        });
        let mpath = write_doc(&dir, "module.json", &module);
        let (code, rep_out) = run_command(["mealydc", "convert", "to-action", &mpath]);
        assert_eq!(code, 0);
        let rep: Value = serde_json::from_str(&rep_out).unwrap();
        let data = json!({
            "kind": "module-data",
            "monad": monad,
            "representation": { "set": rep["set"], "alpha": rep["alpha"], "beta": rep["beta"] },
            "sigma": monad["machine"]["s"],
            "output": { "size": 2 },
        });
        let dpath = write_doc(&dir, "data.json", &data);
        let (code, out) = run_command(["mealydc", "convert", "to-module", &dpath]);
        assert_eq!(code, 0);
        let back = crate::doc::parse_document_str(&out)
            .unwrap()
            .into_module()
            .unwrap();
        assert_eq!(serde_json::to_value(&back.xi).unwrap(), monad["mu"]);
    }

    #[test]
    fn terminal_and_cotabulator_emit_documents() {
        let dir = tempdir();
        let m = json!({
            "kind": "machine",
            "input": { "size": 2 }, "output": { "size": 3 }, "states": { "size": 2 },
            "d": [[1, 0], [0, 0]], "s": [[2, 0], [1, 1]],
        });
        let path = write_doc(&dir, "m.json", &m);
        let (code, out) = run_command(["mealydc", "terminal", &path]);
        assert_eq!(code, 0);
        crate::doc::parse_document_str(&out).unwrap();
        let (code, out) = run_command(["mealydc", "cotabulator", &path]);
        assert_eq!(code, 0);
        let docs: Vec<Value> = serde_json::from_str(&out).unwrap();
        assert_eq!(docs.len(), 3);
        for d in &docs {
            crate::doc::parse_document(d).unwrap();
        }
    }

    #[test]
    fn monad_map_tight_with_hom() {
        let dir = tempdir();
        let monad = absorbing_monad_value();
        let mpath = write_doc(&dir, "m.json", &monad);
        let t = json!({
            "kind": "tight-morphism",
            "f": { "dom": { "size": 2 }, "cod": { "size": 2 }, "table": [0, 1] },
            "alpha": { "dom": { "size": 2 }, "cod": { "size": 2 }, "table": [0, 1] },
        });
        let tpath = write_doc(&dir, "t.json", &t);
        let (code, out) = run_command([
            "mealydc",
            "monad-map",
            "tight",
            &mpath,
            &mpath,
            &tpath,
            "--hom",
            "--bound",
            "2",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"]["pass"], true);
        assert!(!v["pairs"].as_array().unwrap().is_empty());
    }

    #[test]
    fn help_exits_zero() {
        let (code, out) = run_command(["mealydc", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("check-monad"));
    }
}
