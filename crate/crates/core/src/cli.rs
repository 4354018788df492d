//! The `catlogic` command line. Every command yields one JSON report for
//! stdout, a short summary for stderr and an exit code: 0 when every
//! verdict passes, 1 for a verified failure, 2 for unusable input.

use crate::adjunction::{check_adjunction_with, AdjunctionReport, CanonicalTransposition, Transposition};
use crate::brain::{
    audit_adjunction, check_brain, export_dot, export_mind_dot, load_brain, mind_of_brain, propagate, replay_composite, BrainError,
    BrainGraph, NeuronState,
};
use crate::corpus::random_algebra;
use crate::dsl::{parse_theories, DslError};
use crate::lindenbaum::{free_boolean_algebra, lindenbaum_algebra, Capacity};
use crate::realization::enumerate_models;
use crate::stone::{double_dual_iso, stone_points, stone_space, unit_map};
use crate::syncat::summarize;
use crate::theory::{Fragment, Theory};
use crate::Error;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "catlogic", version, about = "Theories, Lindenbaum algebras, Stone duality and the Lang/Syn adjunction")]
pub struct Cli {
    /// Seed for every random campaign.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate every theory in a file.
    Check { path: String },
    /// Stone space and double-dual check for a propositional theory.
    Stone { path: String, theory: String },
    /// Enumerate labeled models on a carrier of the given size.
    Models { path: String, theory: String, size: usize },
    /// Syntactic category summary and category-law check.
    Syn {
        path: String,
        theory: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Check the Lang/Syn adjunction against the free algebra on `atoms`
    /// generators and ten seeded random algebras.
    Adjoint {
        path: String,
        theory: String,
        #[arg(long, default_value_t = 1)]
        atoms: usize,
        /// Largest atom count of the random algebras.
        #[arg(long, default_value_t = 3)]
        max_atoms: usize,
    },
    #[command(subcommand)]
    Brain(BrainCommand),
}

#[derive(Debug, Subcommand)]
pub enum BrainCommand {
    /// Validate a brain and audit the adjunction on every neuron pair.
    Check {
        path: String,
        /// Re-run one composite counterexample, given as `axon@atom`.
        #[arg(long)]
        replay: Option<String>,
    },
    /// Propagate states along the axons.
    Run {
        path: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Initial states such as `a=0` or `b=silent`; unnamed neurons start silent.
        #[arg(long, num_args = 1..)]
        init: Vec<String>,
    },
    /// Export the brain, or its mind with `--mind`.
    Export {
        path: String,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        mind: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub version: String,
    pub input: Option<Input>,
    pub seed: u64,
    pub result: Value,
    pub verdicts: Vec<Verdict>,
    pub counterexamples: Vec<Value>,
    pub error: Option<Value>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// What one invocation prints and returns.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
    pub report: Option<Report>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    match Cli::try_parse_from(&args) {
        Ok(cli) => execute(&cli, args.into_iter().skip(1).collect()),
        Err(e) => {
            let text = e.render().to_string();
            let exit_code = if e.use_stderr() { 2 } else { 0 };
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            Outcome { stdout, stderr, exit_code, report: None }
        }
    }
}

pub fn execute(cli: &Cli, command: Vec<String>) -> Outcome {
    execute_with(cli, command, &CanonicalTransposition)
}

/// As [`execute`], with the transposition used by `adjoint` swapped out.
pub fn execute_with(cli: &Cli, command: Vec<String>, tr: &dyn Transposition) -> Outcome {
    let mut r = Report {
        command,
        version: env!("CARGO_PKG_VERSION").to_string(),
        input: None,
        seed: cli.seed,
        result: Value::Null,
        verdicts: vec![],
        counterexamples: vec![],
        error: None,
    };
    let mut dot = None;
    let outcome = dispatch(cli, tr, &mut r, &mut dot);
    let exit_code = match outcome {
        Ok(()) if r.passed() => 0,
        Ok(()) => 1,
        Err(Failure { code, error }) => {
            r.error = Some(error);
            r.verdicts.push(Verdict { name: if code == 2 { "input" } else { "engine" }.into(), pass: false });
            code
        }
    };
    let stderr = summary(&r, exit_code);
    let stdout = match dot {
        Some(d) if exit_code == 0 => d,
        _ => serde_json::to_string_pretty(&r).expect("reports serialize") + "\n",
    };
    Outcome { stdout, stderr, exit_code, report: Some(r) }
}

fn summary(r: &Report, code: i32) -> String {
    let mut s = format!(
        "{}: {}\n",
        r.command.first().map_or("catlogic", String::as_str),
        match code {
            0 => "pass",
            1 => "FAIL",
            _ => "input error",
        }
    );
    for v in &r.verdicts {
        s += &format!("  {} {}\n", if v.pass { "ok  " } else { "FAIL" }, v.name);
    }
    if let Some(e) = &r.error {
        s += &format!("  error: {}\n", e.get("message").and_then(Value::as_str).unwrap_or_default());
    }
    if !r.counterexamples.is_empty() {
        s += &format!("  {} counterexample(s) in report\n", r.counterexamples.len());
    }
    s
}

struct Failure {
    code: i32,
    error: Value,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, error: json!({ "message": message.into() }) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 1, error: json!({ "message": e.to_string(), "detail": e }) }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        let code = if e.is_syntax() { 2 } else { 1 };
        Failure { code, error: json!({ "message": e.to_string(), "spans": e.spans(), "detail": e }) }
    }
}

impl From<BrainError> for Failure {
    fn from(e: BrainError) -> Self {
        let code = match e {
            BrainError::Syntax { .. } | BrainError::Engine(Error::InvalidState(_)) => 2,
            _ => 1,
        };
        Failure { code, error: json!({ "message": e.to_string(), "span": e.span(), "detail": e }) }
    }
}

fn read(path: &str, r: &mut Report) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?;
    r.input = Some(Input { path: path.into(), sha256: hex::encode(Sha256::digest(&bytes)) });
    String::from_utf8(bytes).map_err(|_| Failure::input(format!("{path} is not UTF-8")))
}

fn theory(path: &str, name: &str, r: &mut Report) -> Result<Theory, Failure> {
    let ts = parse_theories(&read(path, r)?)?;
    ts.into_iter()
        .map(|t| t.into_inner())
        .find(|t| t.name == name)
        .ok_or_else(|| Failure::input(format!("no theory named `{name}` in {path}")))
}

fn prop_theory(path: &str, name: &str, r: &mut Report) -> Result<Theory, Failure> {
    let t = theory(path, name, r)?;
    if t.fragment != Fragment::Prop {
        return Err(Failure::input(format!("theory `{name}` is not propositional")));
    }
    Ok(t)
}

fn brain(path: &str, r: &mut Report) -> Result<BrainGraph, Failure> {
    Ok(load_brain(&read(path, r)?)?)
}

fn verdict(r: &mut Report, name: impl Into<String>, pass: bool) {
    r.verdicts.push(Verdict { name: name.into(), pass });
}

fn to_json(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn dispatch(cli: &Cli, tr: &dyn Transposition, r: &mut Report, dot: &mut Option<String>) -> Result<(), Failure> {
    match &cli.command {
        Command::Check { path } => {
            let ts = parse_theories(&read(path, r)?)?;
            r.result = json!({
                "theories": ts.iter().map(|t| json!({
                    "name": t.name,
                    "fragment": t.fragment.to_string(),
                    "sorts": t.sorts.len(),
                    "functions": t.functions.len(),
                    "axioms": t.axioms.len(),
                })).collect::<Vec<_>>()
            });
            verdict(r, "well_formed", true);
        }
        Command::Stone { path, theory } => {
            let t = prop_theory(path, theory, r)?;
            let l = lindenbaum_algebra(&t)?;
            let b = &l.algebra;
            let dd = double_dual_iso(b);
            let unit = unit_map(&stone_space(b));
            r.result = json!({
                "theory": t.name,
                "atoms": b.atom_count(),
                "size": b.size(),
                "points": stone_points(b).iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "assignments": l.assignments(),
                "double_dual": dd,
            });
            if let Some(v) = &dd.violation {
                r.counterexamples.push(to_json(v));
            }
            verdict(r, "double_dual_iso", dd.verified());
            verdict(r, "unit_homeomorphism", unit.is_bijective() && unit.is_continuous());
        }
        Command::Models { path, theory: name, size } => {
            let t = theory(path, name, r)?;
            let models = enumerate_models(&t, *size)?;
            r.result = json!({
                "theory": t.name,
                "size": size,
                "count": models.len(),
                "models": models.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            });
            verdict(r, "enumeration", true);
        }
        Command::Syn { path, theory: name, depth } => {
            let t = theory(path, name, r)?;
            let s = summarize(&t, *depth, 200, cli.seed)?;
            r.counterexamples.extend(s.laws.violations.iter().map(to_json));
            verdict(r, "category_laws", s.laws.passed());
            r.result = to_json(s);
        }
        Command::Adjoint { path, theory: name, atoms, max_atoms } => {
            let t = prop_theory(path, name, r)?;
            let letters: Vec<String> = (0..*atoms).map(|i| format!("g{i}")).collect();
            let mut algebras = vec![free_boolean_algebra(&letters, &Capacity::default())?.algebra];
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            algebras.extend((0..10).map(|_| random_algebra(&mut rng, *max_atoms)));
            let mut reports: Vec<AdjunctionReport> = Vec::new();
            for (i, b) in algebras.iter().enumerate() {
                let rep = check_adjunction_with(b, &t, cli.seed.wrapping_add(i as u64), tr)?;
                let label = if i == 0 { format!("free({atoms})") } else { format!("random[{i}]") };
                verdict(r, format!("adjunction {label}: {} atoms", b.atom_count()), rep.passed());
                r.counterexamples.extend(rep.naturality.failures.iter().map(to_json));
                reports.push(rep);
            }
            r.result = json!({ "theory": t.name, "reports": reports });
        }
        Command::Brain(BrainCommand::Check { path, replay }) => {
            let g = brain(path, r)?;
            if let Some(id) = replay {
                let (axon, atom) = id
                    .split_once('@')
                    .and_then(|(a, p)| Some((a, p.parse::<usize>().ok()?)))
                    .ok_or_else(|| Failure::input(format!("replay id `{id}` is not of the form axon@atom")))?;
                let cx = replay_composite(&g, axon, atom)?;
                let agrees = cx.via_composite == cx.via_factors;
                if !agrees {
                    r.counterexamples.push(json!({ "replay": id, "composite": cx }));
                }
                verdict(r, format!("composite {axon} at atom {atom}"), agrees);
                r.result = to_json(&cx);
                return Ok(());
            }
            let check = check_brain(&g)?;
            verdict(r, "identity axons", check.identities_ok);
            verdict(r, "associativity", check.associativity_ok);
            for c in &check.composites {
                verdict(r, format!("composite {}", c.axon), c.agrees);
            }
            for cx in check.counterexamples() {
                r.counterexamples.push(json!({ "replay": format!("{}@{}", cx.composite, cx.atom), "composite": cx }));
            }
            let audits = audit_adjunction(&g, cli.seed)?;
            let n = g.neurons.len();
            for (k, a) in audits.iter().enumerate() {
                verdict(r, format!("adjunction {} / lang({})", g.neurons[k / n].id, g.neurons[k % n].id), a.passed());
                r.counterexamples.extend(a.naturality.failures.iter().map(to_json));
            }
            r.result = json!({ "brain": g.name, "check": check, "audits": audits });
        }
        Command::Brain(BrainCommand::Run { path, steps, init }) => {
            let g = brain(path, r)?;
            let init =
                init.iter().map(|s| s.parse::<NeuronState>()).collect::<Result<Vec<_>, _>>().map_err(|e| Failure::input(e.to_string()))?;
            let trace = propagate(&g, &init, *steps)?;
            verdict(r, "propagation", true);
            r.result = to_json(trace);
        }
        Command::Brain(BrainCommand::Export { path, dot: as_dot, mind }) => {
            let g = brain(path, r)?;
            let text = if *mind { export_mind_dot(&mind_of_brain(&g)?) } else { export_dot(&g) };
            r.result = if *mind { to_json(mind_of_brain(&g)?) } else { to_json(&g) };
            verdict(r, "export", true);
            if *as_dot {
                *dot = Some(text);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn cli(args: &[&str]) -> Outcome {
        run(std::iter::once("catlogic").chain(args.iter().copied()))
    }

    #[test]
    fn check_exit_codes() {
        assert_eq!(cli(&["check", &fixture("group.theory")]).exit_code, 0);
        let broken = cli(&["check", &fixture("broken_arity.theory")]);
        assert_eq!(broken.exit_code, 1);
        let spans = &broken.report.unwrap().error.unwrap()["spans"];
        assert_eq!(spans[0]["line"], 5);
        assert_eq!(cli(&["check", "/nonexistent/file.theory"]).exit_code, 2);
        assert_eq!(cli(&["frobnicate"]).exit_code, 2);
    }

    #[test]
    fn stone_examples() {
        let p = fixture("props.theory");
        for (name, points, size) in [("XOR", 2, 4), ("CONTRA", 0, 1), ("EMPTY", 1, 2)] {
            let o = cli(&["stone", &p, name]);
            assert_eq!(o.exit_code, 0, "{}", o.stderr);
            let r = o.report.unwrap().result;
            assert_eq!(r["points"].as_array().unwrap().len(), points);
            assert_eq!(r["size"], size);
        }
        assert_eq!(cli(&["stone", &fixture("group.theory"), "GROUP"]).exit_code, 2);
        assert_eq!(cli(&["stone", &p, "NOPE"]).exit_code, 2);
    }

    #[test]
    fn models_examples() {
        let g = fixture("group.theory");
        for (size, count) in [("2", 2), ("4", 16)] {
            assert_eq!(cli(&["models", &g, "GROUP", size]).report.unwrap().result["count"], count);
        }
        assert_eq!(cli(&["models", &fixture("props.theory"), "XOR", "0"]).report.unwrap().result["count"], 2);
        let big = cli(&["models", &g, "GROUP", "40"]);
        assert_eq!(big.exit_code, 1);
        assert!(big.report.unwrap().error.unwrap()["message"].as_str().unwrap().contains("capacity"));
    }

    #[test]
    fn adjoint_examples() {
        let p = fixture("props.theory");
        for atoms in ["0", "1"] {
            let o = cli(&["adjoint", &p, "XOR", "--atoms", atoms]);
            assert_eq!(o.exit_code, 0, "{}", o.stderr);
            assert_eq!(o.report.as_ref().unwrap().verdicts.len(), 11);
        }
        let free0 = &cli(&["adjoint", &p, "XOR", "--atoms", "0"]).report.unwrap().result["reports"][0];
        assert_eq!(free0["theory_side"], 1);
        let parsed = Cli::try_parse_from(["catlogic", "adjoint", &p, "XOR", "--atoms", "1"]).unwrap();
        let bad = execute_with(&parsed, vec![], &crate::adjunction::TwistedTransposition);
        assert_eq!(bad.exit_code, 1);
        assert!(!bad.report.unwrap().counterexamples.is_empty());
    }

    #[test]
    fn syn_summary() {
        let o = cli(&["syn", &fixture("group.theory"), "GROUP", "--depth", "2"]);
        assert_eq!(o.exit_code, 0, "{}", o.stderr);
        assert_eq!(cli(&["syn", &fixture("props.theory"), "XOR"]).report.unwrap().result["morphisms"], 9);
    }

    #[test]
    fn brain_commands() {
        let b = |n: &str| fixture(&format!("brains/{n}.brain"));
        let o = cli(&["brain", "check", &b("pair")]);
        assert_eq!(o.exit_code, 0, "{}", o.stderr);
        assert_eq!(o.report.unwrap().verdicts.iter().filter(|v| v.name.starts_with("adjunction")).count(), 4);

        let run = cli(&["brain", "run", &b("single"), "--steps", "3", "--init", "a=0"]).report.unwrap();
        let states: Vec<&Value> = run.result["steps"].as_array().unwrap().iter().map(|s| &s["states"][0]["state"]).collect();
        assert_eq!(states, [&json!(0); 4]);
        assert_eq!(cli(&["brain", "run", &b("single"), "--init", "a=7"]).exit_code, 2);

        let dot = cli(&["brain", "export", &b("pair"), "--dot"]);
        assert!(dot.stdout.starts_with("digraph \"pair\" {"));
        let mind = cli(&["brain", "export", &b("pair"), "--dot", "--mind"]);
        assert_eq!(mind.stdout.matches(" -> ").count(), 1);

        let broken = cli(&["brain", "check", &b("broken_composite")]);
        assert_eq!(broken.exit_code, 1);
        let rep = broken.report.unwrap();
        let id = rep.counterexamples[0]["replay"].as_str().unwrap().to_string();
        let replay = cli(&["brain", "check", &b("broken_composite"), "--replay", &id]);
        assert_eq!(replay.exit_code, 1);
        assert_eq!(replay.report.unwrap().result, rep.counterexamples[0]["composite"]);
        assert_eq!(cli(&["brain", "check", &b("chain"), "--replay", "h@0"]).exit_code, 0);
        assert_eq!(cli(&["brain", "check", &b("bad_hom")]).exit_code, 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let args = ["adjoint", &fixture("props.theory"), "CHAIN", "--seed", "9"];
        assert_eq!(cli(&args).stdout, cli(&args).stdout);
    }
}
