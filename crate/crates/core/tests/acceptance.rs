//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL
//! line each with its runtime and budget, and exits non-zero on any FAIL.
//!
//!     cargo test --test acceptance

use catlogic::adjunction::check_adjunction;
use catlogic::brain::{check_brain, load_brain, propagate, Axon, BrainGraph, NeuronState};
use catlogic::corpus::{random_algebra, random_prop_theory};
use catlogic::dsl::{parse_theories, parse_theory, print_theory};
use catlogic::lindenbaum::lindenbaum_algebra;
use catlogic::realization::{enumerate_models, enumerate_models_with, homs_equal_nat_trans, FiniteModel, SearchLimits, Strategy};
use catlogic::stone::{double_dual_iso, stone_points};
use catlogic::syncat::{check_category_laws, normalize, syn_eq, syn_prop};
use catlogic::theory::{Formula, Term, Theory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Check, u64); 9] = [
        ("stone double dual on 240 random theories", stone_double_dual, 10),
        ("exactly-one-of example: 2 realizations, 4 elements, 2 points", xor_example, 1),
        ("group model counts 1, 2, 3, 16", group_counts, 60),
        ("homomorphisms = natural transformations", homs_are_natural, 30),
        ("syntactic category laws and free-group normal forms", syntactic_laws, 30),
        ("adjunction on 60 random (B, T) pairs", adjunction_pairs, 30),
        ("brain/mind audits and composite functoriality", brain_audits, 30),
        ("presentation robustness of group counts", presentations, 30),
        ("DSL round-trip and report determinism", round_trip, 5),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(*budget) => Err(format!("{detail}; over the {budget} s budget")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{}] {name} ({:.2} s / {budget} s): {detail}", i + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn load(name: &str) -> Vec<Theory> {
    parse_theories(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap().into_iter().map(|t| t.into_inner()).collect()
}

fn named(file: &str, name: &str) -> Theory {
    load(file).into_iter().find(|t| t.name == name).unwrap()
}

fn random_theories(seed: u64, n: usize, max_letters: usize) -> Vec<Theory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| random_prop_theory(&mut rng, &format!("R{i}"), max_letters)).collect()
}

/// Satisfying assignments counted from the truth table.
fn truth_table_models(t: &Theory) -> usize {
    let letters = t.letters();
    (0..1u32 << letters.len())
        .filter(|bits| {
            let v = |l: &str| letters.iter().position(|x| x == l).map(|i| bits >> i & 1 == 1);
            t.axioms.iter().all(|a| a.eval_prop(&mut |l| v(l)) == Some(true))
        })
        .count()
}

fn stone_double_dual() -> Result<String, String> {
    let corpus = random_theories(1, 240, 4);
    for t in &corpus {
        let b = lindenbaum_algebra(t).map_err(|e| e.to_string())?.algebra;
        let atoms = truth_table_models(t);
        ensure!(
            b.atom_count() == atoms && stone_points(&b).len() == atoms,
            "{}: {} atoms, truth table says {atoms}",
            t.name,
            b.atom_count()
        );
        let dd = double_dual_iso(&b);
        ensure!(dd.verified(), "{}: {dd:?}", t.name);
        let images: BTreeSet<u64> = b.elements().map(|e| dd.hom.apply(e).0).collect();
        ensure!(images.len() as u64 == 1 << atoms, "{}: double dual not injective", t.name);
    }
    Ok(format!("{} theories, all isomorphisms verified", corpus.len()))
}

fn xor_example() -> Result<String, String> {
    let t = named("props.theory", "XOR");
    let models = enumerate_models(&t, 0).map_err(|e| e.to_string())?;
    let b = lindenbaum_algebra(&t).map_err(|e| e.to_string())?.algebra;
    let points = stone_points(&b).len();
    ensure!(models.len() == 2 && b.size() == 4 && points == 2, "{} models, {} elements, {points} points", models.len(), b.size());
    Ok("2 realizations, 4 elements, 2 points".into())
}

/// Every relabeling of the given Cayley tables, as multiplication tables.
fn relabelings(n: usize, groups: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = BTreeSet::new();
    for g in groups {
        for p in perms(n) {
            let mut t = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[p[a] * n + p[b]] = p[g[a * n + b]];
                }
            }
            out.insert(t);
        }
    }
    out
}

fn cyclic(n: usize) -> Vec<usize> {
    (0..n * n).map(|i| (i / n + i % n) % n).collect()
}

fn mul_tables(models: &[FiniteModel]) -> BTreeSet<Vec<usize>> {
    models.iter().map(|m| m.ops.iter().find(|o| o.name == "mul").unwrap().table.clone()).collect()
}

fn group_counts() -> Result<String, String> {
    let t = named("group.theory", "GROUP");
    let klein: Vec<usize> = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
    let oracle = [vec![cyclic(1)], vec![cyclic(2)], vec![cyclic(3)], vec![cyclic(4), klein]];
    let mut counts = Vec::new();
    for n in 1..=4 {
        let models = enumerate_models(&t, n).map_err(|e| e.to_string())?;
        ensure!(mul_tables(&models) == relabelings(n, &oracle[n - 1]), "size {n}: tables differ from relabeled Cayley tables");
        if n <= 3 {
            let brute = enumerate_models_with(&t, n, Strategy::BruteForce, &SearchLimits::default()).map_err(|e| e.to_string())?;
            ensure!(brute == models, "size {n}: brute force found {} models, pruned {}", brute.len(), models.len());
        }
        counts.push(models.len());
    }
    ensure!(counts == [1, 2, 3, 16], "counts {counts:?}");
    Ok(format!("counts {counts:?}, brute force agrees on sizes 1 to 3"))
}

/// Homomorphisms counted by checking every map against the tables.
fn oracle_homs(m: &FiniteModel, n: &FiniteModel) -> usize {
    let (a, b) = (m.sizes[0], n.sizes[0]);
    let op = |x: &FiniteModel, name: &str| x.ops.iter().find(|o| o.name == name).unwrap().table.clone();
    let (mm, mi, mu, nm, ni, nu) = (op(m, "mul"), op(m, "inv"), op(m, "u"), op(n, "mul"), op(n, "inv"), op(n, "u"));
    (0..(b as u64).pow(a as u32))
        .filter(|&code| {
            let h: Vec<usize> = (0..a).map(|i| (code / (b as u64).pow(i as u32) % b as u64) as usize).collect();
            h[mu[0]] == nu[0]
                && (0..a).all(|x| h[mi[x]] == ni[h[x]])
                && (0..a).all(|x| (0..a).all(|y| h[mm[x * a + y]] == nm[h[x] * b + h[y]]))
        })
        .count()
}

fn homs_are_natural() -> Result<String, String> {
    let t = named("group.theory", "GROUP");
    let mut models = Vec::new();
    for n in 1..=3 {
        models.extend(enumerate_models(&t, n).map_err(|e| e.to_string())?);
    }
    let mut pairs = 0;
    for m in &models {
        for n in &models {
            let r = homs_equal_nat_trans(&t, m, n, 2).map_err(|e| e.to_string())?;
            ensure!(r.bijection, "{m} -> {n}: {r:?}");
            ensure!(r.homomorphisms == oracle_homs(m, n), "{m} -> {n}: {} homs, oracle {}", r.homomorphisms, oracle_homs(m, n));
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered pairs over {} models", models.len()))
}

/// Group word of a term: letters with a sign, inverse reverses.
fn word(t: &Term) -> Vec<(String, bool)> {
    match t {
        Term::Var(v) => vec![(v.name.clone(), true)],
        Term::App { op, args } => match op.as_str() {
            "u" => vec![],
            "mul" => [word(&args[0]), word(&args[1])].concat(),
            "inv" => word(&args[0]).into_iter().rev().map(|(v, s)| (v, !s)).collect(),
            other => panic!("unexpected symbol {other}"),
        },
    }
}

/// Cancels adjacent inverse pairs, picking a random pair each time.
fn cancel_randomly(mut w: Vec<(String, bool)>, rng: &mut ChaCha8Rng) -> Vec<(String, bool)> {
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i].0 == w[i + 1].0 && w[i].1 != w[i + 1].1).collect();
        if spots.is_empty() {
            return w;
        }
        let i = spots[rng.gen_range(0..spots.len())];
        w.drain(i..i + 2);
    }
}

fn random_group_term(rng: &mut ChaCha8Rng, t: &Theory, depth: u32) -> Term {
    let x = &t.sorts[0];
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..4) {
            0 => Term::constant("u"),
            i => Term::var(["x", "y", "z"][i - 1], x),
        };
    }
    if rng.gen_bool(0.3) {
        Term::app("inv", vec![random_group_term(rng, t, depth - 1)])
    } else {
        Term::app("mul", vec![random_group_term(rng, t, depth - 1), random_group_term(rng, t, depth - 1)])
    }
}

fn syntactic_laws() -> Result<String, String> {
    let mut corpus = load("props.theory");
    corpus.extend(random_theories(5, 200, 3));
    for t in &corpus {
        let r = check_category_laws(&syn_prop(t).map_err(|e| e.to_string())?, 200, 5).map_err(|e| e.to_string())?;
        ensure!(r.passed() && r.identity_checks == r.morphisms, "{}: {r:?}", t.name);
    }
    let g = named("group.theory", "GROUP");
    let c = syn_eq(&g, 3).map_err(|e| e.to_string())?;
    let r = check_category_laws(&c, 500, 5).map_err(|e| e.to_string())?;
    ensure!(r.passed(), "group: {:?}", r.violations);
    ensure!(r.identity_checks == r.morphisms && r.associativity_checks >= 100, "group: {r:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let terms = 10_000;
    for _ in 0..terms {
        let t = random_group_term(&mut rng, &g, 6);
        let n = normalize(&g, &t).map_err(|e| e.to_string())?;
        ensure!(normalize(&g, &n).map_err(|e| e.to_string())? == n, "not idempotent on {t}");
        let (a, b) = (cancel_randomly(word(&t), &mut rng), cancel_randomly(word(&t), &mut rng));
        ensure!(a == b && a == word(&n), "reduction order matters for {t}: {n}");
    }
    Ok(format!(
        "{} propositional categories; group depth 3: {} morphisms, {} associativity triples; {terms} terms normalized",
        corpus.len(),
        r.morphisms,
        r.associativity_checks
    ))
}

fn adjunction_pairs() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pairs = 60;
    for i in 0..pairs {
        let b = random_algebra(&mut rng, 3);
        let t = random_prop_theory(&mut rng, &format!("R{i}"), 3);
        let r = check_adjunction(&b, &t, i).map_err(|e| e.to_string())?;
        let expected = b.atom_count().pow(truth_table_models(&t) as u32);
        ensure!(r.passed(), "pair {i}: {r:?}");
        ensure!(
            r.theory_side == expected && r.algebra_side == expected,
            "pair {i}: sides {} / {}, expected {expected}",
            r.theory_side,
            r.algebra_side
        );
    }
    Ok(format!("{pairs} pairs, all bijective, round-tripping and natural"))
}

fn catlogic(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_catlogic")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

/// `g` keeping only identity axons and `keep`.
fn only(g: &BrainGraph, keep: &[&str]) -> BrainGraph {
    let axons = g.axons.iter().filter(|a| a.is_identity() || keep.contains(&a.id.as_str())).map(|a| Axon { composite: None, ..a.clone() });
    BrainGraph::new(g.name.clone(), g.neurons.clone(), axons.collect()).unwrap()
}

fn brain_audits() -> Result<String, String> {
    let mut audits = 0;
    for name in ["single", "pair", "chain"] {
        let path = fixture(&format!("brains/{name}.brain"));
        let (code, out) = catlogic(&["brain", "check", &path]);
        ensure!(code == 0, "{name}: exit {code}\n{out}");
        audits += json(&out)["result"]["audits"].as_array().unwrap().len();
        let g = load_brain(&std::fs::read_to_string(&path).unwrap()).unwrap();
        for h in g.axons.iter().filter(|a| a.composite.is_some()) {
            let (f1, f2) = h.composite.clone().unwrap();
            let start = g.neuron(&h.source).unwrap().logic.atom_count();
            for p in 0..start {
                let one = propagate(&only(&g, &[&h.id]), &[NeuronState::atom(&h.source, p)], 1).unwrap();
                let two = propagate(&only(&g, &[&f1, &f2]), &[NeuronState::atom(&h.source, p)], 2).unwrap();
                ensure!(one.state(1, &h.target) == two.state(2, &h.target), "{name}: {} at atom {p}", h.id);
            }
        }
    }
    let path = fixture("brains/broken_composite.brain");
    let (code, out) = catlogic(&["brain", "check", &path]);
    ensure!(code == 1, "corrupted fixture: exit {code}");
    let cx = json(&out)["counterexamples"][0].clone();
    let id = cx["replay"].as_str().ok_or("no replay id")?.to_string();
    let (rcode, rout) = catlogic(&["brain", "check", &path, "--replay", &id]);
    ensure!(rcode == 1 && json(&rout)["result"] == cx["composite"], "replay of {id} did not reproduce: {rout}");
    let g = load_brain(&std::fs::read_to_string(&path).unwrap()).unwrap();
    ensure!(!check_brain(&g).unwrap().passed(), "library check passes the corrupted fixture");
    Ok(format!("{audits} adjunction audits pass; corrupted fixture fails, replay {id} reproduces"))
}

fn presentations() -> Result<String, String> {
    let (a, b) = (named("group.theory", "GROUP"), load("group_right.theory").remove(0));
    let mut counts = Vec::new();
    for n in 1..=3 {
        let (x, y) = (enumerate_models(&a, n).map_err(|e| e.to_string())?, enumerate_models(&b, n).map_err(|e| e.to_string())?);
        ensure!(x.len() == y.len() && mul_tables(&x) == mul_tables(&y), "size {n}: {} vs {}", x.len(), y.len());
        counts.push(y.len());
    }
    Ok(format!("{} counts {counts:?} match", b.name))
}

fn round_trip() -> Result<String, String> {
    let mut corpus: Vec<Theory> =
        ["group.theory", "group_right.theory", "group_rewrite.theory", "props.theory"].iter().flat_map(|f| load(f)).collect();
    corpus.extend(random_theories(9, 200, 4));
    corpus.push(Theory::propositional(
        "NESTED",
        ["p"],
        vec![Formula::iff(Formula::letter("p"), Formula::not(Formula::not(Formula::letter("p"))))],
    ));
    for t in &corpus {
        let text = print_theory(t);
        let back = parse_theory(&text).map_err(|e| format!("{}: {e}\n{text}", t.name))?.into_inner();
        ensure!(&back == t, "{}: parse(print(t)) differs\n{text}", t.name);
        ensure!(print_theory(&back) == text, "{}: printing is not stable", t.name);
    }
    let (props, group, brain) = (fixture("props.theory"), fixture("group.theory"), fixture("brains/swap.brain"));
    let invocations: [&[&str]; 5] = [
        &["check", &props],
        &["models", &group, "GROUP", "3"],
        &["adjoint", &props, "CHAIN", "--seed", "3"],
        &["syn", &group, "GROUP", "--depth", "2"],
        &["brain", "run", &brain, "--steps", "4", "--init", "a=0", "b=0"],
    ];
    for args in invocations {
        let (first, second) = (catlogic(args), catlogic(args));
        ensure!(first == second, "{args:?} is not byte-deterministic");
    }
    Ok(format!("{} theories round-trip; {} reports byte-identical on rerun", corpus.len(), invocations.len()))
}
