//! Normal forms for equational theories.
//!
//! Group terms are decided by free reduction: a term is flattened into a word
//! over variables and their inverses (inverse of a product reverses the
//! word, the unit vanishes), adjacent `v v⁻¹` pairs are cancelled, and the
//! reduced word is rebuilt as a right-nested product. Other theories supply
//! a terminating, confluent rewrite system with `rewrite lhs -> rhs;`.

use crate::error::{Error, Result};
use crate::theory::{Formula, Fragment, RewriteRule, Sort, Term, Theory, Variable};
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub trait Normalizer: Send + Sync {
    fn normalize(&self, term: &Term) -> Result<Term>;

    /// Size measure on terms used to truncate hom-sets.
    fn measure(&self, term: &Term) -> usize;

    /// Every normal form of the given sort over `vars` whose measure is at
    /// most `bound`, sorted.
    fn normal_forms(&self, theory: &Theory, vars: &[Variable], sort: &Sort, bound: usize) -> Result<Vec<Term>>;

    fn describe(&self) -> String;
}

/// A letter of a free-group word: a variable, possibly inverted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub var: Variable,
    pub inverse: bool,
}

impl Letter {
    fn cancels(&self, other: &Letter) -> bool {
        self.var == other.var && self.inverse != other.inverse
    }
}

#[derive(Clone, Debug)]
pub struct FreeGroupNormalizer {
    pub mul: String,
    pub inv: String,
    pub unit: String,
}

impl FreeGroupNormalizer {
    pub fn new(mul: impl Into<String>, inv: impl Into<String>, unit: impl Into<String>) -> Self {
        FreeGroupNormalizer { mul: mul.into(), inv: inv.into(), unit: unit.into() }
    }

    /// The word of `term` before cancellation.
    pub fn flatten(&self, term: &Term) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        self.flatten_into(term, false, &mut out)?;
        Ok(out)
    }

    fn flatten_into(&self, term: &Term, invert: bool, out: &mut Vec<Letter>) -> Result<()> {
        match term {
            Term::Var(v) => out.push(Letter { var: v.clone(), inverse: invert }),
            Term::App { op, args } if op == &self.unit && args.is_empty() => {}
            Term::App { op, args } if op == &self.inv && args.len() == 1 => self.flatten_into(&args[0], !invert, out)?,
            Term::App { op, args } if op == &self.mul && args.len() == 2 => {
                // (ab)⁻¹ = b⁻¹a⁻¹
                let (first, second) = if invert { (&args[1], &args[0]) } else { (&args[0], &args[1]) };
                self.flatten_into(first, invert, out)?;
                self.flatten_into(second, invert, out)?;
            }
            Term::App { op, .. } => return Err(Error::UnknownSymbol(op.clone())),
        }
        Ok(())
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn reduce(word: Vec<Letter>) -> Vec<Letter> {
        let mut stack: Vec<Letter> = Vec::with_capacity(word.len());
        for l in word {
            if stack.last().is_some_and(|top| top.cancels(&l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        stack
    }

    /// Right-nested product of the word's letters; the empty word is the unit.
    pub fn build(&self, word: &[Letter]) -> Term {
        let lit = |l: &Letter| {
            let v = Term::Var(l.var.clone());
            if l.inverse {
                Term::app(self.inv.clone(), vec![v])
            } else {
                v
            }
        };
        match word.split_last() {
            None => Term::constant(self.unit.clone()),
            Some((last, init)) => init.iter().rev().fold(lit(last), |acc, l| Term::app(self.mul.clone(), vec![lit(l), acc])),
        }
    }

    pub fn word(&self, term: &Term) -> Result<Vec<Letter>> {
        Ok(Self::reduce(self.flatten(term)?))
    }
}

impl Normalizer for FreeGroupNormalizer {
    fn normalize(&self, term: &Term) -> Result<Term> {
        Ok(self.build(&self.word(term)?))
    }

    /// Number of variable occurrences; on normal forms, the reduced word length.
    fn measure(&self, term: &Term) -> usize {
        term.variable_occurrences()
    }

    fn normal_forms(&self, _theory: &Theory, vars: &[Variable], _sort: &Sort, bound: usize) -> Result<Vec<Term>> {
        let letters: Vec<Letter> = vars.iter().flat_map(|v| [false, true].map(|inverse| Letter { var: v.clone(), inverse })).collect();
        let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut frontier = words.clone();
        for _ in 0..bound {
            let mut next = Vec::new();
            for w in &frontier {
                for l in &letters {
                    if w.last().is_some_and(|last| last.cancels(l)) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let mut out: Vec<Term> = words.iter().map(|w| self.build(w)).collect();
        out.sort();
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("free-group reduction over ({}, {}, {})", self.mul, self.inv, self.unit)
    }
}

/// Innermost rewriting with a user-declared rule set.
#[derive(Clone, Debug)]
pub struct RewriteNormalizer {
    rules: Vec<RewriteRule>,
    max_steps: usize,
    max_height: usize,
}

impl RewriteNormalizer {
    pub fn new(rules: Vec<RewriteRule>) -> Self {
        RewriteNormalizer { rules, max_steps: 10_000, max_height: 256 }
    }

    /// Rewrites one innermost redex, if any.
    fn step(&self, term: &Term) -> Option<Term> {
        if let Term::App { op, args } = term {
            for (i, a) in args.iter().enumerate() {
                if let Some(a2) = self.step(a) {
                    let mut args = args.clone();
                    args[i] = a2;
                    return Some(Term::App { op: op.clone(), args });
                }
            }
        }
        self.rules.iter().find_map(|rule| {
            let mut binding = HashMap::new();
            matches(&rule.lhs, term, &mut binding).then(|| instantiate(&rule.rhs, &binding))
        })
    }
}

fn matches<'a>(pattern: &Term, term: &'a Term, binding: &mut HashMap<String, &'a Term>) -> bool {
    match (pattern, term) {
        (Term::Var(v), _) => match binding.get(&v.name) {
            Some(bound) => *bound == term,
            None => {
                binding.insert(v.name.clone(), term);
                true
            }
        },
        (Term::App { op: p, args: pa }, Term::App { op: t, args: ta }) => {
            p == t && pa.len() == ta.len() && pa.iter().zip(ta).all(|(a, b)| matches(a, b, binding))
        }
        _ => false,
    }
}

fn instantiate(t: &Term, binding: &HashMap<String, &Term>) -> Term {
    match t {
        Term::Var(v) => binding.get(&v.name).map(|b| (*b).clone()).unwrap_or_else(|| t.clone()),
        Term::App { op, args } => Term::App { op: op.clone(), args: args.iter().map(|a| instantiate(a, binding)).collect() },
    }
}

impl Normalizer for RewriteNormalizer {
    fn normalize(&self, term: &Term) -> Result<Term> {
        let mut t = term.clone();
        for _ in 0..self.max_steps {
            match self.step(&t) {
                None => return Ok(t),
                Some(next) if next.height() > self.max_height.max(term.height()) => break,
                Some(next) => t = next,
            }
        }
        Err(Error::NonTerminating(self.max_steps))
    }

    fn measure(&self, term: &Term) -> usize {
        term.height()
    }

    fn normal_forms(&self, theory: &Theory, vars: &[Variable], sort: &Sort, bound: usize) -> Result<Vec<Term>> {
        let mut out = BTreeSet::new();
        for t in enumerate_terms(theory, vars, bound).remove(sort).unwrap_or_default() {
            let n = self.normalize(&t)?;
            if self.measure(&n) <= bound {
                out.insert(n);
            }
        }
        Ok(out.into_iter().collect())
    }

    fn describe(&self) -> String {
        format!("{} declared rewrite rule(s)", self.rules.len())
    }
}

/// Every term over `vars` of height at most `height`, grouped by sort.
pub fn enumerate_terms(theory: &Theory, vars: &[Variable], height: usize) -> BTreeMap<Sort, Vec<Term>> {
    let mut by_sort: BTreeMap<Sort, BTreeSet<Term>> = BTreeMap::new();
    for v in vars {
        by_sort.entry(v.sort.clone()).or_default().insert(Term::Var(v.clone()));
    }
    for f in theory.functions.iter().filter(|f| f.domain.is_empty()) {
        by_sort.entry(f.codomain.clone()).or_default().insert(Term::constant(f.name.clone()));
    }
    for _ in 0..height {
        let snapshot: BTreeMap<Sort, Vec<Term>> = by_sort.iter().map(|(s, ts)| (s.clone(), ts.iter().cloned().collect())).collect();
        for f in theory.functions.iter().filter(|f| !f.domain.is_empty()) {
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for s in &f.domain {
                let choices = snapshot.get(s).cloned().unwrap_or_default();
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        choices.iter().map(move |c| {
                            let mut t2 = t.clone();
                            t2.push(c.clone());
                            t2
                        })
                    })
                    .collect();
            }
            let set = by_sort.entry(f.codomain.clone()).or_default();
            for args in tuples {
                set.insert(Term::app(f.name.clone(), args));
            }
        }
    }
    by_sort.into_iter().map(|(s, ts)| (s, ts.into_iter().collect())).collect()
}

/// Recognises the group signature: one sort, one binary, one unary and one
/// nullary symbol, with axioms matching (up to variable renaming and
/// orientation) either the two-sided presentation or the one with only
/// right unit and right inverse.
pub fn group_signature(theory: &Theory) -> Option<FreeGroupNormalizer> {
    if theory.fragment != Fragment::Eq || theory.sorts.len() != 1 || theory.functions.len() != 3 {
        return None;
    }
    let by_arity = |n: usize| theory.functions.iter().find(|f| f.arity() == n).map(|f| f.name.clone());
    let (mul, inv, unit) = (by_arity(2)?, by_arity(1)?, by_arity(0)?);
    let x = theory.sorts[0].clone();
    let v = |n: &str| Term::var(n, &x);
    let m = |a: Term, b: Term| Term::app(mul.clone(), vec![a, b]);
    let i = |a: Term| Term::app(inv.clone(), vec![a]);
    let e = || Term::constant(unit.clone());
    let assoc = (m(v("x"), m(v("y"), v("z"))), m(m(v("x"), v("y")), v("z")));
    let right_unit = (m(v("x"), e()), v("x"));
    let left_unit = (m(e(), v("x")), v("x"));
    let right_inv = (m(v("x"), i(v("x"))), e());
    let left_inv = (m(i(v("x")), v("x")), e());
    let canon_set = |eqs: Vec<(Term, Term)>| -> BTreeSet<(Term, Term)> { eqs.iter().map(|(l, r)| canonical_equation(l, r)).collect() };
    let ours: BTreeSet<(Term, Term)> = theory
        .axioms
        .iter()
        .map(|a| match a {
            Formula::Eq(l, r) => Some(canonical_equation(l, r)),
            _ => None,
        })
        .collect::<Option<_>>()?;
    let full = canon_set(vec![assoc.clone(), right_unit.clone(), left_unit, right_inv.clone(), left_inv]);
    let right = canon_set(vec![assoc, right_unit, right_inv]);
    (ours == full || ours == right).then(|| FreeGroupNormalizer::new(mul, inv, unit))
}

/// Renames variables by first occurrence and picks the smaller orientation.
fn canonical_equation(l: &Term, r: &Term) -> (Term, Term) {
    let orient = |a: &Term, b: &Term| {
        let mut names = HashMap::new();
        let a = rename(a, &mut names);
        let b = rename(b, &mut names);
        (a, b)
    };
    let one = orient(l, r);
    let two = orient(r, l);
    let (a, b) = if one <= two { one } else { two };
    (a, b)
}

fn rename(t: &Term, names: &mut HashMap<String, String>) -> Term {
    match t {
        Term::Var(v) => {
            let n = names.len();
            let name = names.entry(v.name.clone()).or_insert_with(|| format!("v{n}")).clone();
            Term::Var(Variable::new(name, v.sort.clone()))
        }
        Term::App { op, args } => Term::App { op: op.clone(), args: args.iter().map(|a| rename(a, names)).collect() },
    }
}

/// The normalizer registered for `theory`: declared rewrite rules if any,
/// otherwise built-in free reduction for a recognised group presentation.
pub fn normalizer_for(theory: &Theory) -> Result<Box<dyn Normalizer>> {
    if theory.fragment != Fragment::Eq {
        return Err(Error::FragmentViolation(format!("`{}` is not an equational theory", theory.name)));
    }
    if !theory.rewrites.is_empty() {
        return Ok(Box::new(RewriteNormalizer::new(theory.rewrites.clone())));
    }
    match group_signature(theory) {
        Some(n) => Ok(Box::new(n)),
        None => Err(Error::NoNormalizer(theory.name.clone())),
    }
}

pub fn normalize(theory: &Theory, term: &Term) -> Result<Term> {
    normalizer_for(theory)?.normalize(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_theory;
    use crate::theory::group_theory;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x() -> Sort {
        Sort::new("X")
    }
    fn var(n: &str) -> Term {
        Term::var(n, &x())
    }
    fn mul(a: Term, b: Term) -> Term {
        Term::app("mul", vec![a, b])
    }
    fn inv(a: Term) -> Term {
        Term::app("inv", vec![a])
    }
    fn u() -> Term {
        Term::constant("u")
    }

    #[test]
    fn examples() {
        let g = group_theory();
        assert_eq!(normalize(&g, &mul(mul(var("x"), var("y")), inv(var("y")))).unwrap(), var("x"));
        assert_eq!(normalize(&g, &mul(mul(var("x"), u()), inv(var("x")))).unwrap(), u());
        assert_eq!(normalize(&g, &u()).unwrap(), u());
        assert_eq!(normalize(&g, &inv(mul(var("x"), var("y")))).unwrap(), mul(inv(var("y")), inv(var("x"))));
        assert_eq!(normalize(&g, &mul(mul(var("x"), var("y")), var("z"))).unwrap(), mul(var("x"), mul(var("y"), var("z"))));
    }

    #[test]
    fn registration() {
        assert!(normalizer_for(&group_theory()).is_ok());
        let right = parse_theory(include_str!("../../fixtures/group_right.theory")).unwrap();
        assert!(group_signature(&right).is_some());
        let mut monoid = group_theory();
        monoid.axioms.truncate(3);
        assert!(matches!(normalizer_for(&monoid), Err(Error::NoNormalizer(_))));
        let p = Theory::propositional("P", ["a"], vec![]);
        assert!(matches!(normalizer_for(&p), Err(Error::FragmentViolation(_))));
        let kb = parse_theory(include_str!("../../fixtures/group_rewrite.theory")).unwrap();
        assert!(normalizer_for(&kb).unwrap().describe().contains("10"));
    }

    #[test]
    fn one_generator_words() {
        let n = FreeGroupNormalizer::new("mul", "inv", "u");
        let forms = n.normal_forms(&group_theory(), &[Variable::new("x", x())], &x(), 3).unwrap();
        assert_eq!(forms.len(), 7);
        // Oracle: every term of height ≤ 3 over {x}, normalized and filtered by word length.
        let terms = enumerate_terms(&group_theory(), &[Variable::new("x", x())], 3);
        let oracle: BTreeSet<Term> = terms[&x()].iter().map(|t| n.normalize(t).unwrap()).filter(|t| n.measure(t) <= 3).collect();
        assert_eq!(forms.into_iter().collect::<BTreeSet<_>>(), oracle);
    }

    #[test]
    fn non_termination_is_reported() {
        let src = "theory L eq { sort X; op f : X -> X; rewrite f(x) -> f(f(x)); }";
        let t = parse_theory(src).unwrap();
        let n = normalizer_for(&t).unwrap();
        assert!(matches!(n.normalize(&Term::app("f", vec![var("x")])), Err(Error::NonTerminating(_))));
    }

    fn random_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
        if depth == 0 || rng.gen_bool(0.25) {
            return match rng.gen_range(0..4) {
                0 => u(),
                1 => var("x"),
                2 => var("y"),
                _ => var("z"),
            };
        }
        if rng.gen_bool(0.35) {
            inv(random_term(rng, depth - 1))
        } else {
            mul(random_term(rng, depth - 1), random_term(rng, depth - 1))
        }
    }

    /// Cancels a randomly chosen adjacent inverse pair until none remain.
    fn reduce_in_random_order(mut word: Vec<Letter>, rng: &mut ChaCha8Rng) -> Vec<Letter> {
        loop {
            let spots: Vec<usize> = (0..word.len().saturating_sub(1)).filter(|&i| word[i].cancels(&word[i + 1])).collect();
            if spots.is_empty() {
                return word;
            }
            let i = spots[rng.gen_range(0..spots.len())];
            word.drain(i..i + 2);
        }
    }

    #[test]
    fn idempotent_confluent_and_matches_rewrite_system() {
        let n = FreeGroupNormalizer::new("mul", "inv", "u");
        let kb = normalizer_for(&parse_theory(include_str!("../../fixtures/group_rewrite.theory")).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let t = random_term(&mut rng, 6);
            let nf = n.normalize(&t).unwrap();
            assert_eq!(n.normalize(&nf).unwrap(), nf);
            assert!(n.measure(&nf) <= n.measure(&t));
            let word = n.flatten(&t).unwrap();
            assert_eq!(n.build(&reduce_in_random_order(word, &mut rng)), nf);
            assert_eq!(kb.normalize(&t).unwrap(), nf, "{t}");
        }
    }
}
