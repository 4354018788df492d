use super::{Formula, Term, Variable};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// A finite simultaneous substitution of terms for variables.
///
/// Neither fragment has binders, so application never captures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Substitution(BTreeMap<Variable, Term>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn insert(&mut self, var: Variable, term: Term) -> Option<Term> {
        self.0.insert(var, term)
    }

    pub fn get(&self, var: &Variable) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `tau ∘ self`: maps `v` to `tau(self(v))`, and to `tau(v)` outside the
    /// domain of `self`.
    pub fn then(&self, tau: &Substitution) -> Substitution {
        let mut out: BTreeMap<Variable, Term> = self.0.iter().map(|(v, t)| (v.clone(), t.substitute(tau))).collect();
        for (v, t) in &tau.0 {
            out.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution(out)
    }
}

impl FromIterator<(Variable, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Variable, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

pub trait Substitutable: Sized {
    fn substitute(&self, sigma: &Substitution) -> Self;
    fn free_vars(&self) -> BTreeSet<Variable>;
}

impl Substitutable for Term {
    fn substitute(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App { op, args } => Term::App { op: op.clone(), args: args.iter().map(|a| a.substitute(sigma)).collect() },
        }
    }

    fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        collect_vars(self, &mut out);
        out
    }
}

fn collect_vars(t: &Term, out: &mut BTreeSet<Variable>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::App { args, .. } => args.iter().for_each(|a| collect_vars(a, out)),
    }
}

impl Substitutable for Formula {
    fn substitute(&self, sigma: &Substitution) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom { rel, args } => Formula::Atom { rel: rel.clone(), args: args.iter().map(|a| a.substitute(sigma)).collect() },
            Formula::Eq(l, r) => Formula::Eq(l.substitute(sigma), r.substitute(sigma)),
            Formula::Not(a) => Formula::not(a.substitute(sigma)),
            Formula::And(a, b) => Formula::and(a.substitute(sigma), b.substitute(sigma)),
            Formula::Or(a, b) => Formula::or(a.substitute(sigma), b.substitute(sigma)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(sigma), b.substitute(sigma)),
        }
    }

    fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => args.iter().for_each(|a| collect_vars(a, &mut out)),
            Formula::Eq(l, r) => {
                collect_vars(l, &mut out);
                collect_vars(r, &mut out);
            }
            Formula::Not(a) => out = a.free_vars(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                out = a.free_vars();
                out.extend(b.free_vars());
            }
        }
        out
    }
}
