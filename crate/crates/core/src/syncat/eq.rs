use super::normalize::{normalizer_for, Normalizer};
use super::Category;
use crate::error::{Error, Result};
use crate::theory::{Formula, Fragment, Sort, Substitutable, Substitution, Term, Theory, Variable};
use serde::Serialize;
use std::fmt;

/// A list of typed variables with hypotheses. Hypotheses stay empty for
/// equational theories.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Context {
    pub vars: Vec<Variable>,
    pub hyps: Vec<Formula>,
}

impl Context {
    pub fn new(vars: Vec<Variable>) -> Self {
        Context { vars, hyps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vars.iter().map(|v| format!("{}:{}", v.name, v.sort)).collect();
        write!(f, "[{}]", vs.join(", "))
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A tuple of terms over `source`, one per variable of `target`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SynMorphism {
    pub source: Context,
    pub target: Context,
    pub terms: Vec<Term>,
}

impl fmt::Display for SynMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "({}): {} → {}", ts.join(", "), self.source, self.target)
    }
}

impl fmt::Debug for SynMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The category of variable contexts of an equational theory, with hom-sets
/// truncated to normal forms of measure at most `depth_bound`.
pub struct EqSyn {
    theory: Theory,
    normalizer: Box<dyn Normalizer>,
    depth_bound: usize,
    max_context: usize,
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

impl EqSyn {
    pub fn new(t: &Theory, depth_bound: usize) -> Result<Self> {
        if t.fragment != Fragment::Eq {
            return Err(Error::FragmentViolation(format!("`{}` is not an equational theory", t.name)));
        }
        Ok(EqSyn { theory: t.clone(), normalizer: normalizer_for(t)?, depth_bound, max_context: 2 })
    }

    pub fn with_max_context(mut self, n: usize) -> Self {
        self.max_context = n;
        self
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn normalizer(&self) -> &dyn Normalizer {
        self.normalizer.as_ref()
    }

    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }

    /// Canonical context with the given sorts: variables `x, y, z, w, x4, ...`.
    pub fn context(&self, sorts: &[Sort]) -> Context {
        let vars = sorts
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut name = NAMES.get(i).map(|n| n.to_string()).unwrap_or_else(|| format!("x{i}"));
                while self.theory.function(&name).is_some() {
                    name.push('_');
                }
                Variable::new(name, s.clone())
            })
            .collect();
        Context::new(vars)
    }

    /// Builds a morphism, checking sorts and normalizing each term.
    pub fn morphism(&self, source: &Context, target: &Context, terms: Vec<Term>) -> Result<SynMorphism> {
        if terms.len() != target.len() {
            return Err(Error::SignatureMismatch(format!("{} terms for a target of length {}", terms.len(), target.len())));
        }
        let terms = terms
            .iter()
            .zip(&target.vars)
            .map(|(t, v)| {
                let s = self.theory.sort_of_term(t, &source.vars).map_err(|e| Error::SignatureMismatch(e.to_string()))?;
                if s != v.sort {
                    return Err(Error::SignatureMismatch(format!("`{t}` has sort {s}, expected {}", v.sort)));
                }
                self.normalizer.normalize(t)
            })
            .collect::<Result<_>>()?;
        Ok(SynMorphism { source: source.clone(), target: target.clone(), terms })
    }
}

impl Category for EqSyn {
    type Object = Context;
    type Morphism = SynMorphism;

    fn objects(&self) -> Vec<Context> {
        let mut out = vec![self.context(&[])];
        let mut layer: Vec<Vec<Sort>> = vec![vec![]];
        for _ in 0..self.max_context {
            layer = layer
                .iter()
                .flat_map(|p| {
                    self.theory.sorts.iter().map(move |s| {
                        let mut q = p.clone();
                        q.push(s.clone());
                        q
                    })
                })
                .collect();
            out.extend(layer.iter().map(|p| self.context(p)));
        }
        out
    }

    /// The truncated hom-set: all tuples of normal forms of measure at most
    /// the depth bound.
    fn hom(&self, a: &Context, b: &Context) -> Result<Vec<SynMorphism>> {
        let columns = b
            .vars
            .iter()
            .map(|v| self.normalizer.normal_forms(&self.theory, &a.vars, &v.sort, self.depth_bound))
            .collect::<Result<Vec<_>>>()?;
        let mut tuples: Vec<Vec<Term>> = vec![vec![]];
        for col in &columns {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    col.iter().map(move |c| {
                        let mut t2 = t.clone();
                        t2.push(c.clone());
                        t2
                    })
                })
                .collect();
        }
        Ok(tuples.into_iter().map(|terms| SynMorphism { source: a.clone(), target: b.clone(), terms }).collect())
    }

    fn identity(&self, a: &Context) -> SynMorphism {
        SynMorphism { source: a.clone(), target: a.clone(), terms: a.vars.iter().cloned().map(Term::Var).collect() }
    }

    /// Substitutes the terms of `f` into those of `g`, then normalizes.
    fn compose(&self, g: &SynMorphism, f: &SynMorphism) -> Result<SynMorphism> {
        if f.target != g.source {
            return Err(Error::SignatureMismatch(format!("cannot compose {g} after {f}")));
        }
        let sigma: Substitution = g.source.vars.iter().cloned().zip(f.terms.iter().cloned()).collect();
        let terms = g.terms.iter().map(|t| self.normalizer.normalize(&t.substitute(&sigma))).collect::<Result<_>>()?;
        Ok(SynMorphism { source: f.source.clone(), target: g.target.clone(), terms })
    }

    fn same(&self, f: &SynMorphism, g: &SynMorphism) -> bool {
        f.source == g.source
            && f.target == g.target
            && f.terms.len() == g.terms.len()
            && f.terms.iter().zip(&g.terms).all(|(s, t)| match (self.normalizer.normalize(s), self.normalizer.normalize(t)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            })
    }
}
