//! Finite set-valued models of theories.
//!
//! A model lives on the canonical carrier `{0, …, n-1}` for every sort and
//! stores one total table per operation, indexed row-major by its argument
//! tuple. Propositional models are truth assignments to the letters.

mod functor;
mod homs;
mod search;

pub use functor::{
    homs_equal_nat_trans, model_as_functor, model_as_poset_functor, CorrespondenceReport, FunctorPresentation, FunctorialityReport,
    PosetFunctor,
};
pub use homs::{enumerate_homs, real_category, ModelHomomorphism, RealCategory, RealMorphism};
pub use search::{enumerate_models, enumerate_models_with, SearchLimits, Strategy};

use crate::error::{Error, Result};
use crate::theory::{Formula, Fragment, Sort, Term, Theory, Variable};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// The table of one operation symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OpTable {
    pub name: String,
    /// Sort indices of the arguments.
    pub domain: Vec<usize>,
    pub codomain: usize,
    pub table: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FiniteModel {
    pub theory: String,
    pub sorts: Vec<Sort>,
    pub sizes: Vec<usize>,
    pub ops: Vec<OpTable>,
    /// Truth values of propositional letters.
    pub letters: BTreeMap<String, bool>,
}

/// Row-major offset of an argument tuple.
pub(crate) fn cell_index(sizes: &[usize], domain: &[usize], args: &[usize]) -> usize {
    domain.iter().zip(args).fold(0, |acc, (&s, &a)| acc * sizes[s] + a)
}

pub(crate) fn table_len(sizes: &[usize], domain: &[usize]) -> usize {
    domain.iter().map(|&s| sizes[s]).product()
}

impl FiniteModel {
    /// A model of the equational theory `t` with all carriers of size `size`
    /// and the given tables, keyed by operation name.
    pub fn from_tables(t: &Theory, size: usize, tables: &[(&str, Vec<usize>)]) -> Result<Self> {
        let sizes = vec![size; t.sorts.len()];
        let mut ops = Vec::with_capacity(t.functions.len());
        for f in &t.functions {
            let domain = f.domain.iter().map(|s| sort_idx(t, s)).collect::<Result<Vec<_>>>()?;
            let codomain = sort_idx(t, &f.codomain)?;
            let table = tables
                .iter()
                .find(|(n, _)| *n == f.name)
                .map(|(_, tb)| tb.clone())
                .ok_or_else(|| Error::SignatureMismatch(format!("no table for `{}`", f.name)))?;
            if table.len() != table_len(&sizes, &domain) || table.iter().any(|&v| v >= sizes[codomain]) {
                return Err(Error::SignatureMismatch(format!("table for `{}` is not total on the carrier", f.name)));
            }
            ops.push(OpTable { name: f.name.clone(), domain, codomain, table });
        }
        if let Some((n, _)) = tables.iter().find(|(n, _)| t.function(n).is_none()) {
            return Err(Error::UnknownSymbol(n.to_string()));
        }
        Ok(FiniteModel { theory: t.name.clone(), sorts: t.sorts.clone(), sizes, ops, letters: BTreeMap::new() })
    }

    /// A propositional model.
    pub fn assignment(t: &Theory, values: impl IntoIterator<Item = (String, bool)>) -> Self {
        FiniteModel { theory: t.name.clone(), sorts: vec![], sizes: vec![], ops: vec![], letters: values.into_iter().collect() }
    }

    pub fn op(&self, name: &str) -> Option<&OpTable> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn sort_index(&self, s: &Sort) -> Option<usize> {
        self.sorts.iter().position(|x| x == s)
    }

    pub fn size_of(&self, s: &Sort) -> Result<usize> {
        self.sort_index(s).map(|i| self.sizes[i]).ok_or_else(|| Error::UnknownSymbol(s.to_string()))
    }

    pub fn apply(&self, op: &OpTable, args: &[usize]) -> usize {
        op.table[cell_index(&self.sizes, &op.domain, args)]
    }

    pub fn eval(&self, term: &Term, env: &impl Fn(&Variable) -> Option<usize>) -> Result<usize> {
        match term {
            Term::Var(v) => env(v).ok_or_else(|| Error::UnknownSymbol(v.name.clone())),
            Term::App { op, args } => {
                let table = self.op(op).ok_or_else(|| Error::UnknownSymbol(op.clone()))?;
                if table.domain.len() != args.len() {
                    return Err(Error::SignatureMismatch(format!("`{op}` applied to {} arguments", args.len())));
                }
                let vals = args.iter().map(|a| self.eval(a, env)).collect::<Result<Vec<_>>>()?;
                Ok(self.apply(table, &vals))
            }
        }
    }

    /// Evaluates an equation or propositional formula under `env`.
    pub fn holds(&self, phi: &Formula, env: &impl Fn(&Variable) -> Option<usize>) -> Result<bool> {
        Ok(match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom { rel, .. } => *self.letters.get(rel).ok_or_else(|| Error::UnknownSymbol(rel.clone()))?,
            Formula::Eq(l, r) => self.eval(l, env)? == self.eval(r, env)?,
            Formula::Not(a) => !self.holds(a, env)?,
            Formula::And(a, b) => self.holds(a, env)? && self.holds(b, env)?,
            Formula::Or(a, b) => self.holds(a, env)? || self.holds(b, env)?,
            Formula::Implies(a, b) => !self.holds(a, env)? || self.holds(b, env)?,
        })
    }

    /// Every environment assigning carrier elements to `vars`.
    pub fn environments(&self, vars: &[Variable]) -> Result<Vec<Vec<usize>>> {
        let sizes = vars.iter().map(|v| self.size_of(&v.sort)).collect::<Result<Vec<_>>>()?;
        Ok(tuples(&sizes))
    }
}

/// All tuples in the product of `{0..n}` for each `n` in `sizes`, in lexicographic order.
pub(crate) fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in sizes {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.as_slice(), &[i]].concat())).collect();
    }
    out
}

fn sort_idx(t: &Theory, s: &Sort) -> Result<usize> {
    t.sort_index(s).ok_or_else(|| Error::UnknownSymbol(s.to_string()))
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.ops.iter().map(|o| format!("{}={:?}", o.name, o.table).replace(' ', "")).collect();
        parts.extend(self.letters.iter().map(|(l, v)| format!("{l}={}", u8::from(*v))));
        write!(f, "{}", parts.join(" "))
    }
}

/// Checks that `m` interprets the signature of `t`.
pub fn check_signature(t: &Theory, m: &FiniteModel) -> Result<()> {
    let mismatch = |msg: String| Err(Error::SignatureMismatch(msg));
    match t.fragment {
        Fragment::Prop => {
            let letters: Vec<&String> = m.letters.keys().collect();
            if letters != t.letters().iter().collect::<Vec<_>>() || !m.ops.is_empty() {
                return mismatch(format!("model letters {letters:?} do not match `{}`", t.name));
            }
        }
        Fragment::Eq => {
            if m.sorts != t.sorts || m.sizes.len() != m.sorts.len() || m.ops.len() != t.functions.len() {
                return mismatch(format!("model does not interpret the signature of `{}`", t.name));
            }
            for (f, o) in t.functions.iter().zip(&m.ops) {
                let domain: Vec<usize> = f.domain.iter().filter_map(|s| t.sort_index(s)).collect();
                if f.name != o.name || domain != o.domain || t.sort_index(&f.codomain) != Some(o.codomain) {
                    return mismatch(format!("table `{}` does not match symbol `{}`", o.name, f.name));
                }
                if o.table.len() != table_len(&m.sizes, &o.domain) || o.table.iter().any(|&v| v >= m.sizes[o.codomain]) {
                    return mismatch(format!("table `{}` is not total", o.name));
                }
            }
        }
    }
    Ok(())
}

/// Whether every axiom of `t` holds in `m` under every environment.
pub fn check_model(t: &Theory, m: &FiniteModel) -> Result<bool> {
    check_signature(t, m)?;
    for ax in &t.axioms {
        let vars: Vec<Variable> = crate::theory::Substitutable::free_vars(ax).into_iter().collect();
        for env in m.environments(&vars)? {
            let lookup = |v: &Variable| vars.iter().position(|w| w == v).map(|i| env[i]);
            if !m.holds(ax, &lookup)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}


#[cfg(test)]
mod tests {
    use super::fixtures::cyclic;
    use super::*;
    use crate::dsl::parse_theories;
    use crate::theory::group_theory;

    #[test]
    fn z2_is_a_group() {
        let g = group_theory();
        let z2 = FiniteModel::from_tables(&g, 2, &[("mul", vec![0, 1, 1, 0]), ("inv", vec![0, 1]), ("u", vec![0])]).unwrap();
        assert_eq!(z2, cyclic(2));
        assert!(check_model(&g, &z2).unwrap());
        assert!(check_model(&g, &cyclic(5)).unwrap());
        assert_eq!(z2.to_string(), "mul=[0,1,1,0] inv=[0,1] u=[0]");
    }

    #[test]
    fn non_neutral_unit_fails() {
        let g = group_theory();
        let bad = FiniteModel::from_tables(&g, 2, &[("mul", vec![0, 1, 1, 0]), ("inv", vec![0, 1]), ("u", vec![1])]).unwrap();
        assert!(!check_model(&g, &bad).unwrap());
    }

    #[test]
    fn signature_errors() {
        let g = group_theory();
        assert!(FiniteModel::from_tables(&g, 2, &[("mul", vec![0, 1, 1]), ("inv", vec![0, 1]), ("u", vec![0])]).is_err());
        assert!(FiniteModel::from_tables(&g, 2, &[("mul", vec![0, 1, 1, 0]), ("u", vec![0])]).is_err());
        let mut m = cyclic(2);
        m.ops.swap(0, 1);
        assert!(matches!(check_model(&g, &m), Err(Error::SignatureMismatch(_))));
        let p = Theory::propositional("P", ["x"], vec![]);
        assert!(matches!(check_model(&p, &cyclic(2)), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn exclusive_or_assignment() {
        let ts = parse_theories(include_str!("../../fixtures/props.theory")).unwrap();
        let xor = &ts[0];
        let m = FiniteModel::assignment(xor, [("x".to_string(), true), ("y".to_string(), false)]);
        assert!(check_model(xor, &m).unwrap());
        let both = FiniteModel::assignment(xor, [("x".to_string(), true), ("y".to_string(), true)]);
        assert!(!check_model(xor, &both).unwrap());
    }

    #[test]
    fn indexing_is_row_major() {
        assert_eq!(cell_index(&[3, 2], &[0, 1], &[2, 1]), 5);
        assert_eq!(tuples(&[2, 2]), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(tuples(&[]), vec![Vec::<usize>::new()]);
        assert!(tuples(&[0, 3]).is_empty());
    }
}
