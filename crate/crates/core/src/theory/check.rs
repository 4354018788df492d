use super::{Formula, Fragment, RewriteRule, Sort, Substitutable, Term, Theory, Variable};
use crate::dsl::SourceSpan;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::Deref;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum KernelError {
    #[error("unknown symbol `{name}`")]
    UnknownSymbol { name: String },
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("sort mismatch at `{at}`: expected {expected}, found {found}")]
    SortMismatch { expected: Sort, found: Sort, at: String },
    #[error("fragment violation: {reason}")]
    FragmentViolation { reason: String },
    #[error("unbound variable `{name}`")]
    UnboundVariable { name: String },
    #[error("duplicate symbol `{name}`")]
    DuplicateSymbol { name: String },
    #[error("cannot infer the sort of variable `{name}`")]
    AmbiguousSort { name: String },
}

/// Where a diagnostic points: a source span for DSL input, a symbol path
/// (`axiom[2]/lhs`) for programmatically built theories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Location {
    Span(SourceSpan),
    Path(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Span(s) => write!(f, "{}:{}", s.line, s.column),
            Location::Path(p) => f.write_str(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub error: KernelError,
    pub location: Location,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.error)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("{}", self.0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn first(&self) -> Option<&KernelError> {
        self.0.first().map(|d| &d.error)
    }
}

/// A theory that passed [`check_well_formed`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidatedTheory(Theory);

impl ValidatedTheory {
    pub fn theory(&self) -> &Theory {
        &self.0
    }

    pub fn into_inner(self) -> Theory {
        self.0
    }
}

impl Deref for ValidatedTheory {
    type Target = Theory;
    fn deref(&self) -> &Theory {
        &self.0
    }
}

impl AsRef<Theory> for ValidatedTheory {
    fn as_ref(&self) -> &Theory {
        &self.0
    }
}

struct Checker<'a> {
    theory: &'a Theory,
    diags: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn push(&mut self, error: KernelError, path: impl Into<String>) {
        self.diags.push(Diagnostic { error, location: Location::Path(path.into()) });
    }

    fn sort_known(&self, s: &Sort) -> bool {
        self.theory.sorts.contains(s)
    }

    fn signature(&mut self) {
        let t = self.theory;
        let mut seen = HashSet::new();
        for (i, s) in t.sorts.iter().enumerate() {
            if !seen.insert(s.0.clone()) {
                self.push(KernelError::DuplicateSymbol { name: s.0.clone() }, format!("sort[{i}]"));
            }
        }
        let mut seen = HashSet::new();
        for (i, f) in t.functions.iter().enumerate() {
            if !seen.insert(f.name.clone()) {
                self.push(KernelError::DuplicateSymbol { name: f.name.clone() }, format!("op[{i}]"));
            }
            for s in f.domain.iter().chain(std::iter::once(&f.codomain)) {
                if !self.sort_known(s) {
                    self.push(KernelError::UnknownSymbol { name: s.0.clone() }, format!("op[{i}]"));
                }
            }
        }
        for (i, r) in t.relations.iter().enumerate() {
            if !seen.insert(r.name.clone()) {
                self.push(KernelError::DuplicateSymbol { name: r.name.clone() }, format!("relation[{i}]"));
            }
            for s in &r.args {
                if !self.sort_known(s) {
                    self.push(KernelError::UnknownSymbol { name: s.0.clone() }, format!("relation[{i}]"));
                }
            }
        }
        match t.fragment {
            Fragment::Prop => {
                if !t.sorts.is_empty() {
                    self.push(frag("propositional theories have no sorts"), "sorts");
                }
                if !t.functions.is_empty() {
                    self.push(frag("propositional theories have no function symbols"), "ops");
                }
                if t.relations.iter().any(|r| !r.args.is_empty()) {
                    self.push(frag("propositional letters take no arguments"), "letters");
                }
                if !t.rewrites.is_empty() {
                    self.push(frag("rewrite rules belong to equational theories"), "rewrites");
                }
            }
            Fragment::Eq => {
                if !t.relations.is_empty() {
                    self.push(frag("equational theories have no relation symbols"), "letters");
                }
            }
        }
    }

    /// Checks a term against its own variable annotations, recording the
    /// sort of each variable in `vars` so repeated names must agree.
    fn term(&mut self, term: &Term, vars: &mut BTreeMap<String, Sort>, path: &str) -> Option<Sort> {
        match term {
            Term::Var(v) => {
                if !self.sort_known(&v.sort) {
                    self.push(KernelError::UnknownSymbol { name: v.sort.0.clone() }, path);
                    return None;
                }
                if self.theory.function(&v.name).is_some() {
                    self.push(frag(&format!("variable `{}` shadows a function symbol", v.name)), path);
                }
                match vars.get(&v.name) {
                    Some(s) if s != &v.sort => {
                        self.push(KernelError::SortMismatch { expected: s.clone(), found: v.sort.clone(), at: v.name.clone() }, path);
                        None
                    }
                    _ => {
                        vars.insert(v.name.clone(), v.sort.clone());
                        Some(v.sort.clone())
                    }
                }
            }
            Term::App { op, args } => {
                let Some(sym) = self.theory.function(op) else {
                    self.push(KernelError::UnknownSymbol { name: op.clone() }, path);
                    return None;
                };
                if sym.arity() != args.len() {
                    self.push(KernelError::ArityMismatch { symbol: op.clone(), expected: sym.arity(), found: args.len() }, path);
                    return None;
                }
                let mut ok = true;
                for (i, (arg, want)) in args.iter().zip(&sym.domain).enumerate() {
                    let sub = format!("{path}/{op}.{i}");
                    match self.term(arg, vars, &sub) {
                        Some(got) if &got != want => {
                            self.push(KernelError::SortMismatch { expected: want.clone(), found: got, at: arg.to_string() }, sub);
                            ok = false;
                        }
                        Some(_) => {}
                        None => ok = false,
                    }
                }
                ok.then(|| sym.codomain.clone())
            }
        }
    }

    fn equation(&mut self, l: &Term, r: &Term, path: &str) {
        let mut vars = BTreeMap::new();
        let ls = self.term(l, &mut vars, &format!("{path}/lhs"));
        let rs = self.term(r, &mut vars, &format!("{path}/rhs"));
        if let (Some(a), Some(b)) = (ls, rs) {
            if a != b {
                self.push(KernelError::SortMismatch { expected: a, found: b, at: r.to_string() }, path);
            }
        }
    }

    fn prop_formula(&mut self, f: &Formula, path: &str) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom { rel, args } => match self.theory.relation(rel) {
                None => self.push(KernelError::UnknownSymbol { name: rel.clone() }, path),
                Some(r) if r.arity() != args.len() => {
                    self.push(KernelError::ArityMismatch { symbol: rel.clone(), expected: r.arity(), found: args.len() }, path)
                }
                Some(_) => {}
            },
            Formula::Eq(..) => self.push(frag("equations are not propositional formulae"), path),
            Formula::Not(a) => self.prop_formula(a, &format!("{path}/not")),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.prop_formula(a, &format!("{path}/0"));
                self.prop_formula(b, &format!("{path}/1"));
            }
        }
    }

    fn axioms(&mut self) {
        let t = self.theory;
        for (i, ax) in t.axioms.iter().enumerate() {
            let path = format!("axiom[{i}]");
            match (t.fragment, ax) {
                (Fragment::Prop, f) => self.prop_formula(f, &path),
                (Fragment::Eq, Formula::Eq(l, r)) => self.equation(l, r, &path),
                (Fragment::Eq, Formula::Atom { rel, .. }) => self.push(KernelError::UnknownSymbol { name: rel.clone() }, path),
                (Fragment::Eq, _) => self.push(frag("equational axioms are bare equations"), path),
            }
        }
        for (i, RewriteRule { lhs, rhs }) in t.rewrites.iter().enumerate() {
            let path = format!("rewrite[{i}]");
            self.equation(lhs, rhs, &path);
            if matches!(lhs, Term::Var(_)) {
                self.push(frag("a rewrite rule cannot rewrite a bare variable"), path.clone());
            }
            let lv: BTreeSet<Variable> = lhs.free_vars();
            if let Some(extra) = rhs.free_vars().into_iter().find(|v| !lv.contains(v)) {
                self.push(KernelError::UnboundVariable { name: extra.name }, path);
            }
        }
    }
}

fn frag(reason: &str) -> KernelError {
    KernelError::FragmentViolation { reason: reason.to_string() }
}

/// Validates signature, sorts, arities and fragment restrictions, collecting
/// every diagnostic rather than stopping at the first.
pub fn check_well_formed(theory: &Theory) -> Result<ValidatedTheory, Diagnostics> {
    let mut c = Checker { theory, diags: Vec::new() };
    c.signature();
    c.axioms();
    if c.diags.is_empty() {
        Ok(ValidatedTheory(theory.clone()))
    } else {
        Err(Diagnostics(c.diags))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{group_theory, FunctionSymbol, RelationSymbol};

    #[test]
    fn group_theory_is_valid() {
        let g = check_well_formed(&group_theory()).unwrap();
        assert_eq!(g.sorts.len(), 1);
        assert_eq!(g.functions.len(), 3);
        assert_eq!(g.axioms.len(), 5);
        // idempotent
        assert_eq!(check_well_formed(g.theory()).unwrap(), g);
    }

    #[test]
    fn arity_violation() {
        let mut g = group_theory();
        let x = Sort::new("X");
        g.axioms.push(Formula::eq(Term::app("mul", vec![Term::var("x", &x)]), Term::var("x", &x)));
        let err = check_well_formed(&g).unwrap_err();
        assert!(matches!(err.first(), Some(KernelError::ArityMismatch { expected: 2, found: 1, .. })));
        assert_eq!(err.0[0].location, Location::Path("axiom[5]/lhs".into()));
    }

    #[test]
    fn exclusive_or_theory_is_valid() {
        let t = Theory::propositional(
            "P",
            ["x", "y"],
            vec![
                Formula::or(Formula::letter("x"), Formula::letter("y")),
                Formula::not(Formula::and(Formula::letter("x"), Formula::letter("y"))),
            ],
        );
        let v = check_well_formed(&t).unwrap();
        assert_eq!(v.relations.len(), 2);
        assert_eq!(v.axioms.len(), 2);
    }

    #[test]
    fn fragment_violations() {
        let x = Sort::new("X");
        let mut p = Theory::propositional("P", ["a"], vec![]);
        p.axioms.push(Formula::eq(Term::var("x", &x), Term::var("x", &x)));
        assert!(matches!(check_well_formed(&p).unwrap_err().first(), Some(KernelError::FragmentViolation { .. })));

        let mut p = Theory::propositional("P", ["a"], vec![]);
        p.sorts.push(x.clone());
        assert!(check_well_formed(&p).is_err());

        let mut e = group_theory();
        e.axioms.push(Formula::not(Formula::eq(Term::constant("u"), Term::constant("u"))));
        assert!(matches!(check_well_formed(&e).unwrap_err().first(), Some(KernelError::FragmentViolation { .. })));

        let mut e = group_theory();
        e.relations.push(RelationSymbol::letter("p"));
        assert!(check_well_formed(&e).is_err());
    }

    #[test]
    fn sort_errors() {
        let mut t = group_theory();
        let y = Sort::new("Y");
        t.sorts.push(y.clone());
        t.functions.push(FunctionSymbol::new("f", vec![y.clone()], y.clone()));
        // f applied to an X-term
        t.axioms.push(Formula::eq(Term::app("f", vec![Term::constant("u")]), Term::app("f", vec![Term::var("y", &y)])));
        let err = check_well_formed(&t).unwrap_err();
        assert!(matches!(err.first(), Some(KernelError::SortMismatch { .. })));

        // the same variable name at two sorts in one axiom
        let mut t = group_theory();
        t.sorts.push(y.clone());
        t.functions.push(FunctionSymbol::new("g", vec![y.clone()], Sort::new("X")));
        t.axioms.push(Formula::eq(Term::app("g", vec![Term::var("x", &y)]), Term::var("x", &Sort::new("X"))));
        assert!(matches!(check_well_formed(&t).unwrap_err().first(), Some(KernelError::SortMismatch { .. })));
    }

    #[test]
    fn unknown_symbol_and_duplicates() {
        let mut t = group_theory();
        t.axioms.push(Formula::eq(Term::constant("e"), Term::constant("u")));
        assert!(matches!(check_well_formed(&t).unwrap_err().first(), Some(KernelError::UnknownSymbol { .. })));
        let mut t = group_theory();
        t.functions.push(FunctionSymbol::new("u", vec![], Sort::new("X")));
        assert!(matches!(check_well_formed(&t).unwrap_err().first(), Some(KernelError::DuplicateSymbol { .. })));
    }

    #[test]
    fn accepts_exactly_sortable_terms() {
        let g = group_theory();
        let x = Sort::new("X");
        let good = Term::app("mul", vec![Term::var("a", &x), Term::app("inv", vec![Term::var("b", &x)])]);
        let bad = Term::app("inv", vec![Term::var("a", &x), Term::var("b", &x)]);
        for (t, ok) in [(good, true), (bad, false)] {
            let mut th = g.clone();
            th.axioms.push(Formula::eq(t.clone(), t.clone()));
            let ctx: Vec<Variable> = t.free_vars().into_iter().collect();
            assert_eq!(check_well_formed(&th).is_ok(), ok);
            assert_eq!(g.sort_of_term(&t, &ctx).is_ok(), ok);
        }
    }
}
