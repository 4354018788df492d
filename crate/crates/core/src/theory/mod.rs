//! Abstract syntax for multi-sorted propositional and equational theories.
//!
//! A [`Theory`] carries a signature (sorts, function symbols, relation
//! symbols), a list of axioms and a fragment tag. Propositional letters are
//! 0-ary relation symbols, so one type serves both fragments. Equational
//! axioms are implicitly universally closed; there is no quantifier node.

mod check;
mod subst;

pub use check::{check_well_formed, Diagnostic, Diagnostics, KernelError, Location, ValidatedTheory};
pub use subst::{Substitutable, Substitution};

use serde::Serialize;
use std::fmt;

/// A type symbol of a theory.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Sort(pub String);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `f : X1, ..., Xn -> Y`. Constants have an empty domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FunctionSymbol {
    pub name: String,
    pub domain: Vec<Sort>,
    pub codomain: Sort,
}

impl FunctionSymbol {
    pub fn new(name: impl Into<String>, domain: Vec<Sort>, codomain: Sort) -> Self {
        FunctionSymbol { name: name.into(), domain, codomain }
    }

    pub fn arity(&self) -> usize {
        self.domain.len()
    }
}

/// `R ⊆ X1 × ... × Xn`. A relation symbol with no arguments is a
/// propositional letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RelationSymbol {
    pub name: String,
    pub args: Vec<Sort>,
}

impl RelationSymbol {
    pub fn letter(name: impl Into<String>) -> Self {
        RelationSymbol { name: name.into(), args: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Variable {
    pub name: String,
    pub sort: Sort,
}

impl Variable {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Variable { name: name.into(), sort }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Term {
    Var(Variable),
    App { op: String, args: Vec<Term> },
}

impl Term {
    pub fn var(name: impl Into<String>, sort: &Sort) -> Self {
        Term::Var(Variable::new(name, sort.clone()))
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App { op: op.into(), args }
    }

    pub fn constant(op: impl Into<String>) -> Self {
        Term::App { op: op.into(), args: Vec::new() }
    }

    /// Nesting height; variables and constants have height 0.
    pub fn height(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App { args, .. } => args.iter().map(|a| a.height() + 1).max().unwrap_or(0),
        }
    }

    /// Number of symbol occurrences (variables included).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Number of variable occurrences.
    pub fn variable_occurrences(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App { args, .. } => args.iter().map(Term::variable_occurrences).sum(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::App { op, args } if args.is_empty() => f.write_str(op),
            Term::App { op, args } => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Formula {
    True,
    False,
    Atom { rel: String, args: Vec<Term> },
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn letter(name: impl Into<String>) -> Self {
        Formula::Atom { rel: name.into(), args: Vec::new() }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Biconditional, desugared to a conjunction of implications.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// True when the formula uses no connective, i.e. is a bare equation or atom.
    pub fn is_connective_free(&self) -> bool {
        matches!(self, Formula::Atom { .. } | Formula::Eq(..))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Classical evaluation of a propositional formula; `letter` supplies
    /// the value of each 0-ary atom. Returns `None` on atoms with arguments,
    /// equations, or letters the callback rejects.
    pub fn eval_prop(&self, letter: &mut impl FnMut(&str) -> Option<bool>) -> Option<bool> {
        Some(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom { rel, args } if args.is_empty() => letter(rel)?,
            Formula::Atom { .. } | Formula::Eq(..) => return None,
            Formula::Not(a) => !a.eval_prop(letter)?,
            Formula::And(a, b) => {
                let x = a.eval_prop(letter)?;
                let y = b.eval_prop(letter)?;
                x && y
            }
            Formula::Or(a, b) => {
                let x = a.eval_prop(letter)?;
                let y = b.eval_prop(letter)?;
                x || y
            }
            Formula::Implies(a, b) => {
                let x = a.eval_prop(letter)?;
                let y = b.eval_prop(letter)?;
                !x || y
            }
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom { rel, args } if args.is_empty() => f.write_str(rel),
            Formula::Atom { rel, args } => {
                write!(f, "{rel}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::Not(a) => write!(f, "not({a})"),
            Formula::And(a, b) => write!(f, "and({a}, {b})"),
            Formula::Or(a, b) => write!(f, "or({a}, {b})"),
            Formula::Implies(a, b) => write!(f, "implies({a}, {b})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Fragment {
    Prop,
    Eq,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Prop => "prop",
            Fragment::Eq => "eq",
        })
    }
}

/// An oriented equation `lhs -> rhs` used to decide equality in an
/// equational theory by normalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RewriteRule {
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theory {
    pub name: String,
    pub fragment: Fragment,
    pub sorts: Vec<Sort>,
    pub functions: Vec<FunctionSymbol>,
    pub relations: Vec<RelationSymbol>,
    pub axioms: Vec<Formula>,
    pub rewrites: Vec<RewriteRule>,
}

impl Theory {
    pub fn new(name: impl Into<String>, fragment: Fragment) -> Self {
        Theory {
            name: name.into(),
            fragment,
            sorts: Vec::new(),
            functions: Vec::new(),
            relations: Vec::new(),
            axioms: Vec::new(),
            rewrites: Vec::new(),
        }
    }

    /// A propositional theory over the given letters and axioms.
    pub fn propositional<S: Into<String>>(name: impl Into<String>, letters: impl IntoIterator<Item = S>, axioms: Vec<Formula>) -> Self {
        let mut t = Theory::new(name, Fragment::Prop);
        t.relations = letters.into_iter().map(RelationSymbol::letter).collect();
        t.axioms = axioms;
        t
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSymbol> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSymbol> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn sort_index(&self, sort: &Sort) -> Option<usize> {
        self.sorts.iter().position(|s| s == sort)
    }

    /// Propositional letters sorted by name; this is the canonical letter
    /// order used for truth assignments.
    pub fn letters(&self) -> Vec<String> {
        let mut v: Vec<String> = self.relations.iter().filter(|r| r.args.is_empty()).map(|r| r.name.clone()).collect();
        v.sort();
        v
    }

    /// The sort of `term` over `context`.
    pub fn sort_of_term(&self, term: &Term, context: &[Variable]) -> Result<Sort, KernelError> {
        match term {
            Term::Var(v) => {
                let bound =
                    context.iter().find(|c| c.name == v.name).ok_or_else(|| KernelError::UnboundVariable { name: v.name.clone() })?;
                if bound.sort != v.sort {
                    return Err(KernelError::SortMismatch { expected: bound.sort.clone(), found: v.sort.clone(), at: v.name.clone() });
                }
                Ok(bound.sort.clone())
            }
            Term::App { op, args } => {
                let sym = self.function(op).ok_or_else(|| KernelError::UnknownSymbol { name: op.clone() })?;
                if sym.arity() != args.len() {
                    return Err(KernelError::ArityMismatch { symbol: op.clone(), expected: sym.arity(), found: args.len() });
                }
                for (arg, want) in args.iter().zip(&sym.domain) {
                    let got = self.sort_of_term(arg, context)?;
                    if &got != want {
                        return Err(KernelError::SortMismatch { expected: want.clone(), found: got, at: arg.to_string() });
                    }
                }
                Ok(sym.codomain.clone())
            }
        }
    }

    /// Applies `sigma` after checking that it respects sorts on the free
    /// variables of `term`.
    pub fn substitute_term(&self, term: &Term, sigma: &Substitution) -> Result<Term, KernelError> {
        self.check_substitution(&term.free_vars(), sigma)?;
        Ok(term.substitute(sigma))
    }

    pub fn substitute_formula(&self, formula: &Formula, sigma: &Substitution) -> Result<Formula, KernelError> {
        self.check_substitution(&formula.free_vars(), sigma)?;
        Ok(formula.substitute(sigma))
    }

    fn check_substitution(&self, vars: &std::collections::BTreeSet<Variable>, sigma: &Substitution) -> Result<(), KernelError> {
        for v in vars {
            if let Some(t) = sigma.get(v) {
                let ctx: Vec<Variable> = t.free_vars().into_iter().collect();
                let s = self.sort_of_term(t, &ctx)?;
                if s != v.sort {
                    return Err(KernelError::SortMismatch { expected: v.sort.clone(), found: s, at: v.name.clone() });
                }
            }
        }
        Ok(())
    }
}

/// The theory of groups: one sort `X`, `mul`, `inv`, constant `u` and the
/// five usual equations.
pub fn group_theory() -> Theory {
    let x = Sort::new("X");
    let mut t = Theory::new("GROUP", Fragment::Eq);
    t.sorts.push(x.clone());
    t.functions.push(FunctionSymbol::new("mul", vec![x.clone(), x.clone()], x.clone()));
    t.functions.push(FunctionSymbol::new("inv", vec![x.clone()], x.clone()));
    t.functions.push(FunctionSymbol::new("u", vec![], x.clone()));
    let v = |n: &str| Term::var(n, &x);
    let mul = |a: Term, b: Term| Term::app("mul", vec![a, b]);
    let inv = |a: Term| Term::app("inv", vec![a]);
    let u = || Term::constant("u");
    t.axioms = vec![
        Formula::eq(mul(v("x"), mul(v("y"), v("z"))), mul(mul(v("x"), v("y")), v("z"))),
        Formula::eq(mul(v("x"), u()), v("x")),
        Formula::eq(mul(u(), v("x")), v("x")),
        Formula::eq(mul(v("x"), inv(v("x"))), u()),
        Formula::eq(mul(inv(v("x")), v("x")), u()),
    ];
    t
}
