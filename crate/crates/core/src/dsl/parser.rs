//! Recursive-descent parser for the theory format, followed by an
//! elaboration pass that resolves identifiers to function symbols or
//! variables and infers variable sorts.

use super::lexer::{Cursor, Tok};
use super::{DslError, SourceSpan};
use crate::theory::{
    check_well_formed, Diagnostic, Diagnostics, Formula, Fragment, FunctionSymbol, KernelError, Location, RelationSymbol, RewriteRule,
    Sort, Term, Theory, ValidatedTheory, Variable,
};
use std::collections::{BTreeMap, HashSet};

#[derive(Clone, Debug)]
struct STerm {
    name: String,
    args: Option<Vec<STerm>>,
    span: SourceSpan,
}

#[derive(Clone, Debug)]
enum SFormula {
    True,
    False,
    Pred(STerm),
    Eq(STerm, STerm, SourceSpan),
    Not(Box<SFormula>),
    And(Box<SFormula>, Box<SFormula>),
    Or(Box<SFormula>, Box<SFormula>),
    Implies(Box<SFormula>, Box<SFormula>),
    Iff(Box<SFormula>, Box<SFormula>),
}

enum Decl {
    Sort(String, SourceSpan),
    Op { name: String, domain: Vec<(String, SourceSpan)>, codomain: (String, SourceSpan), span: SourceSpan },
    Letters(Vec<(String, SourceSpan)>),
    Axiom(SFormula, SourceSpan),
    Rewrite(STerm, STerm, SourceSpan),
}

struct STheory {
    name: String,
    name_span: SourceSpan,
    fragment: Fragment,
    decls: Vec<Decl>,
}

const CONNECTIVES: [&str; 5] = ["not", "and", "or", "implies", "iff"];

fn theory(c: &mut Cursor) -> Result<STheory, DslError> {
    c.keyword("theory")?;
    let (name, name_span) = c.ident()?;
    let fragment = match c.ident()? {
        (k, _) if k == "prop" => Fragment::Prop,
        (k, _) if k == "eq" => Fragment::Eq,
        (k, span) => return Err(DslError::Syntax { message: format!("expected `prop` or `eq`, found `{k}`"), span }),
    };
    c.expect(Tok::LBrace)?;
    let mut decls = Vec::new();
    while !c.eat(&Tok::RBrace) {
        decls.push(decl(c)?);
    }
    Ok(STheory { name, name_span, fragment, decls })
}

fn decl(c: &mut Cursor) -> Result<Decl, DslError> {
    let (kw, kw_span) = c.ident()?;
    let d = match kw.as_str() {
        "sort" => {
            let (n, s) = c.ident()?;
            Decl::Sort(n, s)
        }
        "op" => {
            let (name, span) = c.ident()?;
            c.expect(Tok::Colon)?;
            let mut domain = Vec::new();
            if c.peek().tok != Tok::Arrow {
                domain.push(c.ident()?);
                while c.eat(&Tok::Comma) {
                    domain.push(c.ident()?);
                }
            }
            c.expect(Tok::Arrow)?;
            let codomain = c.ident()?;
            Decl::Op { name, domain, codomain, span }
        }
        "letters" => {
            let mut v = vec![c.ident()?];
            while c.eat(&Tok::Comma) {
                v.push(c.ident()?);
            }
            Decl::Letters(v)
        }
        "axiom" => Decl::Axiom(formula(c)?, kw_span),
        "rewrite" => {
            let l = term(c)?;
            c.expect(Tok::Arrow)?;
            let r = term(c)?;
            Decl::Rewrite(l, r, kw_span)
        }
        other => {
            return Err(DslError::Syntax {
                message: format!("expected `sort`, `op`, `letters`, `axiom` or `rewrite`, found `{other}`"),
                span: kw_span,
            })
        }
    };
    c.expect(Tok::Semi)?;
    Ok(d)
}

fn term(c: &mut Cursor) -> Result<STerm, DslError> {
    let (name, span) = c.ident()?;
    let args = if c.eat(&Tok::LParen) {
        let mut args = Vec::new();
        if !c.eat(&Tok::RParen) {
            args.push(term(c)?);
            while c.eat(&Tok::Comma) {
                args.push(term(c)?);
            }
            c.expect(Tok::RParen)?;
        }
        Some(args)
    } else {
        None
    };
    Ok(STerm { name, args, span })
}

fn formula(c: &mut Cursor) -> Result<SFormula, DslError> {
    if let Tok::Ident(k) = &c.peek().tok {
        let k = k.clone();
        if k == "true" || k == "false" {
            c.next();
            return Ok(if k == "true" { SFormula::True } else { SFormula::False });
        }
        if CONNECTIVES.contains(&k.as_str()) && c.peek_at(1) == &Tok::LParen {
            c.next();
            c.expect(Tok::LParen)?;
            let a = formula(c)?;
            let f = if k == "not" {
                SFormula::Not(Box::new(a))
            } else {
                c.expect(Tok::Comma)?;
                let b = Box::new(formula(c)?);
                let a = Box::new(a);
                match k.as_str() {
                    "and" => SFormula::And(a, b),
                    "or" => SFormula::Or(a, b),
                    "implies" => SFormula::Implies(a, b),
                    _ => SFormula::Iff(a, b),
                }
            };
            c.expect(Tok::RParen)?;
            return Ok(f);
        }
    }
    let lhs = term(c)?;
    if c.peek().tok == Tok::Equals {
        let span = c.next().span;
        let rhs = term(c)?;
        Ok(SFormula::Eq(lhs, rhs, span))
    } else {
        Ok(SFormula::Pred(lhs))
    }
}

/// Parses every theory in `text`, validating each one.
pub fn parse_theories(text: &str) -> Result<Vec<ValidatedTheory>, DslError> {
    let mut c = Cursor::new(text)?;
    let mut parsed = Vec::new();
    while !c.at_eof() {
        parsed.push(theory(&mut c)?);
    }
    if parsed.is_empty() {
        return Err(c.error("expected at least one `theory`"));
    }
    let mut names = HashSet::new();
    let mut diags = Vec::new();
    let mut out = Vec::new();
    for st in parsed {
        if !names.insert(st.name.clone()) {
            diags.push(at(KernelError::DuplicateSymbol { name: st.name.clone() }, st.name_span));
            continue;
        }
        match elaborate(&st) {
            Ok(t) => out.push(t),
            Err(mut d) => diags.append(&mut d),
        }
    }
    if diags.is_empty() {
        Ok(out)
    } else {
        Err(DslError::Invalid(Diagnostics(diags)))
    }
}

/// Parses a file holding exactly one theory.
pub fn parse_theory(text: &str) -> Result<ValidatedTheory, DslError> {
    let mut all = parse_theories(text)?;
    if all.len() != 1 {
        return Err(DslError::Syntax {
            message: format!("expected exactly one theory, found {}", all.len()),
            span: SourceSpan { line: 1, column: 1, start: 0, end: 0 },
        });
    }
    Ok(all.remove(0))
}

fn at(error: KernelError, span: SourceSpan) -> Diagnostic {
    Diagnostic { error, location: Location::Span(span) }
}

struct Elab<'a> {
    theory: Theory,
    diags: Vec<Diagnostic>,
    axiom_spans: Vec<SourceSpan>,
    header: &'a STheory,
}

fn elaborate(st: &STheory) -> Result<ValidatedTheory, Vec<Diagnostic>> {
    let mut e = Elab { theory: Theory::new(st.name.clone(), st.fragment), diags: Vec::new(), axiom_spans: Vec::new(), header: st };
    e.signature();
    e.axioms();
    if !e.diags.is_empty() {
        return Err(e.diags);
    }
    // The kernel re-checks everything; any diagnostic it raises is mapped
    // back to the closest span we know about.
    check_well_formed(&e.theory).map_err(|Diagnostics(ds)| {
        ds.into_iter()
            .map(|d| {
                let span = match &d.location {
                    Location::Path(p) => p
                        .strip_prefix("axiom[")
                        .and_then(|r| r.split(']').next())
                        .and_then(|i| i.parse::<usize>().ok())
                        .and_then(|i| e.axiom_spans.get(i).copied())
                        .unwrap_or(st.name_span),
                    Location::Span(s) => *s,
                };
                at(d.error, span)
            })
            .collect()
    })
}

impl Elab<'_> {
    fn signature(&mut self) {
        let st = self.header;
        let mut seen_sorts = HashSet::new();
        let mut seen_syms = HashSet::new();
        for d in &st.decls {
            match d {
                Decl::Sort(n, span) => {
                    if st.fragment == Fragment::Prop {
                        self.diags.push(at(frag("propositional theories have no sorts"), *span));
                    } else if !seen_sorts.insert(n.clone()) {
                        self.diags.push(at(KernelError::DuplicateSymbol { name: n.clone() }, *span));
                    } else {
                        self.theory.sorts.push(Sort::new(n.clone()));
                    }
                }
                Decl::Op { name, span, .. } => {
                    if st.fragment == Fragment::Prop {
                        self.diags.push(at(frag("propositional theories have no function symbols"), *span));
                    } else if !seen_syms.insert(name.clone()) {
                        self.diags.push(at(KernelError::DuplicateSymbol { name: name.clone() }, *span));
                    }
                }
                Decl::Letters(ls) => {
                    for (n, span) in ls {
                        if st.fragment == Fragment::Eq {
                            self.diags.push(at(frag("equational theories have no propositional letters"), *span));
                        } else if !seen_syms.insert(n.clone()) {
                            self.diags.push(at(KernelError::DuplicateSymbol { name: n.clone() }, *span));
                        } else {
                            self.theory.relations.push(RelationSymbol::letter(n.clone()));
                        }
                    }
                }
                Decl::Rewrite(_, _, span) if st.fragment == Fragment::Prop => {
                    self.diags.push(at(frag("rewrite rules belong to equational theories"), *span));
                }
                _ => {}
            }
        }
        if st.fragment == Fragment::Eq {
            let mut added = HashSet::new();
            for d in &st.decls {
                if let Decl::Op { name, domain, codomain, .. } = d {
                    if !added.insert(name.clone()) {
                        continue;
                    }
                    let mut resolve = |(s, span): &(String, SourceSpan)| {
                        if !seen_sorts.contains(s) {
                            self.diags.push(at(KernelError::UnknownSymbol { name: s.clone() }, *span));
                        }
                        Sort::new(s.clone())
                    };
                    let dom = domain.iter().map(&mut resolve).collect();
                    let cod = resolve(codomain);
                    self.theory.functions.push(FunctionSymbol::new(name.clone(), dom, cod));
                }
            }
        }
    }

    fn axioms(&mut self) {
        let st = self.header;
        for d in &st.decls {
            match d {
                Decl::Axiom(f, span) => {
                    self.axiom_spans.push(*span);
                    let f = match st.fragment {
                        Fragment::Prop => self.prop_formula(f),
                        Fragment::Eq => match f {
                            SFormula::Eq(l, r, _) => self.equation(l, r).map(|(l, r)| Formula::Eq(l, r)),
                            _ => {
                                self.diags.push(at(frag("equational axioms are bare equations"), *span));
                                None
                            }
                        },
                    };
                    if let Some(f) = f {
                        self.theory.axioms.push(f);
                    }
                }
                Decl::Rewrite(l, r, _) if st.fragment == Fragment::Eq => {
                    if let Some((lhs, rhs)) = self.equation(l, r) {
                        self.theory.rewrites.push(RewriteRule { lhs, rhs });
                    }
                }
                _ => {}
            }
        }
    }

    fn prop_formula(&mut self, f: &SFormula) -> Option<Formula> {
        Some(match f {
            SFormula::True => Formula::True,
            SFormula::False => Formula::False,
            SFormula::Pred(t) => {
                if self.theory.relation(&t.name).is_none() {
                    self.diags.push(at(KernelError::UnknownSymbol { name: t.name.clone() }, t.span));
                    return None;
                }
                if let Some(args) = &t.args {
                    self.diags.push(at(KernelError::ArityMismatch { symbol: t.name.clone(), expected: 0, found: args.len() }, t.span));
                    return None;
                }
                Formula::letter(t.name.clone())
            }
            SFormula::Eq(_, _, span) => {
                self.diags.push(at(frag("equations are not propositional formulae"), *span));
                return None;
            }
            SFormula::Not(a) => Formula::not(self.prop_formula(a)?),
            SFormula::And(a, b) => {
                let (a, b) = (self.prop_formula(a), self.prop_formula(b));
                Formula::and(a?, b?)
            }
            SFormula::Or(a, b) => {
                let (a, b) = (self.prop_formula(a), self.prop_formula(b));
                Formula::or(a?, b?)
            }
            SFormula::Implies(a, b) => {
                let (a, b) = (self.prop_formula(a), self.prop_formula(b));
                Formula::implies(a?, b?)
            }
            SFormula::Iff(a, b) => {
                let (a, b) = (self.prop_formula(a), self.prop_formula(b));
                Formula::iff(a?, b?)
            }
        })
    }

    /// Elaborates both sides of an equation with shared variable sorts.
    fn equation(&mut self, l: &STerm, r: &STerm) -> Option<(Term, Term)> {
        let before = self.diags.len();
        let mut sorts: BTreeMap<String, (Sort, SourceSpan)> = BTreeMap::new();
        let ls = self.infer(l, None, &mut sorts);
        let rs = self.infer(r, ls.clone(), &mut sorts);
        if ls.is_none() && self.diags.len() == before {
            if let Some(s) = rs {
                self.infer(l, Some(s), &mut sorts);
            }
        }
        if self.diags.len() > before {
            return None;
        }
        // Variables never constrained by a position default to the only sort.
        let mut unresolved = Vec::new();
        collect_unresolved(l, &self.theory, &sorts, &mut unresolved);
        collect_unresolved(r, &self.theory, &sorts, &mut unresolved);
        for (name, span) in unresolved {
            if self.theory.sorts.len() == 1 {
                sorts.insert(name, (self.theory.sorts[0].clone(), span));
            } else {
                self.diags.push(at(KernelError::AmbiguousSort { name }, span));
            }
        }
        if self.diags.len() > before {
            return None;
        }
        Some((self.build(l, &sorts), self.build(r, &sorts)))
    }

    fn infer(&mut self, t: &STerm, expected: Option<Sort>, vars: &mut BTreeMap<String, (Sort, SourceSpan)>) -> Option<Sort> {
        if let Some(sym) = self.theory.function(&t.name).cloned() {
            let args = t.args.as_deref().unwrap_or(&[]);
            if args.len() != sym.arity() {
                self.diags
                    .push(at(KernelError::ArityMismatch { symbol: sym.name.clone(), expected: sym.arity(), found: args.len() }, t.span));
                return None;
            }
            for (a, want) in args.iter().zip(&sym.domain) {
                self.infer(a, Some(want.clone()), vars);
            }
            if let Some(e) = expected {
                if e != sym.codomain {
                    self.diags.push(at(KernelError::SortMismatch { expected: e, found: sym.codomain.clone(), at: t.name.clone() }, t.span));
                }
            }
            return Some(sym.codomain);
        }
        if t.args.is_some() {
            self.diags.push(at(KernelError::UnknownSymbol { name: t.name.clone() }, t.span));
            return None;
        }
        match (vars.get(&t.name), expected) {
            (Some((s, _)), Some(e)) if *s != e => {
                self.diags.push(at(KernelError::SortMismatch { expected: s.clone(), found: e, at: t.name.clone() }, t.span));
                None
            }
            (Some((s, _)), _) => Some(s.clone()),
            (None, Some(e)) => {
                vars.insert(t.name.clone(), (e.clone(), t.span));
                Some(e)
            }
            (None, None) => None,
        }
    }

    fn build(&self, t: &STerm, vars: &BTreeMap<String, (Sort, SourceSpan)>) -> Term {
        if self.theory.function(&t.name).is_some() {
            let args = t.args.as_deref().unwrap_or(&[]);
            Term::app(t.name.clone(), args.iter().map(|a| self.build(a, vars)).collect())
        } else {
            Term::Var(Variable::new(t.name.clone(), vars[&t.name].0.clone()))
        }
    }
}

fn collect_unresolved(t: &STerm, theory: &Theory, vars: &BTreeMap<String, (Sort, SourceSpan)>, out: &mut Vec<(String, SourceSpan)>) {
    if theory.function(&t.name).is_some() {
        for a in t.args.as_deref().unwrap_or(&[]) {
            collect_unresolved(a, theory, vars, out);
        }
    } else if !vars.contains_key(&t.name) && !out.iter().any(|(n, _)| n == &t.name) {
        out.push((t.name.clone(), t.span));
    }
}

fn frag(reason: &str) -> KernelError {
    KernelError::FragmentViolation { reason: reason.to_string() }
}
