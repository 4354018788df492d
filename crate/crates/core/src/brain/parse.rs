use super::{Axon, BrainError, BrainGraph, Neuron};
use crate::dsl::lexer::{Cursor, Tok};
use crate::dsl::{DslError, SourceSpan};
use crate::lindenbaum::{BoolHom, Capacity, FiniteBooleanAlgebra};

impl From<DslError> for BrainError {
    fn from(e: DslError) -> Self {
        match e {
            DslError::Syntax { message, span } => BrainError::Syntax { message, span },
            other => BrainError::Syntax { message: other.to_string(), span: other.spans().first().copied().unwrap_or(EMPTY) },
        }
    }
}

const EMPTY: SourceSpan = SourceSpan { line: 1, column: 1, start: 0, end: 0 };

enum HomSpec {
    Atoms(Vec<usize>),
    Table(Vec<u64>),
    None,
}

struct AxonDecl {
    id: String,
    id_span: SourceSpan,
    source: (String, SourceSpan),
    target: (String, SourceSpan),
    hom: HomSpec,
    composite: Option<((String, SourceSpan), (String, SourceSpan))>,
}

/// Parses a brain description and validates it. Identity axons `id_<n>`
/// are added for neurons that do not declare one.
pub fn load_brain(text: &str) -> Result<BrainGraph, BrainError> {
    let mut c = Cursor::new(text)?;
    c.keyword("brain")?;
    let name = match c.peek().tok {
        Tok::Ident(_) => c.ident()?.0,
        _ => "brain".to_string(),
    };
    c.expect(Tok::LBrace)?;
    let mut neurons: Vec<(Neuron, SourceSpan)> = Vec::new();
    let mut decls = Vec::new();
    while !c.eat(&Tok::RBrace) {
        match &c.peek().tok {
            Tok::Ident(k) if k == "neuron" => {
                c.next();
                let (id, span) = c.ident()?;
                c.keyword("atoms")?;
                c.expect(Tok::Equals)?;
                let (n, nspan) = c.number()?;
                c.expect(Tok::Semi)?;
                let logic = FiniteBooleanAlgebra::try_new(n as usize, &Capacity::default())
                    .map_err(|e| BrainError::Syntax { message: e.to_string(), span: nspan })?;
                if neurons.iter().any(|(m, _)| m.id == id) {
                    return Err(BrainError::DuplicateId { name: id, span: Some(span) });
                }
                neurons.push((Neuron { id, logic }, span));
            }
            Tok::Ident(k) if k == "axon" => {
                c.next();
                decls.push(axon_decl(&mut c)?);
            }
            _ => return Err(c.error(format!("expected `neuron`, `axon` or `}}`, found {}", c.peek().tok.describe())).into()),
        }
    }
    if !c.at_eof() {
        return Err(c.error("unexpected input after brain block").into());
    }

    let find = |(name, span): &(String, SourceSpan)| {
        neurons
            .iter()
            .find(|(n, _)| &n.id == name)
            .map(|(n, _)| n)
            .ok_or_else(|| BrainError::UnknownNeuron { name: name.clone(), span: Some(*span) })
    };
    let mut axons: Vec<Axon> = Vec::new();
    let mut pending = Vec::new();
    for d in &decls {
        let (s, t) = (find(&d.source)?, find(&d.target)?);
        if axons.iter().any(|a| a.id == d.id) || pending.iter().any(|p: &&AxonDecl| p.id == d.id) {
            return Err(BrainError::DuplicateId { name: d.id.clone(), span: Some(d.id_span) });
        }
        let invalid = |reason: String| BrainError::InvalidHom { axon: d.id.clone(), reason };
        let hom = match &d.hom {
            HomSpec::Atoms(m) => BoolHom::from_atom_map(&t.logic, &s.logic, m.clone()).map_err(|e| invalid(e.to_string()))?,
            HomSpec::Table(tb) => BoolHom::from_element_table(&t.logic, &s.logic, tb).map_err(|e| invalid(e.to_string()))?,
            HomSpec::None if d.composite.is_some() => {
                pending.push(d);
                continue;
            }
            HomSpec::None => return Err(invalid("no `hom=` or `table=` given".into())),
        };
        let composite = d.composite.as_ref().map(|(f, g)| (f.0.clone(), g.0.clone()));
        axons.push(Axon { id: d.id.clone(), source: s.id.clone(), target: t.id.clone(), hom, composite });
    }
    // Composites without an explicit hom, resolved in dependency order.
    while !pending.is_empty() {
        let before = pending.len();
        let mut rest = Vec::new();
        for d in pending {
            let ((f, fspan), (g, gspan)) = d.composite.clone().unwrap();
            let lookup = |id: &str| axons.iter().find(|a| a.id == id).cloned();
            let known = |id: &str| decls.iter().any(|x| x.id == id);
            for (id, span) in [(&f, fspan), (&g, gspan)] {
                if !known(id) && !id.starts_with("id_") {
                    return Err(BrainError::UnknownAxon { name: id.clone(), span: Some(span) });
                }
            }
            let identity = |id: &str| {
                let n = id.strip_prefix("id_")?;
                let logic = &neurons.iter().find(|(x, _)| x.id == n)?.0.logic;
                Some(Axon { id: id.into(), source: n.into(), target: n.into(), hom: BoolHom::identity(logic), composite: None })
            };
            match (lookup(&f).or_else(|| identity(&f)), lookup(&g).or_else(|| identity(&g))) {
                (Some(a), Some(b)) => {
                    let hom = a.hom.compose(&b.hom).map_err(|e| BrainError::InvalidHom { axon: d.id.clone(), reason: e.to_string() })?;
                    axons.push(Axon {
                        id: d.id.clone(),
                        source: d.source.0.clone(),
                        target: d.target.0.clone(),
                        hom,
                        composite: Some((f, g)),
                    });
                }
                _ => rest.push(d),
            }
        }
        if rest.len() == before {
            return Err(BrainError::InvalidHom { axon: rest[0].id.clone(), reason: "composite depends on itself".into() });
        }
        pending = rest;
    }
    for (n, _) in &neurons {
        let id = Axon::identity_id(&n.id);
        if !axons.iter().any(|a| a.id == id) {
            axons.push(Axon { id, source: n.id.clone(), target: n.id.clone(), hom: BoolHom::identity(&n.logic), composite: None });
        }
    }
    BrainGraph::new(name, neurons.into_iter().map(|(n, _)| n).collect(), axons)
}

fn axon_decl(c: &mut Cursor) -> Result<AxonDecl, BrainError> {
    let (id, id_span) = c.ident()?;
    let source = c.ident()?;
    c.expect(Tok::Arrow)?;
    let target = c.ident()?;
    let mut hom = HomSpec::None;
    let mut composite = None;
    while !c.eat(&Tok::Semi) {
        let (key, span) = c.ident()?;
        c.expect(Tok::Equals)?;
        match key.as_str() {
            "hom" | "table" => {
                if !matches!(hom, HomSpec::None) {
                    return Err(BrainError::Syntax { message: "hom given twice".into(), span });
                }
                let list = number_list(c)?;
                hom = if key == "hom" { HomSpec::Atoms(list.into_iter().map(|n| n as usize).collect()) } else { HomSpec::Table(list) };
            }
            "composite" => {
                let f = c.ident()?;
                c.expect(Tok::Comma)?;
                let g = c.ident()?;
                composite = Some((f, g));
            }
            _ => return Err(BrainError::Syntax { message: format!("unknown axon attribute `{key}`"), span }),
        }
    }
    Ok(AxonDecl { id, id_span, source, target, hom, composite })
}

fn number_list(c: &mut Cursor) -> Result<Vec<u64>, BrainError> {
    c.expect(Tok::LBracket)?;
    let mut out = Vec::new();
    if c.eat(&Tok::RBracket) {
        return Ok(out);
    }
    loop {
        out.push(c.number()?.0);
        if c.eat(&Tok::RBracket) {
            return Ok(out);
        }
        c.expect(Tok::Comma)?;
    }
}
