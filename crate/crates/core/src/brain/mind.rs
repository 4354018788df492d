use super::{BrainError, BrainGraph};
use crate::adjunction::{
    check_adjunction_with, comparison, lang_hom, AdjunctionReport, CanonicalTransposition, Comparison, TheoryMorphism, Transposition,
};
use crate::theory::Theory;
use serde::Serialize;
use std::fmt::Write;

#[derive(Clone, Debug, Serialize)]
pub struct MindNode {
    pub neuron: String,
    pub theory: Theory,
}

/// The image of one axon `s -> t`: a theory morphism `lang(t) → lang(s)`.
#[derive(Clone, Debug, Serialize)]
pub struct MindArrow {
    pub id: String,
    pub source: String,
    pub target: String,
    pub morphism: TheoryMorphism,
}

#[derive(Clone, Debug, Serialize)]
pub struct MindGraph {
    pub name: String,
    pub nodes: Vec<MindNode>,
    pub arrows: Vec<MindArrow>,
}

impl MindGraph {
    pub fn theory(&self, neuron: &str) -> Option<&Theory> {
        self.nodes.iter().find(|n| n.neuron == neuron).map(|n| &n.theory)
    }
}

fn comparisons(g: &BrainGraph) -> Result<Vec<Comparison>, BrainError> {
    g.neurons
        .iter()
        .map(|n| {
            let mut c = comparison(&n.logic)?;
            c.lang.name = format!("lang_{}", n.id);
            Ok(c)
        })
        .collect()
}

/// Applies `lang` to every neuron and axon. Axon homs are conjugated by the
/// canonical isos `B ≅ Syn(lang B)`.
pub fn mind_of_brain(g: &BrainGraph) -> Result<MindGraph, BrainError> {
    let cmps = comparisons(g)?;
    let at = |id: &str| &cmps[g.neurons.iter().position(|n| n.id == id).unwrap()];
    let arrows = g
        .axons
        .iter()
        .map(|a| {
            Ok(MindArrow {
                id: a.id.clone(),
                source: a.source.clone(),
                target: a.target.clone(),
                morphism: lang_hom(at(&a.target), at(&a.source), &a.hom)?,
            })
        })
        .collect::<Result<_, BrainError>>()?;
    Ok(MindGraph {
        name: g.name.clone(),
        nodes: g.neurons.iter().zip(cmps).map(|(n, c)| MindNode { neuron: n.id.clone(), theory: c.lang }).collect(),
        arrows,
    })
}

/// One adjunction report per ordered pair (logic of neuron `i`, theory of
/// neuron `j`), row-major in neuron order.
pub fn audit_adjunction(g: &BrainGraph, seed: u64) -> Result<Vec<AdjunctionReport>, BrainError> {
    audit_adjunction_with(g, seed, &CanonicalTransposition)
}

pub fn audit_adjunction_with(g: &BrainGraph, seed: u64, tr: &dyn Transposition) -> Result<Vec<AdjunctionReport>, BrainError> {
    let cmps = comparisons(g)?;
    let mut out = Vec::new();
    for b in &cmps {
        for t in &cmps {
            out.push(check_adjunction_with(&b.algebra, &t.lang, seed, tr)?);
        }
    }
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn export_dot(g: &BrainGraph) -> String {
    let mut out = format!("digraph {} {{\n", quote(&g.name));
    for n in &g.neurons {
        let _ = writeln!(out, "  {} [label={}];", quote(&n.id), quote(&format!("{} ({} atoms)", n.id, n.logic.atom_count())));
    }
    for a in &g.axons {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(&a.source), quote(&a.target), quote(&a.id));
    }
    out.push_str("}\n");
    out
}

/// Identity arrows are left implicit.
pub fn export_mind_dot(m: &MindGraph) -> String {
    let mut out = format!("digraph {} {{\n", quote(&format!("mind_{}", m.name)));
    for n in &m.nodes {
        let label = format!("{}: {} ({} letters)", n.neuron, n.theory.name, n.theory.letters().len());
        let _ = writeln!(out, "  {} [label={}];", quote(&n.neuron), quote(&label));
    }
    for a in m.arrows.iter().filter(|a| a.id != super::Axon::identity_id(&a.source)) {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(&a.source), quote(&a.target), quote(&a.id));
    }
    out.push_str("}\n");
    out
}
