//! A brain is a directed graph whose nodes (neurons) carry finite Boolean
//! algebras and whose edges (axons) carry homomorphisms. An axon `s -> t`
//! carries a hom `logic(t) → logic(s)`, so its Stone dual moves states
//! (atoms) from `s` to `t`. Every neuron has an identity axon `id_<n>`.
//!
//! ```text
//! brain chain {
//!   neuron a atoms=2;
//!   neuron b atoms=2;
//!   neuron c atoms=1;
//!   axon f a -> b hom=[1, 0];      # atom i of a goes to atom hom[i] of b
//!   axon g b -> c hom=[0, 0];
//!   axon h a -> c composite=f,g;   # hom computed from the factors
//! }
//! ```

mod mind;
mod parse;
mod sim;

pub use mind::{audit_adjunction, audit_adjunction_with, export_dot, export_mind_dot, mind_of_brain, MindArrow, MindGraph};
pub use parse::load_brain;
pub use sim::{propagate, FanIn, NeuronState, Signal, StateTrace, TraceStep};

use crate::dsl::SourceSpan;
use crate::error::Error;
use crate::lindenbaum::{BoolHom, FiniteBooleanAlgebra};
use crate::stone::stone_dual_of_hom;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error, Serialize)]
pub enum BrainError {
    #[error("syntax error at {}:{}: {message}", span.line, span.column)]
    Syntax { message: String, span: SourceSpan },
    #[error("unknown neuron `{name}`")]
    UnknownNeuron { name: String, span: Option<SourceSpan> },
    #[error("unknown axon `{name}`")]
    UnknownAxon { name: String, span: Option<SourceSpan> },
    #[error("duplicate id `{name}`")]
    DuplicateId { name: String, span: Option<SourceSpan> },
    #[error("invalid hom on axon `{axon}`: {reason}")]
    InvalidHom { axon: String, reason: String },
    #[error("neuron `{neuron}` has no identity axon")]
    MissingIdentity { neuron: String },
    #[error(transparent)]
    Engine(#[from] Error),
}

impl BrainError {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            BrainError::Syntax { span, .. } => Some(*span),
            BrainError::UnknownNeuron { span, .. } | BrainError::UnknownAxon { span, .. } | BrainError::DuplicateId { span, .. } => *span,
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Neuron {
    pub id: String,
    pub logic: FiniteBooleanAlgebra,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Axon {
    pub id: String,
    pub source: String,
    pub target: String,
    /// `logic(target) → logic(source)`.
    pub hom: BoolHom,
    /// Declared factorisation `(first, second)`: this axon should equal
    /// `first` followed by `second`.
    pub composite: Option<(String, String)>,
}

impl Axon {
    pub fn identity_id(neuron: &str) -> String {
        format!("id_{neuron}")
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.id == Axon::identity_id(&self.source)
    }

    /// Where the Stone dual sends atom `p` of the source neuron.
    pub fn push(&self, p: usize) -> usize {
        self.hom.atom_map()[p]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrainGraph {
    pub name: String,
    pub neurons: Vec<Neuron>,
    /// Sorted by id.
    pub axons: Vec<Axon>,
}

impl BrainGraph {
    /// Validates ids, endpoints, hom shapes, identity axons and composite
    /// references. Whether declared composites agree with composition is
    /// reported by [`check_brain`].
    pub fn new(name: impl Into<String>, neurons: Vec<Neuron>, mut axons: Vec<Axon>) -> Result<Self, BrainError> {
        let mut seen = std::collections::BTreeSet::new();
        for id in neurons.iter().map(|n| &n.id).chain(axons.iter().map(|a| &a.id)) {
            if !seen.insert(id.clone()) {
                return Err(BrainError::DuplicateId { name: id.clone(), span: None });
            }
        }
        axons.sort_by(|a, b| a.id.cmp(&b.id));
        let g = BrainGraph { name: name.into(), neurons, axons };
        for a in &g.axons {
            let (s, t) = (g.neuron_or_err(&a.source)?, g.neuron_or_err(&a.target)?);
            if a.hom.source_atoms() != t.logic.atom_count() || a.hom.target_atoms() != s.logic.atom_count() {
                return Err(BrainError::InvalidHom {
                    axon: a.id.clone(),
                    reason: format!("hom is {}, expected {} atoms -> {} atoms", a.hom, t.logic.atom_count(), s.logic.atom_count()),
                });
            }
            if let Err(v) = a.hom.verify() {
                return Err(BrainError::InvalidHom { axon: a.id.clone(), reason: v.to_string() });
            }
            if a.id == Axon::identity_id(&a.source) && (a.source != a.target || a.hom != BoolHom::identity(&s.logic)) {
                return Err(BrainError::InvalidHom { axon: a.id.clone(), reason: "identity axon must be the identity loop".into() });
            }
            if let Some((f, h)) = &a.composite {
                let (f, h) = (g.axon_or_err(f)?, g.axon_or_err(h)?);
                if f.source != a.source || f.target != h.source || h.target != a.target {
                    return Err(BrainError::InvalidHom {
                        axon: a.id.clone(),
                        reason: format!("`{}` then `{}` does not run {} -> {}", f.id, h.id, a.source, a.target),
                    });
                }
            }
        }
        for n in &g.neurons {
            if !g.axons.iter().any(|a| a.is_identity() && a.source == n.id) {
                return Err(BrainError::MissingIdentity { neuron: n.id.clone() });
            }
        }
        Ok(g)
    }

    pub fn neuron(&self, id: &str) -> Option<&Neuron> {
        self.neurons.iter().find(|n| n.id == id)
    }

    pub fn axon(&self, id: &str) -> Option<&Axon> {
        self.axons.iter().find(|a| a.id == id)
    }

    fn neuron_or_err(&self, id: &str) -> Result<&Neuron, BrainError> {
        self.neuron(id).ok_or_else(|| BrainError::UnknownNeuron { name: id.into(), span: None })
    }

    fn axon_or_err(&self, id: &str) -> Result<&Axon, BrainError> {
        self.axon(id).ok_or_else(|| BrainError::UnknownAxon { name: id.into(), span: None })
    }
}

/// A state on which a declared composite and its factors disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeCounterexample {
    pub composite: String,
    pub factors: (String, String),
    pub neuron: String,
    pub atom: usize,
    pub via_composite: usize,
    pub via_factors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositeCheck {
    pub axon: String,
    pub factors: (String, String),
    pub agrees: bool,
    pub counterexample: Option<CompositeCounterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BrainCheckReport {
    pub neurons: usize,
    pub axons: usize,
    pub identities_ok: bool,
    pub composites: Vec<CompositeCheck>,
    pub associativity_checks: usize,
    pub associativity_ok: bool,
}

impl BrainCheckReport {
    pub fn passed(&self) -> bool {
        self.identities_ok && self.associativity_ok && self.composites.iter().all(|c| c.agrees)
    }

    pub fn counterexamples(&self) -> Vec<&CompositeCounterexample> {
        self.composites.iter().filter_map(|c| c.counterexample.as_ref()).collect()
    }
}

/// Pushes atom `atom` of the composite's source along the composite and
/// along its two factors.
pub fn replay_composite(g: &BrainGraph, composite: &str, atom: usize) -> Result<CompositeCounterexample, BrainError> {
    let h = g.axon_or_err(composite)?;
    let (f1, f2) =
        h.composite.clone().ok_or_else(|| BrainError::InvalidHom { axon: composite.into(), reason: "not a declared composite".into() })?;
    let (a, b) = (g.axon_or_err(&f1)?, g.axon_or_err(&f2)?);
    if atom >= h.hom.target_atoms() {
        return Err(Error::InvalidState(format!("neuron `{}` has no atom {atom}", h.source)).into());
    }
    Ok(CompositeCounterexample {
        composite: h.id.clone(),
        factors: (f1, f2),
        neuron: h.source.clone(),
        atom,
        via_composite: h.push(atom),
        via_factors: b.push(a.push(atom)),
    })
}

/// Verifies identity axons, declared composites (exhaustively over states)
/// and associativity of composition along every path of three axons.
pub fn check_brain(g: &BrainGraph) -> Result<BrainCheckReport, BrainError> {
    let identities_ok = g.axons.iter().filter(|a| a.is_identity()).all(|a| {
        let d = stone_dual_of_hom(&a.hom);
        (0..d.map.len()).all(|p| d.apply(p) == p)
    });
    let mut composites = Vec::new();
    for h in g.axons.iter().filter(|a| a.composite.is_some()) {
        let factors = h.composite.clone().unwrap();
        let mut counterexample = None;
        for p in 0..h.hom.target_atoms() {
            let r = replay_composite(g, &h.id, p)?;
            if r.via_composite != r.via_factors {
                counterexample = Some(r);
                break;
            }
        }
        composites.push(CompositeCheck { axon: h.id.clone(), factors, agrees: counterexample.is_none(), counterexample });
    }
    let mut associativity_checks = 0;
    let mut associativity_ok = true;
    for f in &g.axons {
        for h1 in g.axons.iter().filter(|x| x.source == f.target) {
            for h2 in g.axons.iter().filter(|x| x.source == h1.target) {
                associativity_checks += 1;
                let left = f.hom.compose(&h1.hom)?.compose(&h2.hom)?;
                let right = f.hom.compose(&h1.hom.compose(&h2.hom)?)?;
                associativity_ok &= left == right;
            }
        }
    }
    Ok(BrainCheckReport {
        neurons: g.neurons.len(),
        axons: g.axons.len(),
        identities_ok,
        composites,
        associativity_checks,
        associativity_ok,
    })
}

#[cfg(test)]
mod tests;
