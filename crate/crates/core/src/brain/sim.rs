use super::{BrainError, BrainGraph};
use crate::error::Error;
use crate::stone::{stone_dual_of_hom, ContinuousMap};
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// A Stone point (atom index) of a neuron's algebra, or no output at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signal {
    Silent,
    Atom(usize),
}

impl Serialize for Signal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Signal::Silent => s.serialize_str("silent"),
            Signal::Atom(a) => s.serialize_u64(*a as u64),
        }
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signal::Silent => f.write_str("silent"),
            Signal::Atom(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeuronState {
    pub neuron: String,
    pub state: Signal,
}

impl NeuronState {
    pub fn atom(neuron: &str, atom: usize) -> Self {
        NeuronState { neuron: neuron.into(), state: Signal::Atom(atom) }
    }
}

/// `a=1` or `a=silent`.
impl FromStr for NeuronState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let (n, v) = s.split_once('=').ok_or_else(|| Error::InvalidState(format!("`{s}` is not of the form neuron=atom")))?;
        let state = match v.trim() {
            "silent" => Signal::Silent,
            v => Signal::Atom(v.parse().map_err(|_| Error::InvalidState(format!("`{v}` is not an atom index")))?),
        };
        Ok(NeuronState { neuron: n.trim().into(), state })
    }
}

/// Which incoming axon fed a neuron at one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanIn {
    pub neuron: String,
    /// Axons whose source was not silent, in priority order.
    pub candidates: Vec<String>,
    pub chosen: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    /// One entry per neuron, in declaration order.
    pub states: Vec<NeuronState>,
    pub fan_in: Vec<FanIn>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateTrace {
    pub brain: String,
    pub steps: Vec<TraceStep>,
}

impl StateTrace {
    pub fn state(&self, step: usize, neuron: &str) -> Option<Signal> {
        self.steps.get(step)?.states.iter().find(|s| s.neuron == neuron).map(|s| s.state)
    }

    /// The least `p > 0` with `states[i] == states[i + p]` for the last
    /// recorded step `i + p`, if the trace is long enough to show one.
    pub fn period(&self) -> Option<usize> {
        let last = self.steps.last()?;
        (1..self.steps.len()).find(|&p| self.steps[self.steps.len() - 1 - p].states == last.states)
    }
}

/// Indices of the axons into `neuron` in fan-in priority: non-identity
/// axons by id, then the neuron's own identity axon.
fn incoming(g: &BrainGraph, neuron: &str) -> Vec<usize> {
    let into =
        |identity: bool| g.axons.iter().enumerate().filter(move |(_, a)| a.target == neuron && a.is_identity() == identity).map(|(i, _)| i);
    into(false).chain(into(true)).collect()
}

/// Runs `steps` synchronous steps. Neurons missing from `initial` start
/// silent. Every axon pushes its source's point forward along the Stone
/// dual of its hom; a silent source pushes nothing.
pub fn propagate(g: &BrainGraph, initial: &[NeuronState], steps: usize) -> Result<StateTrace, BrainError> {
    let mut current = vec![Signal::Silent; g.neurons.len()];
    let index = |id: &str| g.neurons.iter().position(|n| n.id == id);
    let mut seen = vec![false; g.neurons.len()];
    for s in initial {
        let i = index(&s.neuron).ok_or_else(|| Error::InvalidState(format!("unknown neuron `{}`", s.neuron)))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidState(format!("neuron `{}` given twice", s.neuron)).into());
        }
        if let Signal::Atom(a) = s.state {
            let n = g.neurons[i].logic.atom_count();
            if a >= n {
                return Err(Error::InvalidState(format!("neuron `{}` has {n} atoms, no atom {a}", s.neuron)).into());
            }
        }
        current[i] = s.state;
    }
    let duals: Vec<(usize, ContinuousMap)> = g.axons.iter().map(|a| (index(&a.source).unwrap(), stone_dual_of_hom(&a.hom))).collect();
    let feeds: Vec<Vec<usize>> = g.neurons.iter().map(|n| incoming(g, &n.id)).collect();

    let snapshot = |states: &[Signal]| -> Vec<NeuronState> {
        g.neurons.iter().zip(states).map(|(n, &state)| NeuronState { neuron: n.id.clone(), state }).collect()
    };
    let mut trace = StateTrace { brain: g.name.clone(), steps: vec![TraceStep { step: 0, states: snapshot(&current), fan_in: vec![] }] };
    for step in 1..=steps {
        let mut next = vec![Signal::Silent; g.neurons.len()];
        let mut fan_in = Vec::with_capacity(g.neurons.len());
        for (i, n) in g.neurons.iter().enumerate() {
            let mut candidates = Vec::new();
            for &k in &feeds[i] {
                let (src, dual) = &duals[k];
                if let Signal::Atom(p) = current[*src] {
                    if candidates.is_empty() {
                        next[i] = Signal::Atom(dual.apply(p));
                    }
                    candidates.push(g.axons[k].id.clone());
                }
            }
            fan_in.push(FanIn { neuron: n.id.clone(), chosen: candidates.first().cloned(), candidates });
        }
        current = next;
        trace.steps.push(TraceStep { step, states: snapshot(&current), fan_in });
    }
    Ok(trace)
}
