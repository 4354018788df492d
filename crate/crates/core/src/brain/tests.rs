use super::*;
use crate::adjunction::{comparison, TwistedTransposition};
use crate::lindenbaum::{enumerate_homs, Capacity};
use proptest::prelude::*;

fn fixture(name: &str) -> BrainGraph {
    let text = std::fs::read_to_string(format!("{}/fixtures/brains/{name}.brain", env!("CARGO_MANIFEST_DIR"))).unwrap();
    load_brain(&text).unwrap()
}

const WELL_FORMED: [&str; 5] = ["single", "pair", "chain", "swap", "collapse"];

#[test]
fn loads_single_neuron() {
    let g = fixture("single");
    assert_eq!(g.neurons.len(), 1);
    assert_eq!(g.axons.len(), 1);
    assert!(g.axons[0].is_identity());
    assert!(check_brain(&g).unwrap().passed());
}

#[test]
fn non_preserving_table_is_rejected() {
    let text = std::fs::read_to_string(format!("{}/fixtures/brains/bad_hom.brain", env!("CARGO_MANIFEST_DIR"))).unwrap();
    assert!(matches!(load_brain(&text), Err(BrainError::InvalidHom { axon, .. }) if axon == "f"));
}

#[test]
fn load_errors() {
    let unknown = load_brain("brain x {\n  neuron a atoms=1;\n  axon f a -> zz hom=[0];\n}").unwrap_err();
    assert!(matches!(&unknown, BrainError::UnknownNeuron { name, .. } if name == "zz"));
    assert_eq!(unknown.span().unwrap().line, 3);
    assert!(matches!(load_brain("brain { neuron a atoms=1 }"), Err(BrainError::Syntax { .. })));
    assert!(matches!(load_brain("brain { neuron a atoms=1; neuron a atoms=2; }"), Err(BrainError::DuplicateId { .. })));
    assert!(matches!(load_brain("brain { neuron a atoms=2; axon f a -> a hom=[0]; }"), Err(BrainError::InvalidHom { .. })));
    assert!(matches!(load_brain("brain { neuron a atoms=2; axon f a -> a; }"), Err(BrainError::InvalidHom { .. })));
    assert!(matches!(load_brain("brain { neuron a atoms=2; axon id_a a -> a hom=[1, 0]; }"), Err(BrainError::InvalidHom { .. })));
    assert!(matches!(load_brain("brain { neuron a atoms=1; axon h a -> a composite=h,h; }"), Err(BrainError::InvalidHom { .. })));
    let g = fixture("pair");
    let mut axons = g.axons.clone();
    axons.retain(|a| a.id != "id_b");
    assert!(matches!(BrainGraph::new("p", g.neurons.clone(), axons), Err(BrainError::MissingIdentity { neuron }) if neuron == "b"));
}

#[test]
fn composite_is_computed_or_checked() {
    let g = fixture("chain");
    let (f, gg, h) = (g.axon("f").unwrap(), g.axon("g").unwrap(), g.axon("h").unwrap());
    // Oracle: compose the element tables directly.
    let a = &g.neuron("a").unwrap().logic;
    for e in g.neuron("c").unwrap().logic.elements() {
        assert_eq!(h.hom.apply(e), f.hom.apply(gg.hom.apply(e)));
    }
    assert_eq!(h.hom.target_atoms(), a.atom_count());
    let r = check_brain(&g).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.composites.len(), 1);

    let text = "brain { neuron a atoms=3; neuron b atoms=2; neuron c atoms=2;
        axon f a -> b hom=[0, 1, 1]; axon g b -> c hom=[1, 0]; axon h a -> c composite=f,g; }";
    assert_eq!(load_brain(text).unwrap().axon("h").unwrap().hom, h.hom);
}

#[test]
fn corrupted_composite_yields_counterexample() {
    let g = fixture("broken_composite");
    let r = check_brain(&g).unwrap();
    assert!(!r.passed());
    let cx = r.counterexamples()[0].clone();
    assert_eq!((cx.atom, cx.via_composite, cx.via_factors), (0, 0, 1));
    assert_eq!(replay_composite(&g, "h", cx.atom).unwrap(), cx);
}

#[test]
fn identity_axon_is_fixed_point() {
    let g = fixture("single");
    let t = propagate(&g, &[NeuronState::atom("a", 0)], 5).unwrap();
    assert!((0..=5).all(|s| t.state(s, "a") == Some(Signal::Atom(0))));
    assert_eq!(t.steps[3].fan_in[0].chosen.as_deref(), Some("id_a"));
}

#[test]
fn collapse_to_terminal() {
    let g = fixture("collapse");
    for p in 0..3 {
        let t = propagate(&g, &[NeuronState::atom("a", p)], 1).unwrap();
        assert_eq!(t.state(1, "t"), Some(Signal::Atom(0)));
    }
}

#[test]
fn swap_has_period_two() {
    let g = fixture("swap");
    let t = propagate(&g, &[NeuronState::atom("a", 0), NeuronState::atom("b", 0)], 6).unwrap();
    let a: Vec<_> = (0..=6).map(|s| t.state(s, "a").unwrap()).collect();
    assert_eq!(a, [0, 1, 0, 1, 0, 1, 0].map(Signal::Atom));
    assert_eq!(t.period(), Some(2));
    assert_eq!(t.steps[1].fan_in[0].candidates, ["g", "id_a"]);
    assert_eq!(t.steps[1].fan_in[0].chosen.as_deref(), Some("g"));
}

#[test]
fn silence() {
    let g = fixture("pair");
    let t = propagate(&g, &[], 3).unwrap();
    assert!(t.steps.iter().all(|s| s.states.iter().all(|n| n.state == Signal::Silent)));
    let t = propagate(&g, &[NeuronState::atom("a", 1)], 2).unwrap();
    assert_eq!(t.state(1, "b"), Some(Signal::Atom(0)));
    assert_eq!(t.state(2, "b"), Some(Signal::Atom(0)));
    let s = serde_json::to_value(&t.steps[0].states).unwrap();
    assert_eq!(s[1]["state"], "silent");
}

#[test]
fn invalid_states() {
    let g = fixture("pair");
    for bad in
        [vec![NeuronState::atom("a", 2)], vec![NeuronState::atom("q", 0)], vec![NeuronState::atom("a", 0), NeuronState::atom("a", 1)]]
    {
        assert!(matches!(propagate(&g, &bad, 1), Err(BrainError::Engine(Error::InvalidState(_)))));
    }
    assert_eq!("b=silent".parse::<NeuronState>().unwrap().state, Signal::Silent);
    assert!("b".parse::<NeuronState>().is_err());
}

#[test]
fn mind_mirrors_brain() {
    for name in WELL_FORMED {
        let g = fixture(name);
        let m = mind_of_brain(&g).unwrap();
        assert_eq!(m.nodes.iter().map(|n| &n.neuron).collect::<Vec<_>>(), g.neurons.iter().map(|n| &n.id).collect::<Vec<_>>());
        let mind: Vec<_> = m.arrows.iter().map(|a| (&a.id, &a.source, &a.target)).collect();
        let brain: Vec<_> = g.axons.iter().map(|a| (&a.id, &a.source, &a.target)).collect();
        assert_eq!(mind, brain);
        for (a, x) in m.arrows.iter().zip(&g.axons) {
            assert_eq!(a.morphism.source, m.theory(&a.target).unwrap().name);
            assert_eq!(a.morphism.target, m.theory(&a.source).unwrap().name);
            // Oracle: conjugate by the canonical isos.
            let (s, t) =
                (comparison(&g.neuron(&x.source).unwrap().logic).unwrap(), comparison(&g.neuron(&x.target).unwrap().logic).unwrap());
            assert_eq!(a.morphism.hom, s.iso.compose(&x.hom).unwrap().compose(&t.iso_inv).unwrap());
            if x.is_identity() {
                assert!(a.morphism.hom.is_isomorphism());
                assert_eq!(a.morphism.hom, crate::lindenbaum::BoolHom::identity(&a.morphism.hom.source()));
            }
        }
    }
    let m = mind_of_brain(&fixture("single")).unwrap();
    assert_eq!(m.nodes[0].theory.letters().len(), 2);
}

#[test]
fn audits() {
    let r = audit_adjunction(&fixture("single"), 0).unwrap();
    assert_eq!(r.len(), 1);
    assert!(r[0].passed());
    let r = audit_adjunction(&fixture("pair"), 0).unwrap();
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|x| x.passed()));
    for name in WELL_FORMED {
        assert!(audit_adjunction(&fixture(name), 1).unwrap().iter().all(|x| x.passed()), "{name}");
    }
    let bad = audit_adjunction_with(&fixture("pair"), 0, &TwistedTransposition).unwrap();
    assert!(bad.iter().any(|x| !x.passed() && !x.naturality.failures.is_empty()));
}

#[test]
fn dot_export() {
    let d = export_dot(&fixture("single"));
    assert_eq!(d.matches("[label=").count(), 2);
    assert!(d.contains("\"a\" -> \"a\" [label=\"id_a\"]"));
    let m = export_mind_dot(&mind_of_brain(&fixture("pair")).unwrap());
    assert_eq!(m.matches(" -> ").count(), 1);
    assert!(m.contains("(4 letters)"));
    let empty = export_dot(&load_brain("brain e {}").unwrap());
    assert_eq!(empty, "digraph \"e\" {\n}\n");
    assert_eq!(export_dot(&fixture("chain")), export_dot(&fixture("chain")));
}

fn small_brain() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>)> {
    (1usize..=3, 1usize..=3, 1usize..=3)
        .prop_flat_map(|(a, b, c)| (Just(vec![a, b, c]), proptest::collection::vec(0..b, a), proptest::collection::vec(0..c, b)))
}

proptest! {
    #[test]
    fn composites_propagate_functorially((sizes, f, g) in small_brain()) {
        let text = format!(
            "brain r {{ neuron a atoms={}; neuron b atoms={}; neuron c atoms={};
               axon f a -> b hom={f:?}; axon g b -> c hom={g:?}; axon h a -> c composite=f,g; }}",
            sizes[0], sizes[1], sizes[2]
        );
        let br = load_brain(&text).unwrap();
        prop_assert!(check_brain(&br).unwrap().passed());
        for p in 0..sizes[0] {
            // One step along h against two steps along f then g, in a brain
            // where each path is the only route.
            let one = propagate(&only(&br, &["h"]), &[NeuronState::atom("a", p)], 1).unwrap();
            let two = propagate(&only(&br, &["f", "g"]), &[NeuronState::atom("a", p)], 2).unwrap();
            prop_assert_eq!(one.state(1, "c"), two.state(2, "c"));
        }
    }

    #[test]
    fn every_hom_loads(a in 0usize..=3, b in 0usize..=3, pick in any::<prop::sample::Index>()) {
        let (la, lb) = (FiniteBooleanAlgebra::new(a), FiniteBooleanAlgebra::new(b));
        let homs = enumerate_homs(&lb, &la, &Capacity::default()).unwrap();
        prop_assume!(!homs.is_empty());
        let h = pick.get(&homs);
        let text = format!("brain r {{ neuron a atoms={a}; neuron b atoms={b}; axon f a -> b hom={:?}; }}", h.atom_map());
        let g = load_brain(&text).unwrap();
        prop_assert_eq!(&g.axon("f").unwrap().hom, h);
        prop_assert!(check_brain(&g).unwrap().passed());
    }
}

/// `g` restricted to the identity axons plus `keep`, with composite
/// declarations dropped.
fn only(g: &BrainGraph, keep: &[&str]) -> BrainGraph {
    let axons = g
        .axons
        .iter()
        .filter(|a| a.is_identity() || keep.contains(&a.id.as_str()))
        .map(|a| Axon { composite: None, ..a.clone() })
        .collect();
    BrainGraph::new(g.name.clone(), g.neurons.clone(), axons).unwrap()
}
