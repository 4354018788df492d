//! A toy brain: load it, audit it, run it, and look at its mind.

use catlogic::brain::{audit_adjunction, check_brain, export_dot, export_mind_dot, load_brain, mind_of_brain, propagate, NeuronState};

fn main() {
    let g = load_brain(include_str!("../fixtures/brains/chain.brain")).unwrap();
    let check = check_brain(&g).unwrap();
    println!("chain: {} neurons, {} axons, check passed: {}", check.neurons, check.axons, check.passed());
    let audits = audit_adjunction(&g, 0).unwrap();
    println!("{} adjunction audits, all pass: {}", audits.len(), audits.iter().all(|a| a.passed()));
    print!("{}", export_dot(&g));
    print!("{}", export_mind_dot(&mind_of_brain(&g).unwrap()));

    let swap = load_brain(include_str!("../fixtures/brains/swap.brain")).unwrap();
    let trace = propagate(&swap, &[NeuronState::atom("a", 0), NeuronState::atom("b", 0)], 4).unwrap();
    for s in &trace.steps {
        let states: Vec<String> = s.states.iter().map(|n| format!("{}={}", n.neuron, n.state)).collect();
        println!("step {}: {}", s.step, states.join(" "));
    }
    println!("period {:?}", trace.period());

    let broken = load_brain(include_str!("../fixtures/brains/broken_composite.brain")).unwrap();
    for cx in check_brain(&broken).unwrap().counterexamples() {
        println!(
            "{} disagrees with {} then {} at atom {} of {}: {} vs {}",
            cx.composite, cx.factors.0, cx.factors.1, cx.atom, cx.neuron, cx.via_composite, cx.via_factors
        );
    }
}
