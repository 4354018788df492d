//! Lindenbaum algebras of a few propositional theories, and entailment.

use catlogic::dsl::parse_theories;
use catlogic::lindenbaum::{entails, enumerate_homs, lindenbaum_algebra, Capacity};
use catlogic::theory::Formula;

fn main() {
    let theories: Vec<_> = parse_theories(include_str!("../fixtures/props.theory")).unwrap().into_iter().map(|t| t.into_inner()).collect();
    for t in &theories {
        let l = lindenbaum_algebra(t).unwrap();
        println!("{:>6}: {} atoms, {} elements", t.name, l.algebra.atom_count(), l.algebra.size());
        for a in l.assignments() {
            println!("          model {a:?}");
        }
    }

    let chain = theories.iter().find(|t| t.name == "CHAIN").unwrap();
    let goal = Formula::implies(Formula::letter("a"), Formula::letter("c"));
    println!("CHAIN entails a -> c: {}", entails(chain, &goal).unwrap());

    let xor = lindenbaum_algebra(&theories[0]).unwrap().algebra;
    let homs = enumerate_homs(&xor, &xor, &Capacity::default()).unwrap();
    println!("XOR -> XOR homomorphisms:");
    for h in homs {
        println!("  {h}");
    }
}
