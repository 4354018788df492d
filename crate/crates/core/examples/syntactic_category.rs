//! Syntactic categories: the poset of a propositional theory and the
//! truncated category of contexts for groups.

use catlogic::dsl::parse_theories;
use catlogic::syncat::{check_category_laws, normalize, syn_eq, syn_prop, Category};
use catlogic::theory::{group_theory, Term};

fn main() {
    let xor = parse_theories(include_str!("../fixtures/props.theory")).unwrap().remove(0).into_inner();
    let p = syn_prop(&xor).unwrap();
    println!("Syn(XOR): {} objects, {} arrows", p.object_count(), p.morphism_count());

    let g = group_theory();
    let x = Term::var("x", &g.sorts[0]);
    let y = Term::var("y", &g.sorts[0]);
    let t = Term::app("mul", vec![Term::app("inv", vec![Term::app("mul", vec![x.clone(), y.clone()])]), x]);
    println!("{t}  normalizes to  {}", normalize(&g, &t).unwrap());

    let c = syn_eq(&g, 2).unwrap();
    for a in c.objects() {
        for b in c.objects() {
            println!("  |hom({a}, {b})| = {}", c.hom(&a, &b).unwrap().len());
        }
    }
    let laws = check_category_laws(&c, 300, 1).unwrap();
    println!(
        "laws at depth 2: {} ({} identity checks, {} associativity triples)",
        if laws.passed() { "hold" } else { "FAIL" },
        laws.identity_checks,
        laws.associativity_checks
    );
}
