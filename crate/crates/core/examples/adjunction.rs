//! The Lang/Syn adjunction on small algebras and theories.

use catlogic::adjunction::{check_adjunction, check_adjunction_with, comparison, theory_morphisms, transpose, TwistedTransposition};
use catlogic::dsl::parse_theories;
use catlogic::lindenbaum::FiniteBooleanAlgebra;

fn main() {
    let b = FiniteBooleanAlgebra::new(2);
    let cmp = comparison(&b).unwrap();
    println!("lang(B) for |B| = 4 has letters {:?} and {} axioms", cmp.lang.letters(), cmp.lang.axioms.len());

    let theories: Vec<_> = parse_theories(include_str!("../fixtures/props.theory")).unwrap().into_iter().map(|t| t.into_inner()).collect();
    let xor = &theories[0];
    for f in theory_morphisms(&cmp.lang, xor).unwrap() {
        println!("  {f}  transposes to  {}", transpose(&cmp, &f).unwrap());
    }

    for t in &theories {
        let r = check_adjunction(&b, t, 1).unwrap();
        println!(
            "{:>6}: {} = {} morphisms, round trip {}, naturality {} of {} triples checked, {}",
            t.name,
            r.theory_side,
            r.algebra_side,
            r.round_trip,
            r.naturality.checked,
            r.naturality.triples,
            if r.passed() { "pass" } else { "FAIL" }
        );
    }

    let bad = check_adjunction_with(&b, xor, 1, &TwistedTransposition).unwrap();
    println!("twisted transposition: passed = {}, {} naturality failures", bad.passed(), bad.naturality.failures.len());
}
