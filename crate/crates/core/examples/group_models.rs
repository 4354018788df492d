//! Finite groups as realizations, their homomorphisms, and the matching
//! natural transformations between the induced functors.

use catlogic::realization::{enumerate_homs, enumerate_models, homs_equal_nat_trans};
use catlogic::theory::group_theory;

fn main() {
    let g = group_theory();
    for n in 1..=5 {
        println!("groups on {n} labeled elements: {}", enumerate_models(&g, n).unwrap().len());
    }

    let z2 = enumerate_models(&g, 2).unwrap().remove(0);
    let fours = enumerate_models(&g, 4).unwrap();
    let squares_to_unit = |m: &&catlogic::realization::FiniteModel| {
        let (mul, u) = (m.op("mul").unwrap(), m.op("u").unwrap());
        (0..4).all(|x| m.apply(mul, &[x, x]) == m.apply(u, &[]))
    };
    let v4 = fours.iter().find(squares_to_unit).unwrap();
    println!("Z2: {z2}\nV4: {v4}");
    for h in enumerate_homs(v4, &z2).unwrap() {
        println!("  V4 -> Z2 {:?}", h.components[0]);
    }
    let r = homs_equal_nat_trans(&g, v4, &z2, 2).unwrap();
    println!("{} homomorphisms, {} natural families, bijection: {}", r.homomorphisms, r.natural_families, r.bijection);
}
