//! Stone spaces of finite Boolean algebras and the double-dual isomorphism.

use catlogic::lindenbaum::{enumerate_homs, Capacity, FiniteBooleanAlgebra};
use catlogic::stone::{double_dual_iso, stone_dual_of_hom, stone_points, stone_space, unit_map};

fn main() {
    for n in 0..=3 {
        let b = FiniteBooleanAlgebra::new(n);
        let points: Vec<String> = stone_points(&b).iter().map(|p| p.to_string()).collect();
        let dd = double_dual_iso(&b);
        let unit = unit_map(&stone_space(&b));
        println!(
            "{} elements: points [{}], double dual verified: {}, unit bijective: {}",
            b.size(),
            points.join(", "),
            dd.verified(),
            unit.is_bijective()
        );
    }

    // Homs 4 -> 8 dualize to continuous maps 3 points -> 2 points.
    let (b, c) = (FiniteBooleanAlgebra::new(2), FiniteBooleanAlgebra::new(3));
    for h in enumerate_homs(&b, &c, &Capacity::default()).unwrap().into_iter().take(5) {
        let d = stone_dual_of_hom(&h);
        println!("{h}  dualizes to  {:?} (continuous: {})", d.map, d.is_continuous());
    }
}
