//! Seeded random inputs for property campaigns.

use crate::lindenbaum::FiniteBooleanAlgebra;
use crate::theory::{Formula, Theory};
use rand::Rng;

pub fn random_formula(rng: &mut impl Rng, letters: &[String], depth: u32) -> Formula {
    if depth == 0 || letters.is_empty() || rng.gen_bool(0.3) {
        return match letters.len() {
            0 => {
                if rng.gen_bool(0.5) {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            n => Formula::letter(letters[rng.gen_range(0..n)].clone()),
        };
    }
    let op = rng.gen_range(0..4);
    let a = random_formula(rng, letters, depth - 1);
    if op == 0 {
        return Formula::not(a);
    }
    let b = random_formula(rng, letters, depth - 1);
    match op {
        1 => Formula::and(a, b),
        2 => Formula::or(a, b),
        _ => Formula::implies(a, b),
    }
}

/// A propositional theory on at most `max_letters` letters with up to
/// three random axioms of depth at most 3.
pub fn random_prop_theory(rng: &mut impl Rng, name: &str, max_letters: usize) -> Theory {
    let n = rng.gen_range(0..=max_letters);
    let letters: Vec<String> = (0..n).map(|i| ["p", "q", "r", "s", "t"].get(i).map_or(format!("p{i}"), |s| s.to_string())).collect();
    let axioms = (0..rng.gen_range(0..=3)).map(|_| random_formula(rng, &letters, 3)).collect();
    Theory::propositional(name, letters, axioms)
}

pub fn random_algebra(rng: &mut impl Rng, max_atoms: usize) -> FiniteBooleanAlgebra {
    FiniteBooleanAlgebra::new(rng.gen_range(0..=max_atoms))
}
