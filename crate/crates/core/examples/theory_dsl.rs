//! Parse a theory file, print it back, and show a diagnostic.

use catlogic::dsl::{parse_theories, print_theory};

fn main() {
    let text = include_str!("../fixtures/props.theory");
    for t in parse_theories(text).expect("fixture parses") {
        print!("{}", print_theory(&t));
    }

    let broken = include_str!("../fixtures/broken_arity.theory");
    match parse_theories(broken) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("\nbroken_arity.theory: {e}"),
    }
}
