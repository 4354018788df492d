pub mod adjunction;
pub mod brain;
pub mod cli;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod lindenbaum;
pub mod realization;
pub mod stone;
pub mod syncat;
pub mod theory;

pub use error::{Error, Result};
