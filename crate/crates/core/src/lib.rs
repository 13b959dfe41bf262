pub mod choice;
pub mod desirability;
pub mod error;
pub mod gen;
pub mod lp;
pub mod options;
pub mod previsions;
pub mod rational;
pub mod suites;

pub use error::{Error, Result};
pub use options::{ConeGenerators, Gamble, OptionSet, StateSpace};
pub use rational::Rational;
