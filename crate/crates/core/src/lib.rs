//! Explicit-state model checking of Strategy Logic over concurrent game
//! structures, with three-valued semantics and quotient abstraction.

pub mod abstraction;
pub mod bench;
pub mod bits;
pub mod config;
pub mod error;
pub mod eval;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod syntax;
pub mod truth;

pub use config::{Config, ReleaseMode};
pub use error::{Error, Result};
pub use syntax::{dualize, free, is_sentence, negate, parse, Formula, FreeSet};
pub use truth::{tv_and, tv_or, TruthValue};
