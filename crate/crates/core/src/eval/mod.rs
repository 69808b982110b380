//! Two- and three-valued evaluation of formulas.

pub(crate) mod compile;
mod fixpoint;
mod three;
mod two;

pub use fixpoint::{next_value, release_value, until_value, InducedGraphs, Val, Valuation};
pub use three::{check3, check3_counted, eval3, eval3_valuation};
pub use two::{check2, eval2, play, Lasso};
