//! Concrete and three-valued game models, strategies and JSON I/O.

mod builder;
mod concrete;
mod json;
mod strategy;
pub mod table;
mod three;

pub use builder::{ModelBuilder, Pattern, Rule};
pub use concrete::ConcreteCgs;
pub use json::{load_concrete, load_document, load_three, save_concrete, save_three, Model, ModelDocument, SCHEMA};
pub use strategy::{Assignment, MemorylessStrategy};
pub use table::{ActionId, ProfileRow};
pub use three::{embed, Succ, ThreeCgs, TransitionMode};
