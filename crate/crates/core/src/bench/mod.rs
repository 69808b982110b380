//! Benchmarks, random instance generators and reports.

pub mod random;
pub mod report;
pub mod scheduler;

pub use random::gen_random_formula;
pub use report::{compression_table, compression_text, definedness, CompressionRow, DefinednessReport, RunReport};
pub use scheduler::{gen_scheduler, gen_scheduler_with, scheduler_formula, SchedulerPartition};
