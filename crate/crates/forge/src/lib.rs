//! Batch runner for `unital-core`: a rayon executor, the on-disk table
//! cache, versioned JSON and text reports, and the `unital-forge` command
//! line.

pub mod cache;
pub mod cli;
pub mod exec;
pub mod experiments;
pub mod report;
pub mod unitals;

pub use cache::TableCache;
pub use exec::Pool;
pub use experiments::{Ctx, ForgeError, Params};
pub use report::{Check, Report, Status};
