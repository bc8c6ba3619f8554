//! Lay planning for fabric spreading and cutting.
//!
//! Given template lengths per garment figure and a demand matrix of SKUs
//! (figure x fabric type), build a cutting plan that produces every SKU
//! exactly while using as few lays as possible. A lay stacks layers of
//! several fabric types on the cutting bed and cuts one pattern of
//! templates through all of them.
//!
//! - [`model`]: instances, lays, plans, validation and volume metrics
//! - [`knapsack`]: exact bounded knapsack used to fill one pattern
//! - [`construction`]: greedy lay-by-lay constructor
//! - [`solver`]: construct-then-improve loop with a time budget
//! - [`generator`]: reproducible benchmark instances
//! - [`bench`]: batch runs and CSV reports

pub mod bench;
pub mod construction;
pub mod error;
pub mod generator;
pub mod io;
pub mod knapsack;
pub mod model;
pub mod render;
pub mod solver;

pub use error::{Error, Result};
pub use model::{CuttingPlan, Instance, Lay, ValidationReport, Violation, ViolationKind};
pub use solver::{solve, SolveConfig, SolveResult};
