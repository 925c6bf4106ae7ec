#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beliefs;
pub mod ces;
pub mod delays;
pub mod digital_workers;
pub mod error;
pub mod fixtures;
pub mod growth;
pub mod integrate;
pub mod likelihood;
pub mod scenario;
pub mod semi_endog;
pub mod stats;
pub mod trajectory;

pub use error::{Error, Result};
pub use trajectory::Trajectory;
