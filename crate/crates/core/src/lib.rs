pub mod arith;
pub mod asymptotics;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod kernel;
pub mod lawcheck;
pub mod model;
pub mod presets;
pub mod verify;

pub use error::{Error, Result};
