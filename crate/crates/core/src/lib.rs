pub mod divergence;
pub mod error;
pub mod experiments;
pub mod families;
pub mod model;
pub mod operator;
pub mod optim;
pub mod povm;
pub mod risk;
pub mod scenario;
pub mod state;

pub use error::{Error, Result};
