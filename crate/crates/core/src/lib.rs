pub mod angle;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod numerics;
pub mod orthopoly;
pub mod projnorm;
pub mod weights;

pub use angle::Angle;
pub use error::{Error, Result};
