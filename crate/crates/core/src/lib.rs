pub mod cli;
pub mod conditions;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod game;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod monitoring;
pub mod rng;

pub use error::{Error, Result};
pub use game::{Accuracy, ActionProfile, GainFamily, GameSpec, PayoffPolytope};
