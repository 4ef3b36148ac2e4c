pub mod asymptotics;
pub mod collapse;
pub mod combinatorics;
pub mod complex;
pub mod error;
pub mod ext_real;
pub mod harness;
pub mod homology;
pub mod laws;
pub mod lm;
pub mod measure;
pub mod sampler;
pub mod simplex;
pub mod textfmt;

pub use error::{Error, Result};
