pub mod automaton;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod group;
pub mod io;
pub mod shift;
pub mod sofic;
pub mod stirling;

pub use error::{Error, Result};
