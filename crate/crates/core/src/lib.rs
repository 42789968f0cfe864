pub mod cli;
pub mod cover;
pub mod decomposition;
pub mod error;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{Graph, Mode, Path, PathSystem, Variant};
