//! Free groups, Nielsen automorphisms and Stallings graphs, with tools for
//! checking relations among Nielsen moves on surface groups.

pub mod automorphisms;
pub mod certificates;
pub mod error;
pub mod oracle;
pub mod relations;
pub mod stallings;
pub mod surfaces;
pub mod words;

pub use error::{Error, Result};
