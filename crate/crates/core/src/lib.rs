//! Exact nilpotent quotients of finitely presented groups, optionally
//! subject to identical relations such as Engel laws.

pub mod analysis;
pub mod document;
pub mod error;
pub mod nq;
pub mod oracle;
pub mod parse;
pub mod pcpres;
pub mod words;
pub mod zlinalg;

pub use error::{AnalysisError, DocError, LinalgError, NqError, PcError, WordError};
