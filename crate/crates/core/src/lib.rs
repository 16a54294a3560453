//! Exact computations with finitely presented ordered blueprints.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod ground;
pub mod lattice;
pub mod functors;
pub mod presentation;
pub mod spectra;
pub mod trop;
pub mod valuation;

pub use error::{Error, Result};
pub use ground::{GroundTag, GroundValue, OrderMode};
pub use presentation::{DerivationBudget, FormalSum, Monomial, Presentation, RelMode, Relation, Verdict, Witness};
