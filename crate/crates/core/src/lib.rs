//! Finite, fully checkable models of the ultrafilter calculus.
//!
//! Everything here operates on explicit finite carriers so that every claimed
//! identity can be verified by exhaustion: ultrafilters as subset families,
//! integration of finitely-valued functions, limit carriers over categories of
//! elements, rig-valued linear integrals, double duals over prime fields, and
//! ultraproducts of finite families.  The [`report`] module carries the shared
//! machine-readable result schema used by the CLI and the verification suite.

pub mod codensity;
pub mod error;
pub mod famset;
pub mod fincat;
pub mod finset;
pub mod integration;
pub mod report;
pub mod rig;
pub mod ultrafilter;
pub mod vect;

pub use error::{Error, Result};

/// Resource budgets for enumeration and search.
///
/// Every potentially explosive operation takes an explicit budget instead of
/// guessing; exceeding one is a sizing error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of items a single enumeration may yield.
    pub enumeration: u64,
    /// Maximum number of search nodes the limit solver may expand.
    pub solver_nodes: u64,
    /// Maximum number of composable arrow pairs for which a generated
    /// category will materialize its composition table.
    pub composition_pairs: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 10_000_000,
            solver_nodes: 10_000_000,
            composition_pairs: 2_000_000,
        }
    }
}

impl Caps {
    /// Budget with every limit raised, for tests that deliberately push size.
    pub fn generous() -> Self {
        Caps {
            enumeration: 100_000_000,
            solver_nodes: 100_000_000,
            composition_pairs: 20_000_000,
        }
    }
}
