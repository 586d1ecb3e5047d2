//! Colorings of virtual and twisted link diagrams by finite biquandles
//! carrying v- and t-structures.
//!
//! * [`algebra`]: quandles and biquandles as tables, with axiom reports.
//! * [`structures`]: v-/t-structures and twisted products.
//! * [`diagram`]: abstract twisted diagrams, their text format and edits.
//! * [`coloring`]: exact coloring counts and the non-orientable m-foil results.
//! * [`moves`]: boundary-profile check of every extended Reidemeister move.
//! * [`files`]: JSON structure files.

pub mod algebra;
pub mod coloring;
pub mod diagram;
pub mod files;
pub mod laurent;
pub mod moves;
pub mod structures;

mod solver;

/// Resource caps shared by the search routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Limits {
    /// Maximum number of search nodes the coloring solver may visit.
    pub node_budget: u64,
    /// Maximum number of assignments the brute-force oracle may scan.
    pub brute_force_cap: u64,
    /// Largest carrier for the exhaustive automorphism search.
    pub automorphism_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            node_budget: 50_000_000,
            brute_force_cap: 10_000_000,
            automorphism_cap: algebra::DEFAULT_AUTOMORPHISM_CAP,
        }
    }
}
