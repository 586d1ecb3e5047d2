//! Finite quandles and biquandles given by explicit tables.
//!
//! Carriers are always `{0..n-1}`. Pair carriers (direct and twisted
//! products) encode `(a, b)` as `a·n2 + b`.

mod biquandle;
mod quandle;
mod report;
mod tables;

pub use biquandle::{
    check_biquandle, is_birack, is_homomorphism, shift, sideways, Biquandle, BIJECTIVE,
    DEFAULT_AUTOMORPHISM_CAP, SHIFT, SIDEWAYS, YANG_BAXTER,
};
pub use quandle::{check_quandle, FiniteQuandle, Letter, DISTRIBUTIVE, IDEMPOTENT, RIGHT_INVERTIBLE};
pub use report::{AxiomCheck, AxiomReport};
pub(crate) use tables::triples;
pub use tables::{Element, ElementMap, PairEncoding, PairMap};

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("invalid carrier size {0}")]
    InvalidSize(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("axiom {axiom} violated at {witness:?}")]
    Violation {
        axiom: &'static str,
        witness: Vec<Element>,
    },
    #[error("axioms failed:\n{0}")]
    AxiomsFailed(AxiomReport),
    #[error("exhaustive search over a carrier of size {size} exceeds the cap {cap}")]
    SearchLimit { size: usize, cap: usize },
}
