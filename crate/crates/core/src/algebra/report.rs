use std::fmt;

use serde::Serialize;

use super::Element;

/// Outcome of one axiom, with a witness tuple when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Element>>,
}

/// Every axiom outcome of a check, in a fixed order. Checks never stop at
/// the first failure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record(&mut self, axiom: &'static str, witness: Option<Vec<Element>>) {
        self.checks.push(AxiomCheck {
            axiom,
            passed: witness.is_none(),
            witness,
        });
    }

    /// Appends another report, prefixing nothing; names must already be distinct.
    pub(crate) fn extend(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    /// `true` when the named axiom was checked and passed.
    pub fn passed(&self, axiom: &str) -> bool {
        self.get(axiom).is_some_and(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<40} {}", c.axiom, if c.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                write!(f, "  witness {w:?}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
