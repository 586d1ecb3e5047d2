//! JSON structure files.
//!
//! ```json
//! {"kind":"quandle","n":3,"op":[[0,2,1],[2,1,0],[1,0,2]]}
//! {"kind":"biquandle","n":2,"R":[[[0,0],[1,0]],[[0,1],[1,1]]]}
//! {"kind":"vt","n":2,"R":[...],"V":[...],"T":[0,1]}
//! ```
//!
//! `R[x][y] = [x3, x4]` means `R(x, y) = (x3, x4)`; `op[a][b] = a ∗ b`.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    check_biquandle, check_quandle, AlgebraError, AxiomReport, Biquandle, Element, ElementMap, FiniteQuandle,
    PairMap,
};
use crate::structures::{check_t_structure, check_v_structure, StructureError, VtStructure};

type PairRows = Vec<Vec<[Element; 2]>>;

/// On-disk form. Keys serialize in the declared order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StructureFile {
    Quandle {
        n: usize,
        op: Vec<Vec<Element>>,
    },
    Biquandle {
        n: usize,
        #[serde(rename = "R")]
        r: PairRows,
    },
    Vt {
        n: usize,
        #[serde(rename = "R")]
        r: PairRows,
        #[serde(rename = "V")]
        v: PairRows,
        #[serde(rename = "T")]
        t: Vec<Element>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("declared n = {declared} but the tables have size {actual}")]
    SizeMismatch { declared: usize, actual: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("expected a {expected} file, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
}

/// A loaded structure.
#[derive(Clone, Debug)]
pub enum Structure {
    Quandle(FiniteQuandle),
    Biquandle(Biquandle),
    Vt(VtStructure),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Quandle(_) => "quandle",
            Structure::Biquandle(_) => "biquandle",
            Structure::Vt(_) => "vt",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Structure::Quandle(q) => q.n(),
            Structure::Biquandle(b) => b.n(),
            Structure::Vt(s) => s.n(),
        }
    }

    pub fn into_quandle(self) -> Result<FiniteQuandle, FileError> {
        match self {
            Structure::Quandle(q) => Ok(q),
            other => Err(FileError::WrongKind { expected: "quandle", found: other.kind() }),
        }
    }

    pub fn into_vt(self) -> Result<VtStructure, FileError> {
        match self {
            Structure::Vt(s) => Ok(s),
            other => Err(FileError::WrongKind { expected: "vt", found: other.kind() }),
        }
    }

    pub fn to_file(&self) -> StructureFile {
        match self {
            Structure::Quandle(q) => StructureFile::quandle(q),
            Structure::Biquandle(b) => StructureFile::biquandle(b),
            Structure::Vt(s) => StructureFile::vt(s),
        }
    }
}

impl StructureFile {
    pub fn quandle(q: &FiniteQuandle) -> Self {
        StructureFile::Quandle { n: q.n(), op: q.rows() }
    }

    pub fn biquandle(b: &Biquandle) -> Self {
        StructureFile::Biquandle { n: b.n(), r: b.r().to_rows() }
    }

    pub fn vt(s: &VtStructure) -> Self {
        StructureFile::Vt {
            n: s.n(),
            r: s.r().to_rows(),
            v: s.v().to_rows(),
            t: s.t().as_slice().to_vec(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure files serialize")
    }

    fn check_size(&self) -> Result<(), FileError> {
        let (declared, actual) = match self {
            StructureFile::Quandle { n, op } => (*n, op.len()),
            StructureFile::Biquandle { n, r } => (*n, r.len()),
            StructureFile::Vt { n, r, v, t } => {
                for len in [v.len(), t.len()] {
                    if len != r.len() {
                        return Err(FileError::SizeMismatch { declared: *n, actual: len });
                    }
                }
                (*n, r.len())
            }
        };
        if declared != actual {
            return Err(FileError::SizeMismatch { declared, actual });
        }
        Ok(())
    }

    /// Runs every axiom that applies to the file's kind. Malformed tables
    /// (wrong shape, out-of-range entries) are errors, failed axioms are not.
    pub fn check(&self) -> Result<Vec<(&'static str, AxiomReport)>, FileError> {
        self.check_size()?;
        Ok(match self {
            StructureFile::Quandle { op, .. } => vec![("quandle", check_quandle(op)?)],
            StructureFile::Biquandle { n, r } => {
                vec![("biquandle", check_biquandle(&PairMap::from_rows(*n, r)?))]
            }
            StructureFile::Vt { n, r, v, t } => {
                let r = PairMap::from_rows(*n, r)?;
                let v = PairMap::from_rows(*n, v)?;
                let t = ElementMap::new(*n, t.clone())?;
                vec![
                    ("biquandle", check_biquandle(&r)),
                    ("v-structure", check_v_structure(&r, &v)?),
                    ("t-structure", check_t_structure(&r, &v, &t)?),
                ]
            }
        })
    }

    /// Builds the structure. With `verify`, failed axioms are errors; without
    /// it, a quadruple is accepted as long as `R` is a bijection.
    pub fn load(&self, verify: bool) -> Result<Structure, FileError> {
        self.check_size()?;
        Ok(match self {
            StructureFile::Quandle { op, .. } => Structure::Quandle(FiniteQuandle::from_rows(op)?),
            StructureFile::Biquandle { n, r } => Structure::Biquandle(Biquandle::new(PairMap::from_rows(*n, r)?)?),
            StructureFile::Vt { n, r, v, t } => {
                let s = VtStructure::from_tables(
                    PairMap::from_rows(*n, r)?,
                    PairMap::from_rows(*n, v)?,
                    ElementMap::new(*n, t.clone())?,
                )?;
                if verify && !s.is_verified() {
                    let c = s.certificate();
                    let mut report = c.biquandle.clone();
                    report.extend(c.v_structure.clone());
                    report.extend(c.t_structure.clone());
                    return Err(AlgebraError::AxiomsFailed(report).into());
                }
                Structure::Vt(s)
            }
        })
    }
}

pub fn load_structure(text: &str, verify: bool) -> Result<Structure, FileError> {
    StructureFile::parse(text)?.load(verify)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{remark_structure, standard_twisted_product};

    #[test]
    fn quandle_round_trip() {
        let q = FiniteQuandle::dihedral(3).unwrap();
        let text = StructureFile::quandle(&q).to_json();
        assert_eq!(text, r#"{"kind":"quandle","n":3,"op":[[0,2,1],[2,1,0],[1,0,2]]}"#);
        let back = load_structure(&text, true).unwrap().into_quandle().unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn vt_round_trip_and_verification() {
        let s = standard_twisted_product(&FiniteQuandle::dihedral(2).unwrap());
        let text = StructureFile::vt(&s).to_json();
        assert!(text.starts_with(r#"{"kind":"vt","n":4,"R":"#));
        let back = load_structure(&text, true).unwrap().into_vt().unwrap();
        assert_eq!(back.r(), s.r());

        let bad = remark_structure(&FiniteQuandle::alexander(5, 3).unwrap());
        let text = StructureFile::vt(&bad).to_json();
        assert!(load_structure(&text, true).is_err());
        assert!(load_structure(&text, false).is_ok());
        let reports = StructureFile::parse(&text).unwrap().check().unwrap();
        assert!(reports[0].1.all_passed() && reports[1].1.all_passed());
        assert!(!reports[2].1.all_passed());
    }

    #[test]
    fn corrupt_files() {
        let bad_axiom = r#"{"kind":"quandle","n":2,"op":[[1,1],[0,1]]}"#;
        let reports = StructureFile::parse(bad_axiom).unwrap().check().unwrap();
        assert!(!reports[0].1.all_passed());
        assert!(load_structure(bad_axiom, true).is_err());
        let wrong_n = r#"{"kind":"quandle","n":3,"op":[[0,0],[1,1]]}"#;
        assert!(matches!(load_structure(wrong_n, true), Err(FileError::SizeMismatch { .. })));
        assert!(matches!(StructureFile::parse("{\"kind\":\"ring\"}"), Err(FileError::Json(_))));
    }
}
