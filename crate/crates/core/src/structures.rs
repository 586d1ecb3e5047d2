//! v-structures, t-structures and the twisted-product constructions.
//!
//! A [`VtStructure`] is the quadruple `(X, R, V, T)` used to color twisted
//! diagrams. It always carries a [`Certificate`] with the full axiom reports,
//! so consumers can insist on a verified structure. Unverified quadruples
//! (for example the non-involutory construction in [`remark_structure`]) can
//! still be built for negative testing.

use serde::Serialize;

use crate::algebra::{
    check_biquandle, AlgebraError, AxiomReport, Biquandle, Element, ElementMap, FiniteQuandle,
    PairEncoding, PairMap, BIJECTIVE, SHIFT, SIDEWAYS, YANG_BAXTER,
};

pub const V_BIJECTIVE: &str = "V bijective";
pub const V_YANG_BAXTER: &str = "V B1 (Yang-Baxter)";
pub const V_SIDEWAYS: &str = "V B2' (sideways)";
pub const V_SHIFT: &str = "V B3' (shift)";
pub const V_INVOLUTION: &str = "V^2 = 1";
pub const V_MIXED: &str = "(Vx1)(1xV)(Rx1) = (1xR)(Vx1)(1xV)";
pub const T_INVOLUTION: &str = "T^2 = 1";
pub const T_VIRTUAL: &str = "V(Tx1) = (1xT)V";
pub const T_VIRTUAL_DUAL: &str = "V(1xT) = (Tx1)V";
pub const T_TWIST: &str = "(TxT)R(TxT) = VRV";

#[derive(Debug, thiserror::Error)]
pub enum StructureError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("table sizes disagree: {0}")]
    SizeMismatch(String),
    #[error("not an automorphism of the base biquandle: {0:?}")]
    InvalidAutomorphism(Vec<Element>),
    #[error("R must be a bijection to color negative crossings")]
    NonBijectiveR,
    #[error("v-structure axioms failed:\n{0}")]
    VAxiomsFailed(AxiomReport),
    #[error("t-structure axioms failed:\n{0}")]
    TAxiomsFailed(AxiomReport),
    /// The twisted product needs `f² = 1` and `fg = gf` to carry a t-structure;
    /// the v-structured part is still returned.
    #[error("twisted product precondition failed: {reason}")]
    TwistedPrecondition {
        reason: String,
        v_structured: Box<VStructured>,
    },
}

/// Reports the three v-structure conditions for `V` over `(X, R)`.
pub fn check_v_structure(r: &PairMap, v: &PairMap) -> Result<AxiomReport, StructureError> {
    if r.n() != v.n() {
        return Err(StructureError::SizeMismatch(format!(
            "R is on a carrier of size {}, V on {}",
            r.n(),
            v.n()
        )));
    }
    let mut report = AxiomReport::new();
    for check in check_biquandle(v).checks {
        let name = match check.axiom {
            BIJECTIVE => V_BIJECTIVE,
            YANG_BAXTER => V_YANG_BAXTER,
            SIDEWAYS => V_SIDEWAYS,
            SHIFT => V_SHIFT,
            other => other,
        };
        report.record(name, check.witness);
    }
    let involution = v
        .iter()
        .find(|&((x, y), (a, b))| v.apply(a, b) != (x, y))
        .map(|((x, y), _)| vec![x, y]);
    report.record(V_INVOLUTION, involution);
    let mixed = crate::algebra::triples(v.n())
        .find(|&t| v.left(v.right(r.left(t))) != r.right(v.left(v.right(t))))
        .map(|(x, y, z)| vec![x, y, z]);
    report.record(V_MIXED, mixed);
    Ok(report)
}

/// Reports the t-structure conditions for `T` over `(X, R, V)`, including the
/// dual form `V(1×T) = (T×1)V`.
pub fn check_t_structure(
    r: &PairMap,
    v: &PairMap,
    t: &ElementMap,
) -> Result<AxiomReport, StructureError> {
    if t.len() != r.n() || v.n() != r.n() {
        return Err(StructureError::SizeMismatch(format!(
            "R on {}, V on {}, T on {}",
            r.n(),
            v.n(),
            t.len()
        )));
    }
    let n = r.n();
    let id = ElementMap::identity(n);
    let mut report = AxiomReport::new();
    report.record(
        T_INVOLUTION,
        (0..n).find(|&x| t.apply(t.apply(x)) != x).map(|x| vec![x]),
    );
    let lhs = v.sandwich((&id, &id), (t, &id));
    let rhs = v.sandwich((&id, t), (&id, &id));
    report.record(T_VIRTUAL, lhs.first_mismatch(&rhs).map(|(x, y)| vec![x, y]));
    let lhs = v.sandwich((&id, &id), (&id, t));
    let rhs = v.sandwich((t, &id), (&id, &id));
    report.record(T_VIRTUAL_DUAL, lhs.first_mismatch(&rhs).map(|(x, y)| vec![x, y]));
    let twisted = r.sandwich((t, t), (t, t));
    let conjugated = v.compose(&r.compose(v));
    report.record(T_TWIST, twisted.first_mismatch(&conjugated).map(|(x, y)| vec![x, y]));
    Ok(report)
}

/// A biquandle together with a verified v-structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VStructured {
    base: Biquandle,
    v: PairMap,
}

impl VStructured {
    pub fn new(base: Biquandle, v: PairMap) -> Result<Self, StructureError> {
        let report = check_v_structure(base.r(), &v)?;
        if !report.all_passed() {
            return Err(StructureError::VAxiomsFailed(report));
        }
        Ok(Self { base, v })
    }

    /// `V = τ`, a v-structure of every biquandle.
    pub fn with_transposition(base: Biquandle) -> Self {
        let v = PairMap::transposition(base.n());
        Self::new(base, v).expect("τ is a v-structure")
    }

    /// The virtual biquandle `V(x1, x2) = (f⁻¹x2, f x1)` for an automorphism `f`.
    pub fn virtual_v(base: Biquandle, f: &ElementMap) -> Result<Self, StructureError> {
        if !base.is_automorphism(f) {
            return Err(StructureError::InvalidAutomorphism(f.as_slice().to_vec()));
        }
        let f_inv = f.inverse().expect("automorphisms are bijective");
        let v = PairMap::from_fn(base.n(), |x1, x2| (f_inv.apply(x2), f.apply(x1)));
        Self::new(base, v)
    }

    pub fn base(&self) -> &Biquandle {
        &self.base
    }

    pub fn v(&self) -> &PairMap {
        &self.v
    }
}

/// Axiom reports backing a [`VtStructure`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub biquandle: AxiomReport,
    pub v_structure: AxiomReport,
    pub t_structure: AxiomReport,
}

impl Certificate {
    pub fn is_verified(&self) -> bool {
        self.biquandle.all_passed() && self.v_structure.all_passed() && self.t_structure.all_passed()
    }

    pub fn failures(&self) -> impl Iterator<Item = &crate::algebra::AxiomCheck> {
        self.biquandle
            .failures()
            .chain(self.v_structure.failures())
            .chain(self.t_structure.failures())
    }
}

/// The quadruple `(X, R, V, T)` with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VtStructure {
    r: PairMap,
    r_inv: PairMap,
    v: PairMap,
    t: ElementMap,
    certificate: Certificate,
}

impl VtStructure {
    /// Adds a t-structure to a v-structured biquandle, refusing if any
    /// t-structure axiom fails.
    pub fn new(vs: VStructured, t: ElementMap) -> Result<Self, StructureError> {
        let s = Self::from_tables(vs.base.r().clone(), vs.v, t)?;
        if !s.certificate.t_structure.all_passed() {
            return Err(StructureError::TAxiomsFailed(s.certificate.t_structure));
        }
        Ok(s)
    }

    /// Builds the quadruple without requiring the axioms; the certificate
    /// records what holds. Only bijectivity of `R` is required.
    pub fn from_tables(r: PairMap, v: PairMap, t: ElementMap) -> Result<Self, StructureError> {
        let r_inv = r.inverse().ok_or(StructureError::NonBijectiveR)?;
        let v_structure = check_v_structure(&r, &v)?;
        let t_structure = check_t_structure(&r, &v, &t)?;
        let certificate = Certificate {
            biquandle: check_biquandle(&r),
            v_structure,
            t_structure,
        };
        Ok(Self { r, r_inv, v, t, certificate })
    }

    pub fn n(&self) -> usize {
        self.r.n()
    }

    pub fn r(&self) -> &PairMap {
        &self.r
    }

    pub fn r_inv(&self) -> &PairMap {
        &self.r_inv
    }

    pub fn v(&self) -> &PairMap {
        &self.v
    }

    pub fn t(&self) -> &ElementMap {
        &self.t
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn is_verified(&self) -> bool {
        self.certificate.is_verified()
    }
}

/// The twisted product biquandle on `X0 × X0`:
/// `R((a1,b1),(a2,b2)) = ((p1 R0(a1,a2), p2 R0(b2,b1)), (p2 R0(a1,a2), p1 R0(b2,b1)))`.
pub fn twisted_product_biquandle(x0: &Biquandle) -> Biquandle {
    let enc = PairEncoding::new(x0.n(), x0.n());
    let r0 = x0.r();
    let r = PairMap::from_fn(enc.size(), |x, y| {
        let ((a1, b1), (a2, b2)) = (enc.decode(x), enc.decode(y));
        let (a2_sub, a1_sup) = r0.apply(a1, a2);
        let (b1_sub, b2_sup) = r0.apply(b2, b1);
        (enc.encode(a2_sub, b2_sup), enc.encode(a1_sup, b1_sub))
    });
    Biquandle::new(r).expect("the twisted product biquandle is a biquandle")
}

/// The twisted product `(X, R, V_f, T_g)` of `X0` for automorphisms `f`, `g`
/// with `f² = 1` and `fg = gf`.
pub fn twisted_product(
    x0: &Biquandle,
    f: &ElementMap,
    g: &ElementMap,
) -> Result<VtStructure, StructureError> {
    for h in [f, g] {
        if !x0.is_automorphism(h) {
            return Err(StructureError::InvalidAutomorphism(h.as_slice().to_vec()));
        }
    }
    let base = twisted_product_biquandle(x0);
    let vs = VStructured::virtual_v(base, &f.product(f))?;
    let reason = if !f.is_involution() {
        Some("f^2 != 1")
    } else if f.compose(g) != g.compose(f) {
        Some("fg != gf")
    } else {
        None
    };
    if let Some(reason) = reason {
        return Err(StructureError::TwistedPrecondition {
            reason: reason.to_owned(),
            v_structured: Box::new(vs),
        });
    }
    let t = twist_map(g);
    VtStructure::new(vs, t)
}

/// `T_g(a, b) = (g⁻¹ b, g a)` on the pair carrier.
pub fn twist_map(g: &ElementMap) -> ElementMap {
    let g_inv = g.inverse().expect("automorphisms are bijective");
    let enc = PairEncoding::new(g.len(), g.len());
    ElementMap::from_fn(enc.size(), |x| {
        let (a, b) = enc.decode(x);
        enc.encode(g_inv.apply(b), g.apply(a))
    })
}

/// The standard twisted product `B(Q, ∗)`:
/// `R((a1,b1),(a2,b2)) = ((a2, b2∗b1), (a1∗a2, b1))`, `V = τ`, `T(a, b) = (b, a)`.
pub fn standard_twisted_product(q: &FiniteQuandle) -> VtStructure {
    let enc = PairEncoding::new(q.n(), q.n());
    let r = PairMap::from_fn(enc.size(), |x, y| {
        let ((a1, b1), (a2, b2)) = (enc.decode(x), enc.decode(y));
        (enc.encode(a2, q.op(b2, b1)), enc.encode(q.op(a1, a2), b1))
    });
    let base = Biquandle::new(r).expect("B(Q) is a biquandle");
    let vs = VStructured::with_transposition(base);
    VtStructure::new(vs, swap_map(q.n())).expect("B(Q) carries a vt-structure")
}

/// `(a, b) ↦ (b, a)` on the pair carrier of size `n²`.
pub fn swap_map(n: usize) -> ElementMap {
    let enc = PairEncoding::new(n, n);
    ElementMap::from_fn(enc.size(), |x| {
        let (a, b) = enc.decode(x);
        enc.encode(b, a)
    })
}

/// The quadruple built from `∗` on first coordinates and `∗̄` on second
/// coordinates: `R((a1,b1),(a2,b2)) = ((a2, b2 ∗̄ b1), (a1∗a2, b1))`,
/// `V = τ`, `T = swap`. It is a vt-structure only for involutory quandles.
pub fn remark_structure(q: &FiniteQuandle) -> VtStructure {
    VtStructure::from_tables(remark_r(q), PairMap::transposition(q.n() * q.n()), swap_map(q.n()))
        .expect("remark R is bijective")
}

fn remark_r(q: &FiniteQuandle) -> PairMap {
    let enc = PairEncoding::new(q.n(), q.n());
    PairMap::from_fn(enc.size(), |x, y| {
        let ((a1, b1), (a2, b2)) = (enc.decode(x), enc.decode(y));
        (enc.encode(a2, q.dual_op(b2, b1)), enc.encode(q.op(a1, a2), b1))
    })
}

/// Comparison of `(T×T)R(T×T)` against `VRV` for [`remark_structure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkOutcome {
    pub lhs: PairMap,
    pub rhs: PairMap,
    pub equal: bool,
    pub witness: Option<(Element, Element)>,
}

pub fn remark_counterexample(q: &FiniteQuandle) -> RemarkOutcome {
    let r = remark_r(q);
    let t = swap_map(q.n());
    let v = PairMap::transposition(r.n());
    let lhs = r.sandwich((&t, &t), (&t, &t));
    let rhs = v.compose(&r.compose(&v));
    let witness = lhs.first_mismatch(&rhs);
    RemarkOutcome {
        equal: witness.is_none(),
        witness,
        lhs,
        rhs,
    }
}
