use itertools::Itertools;

use super::quandle::FiniteQuandle;
use super::report::AxiomReport;
use super::tables::{triples, Element, ElementMap, PairEncoding, PairMap};
use super::AlgebraError;

pub const BIJECTIVE: &str = "bijective";
pub const YANG_BAXTER: &str = "B1 (Yang-Baxter)";
pub const SIDEWAYS: &str = "B2' (sideways)";
pub const SHIFT: &str = "B3' (shift)";

/// Default upper bound on the carrier size for the automorphism search.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 8;

/// Runs every biquandle axiom on `R` and reports each outcome.
///
/// Birack status is `bijective ∧ B1 ∧ B2'`; a biquandle additionally needs B3'.
pub fn check_biquandle(r: &PairMap) -> AxiomReport {
    let mut report = AxiomReport::new();
    report.record(BIJECTIVE, bijectivity_witness(r));
    report.record(YANG_BAXTER, yang_baxter_witness(r));
    report.record(SIDEWAYS, sideways(r).err().map(violation_witness));
    report.record(SHIFT, shift(r).err().map(violation_witness));
    report
}

pub fn is_birack(report: &AxiomReport) -> bool {
    report.passed(BIJECTIVE) && report.passed(YANG_BAXTER) && report.passed(SIDEWAYS)
}

fn violation_witness(e: AlgebraError) -> Vec<Element> {
    match e {
        AlgebraError::Violation { witness, .. } => witness,
        _ => Vec::new(),
    }
}

fn bijectivity_witness(r: &PairMap) -> Option<Vec<Element>> {
    let n = r.n();
    let mut seen: Vec<Option<(Element, Element)>> = vec![None; n * n];
    for ((x, y), (k, l)) in r.iter() {
        if let Some((a, b)) = seen[k * n + l] {
            return Some(vec![a, b, x, y]);
        }
        seen[k * n + l] = Some((x, y));
    }
    None
}

fn yang_baxter_witness(r: &PairMap) -> Option<Vec<Element>> {
    triples(r.n())
        .find(|&t| r.left(r.right(r.left(t))) != r.right(r.left(r.right(t))))
        .map(|(x, y, z)| vec![x, y, z])
}

/// The sideways map `S` with `S(x1, x3) = (x2, x4) ⇔ R(x1, x2) = (x3, x4)`.
///
/// Fails with the offending `(x1, x3)` when the relation is not a function,
/// or with two colliding inputs when it is not a bijection.
pub fn sideways(r: &PairMap) -> Result<PairMap, AlgebraError> {
    let n = r.n();
    let mut table: Vec<Option<(Element, Element)>> = vec![None; n * n];
    for ((x1, x2), (x3, x4)) in r.iter() {
        let slot = &mut table[x1 * n + x3];
        if slot.is_some() {
            return Err(AlgebraError::Violation {
                axiom: SIDEWAYS,
                witness: vec![x1, x3],
            });
        }
        *slot = Some((x2, x4));
    }
    let mut missing = None;
    let s = PairMap::from_fn(n, |x1, x3| match table[x1 * n + x3] {
        Some(v) => v,
        None => {
            missing.get_or_insert((x1, x3));
            (0, 0)
        }
    });
    if let Some((x1, x3)) = missing {
        return Err(AlgebraError::Violation {
            axiom: SIDEWAYS,
            witness: vec![x1, x3],
        });
    }
    if let Some(w) = bijectivity_witness(&s) {
        return Err(AlgebraError::Violation { axiom: SIDEWAYS, witness: w });
    }
    Ok(s)
}

/// A bijection `s` with `R(x, s(x)) = (x, s(x))` for every `x`.
///
/// The candidates for each `x` are matched to distinct values; when several
/// bijections exist (only possible if B2' fails) the identity-leaning one
/// found by the matching is returned.
pub fn shift(r: &PairMap) -> Result<ElementMap, AlgebraError> {
    let n = r.n();
    let candidates: Vec<Vec<Element>> = (0..n)
        .map(|x| (0..n).filter(|&y| r.apply(x, y) == (x, y)).collect())
        .collect();
    let mut owner: Vec<Option<Element>> = vec![None; n];
    for x in 0..n {
        let mut visited = vec![false; n];
        if !augment(x, &candidates, &mut owner, &mut visited) {
            return Err(AlgebraError::Violation {
                axiom: SHIFT,
                witness: vec![x],
            });
        }
    }
    let mut s = vec![0; n];
    for (y, o) in owner.iter().enumerate() {
        if let Some(x) = o {
            s[*x] = y;
        }
    }
    ElementMap::new(n, s)
}

fn augment(
    x: Element,
    candidates: &[Vec<Element>],
    owner: &mut [Option<Element>],
    visited: &mut [bool],
) -> bool {
    // free values first so that an existing identity-like choice survives
    for &y in &candidates[x] {
        if owner[y].is_none() && !visited[y] {
            visited[y] = true;
            owner[y] = Some(x);
            return true;
        }
    }
    for &y in &candidates[x] {
        if visited[y] {
            continue;
        }
        visited[y] = true;
        let prev = owner[y].expect("non-free value has an owner");
        if augment(prev, candidates, owner, visited) {
            owner[y] = Some(x);
            return true;
        }
    }
    false
}

/// A verified biquandle with its inverse, sideways and shift maps cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biquandle {
    r: PairMap,
    r_inv: PairMap,
    sideways: PairMap,
    shift: ElementMap,
}

impl Biquandle {
    pub fn new(r: PairMap) -> Result<Self, AlgebraError> {
        if r.n() == 0 {
            return Err(AlgebraError::InvalidSize(0));
        }
        let report = check_biquandle(&r);
        if !report.all_passed() {
            return Err(AlgebraError::AxiomsFailed(report));
        }
        let r_inv = r.inverse().expect("checked bijective");
        let sideways = sideways(&r)?;
        let shift = shift(&r)?;
        Ok(Self { r, r_inv, sideways, shift })
    }

    /// `R(x, y) = (y, x ∗ y)`.
    pub fn derived(q: &FiniteQuandle) -> Self {
        let r = PairMap::from_fn(q.n(), |x, y| (y, q.op(x, y)));
        Self::new(r).expect("a quandle yields a biquandle")
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

    pub fn sideways(&self) -> &PairMap {
        &self.sideways
    }

    pub fn shift(&self) -> &ElementMap {
        &self.shift
    }

    /// `(X, R⁻¹)`.
    pub fn inverse(&self) -> Self {
        Self::new(self.r_inv.clone()).expect("inverse of a biquandle is a biquandle")
    }

    /// `(X, τRτ)`.
    pub fn conjugate_by_tau(&self) -> Self {
        Self::new(self.r.conjugate_by_tau()).expect("τRτ of a biquandle is a biquandle")
    }

    /// The direct product on `X1 × X2`, with `(a, b)` encoded as `a·n2 + b`.
    pub fn direct_product(&self, other: &Biquandle) -> Self {
        let enc = PairEncoding::new(self.n(), other.n());
        let r = PairMap::from_fn(enc.size(), |x, y| {
            let ((a1, b1), (a2, b2)) = (enc.decode(x), enc.decode(y));
            let (p, q) = self.r.apply(a1, a2);
            let (u, v) = other.r.apply(b1, b2);
            (enc.encode(p, u), enc.encode(q, v))
        });
        Self::new(r).expect("direct product of biquandles is a biquandle")
    }

    /// All bijections `h` with `(h × h)R = R(h × h)`, by exhaustive search.
    pub fn automorphisms(&self, cap: usize) -> Result<Vec<ElementMap>, AlgebraError> {
        let n = self.n();
        if n > cap {
            return Err(AlgebraError::SearchLimit { size: n, cap });
        }
        Ok((0..n)
            .permutations(n)
            .map(|p| ElementMap::new(n, p).expect("permutation of the carrier"))
            .filter(|h| is_homomorphism(&self.r, &self.r, h))
            .collect())
    }

    pub fn is_automorphism(&self, h: &ElementMap) -> bool {
        h.len() == self.n() && h.is_bijective() && is_homomorphism(&self.r, &self.r, h)
    }
}

/// `(h × h) ∘ R_source = R_target ∘ (h × h)` on all of `X²`.
pub fn is_homomorphism(source: &PairMap, target: &PairMap, h: &ElementMap) -> bool {
    h.len() == source.n()
        && h.as_slice().iter().all(|&v| v < target.n())
        && source.iter().all(|((x, y), (k, l))| {
            target.apply(h.apply(x), h.apply(y)) == (h.apply(k), h.apply(l))
        })
}
