use super::report::AxiomReport;
use super::{AlgebraError, Element};

pub const IDEMPOTENT: &str = "idempotent";
pub const RIGHT_INVERTIBLE: &str = "right-invertible";
pub const DISTRIBUTIVE: &str = "distributive";

/// One letter of a Fenn–Rourke word: `a^b` when `inverse` is false,
/// `a^{b̄}` (the dual operation) otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub element: Element,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(element: Element) -> Self {
        Self { element, inverse: false }
    }

    pub fn neg(element: Element) -> Self {
        Self { element, inverse: true }
    }

    pub fn flipped(self) -> Self {
        Self { inverse: !self.inverse, ..self }
    }
}

/// A quandle on `{0..n-1}` stored as its operation table. The dual table is
/// cached at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuandle {
    n: usize,
    op: Vec<Element>,
    dual: Vec<Element>,
}

/// Checks the three quandle axioms on a square table.
pub fn check_quandle(rows: &[Vec<Element>]) -> Result<AxiomReport, AlgebraError> {
    let n = rows.len();
    let op = flatten(rows)?;
    Ok(check_flat(n, &op))
}

fn flatten(rows: &[Vec<Element>]) -> Result<Vec<Element>, AlgebraError> {
    let n = rows.len();
    if n == 0 {
        return Err(AlgebraError::InvalidSize(0));
    }
    let mut op = Vec::with_capacity(n * n);
    for (a, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(AlgebraError::Malformed(format!(
                "row {a} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (b, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(AlgebraError::Malformed(format!(
                    "op[{a}][{b}] = {v} lies outside the carrier of size {n}"
                )));
            }
            op.push(v);
        }
    }
    Ok(op)
}

fn check_flat(n: usize, op: &[Element]) -> AxiomReport {
    let at = |a: usize, b: usize| op[a * n + b];
    let mut report = AxiomReport::new();

    report.record(IDEMPOTENT, (0..n).find(|&a| at(a, a) != a).map(|a| vec![a]));

    let mut invert_witness = None;
    'cols: for b in 0..n {
        let mut preimage = vec![None; n];
        for a in 0..n {
            let c = at(a, b);
            if let Some(prev) = preimage[c] {
                invert_witness = Some(vec![prev, a, b]);
                break 'cols;
            }
            preimage[c] = Some(a);
        }
    }
    report.record(RIGHT_INVERTIBLE, invert_witness);

    let distributive = super::tables::triples(n)
        .find(|&(a, b, c)| at(at(a, b), c) != at(at(a, c), at(b, c)))
        .map(|(a, b, c)| vec![a, b, c]);
    report.record(DISTRIBUTIVE, distributive);
    report
}

impl FiniteQuandle {
    /// Validates the table and builds the quandle.
    pub fn from_rows(rows: &[Vec<Element>]) -> Result<Self, AlgebraError> {
        let n = rows.len();
        let op = flatten(rows)?;
        let report = check_flat(n, &op);
        if !report.all_passed() {
            return Err(AlgebraError::AxiomsFailed(report));
        }
        Ok(Self::from_verified(n, op))
    }

    fn from_verified(n: usize, op: Vec<Element>) -> Self {
        let mut dual = vec![0; n * n];
        for c in 0..n {
            for b in 0..n {
                dual[op[c * n + b] * n + b] = c;
            }
        }
        Self { n, op, dual }
    }

    /// `Z/nZ` with `a ∗ b = 2b − a`.
    pub fn dihedral(n: usize) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::InvalidSize(0));
        }
        let op = (0..n * n).map(|i| (2 * (i % n) + n - i / n) % n).collect();
        Ok(Self::from_verified(n, op))
    }

    /// `Z/nZ` with `a ∗ b = t·a + (1 − t)·b` for a unit `t`.
    pub fn alexander(n: usize, t: i64) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::InvalidSize(0));
        }
        let m = n as i64;
        let t = t.rem_euclid(m);
        if gcd(t, m) != 1 {
            return Err(AlgebraError::InvalidParameter(format!(
                "t = {t} is not a unit modulo {n}"
            )));
        }
        let op = (0..n * n)
            .map(|i| {
                let (a, b) = ((i / n) as i64, (i % n) as i64);
                (t * a + (1 - t) * b).rem_euclid(m) as usize
            })
            .collect();
        Ok(Self::from_verified(n, op))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn op(&self, a: Element, b: Element) -> Element {
        self.op[a * self.n + b]
    }

    /// `a ∗̄ b`, the unique `c` with `c ∗ b = a`.
    #[inline]
    pub fn dual_op(&self, a: Element, b: Element) -> Element {
        self.dual[a * self.n + b]
    }

    pub fn rows(&self) -> Vec<Vec<Element>> {
        self.op.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn dual(&self) -> Self {
        Self {
            n: self.n,
            op: self.dual.clone(),
            dual: self.op.clone(),
        }
    }

    pub fn is_involutory(&self) -> bool {
        self.op == self.dual
    }

    /// Applies the word left to right: `a^{bc} = (a^b)^c`.
    pub fn eval_word(&self, base: Element, word: &[Letter]) -> Element {
        word.iter().fold(base, |acc, l| {
            if l.inverse {
                self.dual_op(acc, l.element)
            } else {
                self.op(acc, l.element)
            }
        })
    }

    /// Every bijection `h` with `h(a ∗ b) = h(a) ∗ h(b)`.
    pub fn is_automorphism(&self, h: &super::ElementMap) -> bool {
        h.len() == self.n
            && h.is_bijective()
            && (0..self.n).all(|a| {
                (0..self.n).all(|b| h.apply(self.op(a, b)) == self.op(h.apply(a), h.apply(b)))
            })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
