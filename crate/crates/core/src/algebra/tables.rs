//! Finite maps on the carrier `{0..n-1}` and on its square.

use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Carrier elements are plain indices `0..n`.
pub type Element = usize;

/// A map `X -> X` given by its table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementMap(Vec<Element>);

impl ElementMap {
    pub fn new(n: usize, table: Vec<Element>) -> Result<Self, AlgebraError> {
        if table.len() != n {
            return Err(AlgebraError::Malformed(format!(
                "unary table has {} entries, expected {n}",
                table.len()
            )));
        }
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(AlgebraError::Malformed(format!(
                "entry {i} maps to {v}, outside the carrier of size {n}"
            )));
        }
        Ok(Self(table))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_fn(n: usize, f: impl FnMut(Element) -> Element) -> Self {
        Self((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.0[x]
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.0
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &v in &self.0 {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Some(Self(inv))
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_involution(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| self.0[v] == i)
    }

    /// Product map on pair carriers, with `(a, b)` encoded as `a * other.len() + b`.
    pub fn product(&self, other: &Self) -> Self {
        let m = other.len();
        Self::from_fn(self.len() * m, |x| self.apply(x / m) * m + other.apply(x % m))
    }
}

/// A map `X² -> X²`. Entry `x * n + y` holds the image of `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairMap {
    n: usize,
    table: Vec<(Element, Element)>,
}

impl PairMap {
    pub fn from_fn(n: usize, mut f: impl FnMut(Element, Element) -> (Element, Element)) -> Self {
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(f(x, y));
            }
        }
        Self { n, table }
    }

    /// Builds a map from nested rows, `rows[i][j] = [k, l]` meaning `(i, j) ↦ (k, l)`.
    pub fn from_rows(n: usize, rows: &[Vec<[Element; 2]>]) -> Result<Self, AlgebraError> {
        if rows.len() != n {
            return Err(AlgebraError::Malformed(format!(
                "pair table has {} rows, expected {n}",
                rows.len()
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(AlgebraError::Malformed(format!(
                    "pair table row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &[k, l]) in row.iter().enumerate() {
                if k >= n || l >= n {
                    return Err(AlgebraError::Malformed(format!(
                        "entry ({i},{j}) = ({k},{l}) lies outside the carrier of size {n}"
                    )));
                }
                table.push((k, l));
            }
        }
        Ok(Self { n, table })
    }

    pub fn to_rows(&self) -> Vec<Vec<[Element; 2]>> {
        self.table
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|row| row.iter().map(|&(k, l)| [k, l]).collect())
            .collect()
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |x, y| (x, y))
    }

    /// The transposition `τ(x, y) = (y, x)`.
    pub fn transposition(n: usize) -> Self {
        Self::from_fn(n, |x, y| (y, x))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apply(&self, x: Element, y: Element) -> (Element, Element) {
        self.table[x * self.n + y]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((Element, Element), (Element, Element))> + '_ {
        let n = self.n;
        self.table
            .iter()
            .enumerate()
            .map(move |(i, &out)| ((i / n, i % n), out))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        for &(k, l) in &self.table {
            let idx = k * self.n + l;
            if seen[idx] {
                return false;
            }
            seen[idx] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![(0, 0); self.table.len()];
        for ((x, y), (k, l)) in self.iter() {
            table[k * self.n + l] = (x, y);
        }
        Some(Self { n: self.n, table })
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |x, y| {
            let (a, b) = other.apply(x, y);
            self.apply(a, b)
        })
    }

    /// `τ ∘ self ∘ τ`.
    pub fn conjugate_by_tau(&self) -> Self {
        Self::from_fn(self.n, |x, y| {
            let (a, b) = self.apply(y, x);
            (b, a)
        })
    }

    /// `(g × h) ∘ self ∘ (k × l)` for unary maps on the carrier.
    pub fn sandwich(&self, outer: (&ElementMap, &ElementMap), inner: (&ElementMap, &ElementMap)) -> Self {
        Self::from_fn(self.n, |x, y| {
            let (a, b) = self.apply(inner.0.apply(x), inner.1.apply(y));
            (outer.0.apply(a), outer.1.apply(b))
        })
    }

    /// The first input on which the two maps disagree.
    pub fn first_mismatch(&self, other: &Self) -> Option<(Element, Element)> {
        self.iter()
            .zip(other.iter())
            .find(|(a, b)| a.1 != b.1)
            .map(|(a, _)| a.0)
    }

    /// Lifts to `(R × 1)` on `X³`.
    #[inline]
    pub fn left(&self, (x, y, z): (Element, Element, Element)) -> (Element, Element, Element) {
        let (a, b) = self.apply(x, y);
        (a, b, z)
    }

    /// Lifts to `(1 × R)` on `X³`.
    #[inline]
    pub fn right(&self, (x, y, z): (Element, Element, Element)) -> (Element, Element, Element) {
        let (b, c) = self.apply(y, z);
        (x, b, c)
    }
}

/// Every triple of `X³` in lexicographic order.
pub(crate) fn triples(n: usize) -> impl Iterator<Item = (Element, Element, Element)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

/// Encoding of pair carriers: `(a, b) ↦ a * n2 + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairEncoding {
    pub n1: usize,
    pub n2: usize,
}

impl PairEncoding {
    pub fn new(n1: usize, n2: usize) -> Self {
        Self { n1, n2 }
    }

    pub fn size(&self) -> usize {
        self.n1 * self.n2
    }

    #[inline]
    pub fn encode(&self, a: Element, b: Element) -> Element {
        a * self.n2 + b
    }

    #[inline]
    pub fn decode(&self, x: Element) -> (Element, Element) {
        (x / self.n2, x % self.n2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_map_inverse_and_compose() {
        let r = PairMap::from_fn(3, |x, y| (y, (2 * y + 3 - x) % 3));
        let inv = r.inverse().unwrap();
        assert_eq!(inv.compose(&r), PairMap::identity(3));
        assert_eq!(r.compose(&inv), PairMap::identity(3));
    }

    #[test]
    fn tau_conjugation_is_an_involution() {
        let r = PairMap::from_fn(4, |x, y| ((x + y) % 4, y));
        assert_eq!(r.conjugate_by_tau().conjugate_by_tau(), r);
    }

    #[test]
    fn rows_round_trip() {
        let r = PairMap::from_fn(3, |x, y| (y, x));
        assert_eq!(PairMap::from_rows(3, &r.to_rows()).unwrap(), r);
        assert!(PairMap::from_rows(2, &[vec![[0, 0], [0, 2]], vec![[1, 0], [1, 1]]]).is_err());
    }

    #[test]
    fn element_map_basics() {
        let f = ElementMap::new(3, vec![1, 2, 0]).unwrap();
        assert!(f.is_bijective());
        assert!(!f.is_involution());
        assert!(f.compose(&f.inverse().unwrap()).is_identity());
        assert!(ElementMap::new(3, vec![0, 3, 1]).is_err());
        assert!(!ElementMap::new(2, vec![0, 0]).unwrap().is_bijective());
    }
}
