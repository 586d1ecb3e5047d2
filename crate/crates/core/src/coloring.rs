//! Colorings of twisted diagrams by vt-structured biquandles.
//!
//! A coloring assigns a carrier element to every edge so that each node's
//! relation holds: `R(x1,x2) = (x3,x4)` at a positive crossing, `R⁻¹` at a
//! negative one, `V` at a virtual crossing and `T(x1) = x2` at a bar.
//! Free loops carry one unconstrained color each.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{Biquandle, Element, FiniteQuandle, Letter, PairEncoding};
use crate::diagram::{fm_edges, make_fm, Node, NodeGraph, Sign, TwistedDiagram};
use crate::laurent::LaurentPolynomial;
use crate::solver::{self, Problem, Rules, SolverError};
use crate::structures::{standard_twisted_product, VtStructure};
use crate::Limits;

#[derive(Debug, thiserror::Error)]
pub enum ColoringError {
    #[error("structure failed axioms: {0}")]
    Unverified(String),
    #[error(transparent)]
    Budget(#[from] SolverError),
    #[error("brute force over {size} assignments exceeds the cap {cap}")]
    BruteForceCap { size: BigUint, cap: u64 },
    #[error("diagram has bars; only virtual diagrams are supported here")]
    BarsPresent,
    #[error("({x1}, {y1}) is not in the delta set, so no coloring exists")]
    NotInDelta { x1: Element, y1: Element },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl ColoringError {
    /// Resource caps, as opposed to input errors.
    pub fn is_resource(&self) -> bool {
        matches!(self, ColoringError::Budget(_) | ColoringError::BruteForceCap { .. })
    }
}

/// Colors indexed by edge, plus one color per free loop.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Coloring {
    pub edges: Vec<Element>,
    pub free_loops: Vec<Element>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CountOptions {
    /// Collect every coloring, in a deterministic order.
    pub emit: bool,
    /// Count even if the structure fails its axioms.
    pub force: bool,
    pub limits: Limits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringCount {
    pub count: BigUint,
    pub colorings: Option<Vec<Coloring>>,
}

fn rules(s: &VtStructure) -> Rules<'_> {
    Rules {
        n: s.n(),
        positive: s.r(),
        negative: s.r_inv(),
        virtual_: s.v(),
        bar: Some(s.t()),
    }
}

pub fn count_colorings(
    d: &TwistedDiagram,
    s: &VtStructure,
    options: &CountOptions,
) -> Result<ColoringCount, ColoringError> {
    if !options.force && !s.is_verified() {
        let failed: Vec<&str> = s.certificate().failures().map(|c| c.axiom).collect();
        return Err(ColoringError::Unverified(failed.join(", ")));
    }
    let problem = Problem::from_graph(d, &rules(s));
    count_problem(&problem, s.n(), d.free_loops(), options)
}

fn count_problem(
    problem: &Problem,
    n: usize,
    free_loops: usize,
    options: &CountOptions,
) -> Result<ColoringCount, ColoringError> {
    let initial = vec![None; problem.vars()];
    let loop_factor = solver::power(n, free_loops);
    if !options.emit {
        let count = solver::solve(problem, &initial, options.limits.node_budget, None)?;
        return Ok(ColoringCount { count: count * loop_factor, colorings: None });
    }
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut visit = |s: &[u32]| found.push(s.to_vec());
    let count = solver::solve(problem, &initial, options.limits.node_budget, Some(&mut visit))?;
    let mut colorings = Vec::new();
    for edges in found {
        let edges: Vec<Element> = edges.into_iter().map(|x| x as Element).collect();
        for loops in odometer(n, free_loops) {
            colorings.push(Coloring { edges: edges.clone(), free_loops: loops });
        }
    }
    Ok(ColoringCount { count: count * loop_factor, colorings: Some(colorings) })
}

/// Every vector in `{0..n-1}^k`, lexicographically.
fn odometer(n: usize, k: usize) -> impl Iterator<Item = Vec<Element>> {
    let mut next = if n == 0 && k > 0 { None } else { Some(vec![0; k]) };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < n {
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    })
}

/// Whether every node relation holds under `c`.
pub fn is_coloring(d: &impl NodeGraph, s: &VtStructure, edges: &[Element]) -> bool {
    d.nodes().iter().all(|node| match *node {
        Node::Classical { sign, ports } => {
            let map = if sign == Sign::Positive { s.r() } else { s.r_inv() };
            map.apply(edges[ports[0]], edges[ports[1]]) == (edges[ports[2]], edges[ports[3]])
        }
        Node::Virtual { ports } => {
            s.v().apply(edges[ports[0]], edges[ports[1]]) == (edges[ports[2]], edges[ports[3]])
        }
        Node::Bar { input, output } => s.t().apply(edges[input]) == edges[output],
    })
}

/// Exhaustive scan of all edge and free-loop assignments.
pub fn brute_force_colorings(
    d: &TwistedDiagram,
    s: &VtStructure,
    limits: &Limits,
) -> Result<BigUint, ColoringError> {
    let n = s.n();
    let e = d.edges().len();
    let size = solver::power(n, e + d.free_loops());
    if size > BigUint::from(limits.brute_force_cap) {
        return Err(ColoringError::BruteForceCap { size, cap: limits.brute_force_cap });
    }
    let mut count = BigUint::zero();
    for assignment in odometer(n, e + d.free_loops()) {
        if is_coloring(d, s, &assignment[..e]) {
            count += 1u32;
        }
    }
    Ok(count)
}

fn quandle_count(d: &TwistedDiagram, q: &FiniteQuandle, lower: bool, limits: &Limits) -> Result<BigUint, ColoringError> {
    if d.has_bars() {
        return Err(ColoringError::BarsPresent);
    }
    let derived = Biquandle::derived(q);
    let base = if lower { derived.conjugate_by_tau() } else { derived };
    let tau = crate::algebra::PairMap::transposition(q.n());
    let rules = Rules {
        n: q.n(),
        positive: base.r(),
        negative: base.r_inv(),
        virtual_: &tau,
        bar: None,
    };
    let problem = Problem::from_graph(d, &rules);
    let options = CountOptions { limits: *limits, ..Default::default() };
    Ok(count_problem(&problem, q.n(), d.free_loops(), &options)?.count)
}

/// Colorings by the first-coordinate rules: a positive crossing takes
/// `(x1, x2)` to `(x2, x1 ∗ x2)`, a negative one uses the inverse table, and a
/// virtual crossing swaps.
pub fn upper_colorings(d: &TwistedDiagram, q: &FiniteQuandle, limits: &Limits) -> Result<BigUint, ColoringError> {
    quandle_count(d, q, false, limits)
}

/// Colorings by the second-coordinate rules: a positive crossing takes
/// `(x1, x2)` to `(x2 ∗ x1, x1)`.
pub fn lower_colorings(d: &TwistedDiagram, q: &FiniteQuandle, limits: &Limits) -> Result<BigUint, ColoringError> {
    quandle_count(d, q, true, limits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    #[serde(serialize_with = "decimal")]
    pub lhs: BigUint,
    #[serde(serialize_with = "decimal")]
    pub upper: BigUint,
    #[serde(serialize_with = "decimal")]
    pub lower: BigUint,
    #[serde(serialize_with = "decimal")]
    pub rhs: BigUint,
    pub equal: bool,
}

/// Serializes a big integer as a decimal string.
pub fn decimal<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

/// Compares the `B(Q)` coloring count with the product of upper and lower counts.
pub fn check_product_formula(
    d: &TwistedDiagram,
    q: &FiniteQuandle,
    limits: &Limits,
) -> Result<ProductCheck, ColoringError> {
    if d.has_bars() {
        return Err(ColoringError::BarsPresent);
    }
    let s = standard_twisted_product(q);
    let options = CountOptions { limits: *limits, ..Default::default() };
    let lhs = count_colorings(d, &s, &options)?.count;
    let upper = upper_colorings(d, q, limits)?;
    let lower = lower_colorings(d, q, limits)?;
    let rhs = &upper * &lower;
    Ok(ProductCheck { equal: lhs == rhs, lhs, upper, lower, rhs })
}

/// `(ba)^m` as a word: `b, a, b, a, ...`.
fn alternating(first: Element, second: Element, pairs: usize) -> Vec<Letter> {
    (0..pairs)
        .flat_map(|_| [Letter::pos(first), Letter::pos(second)])
        .collect()
}

/// Pairs `(a, b)` with `a = a^{(ba)^m}` and `b = b^{(ab)^m}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaSet {
    pub m: usize,
    pub n: usize,
    pub members: BTreeSet<(Element, Element)>,
}

impl DeltaSet {
    pub fn contains(&self, a: Element, b: Element) -> bool {
        self.members.contains(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn delta_set(q: &FiniteQuandle, m: usize) -> Result<DeltaSet, ColoringError> {
    if m == 0 {
        return Err(ColoringError::InvalidParameter("m must be at least 1".into()));
    }
    let n = q.n();
    let members = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            q.eval_word(a, &alternating(b, a, m)) == a && q.eval_word(b, &alternating(a, b, m)) == b
        })
        .collect();
    Ok(DeltaSet { m, n, members })
}

/// The unique `B(Q)`-coloring of `make_fm(m)` whose edges `x` and `y` have
/// first coordinates `x1` and `y1`. Second coordinates come from
/// closed-form words; the interior is filled by running the crossings forward.
pub fn coloring_from_delta(q: &FiniteQuandle, m: usize, x1: Element, y1: Element) -> Result<Coloring, ColoringError> {
    if x1 >= q.n() || y1 >= q.n() {
        return Err(ColoringError::InvalidParameter(format!("({x1}, {y1}) is outside the carrier")));
    }
    if !delta_set(q, m)?.contains(x1, y1) {
        return Err(ColoringError::NotInDelta { x1, y1 });
    }
    let half = m / 2;
    let (x2, y2) = if m % 2 == 0 {
        let mut w = alternating(y1, x1, half - 1);
        w.push(Letter::pos(y1));
        (q.eval_word(y1, &alternating(x1, y1, half)), q.eval_word(x1, &w))
    } else {
        let mut w = alternating(y1, x1, half);
        w.push(Letter::pos(y1));
        (q.eval_word(x1, &w), q.eval_word(y1, &alternating(x1, y1, half)))
    };

    let d = make_fm(m).expect("m >= 1");
    let s = standard_twisted_product(q);
    let enc = PairEncoding::new(q.n(), q.n());
    let mut colors: Vec<Option<Element>> = vec![None; d.edges().len()];
    let idx = |name: &str| d.edge_index(name).expect("fm edge");
    colors[idx(fm_edges::X)] = Some(enc.encode(x1, x2));
    colors[idx(fm_edges::Y)] = Some(enc.encode(y1, y2));
    // Nodes are stored crossings first, then the bars, then the virtual crossing.
    for node in d.nodes() {
        match *node {
            Node::Classical { ports, .. } => {
                let (a, b) = s.r().apply(colors[ports[0]].unwrap(), colors[ports[1]].unwrap());
                colors[ports[2]] = Some(a);
                colors[ports[3]] = Some(b);
            }
            Node::Bar { input, output } => colors[output] = Some(s.t().apply(colors[input].unwrap())),
            Node::Virtual { .. } => {}
        }
    }
    let edges: Vec<Element> = colors.into_iter().map(|c| c.expect("every edge reached")).collect();
    if !is_coloring(&d, &s, &edges) {
        return Err(ColoringError::NotInDelta { x1, y1 });
    }
    Ok(Coloring { edges, free_loops: Vec::new() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Detection {
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    #[serde(serialize_with = "decimal")]
    pub threshold: BigUint,
    pub nonvirtual: bool,
}

/// A virtual diagram has at least `|Q|²` colorings by `B(Q)`; fewer proves
/// the diagram is not virtual. `false` is inconclusive.
pub fn detect_nonvirtual(d: &TwistedDiagram, q: &FiniteQuandle, limits: &Limits) -> Result<Detection, ColoringError> {
    let s = standard_twisted_product(q);
    let options = CountOptions { limits: *limits, ..Default::default() };
    let count = count_colorings(d, &s, &options)?.count;
    let threshold = BigUint::from(q.n() * q.n());
    Ok(Detection { nonvirtual: count < threshold, count, threshold })
}

/// `A^{-2m}(A^{-4m} + (-1)^{m+1}(1 + A^2 + A^{-2}))`, expanded.
pub fn fm_twisted_jones_closed_form(m: usize) -> Result<LaurentPolynomial, ColoringError> {
    if m == 0 {
        return Err(ColoringError::InvalidParameter("m must be at least 1".into()));
    }
    let m = m as i64;
    let sign = if m % 2 == 1 { 1 } else { -1 };
    let inner = LaurentPolynomial::monomial(1, -4 * m)
        + LaurentPolynomial::from_terms([(0, sign), (2, sign), (-2, sign)]);
    Ok(LaurentPolynomial::monomial(1, -2 * m) * inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::braid_closure;
    use num_traits::One;

    fn opts() -> CountOptions {
        CountOptions::default()
    }

    #[test]
    fn free_loop_and_empty() {
        let s = standard_twisted_product(&FiniteQuandle::dihedral(3).unwrap());
        let one = TwistedDiagram::free_loops_only(1);
        assert_eq!(count_colorings(&one, &s, &opts()).unwrap().count, BigUint::from(9u32));
        let empty = TwistedDiagram::empty();
        assert_eq!(count_colorings(&empty, &s, &opts()).unwrap().count, BigUint::one());
        assert_eq!(brute_force_colorings(&empty, &s, &Limits::default()).unwrap(), BigUint::one());
    }

    #[test]
    fn fm_small_counts() {
        let d1 = make_fm(1).unwrap();
        let b2 = standard_twisted_product(&FiniteQuandle::dihedral(2).unwrap());
        let b3 = standard_twisted_product(&FiniteQuandle::dihedral(3).unwrap());
        assert_eq!(count_colorings(&d1, &b2, &opts()).unwrap().count, BigUint::from(4u32));
        assert_eq!(count_colorings(&d1, &b3, &opts()).unwrap().count, BigUint::from(3u32));
    }

    #[test]
    fn emission_matches_count() {
        let d = make_fm(2).unwrap().with_free_loop();
        let s = standard_twisted_product(&FiniteQuandle::dihedral(4).unwrap());
        let out = count_colorings(&d, &s, &CountOptions { emit: true, ..opts() }).unwrap();
        let list = out.colorings.unwrap();
        assert_eq!(BigUint::from(list.len()), out.count);
        assert_eq!(list.len(), 16 * 16);
        assert!(list.iter().all(|c| is_coloring(&d, &s, &c.edges)));
    }

    #[test]
    fn unverified_structures_are_refused() {
        let q = FiniteQuandle::alexander(5, 3).unwrap();
        let s = crate::structures::remark_structure(&q);
        let d = make_fm(1).unwrap();
        assert!(matches!(count_colorings(&d, &s, &opts()), Err(ColoringError::Unverified(_))));
        assert!(count_colorings(&d, &s, &CountOptions { force: true, ..opts() }).is_ok());
    }

    #[test]
    fn trefoil_upper_lower() {
        let t = braid_closure(3).unwrap();
        let q = FiniteQuandle::dihedral(3).unwrap();
        let l = Limits::default();
        assert_eq!(upper_colorings(&t, &q, &l).unwrap(), BigUint::from(9u32));
        assert_eq!(lower_colorings(&t, &q, &l).unwrap(), BigUint::from(9u32));
        let check = check_product_formula(&t, &q, &l).unwrap();
        assert_eq!(check.lhs, BigUint::from(81u32));
        assert!(check.equal);
        assert!(matches!(upper_colorings(&make_fm(1).unwrap(), &q, &l), Err(ColoringError::BarsPresent)));
        let trivial = FiniteQuandle::dihedral(1).unwrap();
        assert_eq!(upper_colorings(&t, &trivial, &l).unwrap(), BigUint::one());
    }

    #[test]
    fn delta_examples() {
        let d3 = FiniteQuandle::dihedral(3).unwrap();
        let delta = delta_set(&d3, 1).unwrap();
        assert_eq!(delta.members.iter().copied().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2)]);
        for m in 1..=4 {
            let q = FiniteQuandle::dihedral(2 * m).unwrap();
            assert_eq!(delta_set(&q, m).unwrap().len(), 4 * m * m);
        }
        let d6 = FiniteQuandle::dihedral(6).unwrap();
        assert!(!delta_set(&d6, 1).unwrap().contains(1, 0));
        assert!(delta_set(&d3, 0).is_err());
    }

    #[test]
    fn coloring_from_delta_checks_membership() {
        let d3 = FiniteQuandle::dihedral(3).unwrap();
        let c = coloring_from_delta(&d3, 1, 0, 0).unwrap();
        assert!(c.edges.iter().all(|&e| e == 0));
        assert!(matches!(coloring_from_delta(&d3, 1, 0, 1), Err(ColoringError::NotInDelta { .. })));

        // m = 2 on dihedral 4: x2 = y1^{x1 y1}.
        let d4 = FiniteQuandle::dihedral(4).unwrap();
        let c = coloring_from_delta(&d4, 2, 1, 2).unwrap();
        let x = make_fm(2).unwrap().edge_index("x").unwrap();
        let x2 = d4.eval_word(2, &[Letter::pos(1), Letter::pos(2)]);
        assert_eq!(c.edges[x], 4 + x2);
    }

    #[test]
    fn detection() {
        let l = Limits::default();
        let d3 = FiniteQuandle::dihedral(3).unwrap();
        let r = detect_nonvirtual(&make_fm(1).unwrap(), &d3, &l).unwrap();
        assert_eq!(r.count, BigUint::from(3u32));
        assert!(r.nonvirtual);
        let r = detect_nonvirtual(&braid_closure(3).unwrap(), &d3, &l).unwrap();
        assert!(!r.nonvirtual);
    }

    #[test]
    fn jones_closed_form() {
        assert_eq!(fm_twisted_jones_closed_form(1).unwrap().to_string(), "A^-6 + A^-4 + A^-2 + 1");
        assert_eq!(fm_twisted_jones_closed_form(2).unwrap().to_string(), "A^-12 - A^-6 - A^-4 - A^-2");
        assert!(fm_twisted_jones_closed_form(0).is_err());
    }
}
