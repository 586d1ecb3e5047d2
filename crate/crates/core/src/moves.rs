//! Boundary-profile check of the extended Reidemeister moves.
//!
//! Each move side is drawn as a stack of planar pieces (crossings, bars,
//! cups and caps) read bottom to top, then compiled to a [`Tangle`] for one
//! orientation of its strands. Two sides agree when, for every coloring of
//! the incoming endpoints, they admit the same multiset of outgoing colors.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::Element;
use crate::diagram::{Node, Sign, Tangle};
use crate::solver::{self, Problem, Rules, SolverError};
use crate::structures::VtStructure;
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveFamily {
    R1,
    R2,
    R3,
    V1,
    V2,
    V3,
    V4,
    T1,
    T2,
    T3,
}

impl MoveFamily {
    pub const ALL: [MoveFamily; 10] = [
        MoveFamily::R1,
        MoveFamily::R2,
        MoveFamily::R3,
        MoveFamily::V1,
        MoveFamily::V2,
        MoveFamily::V3,
        MoveFamily::V4,
        MoveFamily::T1,
        MoveFamily::T2,
        MoveFamily::T3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveFamily::R1 => "R1",
            MoveFamily::R2 => "R2",
            MoveFamily::R3 => "R3",
            MoveFamily::V1 => "V1",
            MoveFamily::V2 => "V2",
            MoveFamily::V3 => "V3",
            MoveFamily::V4 => "V4",
            MoveFamily::T1 => "T1",
            MoveFamily::T2 => "T2",
            MoveFamily::T3 => "T3",
        }
    }
}

impl fmt::Display for MoveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown move family `{0}`")]
pub struct UnknownFamily(pub String);

impl FromStr for MoveFamily {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownFamily(s.to_owned()))
    }
}

/// Which strand of a crossing is on top. Strand `A` runs from bottom-left
/// to top-right, strand `B` from bottom-right to top-left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Over {
    A,
    B,
}

/// One planar piece. `at` is the left position it occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    Cross { at: usize, over: Over },
    Virt { at: usize },
    Bar { at: usize },
    /// Opens two new positions `at`, `at + 1`.
    Cup { at: usize },
    /// Closes positions `at`, `at + 1`.
    Cap { at: usize },
}

/// A boundary point of a planar picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Bottom(usize),
    Top(usize),
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Bottom(i) => write!(f, "b{i}"),
            Endpoint::Top(i) => write!(f, "t{i}"),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A move side as a stack of pieces over `bottom` starting positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Planar {
    pub bottom: usize,
    pub pieces: Vec<Piece>,
}

#[derive(Debug)]
enum Local {
    /// Corners counterclockwise from bottom-left: bl, br, tr, tl.
    Crossing { corners: [usize; 4], over: Option<Over> },
    Bar { below: usize, above: usize },
}

/// Segment graph of a planar picture before orientation.
#[derive(Debug)]
struct Layout {
    segments: usize,
    bottom: Vec<usize>,
    top: Vec<usize>,
    locals: Vec<Local>,
    /// `(a, b, same)`: segments on one strand, with equal or opposite up-flags.
    links: Vec<(usize, usize, bool)>,
    /// Pairs of segments that form one edge (joined by a cup or cap).
    joins: Vec<(usize, usize)>,
}

impl Planar {
    pub fn new(bottom: usize, pieces: Vec<Piece>) -> Self {
        Self { bottom, pieces }
    }

    fn layout(&self) -> Layout {
        let mut segments = self.bottom;
        let mut fresh = || {
            segments += 1;
            segments - 1
        };
        let bottom: Vec<usize> = (0..self.bottom).collect();
        let mut current = bottom.clone();
        let mut locals = Vec::new();
        let mut links = Vec::new();
        let mut joins = Vec::new();
        for piece in &self.pieces {
            match *piece {
                Piece::Cross { at, .. } | Piece::Virt { at } => {
                    let (bl, br) = (current[at], current[at + 1]);
                    let (tl, tr) = (fresh(), fresh());
                    let over = match piece {
                        Piece::Cross { over, .. } => Some(*over),
                        _ => None,
                    };
                    locals.push(Local::Crossing { corners: [bl, br, tr, tl], over });
                    links.push((bl, tr, true));
                    links.push((br, tl, true));
                    current[at] = tl;
                    current[at + 1] = tr;
                }
                Piece::Bar { at } => {
                    let above = fresh();
                    locals.push(Local::Bar { below: current[at], above });
                    links.push((current[at], above, true));
                    current[at] = above;
                }
                Piece::Cup { at } => {
                    let (l, r) = (fresh(), fresh());
                    links.push((l, r, false));
                    joins.push((l, r));
                    current.splice(at..at, [l, r]);
                }
                Piece::Cap { at } => {
                    let (l, r) = (current[at], current[at + 1]);
                    links.push((l, r, false));
                    joins.push((l, r));
                    current.drain(at..at + 2);
                }
            }
        }
        Layout { segments, bottom, top: current, locals, links, joins }
    }

    fn endpoints(layout: &Layout) -> Vec<(Endpoint, usize)> {
        let bottom = layout.bottom.iter().enumerate().map(|(i, &s)| (Endpoint::Bottom(i), s));
        let top = layout.top.iter().enumerate().map(|(i, &s)| (Endpoint::Top(i), s));
        bottom.chain(top).collect()
    }

    /// Strands as lists of endpoints, ordered by their smallest endpoint.
    pub fn strands(&self) -> Vec<Vec<Endpoint>> {
        let layout = self.layout();
        let comp = components(&layout);
        let mut groups: BTreeMap<usize, Vec<Endpoint>> = BTreeMap::new();
        for (e, s) in Self::endpoints(&layout) {
            groups.entry(comp[s]).or_default().push(e);
        }
        let mut out: Vec<Vec<Endpoint>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Compiles the picture with strand `i` (in [`Planar::strands`] order)
    /// entering at its smallest endpoint iff bit `i` of `orientation` is set.
    pub fn compile(&self, orientation: u32) -> OrientedSide {
        let layout = self.layout();
        let comp = components(&layout);
        let strands = self.strands();
        let endpoint_segment: BTreeMap<Endpoint, usize> = Self::endpoints(&layout).into_iter().collect();

        // Up-flags by breadth-first propagation from each strand's first endpoint.
        let mut adjacency = vec![Vec::new(); layout.segments];
        for &(a, b, same) in &layout.links {
            adjacency[a].push((b, same));
            adjacency[b].push((a, same));
        }
        let mut up: Vec<Option<bool>> = vec![None; layout.segments];
        for (i, strand) in strands.iter().enumerate() {
            let entering = orientation >> i & 1 == 1;
            let root = endpoint_segment[&strand[0]];
            up[root] = Some(match strand[0] {
                Endpoint::Bottom(_) => entering,
                Endpoint::Top(_) => !entering,
            });
            let mut queue = VecDeque::from([root]);
            while let Some(s) = queue.pop_front() {
                let flag = up[s].unwrap();
                for &(t, same) in &adjacency[s] {
                    let want = if same { flag } else { !flag };
                    match up[t] {
                        None => {
                            up[t] = Some(want);
                            queue.push_back(t);
                        }
                        Some(have) => assert_eq!(have, want, "inconsistent planar picture"),
                    }
                }
            }
        }
        // Closed components carry no endpoint; orient them upward at their first segment.
        for s in 0..layout.segments {
            if up[s].is_none() {
                let c = comp[s];
                for t in 0..layout.segments {
                    if comp[t] == c && up[t].is_none() {
                        up[t] = Some(true);
                    }
                }
            }
        }
        let up: Vec<bool> = up.into_iter().map(Option::unwrap).collect();

        // Edges: segments joined by cups and caps.
        let mut parent: Vec<usize> = (0..layout.segments).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for &(a, b) in &layout.joins {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
        let mut edge_of = vec![usize::MAX; layout.segments];
        let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
        for s in 0..layout.segments {
            let r = find(&mut parent, s);
            let next = roots.len();
            edge_of[s] = *roots.entry(r).or_insert(next);
        }
        let edges: Vec<String> = (0..roots.len()).map(|i| format!("s{i}")).collect();

        let nodes = layout
            .locals
            .iter()
            .map(|local| match *local {
                Local::Crossing { corners, over } => {
                    let a_in = if up[corners[0]] { 0 } else { 2 };
                    let b_in = if up[corners[1]] { 1 } else { 3 };
                    // Rotate so both incoming corners sit at the bottom.
                    let (first, first_is_a) = if (b_in + 4 - a_in) % 4 == 1 { (a_in, true) } else { (b_in, false) };
                    let corner = |p: usize| edge_of[corners[(first + p) % 4]];
                    let ports = [corner(0), corner(1), corner(3), corner(2)];
                    match over {
                        None => Node::Virtual { ports },
                        Some(over) => {
                            let second_is_a = !first_is_a;
                            let second_over = (over == Over::A) == second_is_a;
                            let sign = if second_over { Sign::Positive } else { Sign::Negative };
                            Node::Classical { sign, ports }
                        }
                    }
                }
                Local::Bar { below, above } => {
                    let (input, output) = if up[below] { (below, above) } else { (above, below) };
                    Node::Bar { input: edge_of[input], output: edge_of[output] }
                }
            })
            .collect();

        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for (e, s) in Self::endpoints(&layout) {
            let entering = match e {
                Endpoint::Bottom(_) => up[s],
                Endpoint::Top(_) => !up[s],
            };
            if entering {
                inputs.push((e, edge_of[s]));
            } else {
                outputs.push((e, edge_of[s]));
            }
        }
        let tangle = Tangle::new(
            edges,
            nodes,
            inputs.iter().map(|p| p.1).collect(),
            outputs.iter().map(|p| p.1).collect(),
        )
        .expect("planar pictures compile to valid tangles");
        OrientedSide {
            tangle,
            inputs: inputs.into_iter().map(|p| p.0).collect(),
            outputs: outputs.into_iter().map(|p| p.0).collect(),
        }
    }
}

/// Strand component of every segment.
fn components(layout: &Layout) -> Vec<usize> {
    let mut comp: Vec<usize> = (0..layout.segments).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while comp[r] != r {
            r = comp[r];
        }
        comp[x] = r;
        r
    }
    for &(a, b, _) in &layout.links {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        comp[ra.max(rb)] = ra.min(rb);
    }
    (0..layout.segments).map(|s| find(&mut comp, s)).collect()
}

/// A compiled side with the endpoint label of each boundary edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSide {
    pub tangle: Tangle,
    pub inputs: Vec<Endpoint>,
    pub outputs: Vec<Endpoint>,
}

/// One oriented instance of a move. Boundary edges of both sides are listed
/// in the same endpoint order, so the correspondence is positional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveInstance {
    pub family: MoveFamily,
    pub variant: String,
    pub left: Tangle,
    pub right: Tangle,
    pub inputs: Vec<Endpoint>,
    pub outputs: Vec<Endpoint>,
}

/// The two sides of every shape in a family, before orientation.
pub fn move_shapes(family: MoveFamily) -> Vec<(String, Planar, Planar)> {
    use Piece::*;
    let overs = [("A", Over::A), ("B", Over::B)];
    let strand = |w: usize| Planar::new(w, vec![]);
    let mut shapes = Vec::new();
    match family {
        MoveFamily::R1 | MoveFamily::V1 => {
            for (name, over) in overs {
                let node = |at| if family == MoveFamily::R1 { Cross { at, over } } else { Virt { at } };
                shapes.push((format!("right-{name}"), Planar::new(1, vec![Cup { at: 1 }, node(0), Cap { at: 1 }]), strand(1)));
                shapes.push((format!("left-{name}"), Planar::new(1, vec![Cup { at: 0 }, node(1), Cap { at: 0 }]), strand(1)));
                if family == MoveFamily::V1 {
                    break;
                }
            }
        }
        MoveFamily::R2 => {
            for (name, first, second) in [("AB", Over::A, Over::B), ("BA", Over::B, Over::A)] {
                let left = Planar::new(2, vec![Cross { at: 0, over: first }, Cross { at: 0, over: second }]);
                shapes.push((name.to_owned(), left, strand(2)));
            }
        }
        MoveFamily::R3 => {
            for (name, over) in overs {
                let c = |at| Cross { at, over };
                shapes.push((name.to_owned(), Planar::new(3, vec![c(0), c(1), c(0)]), Planar::new(3, vec![c(1), c(0), c(1)])));
            }
        }
        MoveFamily::V2 => {
            shapes.push(("VV".to_owned(), Planar::new(2, vec![Virt { at: 0 }, Virt { at: 0 }]), strand(2)));
        }
        MoveFamily::V3 => {
            let v = |at| Virt { at };
            shapes.push(("VVV".to_owned(), Planar::new(3, vec![v(0), v(1), v(0)]), Planar::new(3, vec![v(1), v(0), v(1)])));
        }
        MoveFamily::V4 => {
            for (name, over) in overs {
                let left = Planar::new(3, vec![Cross { at: 0, over }, Virt { at: 1 }, Virt { at: 0 }]);
                let right = Planar::new(3, vec![Virt { at: 1 }, Virt { at: 0 }, Cross { at: 1, over }]);
                shapes.push((name.to_owned(), left, right));
            }
        }
        MoveFamily::T1 => {
            shapes.push((
                "left-bar".to_owned(),
                Planar::new(2, vec![Bar { at: 0 }, Virt { at: 0 }]),
                Planar::new(2, vec![Virt { at: 0 }, Bar { at: 1 }]),
            ));
            shapes.push((
                "right-bar".to_owned(),
                Planar::new(2, vec![Bar { at: 1 }, Virt { at: 0 }]),
                Planar::new(2, vec![Virt { at: 0 }, Bar { at: 0 }]),
            ));
        }
        MoveFamily::T2 => {
            shapes.push(("BB".to_owned(), Planar::new(1, vec![Bar { at: 0 }, Bar { at: 0 }]), strand(1)));
        }
        MoveFamily::T3 => {
            for (name, over) in overs {
                let left = Planar::new(
                    2,
                    vec![Bar { at: 0 }, Bar { at: 1 }, Cross { at: 0, over }, Bar { at: 0 }, Bar { at: 1 }],
                );
                let right = Planar::new(2, vec![Virt { at: 0 }, Cross { at: 0, over }, Virt { at: 0 }]);
                shapes.push((name.to_owned(), left, right));
            }
        }
    }
    shapes
}

/// Every shape of `family` under every orientation of its strands.
pub fn enumerate_move_instances(family: MoveFamily) -> Vec<MoveInstance> {
    let mut out = Vec::new();
    for (shape, left, right) in move_shapes(family) {
        let strands = left.strands();
        debug_assert_eq!(strands, right.strands());
        for orientation in 0..1u32 << strands.len() {
            let l = left.compile(orientation);
            let r = right.compile(orientation);
            debug_assert_eq!((&l.inputs, &l.outputs), (&r.inputs, &r.outputs));
            let bits: String = (0..strands.len())
                .map(|i| if orientation >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            out.push(MoveInstance {
                family,
                variant: format!("{shape}/{bits}"),
                left: l.tangle,
                right: r.tangle,
                inputs: l.inputs,
                outputs: l.outputs,
            });
        }
    }
    out
}

/// Incoming boundary colors → multiset of outgoing boundary colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryProfile {
    pub inputs: usize,
    pub outputs: usize,
    pub entries: BTreeMap<Vec<Element>, BTreeMap<Vec<Element>, u64>>,
}

impl BoundaryProfile {
    /// Total number of colorings over all incoming colors.
    pub fn mass(&self) -> u64 {
        self.entries.values().flat_map(|m| m.values()).sum()
    }

    /// Relational composition: the outputs of `self` feed the inputs of `next`.
    pub fn compose(&self, next: &BoundaryProfile) -> BoundaryProfile {
        assert_eq!(self.outputs, next.inputs, "arity mismatch");
        let entries = self
            .entries
            .iter()
            .map(|(input, mids)| {
                let mut outs: BTreeMap<Vec<Element>, u64> = BTreeMap::new();
                for (mid, k) in mids {
                    if let Some(finals) = next.entries.get(mid) {
                        for (out, j) in finals {
                            *outs.entry(out.clone()).or_insert(0) += k * j;
                        }
                    }
                }
                (input.clone(), outs)
            })
            .collect();
        BoundaryProfile { inputs: self.inputs, outputs: next.outputs, entries }
    }

    /// The first incoming coloring on which the two profiles differ.
    pub fn first_difference(&self, other: &BoundaryProfile) -> Option<Vec<Element>> {
        let empty = BTreeMap::new();
        self.entries
            .keys()
            .chain(other.entries.keys())
            .find(|k| self.entries.get(*k).unwrap_or(&empty) != other.entries.get(*k).unwrap_or(&empty))
            .cloned()
    }
}

/// Profile of a tangle under the node rules of `s`. No axiom check is made,
/// so violating structures can be probed.
pub fn boundary_profile(t: &Tangle, s: &VtStructure, limits: &Limits) -> Result<BoundaryProfile, SolverError> {
    let n = s.n();
    let rules = Rules {
        n,
        positive: s.r(),
        negative: s.r_inv(),
        virtual_: s.v(),
        bar: Some(s.t()),
    };
    let problem = Problem::from_graph(t, &rules);
    let ins = t.boundary_in();
    let outs = t.boundary_out();
    let mut entries = BTreeMap::new();
    let mut colors = vec![0usize; ins.len()];
    loop {
        let mut initial = vec![None; problem.vars()];
        let mut consistent = true;
        for (&e, &c) in ins.iter().zip(&colors) {
            // An edge listed twice (never produced, never consumed) must agree.
            if initial[e].is_some_and(|x| x != c as u32) {
                consistent = false;
            }
            initial[e] = Some(c as u32);
        }
        let mut found: BTreeMap<Vec<Element>, u64> = BTreeMap::new();
        if consistent {
            let mut visit = |sol: &[u32]| {
                let key = outs.iter().map(|&e| sol[e] as Element).collect();
                *found.entry(key).or_insert(0) += 1;
            };
            solver::solve(&problem, &initial, limits.node_budget, Some(&mut visit))?;
        }
        entries.insert(colors.clone(), found);

        let mut i = colors.len();
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            colors[i] += 1;
            if colors[i] < n {
                break false;
            }
            colors[i] = 0;
        };
        if done || n == 0 {
            break;
        }
    }
    Ok(BoundaryProfile { inputs: ins.len(), outputs: outs.len(), entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub endpoints: Vec<Endpoint>,
    pub colors: Vec<Element>,
    pub outputs: Vec<Endpoint>,
    pub left: Vec<(Vec<Element>, u64)>,
    pub right: Vec<(Vec<Element>, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantResult {
    pub id: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: MoveFamily,
    pub variants: Vec<VariantResult>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.variants.iter().all(|v| v.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveReport {
    pub families: Vec<FamilyReport>,
}

impl MoveReport {
    pub fn all_passed(&self) -> bool {
        self.families.iter().all(FamilyReport::passed)
    }

    pub fn failing_families(&self) -> Vec<MoveFamily> {
        self.families.iter().filter(|f| !f.passed()).map(|f| f.family).collect()
    }
}

pub fn check_family(family: MoveFamily, s: &VtStructure, limits: &Limits) -> Result<FamilyReport, SolverError> {
    let mut variants = Vec::new();
    for instance in enumerate_move_instances(family) {
        let left = boundary_profile(&instance.left, s, limits)?;
        let right = boundary_profile(&instance.right, s, limits)?;
        let witness = left.first_difference(&right).map(|colors| {
            let list = |p: &BoundaryProfile| {
                p.entries
                    .get(&colors)
                    .map(|m| m.iter().map(|(k, v)| (k.clone(), *v)).collect())
                    .unwrap_or_default()
            };
            Witness {
                endpoints: instance.inputs.clone(),
                outputs: instance.outputs.clone(),
                left: list(&left),
                right: list(&right),
                colors,
            }
        });
        variants.push(VariantResult { id: instance.variant, pass: witness.is_none(), witness });
    }
    Ok(FamilyReport { family, variants })
}

/// Checks all ten families.
pub fn check_move_invariance(s: &VtStructure, limits: &Limits) -> Result<MoveReport, SolverError> {
    let families = MoveFamily::ALL
        .into_iter()
        .map(|f| check_family(f, s, limits))
        .collect::<Result<_, _>>()?;
    Ok(MoveReport { families })
}
