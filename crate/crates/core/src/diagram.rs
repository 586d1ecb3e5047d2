//! Abstract oriented twisted-link diagrams.
//!
//! A diagram is a list of nodes joined by named edges. Port convention at
//! classical and virtual nodes: `(e1, e2)` are incoming, `(e3, e4)` outgoing,
//! the strand entering at `e1` leaves at `e4` and the one entering at `e2`
//! leaves at `e3`. A bar has one incoming and one outgoing edge.
//!
//! Text format, one node per line (`#` starts a comment):
//!
//! ```text
//! X+ e1 e2 e3 e4
//! X- e1 e2 e3 e4
//! V  e1 e2 e3 e4
//! B  e1 e2
//! O  k            # k free loops
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// A node of a diagram; ports are edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Classical { sign: Sign, ports: [usize; 4] },
    Virtual { ports: [usize; 4] },
    Bar { input: usize, output: usize },
}

impl Node {
    pub fn inputs(&self) -> &[usize] {
        match self {
            Node::Classical { ports, .. } | Node::Virtual { ports } => &ports[..2],
            Node::Bar { input, .. } => std::slice::from_ref(input),
        }
    }

    pub fn outputs(&self) -> &[usize] {
        match self {
            Node::Classical { ports, .. } | Node::Virtual { ports } => &ports[2..],
            Node::Bar { output, .. } => std::slice::from_ref(output),
        }
    }

    fn map_edges(&self, mut f: impl FnMut(usize) -> usize) -> Node {
        match *self {
            Node::Classical { sign, ports } => Node::Classical { sign, ports: ports.map(&mut f) },
            Node::Virtual { ports } => Node::Virtual { ports: ports.map(&mut f) },
            Node::Bar { input, output } => Node::Bar { input: f(input), output: f(output) },
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            Node::Classical { sign: Sign::Positive, .. } => "X+",
            Node::Classical { sign: Sign::Negative, .. } => "X-",
            Node::Virtual { .. } => "V",
            Node::Bar { .. } => "B",
        }
    }
}

/// Anything the coloring solver can read: edges plus nodes.
pub trait NodeGraph {
    fn edge_count(&self) -> usize;
    fn nodes(&self) -> &[Node];
    fn edge_name(&self, edge: usize) -> &str;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("edge `{0}` is used as an input port more than once")]
    DuplicateInput(String),
    #[error("edge `{0}` is used as an output port more than once")]
    DuplicateOutput(String),
    #[error("edge `{0}` is dangling (missing a producing or consuming node)")]
    Dangling(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("no free loop to edit")]
    NoFreeLoop,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("boundary lists do not match the unmatched ports")]
    BoundaryMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unknown node tag `{0}`")]
    UnknownTag(String),
    #[error("`{tag}` takes {expected} arguments, found {found}")]
    Arity {
        tag: String,
        expected: usize,
        found: usize,
    },
    #[error("bad free-loop count `{0}`")]
    BadCount(String),
    #[error(transparent)]
    Invalid(#[from] DiagramError),
}

/// Edge-name interning shared by the builders below.
#[derive(Default)]
struct Interner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }
}

/// Per-edge producer/consumer bookkeeping: `(produced, consumed)` node indices.
fn port_usage(edge_count: usize, nodes: &[Node]) -> Result<Vec<(Option<usize>, Option<usize>)>, (usize, bool)> {
    let mut usage = vec![(None, None); edge_count];
    for (i, node) in nodes.iter().enumerate() {
        for &e in node.inputs() {
            if usage[e].1.replace(i).is_some() {
                return Err((e, true));
            }
        }
        for &e in node.outputs() {
            if usage[e].0.replace(i).is_some() {
                return Err((e, false));
            }
        }
    }
    Ok(usage)
}

/// A closed diagram: every edge is produced once and consumed once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedDiagram {
    edges: Vec<String>,
    nodes: Vec<Node>,
    free_loops: usize,
}

/// Where an edit inserts its local picture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditSite {
    Edge(String),
    FreeLoop,
}

/// Which input port the strand uses when it enters a kink: the first
/// (`e1`, leaving through `e4`) or the second (`e2`, leaving through `e3`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KinkEntry {
    First,
    Second,
}

impl TwistedDiagram {
    /// Builds a diagram from named nodes and validates closedness.
    pub fn from_named<'a>(
        nodes: impl IntoIterator<Item = NamedNode<'a>>,
        free_loops: usize,
    ) -> Result<Self, DiagramError> {
        let mut interner = Interner::default();
        let nodes: Vec<Node> = nodes
            .into_iter()
            .map(|n| n.resolve(&mut interner))
            .collect();
        Self::from_parts(interner.names, nodes, free_loops)
    }

    fn from_parts(edges: Vec<String>, nodes: Vec<Node>, free_loops: usize) -> Result<Self, DiagramError> {
        let usage = port_usage(edges.len(), &nodes).map_err(|(e, input)| {
            if input {
                DiagramError::DuplicateInput(edges[e].clone())
            } else {
                DiagramError::DuplicateOutput(edges[e].clone())
            }
        })?;
        if let Some(e) = usage.iter().position(|u| u.0.is_none() || u.1.is_none()) {
            return Err(DiagramError::Dangling(edges[e].clone()));
        }
        Ok(Self { edges, nodes, free_loops })
    }

    /// Re-interns edges in first-appearance order, dropping unused names.
    fn rebuild(names: &[String], nodes: &[Node], free_loops: usize) -> Result<Self, DiagramError> {
        let mut interner = Interner::default();
        let nodes = nodes
            .iter()
            .map(|n| n.map_edges(|e| interner.intern(&names[e])))
            .collect();
        Self::from_parts(interner.names, nodes, free_loops)
    }

    pub fn empty() -> Self {
        Self { edges: Vec::new(), nodes: Vec::new(), free_loops: 0 }
    }

    pub fn free_loops_only(k: usize) -> Self {
        Self { edges: Vec::new(), nodes: Vec::new(), free_loops: k }
    }

    pub fn edges(&self) -> &[String] {
        &self.edges
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e == name)
    }

    pub fn classical_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Classical { .. })).count()
    }

    pub fn virtual_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Virtual { .. })).count()
    }

    pub fn bar_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Bar { .. })).count()
    }

    pub fn has_bars(&self) -> bool {
        self.bar_count() > 0
    }

    /// Canonical text: nodes in stored order, single spaces, trailing newline.
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        text.parse()
    }

    /// Renames edges `e0, e1, ...` in order of first appearance.
    pub fn canonical_relabel(&self) -> Self {
        let mut interner = Interner::default();
        let mut rename = vec![usize::MAX; self.edges.len()];
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                n.map_edges(|e| {
                    if rename[e] == usize::MAX {
                        rename[e] = interner.intern(&format!("e{}", interner.names.len()));
                    }
                    rename[e]
                })
            })
            .collect();
        Self { edges: interner.names, nodes, free_loops: self.free_loops }
    }

    /// Deletes every bar, merging its two edges. A bar whose edges close up
    /// on themselves becomes a free loop.
    pub fn remove_bars(&self) -> Self {
        let mut nodes = self.nodes.clone();
        let mut free_loops = self.free_loops;
        while let Some(i) = nodes.iter().position(|n| matches!(n, Node::Bar { .. })) {
            let Node::Bar { input, output } = nodes.remove(i) else { unreachable!() };
            if input == output {
                free_loops += 1;
                continue;
            }
            for n in &mut nodes {
                *n = n.map_edges(|e| if e == output { input } else { e });
            }
        }
        Self::rebuild(&self.edges, &nodes, free_loops).expect("removing bars preserves closedness")
    }

    /// Adds one unknotted, unlinked component.
    pub fn with_free_loop(&self) -> Self {
        Self { free_loops: self.free_loops + 1, ..self.clone() }
    }

    /// Inserts a classical kink (a Reidemeister I curl).
    pub fn with_kink(&self, site: &EditSite, sign: Sign, entry: KinkEntry) -> Result<Self, DiagramError> {
        self.insert_curl(site, entry, move |ports| Node::Classical { sign, ports })
    }

    /// Inserts a virtual kink (a V1 curl).
    pub fn with_virtual_kink(&self, site: &EditSite, entry: KinkEntry) -> Result<Self, DiagramError> {
        self.insert_curl(site, entry, |ports| Node::Virtual { ports })
    }

    /// Inserts two consecutive bars (a T2 pair).
    pub fn with_bar_pair(&self, site: &EditSite) -> Result<Self, DiagramError> {
        let mut edges = self.edges.clone();
        let mut nodes = self.nodes.clone();
        let mut free_loops = self.free_loops;
        let (from, to) = self.open_site(site, &mut edges, &mut nodes, &mut free_loops)?;
        let mid = self.fresh(&mut edges);
        nodes.push(Node::Bar { input: from, output: mid });
        nodes.push(Node::Bar { input: mid, output: to });
        Self::rebuild(&edges, &nodes, free_loops)
    }

    fn insert_curl(
        &self,
        site: &EditSite,
        entry: KinkEntry,
        make: impl Fn([usize; 4]) -> Node,
    ) -> Result<Self, DiagramError> {
        let mut edges = self.edges.clone();
        let mut nodes = self.nodes.clone();
        let mut free_loops = self.free_loops;
        let (from, to) = self.open_site(site, &mut edges, &mut nodes, &mut free_loops)?;
        let curl = self.fresh(&mut edges);
        let ports = match entry {
            KinkEntry::First => [from, curl, to, curl],
            KinkEntry::Second => [curl, from, curl, to],
        };
        nodes.push(make(ports));
        Self::rebuild(&edges, &nodes, free_loops)
    }

    /// Cuts the site open: returns `(from, to)` such that a new local picture
    /// consuming `from` and producing `to` restores closedness.
    fn open_site(
        &self,
        site: &EditSite,
        edges: &mut Vec<String>,
        nodes: &mut [Node],
        free_loops: &mut usize,
    ) -> Result<(usize, usize), DiagramError> {
        match site {
            EditSite::FreeLoop => {
                if *free_loops == 0 {
                    return Err(DiagramError::NoFreeLoop);
                }
                *free_loops -= 1;
                let e = self.fresh(edges);
                Ok((e, e))
            }
            EditSite::Edge(name) => {
                let e = self
                    .edge_index(name)
                    .ok_or_else(|| DiagramError::UnknownEdge(name.clone()))?;
                let out = self.fresh(edges);
                let consumer = nodes
                    .iter_mut()
                    .find(|n| n.inputs().contains(&e))
                    .expect("closed diagram consumes every edge");
                *consumer = match *consumer {
                    Node::Classical { sign, mut ports } => {
                        let slot = ports[..2].iter().position(|&p| p == e).unwrap();
                        ports[slot] = out;
                        Node::Classical { sign, ports }
                    }
                    Node::Virtual { mut ports } => {
                        let slot = ports[..2].iter().position(|&p| p == e).unwrap();
                        ports[slot] = out;
                        Node::Virtual { ports }
                    }
                    Node::Bar { output, .. } => Node::Bar { input: out, output },
                };
                Ok((e, out))
            }
        }
    }

    fn fresh(&self, edges: &mut Vec<String>) -> usize {
        let mut k = edges.len();
        let name = loop {
            let candidate = format!("k{k}");
            if !edges.contains(&candidate) {
                break candidate;
            }
            k += 1;
        };
        edges.push(name);
        edges.len() - 1
    }
}

impl NodeGraph for TwistedDiagram {
    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    fn edge_name(&self, edge: usize) -> &str {
        &self.edges[edge]
    }
}

/// A node with edges given by name, for building diagrams by hand.
#[derive(Clone, Copy, Debug)]
pub enum NamedNode<'a> {
    Classical(Sign, [&'a str; 4]),
    Virtual([&'a str; 4]),
    Bar(&'a str, &'a str),
}

impl NamedNode<'_> {
    fn resolve(&self, interner: &mut Interner) -> Node {
        match *self {
            NamedNode::Classical(sign, ports) => Node::Classical {
                sign,
                ports: ports.map(|p| interner.intern(p)),
            },
            NamedNode::Virtual(ports) => Node::Virtual { ports: ports.map(|p| interner.intern(p)) },
            NamedNode::Bar(a, b) => Node::Bar { input: interner.intern(a), output: interner.intern(b) },
        }
    }
}

impl fmt::Display for TwistedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for node in &self.nodes {
            f.write_str(node.tag())?;
            for &e in node.inputs().iter().chain(node.outputs()) {
                write!(f, " {}", self.edges[e])?;
            }
            writeln!(f)?;
        }
        if self.free_loops > 0 {
            writeln!(f, "O {}", self.free_loops)?;
        }
        Ok(())
    }
}

impl FromStr for TwistedDiagram {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut interner = Interner::default();
        let mut nodes = Vec::new();
        let mut node_lines = Vec::new();
        let mut first_line: Vec<usize> = Vec::new();
        let mut free_loops = 0usize;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut words = content.split_whitespace();
            let Some(tag) = words.next() else { continue };
            let args: Vec<&str> = words.collect();
            let arity = |expected: usize| {
                if args.len() == expected {
                    Ok(())
                } else {
                    Err(ParseError {
                        line,
                        kind: ParseErrorKind::Arity { tag: tag.to_owned(), expected, found: args.len() },
                    })
                }
            };
            let named = match tag {
                "X+" | "X-" | "V" => {
                    arity(4)?;
                    let ports = [args[0], args[1], args[2], args[3]];
                    match tag {
                        "X+" => NamedNode::Classical(Sign::Positive, ports),
                        "X-" => NamedNode::Classical(Sign::Negative, ports),
                        _ => NamedNode::Virtual(ports),
                    }
                }
                "B" => {
                    arity(2)?;
                    NamedNode::Bar(args[0], args[1])
                }
                "O" => {
                    arity(1)?;
                    let k: usize = args[0].parse().map_err(|_| ParseError {
                        line,
                        kind: ParseErrorKind::BadCount(args[0].to_owned()),
                    })?;
                    free_loops += k;
                    continue;
                }
                other => {
                    return Err(ParseError { line, kind: ParseErrorKind::UnknownTag(other.to_owned()) });
                }
            };
            let node = named.resolve(&mut interner);
            first_line.resize(interner.names.len(), line);
            nodes.push(node);
            node_lines.push(line);
            if let Err((e, input)) = port_usage(interner.names.len(), &nodes) {
                let name = interner.names[e].clone();
                let err = if input {
                    DiagramError::DuplicateInput(name)
                } else {
                    DiagramError::DuplicateOutput(name)
                };
                return Err(ParseError { line, kind: err.into() });
            }
        }

        let edges = interner.names;
        TwistedDiagram::from_parts(edges, nodes, free_loops).map_err(|err| {
            let line = match &err {
                DiagramError::Dangling(name) => first_line[interner.index[name]],
                _ => 0,
            };
            ParseError { line, kind: err.into() }
        })
    }
}

/// An open diagram with ordered boundary endpoints. Each edge is produced at
/// most once and consumed at most once; `boundary_in` lists the edges with no
/// producing node and `boundary_out` those with no consuming node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tangle {
    edges: Vec<String>,
    nodes: Vec<Node>,
    boundary_in: Vec<usize>,
    boundary_out: Vec<usize>,
}

impl Tangle {
    pub fn new(
        edges: Vec<String>,
        nodes: Vec<Node>,
        boundary_in: Vec<usize>,
        boundary_out: Vec<usize>,
    ) -> Result<Self, DiagramError> {
        let usage = port_usage(edges.len(), &nodes).map_err(|(e, input)| {
            if input {
                DiagramError::DuplicateInput(edges[e].clone())
            } else {
                DiagramError::DuplicateOutput(edges[e].clone())
            }
        })?;
        let mut unproduced: Vec<usize> = (0..edges.len()).filter(|&e| usage[e].0.is_none()).collect();
        let mut unconsumed: Vec<usize> = (0..edges.len()).filter(|&e| usage[e].1.is_none()).collect();
        let (mut bin, mut bout) = (boundary_in.clone(), boundary_out.clone());
        bin.sort_unstable();
        bout.sort_unstable();
        unproduced.sort_unstable();
        unconsumed.sort_unstable();
        if bin != unproduced || bout != unconsumed {
            return Err(DiagramError::BoundaryMismatch);
        }
        Ok(Self { edges, nodes, boundary_in, boundary_out })
    }

    pub fn boundary_in(&self) -> &[usize] {
        &self.boundary_in
    }

    pub fn boundary_out(&self) -> &[usize] {
        &self.boundary_out
    }

    pub fn edges(&self) -> &[String] {
        &self.edges
    }
}

impl NodeGraph for Tangle {
    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    fn edge_name(&self, edge: usize) -> &str {
        &self.edges[edge]
    }
}

/// Names of the distinguished edges of [`make_fm`].
pub mod fm_edges {
    pub const X: &str = "x";
    pub const Y: &str = "y";
    pub const Z: &str = "z";
    pub const W: &str = "w";
    pub const TZ: &str = "tz";
    pub const TW: &str = "tw";
}

/// The non-orientable virtual m-foil `F_m`.
///
/// `m` positive crossings carry the pair `(x, y)` to `(z, w)`, crossing `i`
/// taking `(p_{i-1}, q_{i-1})` to `(p_i, q_i)`. Bars sit on `z` and `w`, and
/// a virtual crossing takes the two bar outputs back to `(x, y)`.
pub fn make_fm(m: usize) -> Result<TwistedDiagram, DiagramError> {
    use fm_edges::*;
    if m == 0 {
        return Err(DiagramError::InvalidParameter("m must be at least 1".into()));
    }
    let name = |prefix: &str, i: usize| -> String {
        match (prefix, i) {
            ("p", 0) => X.to_owned(),
            ("q", 0) => Y.to_owned(),
            ("p", i) if i == m => Z.to_owned(),
            ("q", i) if i == m => W.to_owned(),
            (p, i) => format!("{p}{i}"),
        }
    };
    let names: Vec<[String; 4]> = (1..=m)
        .map(|i| [name("p", i - 1), name("q", i - 1), name("p", i), name("q", i)])
        .collect();
    let mut nodes: Vec<NamedNode> = names
        .iter()
        .map(|[a, b, c, d]| NamedNode::Classical(Sign::Positive, [a, b, c, d]))
        .collect();
    nodes.push(NamedNode::Bar(Z, TZ));
    nodes.push(NamedNode::Bar(W, TW));
    nodes.push(NamedNode::Virtual([TZ, TW, X, Y]));
    TwistedDiagram::from_named(nodes, 0)
}

/// The closure of the 2-braid `σ^k` with positive crossings (`k = 3` is a trefoil).
pub fn braid_closure(k: usize) -> Result<TwistedDiagram, DiagramError> {
    if k == 0 {
        return Ok(TwistedDiagram::free_loops_only(2));
    }
    let names: Vec<[String; 4]> = (0..k)
        .map(|i| {
            let j = (i + 1) % k;
            [format!("a{i}"), format!("b{i}"), format!("a{j}"), format!("b{j}")]
        })
        .collect();
    TwistedDiagram::from_named(
        names.iter().map(|[a, b, c, d]| NamedNode::Classical(Sign::Positive, [a, b, c, d])),
        0,
    )
}
