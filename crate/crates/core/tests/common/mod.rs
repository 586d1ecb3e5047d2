//! Shared corpus for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use itertools::Itertools;
use twistcolor_core::algebra::{Biquandle, ElementMap, FiniteQuandle, PairMap};
use twistcolor_core::diagram::{make_fm, EditSite, KinkEntry, NamedNode, Node, NodeGraph, Sign, TwistedDiagram};
use twistcolor_core::structures::{standard_twisted_product, twisted_product, VtStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Pos,
    Neg,
    Virt,
    Bar,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Pos, Kind::Neg, Kind::Virt, Kind::Bar];

    fn arity(self) -> usize {
        if self == Kind::Bar {
            1
        } else {
            2
        }
    }
}

/// Builds a closed diagram from node kinds and a matching of output ports to
/// input ports: output port `i` (in node order) feeds input port `matching[i]`.
pub fn from_matching(kinds: &[Kind], matching: &[usize], free_loops: usize) -> TwistedDiagram {
    let names: Vec<String> = (0..matching.len()).map(|i| format!("e{i}")).collect();
    // Edge feeding each input port.
    let mut feeding = vec![0; matching.len()];
    for (out, &inp) in matching.iter().enumerate() {
        feeding[inp] = out;
    }
    let mut in_port = 0;
    let mut out_port = 0;
    let mut nodes = Vec::new();
    for &k in kinds {
        let a = k.arity();
        let ins: Vec<&str> = (0..a).map(|j| names[feeding[in_port + j]].as_str()).collect();
        let outs: Vec<&str> = (0..a).map(|j| names[out_port + j].as_str()).collect();
        in_port += a;
        out_port += a;
        nodes.push(match k {
            Kind::Pos => NamedNode::Classical(Sign::Positive, [ins[0], ins[1], outs[0], outs[1]]),
            Kind::Neg => NamedNode::Classical(Sign::Negative, [ins[0], ins[1], outs[0], outs[1]]),
            Kind::Virt => NamedNode::Virtual([ins[0], ins[1], outs[0], outs[1]]),
            Kind::Bar => NamedNode::Bar(ins[0], outs[0]),
        });
    }
    TwistedDiagram::from_named(nodes, free_loops).expect("a perfect matching closes the diagram")
}

/// Every closed diagram with at most `max_nodes` nodes (node kinds taken as
/// a multiset, all port matchings), plus a few with free loops.
pub fn all_small_diagrams(max_nodes: usize) -> Vec<TwistedDiagram> {
    let mut out = vec![
        TwistedDiagram::empty(),
        TwistedDiagram::free_loops_only(1),
        TwistedDiagram::free_loops_only(2),
    ];
    for size in 1..=max_nodes {
        for kinds in Kind::ALL.iter().copied().combinations_with_replacement(size) {
            let ports: usize = kinds.iter().map(|k| k.arity()).sum();
            for matching in (0..ports).permutations(ports) {
                let loops = usize::from(size == 1 && matching[0] == 0);
                out.push(from_matching(&kinds, &matching, loops));
            }
        }
    }
    out
}

/// A braid generator acting on positions `i`, `i + 1`.
#[derive(Clone, Copy, Debug)]
pub enum Gen {
    Pos(usize),
    Neg(usize),
    Virt(usize),
}

/// Closure of a braid word on `strands` strands. Strands that no generator
/// touches become free loops.
pub fn braid_closure(strands: usize, word: &[Gen]) -> TwistedDiagram {
    let mut current: Vec<String> = (0..strands).map(|i| format!("s{i}")).collect();
    let mut nodes: Vec<(Gen, [String; 4])> = Vec::new();
    for (k, g) in word.iter().enumerate() {
        let i = match *g {
            Gen::Pos(i) | Gen::Neg(i) | Gen::Virt(i) => i,
        };
        // The strand entering at x1 (left) leaves at x4 (right).
        let (x3, x4) = (format!("c{k}l"), format!("c{k}r"));
        nodes.push((*g, [current[i].clone(), current[i + 1].clone(), x3.clone(), x4.clone()]));
        current[i] = x3;
        current[i + 1] = x4;
    }
    let rename: HashMap<String, String> = current
        .iter()
        .enumerate()
        .map(|(i, name)| (name.clone(), format!("s{i}")))
        .collect();
    let fix = |s: &String| rename.get(s).cloned().unwrap_or_else(|| s.clone());
    let nodes: Vec<(Gen, [String; 4])> = nodes.iter().map(|(g, p)| (*g, p.clone().map(|s| fix(&s)))).collect();
    let free = (0..strands).filter(|&i| current[i] == format!("s{i}")).count();
    let named = nodes.iter().map(|(g, p)| {
        let ports = [p[0].as_str(), p[1].as_str(), p[2].as_str(), p[3].as_str()];
        match g {
            Gen::Pos(_) => NamedNode::Classical(Sign::Positive, ports),
            Gen::Neg(_) => NamedNode::Classical(Sign::Negative, ports),
            Gen::Virt(_) => NamedNode::Virtual(ports),
        }
    });
    TwistedDiagram::from_named(named, free).expect("braid closures are closed")
}

pub fn trefoil() -> TwistedDiagram {
    braid_closure(2, &[Gen::Pos(0), Gen::Pos(0), Gen::Pos(0)])
}

/// Bar-free diagrams: free loops, torus links, the trefoil, bar-free m-foils,
/// virtual braid closures and virtually kinked variants.
pub fn bar_free_corpus() -> Vec<(String, TwistedDiagram)> {
    let mut out = vec![
        ("one free loop".to_owned(), TwistedDiagram::free_loops_only(1)),
        ("two free loops".to_owned(), TwistedDiagram::free_loops_only(2)),
        ("trefoil".to_owned(), trefoil()),
        ("hopf link".to_owned(), braid_closure(2, &[Gen::Pos(0), Gen::Pos(0)])),
        ("torus (2,4)".to_owned(), braid_closure(2, &[Gen::Pos(0); 4])),
        ("figure eight".to_owned(), braid_closure(3, &[Gen::Pos(0), Gen::Neg(1), Gen::Pos(0), Gen::Neg(1)])),
        ("virtual trefoil".to_owned(), braid_closure(2, &[Gen::Pos(0), Gen::Pos(0), Gen::Virt(0)])),
        (
            "virtual 3-braid".to_owned(),
            braid_closure(3, &[Gen::Pos(0), Gen::Virt(1), Gen::Neg(0), Gen::Pos(1), Gen::Virt(0)]),
        ),
    ];
    for m in 1..=4 {
        out.push((format!("m-foil {m} without bars"), make_fm(m).unwrap().remove_bars()));
    }
    let t = trefoil();
    let site = EditSite::Edge(t.edges()[0].clone());
    out.push(("trefoil with virtual kink".to_owned(), t.with_virtual_kink(&site, KinkEntry::First).unwrap()));
    let f = make_fm(2).unwrap().remove_bars();
    let site = EditSite::Edge(f.edges()[1].clone());
    out.push(("m-foil 2 without bars, virtual kink".to_owned(), f.with_virtual_kink(&site, KinkEntry::Second).unwrap()));
    out
}

/// Diagrams with bars for the invariance checks.
pub fn twisted_corpus() -> Vec<(String, TwistedDiagram)> {
    let mut out = bar_free_corpus();
    for m in 1..=3 {
        out.push((format!("m-foil {m}"), make_fm(m).unwrap()));
    }
    out.push(("bar on a loop".to_owned(), TwistedDiagram::parse("B p p\n").unwrap()));
    out.push(("bar and virtual".to_owned(), TwistedDiagram::parse("B a b\nV b c c d\nB d a\n").unwrap()));
    out
}

/// Verified structures on carriers of size at most 4.
pub fn small_structures() -> Vec<(String, VtStructure)> {
    let d = |n| FiniteQuandle::dihedral(n).unwrap();
    let mut out = vec![
        ("B(dihedral 1)".to_owned(), standard_twisted_product(&d(1))),
        ("B(dihedral 2)".to_owned(), standard_twisted_product(&d(2))),
    ];
    let trivial2 = Biquandle::derived(&d(2));
    let swap = ElementMap::new(2, vec![1, 0]).unwrap();
    let id = ElementMap::identity(2);
    out.push(("twisted(trivial 2, swap, id)".to_owned(), twisted_product(&trivial2, &swap, &id).unwrap()));
    out.push(("twisted(trivial 2, swap, swap)".to_owned(), twisted_product(&trivial2, &swap, &swap).unwrap()));
    for n in 2..=3 {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(0, 1);
        let s = VtStructure::from_tables(PairMap::transposition(n), PairMap::transposition(n), ElementMap::new(n, images).unwrap())
            .unwrap();
        assert!(s.is_verified());
        out.push((format!("trivial {n} with swapped T"), s));
    }
    out
}

/// Independent exhaustive count: every assignment of edge and free-loop
/// colors, checked node by node against the raw tables.
pub fn naive_count(d: &TwistedDiagram, s: &VtStructure) -> u64 {
    let n = s.n();
    let e = d.edge_count();
    let total = e + d.free_loops();
    let mut count = 0u64;
    let mut colors = vec![0usize; total];
    if n == 0 {
        return u64::from(total == 0);
    }
    loop {
        let ok = d.nodes().iter().all(|node| match *node {
            Node::Classical { sign, ports } => {
                let (x3, x4) = (colors[ports[2]], colors[ports[3]]);
                match sign {
                    Sign::Positive => s.r().apply(colors[ports[0]], colors[ports[1]]) == (x3, x4),
                    Sign::Negative => s.r().apply(x3, x4) == (colors[ports[0]], colors[ports[1]]),
                }
            }
            Node::Virtual { ports } => s.v().apply(colors[ports[0]], colors[ports[1]]) == (colors[ports[2]], colors[ports[3]]),
            Node::Bar { input, output } => s.t().apply(colors[input]) == colors[output],
        });
        count += u64::from(ok);
        let mut i = total;
        loop {
            if i == 0 {
                return count;
            }
            i -= 1;
            colors[i] += 1;
            if colors[i] < n {
                break;
            }
            colors[i] = 0;
        }
    }
}

/// `a^{(ba)^m}` in a dihedral quandle of order n, by the closed form `a + 2m(a − b)`.
pub fn dihedral_alternating(n: usize, a: usize, b: usize, m: usize) -> usize {
    let n = n as i64;
    (a as i64 + 2 * m as i64 * (a as i64 - b as i64)).rem_euclid(n) as usize
}
