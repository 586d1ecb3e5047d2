//! Exact counting of solutions to table constraints over one finite domain.
//!
//! Every diagram node becomes a constraint whose allowed tuples are the
//! graph of its rule. Search alternates propagation (a constraint with one
//! remaining candidate tuple fixes its variables) with branching on the
//! constraint that has the fewest candidates.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::algebra::{ElementMap, PairMap};
use crate::diagram::{Node, NodeGraph, Sign};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("search exceeded the node budget of {0}")]
    Budget(u64),
}

/// Bucketed tuple ids.
#[derive(Debug)]
struct Csr {
    offsets: Vec<u32>,
    ids: Vec<u32>,
}

impl Csr {
    fn build(buckets: usize, keys: impl Iterator<Item = usize> + Clone) -> Self {
        let mut offsets = vec![0u32; buckets + 1];
        for k in keys.clone() {
            offsets[k + 1] += 1;
        }
        for i in 0..buckets {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut ids = vec![0u32; offsets[buckets] as usize];
        for (t, k) in keys.enumerate() {
            ids[fill[k] as usize] = t as u32;
            fill[k] += 1;
        }
        Self { offsets, ids }
    }

    fn bucket(&self, k: usize) -> &[u32] {
        &self.ids[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }
}

/// The allowed tuples of one constraint, indexed by single ports and port pairs.
#[derive(Debug)]
struct Relation {
    arity: usize,
    tuples: Vec<u32>,
    single: Vec<Csr>,
    pairs: Vec<((usize, usize), Csr)>,
}

impl Relation {
    fn new(n: usize, arity: usize, tuples: Vec<u32>) -> Self {
        let count = tuples.len() / arity.max(1);
        let at = |t: usize, p: usize| tuples[t * arity + p] as usize;
        let single = (0..arity)
            .map(|p| Csr::build(n, (0..count).map(move |t| at(t, p))))
            .collect();
        let mut pairs = Vec::new();
        for p in 0..arity {
            for q in p + 1..arity {
                pairs.push(((p, q), Csr::build(n * n, (0..count).map(move |t| at(t, p) * n + at(t, q)))));
            }
        }
        Self { arity, tuples, single, pairs }
    }

    fn len(&self) -> usize {
        self.tuples.len() / self.arity.max(1)
    }

    fn tuple(&self, t: u32) -> &[u32] {
        let t = t as usize;
        &self.tuples[t * self.arity..(t + 1) * self.arity]
    }
}

#[derive(Debug)]
struct Constraint {
    relation: Rc<Relation>,
    vars: Vec<usize>,
}

/// A node rule for each node kind.
pub(crate) struct Rules<'a> {
    pub n: usize,
    pub positive: &'a PairMap,
    pub negative: &'a PairMap,
    pub virtual_: &'a PairMap,
    pub bar: Option<&'a ElementMap>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Positive,
    Negative,
    Virtual,
    Bar,
}

/// A compiled constraint system over the edges of a diagram or tangle.
#[derive(Debug)]
pub(crate) struct Problem {
    n: usize,
    vars: usize,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
}

impl Problem {
    /// Panics if the graph has bars and `rules.bar` is `None`; callers check first.
    pub fn from_graph(graph: &impl NodeGraph, rules: &Rules) -> Self {
        let n = rules.n;
        let mut cache: HashMap<(Kind, Vec<usize>), Rc<Relation>> = HashMap::new();
        let mut constraints = Vec::new();
        for node in graph.nodes() {
            let (kind, vars): (Kind, Vec<usize>) = match node {
                Node::Classical { sign: Sign::Positive, ports } => (Kind::Positive, ports.to_vec()),
                Node::Classical { sign: Sign::Negative, ports } => (Kind::Negative, ports.to_vec()),
                Node::Virtual { ports } => (Kind::Virtual, ports.to_vec()),
                Node::Bar { input, output } => (Kind::Bar, vec![*input, *output]),
            };
            // Ports sharing a variable must carry equal values.
            let pattern: Vec<usize> = vars
                .iter()
                .map(|v| vars.iter().position(|w| w == v).unwrap())
                .collect();
            let relation = cache
                .entry((kind, pattern.clone()))
                .or_insert_with(|| {
                    let mut tuples = Vec::new();
                    let mut push = |t: &[usize]| {
                        if pattern.iter().enumerate().all(|(p, &q)| t[p] == t[q]) {
                            tuples.extend(t.iter().map(|&x| x as u32));
                        }
                    };
                    match kind {
                        Kind::Bar => {
                            let t = rules.bar.expect("bar rule required");
                            for x in 0..n {
                                push(&[x, t.apply(x)]);
                            }
                        }
                        _ => {
                            let map = match kind {
                                Kind::Positive => rules.positive,
                                Kind::Negative => rules.negative,
                                _ => rules.virtual_,
                            };
                            for ((a, b), (c, d)) in map.iter() {
                                push(&[a, b, c, d]);
                            }
                        }
                    }
                    Rc::new(Relation::new(n, vars.len(), tuples))
                })
                .clone();
            constraints.push(Constraint { relation, vars });
        }
        let vars = graph.edge_count();
        let mut watch = vec![Vec::new(); vars];
        for (c, con) in constraints.iter().enumerate() {
            for &v in &con.vars {
                if !watch[v].contains(&c) {
                    watch[v].push(c);
                }
            }
        }
        Self { n, vars, constraints, watch }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }
}

/// Search state for one solve call.
struct Search<'p, 'v> {
    problem: &'p Problem,
    values: Vec<Option<u32>>,
    trail: Vec<usize>,
    visited: u64,
    budget: u64,
    visitor: Option<&'v mut dyn FnMut(&[u32])>,
    free_vars: Vec<usize>,
}

impl Search<'_, '_> {
    fn candidates(&self, c: usize, out: &mut Vec<u32>) {
        out.clear();
        let con = &self.problem.constraints[c];
        let rel = &con.relation;
        let n = self.problem.n;
        let fixed: Vec<(usize, u32)> = con
            .vars
            .iter()
            .enumerate()
            .filter_map(|(p, &v)| self.values[v].map(|x| (p, x)))
            .collect();
        let base: Box<dyn Iterator<Item = u32>> = match fixed.as_slice() {
            [] => Box::new(0..rel.len() as u32),
            [(p, x)] => Box::new(rel.single[*p].bucket(*x as usize).iter().copied()),
            [(p, x), (q, y), ..] => {
                let csr = &rel.pairs.iter().find(|(k, _)| *k == (*p, *q)).unwrap().1;
                Box::new(csr.bucket(*x as usize * n + *y as usize).iter().copied())
            }
        };
        let rest = if fixed.len() > 2 { &fixed[2..] } else { &[][..] };
        out.extend(base.filter(|&t| {
            let tuple = rel.tuple(t);
            rest.iter().all(|&(p, x)| tuple[p] == x)
        }));
    }

    fn assign(&mut self, v: usize, x: u32) {
        self.values[v] = Some(x);
        self.trail.push(v);
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.values[v] = None;
        }
    }

    fn is_settled(&self, c: usize) -> bool {
        self.problem.constraints[c].vars.iter().all(|&v| self.values[v].is_some())
    }

    /// Returns false on a contradiction.
    fn propagate(&mut self, mut queue: Vec<usize>, scratch: &mut Vec<u32>) -> bool {
        let mut queued = vec![false; self.problem.constraints.len()];
        for &c in &queue {
            queued[c] = true;
        }
        while let Some(c) = queue.pop() {
            queued[c] = false;
            self.candidates(c, scratch);
            match scratch.len() {
                0 => return false,
                1 => {
                    let con = &self.problem.constraints[c];
                    let tuple = con.relation.tuple(scratch[0]).to_vec();
                    for (p, &v) in con.vars.clone().iter().enumerate() {
                        if self.values[v].is_none() {
                            self.assign(v, tuple[p]);
                            for &d in &self.problem.watch[v] {
                                if !queued[d] {
                                    queued[d] = true;
                                    queue.push(d);
                                }
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        true
    }

    fn search(&mut self, queue: Vec<usize>) -> Result<BigUint, SolverError> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(SolverError::Budget(self.budget));
        }
        let mark = self.trail.len();
        let mut scratch = Vec::new();
        if !self.propagate(queue, &mut scratch) {
            self.undo(mark);
            return Ok(BigUint::zero());
        }

        let mut best: Option<(usize, Vec<u32>)> = None;
        for c in 0..self.problem.constraints.len() {
            if self.is_settled(c) {
                continue;
            }
            self.candidates(c, &mut scratch);
            if best.as_ref().is_none_or(|(_, b)| scratch.len() < b.len()) {
                best = Some((c, scratch.clone()));
            }
        }

        let result = match best {
            None => self.leaf(),
            Some((c, cands)) => {
                let mut total = BigUint::zero();
                let con_vars = self.problem.constraints[c].vars.clone();
                let rel = self.problem.constraints[c].relation.clone();
                for t in cands {
                    let inner = self.trail.len();
                    let tuple = rel.tuple(t);
                    let mut touched = Vec::new();
                    for (p, &v) in con_vars.iter().enumerate() {
                        if self.values[v].is_none() {
                            self.assign(v, tuple[p]);
                            touched.extend(self.problem.watch[v].iter().copied());
                        }
                    }
                    touched.sort_unstable();
                    touched.dedup();
                    total += self.search(touched)?;
                    self.undo(inner);
                }
                total
            }
        };
        self.undo(mark);
        Ok(result)
    }

    /// All constraints are settled; unconstrained variables range freely.
    fn leaf(&mut self) -> BigUint {
        let free: Vec<usize> = self.free_vars.iter().copied().filter(|&v| self.values[v].is_none()).collect();
        if let Some(visit) = self.visitor.as_mut() {
            let n = self.problem.n as u32;
            let mut current: Vec<u32> = self.values.iter().map(|x| x.unwrap_or(0)).collect();
            if n > 0 || free.is_empty() {
                loop {
                    visit(&current);
                    // Odometer over the free variables, last one fastest.
                    let mut i = free.len();
                    let done = loop {
                        if i == 0 {
                            break true;
                        }
                        i -= 1;
                        current[free[i]] += 1;
                        if current[free[i]] < n {
                            break false;
                        }
                        current[free[i]] = 0;
                    };
                    if done {
                        break;
                    }
                }
            }
        }
        BigUint::from(self.problem.n).pow(free.len() as u32)
    }
}

/// Counts the extensions of `initial` satisfying every constraint. When a
/// visitor is given, each solution is passed to it in a deterministic order.
pub(crate) fn solve(
    problem: &Problem,
    initial: &[Option<u32>],
    budget: u64,
    visitor: Option<&mut dyn FnMut(&[u32])>,
) -> Result<BigUint, SolverError> {
    assert_eq!(initial.len(), problem.vars);
    let free_vars = (0..problem.vars).filter(|&v| problem.watch[v].is_empty()).collect();
    let mut search = Search {
        problem,
        values: initial.to_vec(),
        trail: Vec::new(),
        visited: 0,
        budget,
        visitor,
        free_vars,
    };
    if problem.n == 0 && problem.vars > 0 {
        return Ok(BigUint::zero());
    }
    let queue = (0..problem.constraints.len()).collect();
    search.search(queue)
}

pub(crate) fn power(n: usize, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    BigUint::from(n).pow(k as u32)
}
