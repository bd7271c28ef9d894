//! Graphs, frameworks, Laman checks and Henneberg constructions.
//!
//! Vertices are labeled `1..=n`. Edges are stored normalized as `(min, max)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::Signed;
use serde::Serialize;

use crate::rational::Rational;

pub type Edge = (usize, usize);

/// Normalized edge between two labels.
pub fn edge(a: usize, b: usize) -> Edge {
    (a.min(b), a.max(b))
}

/// Largest graph accepted by the exhaustive subset oracle.
pub const ORACLE_MAX_VERTICES: usize = 12;
/// Largest graph accepted by the permutation-based canonical form.
pub const CANONICAL_MAX_VERTICES: usize = 8;
/// Largest vertex count for which the Laman catalog is generated.
pub const CATALOG_MAX_VERTICES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex label {label} outside 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is not Laman")]
    NotLaman,
    #[error("{n} vertices exceeds the limit of {cap} for {what}")]
    TooLarge { what: &'static str, n: usize, cap: usize },
    #[error("step {step}: {reason}")]
    InvalidStep { step: usize, reason: String },
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("edge {0}-{1} has no length")]
    MissingLength(usize, usize),
    #[error("edge {0}-{1} has non-positive length")]
    NonPositiveLength(usize, usize),
    #[error("length given for non-edge {0}-{1}")]
    UnknownEdge(usize, usize),
    #[error("no Henneberg sequence exists with the requested constraints")]
    NoSequence,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::LabelOutOfRange { label: v, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let e = edge(a, b);
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Self { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Applies `map[v - 1] = new label of v`; `map` must be a permutation of `1..=n`.
    pub fn relabeled(&self, map: &[usize]) -> Graph {
        let edges = self.edges.iter().map(|&(a, b)| edge(map[a - 1], map[b - 1])).collect();
        Graph { n: self.n, edges }
    }

    /// The subgraph induced by `keep` (labels, ascending), relabeled `1..=keep.len()`.
    fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![0usize; self.n + 1];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i + 1;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| pos[a] != 0 && pos[b] != 0)
            .map(|&(a, b)| edge(pos[a], pos[b]))
            .collect();
        Graph { n: keep.len(), edges }
    }
}

pub fn triangle() -> Graph {
    Graph::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap()
}

/// `K_{3,3}` with sides `{1,3,5}` and `{2,4,6}`, so that `{1,2}` is an edge.
pub fn k33() -> Graph {
    let mut edges = Vec::new();
    for a in [1, 3, 5] {
        for b in [2, 4, 6] {
            edges.push((a, b));
        }
    }
    Graph::new(6, edges).unwrap()
}

/// The six-vertex "Desargues" Laman graph: two triangles `{1,2,3}`, `{4,5,6}`
/// joined by the matching `1-4, 2-5, 3-6`.
pub fn desargues() -> Graph {
    Graph::new(6, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (1, 4), (2, 5), (3, 6)]).unwrap()
}

/// A graph together with positive edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Framework {
    graph: Graph,
    lengths: BTreeMap<Edge, Rational>,
}

impl Framework {
    pub fn new(graph: Graph, lengths: BTreeMap<Edge, Rational>) -> Result<Self, GraphError> {
        for (&(a, b), l) in &lengths {
            if !graph.has_edge(a, b) {
                return Err(GraphError::UnknownEdge(a, b));
            }
            if !l.is_positive() {
                return Err(GraphError::NonPositiveLength(a, b));
            }
        }
        if let Some((a, b)) = graph.edges().find(|e| !lengths.contains_key(e)) {
            return Err(GraphError::MissingLength(a, b));
        }
        Ok(Self { graph, lengths })
    }

    /// Every edge gets the same length.
    pub fn uniform(graph: Graph, length: Rational) -> Result<Self, GraphError> {
        let lengths = graph.edges().map(|e| (e, length.clone())).collect();
        Self::new(graph, lengths)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn length(&self, a: usize, b: usize) -> Option<&Rational> {
        self.lengths.get(&edge(a, b))
    }

    pub fn lengths(&self) -> &BTreeMap<Edge, Rational> {
        &self.lengths
    }

    pub fn relabeled(&self, map: &[usize]) -> Framework {
        let lengths = self.lengths.iter().map(|(&(a, b), l)| (edge(map[a - 1], map[b - 1]), l.clone())).collect();
        Framework { graph: self.graph.relabeled(map), lengths }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LamanCheck {
    pub laman: bool,
    /// A vertex subset spanning more than `2k - 3` edges, when one was found.
    pub witness: Option<Vec<usize>>,
}

/// (2,3)-pebble game. Each vertex holds two pebbles; an edge is accepted when
/// four pebbles can be gathered on its endpoints.
struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
}

impl PebbleGame {
    fn new(n: usize) -> Self {
        Self { pebbles: vec![2; n + 1], out: vec![Vec::new(); n + 1] }
    }

    /// Moves one free pebble onto `target` without taking it from `keep`.
    fn find_pebble(&mut self, target: usize, keep: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[target] = true;
        let mut stack = vec![target];
        let mut found = None;
        while let Some(x) = stack.pop() {
            if x != target && x != keep && self.pebbles[x] > 0 {
                found = Some(x);
                break;
            }
            for &y in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let Some(w) = found else {
            return false;
        };
        let mut y = w;
        while y != target {
            let x = parent[y];
            let pos = self.out[x].iter().position(|&z| z == y).unwrap();
            self.out[x].swap_remove(pos);
            self.out[y].push(x);
            y = x;
        }
        self.pebbles[w] -= 1;
        self.pebbles[target] += 1;
        true
    }

    fn reach(&self, starts: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.pebbles.len()];
        let mut stack: Vec<usize> = starts.to_vec();
        for &s in starts {
            seen[s] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (1..self.pebbles.len()).filter(|&v| seen[v]).collect()
    }

    /// Accepts the edge or returns a rigid vertex set that already spans `2k - 3` edges.
    fn insert(&mut self, u: usize, v: usize) -> Result<(), Vec<usize>> {
        while self.pebbles[u] < 2 {
            if !self.find_pebble(u, v) {
                return Err(self.reach(&[u, v]));
            }
        }
        while self.pebbles[v] < 2 {
            if !self.find_pebble(v, u) {
                return Err(self.reach(&[u, v]));
            }
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        Ok(())
    }
}

pub fn check_laman(g: &Graph) -> LamanCheck {
    let mut game = PebbleGame::new(g.n);
    let mut witness = None;
    for (a, b) in g.edges() {
        if let Err(rigid) = game.insert(a, b) {
            witness = Some(rigid);
            break;
        }
    }
    let count_ok = g.n >= 2 && g.edge_count() == 2 * g.n - 3;
    LamanCheck { laman: witness.is_none() && count_ok, witness }
}

/// Exhaustive subset check of the Laman count conditions.
pub fn laman_oracle(g: &Graph) -> Result<bool, GraphError> {
    if g.n > ORACLE_MAX_VERTICES {
        return Err(GraphError::TooLarge { what: "subset oracle", n: g.n, cap: ORACLE_MAX_VERTICES });
    }
    if g.n < 2 || g.edge_count() != 2 * g.n - 3 {
        return Ok(false);
    }
    let masks: Vec<u32> = g.edges().map(|(a, b)| (1 << (a - 1)) | (1 << (b - 1))).collect();
    for subset in 0u32..(1 << g.n) {
        let k = subset.count_ones() as usize;
        if k < 2 {
            continue;
        }
        let spanned = masks.iter().filter(|&&m| m & subset == m).count();
        if spanned > 2 * k - 3 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum HennebergStep {
    /// New vertex joined to `a` and `b`.
    StepI { a: usize, b: usize },
    /// New vertex joined to `a`, `b`, `c`; the edge `removed` among them is deleted.
    StepII { a: usize, b: usize, c: usize, removed: Edge },
}

/// Steps applied to the triangle on `1, 2, 3`; step `t` (1-based) creates vertex `t + 3`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HennebergSequence {
    pub steps: Vec<HennebergStep>,
}

impl HennebergSequence {
    pub fn new(steps: Vec<HennebergStep>) -> Self {
        Self { steps }
    }

    pub fn vertex_count(&self) -> usize {
        3 + self.steps.len()
    }

    pub fn only_step_i(&self) -> bool {
        self.steps.iter().all(|s| matches!(s, HennebergStep::StepI { .. }))
    }
}

/// Every intermediate graph of the sequence, starting with the triangle.
pub fn henneberg_prefixes(seq: &HennebergSequence) -> Result<Vec<Graph>, GraphError> {
    let mut edges: BTreeSet<Edge> = triangle().edges;
    let mut out = vec![triangle()];
    for (t, step) in seq.steps.iter().enumerate() {
        let n = t + 3;
        let new = n + 1;
        let bad = |reason: String| GraphError::InvalidStep { step: t + 1, reason };
        let check = |v: usize| {
            if v == 0 || v > n {
                Err(bad(format!("vertex {v} does not exist yet")))
            } else {
                Ok(())
            }
        };
        match *step {
            HennebergStep::StepI { a, b } => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(bad("StepI endpoints coincide".into()));
                }
                edges.insert(edge(a, new));
                edges.insert(edge(b, new));
            }
            HennebergStep::StepII { a, b, c, removed } => {
                for v in [a, b, c] {
                    check(v)?;
                }
                if a == b || a == c || b == c {
                    return Err(bad("StepII endpoints must be distinct".into()));
                }
                let r = edge(removed.0, removed.1);
                if ![a, b, c].contains(&r.0) || ![a, b, c].contains(&r.1) || r.0 == r.1 {
                    return Err(bad(format!("removed edge {}-{} is not among the new neighbors", r.0, r.1)));
                }
                if !edges.remove(&r) {
                    return Err(bad(format!("removed edge {}-{} does not exist", r.0, r.1)));
                }
                for v in [a, b, c] {
                    edges.insert(edge(v, new));
                }
            }
        }
        out.push(Graph { n: new, edges: edges.clone() });
    }
    Ok(out)
}

pub fn henneberg_apply(seq: &HennebergSequence) -> Result<Graph, GraphError> {
    Ok(henneberg_prefixes(seq)?.pop().expect("at least the triangle"))
}

/// A Henneberg sequence together with `labels[t - 1]`: the vertex of the
/// decomposed graph that sequence vertex `t` corresponds to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub sequence: HennebergSequence,
    pub labels: Vec<usize>,
}

impl Decomposition {
    /// `map[v - 1]` = sequence label of original vertex `v`.
    pub fn to_sequence_labels(&self) -> Vec<usize> {
        let mut map = vec![0; self.labels.len()];
        for (t, &v) in self.labels.iter().enumerate() {
            map[v - 1] = t + 1;
        }
        map
    }
}

#[derive(Debug, Clone, Copy)]
enum Reverse {
    I { v: usize, a: usize, b: usize },
    II { v: usize, nbrs: [usize; 3], added: Edge },
}

struct Reducer<'a> {
    graph: &'a Graph,
    base: Option<Edge>,
    only_step_i: bool,
    dead_ends: HashSet<Vec<bool>>,
}

impl Reducer<'_> {
    fn search(&mut self, active: &mut Vec<bool>, edges: &mut BTreeSet<Edge>) -> Option<Vec<Reverse>> {
        let alive: Vec<usize> = (1..=self.graph.n).filter(|&v| active[v]).collect();
        if alive.len() == 3 {
            return Some(Vec::new());
        }
        if self.only_step_i && self.dead_ends.contains(active) {
            return None;
        }
        let nbrs = |edges: &BTreeSet<Edge>, v: usize| -> Vec<usize> {
            edges
                .iter()
                .filter_map(|&(a, b)| {
                    if a == v {
                        Some(b)
                    } else if b == v {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let base = self.base;
        let candidates: Vec<usize> =
            alive.iter().copied().filter(|&v| base.is_none_or(|(a, b)| v != a && v != b)).collect();
        for &v in &candidates {
            let ns = nbrs(edges, v);
            if ns.len() != 2 {
                continue;
            }
            active[v] = false;
            for &u in &ns {
                edges.remove(&edge(u, v));
            }
            let found = self.search(active, edges);
            active[v] = true;
            for &u in &ns {
                edges.insert(edge(u, v));
            }
            if let Some(mut rest) = found {
                rest.push(Reverse::I { v, a: ns[0], b: ns[1] });
                return Some(rest);
            }
        }
        if !self.only_step_i {
            for &v in &candidates {
                let ns = nbrs(edges, v);
                if ns.len() != 3 {
                    continue;
                }
                let pairs = [(ns[0], ns[1]), (ns[0], ns[2]), (ns[1], ns[2])];
                for (x, y) in pairs {
                    if edges.contains(&edge(x, y)) {
                        continue;
                    }
                    active[v] = false;
                    for &u in &ns {
                        edges.remove(&edge(u, v));
                    }
                    edges.insert(edge(x, y));
                    let keep: Vec<usize> = (1..=self.graph.n).filter(|&w| active[w]).collect();
                    let sub = Graph { n: self.graph.n, edges: edges.clone() }.induced(&keep);
                    let found = if check_laman(&sub).laman { self.search(active, edges) } else { None };
                    edges.remove(&edge(x, y));
                    for &u in &ns {
                        edges.insert(edge(u, v));
                    }
                    active[v] = true;
                    if let Some(mut rest) = found {
                        rest.push(Reverse::II { v, nbrs: [ns[0], ns[1], ns[2]], added: edge(x, y) });
                        return Some(rest);
                    }
                }
            }
        }
        if self.only_step_i {
            self.dead_ends.insert(active.clone());
        }
        None
    }
}

fn reduce(g: &Graph, base: Option<Edge>, only_step_i: bool) -> Option<Decomposition> {
    if g.n < 3 {
        return None;
    }
    let mut reducer = Reducer { graph: g, base, only_step_i, dead_ends: HashSet::new() };
    let mut active = vec![true; g.n + 1];
    active[0] = false;
    let mut edges = g.edges.clone();
    let mut reverse = reducer.search(&mut active, &mut edges)?;
    // `reverse` lists removals from the triangle outward.
    let mut alive: Vec<usize> = (1..=g.n)
        .filter(|&v| {
            !reverse.iter().any(|r| match r {
                Reverse::I { v: w, .. } | Reverse::II { v: w, .. } => *w == v,
            })
        })
        .collect();
    if let Some((a, b)) = base {
        alive.retain(|&v| v != a && v != b);
        alive.splice(0..0, [a, b]);
    }
    let mut labels = alive;
    let mut seq_label = vec![0usize; g.n + 1];
    for (i, &v) in labels.iter().enumerate() {
        seq_label[v] = i + 1;
    }
    let mut steps = Vec::new();
    for r in reverse.drain(..) {
        match r {
            Reverse::I { v, a, b } => {
                steps.push(HennebergStep::StepI { a: seq_label[a], b: seq_label[b] });
                labels.push(v);
                seq_label[v] = labels.len();
            }
            Reverse::II { v, nbrs, added } => {
                steps.push(HennebergStep::StepII {
                    a: seq_label[nbrs[0]],
                    b: seq_label[nbrs[1]],
                    c: seq_label[nbrs[2]],
                    removed: edge(seq_label[added.0], seq_label[added.1]),
                });
                labels.push(v);
                seq_label[v] = labels.len();
            }
        }
    }
    Some(Decomposition { sequence: HennebergSequence::new(steps), labels })
}

/// Reverse-step search. Henneberg I graphs come back as StepI-only sequences.
pub fn henneberg_decompose(g: &Graph) -> Result<Decomposition, GraphError> {
    if !check_laman(g).laman {
        return Err(GraphError::NotLaman);
    }
    reduce(g, None, true).or_else(|| reduce(g, None, false)).ok_or(GraphError::NoSequence)
}

/// Decomposition whose base triangle contains `base`, with `base.0` and
/// `base.1` becoming sequence vertices 1 and 2.
pub fn henneberg_decompose_from(g: &Graph, base: Edge) -> Result<Decomposition, GraphError> {
    if !g.has_edge(base.0, base.1) {
        return Err(GraphError::NotAnEdge(base.0, base.1));
    }
    if !check_laman(g).laman {
        return Err(GraphError::NotLaman);
    }
    reduce(g, Some(base), true).or_else(|| reduce(g, Some(base), false)).ok_or(GraphError::NoSequence)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HennebergClass {
    HennebergI,
    HennebergII,
}

pub fn classify(g: &Graph) -> Result<HennebergClass, GraphError> {
    if !check_laman(g).laman {
        return Err(GraphError::NotLaman);
    }
    Ok(if reduce(g, None, true).is_some() { HennebergClass::HennebergI } else { HennebergClass::HennebergII })
}

/// Directions for every edge except the base edge; arcs are `(tail, head)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub base: Edge,
    pub arcs: BTreeMap<Edge, (usize, usize)>,
}

impl Orientation {
    pub fn in_degree(&self, v: usize) -> usize {
        self.arcs.values().filter(|&&(_, h)| h == v).count()
    }

    /// Heads `v`: the edges pointing into `v`, in edge order.
    pub fn incoming(&self, v: usize) -> Vec<Edge> {
        self.arcs.iter().filter(|(_, &(_, h))| h == v).map(|(&e, _)| e).collect()
    }

    /// Covers `E \ {base}` with base endpoints at in-degree 0 and all others at 2.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let expected: BTreeSet<Edge> = g.edges().filter(|&e| e != self.base).collect();
        let covered: BTreeSet<Edge> = self.arcs.keys().copied().collect();
        if expected != covered || !g.has_edge(self.base.0, self.base.1) {
            return false;
        }
        if self.arcs.iter().any(|(&e, &(t, h))| edge(t, h) != e) {
            return false;
        }
        (1..=g.n()).all(|v| {
            let want = if v == self.base.0 || v == self.base.1 { 0 } else { 2 };
            self.in_degree(v) == want
        })
    }
}

/// Replays a sequence: StepI edges point to the new vertex; for StepII the
/// edge towards the head `s` of the deleted arc points to `s` and the other
/// two point to the new vertex.
pub fn orient_sequence(seq: &HennebergSequence) -> Result<Orientation, GraphError> {
    henneberg_prefixes(seq)?;
    let mut arcs = BTreeMap::new();
    arcs.insert(edge(1, 3), (1, 3));
    arcs.insert(edge(2, 3), (2, 3));
    for (t, step) in seq.steps.iter().enumerate() {
        let new = t + 4;
        match *step {
            HennebergStep::StepI { a, b } => {
                arcs.insert(edge(a, new), (a, new));
                arcs.insert(edge(b, new), (b, new));
            }
            HennebergStep::StepII { a, b, c, removed } => {
                let r = edge(removed.0, removed.1);
                let Some((_, head)) = arcs.remove(&r) else {
                    return Err(GraphError::InvalidStep {
                        step: t + 1,
                        reason: "the base edge cannot be removed".into(),
                    });
                };
                for v in [a, b, c] {
                    if v == head {
                        arcs.insert(edge(v, new), (new, v));
                    } else {
                        arcs.insert(edge(v, new), (v, new));
                    }
                }
            }
        }
    }
    Ok(Orientation { base: (1, 2), arcs })
}

pub fn orient_two_in(g: &Graph, base: Edge) -> Result<Orientation, GraphError> {
    let base = edge(base.0, base.1);
    let dec = henneberg_decompose_from(g, base)?;
    let seq_orientation = orient_sequence(&dec.sequence)?;
    let lab = |t: usize| dec.labels[t - 1];
    let arcs = seq_orientation.arcs.values().map(|&(t, h)| (edge(lab(t), lab(h)), (lab(t), lab(h)))).collect();
    Ok(Orientation { base, arcs })
}

/// Isomorphism-invariant code: the lexicographically smallest upper-triangle
/// adjacency bitstring over degree-respecting relabelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub code: u64,
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, GraphError> {
    let n = g.n;
    if n > CANONICAL_MAX_VERTICES {
        return Err(GraphError::TooLarge { what: "canonical form", n, cap: CANONICAL_MAX_VERTICES });
    }
    let mut adj = vec![vec![false; n + 1]; n + 1];
    for (a, b) in g.edges() {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let degree_at: Vec<usize> = order.iter().map(|&v| g.degree(v)).collect();

    fn assign(
        pos: usize,
        placed: &mut Vec<usize>,
        used: &mut Vec<bool>,
        degree_at: &[usize],
        degrees: &[usize],
        adj: &[Vec<bool>],
        best: &mut u64,
    ) {
        let n = degree_at.len();
        if pos == n {
            let mut code = 0u64;
            let mut bit = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if adj[placed[i]][placed[j]] {
                        code |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            *best = (*best).min(code);
            return;
        }
        for v in 1..=n {
            if used[v] || degrees[v] != degree_at[pos] {
                continue;
            }
            used[v] = true;
            placed.push(v);
            assign(pos + 1, placed, used, degree_at, degrees, adj, best);
            placed.pop();
            used[v] = false;
        }
    }

    let degrees: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { g.degree(v) }).collect();
    let mut best = u64::MAX;
    assign(0, &mut Vec::new(), &mut vec![false; n + 1], &degree_at, &degrees, &adj, &mut best);
    if n < 2 {
        best = 0;
    }
    Ok(CanonicalForm { n, code: best })
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool, GraphError> {
    if g.n != h.n || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

/// All Laman graphs on `n` vertices up to isomorphism.
pub fn laman_catalog(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n > CATALOG_MAX_VERTICES {
        return Err(GraphError::TooLarge { what: "Laman catalog", n, cap: CATALOG_MAX_VERTICES });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let pairs: Vec<Edge> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
    let m = 2 * n - 3;
    let mut seen = BTreeMap::new();
    let mut choose = Vec::with_capacity(m);
    fn rec(
        start: usize,
        m: usize,
        n: usize,
        pairs: &[Edge],
        choose: &mut Vec<Edge>,
        seen: &mut BTreeMap<CanonicalForm, Graph>,
    ) {
        if choose.len() == m {
            let g = Graph::new(n, choose.iter().copied()).unwrap();
            if check_laman(&g).laman {
                let cf = canonical_form(&g).unwrap();
                seen.entry(cf).or_insert(g);
            }
            return;
        }
        for i in start..pairs.len() {
            if pairs.len() - i < m - choose.len() {
                break;
            }
            choose.push(pairs[i]);
            rec(i + 1, m, n, pairs, choose, seen);
            choose.pop();
        }
    }
    rec(0, m, n, &pairs, &mut choose, &mut seen);
    Ok(seen.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::new(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        assert_eq!(Graph::new(3, [(1, 4)]), Err(GraphError::LabelOutOfRange { label: 4, n: 3 }));
        assert_eq!(Graph::new(3, [(2, 2)]), Err(GraphError::Loop(2)));
        assert_eq!(Graph::new(3, [(1, 2), (2, 1)]), Err(GraphError::DuplicateEdge(1, 2)));
    }

    #[test]
    fn laman_examples() {
        assert_eq!(check_laman(&triangle()), LamanCheck { laman: true, witness: None });
        assert!(check_laman(&k33()).laman);
        assert!(check_laman(&desargues()).laman);
        let k4 = check_laman(&k4());
        assert!(!k4.laman);
        assert_eq!(k4.witness, Some(vec![1, 2, 3, 4]));
    }

    #[test]
    fn oracle_examples() {
        assert!(laman_oracle(&triangle()).unwrap());
        assert!(laman_oracle(&desargues()).unwrap());
        let path = Graph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(!laman_oracle(&path).unwrap());
        let big = Graph::new(13, []).unwrap();
        assert!(matches!(laman_oracle(&big), Err(GraphError::TooLarge { .. })));
    }

    #[test]
    fn witness_spans_too_many_edges() {
        // K4 glued to a pendant path: edge count is right but K4 is overbraced.
        let g = Graph::new(5, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 5)]).unwrap();
        let res = check_laman(&g);
        assert!(!res.laman);
        let w = res.witness.unwrap();
        let spanned = g.edges().filter(|(a, b)| w.contains(a) && w.contains(b)).count();
        assert!(spanned > 2 * w.len() - 3);
    }

    #[test]
    fn apply_examples() {
        assert_eq!(henneberg_apply(&HennebergSequence::default()).unwrap(), triangle());
        let one = HennebergSequence::new(vec![HennebergStep::StepI { a: 1, b: 3 }]);
        let g = henneberg_apply(&one).unwrap();
        assert_eq!(g, Graph::new(4, [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4)]).unwrap());
    }

    #[test]
    fn apply_rejects_bad_steps() {
        let missing = HennebergSequence::new(vec![HennebergStep::StepI { a: 1, b: 4 }]);
        assert!(matches!(henneberg_apply(&missing), Err(GraphError::InvalidStep { step: 1, .. })));
        let same = HennebergSequence::new(vec![HennebergStep::StepI { a: 2, b: 2 }]);
        assert!(henneberg_apply(&same).is_err());
        let no_edge = HennebergSequence::new(vec![
            HennebergStep::StepI { a: 1, b: 2 },
            HennebergStep::StepII { a: 3, b: 4, c: 1, removed: (3, 4) },
        ]);
        assert!(matches!(henneberg_apply(&no_edge), Err(GraphError::InvalidStep { step: 2, .. })));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&triangle()).unwrap(), HennebergClass::HennebergI);
        assert_eq!(classify(&desargues()).unwrap(), HennebergClass::HennebergII);
        assert_eq!(classify(&k33()).unwrap(), HennebergClass::HennebergII);
        assert_eq!(classify(&k4()), Err(GraphError::NotLaman));
    }

    #[test]
    fn k33_needs_a_step_ii() {
        let dec = henneberg_decompose(&k33()).unwrap();
        assert!(!dec.sequence.only_step_i());
        let rebuilt = henneberg_apply(&dec.sequence).unwrap();
        assert_eq!(rebuilt.relabeled(&dec.labels), k33());
    }

    #[test]
    fn triangle_orientation() {
        let o = orient_two_in(&triangle(), (1, 2)).unwrap();
        assert_eq!(o.arcs.get(&(1, 3)), Some(&(1, 3)));
        assert_eq!(o.arcs.get(&(2, 3)), Some(&(2, 3)));
        assert!(o.is_valid_for(&triangle()));
        assert_eq!(orient_two_in(&k33(), (1, 3)), Err(GraphError::NotAnEdge(1, 3)));
    }

    #[test]
    fn catalog_sizes() {
        let sizes: Vec<usize> = (3..=6).map(|n| laman_catalog(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 1, 3, 13]);
    }

    #[test]
    fn canonical_form_detects_relabeling() {
        let g = desargues();
        let h = g.relabeled(&[4, 6, 1, 2, 3, 5]);
        assert!(is_isomorphic(&g, &h).unwrap());
        assert!(!is_isomorphic(&g, &k33()).unwrap());
    }
}
