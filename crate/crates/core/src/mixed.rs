//! Mixed volumes via mixed cells of coherent subdivisions.
//!
//! Cells are found by branch-and-prune over one edge per polytope. A partial
//! choice survives while some `alpha` makes every chosen edge the lower face
//! of `<alpha + mu_j, .>` on its polytope; feasibility of that system is
//! decided by an exact LP.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{check_laman, Framework, Graph, GraphError};
use crate::linalg;
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::poly::{self, bezout, newton_polytopes, Constants, PolyError, PolySystem};
use crate::polytope::{
    edge_matrix_det, minkowski_sum_all, volume_exact, EdgeCell, GeomError, RationalPolytope, VOLUME_DIM_CAP,
};
use crate::rational::{dot, int, rat, sub, unit, Point, Rational};

/// Re-seeding budget when a lifting turns out to be non-generic.
pub const MAX_RETRIES: u64 = 32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MvError {
    #[error("lifting is not generic: {} tied cell(s)", cells.len())]
    NonGenericLifting { cells: Vec<EdgeCell> },
    #[error("no generic lifting found after {attempts} attempts")]
    RetriesExhausted { attempts: u64, cells: Vec<EdgeCell> },
    #[error("mixed-cell enumeration exceeded its deadline")]
    Timeout,
    #[error("expected {expected} polytopes in dimension {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

/// One linear lifting vector per polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    pub vectors: Vec<Point>,
}

/// Entries `p/q` with `p` in `1..=1_000_000` and `q` in `1..=8`.
pub fn random_lifting(polytopes: &[RationalPolytope], seed: u64) -> Lifting {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors = polytopes
        .iter()
        .map(|p| (0..p.ambient_dim()).map(|_| rat(rng.gen_range(1..=1_000_000), rng.gen_range(1..=8))).collect())
        .collect();
    Lifting { vectors }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellStatus {
    Strict,
    Tie,
    NotMixed,
}

/// Evaluates the lifting criterion: the edge matrix must be non-singular and
/// `r_i E^-1 (v_l - v_s) >= 0` for every other vertex `v_s` of every `P_i`,
/// with `r_i = (<mu_j - mu_i, e_j>)_j`.
pub fn is_mixed_cell(cell: &EdgeCell, polytopes: &[RationalPolytope], lifting: &Lifting) -> CellStatus {
    let k = polytopes.len();
    if cell.edges.len() != k || lifting.vectors.len() != k {
        return CellStatus::NotMixed;
    }
    let dirs = cell.directions();
    if linalg::det(&dirs).is_zero() {
        return CellStatus::NotMixed;
    }
    // u E = r  <=>  E^T u^T = r^T, and the rows of E^T are the directions.
    let mut tie = false;
    for (i, p) in polytopes.iter().enumerate() {
        let r: Point = (0..k).map(|j| dot(&sub(&lifting.vectors[j], &lifting.vectors[i]), &dirs[j])).collect();
        let u = linalg::solve(&dirs, &r).expect("non-singular edge matrix");
        let (t, l) = &cell.edges[i];
        for v in p.vertices() {
            if v == t || v == l {
                continue;
            }
            let value = dot(&u, &sub(l, v));
            if value.is_negative() {
                return CellStatus::NotMixed;
            }
            tie |= value.is_zero();
        }
    }
    if tie {
        CellStatus::Tie
    } else {
        CellStatus::Strict
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedCellRecord {
    #[serde(serialize_with = "serialize_cell")]
    pub cell: EdgeCell,
    #[serde(serialize_with = "serialize_rational")]
    pub det: Rational,
    pub strict: bool,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::rational::format_rational(r))
}

fn serialize_cell<S: serde::Serializer>(c: &EdgeCell, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let fmt = |p: &Point| p.iter().map(crate::rational::format_rational).collect::<Vec<_>>();
    let mut seq = s.serialize_seq(Some(c.edges.len()))?;
    for (t, l) in &c.edges {
        seq.serialize_element(&[fmt(t), fmt(l)])?;
    }
    seq.end()
}

#[derive(Debug, Clone, Default)]
pub struct EnumOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub deadline: Option<Instant>,
}

struct Prepared<'a> {
    polys: &'a [RationalPolytope],
    /// Polytope indices in search order.
    order: Vec<usize>,
    /// Per polytope, per edge: `(t, l, direction, [(v_s - v_l, <mu, v_s - v_l>)])`.
    edges: Vec<Vec<PreparedEdge>>,
}

struct PreparedEdge {
    t: usize,
    l: usize,
    dir: Point,
    mu_dir: Rational,
    others: Vec<(Point, Rational)>,
}

#[derive(Clone)]
struct Node {
    chosen: Vec<usize>,
    /// `alpha = alpha0 + sum_q z_q basis[q]` satisfies every chosen equality.
    alpha0: Point,
    basis: Vec<Point>,
}

enum Leaf {
    Cell(MixedCellRecord),
    Tie(EdgeCell),
}

impl<'a> Prepared<'a> {
    fn new(polys: &'a [RationalPolytope], lifting: &'a Lifting) -> Self {
        let mut order: Vec<usize> = (0..polys.len()).collect();
        order.sort_by_key(|&i| (polys[i].edges().len(), i));
        let edges = polys
            .iter()
            .zip(&lifting.vectors)
            .map(|(p, mu)| {
                let vs = p.vertices();
                p.edges()
                    .iter()
                    .map(|&(t, l)| {
                        let dir = sub(&vs[t], &vs[l]);
                        let others = (0..vs.len())
                            .filter(|&s| s != t && s != l)
                            .map(|s| {
                                let d = sub(&vs[s], &vs[l]);
                                let m = dot(mu, &d);
                                (d, m)
                            })
                            .collect();
                        PreparedEdge { t, l, mu_dir: dot(mu, &dir), dir, others }
                    })
                    .collect()
            })
            .collect();
        Self { polys, order, edges }
    }

    fn k(&self) -> usize {
        self.polys.len()
    }

    fn root(&self) -> Node {
        let k = self.k();
        Node { chosen: Vec::new(), alpha0: vec![Rational::zero(); k], basis: (0..k).map(|i| unit(k, i, 1)).collect() }
    }

    /// Adds edge `e` of the next polytope; `None` when the new equality is
    /// dependent on the chosen ones or the inequalities become infeasible.
    fn extend(&self, node: &Node, e: usize) -> Option<Node> {
        let p = self.order[node.chosen.len()];
        let pe = &self.edges[p][e];
        let g: Vec<Rational> = node.basis.iter().map(|b| dot(b, &pe.dir)).collect();
        let pivot = g.iter().position(|x| !x.is_zero())?;
        let r = -&pe.mu_dir - dot(&node.alpha0, &pe.dir);
        let bp = &node.basis[pivot];
        let shift = &r / &g[pivot];
        let alpha0: Point = node.alpha0.iter().zip(bp).map(|(a, b)| a + b * &shift).collect();
        let basis: Vec<Point> = node
            .basis
            .iter()
            .enumerate()
            .filter(|&(q, _)| q != pivot)
            .map(|(q, b)| {
                if g[q].is_zero() {
                    return b.clone();
                }
                let f = &g[q] / &g[pivot];
                b.iter().zip(bp).map(|(x, y)| x - y * &f).collect()
            })
            .collect();
        let mut chosen = node.chosen.clone();
        chosen.push(e);
        let child = Node { chosen, alpha0, basis };
        if child.basis.is_empty() || self.feasible(&child) {
            Some(child)
        } else {
            None
        }
    }

    /// Rows `G z <= h` with `G = -(<b_q, d>)_q` and `h = <alpha0 + mu, d>`.
    fn system(&self, node: &Node) -> (Vec<Point>, Vec<Rational>) {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (level, &e) in node.chosen.iter().enumerate() {
            let p = self.order[level];
            for (d, mu_d) in &self.edges[p][e].others {
                rows.push(node.basis.iter().map(|b| -dot(b, d)).collect());
                rhs.push(dot(&node.alpha0, d) + mu_d);
            }
        }
        (rows, rhs)
    }

    /// `G z <= h` is feasible iff `min h^T y` over `G^T y = 0, sum y = 1,
    /// y >= 0` is nonnegative or that dual is infeasible.
    fn feasible(&self, node: &Node) -> bool {
        let (rows, rhs) = self.system(node);
        if rhs.iter().all(|h| !h.is_negative()) {
            return true;
        }
        let mut keep = Vec::new();
        for (row, h) in rows.iter().zip(&rhs) {
            if row.iter().all(Zero::is_zero) {
                if h.is_negative() {
                    return false;
                }
            } else {
                keep.push((row, h));
            }
        }
        let m = keep.len();
        let d = node.basis.len();
        let mut program =
            LinearProgram::new(m).nonnegative().maximize(keep.iter().map(|(_, h)| -(*h).clone()).collect());
        for q in 0..d {
            program.add_constraint(
                keep.iter().map(|(row, _)| row[q].clone()).collect(),
                Relation::Eq,
                Rational::zero(),
            );
        }
        program.add_constraint(vec![Rational::one(); m], Relation::Eq, Rational::one());
        let out = lp::solve(&program).expect("well-formed feasibility dual");
        match out.status {
            LpStatus::Infeasible => true,
            LpStatus::Optimal => !out.value.expect("optimal value").is_positive(),
            LpStatus::Unbounded => unreachable!("dual is bounded by sum y = 1"),
        }
    }

    fn leaf(&self, node: &Node) -> Option<Leaf> {
        let (_, rhs) = self.system(node);
        if rhs.iter().any(|h| h.is_negative()) {
            return None;
        }
        let k = self.k();
        let mut edges = vec![(Vec::new(), Vec::new()); k];
        for (level, &e) in node.chosen.iter().enumerate() {
            let p = self.order[level];
            let pe = &self.edges[p][e];
            let vs = self.polys[p].vertices();
            edges[p] = (vs[pe.t].clone(), vs[pe.l].clone());
        }
        let cell = EdgeCell::new(edges);
        if rhs.iter().any(Zero::is_zero) {
            return Some(Leaf::Tie(cell));
        }
        let det = edge_matrix_det(&cell);
        Some(Leaf::Cell(MixedCellRecord { cell, det, strict: true }))
    }

    fn dfs(&self, node: Node, out: &mut Vec<Leaf>, deadline: Option<Instant>) -> Result<(), MvError> {
        if deadline.is_some_and(|d| Instant::now() > d) {
            return Err(MvError::Timeout);
        }
        let level = node.chosen.len();
        if level == self.k() {
            out.extend(self.leaf(&node));
            return Ok(());
        }
        let p = self.order[level];
        for e in 0..self.edges[p].len() {
            if let Some(child) = self.extend(&node, e) {
                self.dfs(child, out, deadline)?;
            }
        }
        Ok(())
    }

    /// Expands breadth-first until there is enough independent work to share.
    fn frontier(&self, want: usize) -> Vec<Node> {
        let mut nodes = vec![self.root()];
        while nodes.len() < want {
            let level = nodes[0].chosen.len();
            if level == self.k() {
                break;
            }
            let p = self.order[level];
            nodes =
                nodes.iter().flat_map(|n| (0..self.edges[p].len()).filter_map(move |e| self.extend(n, e))).collect();
            if nodes.is_empty() {
                break;
            }
        }
        nodes
    }
}

fn check_shape(polytopes: &[RationalPolytope]) -> Result<(), MvError> {
    let k = polytopes.len();
    if let Some(p) = polytopes.iter().find(|p| p.ambient_dim() != k) {
        return Err(MvError::Shape { expected: k, found: p.ambient_dim() });
    }
    Ok(())
}

/// Every mixed cell of the subdivision induced by `lifting`, sorted.
pub fn enumerate_mixed_cells(
    polytopes: &[RationalPolytope],
    lifting: &Lifting,
    opts: &EnumOptions,
) -> Result<Vec<MixedCellRecord>, MvError> {
    check_shape(polytopes)?;
    if polytopes.is_empty() {
        return Ok(Vec::new());
    }
    let prep = Prepared::new(polytopes, lifting);
    let run = || -> Result<Vec<Leaf>, MvError> {
        let want = 4 * rayon::current_num_threads();
        let frontier = prep.frontier(want);
        let parts: Vec<Result<Vec<Leaf>, MvError>> = frontier
            .into_par_iter()
            .map(|node| {
                let mut out = Vec::new();
                prep.dfs(node, &mut out, opts.deadline)?;
                Ok(out)
            })
            .collect();
        let mut all = Vec::new();
        for part in parts {
            all.extend(part?);
        }
        Ok(all)
    };
    let leaves = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build().expect("thread pool").install(run)?,
        None => run()?,
    };
    let mut cells = Vec::new();
    let mut ties = Vec::new();
    for leaf in leaves {
        match leaf {
            Leaf::Cell(c) => cells.push(c),
            Leaf::Tie(c) => ties.push(c),
        }
    }
    if !ties.is_empty() {
        ties.sort_by(|a, b| a.edges.cmp(&b.edges));
        return Err(MvError::NonGenericLifting { cells: ties });
    }
    cells.sort_by(|a, b| a.cell.edges.cmp(&b.cell.edges));
    Ok(cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    #[serde(rename = "separation+enumeration")]
    SeparationEnumeration,
    Certificate,
    InclusionExclusion,
}

/// One factor of a separated mixed volume.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockResult {
    pub polytopes: Vec<usize>,
    pub coordinates: Vec<usize>,
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    pub lifting_seed: u64,
    pub cells: Vec<MixedCellRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MVResult {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    pub method: Method,
    /// Seed of the lifting that produced `cells` (first block's seed when separated).
    pub lifting_seed: u64,
    pub cells: Vec<MixedCellRecord>,
    /// Present when the value is a product over separated blocks.
    pub blocks: Vec<BlockResult>,
}

impl MVResult {
    /// The value as an integer, when it is one (always for lattice input).
    pub fn integer(&self) -> Option<BigInt> {
        self.value.is_integer().then(|| self.value.to_integer())
    }
}

fn cell_sum(cells: &[MixedCellRecord]) -> Rational {
    cells.iter().map(|c| c.det.abs()).sum()
}

/// Enumerates with liftings drawn from `seed, seed + 1, ...` until one is generic.
fn enumerate_with_retries(
    polytopes: &[RationalPolytope],
    seed: u64,
    opts: &EnumOptions,
) -> Result<(u64, Vec<MixedCellRecord>), MvError> {
    let mut offending = Vec::new();
    for attempt in 0..MAX_RETRIES {
        let s = seed.wrapping_add(attempt);
        let lifting = random_lifting(polytopes, s);
        match enumerate_mixed_cells(polytopes, &lifting, opts) {
            Ok(cells) => return Ok((s, cells)),
            Err(MvError::NonGenericLifting { cells }) => offending.extend(cells),
            Err(e) => return Err(e),
        }
    }
    Err(MvError::RetriesExhausted { attempts: MAX_RETRIES, cells: offending })
}

/// `MV(P_1, m_1; ...; P_r, m_r)` by replicating each polytope `m_i` times.
pub fn mixed_volume(
    polytopes: &[RationalPolytope],
    multiplicities: &[usize],
    seed: u64,
    opts: &EnumOptions,
) -> Result<MVResult, MvError> {
    let replicated: Vec<RationalPolytope> =
        polytopes.iter().zip(multiplicities).flat_map(|(p, &m)| std::iter::repeat_n(p.clone(), m)).collect();
    let (lifting_seed, cells) = enumerate_with_retries(&replicated, seed, opts)?;
    Ok(MVResult { value: cell_sum(&cells), method: Method::Enumeration, lifting_seed, cells, blocks: Vec::new() })
}

/// A set of polytopes living (after projection) on its own coordinate block.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub polytopes: Vec<usize>,
    pub coordinates: Vec<usize>,
    pub projected: Vec<RationalPolytope>,
}

/// Splits into coordinate blocks whose mixed volumes multiply to the total.
///
/// Polytope `i` touches coordinate `c` if its vertices differ in `c`. With a
/// perfect matching `m` of polytopes to touched coordinates, `i -> j` whenever
/// `i` touches `m(j)`. A sink component only touches its own matched
/// coordinates, so it separates; components are peeled sinks first.
pub fn separation_split(polytopes: &[RationalPolytope]) -> Vec<Block> {
    let k = polytopes.len();
    let whole = || Block { polytopes: (0..k).collect(), coordinates: (0..k).collect(), projected: polytopes.to_vec() };
    if k == 0 || polytopes.iter().any(|p| p.ambient_dim() != k) {
        return vec![whole()];
    }
    let touches: Vec<Vec<usize>> = polytopes.iter().map(RationalPolytope::varying_coordinates).collect();
    let Some(matched) = perfect_matching(&touches, k) else {
        return vec![whole()];
    };
    let mut owner = vec![0; k];
    for (i, &c) in matched.iter().enumerate() {
        owner[c] = i;
    }
    let adj: Vec<Vec<usize>> = touches.iter().map(|cs| cs.iter().map(|&c| owner[c]).collect()).collect();
    tarjan(&adj)
        .into_iter()
        .map(|mut comp| {
            comp.sort_unstable();
            let mut coords: Vec<usize> = comp.iter().map(|&i| matched[i]).collect();
            coords.sort_unstable();
            let projected = comp.iter().map(|&i| polytopes[i].project(&coords)).collect();
            Block { polytopes: comp, coordinates: coords, projected }
        })
        .collect()
}

fn perfect_matching(touches: &[Vec<usize>], k: usize) -> Option<Vec<usize>> {
    fn augment(i: usize, touches: &[Vec<usize>], seen: &mut [bool], coord_of: &mut [Option<usize>]) -> bool {
        for &c in &touches[i] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            if coord_of[c].is_none_or(|j| augment(j, touches, seen, coord_of)) {
                coord_of[c] = Some(i);
                return true;
            }
        }
        false
    }
    let mut coord_of = vec![None; k];
    for i in 0..touches.len() {
        if !augment(i, touches, &mut vec![false; k], &mut coord_of) {
            return None;
        }
    }
    let mut matched = vec![0; touches.len()];
    for (c, i) in coord_of.iter().enumerate() {
        matched[i.expect("perfect")] = c;
    }
    Some(matched)
}

/// Strongly connected components, sinks first.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for i in 0..s.adj[v].len() {
            let w = s.adj[v][i];
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }
    let n = adj.len();
    let mut s = State {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// Separates, enumerates every block, and multiplies.
pub fn mixed_volume_separated(
    polytopes: &[RationalPolytope],
    seed: u64,
    opts: &EnumOptions,
) -> Result<MVResult, MvError> {
    check_shape(polytopes)?;
    let mut value = Rational::one();
    let mut blocks = Vec::new();
    for block in separation_split(polytopes) {
        let (lifting_seed, cells) = enumerate_with_retries(&block.projected, seed, opts)?;
        let v = cell_sum(&cells);
        value *= &v;
        blocks.push(BlockResult {
            polytopes: block.polytopes,
            coordinates: block.coordinates,
            value: v,
            lifting_seed,
            cells,
        });
    }
    Ok(MVResult {
        value,
        method: Method::SeparationEnumeration,
        lifting_seed: blocks.first().map_or(seed, |b| b.lifting_seed),
        cells: Vec::new(),
        blocks,
    })
}

/// `MV = sum over nonempty S of (-1)^(k - |S|) vol(sum_{i in S} P_i)`.
pub fn mv_inclusion_exclusion(polytopes: &[RationalPolytope]) -> Result<Rational, MvError> {
    check_shape(polytopes)?;
    let k = polytopes.len();
    if k > VOLUME_DIM_CAP {
        return Err(GeomError::DimensionCap { dim: k, cap: VOLUME_DIM_CAP }.into());
    }
    let mut total = Rational::zero();
    for mask in 1u32..(1 << k) {
        let subset: Vec<&RationalPolytope> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &polytopes[i]).collect();
        let vol = volume_exact(&minkowski_sum_all(&subset)?)?;
        if (k - subset.len()).is_multiple_of(2) {
            total += vol;
        } else {
            total -= vol;
        }
    }
    Ok(total)
}

/// `mu_j = M * 1 - (M - 1) * xi_j` with `M = 4n`: small in coordinate `j`,
/// large elsewhere.
pub fn certificate_lifting(k: usize, n: usize) -> Lifting {
    let m = int(4 * n as i64);
    let vectors = (0..k).map(|j| (0..k).map(|c| if c == j { int(1) } else { m.clone() }).collect()).collect();
    Lifting { vectors }
}

/// Exhibits the mixed cell `[xi_1,0] + ... + [xi_4,0] + [2 xi_5,0] + ... +
/// [2 xi_2n,0]` of volume `4^(n-2)`, which meets the Bezout bound.
pub fn certify_general_bound(g: &Graph) -> Result<MVResult, MvError> {
    if !check_laman(g).laman {
        return Err(GraphError::NotLaman.into());
    }
    let f = Framework::uniform(g.clone(), int(2))?;
    let sys = poly::build_soe(&f, &Constants::default())?;
    let polys = newton_polytopes(&sys);
    let n = g.n();
    let k = 2 * n;
    let edges = (0..k).map(|j| (unit(k, j, if j < 4 { 1 } else { 2 }), vec![Rational::zero(); k])).collect();
    let cell = EdgeCell::new(edges);
    cell.validate(&polys)?;
    let lifting = certificate_lifting(k, n);
    let status = is_mixed_cell(&cell, &polys, &lifting);
    if status == CellStatus::NotMixed {
        return Err(MvError::Certificate("cell is not mixed under the certificate lifting".into()));
    }
    let det = edge_matrix_det(&cell).abs();
    let bound = Rational::from_integer(bezout(&sys).into());
    if det != bound {
        return Err(MvError::Certificate("cell volume differs from the Bezout bound".into()));
    }
    Ok(MVResult {
        value: det.clone(),
        method: Method::Certificate,
        lifting_seed: 0,
        cells: vec![MixedCellRecord { cell, det, strict: status == CellStatus::Strict }],
        blocks: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Form {
    SoE,
    SubSoE,
}

#[derive(Debug, Clone, Default)]
pub struct MvOptions {
    pub enumeration: EnumOptions,
    /// Skip the separation step and enumerate the whole system at once.
    pub direct: bool,
}

pub fn build_system(f: &Framework, form: Form) -> Result<PolySystem, MvError> {
    let consts = poly::constants_for(f)?;
    Ok(match form {
        Form::SoE => poly::build_soe(f, &consts)?,
        Form::SubSoE => poly::build_subsoe(f, &consts)?,
    })
}

/// System, Newton polytopes, separation, per-block enumeration.
pub fn mv_for_graph(f: &Framework, form: Form, seed: u64, opts: &MvOptions) -> Result<MVResult, MvError> {
    let sys = build_system(f, form)?;
    let polys = newton_polytopes(&sys);
    if opts.direct {
        mixed_volume(&polys, &vec![1; polys.len()], seed, &opts.enumeration)
    } else {
        mixed_volume_separated(&polys, seed, &opts.enumeration)
    }
}

pub fn bezout_rational(sys: &PolySystem) -> Rational {
    let b: BigUint = bezout(sys);
    Rational::from_integer(b.into())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubdivisionCell {
    /// `(dim F_P, dim F_Q)`.
    pub kind: (usize, usize),
    #[serde(serialize_with = "serialize_rational")]
    pub volume: Rational,
}

/// The full coherent subdivision of `P + Q` in the plane: the two pure cells
/// `P + vertex` and `vertex + Q`, plus the mixed cells.
pub fn coherent_subdivision_2d(
    p: &RationalPolytope,
    q: &RationalPolytope,
    lifting: &Lifting,
) -> Result<Vec<SubdivisionCell>, MvError> {
    let pair = [p.clone(), q.clone()];
    check_shape(&pair)?;
    if pair[0].ambient_dim() != 2 {
        return Err(MvError::Shape { expected: 2, found: pair[0].ambient_dim() });
    }
    let mut cells = Vec::new();
    for (full, other, kind) in [(0, 1, (2, 0)), (1, 0, (0, 2))] {
        // alpha = -mu_full flattens the full polygon; the other polygon then
        // contributes its minimizer of <mu_other - mu_full, .>.
        let w = sub(&lifting.vectors[other], &lifting.vectors[full]);
        let values: Vec<Rational> = pair[other].vertices().iter().map(|v| dot(&w, v)).collect();
        let min = values.iter().min().cloned().unwrap_or_else(Rational::zero);
        if values.iter().filter(|v| **v == min).count() != 1 {
            return Err(MvError::NonGenericLifting { cells: Vec::new() });
        }
        cells.push(SubdivisionCell { kind, volume: volume_exact(&pair[full])? });
    }
    for c in enumerate_mixed_cells(&pair, lifting, &EnumOptions::default())? {
        cells.push(SubdivisionCell { kind: (1, 1), volume: c.det.abs() });
    }
    Ok(cells)
}

/// Tally of cell counts by kind, for reporting.
pub fn kinds(cells: &[SubdivisionCell]) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for c in cells {
        *m.entry(c.kind).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::hull_vertices;
    use crate::rational::point;

    fn poly(pts: &[&[i64]]) -> RationalPolytope {
        hull_vertices(&pts.iter().map(|p| point(p)).collect::<Vec<_>>()).unwrap()
    }

    fn segment(k: usize, i: usize, len: i64) -> RationalPolytope {
        hull_vertices(&[vec![Rational::zero(); k], unit(k, i, len)]).unwrap()
    }

    #[test]
    fn lifting_is_reproducible() {
        let ps = vec![segment(2, 0, 1), segment(2, 1, 1)];
        assert_eq!(random_lifting(&ps, 0), random_lifting(&ps, 0));
        assert_ne!(random_lifting(&ps, 0), random_lifting(&ps, 1));
    }

    #[test]
    fn coordinate_segments_have_one_cell() {
        let ps: Vec<_> = (0..3).map(|i| segment(3, i, 1)).collect();
        let cells = enumerate_mixed_cells(&ps, &random_lifting(&ps, 5), &EnumOptions::default()).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].det.abs(), int(1));
    }

    #[test]
    fn simplex_copies_give_normalized_volume() {
        let s = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let mv = mixed_volume(std::slice::from_ref(&s), &[3], 3, &EnumOptions::default()).unwrap();
        assert_eq!(mv.value, int(1));
        let s2 = s.dilate(&int(2));
        let mv = mixed_volume(&[s2], &[3], 3, &EnumOptions::default()).unwrap();
        assert_eq!(mv.value, int(8));
    }

    #[test]
    fn enumerated_cells_reverify() {
        let p = poly(&[&[0, 0], &[3, 0], &[0, 2], &[3, 2]]);
        let q = hull_vertices(&[point(&[1, 0]), vec![int(0), rat(3, 2)], point(&[3, 3])]).unwrap();
        let ps = vec![p, q];
        let lifting = random_lifting(&ps, 11);
        let cells = enumerate_mixed_cells(&ps, &lifting, &EnumOptions::default()).unwrap();
        for c in &cells {
            assert_eq!(is_mixed_cell(&c.cell, &ps, &lifting), CellStatus::Strict);
        }
        assert_eq!(cell_sum(&cells), int(15));
        assert_eq!(mv_inclusion_exclusion(&ps).unwrap(), int(15));
    }

    #[test]
    fn parallel_edges_are_not_mixed() {
        let ps = vec![segment(2, 0, 1), segment(2, 0, 2)];
        let cell = EdgeCell::new(vec![(unit(2, 0, 1), point(&[0, 0])), (unit(2, 0, 2), point(&[0, 0]))]);
        assert_eq!(is_mixed_cell(&cell, &ps, &random_lifting(&ps, 0)), CellStatus::NotMixed);
        assert_eq!(mixed_volume(&ps, &[1, 1], 0, &EnumOptions::default()).unwrap().value, int(0));
    }

    #[test]
    fn tie_is_reported() {
        // Identical liftings on two copies of a square make every choice degenerate.
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let ps = vec![sq.clone(), sq];
        let lifting = Lifting { vectors: vec![point(&[1, 1]), point(&[1, 1])] };
        let res = enumerate_mixed_cells(&ps, &lifting, &EnumOptions::default());
        assert!(matches!(res, Err(MvError::NonGenericLifting { .. })));
    }

    #[test]
    fn separation_finds_coordinate_blocks() {
        // Two segments on x, y and a triangle in (z, w) with a segment in w.
        let k = 4;
        let tri = hull_vertices(&[point(&[0, 0, 0, 0]), point(&[0, 0, 1, 0]), point(&[0, 0, 0, 1])]).unwrap();
        let ps = vec![segment(k, 0, 1), segment(k, 1, 3), tri, segment(k, 3, 2)];
        let blocks = separation_split(&ps);
        assert!(blocks.len() >= 3);
        let sep = mixed_volume_separated(&ps, 1, &EnumOptions::default()).unwrap();
        let direct = mixed_volume(&ps, &[1; 4], 1, &EnumOptions::default()).unwrap();
        assert_eq!(sep.value, direct.value);
        assert_eq!(sep.value, int(6));
    }

    #[test]
    fn certificate_for_small_graphs() {
        for (g, want) in [(crate::graph::triangle(), 4), (crate::graph::k33(), 256)] {
            let r = certify_general_bound(&g).unwrap();
            assert_eq!(r.value, int(want));
            assert_eq!(r.method, Method::Certificate);
        }
    }

    #[test]
    fn henneberg_step_subsystem_is_two() {
        let t1 = poly(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 1]]);
        let t2 = poly(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let mv = mixed_volume(&[t1.clone(), t2.clone()], &[1, 2], 0, &EnumOptions::default()).unwrap();
        assert_eq!(mv.value, int(2));
        assert_eq!(mv_inclusion_exclusion(&[t1, t2.clone(), t2]).unwrap(), int(2));
    }
}
