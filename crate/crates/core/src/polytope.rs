//! Exact rational polytopes in vertex form.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg;
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::rational::{add, dot, int, sub, Point, Rational};

/// Exact volume is only computed up to this ambient dimension.
pub const VOLUME_DIM_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("empty point set")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not a vertex of the polytope")]
    NotAVertex,
    #[error("vertex pair is not an edge of the polytope")]
    NotAnEdge,
    #[error("dimension {dim} exceeds the supported cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
}

/// A convex polytope stored by its vertices. Every stored point is an
/// LP-certified extreme point and the list is duplicate-free.
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<Point>,
    edges: OnceLock<Vec<(usize, usize)>>,
    edge_memo: Mutex<HashMap<(usize, usize), bool>>,
}

impl Clone for RationalPolytope {
    fn clone(&self) -> Self {
        let edges = OnceLock::new();
        if let Some(e) = self.edges.get() {
            let _ = edges.set(e.clone());
        }
        Self {
            dim: self.dim,
            vertices: self.vertices.clone(),
            edges,
            edge_memo: Mutex::new(self.edge_memo.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for RationalPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl fmt::Debug for RationalPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalPolytope").field("dim", &self.dim).field("vertices", &self.vertices).finish()
    }
}

impl RationalPolytope {
    /// Wraps points already known to be the distinct vertices of their hull.
    pub(crate) fn from_vertices_unchecked(dim: usize, vertices: Vec<Point>) -> Self {
        Self { dim, vertices, edges: OnceLock::new(), edge_memo: Mutex::new(HashMap::new()) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_index(&self, p: &[Rational]) -> Option<usize> {
        self.vertices.iter().position(|v| v.as_slice() == p)
    }

    pub fn contains_vertex(&self, p: &[Rational]) -> bool {
        self.vertex_index(p).is_some()
    }

    /// Is `conv{a, b}` an edge? Both arguments must be vertices.
    pub fn is_edge(&self, a: &[Rational], b: &[Rational]) -> Result<bool, GeomError> {
        let i = self.vertex_index(a).ok_or(GeomError::NotAVertex)?;
        let j = self.vertex_index(b).ok_or(GeomError::NotAVertex)?;
        Ok(self.is_edge_idx(i, j))
    }

    /// Edge test by vertex index; memoized.
    pub fn is_edge_idx(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let key = (i.min(j), i.max(j));
        if let Some(edges) = self.edges.get() {
            return edges.binary_search(&key).is_ok();
        }
        if let Some(&hit) = self.edge_memo.lock().unwrap().get(&key) {
            return hit;
        }
        let result = certify_edge(self.dim, &self.vertices, key.0, key.1);
        self.edge_memo.lock().unwrap().insert(key, result);
        result
    }

    /// All edges as sorted index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        self.edges.get_or_init(|| {
            let n = self.vertices.len();
            let mut out = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if self.is_edge_idx(i, j) {
                        out.push((i, j));
                    }
                }
            }
            out
        })
    }

    /// Projection onto the listed coordinates (in that order).
    pub fn project(&self, coords: &[usize]) -> RationalPolytope {
        let pts: Vec<Point> = self.vertices.iter().map(|v| coords.iter().map(|&c| v[c].clone()).collect()).collect();
        hull_vertices_of_dim(coords.len(), pts)
    }

    pub fn translate(&self, t: &[Rational]) -> RationalPolytope {
        let vs = self.vertices.iter().map(|v| add(v, t)).collect();
        RationalPolytope::from_vertices_unchecked(self.dim, vs)
    }

    /// Dilation by a positive rational factor.
    pub fn dilate(&self, factor: &Rational) -> RationalPolytope {
        assert!(factor.is_positive(), "dilation factor must be positive");
        let vs = self.vertices.iter().map(|v| crate::rational::scale(v, factor)).collect();
        RationalPolytope::from_vertices_unchecked(self.dim, vs)
    }

    /// Coordinates in which the vertices are not all equal.
    pub fn varying_coordinates(&self) -> Vec<usize> {
        let first = &self.vertices[0];
        (0..self.dim).filter(|&c| self.vertices.iter().any(|v| v[c] != first[c])).collect()
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        linalg::affine_dim(&self.vertices).unwrap_or(0)
    }
}

/// `conv{v_i, v_j}` is a face iff some functional is minimized exactly there,
/// i.e. the margin LP below has a positive optimum.
fn certify_edge(dim: usize, vertices: &[Point], i: usize, j: usize) -> bool {
    if vertices.len() == 2 {
        return true;
    }
    // Variables: w (dim, free), t (free), delta (<= 1).
    let nv = dim + 2;
    let mut lp = LinearProgram::new(nv);
    let mut obj = vec![Rational::zero(); nv];
    obj[dim + 1] = int(1);
    lp = lp.maximize(obj).upper_bound(dim + 1, int(1));
    for (idx, v) in vertices.iter().enumerate() {
        let mut row: Point = v.clone();
        row.push(int(-1));
        if idx == i || idx == j {
            row.push(Rational::zero());
            lp.add_constraint(row, Relation::Eq, Rational::zero());
        } else {
            row.push(int(-1));
            lp.add_constraint(row, Relation::Ge, Rational::zero());
        }
    }
    let out = lp::solve(&lp).expect("edge LP is well formed");
    out.status == LpStatus::Optimal && out.value.is_some_and(|v| v.is_positive())
}

/// Is `p` a convex combination of `others`?
fn in_convex_hull(p: &[Rational], others: &[&Point]) -> bool {
    if others.is_empty() {
        return false;
    }
    let m = others.len();
    let mut lp = LinearProgram::new(m).nonnegative();
    for c in 0..p.len() {
        let row: Point = others.iter().map(|q| q[c].clone()).collect();
        lp.add_constraint(row, Relation::Eq, p[c].clone());
    }
    lp.add_constraint(vec![int(1); m], Relation::Eq, int(1));
    let out = lp::solve(&lp).expect("hull LP is well formed");
    out.status != LpStatus::Infeasible
}

/// Reduces a point set to the extreme points of its convex hull, preserving
/// first-occurrence order.
pub fn hull_vertices(points: &[Point]) -> Result<RationalPolytope, GeomError> {
    let first = points.first().ok_or(GeomError::Empty)?;
    let dim = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(GeomError::DimensionMismatch { expected: dim, found: bad.len() });
    }
    Ok(hull_vertices_of_dim(dim, points.to_vec()))
}

fn hull_vertices_of_dim(dim: usize, points: Vec<Point>) -> RationalPolytope {
    let mut seen = HashSet::new();
    let mut uniq: Vec<Point> = points.into_iter().filter(|p| seen.insert(p.clone())).collect();
    if uniq.len() > 12 && dim <= VOLUME_DIM_CAP {
        // Interior points never reach the boundary of a placing triangulation.
        if let Some(tri) = PlacingTriangulation::build(dim, &uniq) {
            let on_boundary = tri.boundary_points();
            uniq = uniq.into_iter().enumerate().filter(|(i, _)| on_boundary.contains(i)).map(|(_, p)| p).collect();
        }
    }
    let keep: Vec<bool> = (0..uniq.len())
        .map(|i| {
            let others: Vec<&Point> = uniq.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q).collect();
            !in_convex_hull(&uniq[i], &others)
        })
        .collect();
    let vertices = uniq.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    RationalPolytope::from_vertices_unchecked(dim, vertices)
}

pub fn minkowski_sum(p: &RationalPolytope, q: &RationalPolytope) -> Result<RationalPolytope, GeomError> {
    if p.dim != q.dim {
        return Err(GeomError::DimensionMismatch { expected: p.dim, found: q.dim });
    }
    let sums: Vec<Point> = p.vertices.iter().flat_map(|a| q.vertices.iter().map(move |b| add(a, b))).collect();
    Ok(hull_vertices_of_dim(p.dim, sums))
}

/// Minkowski sum of a nonempty list.
pub fn minkowski_sum_all(polys: &[&RationalPolytope]) -> Result<RationalPolytope, GeomError> {
    let (first, rest) = polys.split_first().ok_or(GeomError::Empty)?;
    let mut acc = (*first).clone();
    for p in rest {
        acc = minkowski_sum(&acc, p)?;
    }
    Ok(acc)
}

/// Exact `k`-dimensional volume; zero for polytopes that are not full-dimensional.
pub fn volume_exact(p: &RationalPolytope) -> Result<Rational, GeomError> {
    if p.dim > VOLUME_DIM_CAP {
        return Err(GeomError::DimensionCap { dim: p.dim, cap: VOLUME_DIM_CAP });
    }
    if p.dim == 0 {
        return Ok(int(1));
    }
    Ok(PlacingTriangulation::build(p.dim, &p.vertices).map_or_else(Rational::zero, |t| t.volume()))
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

struct Hyperplane {
    normal: Point,
    offset: Rational,
}

impl Hyperplane {
    /// Positive strictly beyond, negative on the interior side.
    fn side(&self, p: &[Rational]) -> Rational {
        dot(&self.normal, p) - &self.offset
    }
}

/// Placing (beneath-beyond) triangulation of a full-dimensional point set.
/// The boundary is kept as a triangulated sphere of `(k-1)`-simplices;
/// only strictly visible boundary simplices are coned to each new point.
struct PlacingTriangulation {
    dim: usize,
    points: Vec<Point>,
    simplices: Vec<Vec<usize>>,
    boundary: BTreeMap<Vec<usize>, Hyperplane>,
}

impl PlacingTriangulation {
    fn build(dim: usize, points: &[Point]) -> Option<Self> {
        let mut initial = vec![0usize];
        let mut diffs: Vec<Point> = Vec::new();
        for (i, p) in points.iter().enumerate().skip(1) {
            if initial.len() == dim + 1 {
                break;
            }
            diffs.push(sub(p, &points[0]));
            if linalg::rank(&diffs) == diffs.len() {
                initial.push(i);
            } else {
                diffs.pop();
            }
        }
        if initial.len() < dim + 1 {
            return None;
        }
        let mut centroid = vec![Rational::zero(); dim];
        for &i in &initial {
            centroid = add(&centroid, &points[i]);
        }
        let centroid: Point = centroid.iter().map(|c| c / int(dim as i64 + 1)).collect();

        let mut tri =
            Self { dim, points: points.to_vec(), simplices: vec![initial.clone()], boundary: BTreeMap::new() };
        for skip in 0..initial.len() {
            let facet: Vec<usize> = initial.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
            tri.insert_facet(facet, &centroid);
        }
        let placed: HashSet<usize> = initial.iter().copied().collect();
        for i in 0..points.len() {
            if !placed.contains(&i) {
                tri.place(i, &centroid);
            }
        }
        Some(tri)
    }

    fn insert_facet(&mut self, mut facet: Vec<usize>, interior: &[Rational]) {
        facet.sort_unstable();
        let base = &self.points[facet[0]];
        let diffs: Vec<Point> = facet[1..].iter().map(|&v| sub(&self.points[v], base)).collect();
        let mut normal =
            linalg::nullspace(&diffs, self.dim).into_iter().next().expect("boundary simplex spans a hyperplane");
        let mut offset = dot(&normal, base);
        if (dot(&normal, interior) - &offset).is_positive() {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        self.boundary.insert(facet, Hyperplane { normal, offset });
    }

    fn place(&mut self, idx: usize, interior: &[Rational]) {
        let p = self.points[idx].clone();
        let visible: Vec<Vec<usize>> =
            self.boundary.iter().filter(|(_, h)| h.side(&p).is_positive()).map(|(f, _)| f.clone()).collect();
        if visible.is_empty() {
            return;
        }
        let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for f in &visible {
            for skip in 0..f.len() {
                let ridge: Vec<usize> = f.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
                *ridge_count.entry(ridge).or_default() += 1;
            }
            let mut s = f.clone();
            s.push(idx);
            self.simplices.push(s);
        }
        for f in &visible {
            self.boundary.remove(f);
        }
        for (ridge, count) in ridge_count {
            if count == 1 {
                let mut facet = ridge;
                facet.push(idx);
                self.insert_facet(facet, interior);
            }
        }
    }

    fn volume(&self) -> Rational {
        let total: Rational = self
            .simplices
            .iter()
            .map(|s| {
                let base = &self.points[s[0]];
                let rows: Vec<Point> = s[1..].iter().map(|&v| sub(&self.points[v], base)).collect();
                linalg::det(&rows).abs()
            })
            .sum();
        total / Rational::from_integer(factorial(self.dim))
    }

    fn boundary_points(&self) -> HashSet<usize> {
        self.boundary.keys().flatten().copied().collect()
    }
}

/// One chosen edge `(v_t, v_l)` per polytope of a cell candidate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeCell {
    pub edges: Vec<(Point, Point)>,
}

impl EdgeCell {
    pub fn new(edges: Vec<(Point, Point)>) -> Self {
        Self { edges }
    }

    /// Edge directions `v_t - v_l`, one per polytope.
    pub fn directions(&self) -> Vec<Point> {
        self.edges.iter().map(|(t, l)| sub(t, l)).collect()
    }

    /// Checks that each pair is an edge of the matching polytope and that the
    /// cell has one edge per ambient dimension.
    pub fn validate(&self, polytopes: &[RationalPolytope]) -> Result<(), GeomError> {
        if self.edges.len() != polytopes.len() {
            return Err(GeomError::DimensionMismatch { expected: polytopes.len(), found: self.edges.len() });
        }
        for ((a, b), p) in self.edges.iter().zip(polytopes) {
            if p.ambient_dim() != self.edges.len() {
                return Err(GeomError::DimensionMismatch { expected: self.edges.len(), found: p.ambient_dim() });
            }
            if !p.is_edge(a, b)? {
                return Err(GeomError::NotAnEdge);
            }
        }
        Ok(())
    }
}

/// Determinant of the matrix whose columns are the cell's edge directions.
pub fn edge_matrix_det(cell: &EdgeCell) -> Rational {
    // det(E^T) = det(E), so the directions can be used as rows.
    linalg::det(&cell.directions())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{point, rat, unit};

    fn square() -> RationalPolytope {
        hull_vertices(&[point(&[0, 0]), point(&[1, 0]), point(&[0, 1]), point(&[1, 1])]).unwrap()
    }

    #[test]
    fn midpoint_is_dropped() {
        let p = hull_vertices(&[point(&[0, 0]), point(&[1, 0]), point(&[2, 0])]).unwrap();
        assert_eq!(p.vertices(), &[point(&[0, 0]), point(&[2, 0])]);
        let single = hull_vertices(&[point(&[3, 4])]).unwrap();
        assert_eq!(single.vertices().len(), 1);
    }

    #[test]
    fn rejects_ragged_input() {
        assert_eq!(
            hull_vertices(&[point(&[0, 0]), point(&[1])]),
            Err(GeomError::DimensionMismatch { expected: 2, found: 1 })
        );
        assert_eq!(hull_vertices(&[]), Err(GeomError::Empty));
    }

    #[test]
    fn square_edges() {
        let sq = square();
        assert!(sq.is_edge(&point(&[0, 0]), &point(&[1, 0])).unwrap());
        assert!(!sq.is_edge(&point(&[0, 0]), &point(&[1, 1])).unwrap());
        assert_eq!(sq.edges().len(), 4);
        assert_eq!(sq.is_edge(&point(&[0, 0]), &point(&[5, 5])), Err(GeomError::NotAVertex));
    }

    #[test]
    fn simplex_pairs_are_all_edges() {
        let k = 4;
        let mut pts = vec![point(&[0, 0, 0, 0])];
        for i in 0..k {
            pts.push(unit(k, i, 2));
        }
        let s = hull_vertices(&pts).unwrap();
        assert_eq!(s.edges().len(), 10);
    }

    #[test]
    fn segment_sum_is_square() {
        let a = hull_vertices(&[point(&[0, 0]), point(&[1, 0])]).unwrap();
        let b = hull_vertices(&[point(&[0, 0]), point(&[0, 1])]).unwrap();
        let s = minkowski_sum(&a, &b).unwrap();
        assert_eq!(s.vertices().len(), 4);
        assert_eq!(volume_exact(&s).unwrap(), int(1));
        let shifted = minkowski_sum(&square(), &hull_vertices(&[point(&[2, 3])]).unwrap()).unwrap();
        assert_eq!(shifted, square().translate(&point(&[2, 3])));
    }

    #[test]
    fn volumes() {
        assert_eq!(volume_exact(&square()).unwrap(), int(1));
        let flat = hull_vertices(&[point(&[0, 0, 0]), point(&[1, 0, 0]), point(&[0, 1, 0])]).unwrap();
        assert_eq!(volume_exact(&flat).unwrap(), int(0));
        let tri = hull_vertices(&[point(&[1, 0]), vec![int(0), rat(3, 2)], point(&[3, 3])]).unwrap();
        assert_eq!(volume_exact(&tri).unwrap(), int(3));
        let big = hull_vertices(&[point(&[0; 7])]).unwrap();
        assert!(matches!(volume_exact(&big), Err(GeomError::DimensionCap { .. })));
    }

    #[test]
    fn unit_cube_with_interior_and_coplanar_points() {
        let mut pts = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    pts.push(point(&[x, y, z]));
                }
            }
        }
        let cube = hull_vertices(&pts).unwrap();
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(volume_exact(&cube).unwrap(), int(8));
    }

    #[test]
    fn edge_matrix_determinants() {
        let cell = EdgeCell::new(vec![(point(&[1, 0]), point(&[0, 0])), (point(&[0, 1]), point(&[0, 0]))]);
        assert_eq!(edge_matrix_det(&cell), int(1));
        let parallel = EdgeCell::new(vec![(point(&[1, 0]), point(&[0, 0])), (point(&[2, 0]), point(&[0, 0]))]);
        assert_eq!(edge_matrix_det(&parallel), int(0));
    }
}
