//! Real planar embeddings of Henneberg I frameworks by circle intersection.
//!
//! Pinning: `v1 = (0, 0)`, `v2 = (l12, 0)`. Every later vertex lies on the
//! intersection of two circles around already placed vertices, so each has at
//! most two positions. Mirror images across the x-axis are distinct embeddings.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{
    edge, henneberg_apply, henneberg_decompose, Edge, Framework, GraphError, HennebergSequence, HennebergStep,
};
use crate::rational::{int, to_f64, Rational};

/// Absolute tolerance on the squared half-chord below which two circles are tangent.
pub const TANGENCY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EmbedError {
    #[error("sequence contains a Henneberg II step")]
    StepII,
    #[error("graph is not a Henneberg I graph")]
    NotHennebergI,
    #[error("framework graph does not match the sequence")]
    GraphMismatch,
    #[error("vertex {0}: both circles have the same center and radius")]
    DegenerateInput(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Embedding {
    pub points: Vec<(f64, f64)>,
    /// Largest relative edge-length error.
    pub residual: f64,
    /// Some vertex was placed at a tangency.
    pub tangent: bool,
    /// Intersection choice per vertex from `v3` on: `1`, `-1`, or `0` at a tangency.
    pub branches: Vec<i8>,
}

fn require_step_i(seq: &HennebergSequence) -> Result<(), EmbedError> {
    if seq.only_step_i() {
        Ok(())
    } else {
        Err(EmbedError::StepII)
    }
}

/// Base triangle `l12 = 5, l13 = 4, l23 = 3`; each step gets `S + 1` (to `a`)
/// and `S + 2` (to `b`), where `S` sums all earlier lengths.
pub fn tight_lengths(seq: &HennebergSequence) -> Result<Framework, EmbedError> {
    require_step_i(seq)?;
    let g = henneberg_apply(seq)?;
    let mut lengths: BTreeMap<Edge, Rational> = BTreeMap::new();
    lengths.insert((1, 2), int(5));
    lengths.insert((1, 3), int(4));
    lengths.insert((2, 3), int(3));
    let mut total: i64 = 12;
    for (t, step) in seq.steps.iter().enumerate() {
        let new = t + 4;
        if let HennebergStep::StepI { a, b } = *step {
            lengths.insert(edge(a, new), int(total + 1));
            lengths.insert(edge(b, new), int(total + 2));
            total += 2 * total + 3;
        }
    }
    Ok(Framework::new(g, lengths)?)
}

enum Meet {
    None,
    Tangent((f64, f64)),
    Two((f64, f64), (f64, f64)),
}

fn intersect(c1: (f64, f64), r1: f64, c2: (f64, f64), r2: f64) -> Option<Meet> {
    let (dx, dy) = (c2.0 - c1.0, c2.1 - c1.1);
    let d2 = dx * dx + dy * dy;
    if d2 == 0.0 {
        return if r1 == r2 { None } else { Some(Meet::None) };
    }
    let d = d2.sqrt();
    let a = (r1 * r1 - r2 * r2 + d2) / (2.0 * d);
    let h2 = r1 * r1 - a * a;
    let foot = (c1.0 + a * dx / d, c1.1 + a * dy / d);
    if h2.abs() <= TANGENCY_TOL {
        return Some(Meet::Tangent(foot));
    }
    if h2 < 0.0 {
        return Some(Meet::None);
    }
    let h = h2.sqrt();
    let (px, py) = (-dy / d * h, dx / d * h);
    Some(Meet::Two((foot.0 + px, foot.1 + py), (foot.0 - px, foot.1 - py)))
}

/// Largest relative deviation of an edge length.
pub fn residual(f: &Framework, points: &[(f64, f64)]) -> f64 {
    f.lengths()
        .iter()
        .map(|(&(i, j), l)| {
            let (p, q) = (points[i - 1], points[j - 1]);
            let dist = ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
            let l = to_f64(l);
            (dist - l).abs() / l
        })
        .fold(0.0, f64::max)
}

pub fn verify_embedding(f: &Framework, e: &Embedding, tol: f64) -> bool {
    e.points.len() == f.graph().n() && residual(f, &e.points) < tol
}

/// Every real embedding, in depth-first order of branch choices (`1` before `-1`).
pub fn enumerate_h1(f: &Framework, seq: &HennebergSequence) -> Result<Vec<Embedding>, EmbedError> {
    require_step_i(seq)?;
    if &henneberg_apply(seq)? != f.graph() {
        return Err(EmbedError::GraphMismatch);
    }
    let len = |a: usize, b: usize| to_f64(f.length(a, b).expect("edge of the framework"));
    let (l12, l13, l23) = (len(1, 2), len(1, 3), len(2, 3));
    if l13 + l23 < l12 || l12 + l13 < l23 || l12 + l23 < l13 {
        return Ok(Vec::new());
    }
    // Each vertex from v3 on is placed from two anchors.
    let mut anchors = vec![(1, 2)];
    for step in &seq.steps {
        if let HennebergStep::StepI { a, b } = *step {
            anchors.push((a, b));
        }
    }
    let mut out = Vec::new();
    let mut points = vec![(0.0, 0.0), (l12, 0.0)];
    let mut branches = Vec::new();
    place(f, &anchors, &mut points, &mut branches, false, &mut out)?;
    Ok(out)
}

/// Embeds a Henneberg I framework given with arbitrary labels. With `tight`
/// the lengths are replaced by the recipe lengths. Returns the framework that
/// was embedded and the embeddings, both in the input labeling; the pinned
/// pair is the first two vertices of the decomposition.
pub fn enumerate_framework(f: &Framework, tight: bool) -> Result<(Framework, Vec<Embedding>), EmbedError> {
    let dec = henneberg_decompose(f.graph())?;
    if !dec.sequence.only_step_i() {
        return Err(EmbedError::NotHennebergI);
    }
    let to_seq = dec.to_sequence_labels();
    let seq_framework = if tight { tight_lengths(&dec.sequence)? } else { f.relabeled(&to_seq) };
    let embeddings = enumerate_h1(&seq_framework, &dec.sequence)?
        .into_iter()
        .map(|e| {
            let points = (1..=f.graph().n()).map(|v| e.points[to_seq[v - 1] - 1]).collect();
            Embedding { points, ..e }
        })
        .collect();
    Ok((seq_framework.relabeled(&dec.labels), embeddings))
}

fn place(
    f: &Framework,
    anchors: &[(usize, usize)],
    points: &mut Vec<(f64, f64)>,
    branches: &mut Vec<i8>,
    tangent: bool,
    out: &mut Vec<Embedding>,
) -> Result<(), EmbedError> {
    let v = points.len() + 1;
    let Some(&(a, b)) = anchors.get(v - 3) else {
        out.push(Embedding {
            residual: residual(f, points),
            points: points.clone(),
            tangent,
            branches: branches.clone(),
        });
        return Ok(());
    };
    let ra = to_f64(f.length(a, v).expect("anchor edge"));
    let rb = to_f64(f.length(b, v).expect("anchor edge"));
    let meet = intersect(points[a - 1], ra, points[b - 1], rb).ok_or(EmbedError::DegenerateInput(v))?;
    let options: Vec<((f64, f64), i8)> = match meet {
        Meet::None => Vec::new(),
        Meet::Tangent(p) => vec![(p, 0)],
        Meet::Two(p, q) => vec![(p, 1), (q, -1)],
    };
    for (p, sign) in options {
        points.push(p);
        branches.push(sign);
        place(f, anchors, points, branches, tangent || sign == 0, out)?;
        points.pop();
        branches.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(steps: &[(usize, usize)]) -> HennebergSequence {
        HennebergSequence::new(steps.iter().map(|&(a, b)| HennebergStep::StepI { a, b }).collect())
    }

    #[test]
    fn triangle_has_a_mirror_pair() {
        let s = seq(&[]);
        let f = tight_lengths(&s).unwrap();
        let es = enumerate_h1(&f, &s).unwrap();
        assert_eq!(es.len(), 2);
        let (p, q) = (es[0].points[2], es[1].points[2]);
        assert!((p.0 - q.0).abs() < 1e-12 && (p.1 + q.1).abs() < 1e-12);
        assert!(es.iter().all(|e| verify_embedding(&f, e, 1e-9)));
    }

    #[test]
    fn recipe_lengths() {
        let s = seq(&[(1, 3)]);
        let f = tight_lengths(&s).unwrap();
        assert_eq!(f.length(1, 4), Some(&int(13)));
        assert_eq!(f.length(3, 4), Some(&int(14)));
    }

    #[test]
    fn tight_count_for_six_vertices() {
        let s = seq(&[(1, 3), (2, 4), (4, 5)]);
        let f = tight_lengths(&s).unwrap();
        assert_eq!(enumerate_h1(&f, &s).unwrap().len(), 16);
    }

    #[test]
    fn unreachable_vertex_gives_nothing() {
        let s = seq(&[(1, 2)]);
        let mut lengths = tight_lengths(&s).unwrap().lengths().clone();
        lengths.insert((1, 4), int(100));
        lengths.insert((2, 4), int(1));
        let f = Framework::new(henneberg_apply(&s).unwrap(), lengths).unwrap();
        assert!(enumerate_h1(&f, &s).unwrap().is_empty());
    }

    #[test]
    fn perturbed_embedding_fails_verification() {
        let s = seq(&[]);
        let f = tight_lengths(&s).unwrap();
        let e = enumerate_h1(&f, &s).unwrap().remove(0);
        let mut bad = e.clone();
        bad.points[2].0 += 1e-3;
        assert!(!verify_embedding(&f, &bad, 1e-9));
        let mirrored = Embedding { points: e.points.iter().map(|&(x, y)| (x, -y)).collect(), ..e };
        assert!(verify_embedding(&f, &mirrored, 1e-9));
    }

    #[test]
    fn step_ii_and_mismatch_are_rejected() {
        let s2 = HennebergSequence::new(vec![
            HennebergStep::StepI { a: 1, b: 2 },
            HennebergStep::StepII { a: 1, b: 3, c: 4, removed: (1, 3) },
        ]);
        assert_eq!(tight_lengths(&s2).unwrap_err(), EmbedError::StepII);
        let f = tight_lengths(&seq(&[(1, 3)])).unwrap();
        assert_eq!(enumerate_h1(&f, &seq(&[(2, 3)])).unwrap_err(), EmbedError::GraphMismatch);
    }

    #[test]
    fn tangent_triangle_counts_once() {
        let f = Framework::new(
            crate::graph::triangle(),
            [((1, 2), int(2)), ((1, 3), int(1)), ((2, 3), int(1))].into_iter().collect(),
        )
        .unwrap();
        let es = enumerate_h1(&f, &seq(&[])).unwrap();
        assert_eq!(es.len(), 1);
        assert!(es[0].tangent);
    }
}
