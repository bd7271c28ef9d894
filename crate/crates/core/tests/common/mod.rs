#![allow(dead_code)]

use laman_bkk::graph::{henneberg_apply, Graph, HennebergSequence, HennebergStep};
use laman_bkk::polytope::RationalPolytope;
use laman_bkk::rational::Rational;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Area of a convex polygon by angular sort around the centroid and the shoelace sum.
pub fn polygon_area(p: &RationalPolytope) -> Rational {
    let pts: Vec<(f64, f64, &[Rational])> = p
        .vertices()
        .iter()
        .map(|v| (laman_bkk::rational::to_f64(&v[0]), laman_bkk::rational::to_f64(&v[1]), v.as_slice()))
        .collect();
    if pts.len() < 3 {
        return Rational::from_integer(0.into());
    }
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let mut order: Vec<_> = pts.iter().collect();
    order.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).partial_cmp(&(b.1 - cy).atan2(b.0 - cx)).unwrap());
    let n = order.len();
    let twice: BigRational = (0..n)
        .map(|i| {
            let (a, b) = (order[i].2, order[(i + 1) % n].2);
            &a[0] * &b[1] - &b[0] * &a[1]
        })
        .sum();
    twice.abs() / Rational::from_integer(2.into())
}

/// A random Henneberg sequence that never removes the base edge.
pub fn random_sequence(rng: &mut ChaCha8Rng, n: usize, allow_step_ii: bool) -> HennebergSequence {
    let mut steps = Vec::new();
    let mut g: Graph = henneberg_apply(&HennebergSequence::default()).unwrap();
    while g.n() < n {
        let m = g.n();
        let step = if allow_step_ii && rng.gen_bool(0.5) {
            let edges: Vec<_> = g.edges().filter(|&e| e != (1, 2)).collect();
            let (a, b) = edges[rng.gen_range(0..edges.len())];
            let others: Vec<usize> = (1..=m).filter(|&v| v != a && v != b).collect();
            HennebergStep::StepII { a, b, c: others[rng.gen_range(0..others.len())], removed: (a, b) }
        } else {
            let a = rng.gen_range(1..=m);
            let b = loop {
                let b = rng.gen_range(1..=m);
                if b != a {
                    break b;
                }
            };
            HennebergStep::StepI { a: a.min(b), b: a.max(b) }
        };
        steps.push(step);
        g = henneberg_apply(&HennebergSequence::new(steps.clone())).unwrap();
    }
    HennebergSequence::new(steps)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
