use laman_bkk::graph::{
    check_laman, classify, desargues, henneberg_apply, henneberg_decompose, henneberg_decompose_from,
    henneberg_prefixes, k33, laman_catalog, laman_oracle, orient_sequence, orient_two_in, triangle, Graph,
    HennebergClass, HennebergSequence, HennebergStep,
};
use proptest::prelude::*;

/// Builds a valid sequence from raw choices: `(step_ii, pick_a, pick_b)`.
fn sequence_from(choices: &[(bool, usize, usize)]) -> HennebergSequence {
    let mut steps = Vec::new();
    let mut g = triangle();
    for &(two, x, y) in choices {
        let n = g.n();
        let step = if two {
            // The base edge 1-2 stays, so the orientation replay applies.
            let edges: Vec<_> = g.edges().filter(|&e| e != (1, 2)).collect();
            let (a, b) = edges[x % edges.len()];
            let others: Vec<usize> = (1..=n).filter(|&v| v != a && v != b).collect();
            HennebergStep::StepII { a, b, c: others[y % others.len()], removed: (a, b) }
        } else {
            let a = x % n + 1;
            let b = (a + y % (n - 1)) % n + 1;
            HennebergStep::StepI { a: a.min(b), b: a.max(b) }
        };
        steps.push(step);
        g = henneberg_apply(&HennebergSequence::new(steps.clone())).unwrap();
    }
    HennebergSequence::new(steps)
}

fn choices(max_steps: usize) -> impl Strategy<Value = Vec<(bool, usize, usize)>> {
    prop::collection::vec((any::<bool>(), 0usize..64, 0usize..64), 0..=max_steps)
}

fn random_graph(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for a in 1..=n {
        for b in a + 1..=n {
            if mask >> (bit % 32) & 1 == 1 && bit < 32 {
                edges.push((a, b));
            }
            bit += 1;
        }
    }
    Graph::new(n, edges).unwrap()
}

proptest! {
    #[test]
    fn pebble_game_matches_subset_oracle(n in 2usize..=7, mask in any::<u32>()) {
        let g = random_graph(n, mask);
        prop_assert_eq!(check_laman(&g).laman, laman_oracle(&g).unwrap());
    }

    #[test]
    fn witness_is_overbraced(n in 3usize..=7, mask in any::<u32>()) {
        let g = random_graph(n, mask);
        if let Some(w) = check_laman(&g).witness {
            let spanned = g.edges().filter(|(a, b)| w.contains(a) && w.contains(b)).count();
            prop_assert!(spanned + 3 > 2 * w.len());
        }
    }

    #[test]
    fn sequences_build_laman_graphs(c in choices(5)) {
        let seq = sequence_from(&c);
        for g in henneberg_prefixes(&seq).unwrap() {
            prop_assert!(check_laman(&g).laman);
        }
    }

    #[test]
    fn decomposition_round_trips(c in choices(5)) {
        let g = henneberg_apply(&sequence_from(&c)).unwrap();
        let dec = henneberg_decompose(&g).unwrap();
        prop_assert_eq!(henneberg_apply(&dec.sequence).unwrap().relabeled(&dec.labels), g);
    }

    #[test]
    fn step_i_only_sequences_classify_as_henneberg_i(c in choices(5)) {
        let only_i: Vec<_> = c.into_iter().map(|(_, x, y)| (false, x, y)).collect();
        let g = henneberg_apply(&sequence_from(&only_i)).unwrap();
        prop_assert_eq!(classify(&g).unwrap(), HennebergClass::HennebergI);
    }

    #[test]
    fn orientations_have_two_in_edges(c in choices(5)) {
        let seq = sequence_from(&c);
        let g = henneberg_apply(&seq).unwrap();
        let o = orient_sequence(&seq).unwrap();
        prop_assert!(o.is_valid_for(&g));
        prop_assert_eq!(o.in_degree(1) + o.in_degree(2), 0);
        for v in 3..=g.n() {
            prop_assert_eq!(o.in_degree(v), 2);
        }
        for base in g.edges() {
            let o = orient_two_in(&g, base).unwrap();
            prop_assert!(o.is_valid_for(&g));
            prop_assert_eq!(o.in_degree(base.0) + o.in_degree(base.1), 0);
        }
    }
}

#[test]
fn catalog_graphs_agree_with_oracle_and_decompose() {
    for n in 3..=6 {
        for g in laman_catalog(n).unwrap() {
            assert!(check_laman(&g).laman);
            assert!(laman_oracle(&g).unwrap());
            for base in g.edges() {
                let dec = henneberg_decompose_from(&g, base).unwrap();
                assert_eq!(henneberg_apply(&dec.sequence).unwrap().relabeled(&dec.labels), g);
                assert_eq!((dec.labels[0].min(dec.labels[1]), dec.labels[0].max(dec.labels[1])), base);
            }
        }
    }
}

#[test]
fn six_vertex_catalog_has_two_henneberg_ii_graphs() {
    let classes: Vec<_> = laman_catalog(6).unwrap().iter().map(|g| classify(g).unwrap()).collect();
    let twos = classes.iter().filter(|c| **c == HennebergClass::HennebergII).count();
    assert_eq!(twos, 2);
    assert_eq!(classify(&k33()).unwrap(), HennebergClass::HennebergII);
    assert_eq!(classify(&desargues()).unwrap(), HennebergClass::HennebergII);
}

#[test]
fn replayed_orientation_after_a_split() {
    // Triangle, two degree-2 additions, then a degree-3 addition splitting 4-5.
    let seq = HennebergSequence::new(vec![
        HennebergStep::StepI { a: 1, b: 3 },
        HennebergStep::StepI { a: 2, b: 4 },
        HennebergStep::StepII { a: 3, b: 4, c: 5, removed: (4, 5) },
    ]);
    let g = henneberg_apply(&seq).unwrap();
    assert!(!g.has_edge(4, 5));
    let o = orient_sequence(&seq).unwrap();
    assert_eq!(o.arcs[&(1, 3)], (1, 3));
    assert_eq!(o.arcs[&(2, 5)], (2, 5));
    // The removed arc 4 -> 5 is replaced by 6 -> 5; the new vertex takes 3 -> 6 and 4 -> 6.
    assert_eq!(o.arcs[&(5, 6)], (6, 5));
    assert_eq!(o.arcs[&(3, 6)], (3, 6));
    assert_eq!(o.arcs[&(4, 6)], (4, 6));
    assert!(o.is_valid_for(&g));
}
