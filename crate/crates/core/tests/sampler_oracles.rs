mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force_colourings, connected_graphs, random_graph, random_lists};
use sparsecolour_core::counting::{CountConfig, ListAssignment};
use sparsecolour_core::graph::Graph;
use sparsecolour_core::sampler::exact::*;
use sparsecolour_core::sampler::*;

/// Uniform distribution over the enumerated colourings.
fn oracle_uniform(g: &Graph, lists: &ListAssignment) -> Distribution {
    let all = brute_force_colourings(g, lists);
    let p = BigRational::new(BigInt::one(), BigInt::from(all.len()));
    all.into_iter().map(|c| (c, p.clone())).collect()
}

#[test]
fn sampler_distribution_is_uniform_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = CountConfig::default();
    let mut checked = 0;
    while checked < 60 {
        let n = rng.gen_range(1..6);
        let g = random_graph(n, 0.5, &mut rng);
        let lists = random_lists(n, 4, &mut rng);
        if brute_force_colourings(&g, &lists).is_empty() {
            continue;
        }
        let dist = sampler_distribution(&g, &lists, &cfg).unwrap();
        assert_eq!(dist, oracle_uniform(&g, &lists), "{g:?} {lists:?}");
        checked += 1;
    }
}

#[test]
fn chain_rule_probability_of_every_draw_is_one_over_the_count() {
    let cfg = CountConfig::default();
    for n in 1..=4 {
        for g in connected_graphs(n) {
            for q in 1..=4 {
                let lists = ListAssignment::uniform(n, q);
                let total = brute_force_colourings(&g, &lists).len();
                if total == 0 {
                    continue;
                }
                let mut rng = RandomSource::new(q as u64, n as u64).rng();
                for _ in 0..5 {
                    let s = sample_uniform_with(&g, &lists, &mut rng, &cfg).unwrap();
                    assert_eq!(
                        s.probability,
                        BigRational::new(BigInt::one(), BigInt::from(total))
                    );
                    s.colouring.validate(&g, &lists).unwrap();
                }
            }
        }
    }
}

#[test]
fn uncolourable_instances_are_reported() {
    let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let lists = ListAssignment::uniform(3, 2);
    let mut rng = RandomSource::new(0, 0).rng();
    assert!(sample_uniform(&k3, &lists, &mut rng).is_err());
}

#[test]
fn resampling_preserves_uniformity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..40 {
        let n = rng.gen_range(1..6);
        let g = random_graph(n, 0.5, &mut rng);
        let lists = ListAssignment::uniform(n, g.max_degree() + 1 + rng.gen_range(0..2));
        let uniform = oracle_uniform(&g, &lists);
        let out = resample_distribution(&g, &lists, &uniform).unwrap();
        assert!(total_variation(&out, &uniform).is_zero(), "{g:?}");
    }
}

#[test]
fn resampling_from_a_point_mass_reaches_only_proper_colourings() {
    let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let lists = ListAssignment::uniform(4, 3);
    let start: Distribution = [(vec![0, 1, 0, 1], BigRational::one())]
        .into_iter()
        .collect();
    let out = resample_distribution(&p4, &lists, &start).unwrap();
    let total: BigRational = out.values().cloned().sum();
    assert!(total.is_one());
    let proper = brute_force_colourings(&p4, &lists);
    assert!(out.keys().all(|c| proper.contains(c)));
}

#[test]
fn experiment_output_is_uniform_on_small_graphs() {
    let cfg = CountConfig::default();
    for n in 2..=4 {
        for g in connected_graphs(n) {
            let q = g.max_degree() + 2;
            let lists = ListAssignment::uniform(n, q);
            for v in 0..n {
                for t in [0.5, 1.5, 2.5, 10.0] {
                    let setup = ExperimentSetup::with_threshold(&g, v, t).unwrap();
                    let dist = experiment_distribution(&g, &lists, &setup, &cfg).unwrap();
                    let sub = g.without_vertex(v).unwrap();
                    let expected = oracle_uniform(&sub.graph, &lists.restrict(&sub));
                    assert!(
                        total_variation(&dist, &expected).is_zero(),
                        "{g:?} v {v} t {t}"
                    );
                }
            }
        }
    }
}

#[test]
fn experiment_runs_are_reproducible() {
    let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
    let lists = ListAssignment::uniform(5, 4);
    let setup = ExperimentSetup::with_threshold(&c5, 0, 2.5).unwrap();
    let a = four_step_experiment(&c5, &lists, &setup, RandomSource::new(9, 4)).unwrap();
    let b = four_step_experiment(&c5, &lists, &setup, RandomSource::new(9, 4)).unwrap();
    assert_eq!(a, b);
    assert!(a.initial[0].is_none() && a.recoloured[0].is_none());
    // Marked neighbours keep their colour.
    for &u in &a.marked {
        assert_eq!(a.initial[u], a.recoloured[u]);
    }
    let mut split: Vec<usize> = a.marked.iter().chain(&a.uncoloured).copied().collect();
    split.sort_unstable();
    assert_eq!(split, a.neighbours);
}

#[test]
fn avoidance_bound_holds_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cfg = CountConfig::default();
    for _ in 0..50 {
        let n = rng.gen_range(1..6);
        let g = random_graph(n, 0.5, &mut rng);
        let lists = ListAssignment::uniform(n, g.max_degree() + 2);
        let all = brute_force_colourings(&g, &lists);
        let bound = avoidance_probability_bound_exact(&g, &lists).unwrap();
        for x in 0..lists.palette() as u32 {
            let avoid = all.iter().filter(|c| !c.contains(&x)).count();
            let exact = exact_avoidance_probability(&g, &lists, x, &cfg).unwrap();
            assert_eq!(exact, BigRational::new(avoid.into(), all.len().into()));
            assert!(exact >= bound);
        }
    }
}
