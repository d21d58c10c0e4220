//! Property tests over randomly generated networks.

use atype::evolve::{
    crossover, crossover_once, fitness, mutate, select_parent, CrossoverConfig, CrossoverError, FitnessConfig,
    SelectionConfig,
};
use atype::format::{parse, serialize};
use atype::generate::{random_atype, GenConfig};
use atype::graph::{validate, ATypeGraph, NodeKind};
use atype::sim::{run, run_clamped, Network, Simulator};
use atype::tasks::{training_set, BooleanFunction, Concept, TrainingParams};
use atype::{AType, BooleanSequence};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random generator settings: dimensions 1..=3, size slack 0..=12.
fn gen_config() -> impl Strategy<Value = GenConfig> {
    (1usize..=3, 1usize..=3, 1usize..=6, 0usize..=6, 0.0f64..=0.5).prop_map(|(n, p, extra, spread, pd)| {
        let lo = n + p + extra;
        GenConfig::new(lo, lo + spread, n, p, pd)
    })
}

fn graph_and_rng() -> impl Strategy<Value = (ATypeGraph, ChaCha8Rng)> {
    (gen_config(), any::<u64>()).prop_map(|(cfg, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (random_atype(&cfg, &mut rng).unwrap(), rng)
    })
}

fn random_input(n: usize, len: usize, rng: &mut ChaCha8Rng) -> BooleanSequence {
    BooleanSequence::random(n, len, rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn generated_graphs_are_valid_and_sized(cfg in gen_config(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_atype(&cfg, &mut rng).unwrap();
        prop_assert!(validate(&g).is_empty());
        prop_assert!((cfg.size_lo..=cfg.size_hi).contains(&g.size()));
        prop_assert_eq!(validate(&g), validate(&g.clone()));
    }

    #[test]
    fn serialization_round_trips((g, mut rng) in graph_and_rng()) {
        let delay = rng.random_range(0..=g.size());
        let a = AType::new(g, delay);
        prop_assert_eq!(parse(&serialize(&a)).unwrap(), a);
    }

    #[test]
    fn mutation_keeps_validity((g, mut rng) in graph_and_rng()) {
        let child = mutate(&g, 0.2, &mut rng);
        prop_assert!(validate(&child).is_empty(), "{:?}", child);
        prop_assert!(child.size() + 1 >= g.size() && child.size() <= g.size() + 1);
        prop_assert_eq!(child.input_order(), g.input_order());
        prop_assert_eq!(child.output_dim(), g.output_dim());
    }

    #[test]
    fn crossover_keeps_validity(cfg in gen_config(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mother = random_atype(&cfg, &mut rng).unwrap();
        let father = random_atype(&cfg, &mut rng).unwrap();
        let child = crossover(&mother, &father, &CrossoverConfig::default(), &mut rng);
        prop_assert!(validate(&child).is_empty(), "{:?}", child);
        prop_assert_eq!(child.input_order(), mother.input_order());
        prop_assert_eq!(child.output_order().len(), mother.output_order().len());
        match crossover_once(&mother, &father, 0.8, &mut rng) {
            Ok(c) => prop_assert!(validate(&c).is_empty()),
            Err(e) => prop_assert_eq!(e, CrossoverError::EmptyBoundary),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn continuing_a_run_equals_one_long_run(
        (g, mut rng) in graph_and_rng(),
        first in 1usize..30,
        second in 1usize..30,
    ) {
        let n = g.input_dim();
        let input = random_input(n, first + second, &mut rng);
        let whole = run(&AType::new(g.clone(), 0), &input, first + second).unwrap();

        let net = Network::compile(&g);
        let word = |t: usize| -> Vec<u8> { input.get(t).iter().map(|&b| b as u8).collect() };
        let mut sim = Simulator::<u8>::new(&net, &word(0));
        let lane0 = |s: &Simulator<u8>| -> Vec<u8> { s.outputs().map(|w| w & 1).collect() };
        let mut outs: Vec<Vec<u8>> = vec![lane0(&sim)];
        for t in 1..first {
            sim.advance(&word(t));
            outs.push(lane0(&sim));
        }
        let mut resumed = sim.clone();
        for t in first..first + second {
            resumed.advance(&word(t));
            outs.push(lane0(&resumed));
        }
        for (t, o) in outs.iter().enumerate() {
            let want: Vec<u8> = whole.get(t).iter().map(|&b| b as u8).collect();
            prop_assert_eq!(o, &want, "moment {}", t);
        }
    }

    #[test]
    fn clamped_equals_one_vector_sequence((g, mut rng) in graph_and_rng(), horizon in 0usize..60) {
        let delay = rng.random_range(0..=g.size());
        let a = AType::new(g, delay);
        let x: Vec<bool> = (0..a.graph.input_dim()).map(|_| rng.random()).collect();
        let single = BooleanSequence::from_vectors(x.len(), std::slice::from_ref(&x)).unwrap();
        let clamped = run_clamped(&a, &x, horizon).unwrap();
        prop_assert_eq!(clamped.len(), horizon);
        prop_assert_eq!(clamped, run(&a, &single, horizon).unwrap());
    }

    #[test]
    fn nodes_that_cannot_reach_outputs_do_not_matter((g, mut rng) in graph_and_rng(), flip_at in 0usize..20) {
        // Inject a junk NAND nobody reads.
        let mut kinds = g.kinds().to_vec();
        let mut arrows = g.arrows().to_vec();
        let junk = kinds.len();
        kinds.push(NodeKind::Nand);
        let non_outputs: Vec<usize> = (0..g.size()).filter(|v| !g.output_order().contains(v)).collect();
        for _ in 0..2 {
            arrows.push((non_outputs[rng.random_range(0..non_outputs.len())], junk));
        }
        let g = ATypeGraph::from_parts(kinds, arrows, g.input_order().to_vec(), g.output_order().to_vec());
        prop_assert!(validate(&g).is_empty());

        // Nodes from which no output is reachable.
        let mut reaches = vec![false; g.size()];
        for &o in g.output_order() {
            reaches[o] = true;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for &(s, d) in g.arrows() {
                if reaches[d] && !reaches[s] {
                    reaches[s] = true;
                    changed = true;
                }
            }
        }
        prop_assert!(!reaches[junk]);

        let net = Network::compile(&g);
        let input = random_input(g.input_dim(), flip_at + 30, &mut rng);
        let word = |t: usize| -> Vec<u8> { input.get(t).iter().map(|&b| b as u8).collect() };
        let mut a = Simulator::<u8>::new(&net, &word(0));
        for t in 1..=flip_at {
            a.advance(&word(t));
        }
        let mut b = a.clone();
        for (v, &r) in reaches.iter().enumerate() {
            if !r && g.kind(v) != NodeKind::Input {
                b.state_mut()[v] ^= 1;
            }
        }
        for t in flip_at + 1..flip_at + 30 {
            prop_assert_eq!(a.outputs().collect::<Vec<_>>(), b.outputs().collect::<Vec<_>>());
            a.advance(&word(t));
            b.advance(&word(t));
        }
    }

    #[test]
    fn fitness_is_bounded_and_penalised_by_size(
        n in 1usize..=3,
        extra in 1usize..=10,
        seed in any::<u64>(),
        bound in 1usize..20,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_atype(&GenConfig::new(2 * n + extra, 2 * n + extra, n, n, 0.2), &mut rng).unwrap();
        let t = training_set(&Concept::identity(n), &TrainingParams::default(), &mut rng).unwrap();
        let delay = rng.random_range(0..=g.size());
        let cfg = FitnessConfig::<f64>::new(bound);
        let raw = fitness(&g, delay, &t, &FitnessConfig::<f64>::new(usize::MAX));
        let v = fitness(&g, delay, &t, &cfg);
        prop_assert!((0.0..=1.0).contains(&raw));
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(v >= raw);
        prop_assert_eq!(v, cfg.penalize(raw, g.size()));
    }

    #[test]
    fn penalty_is_monotone_in_size(d in 0.0f64..=1.0, bound in 1usize..50, size in 1usize..100) {
        let cfg = FitnessConfig::<f64>::new(bound);
        let here = cfg.penalize(d, size);
        prop_assert!((0.0..=1.0).contains(&here));
        prop_assert!(cfg.penalize(d, size + 1) >= here);
        if size <= bound {
            prop_assert_eq!(here, d);
        }
    }

    #[test]
    fn worse_fitness_never_raises_parent_odds(
        fit in prop::collection::vec(0.0f64..=1.0, 2..10),
        who in any::<prop::sample::Index>(),
        bump in 0.0f64..=1.0,
    ) {
        let cfg = SelectionConfig::<f64>::default();
        let i = who.index(fit.len());
        let prob = |f: &[f64], w: fn(&SelectionConfig<f64>, f64) -> f64| {
            let total: f64 = f.iter().map(|&x| w(&cfg, x)).sum();
            w(&cfg, f[i]) / total
        };
        let mut worse = fit.clone();
        worse[i] += bump;
        prop_assert!(prob(&worse, SelectionConfig::parent_weight) <= prob(&fit, SelectionConfig::parent_weight) + 1e-12);
        prop_assert!(prob(&worse, SelectionConfig::victim_weight) + 1e-12 >= prob(&fit, SelectionConfig::victim_weight));
        // The sampler respects the same ordering at its extremes.
        let mut rng = ChaCha8Rng::seed_from_u64(fit.len() as u64);
        prop_assert!(select_parent(&fit, &cfg, &mut rng) < fit.len());
    }

    #[test]
    fn carry_window_matches_brute_force(n in 1usize..=8, extra in 0usize..=42, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = n + extra;
        let bits: Vec<bool> = (0..len).map(|_| rng.random()).collect();
        let vectors: Vec<Vec<bool>> = bits.iter().map(|&b| vec![b]).collect();
        let input = BooleanSequence::from_vectors(1, &vectors).unwrap();
        let out = Concept::carry(n).apply(&input).unwrap();
        prop_assert_eq!(out.len(), len - n + 1);
        for i in 0..out.len() {
            for k in 0..n {
                prop_assert_eq!(out.get(i)[k], bits[i + k]);
            }
        }
    }

    #[test]
    fn columnwise_applies_per_vector(seed in any::<u64>(), len in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for f in [BooleanFunction::Xor, BooleanFunction::And, BooleanFunction::Identity(3)] {
            let input = random_input(f.input_dim(), len, &mut rng);
            let out = Concept::columnwise(f).apply(&input).unwrap();
            for t in 0..len {
                prop_assert_eq!(out.get(t).to_vec(), f.eval(input.get(t)).unwrap());
            }
        }
    }

    #[test]
    fn training_examples_follow_the_concept(n in 1usize..=4, family in 0usize..3, seed in any::<u64>()) {
        let concept = match family {
            0 => Concept::identity(n),
            1 => Concept::multiplexer(n + 1),
            _ => Concept::carry(n),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = training_set(&concept, &TrainingParams::default(), &mut rng).unwrap();
        for e in t.examples() {
            let want = match concept {
                Concept::Carry(_) => concept.apply(&e.input).unwrap(),
                _ => concept.clamped_target(e.input.get(0), e.expected.len()).unwrap(),
            };
            prop_assert_eq!(&e.expected, &want);
        }
    }
}

#[test]
fn multiplexer_truth_table() {
    for n in 2..=5usize {
        let f = BooleanFunction::Multiplexer(n);
        let s = f.input_dim() - n;
        for code in 0..1usize << f.input_dim() {
            let x: Vec<bool> = (0..f.input_dim()).map(|i| code >> (f.input_dim() - 1 - i) & 1 == 1).collect();
            let selected = x[..s].iter().fold(0usize, |acc, &b| acc * 2 + b as usize);
            match f.eval(&x) {
                Ok(y) => {
                    assert!(selected < n);
                    assert_eq!(y, vec![x[s + selected]]);
                }
                Err(_) => assert!(selected >= n),
            }
        }
    }
}

#[test]
fn delay_fraction_of_generator() {
    let cfg = GenConfig::new(8, 40, 2, 1, 0.2);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (mut delays, mut total) = (0usize, 0usize);
    for _ in 0..10_000 {
        let g = random_atype(&cfg, &mut rng).unwrap();
        assert!(validate(&g).is_empty());
        for &k in &g.kinds()[2..] {
            total += 1;
            delays += (k == NodeKind::Delay) as usize;
        }
    }
    let frac = delays as f64 / total as f64;
    assert!((frac - 0.2).abs() < 0.02, "{frac}");
}
