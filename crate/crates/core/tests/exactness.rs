use miskernel::generators::gnp;
use miskernel::kernelizer::PartitionSource;
use miskernel::lp::{apply_lp, solve_lp};
use miskernel::oracle::{brute_force_mis, mis_by_enumeration, validate_independent};
use miskernel::reductions::{Phase, ReductionLog};
use miskernel::restore::undo_all;
use miskernel::{kernelize, Graph, KernelizerConfig, Mode};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(workers: usize, mode: Mode, seed: u64) -> KernelizerConfig {
    KernelizerConfig { mode, seed, tracking: false, ..KernelizerConfig::with_workers(workers) }
}

fn lifted_size(g: &Graph, cfg: &KernelizerConfig) -> usize {
    let r = kernelize(g, cfg).unwrap();
    let k = brute_force_mis(&r.kernel).unwrap();
    let lifted = r.lift(&k.witness).unwrap();
    assert!(validate_independent(g, &lifted).unwrap());
    assert_eq!(lifted.len(), r.offset + k.size);
    lifted.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifted_solution_is_maximum(n in 4usize..19, p in 0.05f64..0.6, seed in any::<u64>(), workers in 1usize..4, full in any::<bool>()) {
        let g = gnp(n, p, seed);
        let best = brute_force_mis(&g).unwrap().size;
        let mode = if full { Mode::Full } else { Mode::Quasi };
        prop_assert_eq!(lifted_size(&g, &config(workers, mode, seed)), best);
    }

    #[test]
    fn enumeration_agrees_with_branching(n in 1usize..17, p in 0.0f64..0.8, seed in any::<u64>()) {
        let g = gnp(n, p, seed);
        prop_assert_eq!(mis_by_enumeration(&g).unwrap(), brute_force_mis(&g).unwrap().size);
    }

    #[test]
    fn lp_removal_is_safe(n in 2usize..19, p in 0.05f64..0.5, seed in any::<u64>()) {
        let g0 = gnp(n, p, seed);
        let mut g = g0.clone();
        let x = solve_lp(&g, 1, seed).unwrap();
        prop_assert!(x.is_feasible(&g0));
        let before = brute_force_mis(&g0).unwrap().size;
        let offset = apply_lp(&mut g, &x).unwrap().map_or(0, |r| r.offset());
        g.check_invariants().unwrap();
        prop_assert_eq!(offset + brute_force_mis(&g).unwrap().size, before);
    }
}

/// Blocks of one round touch disjoint vertex sets, so their undo segments
/// commute.
#[test]
fn local_segments_of_a_round_commute() {
    let (mut tried, mut multi) = (0, 0);
    for seed in 0..40u64 {
        let g = gnp(36, 0.09, seed);
        let cfg = KernelizerConfig {
            blocks: 4,
            partition: PartitionSource::Internal,
            ..config(2, Mode::Quasi, seed)
        };
        let r = kernelize(&g, &cfg).unwrap();
        if r.kernel.live_count() > 40 {
            continue;
        }
        let k = brute_force_mis(&r.kernel).unwrap();
        let expect = brute_force_mis(&g).unwrap().size;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let mut log = ReductionLog::new();
            let mut i = 0;
            let segs = &r.log.segments;
            while i < segs.len() {
                let mut j = i + 1;
                if let Phase::Local { round, .. } = segs[i].phase {
                    while j < segs.len() && matches!(segs[j].phase, Phase::Local { round: r2, .. } if r2 == round) {
                        j += 1;
                    }
                }
                multi += (j - i > 1) as usize;
                let mut group: Vec<_> = segs[i..j].to_vec();
                group.shuffle(&mut rng);
                for s in group {
                    log.push_segment(s.phase, s.records);
                }
                i = j;
            }
            let out = undo_all(&log, &r.kernel, &k.witness, &r.vertex_map, r.working_capacity, r.input_vertices).unwrap();
            assert!(validate_independent(&g, &out).unwrap());
            assert_eq!(out.len(), expect, "seed {seed}");
        }
        tried += 1;
    }
    assert!(tried >= 20, "only {tried} small kernels");
    assert!(multi > 0, "no round had more than one block segment");
}

#[test]
fn removal_counts_sum_to_size_drop() {
    for seed in 0..20u64 {
        let g = gnp(300, 0.012, seed);
        for mode in [Mode::Quasi, Mode::Full] {
            let r = kernelize(&g, &config(1 + seed as usize % 3, mode, seed)).unwrap();
            let s = &r.stats;
            assert_eq!(s.removals.total(), s.input_vertices - s.kernel_vertices, "seed {seed}");
            assert_eq!(s.kernel_vertices, r.kernel.live_count());
            assert_eq!(s.offset, r.offset);
        }
    }
}

#[test]
fn sequential_runs_are_deterministic() {
    let g = gnp(500, 0.008, 11);
    let cfg = config(1, Mode::Quasi, 5);
    let a = kernelize(&g, &cfg).unwrap();
    let b = kernelize(&g, &cfg).unwrap();
    assert_eq!(a.kernel.edges(), b.kernel.edges());
    assert_eq!(a.vertex_map, b.vertex_map);
    assert_eq!(a.log, b.log);
}
