//! Acceptance suite. Each test checks one release gate at its stated
//! tolerance and prints a PASS line (visible with `--nocapture`):
//!
//! 1. closed-form kernels vs. independent re-evaluations,
//! 2. exact schedule endpoints,
//! 3. mass normalization and positivity,
//! 4. fixed-threshold binarization logic,
//! 5. the annealing contract (improvement, acceptance law, walk length),
//! 6. optimizer-vs-oracle equivalence at desk scale,
//! 7. benchmark accuracy against the full-feature baseline,
//! 8. convergence-curve behavior,
//! 9. bit-for-bit reproducibility, sequential and parallel.

use asofs::anneal::{anneal, boltzmann_accept, boltzmann_p, AnnealSchedule};
use asofs::data::SplitSpec;
use asofs::dynamics::{compute_masses, depth_eta, drift_g, h_bounds, neighbor_count, pair_force_scalar, DynamicsParams};
use asofs::eval::{fitness, FitnessWeights};
use asofs::mask::FeatureMask;
use asofs::oracle::exhaustive_oracle;
use asofs::report::RunReport;
use asofs::search::{build_context, run, Method, OptimizerConfig};
use asofs::synth;
use asofs::transfer::{apply_flip, transfer, FlipPolicy, TransferKind};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::OnceLock;

/// Direct transcriptions of the governing formulas, kept separate from
/// the implementations they check.
mod reference {
    pub fn depth(t: f64, t_max: f64, alpha: f64) -> f64 {
        alpha * (1.0 - (t - 1.0) / t_max).powi(3) * (-20.0 * t / t_max).exp()
    }

    pub fn drift(t: f64, t_max: f64) -> f64 {
        0.1 * (std::f64::consts::PI / 2.0 * (t / t_max)).sin()
    }

    pub fn pair_force(h: f64, eta: f64) -> f64 {
        -eta * (2.0 * h.powi(13) - h.powi(7))
    }

    pub fn masses(fits: &[f64]) -> Vec<f64> {
        let best = fits.iter().copied().fold(f64::INFINITY, f64::min);
        let worst = fits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = fits
            .iter()
            .map(|&f| {
                if worst == best {
                    1.0
                } else {
                    (-(f - best) / (worst - best)).exp()
                }
            })
            .collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|m| m / sum).collect()
    }

    pub fn neighbors(t: f64, t_max: f64, n: f64) -> usize {
        let raw = n - (n - 2.0) * (t / t_max).sqrt();
        ((raw + 0.5).floor() as usize).clamp(2, n as usize)
    }

    pub fn s_shape(v: f64) -> f64 {
        1.0 / (1.0 + (-v).exp())
    }

    pub fn v_shape(v: f64) -> f64 {
        v.tanh().abs()
    }

    pub fn fitness(error: f64, selected: f64, total: f64, omega: f64) -> f64 {
        omega * error + (1.0 - omega) * (selected / total)
    }

    pub fn boltzmann(cur: f64, best: f64, temp: f64) -> f64 {
        (-(cur - best) / temp).exp()
    }

    pub fn walk_length(initial: f64, stop: f64, cooling: f64) -> usize {
        if initial <= stop {
            0
        } else {
            ((initial / stop).ln() / (1.0 / cooling).ln()).ceil() as usize
        }
    }
}

fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let denom = want.abs().max(got.abs()).max(1e-300);
    assert!(
        (got - want).abs() <= tol * denom,
        "{what}: got {got}, reference {want}"
    );
}

#[test]
fn closed_form_reference_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let draws = 1_000;
    let tol = 1e-12;

    for _ in 0..draws {
        let t_max = rng.gen_range(1usize..=100);
        let t = rng.gen_range(1usize..=t_max);
        let alpha = rng.gen_range(0.0..100.0);
        let params = DynamicsParams {
            alpha,
            iterations: t_max,
            ..DynamicsParams::default()
        };
        assert_rel(
            depth_eta(t, &params),
            reference::depth(t as f64, t_max as f64, alpha),
            tol,
            "depth",
        );
        assert_rel(
            drift_g(t, t_max),
            reference::drift(t as f64, t_max as f64),
            tol,
            "drift",
        );

        let h = rng.gen_range(0.05..2.0);
        let eta = rng.gen_range(0.0..80.0);
        assert_rel(
            pair_force_scalar(h, eta),
            reference::pair_force(h, eta),
            tol,
            "pair force",
        );

        let n = rng.gen_range(2usize..=100);
        assert_eq!(
            neighbor_count(t, t_max, n),
            reference::neighbors(t as f64, t_max as f64, n as f64),
            "neighbor count at t={t} T={t_max} N={n}"
        );

        let v = rng.gen_range(-20.0..20.0);
        assert_rel(transfer(TransferKind::SShaped, v), reference::s_shape(v), tol, "s-shape");
        assert_rel(transfer(TransferKind::VShaped, v), reference::v_shape(v), tol, "v-shape");

        let len = rng.gen_range(1usize..40);
        let fits: Vec<f64> = if rng.gen_bool(0.05) {
            vec![rng.gen_range(-5.0..5.0); len]
        } else {
            (0..len).map(|_| rng.gen_range(-1000.0..1000.0)).collect()
        };
        let got = compute_masses(&fits);
        let want = reference::masses(&fits);
        for (g, w) in got.iter().zip(&want) {
            assert_rel(*g, *w, tol, "mass");
        }

        let error = rng.gen_range(0.0..=1.0);
        let total = rng.gen_range(1usize..=200);
        let selected = rng.gen_range(1usize..=total);
        let omega = rng.gen_range(0.0..=1.0);
        assert_rel(
            fitness(error, selected, total, &FitnessWeights { omega }),
            reference::fitness(error, selected as f64, total as f64, omega),
            tol,
            "fitness",
        );

        let best = rng.gen_range(-10.0..10.0);
        let cur = best + rng.gen_range(0.0..10.0);
        let temp = rng.gen_range(1e-3..100.0);
        assert_rel(
            boltzmann_p(cur, best, temp),
            reference::boltzmann(cur, best, temp),
            tol,
            "boltzmann",
        );
        // non-worse candidates are certain
        assert_eq!(boltzmann_p(best - rng.gen_range(0.0..5.0), best, temp), 1.0);
    }
    println!("PASS closed-form suite: 8 kernels x {draws} draws, rel err <= {tol:e}");
}

#[test]
fn schedule_endpoints_are_exact() {
    for n in 2..=100 {
        for t_max in 1..=100 {
            assert_eq!(neighbor_count(t_max, t_max, n), 2, "K(T) with N={n} T={t_max}");
        }
    }
    for t_max in 1..=100 {
        assert_eq!(drift_g(t_max, t_max), 0.1, "drift endpoint at T={t_max}");
    }
    for g0 in [0.3, 0.9, 1.1] {
        let params = DynamicsParams {
            g0,
            u: g0 + 0.2,
            ..DynamicsParams::default()
        };
        let (h_min, h_max) = h_bounds(params.iterations, &params);
        assert_eq!(h_min, g0 + 0.1, "h_min endpoint for g0={g0}");
        assert_eq!(h_max, params.u);
    }
    println!("PASS schedule endpoints: K(T)==2 on [2,100]x[1,100], drift(T)==0.1, h_min(T)==g0+0.1");
}

#[test]
fn mass_normalization_and_positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    let vectors = 10_000;
    for i in 0..vectors {
        let len = rng.gen_range(1usize..=64);
        let fits: Vec<f64> = if i % 100 == 0 {
            vec![rng.gen_range(-1e6..1e6); len] // degenerate all-equal
        } else {
            (0..len).map(|_| rng.gen_range(-1e6..1e6)).collect()
        };
        let masses = compute_masses(&fits);
        let sum: f64 = masses.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-9, "sum {sum} off unity");
        for m in masses {
            assert!(m > 0.0 && m <= 1.0, "mass {m} outside (0,1]");
        }
    }
    println!("PASS mass normalization: {vectors} vectors, sum within 1e-9, entries in (0,1]");
}

#[test]
fn fixed_threshold_binarization_logic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF11B);
    let vectors = 10_000;
    let cut = 0.5f64.atanh();
    for _ in 0..vectors {
        let dim = rng.gen_range(1usize..=32);
        let velocity: Vec<f64> = (0..dim).map(|_| rng.gen_range(-8.0..8.0)).collect();
        let mask = FeatureMask::bernoulli(dim, &mut rng);

        let s_out = apply_flip(&mask, &velocity, TransferKind::SShaped, FlipPolicy::Fixed(0.5), &mut rng);
        let v_out = apply_flip(&mask, &velocity, TransferKind::VShaped, FlipPolicy::Fixed(0.5), &mut rng);
        for (d, &v) in velocity.iter().enumerate() {
            assert_eq!(s_out.get(d) != mask.get(d), v > 0.0, "s-shape flip at v={v}");
            assert_eq!(v_out.get(d) != mask.get(d), v.abs() > cut, "v-shape flip at v={v}");
        }
    }
    println!("PASS binarization: fixed(0.5) S flips v>0 and V flips |v|>atanh(0.5), {vectors} vectors");
}

#[test]
fn annealing_contract() {
    // (a) the walk never returns worse than its input, 1000 random starts
    let ds = synth::two_feature_xor(80, 3, 99);
    let ctx = build_context(&ds, 5, FitnessWeights::default(), &SplitSpec::default()).unwrap();
    let schedule = AnnealSchedule::for_feature_count(ds.feature_count());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5A5A);
    let starts = 1_000;
    for _ in 0..starts {
        let mut mask = FeatureMask::bernoulli(ds.feature_count(), &mut rng);
        let start = ctx.evaluate(&mut mask, &mut rng);
        let outcome = anneal(&mask, start, &ctx, &schedule, &mut rng);
        assert!(outcome.value.fitness <= start.fitness);
        assert_eq!(outcome.neighbors_evaluated, schedule.neighbor_budget());
    }

    // (b) worse-neighbor acceptance frequency follows the Boltzmann law
    for (gap, temp) in [(0.2f64, 0.5f64), (1.0, 1.0), (0.05, 0.6), (2.0, 1.3)] {
        let expected: f64 = (-gap / temp).exp();
        let trials = 10_000;
        let accepted = (0..trials)
            .filter(|_| boltzmann_accept(1.0 + gap, 1.0, temp, &mut rng))
            .count();
        let freq = accepted as f64 / trials as f64;
        assert!(
            (freq - expected).abs() <= 0.05,
            "acceptance at gap {gap} temp {temp}: {freq} vs {expected}"
        );
    }

    // (c) walk length equals the closed form, exactly, across schedules
    for d in 1..=200 {
        let schedule = AnnealSchedule::for_feature_count(d);
        let want = reference::walk_length(2.0 * d as f64, 1.0, 0.93);
        assert_eq!(schedule.neighbor_budget(), want, "budget for d={d}");
    }
    for (initial, stop) in [(68.0, 1.0), (20.0, 0.5), (5.0, 4.9), (1.0, 2.0)] {
        let schedule = AnnealSchedule {
            initial_temp: initial,
            cooling_factor: 0.93,
            stop_temp: stop,
            compare_to_current: false,
        };
        assert_eq!(
            schedule.neighbor_budget(),
            reference::walk_length(initial, stop, 0.93)
        );
    }
    println!(
        "PASS annealing contract: {starts} non-worsening walks, acceptance law within 0.05, exact walk lengths"
    );
}

#[test]
fn oracle_equivalence_at_desk_scale() {
    let ds = synth::two_feature_xor(200, 8, 42);
    assert_eq!((ds.instances(), ds.feature_count()), (200, 10));

    let seeds: Vec<u64> = (0..10).collect();
    let outcomes: Vec<(f64, f64)> = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = OptimizerConfig::for_method(Method::AsovSa, seed);
            let report = run(&cfg, &ds).unwrap();
            let oracle =
                exhaustive_oracle(&ds, cfg.weights, cfg.knn_k, &cfg.split_spec()).unwrap();
            assert_eq!(oracle.masks_evaluated, 1023);
            assert!(
                oracle.value.fitness <= report.best_fitness,
                "oracle must lower-bound the search"
            );
            (report.best_fitness, oracle.value.fitness)
        })
        .collect();

    let hits = outcomes
        .iter()
        .filter(|(found, optimum)| (found - optimum) / optimum <= 0.05)
        .count();
    assert!(
        hits >= 8,
        "only {hits}/10 seeds within 5% of the enumerated optimum: {outcomes:?}"
    );
    println!("PASS oracle equivalence: asov-sa within 5% of the 1023-mask optimum in {hits}/10 seeds");
}

// ---- shared benchmark runs for the two criteria below ----

struct BenchmarkRun {
    dataset: String,
    method: Method,
    report: RunReport,
    full_set_accuracy: f64,
}

fn benchmark_runs() -> &'static Vec<BenchmarkRun> {
    static RUNS: OnceLock<Vec<BenchmarkRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let datasets = [synth::wine_like(2024), synth::zoo_like(2024)];
        let mut jobs = Vec::new();
        for ds in &datasets {
            for method in Method::ALL {
                for seed in 0..10u64 {
                    jobs.push((ds, method, seed));
                }
            }
        }
        jobs.into_par_iter()
            .map(|(ds, method, seed)| {
                let cfg = OptimizerConfig::for_method(method, seed);
                let report = run(&cfg, ds).expect("benchmark run");
                let ctx = build_context(ds, cfg.knn_k, cfg.weights, &cfg.split_spec()).unwrap();
                let full = FeatureMask::from_bits(vec![true; ds.feature_count()]);
                let full_value = ctx.evaluate_strict(&full).unwrap();
                BenchmarkRun {
                    dataset: ds.name.clone(),
                    method,
                    report,
                    full_set_accuracy: 1.0 - full_value.error_rate,
                }
            })
            .collect()
    })
}

#[test]
fn benchmark_accuracy_and_subset_size() {
    let runs = benchmark_runs();
    for (dataset, total) in [("wine-synth", 13.0), ("zoo-synth", 16.0)] {
        let cell: Vec<&BenchmarkRun> = runs
            .iter()
            .filter(|r| r.dataset == dataset && r.method == Method::AsosSa)
            .collect();
        assert_eq!(cell.len(), 10);

        // best paired margin: selection vs the full set on the same split
        let best_margin = cell
            .iter()
            .map(|r| r.report.test_accuracy - r.full_set_accuracy)
            .fold(f64::NEG_INFINITY, f64::max);
        let best_accuracy = cell
            .iter()
            .map(|r| r.report.test_accuracy)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            best_margin >= 0.0,
            "{dataset}: best-of-10 asos-sa never reached its split's full-set accuracy"
        );

        let mean_selected = cell
            .iter()
            .map(|r| r.report.selected_count as f64)
            .sum::<f64>()
            / cell.len() as f64;
        assert!(
            mean_selected <= 0.75 * total,
            "{dataset}: mean selected {mean_selected} > 0.75 * {total}"
        );
        println!(
            "PASS benchmark {dataset}: best accuracy {best_accuracy:.4} (margin {best_margin:+.4} vs full set), mean selected {mean_selected:.1}/{total}"
        );
    }
}

#[test]
fn convergence_curves_flatten() {
    let runs = benchmark_runs();
    for dataset in ["wine-synth", "zoo-synth"] {
        for method in Method::ALL {
            let cell: Vec<&BenchmarkRun> = runs
                .iter()
                .filter(|r| r.dataset == dataset && r.method == method)
                .collect();
            assert_eq!(cell.len(), 10);

            let mut flat = 0usize;
            for r in &cell {
                let curve = &r.report.convergence;
                assert_eq!(curve.len(), 30);
                assert!(
                    curve.windows(2).all(|w| w[1] <= w[0]),
                    "{dataset}/{method:?}: increasing curve {curve:?}"
                );
                let tail = &curve[curve.len() - 5..];
                if tail.iter().all(|v| *v == tail[0]) {
                    flat += 1;
                }
            }
            assert!(
                flat > 5,
                "{dataset}/{}: only {flat}/10 curves flat over the last 5 iterations",
                method.label()
            );
            println!(
                "PASS convergence {dataset}/{}: non-increasing 10/10, flat tail {flat}/10",
                method.label()
            );
        }
    }
}

#[test]
fn runs_are_bit_reproducible() {
    let ds = synth::two_feature_xor(120, 6, 7);
    for parallel in [false, true] {
        let mut cfg = OptimizerConfig::for_method(Method::AsosSa, 31);
        cfg.population_size = 10;
        cfg.dynamics.iterations = 12;
        cfg.parallel = parallel;
        let a = run(&cfg, &ds).unwrap();
        let b = run(&cfg, &ds).unwrap();
        assert_eq!(
            a.without_timing().to_json(),
            b.without_timing().to_json(),
            "parallel={parallel}: reports differ"
        );
    }
    // the parallel path computes the very same result
    let mut cfg = OptimizerConfig::for_method(Method::AsovSa, 77);
    cfg.population_size = 10;
    cfg.dynamics.iterations = 12;
    let sequential = run(&cfg, &ds).unwrap();
    cfg.parallel = true;
    let parallel = run(&cfg, &ds).unwrap();
    assert_eq!(sequential.best_mask, parallel.best_mask);
    assert_eq!(sequential.convergence, parallel.convergence);
    assert_eq!(sequential.test_accuracy, parallel.test_accuracy);
    println!("PASS determinism: byte-identical reports (timing zeroed), sequential == parallel");
}
