//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them on success; failures dump
//! their output regardless).
//!
//! Every threshold is pinned here, not calibrated at runtime. Seeds are
//! fixed so each criterion is a deterministic computation.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::Zero;

use rlg::census;
use rlg::experiments::{self, MethodSet, Model, SweepBudgets, SweepConfig};
use rlg::fixtures;
use rlg::multigraph::Multigraph;
use rlg::nbcore;
use rlg::rng::RngStream;
use rlg::sampler;
use rlg::spectra;
use rlg::theory;

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Assert and report a criterion's runtime cap.
fn check_runtime(name: &str, started: std::time::Instant, cap_secs: u64) {
    let elapsed = started.elapsed();
    println!("criterion {name} runtime: {:.1}s (cap {cap_secs}s)", elapsed.as_secs_f64());
    assert!(
        elapsed.as_secs() <= cap_secs,
        "criterion {name} took {elapsed:?}, over the {cap_secs}s cap"
    );
}

/// N_simp with the k > n convention (no simple loop outlives the
/// vertex count).
fn nsimp(g: &Multigraph, k: usize) -> BigUint {
    if k <= g.vertices() {
        census::count_simple_loops(g, k).unwrap()
    } else {
        BigUint::zero()
    }
}

#[test]
fn criterion_1_mobius_trace_identity() {
    let started = std::time::Instant::now();
    let kmax = 10;
    let mut graphs = 0;
    for i in 0..100u64 {
        let (d, n) = if i % 2 == 0 {
            (3usize, 6 + 2 * ((i / 2) % 10) as usize) // even n in [6, 24]
        } else {
            (4usize, 6 + ((i / 2) % 19) as usize) // any n in [6, 24]
        };
        let g = sampler::sample_configuration(d, n, RngStream::new(0xC1, i)).unwrap();
        let traces = census::nb_traces_upto(&g, kmax, 10_000_000).unwrap();
        for k in 1..=kmax {
            let mut divisor_sum = BigUint::zero();
            for r in census::divisors(k as u64) {
                let nprim = census::count_primitive_loops_from_traces(&traces, r as usize).unwrap();
                divisor_sum += nprim * BigUint::from(r);
            }
            assert_eq!(
                divisor_sum, traces[k],
                "divisor identity failed: graph {i} (d={d}, n={n}), k={k}"
            );
            let n_prim = census::count_primitive_loops_from_traces(&traces, k).unwrap();
            let n_simp = nsimp(&g, k);
            assert!(n_simp <= n_prim, "graph {i} k={k}: N_simp > N_prim");
            assert!(
                n_prim <= theory::primitive_upper_bound(d, n, k),
                "graph {i} k={k}: N_prim > n d^k"
            );
        }
        graphs += 1;
    }
    println!("criterion 1 (Moebius/trace identity): {} - {graphs} graphs, k <= {kmax}", status(true));
    check_runtime("1", started, 120);
}

#[test]
fn criterion_2_oracle_equivalence() {
    let started = std::time::Instant::now();
    let mut graphs: Vec<Multigraph> = vec![fixtures::k4(), fixtures::b2()];
    for i in 0..30u64 {
        let n = [4, 6, 8, 10][(i % 4) as usize];
        graphs.push(sampler::sample_configuration(3, n, RngStream::new(0xC2, i)).unwrap());
    }
    let mut excess_checked = 0u32;
    for (gi, g) in graphs.iter().enumerate() {
        for k in 1..=7usize {
            let loops = census::enumerate_loops_oracle(g, k, 10_000_000).unwrap();
            let simple = loops.iter().filter(|l| l.simple).count();
            let prim = loops.iter().filter(|l| l.primitive()).count();
            assert_eq!(
                nsimp(g, k),
                BigUint::from(simple),
                "graph {gi} k={k}: simple count vs oracle"
            );
            assert_eq!(
                census::count_primitive_loops(g, k).unwrap(),
                BigUint::from(prim),
                "graph {gi} k={k}: primitive count vs oracle"
            );
            for l in &loops {
                if l.primitive() && !l.simple {
                    let excess = nbcore::walk_excess(g, &l.edges).unwrap();
                    assert!(excess >= 2, "graph {gi} k={k}: primitive non-simple loop with excess {excess}");
                    excess_checked += 1;
                }
            }
        }
    }
    assert!(excess_checked > 0);
    println!(
        "criterion 2 (oracle equivalence): {} - {} graphs, {excess_checked} primitive non-simple loops all had excess >= 2",
        status(true),
        graphs.len()
    );
    check_runtime("2", started, 60);
}

#[test]
fn criterion_3_exact_expectation_vs_exhaustive() {
    let started = std::time::Instant::now();
    for (d, n, budget) in [(3usize, 2usize, 100u128), (3, 4, 20_000)] {
        for k in 1..=4usize {
            let mut total = BigUint::zero();
            let pairings = sampler::enumerate_all_pairings(d, n, budget, |g| {
                total += nsimp(g, k);
            })
            .unwrap();
            let average = BigRational::new(BigInt::from(total), BigInt::from(pairings));
            let expected = theory::exact_expected_simple(d, n, k).unwrap();
            assert_eq!(average, expected, "(d={d}, n={n}, k={k}) exhaustive average");
        }
    }
    println!(
        "criterion 3 (exact expectation vs exhaustive enumeration): {} - (3,2) over 15 and (3,4) over 10395 pairings, k in 1..=4, rational equality",
        status(true)
    );
    check_runtime("3", started, 30);
}

#[test]
fn criterion_4_monte_carlo_mean_and_concentration() {
    let started = std::time::Instant::now();
    let (d, n, k) = (3usize, 2500usize, 8usize);
    let config = SweepConfig {
        d,
        n_values: vec![n],
        k_values: vec![k],
        replicates: 1000,
        seed: 0xC4,
        model: Model::Configuration,
        methods: MethodSet { dfs: true, exact_trace: false, spectral: false, walk_sample: false },
        budgets: SweepBudgets::default(),
        concentration_epsilon: 0.25,
        gap_epsilon: 0.1,
    };
    let result = experiments::run_sweep(&config).unwrap();
    let cell = &result.cells[0];
    assert!(cell.skipped.is_empty());

    let exact = theory::rational_to_f64(&theory::exact_expected_simple(d, n, k).unwrap());
    let mean = cell.mean_nsimp.unwrap();
    let se = cell.se_nsimp.unwrap();
    let mean_ok = (mean - exact).abs() <= 3.0 * se;
    println!(
        "criterion 4a (mean within 3 SE of exact): {} - mean {mean:.3}, exact {exact:.3}, se {se:.3}",
        status(mean_ok)
    );

    let second = cell.second_moment_nsimp.unwrap();
    let ratio = second * (k * k) as f64 / ((d - 1) as f64).powi(2 * k as i32);
    let second_ok = (0.8..=1.5).contains(&ratio);
    println!(
        "criterion 4b (second-moment ratio in [0.8, 1.5]): {} - ratio {ratio:.3}",
        status(second_ok)
    );

    let conc = cell.conc_fraction.unwrap();
    let conc_ok = conc >= 0.85;
    println!(
        "criterion 4c (concentration fraction >= 0.85 at eps = 0.25): {} - fraction {conc:.3}",
        status(conc_ok)
    );

    check_runtime("4", started, 300);
    assert!(mean_ok, "mean {mean} vs exact {exact} (3 se = {})", 3.0 * se);
    assert!(second_ok, "second-moment ratio {ratio} outside [0.8, 1.5]");
    // The fluctuation of the length-k count at fixed k is Poisson-like
    // (variance ~ mean/2 per orientation pair), which caps this share
    // near 0.62 for k = 8 regardless of n; see the ratio above sitting
    // at ~1.07 rather than 1. The threshold is asserted as specified.
    assert!(conc_ok, "concentration fraction {conc} < 0.85");
}

#[test]
fn criterion_5_transition_curve() {
    let started = std::time::Instant::now();
    // Main curve at n = 400: spectral N_tr, walk-sampled N_simp.
    let config = SweepConfig {
        d: 3,
        n_values: vec![400],
        k_values: vec![5, 10, 20, 40, 80],
        replicates: 200,
        seed: 20260810,
        model: Model::UniformSimple,
        methods: MethodSet { dfs: false, exact_trace: false, spectral: true, walk_sample: true },
        budgets: SweepBudgets { walks_per_replicate: 100_000, ..Default::default() },
        concentration_epsilon: 0.25,
        gap_epsilon: 0.1,
    };
    let result = experiments::run_sweep(&config).unwrap();
    let rows = experiments::transition_curve(&result).unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio.unwrap()).collect();
    let decreasing = ratios.windows(2).all(|w| w[0] > w[1]);
    let ends_ok = ratios[0] >= 0.9 && ratios[4] <= 0.15;
    println!(
        "criterion 5a (R strictly decreasing, R(5) >= 0.9, R(80) <= 0.15): {} - R = {:?}",
        status(decreasing && ends_ok),
        ratios.iter().map(|r| (r * 1e4).round() / 1e4).collect::<Vec<_>>()
    );
    assert!(decreasing, "R not strictly decreasing: {ratios:?}");
    assert!(ends_ok, "R endpoints out of range: {ratios:?}");

    // Per-graph ratios at n = 36 with exact counts.
    let config = SweepConfig {
        d: 3,
        n_values: vec![36],
        k_values: vec![3, 24],
        replicates: 30,
        seed: 20260811,
        model: Model::UniformSimple,
        methods: MethodSet { dfs: true, exact_trace: true, spectral: false, walk_sample: false },
        budgets: SweepBudgets::default(),
        concentration_epsilon: 0.25,
        gap_epsilon: 0.1,
    };
    let result = experiments::run_sweep(&config).unwrap();
    let median_ratio = |cell: &experiments::CellResult| -> f64 {
        // Replicates with N_tr = 0 leave the ratio undefined and are
        // excluded (flagged by their zero denominator).
        let mut ratios: Vec<f64> = cell
            .records
            .iter()
            .filter_map(|r| {
                let ns: f64 = r.nsimp_dfs.as_ref()?.parse().ok()?;
                let nt: f64 = r.ntr_exact.as_ref()?.parse().ok()?;
                (nt > 0.0).then_some(cell.k as f64 * ns / nt)
            })
            .collect();
        ratios.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
        assert!(!ratios.is_empty(), "every ratio undefined at k = {}", cell.k);
        ratios[ratios.len() / 2]
    };
    let med3 = median_ratio(&result.cells[0]);
    let med24 = median_ratio(&result.cells[1]);
    let per_graph_ok = med3 - med24 >= 0.4;
    println!(
        "criterion 5b (per-graph median ratio drop >= 0.4): {} - median(k=3) = {med3:.4}, median(k=24) = {med24:.4}",
        status(per_graph_ok)
    );
    assert!(per_graph_ok, "median drop {} < 0.4", med3 - med24);
    check_runtime("5", started, 600);
}

#[test]
fn criterion_6_spectral_mapping_validation() {
    let started = std::time::Instant::now();
    let mut worst_multiset = 0.0f64;
    let mut worst_perron = 0.0f64;
    let mut worst_trace = 0.0f64;
    for i in 0..20u64 {
        let g = sampler::sample_uniform_simple(3, 50, RngStream::new(0xC6, i), 100_000).unwrap();
        let adj = spectra::adjacency_spectrum(&g).unwrap();
        let mapped = spectra::gk_map(&adj.eigenvalues, 3, 50);
        let direct = spectra::nb_spectrum_direct(&g, 2000).unwrap();
        let dist = spectra::multiset_distance(&mapped, &direct.eigenvalues);
        assert!(dist < 1e-6, "graph {i}: multiset distance {dist:e}");
        worst_multiset = worst_multiset.max(dist);

        let perron = direct
            .eigenvalues
            .iter()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).expect("finite"))
            .unwrap();
        let perron_err = (perron - nalgebra::Complex::new(2.0, 0.0)).norm();
        assert!(perron_err < 1e-9, "graph {i}: mu_1 off by {perron_err:e}");
        worst_perron = worst_perron.max(perron_err);

        for k in 1..=12usize {
            let exact = census::count_closed_nb_walks_exact(&g, k).unwrap();
            let exact_f: f64 = exact.to_string().parse().unwrap();
            let spec = census::count_closed_nb_walks_spectral(&g, k, 2000).unwrap();
            // Relative agreement with a floor of 1 so that exact zeros
            // (e.g. triangle-free graphs at k = 3) stay comparable.
            let rel = (spec.value - exact_f).abs() / exact_f.abs().max(1.0);
            assert!(rel <= 1e-6, "graph {i} k={k}: spectral {} vs exact {exact_f}", spec.value);
            worst_trace = worst_trace.max(rel);
        }
    }
    println!(
        "criterion 6 (spectral mapping validation): {} - worst multiset {worst_multiset:.2e}, worst Perron {worst_perron:.2e}, worst trace rel {worst_trace:.2e}",
        status(true)
    );
    check_runtime("6", started, 120);
}

#[test]
fn criterion_7_spectral_gap_survey() {
    let started = std::time::Instant::now();
    let (d, n, reps, eps) = (3usize, 500usize, 100usize, 0.1f64);
    let stream = RngStream::root(20260812);
    let bound = spectra::gap_bound(eps, d).unwrap().bound;
    let mut lambda_hits = 0usize;
    let mut exceptions = 0usize;
    for i in 0..reps as u64 {
        let g = sampler::sample_uniform_simple(d, n, stream.child(i), 100_000).unwrap();
        let report = spectra::spectral_report(&g, 0).unwrap();
        let lambda = report.lambda_gap.unwrap();
        let mu = report.mu_second.unwrap();
        if lambda <= d as f64 - eps {
            lambda_hits += 1;
            if mu > bound + 1e-9 {
                exceptions += 1;
            }
        }
    }
    let share_lambda = lambda_hits as f64 / reps as f64;
    let ok = share_lambda >= 0.95 && exceptions == 0;
    println!(
        "criterion 7 (spectral gap survey): {} - share_lambda {share_lambda:.2}, per-graph bound exceptions {exceptions}",
        status(ok)
    );
    assert!(share_lambda >= 0.95, "share_lambda {share_lambda} < 0.95");
    assert_eq!(exceptions, 0, "per-graph transfer bound violated");

    // The packaged survey must agree with the manual loop above.
    let (sl, sm) = experiments::spectral_gap_survey(d, n, reps, eps, stream).unwrap();
    assert_eq!(sl, share_lambda);
    assert!(sm >= share_lambda - 0.01, "share_mu {sm} below share_lambda {share_lambda}");
    check_runtime("7", started, 600);
}

#[test]
fn criterion_8_excess_tail_scaling() {
    let started = std::time::Instant::now();
    let walks = 200_000u64;
    let t4 = experiments::excess_tail_probability(3, 4000, 10, walks, RngStream::root(20260813))
        .unwrap();
    let t8 = experiments::excess_tail_probability(3, 8000, 10, walks, RngStream::root(20260814))
        .unwrap();
    let small_ok = t4.estimate <= 1e-2;
    println!(
        "criterion 8a (excess tail at n = 4000 <= 1e-2): {} - estimate {:.2e} ({} events)",
        status(small_ok),
        t4.estimate,
        t4.events
    );
    assert!(small_ok);
    if t4.events > 30 && t8.events > 30 {
        let ratio = t4.estimate / t8.estimate;
        let ratio_ok = (2.0..=8.0).contains(&ratio);
        println!(
            "criterion 8b (halving ratio in [2, 8]): {} - ratio {ratio:.2}",
            status(ratio_ok)
        );
        assert!(ratio_ok, "scaling ratio {ratio} outside [2, 8]");
    } else {
        println!(
            "criterion 8b (halving ratio in [2, 8]): PASS - not applicable, events {} and {} below the 30-event floor",
            t4.events, t8.events
        );
    }
    check_runtime("8", started, 180);
}

#[test]
fn criterion_9_determinism_across_thread_counts() {
    let config = SweepConfig {
        d: 3,
        n_values: vec![12, 16],
        k_values: vec![2, 5],
        replicates: 10,
        seed: 0xC9,
        model: Model::Configuration,
        methods: MethodSet { dfs: true, exact_trace: true, spectral: true, walk_sample: true },
        budgets: SweepBudgets { walks_per_replicate: 500, ..Default::default() },
        concentration_epsilon: 0.25,
        gap_epsilon: 0.1,
    };
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let result = pool.install(|| experiments::run_sweep(&config).unwrap());
        (result.to_csv(), result.to_json())
    };
    let (csv1, json1) = run_with(1);
    let (csv4, json4) = run_with(4);
    let lib_ok = csv1 == csv4 && json1 == json4;

    // Same check through the CLI with RLG_THREADS.
    let bin = env!("CARGO_BIN_EXE_rlg");
    let dir = tempfile::tempdir().unwrap();
    let run_cli = |threads: &str, tag: &str| {
        let out = dir.path().join(tag);
        let status = std::process::Command::new(bin)
            .args([
                "sweep", "--d", "3", "--n", "12,16", "--k-grid", "2,5", "--seed", "201",
                "--replicates", "6", "--model", "configuration", "--methods",
                "dfs,exact-trace,spectral,walk-sample", "--budget-walks", "500",
            ])
            .arg("--out")
            .arg(&out)
            .env("RLG_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        (
            std::fs::read(out.with_extension("csv")).unwrap(),
            std::fs::read(out.with_extension("json")).unwrap(),
        )
    };
    let (csv_a, json_a) = run_cli("1", "a");
    let (csv_b, json_b) = run_cli("4", "b");
    let cli_ok = csv_a == csv_b && json_a == json_b;
    println!(
        "criterion 9 (determinism across thread counts): {} - library bytes {}, CLI bytes {}",
        status(lib_ok && cli_ok),
        if lib_ok { "identical" } else { "DIFFER" },
        if cli_ok { "identical" } else { "DIFFER" },
    );
    assert!(lib_ok && cli_ok);
}
