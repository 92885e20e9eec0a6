//! Acceptance criteria. Runs as a plain binary (`harness = false`) and prints
//! one PASS/FAIL line per criterion, with wall time against its limit.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fisher_core::discrepancy::{beck_fiala_run, discrepancy_of, max_degree, BeckFialaConfig};
use fisher_core::generators::{bounded_degree_family, near_pencil, projective_plane, sunflower};
use fisher_core::graham_pollak::{
    min_partition_bruteforce, star_partition, verify_biclique_partition,
};
use fisher_core::kernel::oracle::oracle_nullspace_trivial;
use fisher_core::kernel::{
    find_left_kernel_vector, pigeonhole_params, siegel_bound, verify_kernel, IntMatrix,
    SearchOptions, SearchOutcome, Strategy,
};
use fisher_core::prover::{
    derive_contradiction, enumerate_max_family, equation_chain, ProverError,
};
use fisher_core::{check_k_intersecting, reduce_small_set, SetFamily};

const STRATEGIES: [Strategy; 2] = [Strategy::BoxCollision, Strategy::DfsPruned];

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ac1_theorem_exhaustive() -> Result<String, String> {
    let mut runs = 0;
    for n in 1..=6usize {
        for k in [1usize, 2, 3] {
            if k >= n {
                continue;
            }
            let r =
                enumerate_max_family(n, k, u64::MAX).map_err(|e| format!("n={n} k={k}: {e}"))?;
            ensure!(r.complete, "n={n} k={k}: search incomplete");
            ensure!(
                r.max_m <= n && r.bound_respected,
                "n={n} k={k}: max_m={} > n",
                r.max_m
            );
            ensure!(
                r.witness.m() == r.max_m,
                "n={n} k={k}: witness size mismatch"
            );
            if r.max_m >= 2 {
                let report = check_k_intersecting(&r.witness);
                ensure!(
                    report.k == Some(k),
                    "n={n} k={k}: witness not {k}-intersecting"
                );
            }
            if k == 1 && n >= 3 {
                ensure!(r.max_m == n, "n={n} k=1: max_m={} != n", r.max_m);
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} (n,k) pairs, all max_m <= n, k=1 tight"))
}

fn ac2_reduction_bound() -> Result<String, String> {
    let mut count = 0;
    let mut tight = 0;
    for n in 2..=10usize {
        for k in 1..n {
            for m in 1..=(n - k + 1) {
                let f = sunflower(n, k, m, true).map_err(|e| e.to_string())?;
                let r = reduce_small_set(&f, k).map_err(|e| format!("n={n} k={k} m={m}: {e}"))?;
                ensure!(
                    r.containment_ok && r.disjoint_ok && r.residues_nonempty,
                    "n={n} k={k} m={m}: reduction checks failed"
                );
                ensure!(r.derived_bound == n - k + 1, "bound formula");
                ensure!(
                    r.bound_holds && m <= r.derived_bound,
                    "n={n} k={k} m={m}: m > n-k+1"
                );
                if m == n - k + 1 {
                    ensure!(r.m == r.derived_bound, "equality case");
                    tight += 1;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} families, {tight} at equality"))
}

/// All multisets of `m` rows drawn from the `2ⁿ` 0/1 rows.
fn row_multisets(n: usize, m: usize) -> Vec<IntMatrix> {
    let rows: Vec<Vec<i64>> = (0u32..(1 << n))
        .map(|mask| (0..n).map(|b| i64::from(mask >> b & 1)).collect())
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; m];
    loop {
        out.push(IntMatrix::from_rows(n, pick.iter().map(|&i| rows[i].clone()).collect()).unwrap());
        let Some(pos) = (0..m).rev().find(|&p| pick[p] + 1 < rows.len()) else {
            break;
        };
        let next = pick[pos] + 1;
        pick[pos..].iter_mut().for_each(|p| *p = next);
    }
    out
}

fn ac3_kernel_completeness() -> Result<String, String> {
    let mut matrices = Vec::new();
    for n in 1..=3 {
        matrices.extend(row_multisets(n, n + 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..500 {
        let rows = (0..5)
            .map(|_| (0..4).map(|_| rng.gen_range(0..=1)).collect())
            .collect();
        matrices.push(IntMatrix::from_rows(4, rows).unwrap());
    }
    for x in &matrices {
        let h = siegel_bound(x.cols(), x.rows(), 1).unwrap().h_saturating();
        let mut found = Vec::new();
        for strategy in STRATEGIES {
            let r = find_left_kernel_vector(x, &SearchOptions::new(strategy))
                .map_err(|e| format!("{strategy} on\n{x}: {e}"))?;
            ensure!(
                r.max_coeff == h,
                "default box {} != Siegel H {h}",
                r.max_coeff
            );
            let SearchOutcome::Found(tau) = &r.outcome else {
                return Err(format!("{strategy}: NotFound within Siegel box on\n{x}"));
            };
            ensure!(
                verify_kernel(x, tau.entries()) == Ok(true),
                "{strategy}: τ fails verification"
            );
            ensure!(tau.max_abs() <= h, "{strategy}: |τ| exceeds box");
            found.push(tau.clone());
        }
        ensure!(
            found[0] == found[1],
            "strategies disagree on\n{x}: {} vs {}",
            found[0],
            found[1]
        );
        ensure!(
            !oracle_nullspace_trivial(x),
            "oracle claims independent rows for m > n on\n{x}"
        );
    }
    Ok(format!(
        "{} matrices (n <= 3 exhaustive, 500 at n = 4)",
        matrices.len()
    ))
}

fn ac4_trivial_kernel() -> Result<String, String> {
    let mut families: Vec<(String, SetFamily)> =
        vec![("fano".into(), projective_plane(2).unwrap())];
    for n in 3..=8 {
        families.push((format!("near-pencil {n}"), near_pencil(n).unwrap()));
    }
    for n in 2..=8usize {
        for k in 1..n {
            for m in 1..=(n - k) {
                families.push((
                    format!("sunflower n={n} k={k} m={m}"),
                    sunflower(n, k, m, false).unwrap(),
                ));
            }
        }
    }
    for (name, f) in &families {
        let x = f.build_incidence().to_int_matrix();
        for strategy in STRATEGIES {
            let r = find_left_kernel_vector(&x, &SearchOptions::new(strategy).max_coeff(3))
                .map_err(|e| format!("{name} {strategy}: {e}"))?;
            ensure!(
                r.outcome == SearchOutcome::NotFound,
                "{name} {strategy}: found {:?}",
                r.tau()
            );
        }
        ensure!(
            oracle_nullspace_trivial(&x),
            "{name}: oracle found dependent rows"
        );
    }
    Ok(format!(
        "{} families, NotFound in box 3, rows independent",
        families.len()
    ))
}

fn ac5_counting_identities() -> Result<String, String> {
    let mut pairs = 0;
    for m in 2..=8usize {
        for n in 1..m {
            let p = pigeonhole_params(m, n).map_err(|e| e.to_string())?;
            ensure!(p.pigeonhole_applies, "m={m} n={n}: sᵐ <= (ms)ⁿ");
            ensure!(p.function_count > p.profile_bound, "m={m} n={n}");
            pairs += 1;
        }
    }
    let p = pigeonhole_params(3, 2).unwrap();
    ensure!(
        p.function_count == BigUint::from(1000u32) && p.profile_bound == BigUint::from(900u32),
        "m=3 n=2 gave {} vs {}",
        p.function_count,
        p.profile_bound
    );
    Ok(format!("{pairs} (m,n) pairs; m=3,n=2: 1000 > 900"))
}

fn k_intersecting_corpus() -> Vec<(SetFamily, usize)> {
    let mut corpus = Vec::new();
    for n in 3..=12 {
        corpus.push((near_pencil(n).unwrap(), 1));
    }
    for q in [2, 3, 5] {
        corpus.push((projective_plane(q).unwrap(), 1));
    }
    for n in 3..=10usize {
        for k in 1..n {
            for core in [false, true] {
                let cap = if core { n - k + 1 } else { n - k };
                for m in 2..=cap {
                    corpus.push((sunflower(n, k, m, core).unwrap(), k));
                }
            }
        }
    }
    corpus
}

fn ac6_equation_chain() -> Result<String, String> {
    let corpus = k_intersecting_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut outcomes = [0usize; 2];
    for trial in 0..1000 {
        let (f, k) = &corpus[rng.gen_range(0..corpus.len())];
        let tau: Vec<i64> = if trial % 10 == 0 {
            vec![0; f.m()]
        } else {
            (0..f.m()).map(|_| rng.gen_range(-5..=5)).collect()
        };
        let cert = equation_chain(f, *k, &tau).map_err(|e| format!("trial {trial}: {e}"))?;
        let m = f.m() as i128;
        let lhs: i128 = cert.eq4_residues.iter().sum();
        ensure!(
            lhs == cert.eq3_residue + *k as i128 * (m - 1) * cert.eq6_residue,
            "trial {trial}: aggregation identity fails on {f}"
        );
        ensure!(
            cert.aggregation_identity_holds,
            "trial {trial}: certificate flag"
        );
        match derive_contradiction(f, *k, &tau) {
            Err(ProverError::NotInKernel) => outcomes[0] += 1,
            Err(ProverError::SmallSetPresent { .. }) => outcomes[1] += 1,
            Err(ProverError::TheoremViolation(_)) => {
                return Err(format!(
                    "trial {trial}: theorem violation on {f} with {tau:?}"
                ))
            }
            Err(e) => return Err(format!("trial {trial}: unexpected {e}")),
            Ok(never) => match never {},
        }
    }
    Ok(format!(
        "1000 pairs over {} families; NotInKernel {}, SmallSetPresent {}",
        corpus.len(),
        outcomes[0],
        outcomes[1]
    ))
}

fn ac7_beck_fiala() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut counting = 0;
    let mut elimination = 0;
    for trial in 0..100u64 {
        let n = rng.gen_range(1..=30);
        let m = rng.gen_range(1..=2 * n);
        let t_cap = rng.gen_range(1..=4);
        let f = bounded_degree_family(n, m, t_cap, 1000 + trial).map_err(|e| e.to_string())?;
        let t = max_degree(&f);
        ensure!(t <= 4, "trial {trial}: degree {t}");
        let run = beck_fiala_run(&f, &BeckFialaConfig::default())
            .map_err(|e| format!("trial {trial}: {e}"))?;
        ensure!(
            run.coloring.signs.len() == n,
            "trial {trial}: coloring not total"
        );
        ensure!(
            run.coloring.signs.iter().all(|&s| s == 1 || s == -1),
            "trial {trial}: non-±1"
        );
        let disc = discrepancy_of(&f, &run.coloring).unwrap();
        if f.m() > 0 {
            ensure!(
                (disc as usize) < 2 * t,
                "trial {trial}: discrepancy {disc} > 2t-1 = {}",
                2 * t - 1
            );
        }
        ensure!(
            run.rounds.iter().all(|r| !r.newly_frozen.is_empty()),
            "trial {trial}: idle round"
        );
        ensure!(
            run.rounds.len() <= n,
            "trial {trial}: {} rounds for n={n}",
            run.rounds.len()
        );
        ensure!(
            run.releases.iter().all(|r| r.within_bound),
            "trial {trial}: release audit failed"
        );
        for r in &run.rounds {
            match r.source {
                fisher_core::discrepancy::DirectionSource::Counting => counting += 1,
                fisher_core::discrepancy::DirectionSource::Elimination => elimination += 1,
            }
        }
    }
    Ok(format!(
        "100 families; {counting} counting rounds, {elimination} elimination rounds"
    ))
}

fn ac8_graham_pollak() -> Result<String, String> {
    for n in 2..=12 {
        let p = star_partition(n).map_err(|e| e.to_string())?;
        ensure!(p.parts().len() == n - 1, "n={n}: {} parts", p.parts().len());
        ensure!(
            verify_biclique_partition(&p).valid,
            "n={n}: star partition rejected"
        );
    }
    for n in 2..=4 {
        let min = min_partition_bruteforce(n).map_err(|e| e.to_string())?;
        ensure!(min == n - 1, "n={n}: minimum {min}");
    }
    Ok("stars verified for n <= 12; minimum n-1 for n = 2,3,4".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Check, u64); 8] = [
        (
            "AC1",
            "extremal k-intersecting families respect m <= n",
            ac1_theorem_exhaustive,
            60,
        ),
        (
            "AC2",
            "size-k reduction bound m <= n-k+1",
            ac2_reduction_bound,
            5,
        ),
        (
            "AC3",
            "kernel search sound/complete vs elimination oracle",
            ac3_kernel_completeness,
            120,
        ),
        (
            "AC4",
            "trivial kernel for tight families",
            ac4_trivial_kernel,
            60,
        ),
        (
            "AC5",
            "pigeonhole counting identities",
            ac5_counting_identities,
            1,
        ),
        (
            "AC6",
            "equation-chain aggregation identity",
            ac6_equation_chain,
            10,
        ),
        ("AC7", "Beck-Fiala discrepancy <= 2t-1", ac7_beck_fiala, 60),
        ("AC8", "Graham-Pollak desk scale", ac8_graham_pollak, 60),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (id, title, check, limit) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("{detail}; exceeded {limit}s"))
            } else {
                Ok(detail)
            }
        });
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!(
            "[{tag}] {id} {title}: {detail} ({:.2}s / {limit}s)",
            elapsed.as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
