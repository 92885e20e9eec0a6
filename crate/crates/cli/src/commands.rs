use std::path::Path;

use serde_json::json;

use fisher_core::discrepancy::{
    beck_fiala_run, BeckFialaConfig, DirectionSource, DiscrepancyError,
};
use fisher_core::generators::{near_pencil, projective_plane, random_family, sunflower};
use fisher_core::graham_pollak::{
    min_partition_bruteforce, star_partition, verify_biclique_partition, BicliquePartition,
};
use fisher_core::intersect::IntersectError;
use fisher_core::kernel::{
    find_left_kernel_vector, pigeonhole_params, siegel_bound, verify_kernel, IntMatrix,
    KernelError, KernelSearch, SearchOptions, SearchOutcome, DEFAULT_NODE_BUDGET,
};
use fisher_core::prover::{
    derive_contradiction, enumerate_max_family, equation_chain, ProverError,
};
use fisher_core::{check_k_intersecting, reduce_small_set, KernelVector, SetFamily};

use crate::report::{code, list_str, set_str, Failure, Report};
use crate::{Command, GenKind, Global, GpAction};

pub fn run(command: &Command, g: &Global) -> Result<Report, Failure> {
    match command {
        Command::Verify { file } => verify(&load_family(file)?),
        Command::Reduce { file, k } => reduce(&load_family(file)?, *k),
        Command::Kernel { file } => kernel(file, g),
        Command::Siegel { n, m, b, rows } => siegel(*n, *m, *b, *rows),
        Command::Prove { file, k, tau } => prove(&load_family(file)?, *k, tau.as_deref(), g),
        Command::Enumerate { n, k } => enumerate(*n, *k, g),
        Command::BeckFiala { file } => beck_fiala(&load_family(file)?, g),
        Command::GrahamPollak { action } => graham_pollak(action),
        Command::Generate { kind } => generate(kind, g),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin())
            .map_err(|e| Failure::input(format!("stdin: {e}")));
    }
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_family(path: &Path) -> Result<SetFamily, Failure> {
    SetFamily::parse(&read_input(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn search_options(g: &Global) -> SearchOptions {
    let mut opts = SearchOptions::new(g.strategy).deterministic(g.deterministic);
    if let Some(h) = g.max_coeff {
        opts = opts.max_coeff(h);
    }
    opts.node_budget(g.budget.unwrap_or(DEFAULT_NODE_BUDGET))
}

fn family_header(r: &mut Report, f: &SetFamily) {
    r.line(format!("family n={} m={} {}", f.n(), f.m(), f.digest()));
    r.field("family_digest", f.digest());
    r.field("n", f.n());
    r.field("m", f.m());
}

fn verify(f: &SetFamily) -> Result<Report, Failure> {
    let mut r = Report::new("verify");
    family_header(&mut r, f);
    let check = check_k_intersecting(f);
    match (&check.violation, check.k) {
        (Some(v), _) => {
            r.code = code::REFUTED;
            r.line("k-intersecting: no");
            r.line(format!(
                "violation: |A_{} ∩ A_{}| = {}, but |A_1 ∩ A_2| = {}",
                v.first, v.second, v.found, v.expected
            ));
        }
        (None, Some(k)) => r.line(format!("k-intersecting: yes, k={k}")),
        (None, None) => r.line("k-intersecting: yes (at most one member)"),
    }
    r.field("is_k_intersecting", check.is_k_intersecting);
    r.field("k", check.k);
    r.field("violation", check.violation);
    Ok(r)
}

fn reduce(f: &SetFamily, k: usize) -> Result<Report, Failure> {
    let mut r = Report::new("reduce");
    family_header(&mut r, f);
    r.field("k", k);
    let rep = match reduce_small_set(f, k) {
        Ok(rep) => rep,
        Err(IntersectError::NonPositiveK) => return Err(Failure::input("k must be positive")),
        Err(e) => {
            r.code = code::REFUTED;
            r.line(format!("refuted: {e}"));
            r.field("error", e.to_string());
            return Ok(r);
        }
    };
    let yes = |b: bool| if b { "yes" } else { "no" };
    r.line(format!("k={k}, small member A_{}", rep.small_set_index));
    for (i, res) in rep.residues.iter().enumerate() {
        r.line(format!("residue {}: {}", i + 1, set_str(res)));
    }
    r.line(format!("containment: {}", yes(rep.containment_ok)));
    r.line(format!("residues disjoint: {}", yes(rep.disjoint_ok)));
    r.line(format!("residues nonempty: {}", yes(rep.residues_nonempty)));
    r.line(format!(
        "m={} <= n-k+1={}: {}",
        rep.m,
        rep.derived_bound,
        yes(rep.bound_holds)
    ));
    let ok = rep.containment_ok && rep.disjoint_ok && rep.residues_nonempty && rep.bound_holds;
    if !ok {
        r.code = code::INVARIANT;
        r = r.diagnostic("reduction failed on a k-intersecting family");
    }
    r.field("report", rep);
    Ok(r)
}

fn load_matrix(path: &Path) -> Result<(IntMatrix, &'static str), Failure> {
    let input = read_input(path)?;
    let first = input
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with("m=") {
        let x = IntMatrix::parse(&input)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Ok((x, "matrix"))
    } else {
        let f = SetFamily::parse(&input)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Ok((f.build_incidence().to_int_matrix(), "family"))
    }
}

/// `Ok(None)` means the budget ran out and `r` already says so.
fn run_search(r: &mut Report, x: &IntMatrix, g: &Global) -> Result<Option<KernelSearch>, Failure> {
    match find_left_kernel_vector(x, &search_options(g)) {
        Ok(s) => {
            if let Some(tau) = s.tau() {
                if !verify_kernel(x, tau.entries()).map_err(Failure::invariant)? {
                    return Err(Failure::invariant(format!(
                        "search returned {tau}, which is not a kernel vector"
                    )));
                }
            }
            Ok(Some(s))
        }
        Err(
            e @ KernelError::BudgetExceeded {
                nodes,
                completed_level,
            },
        ) => {
            r.code = code::BUDGET;
            r.line(format!("budget exceeded after {nodes} nodes"));
            r.field("outcome", "budget_exceeded");
            r.field("nodes", nodes);
            r.field("completed_level", completed_level);
            r.diagnostic = Some(e.to_string());
            Ok(None)
        }
        Err(e @ KernelError::MaxCoeffRequired { .. }) => {
            Err(Failure::input(format!("{e} (use --max-coeff)")))
        }
        Err(e) => Err(Failure::input(e)),
    }
}

fn describe_search(r: &mut Report, s: &KernelSearch) {
    let det = if s.deterministic { "yes" } else { "no" };
    r.line(format!(
        "strategy {}, max_coeff {}, deterministic {det}, nodes {}",
        s.strategy, s.max_coeff, s.nodes
    ));
    match &s.outcome {
        SearchOutcome::Found(tau) => r.line(format!("found tau = {tau}")),
        SearchOutcome::NotFound => r.line(format!(
            "no nonzero tau with max |tau(i)| <= {}",
            s.max_coeff
        )),
    }
    r.field("tau", s.tau());
    r.field("max_coeff", s.max_coeff);
    r.field("strategy", s.strategy);
    r.field("deterministic", s.deterministic);
    r.field("nodes", s.nodes);
}

fn kernel(path: &Path, g: &Global) -> Result<Report, Failure> {
    let (x, source) = load_matrix(path)?;
    let mut r = Report::new("kernel");
    let origin = if source == "family" {
        " (family incidence)"
    } else {
        ""
    };
    r.line(format!(
        "matrix m={} n={}{origin} {}",
        x.rows(),
        x.cols(),
        x.digest()
    ));
    r.field("matrix_digest", x.digest());
    r.field("source", source);
    r.field("m", x.rows());
    r.field("n", x.cols());
    let Some(search) = run_search(&mut r, &x, g)? else {
        return Ok(r);
    };
    describe_search(&mut r, &search);
    r.field(
        "outcome",
        if search.is_found() {
            "found"
        } else {
            "not_found"
        },
    );
    if !search.is_found() {
        r.code = code::REFUTED;
    }
    Ok(r)
}

fn siegel(n: usize, m: Option<usize>, b: u64, rows: usize) -> Result<Report, Failure> {
    let mut r = Report::new("siegel");
    r.field("n", n);
    r.field("coeff_bound", b);
    match m {
        Some(m) => {
            let bound = siegel_bound(n, m, b).map_err(Failure::input)?;
            r.line(format!("n={n} m={m} B={b}: H={}", bound.h));
            r.field("m", m);
            r.field("h", bound.h.to_string());
            if m.saturating_mul(n) <= 4096 {
                let p = pigeonhole_params(m, n).map_err(Failure::input)?;
                r.line(format!(
                    "0/1 pigeonhole: s={} s^m > (ms)^n: {}, s^m > (ms+1)^n: {}",
                    p.s, p.pigeonhole_applies, p.applies_with_exact_bound
                ));
                r.field("pigeonhole", p);
            }
        }
        None => {
            r.line(format!("n={n} B={b}"));
            r.line("m H");
            let mut table = Vec::new();
            for m in (n + 1)..=(n + rows) {
                let bound = siegel_bound(n, m, b).map_err(Failure::input)?;
                r.line(format!("{m} {}", bound.h));
                table.push(json!({ "m": m, "h": bound.h.to_string() }));
            }
            r.field("table", table);
        }
    }
    Ok(r)
}

fn parse_tau(s: &str) -> Result<Vec<i64>, Failure> {
    s.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Failure::input(format!("`{t}` is not an integer in --tau")))
        })
        .collect()
}

fn prove(f: &SetFamily, k: usize, tau: Option<&str>, g: &Global) -> Result<Report, Failure> {
    let mut r = Report::new("prove");
    family_header(&mut r, f);
    r.line(format!("k={k}"));
    r.field("k", k);
    let tau = match tau {
        Some(s) => {
            let tau = parse_tau(s)?;
            r.line(format!(
                "tau = {} (given)",
                KernelVector::new(tau.clone())
                    .map_or_else(|_| format!("{tau:?}"), |t| t.to_string())
            ));
            r.field("tau_source", "given");
            tau
        }
        None => {
            let x = f.build_incidence().to_int_matrix();
            let Some(search) = run_search(&mut r, &x, g)? else {
                return Ok(r);
            };
            describe_search(&mut r, &search);
            r.field("tau_source", "search");
            match search.tau() {
                Some(t) => t.entries().to_vec(),
                None => {
                    r.line("verdict: no kernel vector in the box; nothing to refute");
                    r.field("verdict", "no_kernel_vector");
                    return Ok(r);
                }
            }
        }
    };
    r.field("tau", &tau);

    if let Ok(cert) = equation_chain(f, k, &tau) {
        r.line(format!(
            "element sums b_1..b_{}: {}",
            f.n(),
            list_str(&cert.element_sums)
        ));
        r.line(format!("size sum  Σ τ(i)|A_i| = {}", cert.eq3_residue));
        r.line(format!(
            "set equations  τ(i)|A_i| + k·Σ_(j≠i) τ(j): {}",
            list_str(&cert.eq4_residues)
        ));
        r.line(format!("coefficient sum  Σ τ(i) = {}", cert.eq6_residue));
        r.line(format!(
            "final terms  τ(i)(|A_i| − k): {}",
            list_str(&cert.eq7_terms)
        ));
        r.line(format!(
            "aggregation identity: {}",
            if cert.aggregation_identity_holds {
                "holds"
            } else {
                "fails"
            }
        ));
        r.line(format!(
            "chain valid: {}",
            if cert.chain_valid { "yes" } else { "no" }
        ));
        r.field("chain", cert);
    }

    let err = match derive_contradiction(f, k, &tau) {
        Ok(never) => match never {},
        Err(e) => e,
    };
    let (exit, verdict) = match &err {
        ProverError::NonPositiveK
        | ProverError::DimensionMismatch { .. }
        | ProverError::InvalidParameters(_) => return Err(Failure::input(&err)),
        ProverError::HypothesisViolated { .. } => (code::REFUTED, "hypothesis_violated"),
        ProverError::SmallSetPresent { .. } => (code::CONFIRMED, "small_set_present"),
        ProverError::NotInKernel => (code::CONFIRMED, "not_in_kernel"),
        ProverError::TheoremViolation(_) => (code::INVARIANT, "theorem_violation"),
        ProverError::InvariantViolation(_) => (code::INVARIANT, "invariant_violation"),
        ProverError::BudgetExceeded(_) => (code::BUDGET, "budget_exceeded"),
    };
    r.code = exit;
    r.line(format!("verdict: {verdict}: {err}"));
    r.field("verdict", verdict);
    r.field("message", err.to_string());
    if exit == code::INVARIANT {
        r.diagnostic = Some(err.to_string());
    }
    Ok(r)
}

fn enumerate(n: usize, k: usize, g: &Global) -> Result<Report, Failure> {
    let mut r = Report::new("enumerate");
    let (rep, exit) = match enumerate_max_family(n, k, g.budget.unwrap_or(DEFAULT_NODE_BUDGET)) {
        Ok(rep) => {
            let exit = if rep.bound_respected {
                code::CONFIRMED
            } else {
                code::INVARIANT
            };
            (rep, exit)
        }
        Err(ProverError::BudgetExceeded(rep)) => {
            r.diagnostic = Some(format!(
                "node budget exhausted after {} nodes",
                rep.nodes_explored
            ));
            (*rep, code::BUDGET)
        }
        Err(e) => return Err(Failure::input(e)),
    };
    r.code = exit;
    let qualifier = if rep.complete { "" } else { " (incomplete)" };
    r.line(format!("n={n} k={k}: max_m={}{qualifier}", rep.max_m));
    r.line(format!(
        "m <= n: {}",
        if rep.bound_respected { "yes" } else { "no" }
    ));
    let sets: Vec<String> = rep.witness.sets().iter().map(|s| set_str(s)).collect();
    r.line(format!("witness: {}", sets.join(" ")));
    r.line(format!("nodes: {}", rep.nodes_explored));
    r.field("report", rep);
    Ok(r)
}

fn beck_fiala(f: &SetFamily, g: &Global) -> Result<Report, Failure> {
    let mut config = BeckFialaConfig::default();
    if let Some(b) = g.budget {
        config.kernel_budget = b;
    }
    let run = match beck_fiala_run(f, &config) {
        Ok(run) => run,
        Err(e @ DiscrepancyError::InvariantViolation { .. }) => return Err(Failure::invariant(e)),
        Err(e) => return Err(Failure::input(e)),
    };
    let mut r = Report::new("beck-fiala");
    family_header(&mut r, f);
    let signs: Vec<&str> = run
        .coloring
        .signs
        .iter()
        .map(|&s| if s > 0 { "+" } else { "-" })
        .collect();
    r.line(format!("t={} bound={}", run.t, run.bound));
    r.line(format!("coloring: {}", signs.join(" ")));
    r.line(format!("set sums: {}", list_str(&run.set_sums)));
    r.line(format!("discrepancy: {}", run.discrepancy));
    for a in &run.rounds {
        let source = match a.source {
            DirectionSource::Counting => "counting",
            DirectionSource::Elimination => "elimination",
        };
        r.line(format!(
            "round {}: unfrozen {}, dangerous [{}], support [{}], direction [{}] ({source}), step {}, frozen [{}]",
            a.round,
            a.unfrozen_before,
            list_str(&a.dangerous),
            list_str(&a.support),
            list_str(&a.direction),
            a.step,
            list_str(&a.newly_frozen)
        ));
    }
    for rel in &run.releases {
        r.line(format!(
            "release set {} after round {}: fractional {}, unfrozen {}, final {}, within bound {}",
            rel.set,
            rel.round,
            rel.fractional_sum,
            rel.unfrozen,
            rel.final_sum,
            if rel.within_bound { "yes" } else { "no" }
        ));
    }
    if !run.guarantee_holds {
        r.code = code::INVARIANT;
        r.diagnostic = Some(format!(
            "discrepancy {} exceeds {}",
            run.discrepancy, run.bound
        ));
    }
    r.field("run", run);
    Ok(r)
}

fn graham_pollak(action: &GpAction) -> Result<Report, Failure> {
    match action {
        GpAction::Verify { file } => {
            let p = BicliquePartition::parse(&read_input(file)?)
                .map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
            let verdict = verify_biclique_partition(&p);
            let mut r = Report::new("graham-pollak");
            r.line(format!("n={} parts={}", p.n(), p.parts().len()));
            match verdict.violation {
                None => r.line("partition: valid"),
                Some(v) => {
                    r.code = code::REFUTED;
                    r.line(format!(
                        "partition: invalid, edge {{{},{}}} covered {} times",
                        v.u, v.v, v.times_covered
                    ));
                }
            }
            r.field("n", p.n());
            r.field("parts", p.parts().len());
            r.field("valid", verdict.valid);
            r.field("violation", verdict.violation);
            Ok(r)
        }
        GpAction::Stars { n } => {
            let p = star_partition(*n).map_err(Failure::input)?;
            if !verify_biclique_partition(&p).valid {
                return Err(Failure::invariant(format!(
                    "star partition of K_{n} is not a partition"
                )));
            }
            let mut r = Report::new("graham-pollak");
            r.text = p.to_text();
            r.field("partition", &p);
            r.field("valid", true);
            Ok(r)
        }
        GpAction::Min { n } => {
            let min = min_partition_bruteforce(*n).map_err(Failure::input)?;
            let mut r = Report::new("graham-pollak");
            r.line(format!(
                "K_{n}: minimum biclique partition has {min} parts (n-1 = {})",
                n - 1
            ));
            r.field("n", n);
            r.field("min_parts", min);
            if min != n - 1 {
                r.code = code::INVARIANT;
                r.diagnostic = Some(format!("expected {} parts", n - 1));
            }
            Ok(r)
        }
    }
}

fn generate(kind: &GenKind, g: &Global) -> Result<Report, Failure> {
    let family = match *kind {
        GenKind::NearPencil { n } => near_pencil(n),
        GenKind::ProjectivePlane { q } => projective_plane(q),
        GenKind::Sunflower { n, k, m, core } => sunflower(n, k, m, core),
        GenKind::Random { n, m } => random_family(n, m, g.seed),
    }
    .map_err(Failure::input)?;
    let mut r = Report::new("generate");
    r.text = family.to_text();
    r.structured_raw = Some(format!("{}\n", family.to_json()));
    Ok(r)
}
