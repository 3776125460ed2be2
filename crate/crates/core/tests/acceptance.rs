//! Acceptance suite: ten end-to-end criteria at desk scale (K ≤ 4, T ≤ 1).
//!
//! Prints one `PASS`/`FAIL` line per criterion and exits nonzero if any
//! criterion fails or exceeds its time budget.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ns_galerkin::continuation::{default_lambda_grid, fixed_point_iterate, lambda_sweep, LambdaStatus, Verdict};
use ns_galerkin::estimates::{
    check_energy_inequality, cross_integrator_uniqueness, verify_gronwall, verify_lipschitz, StabilityConstants,
    DEFAULT_SAFETY_FACTOR,
};
use ns_galerkin::operators::{bilinear_b, bilinear_b_physical, estimate_constants, trilinear_b};
use ns_galerkin::presets::{random_with_norm_v, taylor_green};
use ns_galerkin::solvers::{solve_controlled, solve_nse, ForcingSpec, SolverConfig, Trajectory};
use ns_galerkin::{ModeSet, PhysicalGrid, SpectralField};

const BUDGET: Duration = Duration::from_secs(60);

/// Data set reused by the cross-integrator criterion.
struct DataSet {
    label: String,
    y0: SpectralField,
    f: ForcingSpec,
    config: SolverConfig,
}

type Outcome = Result<String, String>;

fn k2() -> Arc<ModeSet> {
    ModeSet::new(2).unwrap()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn taylor_green_reproduction(sets: &mut Vec<DataSet>) -> Outcome {
    let nu = 1.0;
    let y0 = taylor_green(&k2(), 1.0);
    let config = SolverConfig::new(nu, 1.0, 1e-3, 2);
    let y = solve_nse(&y0, &ForcingSpec::Zero, &config).map_err(|e| e.to_string())?;
    let err = y
        .times()
        .iter()
        .zip(y.states())
        .map(|(&t, s)| s.sub(&y0.scaled((-2.0 * nu * t).exp())).norm_h())
        .fold(0.0, f64::max);
    sets.push(DataSet { label: "taylor-green".into(), y0, f: ForcingSpec::Zero, config });
    ensure(err <= 1e-6, format!("max H error {err:.3e} (limit 1e-6)"))
}

fn skew_symmetry(sets: &mut Vec<DataSet>) -> Outcome {
    let ms = k2();
    let mut worst = 0f64;
    for i in 0..100u64 {
        let decay = (i % 4) as f64;
        let u = SpectralField::random(&ms, 1000 + 2 * i, decay);
        let v = SpectralField::random(&ms, 1001 + 2 * i, decay);
        let b = trilinear_b(&u, &v, &v).map_err(|e| e.to_string())?;
        worst = worst.max(b.abs() / (u.norm_v() * v.norm_v_sqr()));
    }
    let y0 = random_with_norm_v(&ms, 77, 2.0, 1.0);
    let config = SolverConfig::new(0.0, 1.0, 1e-3, 2);
    let y = solve_nse(&y0, &ForcingSpec::Zero, &config).map_err(|e| e.to_string())?;
    let h0 = y0.norm_h();
    let drift = y.norm_trace().norm_h.iter().map(|h| (h - h0).abs()).fold(0.0, f64::max);
    sets.push(DataSet { label: "inviscid".into(), y0, f: ForcingSpec::Zero, config });
    ensure(
        worst <= 1e-10 && drift < 1e-6,
        format!("max |b(u,v,v)|/(|u|_V |v|_V^2) {worst:.3e} (limit 1e-10); inviscid H drift {drift:.3e} (limit 1e-6)"),
    )
}

fn energy_inequality(sets: &mut Vec<DataSet>) -> Outcome {
    let ms = k2();
    let config = SolverConfig::new(1.0, 1.0, 1e-3, 2);
    let mut worst = 0f64;
    let mut all = true;
    for seed in 0..10u64 {
        let y0 = random_with_norm_v(&ms, 200 + seed, 2.0, 0.5);
        let y = solve_nse(&y0, &ForcingSpec::Zero, &config).map_err(|e| e.to_string())?;
        let report = check_energy_inequality(&y, &ForcingSpec::Zero, 1e-6);
        all &= report.passed;
        worst = worst.max(report.checks[0].lhs / (1.0 + report.checks[0].rhs.abs()));
        sets.push(DataSet {
            label: format!("small-data seed {}", 200 + seed),
            y0,
            f: ForcingSpec::Zero,
            config: config.clone(),
        });
    }
    ensure(all, format!("largest rise of V over its running minimum {worst:.3e} (relative limit 1e-6)"))
}

fn constants_arithmetic() -> Outcome {
    let s = StabilityConstants::from_sup(0.5, 2.0, 1.0, 0.0).map_err(|e| e.to_string())?;
    let l = s.l.unwrap_or(f64::NAN);
    ensure(
        (0.4048..=0.4050).contains(&s.delta) && (2.469..=2.471).contains(&l),
        format!("C = {:.6}, delta = {:.6}, L = {:.6}", s.big_c, s.delta, l),
    )
}

fn lipschitz_stability(sets: &mut Vec<DataSet>) -> Outcome {
    let ms = k2();
    let nu = 2.0;
    let config = SolverConfig::new(nu, 1.0, 1e-3, 2);
    let est = estimate_constants(&ms, 1000, 7, 2.0, nu).map_err(|e| e.to_string())?;
    let constants =
        StabilityConstants::with_safety(est.c, DEFAULT_SAFETY_FACTOR, nu, 1.0, 0.0).map_err(|e| e.to_string())?;
    let y0 = SpectralField::zeros(&ms);
    let y = Trajectory::zero(&config, &ms);
    let mut worst = 0f64;
    let mut asserted = 0;
    for i in 0..20u64 {
        let size = 0.05 + 0.45 * (i as f64) / 19.0;
        let z0 = random_with_norm_v(&ms, 300 + i, 2.0, size);
        let g = if i % 2 == 0 {
            ForcingSpec::Zero
        } else {
            ForcingSpec::Constant(random_with_norm_v(&ms, 400 + i, 1.0, 0.1).scaled(0.1))
        };
        let z = solve_nse(&z0, &g, &config).map_err(|e| e.to_string())?;
        let report =
            verify_lipschitz(&y, &z, &constants, &z0, &g, &y0, &ForcingSpec::Zero, 1e-9).map_err(|e| e.to_string())?;
        let Some(check) = report.check("lipschitz") else {
            return Err(format!("pair {i} not asserted: {:?}", report.notes));
        };
        if !check.passed {
            return Err(format!("pair {i}: lhs {:.4e} > rhs {:.4e}", check.lhs, check.rhs));
        }
        asserted += 1;
        worst = worst.max(check.lhs / check.rhs);
        if i % 5 == 4 {
            sets.push(DataSet { label: format!("perturbed pair {i}"), y0: z0, f: g, config: config.clone() });
        }
    }
    ensure(
        asserted == 20,
        format!(
            "{asserted}/20 pairs inside delta = {:.4}, worst lhs/rhs {worst:.3} (c = {:.4} with safety {})",
            constants.delta, constants.c, DEFAULT_SAFETY_FACTOR
        ),
    )
}

fn gronwall_bounds() -> Outcome {
    let ms = k2();
    let nu = 0.1;
    let config = SolverConfig::new(nu, 1.0, 1e-3, 2);
    let est = estimate_constants(&ms, 1000, 7, 2.0, nu).map_err(|e| e.to_string())?;
    let mut worst = 0f64;
    for i in 0..10u64 {
        let y0 = random_with_norm_v(&ms, 500 + i, 2.0, 1.0);
        let z = Trajectory::constant(&config, &random_with_norm_v(&ms, 600 + i, 2.0, 0.5 + 0.25 * i as f64));
        let y = solve_controlled(&z, &y0, &ForcingSpec::Zero, &config).map_err(|e| e.to_string())?;
        let report = verify_gronwall(&y, &z, est.c2, DEFAULT_SAFETY_FACTOR, nu, &ForcingSpec::Zero)
            .map_err(|e| e.to_string())?;
        for name in ["gronwall_V", "gronwall_DA_integral"] {
            let check = report.check(name).ok_or(format!("run {i}: {name} missing"))?;
            if !check.passed {
                return Err(format!("run {i}: {name} lhs {:.4e} > rhs {:.4e}", check.lhs, check.rhs));
            }
            worst = worst.max(check.lhs / check.rhs);
        }
    }
    Ok(format!(
        "10 runs, both bounds hold, worst lhs/rhs {worst:.6} (c2 = {:.3e} with safety {})",
        est.c2, DEFAULT_SAFETY_FACTOR
    ))
}

fn picard_matches_direct(sets: &mut Vec<DataSet>) -> Outcome {
    let ms = k2();
    let config = SolverConfig::new(1.0, 1.0, 1e-3, 2);
    let y0 = random_with_norm_v(&ms, 700, 2.0, 0.5);
    let f = ForcingSpec::Constant(random_with_norm_v(&ms, 701, 2.0, 0.2));
    let mut details = Vec::new();
    for lambda in [0.5, 1.0] {
        let log = fixed_point_iterate(lambda, &y0, &f, None, 40, 1e-10, &config, 1.0)
            .map_err(|e| format!("lambda {lambda}: {e}"))?;
        let direct = solve_nse(&y0.scaled(lambda), &f.scaled(lambda), &config).map_err(|e| e.to_string())?;
        let d = log.trajectory.as_ref().unwrap().sup_v_distance(&direct).map_err(|e| e.to_string())?;
        if d > 1e-6 {
            return Err(format!("lambda {lambda}: sup-V distance {d:.3e}"));
        }
        details.push(format!("lambda {lambda}: {} iterations, sup-V distance {d:.2e}", log.iterates.len()));
        sets.push(DataSet {
            label: format!("picard lambda {lambda}"),
            y0: y0.scaled(lambda),
            f: f.scaled(lambda),
            config: config.clone(),
        });
    }
    Ok(details.join("; "))
}

fn convolution_oracle() -> Outcome {
    let ms = k2();
    let grid = PhysicalGrid::new(3 * 2 + 1);
    let mut worst = 0f64;
    for i in 0..50u64 {
        let u = random_with_norm_v(&ms, 800 + 2 * i, (i % 3) as f64, 1.0);
        let v = random_with_norm_v(&ms, 801 + 2 * i, (i % 3) as f64, 1.0);
        let direct = bilinear_b(&u, &v).map_err(|e| e.to_string())?;
        let physical = bilinear_b_physical(&u, &v, &grid).map_err(|e| e.to_string())?;
        worst = worst.max(direct.max_abs_diff(&physical));
    }
    ensure(worst <= 1e-10, format!("max coefficient difference {worst:.3e} over 50 pairs (limit 1e-10)"))
}

fn cross_integrator(sets: &[DataSet]) -> Outcome {
    let mut worst = (0f64, String::new());
    for set in sets {
        let report = cross_integrator_uniqueness(&set.y0, &set.f, &set.config, 1e-5)
            .map_err(|e| format!("{}: {e}", set.label))?;
        let raw: f64 = report.context.get("rk2_raw_distance").and_then(|s| s.parse().ok()).unwrap_or(f64::INFINITY);
        let largest = report.checks.iter().map(|c| c.lhs).fold(raw, f64::max);
        if !report.passed || raw > 1e-5 {
            return Err(format!(
                "{}: distances {:?}, raw rk2 {raw:.3e}",
                set.label,
                report.checks.iter().map(|c| c.lhs).collect::<Vec<_>>()
            ));
        }
        if largest >= worst.0 {
            worst = (largest, set.label.clone());
        }
    }
    Ok(format!("{} data sets, largest sup-V distance {:.3e} ({}) (limit 1e-5)", sets.len(), worst.0, worst.1))
}

fn lambda_dichotomy() -> Outcome {
    let ms = k2();
    let zero = lambda_sweep(
        &SpectralField::zeros(&ms),
        &ForcingSpec::Zero,
        &default_lambda_grid(),
        &SolverConfig::new(1.0, 1.0, 1e-2, 2),
        None,
    )
    .map_err(|e| e.to_string())?;
    if zero.verdict != Verdict::AllSolvedBounded || zero.entries.iter().any(|e| e.serrin != Some(0.0)) {
        return Err(format!("zero data: {:?}", zero.verdict));
    }
    let y0 = random_with_norm_v(&ms, 5, 2.0, 20.0);
    let config = SolverConfig::new(1e-3, 1.0, 1e-3, 2).with_blowup_threshold(22.0);
    let large =
        lambda_sweep(&y0, &ForcingSpec::Zero, &default_lambda_grid(), &config, None).map_err(|e| e.to_string())?;
    let first = large.blow_ups().next().cloned();
    match first {
        Some(e) if large.verdict == Verdict::UnboundedFamilyEvidence && e.t_star.is_some() && e.status == LambdaStatus::BlowUp => Ok(format!(
            "zero data all-solved-bounded with serrin 0; large data unbounded-family-evidence, first blow-up at lambda {} (t* = {:.3}), {} flagged",
            e.lambda,
            e.t_star.unwrap(),
            large.blow_ups().count()
        )),
        _ => Err(format!("large data verdict {:?} without a recorded blow-up", large.verdict)),
    }
}

fn main() -> ExitCode {
    let mut sets = Vec::new();
    let mut failures = 0;
    let mut run = |index: usize, name: &str, outcome: &mut dyn FnMut(&mut Vec<DataSet>) -> Outcome| {
        let start = Instant::now();
        let result = outcome(&mut sets);
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed < BUDGET => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the time budget")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("[{status}] {index:>2}. {name}: {detail} [{:.2} s]", elapsed.as_secs_f64());
    };
    run(1, "Taylor-Green reproduction", &mut taylor_green_reproduction);
    run(2, "skew symmetry and inviscid energy", &mut skew_symmetry);
    run(3, "energy inequality", &mut energy_inequality);
    run(4, "stability constants arithmetic", &mut |_| constants_arithmetic());
    run(5, "Lipschitz stability around zero", &mut lipschitz_stability);
    run(6, "Gronwall bounds for the controlled system", &mut |_| gronwall_bounds());
    run(7, "Picard iteration vs direct solve", &mut picard_matches_direct);
    run(8, "direct vs dealiased advection", &mut |_| convolution_oracle());
    run(9, "cross-integrator agreement", &mut |s| cross_integrator(s));
    run(10, "lambda dichotomy", &mut |_| lambda_dichotomy());
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
