//! Acceptance checks. Runs without the libtest harness so every line is
//! printed regardless of outcome; the process exits non-zero if any check
//! fails.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbit_density::bergman::{
    self, apply_pi, density_study, formal_degree, kernel_inner, kernel_norm_sq, orbit_inner,
    projective_stabilizer_kernel, DensityStudyConfig, KernelVector, Weight,
};
use orbit_density::finite_gabor::{
    exhaustive_scan, orthogonality_sum, random_vector, structured_windows, subgroup_enumerate, verify_theorem,
    FiniteGaborSystem,
};
use orbit_density::frames::Verdict;
use orbit_density::fuchsian::{
    ball_enumerate, brute_force_integer_ball, covolume_psl2z, default_covolume_grid, stabilizer_of_point, LatticeSpec,
    DEFAULT_STABILIZER_TOL,
};
use orbit_density::hyperbolic::{distance, MoebiusMap, UpperHalfPoint};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// Closed forms used only as references here.
fn expected_formal_degree(alpha: f64) -> f64 {
    (alpha - 1.0) / (4.0 * PI)
}

const MODULAR_COVOLUME: f64 = PI / 3.0;

fn finite_scan() -> Outcome {
    let start = Instant::now();
    let report = exhaustive_scan(6, 50, 20240607).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut recounted = 0;
    let mut ns = HashSet::new();
    for row in &report.rows {
        ns.insert(row.n);
        let lhs = row.n * row.stab_order;
        if row.is_frame && lhs > row.subgroup_order {
            recounted += 1;
        }
        if row.is_riesz && lhs < row.subgroup_order {
            recounted += 1;
        }
    }
    ensure(ns.len() == 5, || format!("scanned moduli {ns:?}"))?;
    ensure(report.summary.violations == 0 && recounted == 0, || {
        format!(
            "{} reported violations, {} recounted",
            report.summary.violations, recounted
        )
    })?;
    ensure(elapsed <= Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} cases, {} frames, {} Riesz, 0 violations in {:.1?}",
        report.summary.cases, report.summary.frames, report.summary.riesz, elapsed
    ))
}

fn proof_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut s_rel: f64 = 0.0;
    let mut parseval: f64 = 0.0;
    let mut biorth: f64 = 0.0;
    let mut worst_slack = f64::INFINITY;
    let mut riesz_cases = 0;
    let mut cases = 0;
    for n in 2..=6 {
        let subgroups = subgroup_enumerate(n).map_err(|e| e.to_string())?;
        for sub in subgroups {
            let mut windows: Vec<_> = structured_windows(n).into_iter().map(|(_, w)| w).collect();
            for _ in 0..50 {
                windows.push(random_vector(n, &mut rng));
            }
            for w in windows {
                let sys = FiniteGaborSystem::new(w, sub.clone()).map_err(|e| e.to_string())?;
                let check = verify_theorem(&sys).map_err(|e| e.to_string())?;
                cases += 1;
                s_rel = s_rel.max(check.s_relation_residual);
                parseval = parseval.max(check.parseval_deviation);
                if check.is_riesz {
                    riesz_cases += 1;
                    let dev = check
                        .biorthogonality_deviation
                        .ok_or_else(|| format!("n={n}: Riesz case without biorthogonality check"))?;
                    biorth = biorth.max(dev);
                }
                worst_slack = worst_slack
                    .min(check.sandwich.lower_slack)
                    .min(check.sandwich.upper_slack);
            }
        }
    }
    ensure(s_rel <= 1e-10, || format!("S relation residual {s_rel:e}"))?;
    ensure(parseval <= 1e-10, || format!("Parseval norm deviation {parseval:e}"))?;
    ensure(biorth <= 1e-10, || format!("biorthogonality deviation {biorth:e}"))?;
    ensure(worst_slack >= -1e-9, || format!("sandwich slack {worst_slack:e}"))?;
    Ok(format!(
        "{cases} cases ({riesz_cases} Riesz): S {s_rel:.1e}, Parseval {parseval:.1e}, \
         biorth {biorth:.1e}, min slack {worst_slack:.1e}"
    ))
}

fn orthogonality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        for _ in 0..100 {
            let f = random_vector(n, &mut rng);
            let g = random_vector(n, &mut rng);
            let nf: f64 = f.iter().map(|z| z.norm_sqr()).sum();
            let ng: f64 = g.iter().map(|z| z.norm_sqr()).sum();
            let expected = n as f64 * nf * ng;
            let got = orthogonality_sum(n, &f, &g).map_err(|e| e.to_string())?;
            worst = worst.max((got - expected).abs() / expected);
        }
    }
    ensure(worst <= 1e-10, || format!("relative deviation {worst:e}"))?;
    Ok(format!("700 pairs, worst relative deviation {worst:.1e}"))
}

fn random_point(rng: &mut ChaCha8Rng) -> UpperHalfPoint {
    let x = rng.random_range(-3.0..3.0);
    let y = f64::exp(rng.random_range(-2.0..2.0));
    UpperHalfPoint::new(x, y).unwrap()
}

fn random_sl2(rng: &mut ChaCha8Rng) -> MoebiusMap {
    let a: f64 = rng.random_range(0.3..3.0);
    let b: f64 = rng.random_range(-2.0..2.0);
    let c: f64 = rng.random_range(-2.0..2.0);
    MoebiusMap::new(a, b, c, (1.0 + b * c) / a).unwrap()
}

fn kernel_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut corr: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for alpha in [2.0, 3.0, 4.5] {
        let weight = Weight::new(alpha).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let z = random_point(&mut rng);
            let w = random_point(&mut rng);
            let kz = KernelVector::new(z, weight);
            let kw = KernelVector::new(w, weight);
            let nz = kernel_norm_sq(&kz);
            let nw = kernel_norm_sq(&kw);
            ensure(nz > 0.0 && nw > 0.0, || format!("non-positive diagonal at {z} or {w}"))?;
            let ip = kernel_inner(&kz, &kw).map_err(|e| e.to_string())?;
            let lhs = ip.norm_sqr() / (nz * nw);
            let rhs = (distance(z, w) / 2.0).cosh().powf(-2.0 * alpha);
            corr = corr.max((lhs - rhs).abs());

            let m = random_sl2(&mut rng);
            let moved = orbit_inner(&apply_pi(&m, &kz), &apply_pi(&m, &kw)).map_err(|e| e.to_string())?;
            let scale = (nz * nw).sqrt();
            unit = unit.max((moved - ip).norm() / scale);
            let moved_norm = apply_pi(&m, &kz).norm_sq();
            unit = unit.max((moved_norm - nz).abs() / nz);
        }
    }
    ensure(corr <= 1e-10, || format!("correlation identity deviation {corr:e}"))?;
    ensure(unit <= 1e-10, || format!("unitarity deviation {unit:e}"))?;
    Ok(format!("3000 pairs: correlation {corr:.1e}, unitarity {unit:.1e}"))
}

fn formal_degree_check() -> Outcome {
    let centre = UpperHalfPoint::i();
    let mut lines = Vec::new();
    for alpha in [2.0, 3.0, 4.0, 6.0] {
        let start = Instant::now();
        let weight = Weight::new(alpha).map_err(|e| e.to_string())?;
        let expected = expected_formal_degree(alpha);
        let mut errors = Vec::new();
        for res in [(100, 4), (200, 8), (400, 16)] {
            let grid = bergman::default_formal_degree_grid(weight, centre, res).map_err(|e| e.to_string())?;
            let est = formal_degree(weight, &grid, centre, 1.0, None).map_err(|e| e.to_string())?;
            errors.push((est.value - expected).abs() / expected);
        }
        let elapsed = start.elapsed();
        let last = *errors.last().unwrap();
        ensure(last <= 0.01, || format!("alpha {alpha}: relative error {last:e}"))?;
        ensure(errors.windows(2).all(|w| w[1] < w[0]), || {
            format!("alpha {alpha}: errors do not decrease under halving {errors:?}")
        })?;
        ensure(elapsed <= Duration::from_secs(60), || {
            format!("alpha {alpha}: took {elapsed:?}")
        })?;
        lines.push(format!(
            "a={alpha}: {:.1e}>{:.1e}>{:.1e}",
            errors[0], errors[1], errors[2]
        ));
    }
    Ok(lines.join(", "))
}

fn covolume_check() -> Outcome {
    let grid = default_covolume_grid();
    let vol = covolume_psl2z(&grid, 1.0).map_err(|e| e.to_string())?;
    let rel = (vol.value - MODULAR_COVOLUME).abs() / MODULAR_COVOLUME;
    ensure(rel <= 1e-4, || format!("covolume relative error {rel:e}"))?;

    let weight = Weight::new(2.0).unwrap();
    let centre = UpperHalfPoint::i();
    let fd_grid = bergman::default_formal_degree_grid(weight, centre, (400, 16)).unwrap();
    let product = |c: f64| -> Result<f64, String> {
        let v = covolume_psl2z(&grid, c).map_err(|e| e.to_string())?;
        let d = formal_degree(weight, &fd_grid, centre, c, None).map_err(|e| e.to_string())?;
        Ok(v.value * d.value)
    };
    let base = product(1.0)?;
    let mut worst: f64 = 0.0;
    for c in [1.0 / 3.0, 7.0] {
        worst = worst.max((product(c)? - base).abs() / base);
    }
    ensure(worst <= 1e-12, || format!("Haar-scale drift {worst:e}"))?;
    Ok(format!("relative error {rel:.1e}, scale drift {worst:.1e}"))
}

fn stabilizers() -> Outcome {
    let spec = LatticeSpec::psl2z();
    let weight = Weight::new(2.0).unwrap();
    let points = [
        (UpperHalfPoint::i(), 2usize),
        (UpperHalfPoint::new(0.5, 3f64.sqrt() / 2.0).unwrap(), 3),
        (UpperHalfPoint::new(0.0, 2.0).unwrap(), 1),
    ];
    for bound in 2..=10 {
        let ball = ball_enumerate(&spec, bound as f64).map_err(|e| e.to_string())?;
        for (z, order) in points {
            let point = stabilizer_of_point(&ball, z, DEFAULT_STABILIZER_TOL).map_err(|e| e.to_string())?;
            let kernel = projective_stabilizer_kernel(
                &ball,
                &KernelVector::new(z, weight),
                bergman::DEFAULT_KERNEL_STABILIZER_TOL,
            )
            .map_err(|e| e.to_string())?;
            let a: HashSet<_> = point.elements.iter().map(MoebiusMap::key).collect();
            let b: HashSet<_> = kernel.elements.iter().map(MoebiusMap::key).collect();
            ensure(a == b, || format!("bound {bound}, z={z}: paths disagree"))?;
            ensure(a.len() == order, || {
                format!("bound {bound}, z={z}: order {} not {order}", a.len())
            })?;
        }
    }
    Ok("orders (2, 3, 1) on both paths for bounds 2..=10".into())
}

fn density_report() -> Outcome {
    let config = DensityStudyConfig::new(LatticeSpec::psl2z(), Weight::new(2.0).unwrap(), UpperHalfPoint::i());
    ensure(config.ball == 6.0 && config.probes == 40, || {
        "unexpected default configuration".into()
    })?;
    let study = density_study(&config).map_err(|e| e.to_string())?;
    let report = study.reports.last().ok_or("no reports")?;
    let rel = (report.density_product - 1.0 / 12.0).abs() * 12.0;
    ensure(rel <= 0.02, || {
        format!("density {} off by {rel:e}", report.density_product)
    })?;
    ensure(
        report.stab_order == 2 && (report.stabilizer_bound - 0.5).abs() < 1e-15,
        || format!("stabiliser order {}", report.stab_order),
    )?;
    ensure(
        report.verdict_frame == Verdict::Pass && study.consistent_with_frame,
        || "report does not state frame consistency".into(),
    )?;
    ensure(study.s_relation_residual <= 1e-8, || {
        format!("S relation residual {:e}", study.s_relation_residual)
    })?;
    ensure(study.steps.len() == 3, || {
        format!("{} refinement steps", study.steps.len())
    })?;
    ensure(study.probe_trace_monotone && study.riesz_trace_monotone, || {
        "refinement traces not monotone".into()
    })?;
    Ok(format!(
        "density {:.6} (rel {rel:.1e}), S residual {:.1e}, 3 monotone steps",
        report.density_product, study.s_relation_residual
    ))
}

fn ball_enumeration() -> Outcome {
    let spec = LatticeSpec::psl2z();
    let mut sizes = Vec::new();
    for bound in [2f64.sqrt(), 2.0, 5.0, 10.0] {
        let bfs = ball_enumerate(&spec, bound).map_err(|e| e.to_string())?;
        let brute = brute_force_integer_ball(bound).map_err(|e| e.to_string())?;
        ensure(bfs.key_set() == brute.key_set(), || {
            format!("bound {bound}: {} vs {} elements", bfs.len(), brute.len())
        })?;
        sizes.push(bfs.len().to_string());
    }
    Ok(format!("sizes {}", sizes.join(", ")))
}

fn main() -> ExitCode {
    let checks: [Check; 9] = [
        ("exhaustive finite density scan", finite_scan),
        ("finite identity residuals", proof_identities),
        ("discrete orthogonality relations", orthogonality),
        ("reproducing kernel correlation and unitarity", kernel_oracle),
        ("formal degree quadrature", formal_degree_check),
        ("modular covolume and Haar scaling", covolume_check),
        ("stabiliser orders on both paths", stabilizers),
        ("weight-2 density report at i", density_report),
        ("ball enumeration against brute force", ball_enumeration),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", idx + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
