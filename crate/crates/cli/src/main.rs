//! `orbit-density`: density checks for lattice orbits from the command line.
//!
//! Exit codes: 0 success, 1 theorem violation in an exact computation,
//! 2 usage error, 3 numerical failure.

mod config;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use orbit_density::bergman::{
    self, default_formal_degree_grid, density_study, formal_degree, projective_stabilizer_kernel, BergmanError,
    DensityStudyConfig, KernelVector, Weight,
};
use orbit_density::finite_gabor::{self, GaborError, MAX_SCAN_MODULUS};
use orbit_density::frames::FrameReport;
use orbit_density::fuchsian::{
    ball_enumerate, brute_force_integer_ball, lattice_covolume, stabilizer_of_point, GroupError, LatticeSpec,
    INTEGER_BALL_MAX_BOUND,
};
use orbit_density::hyperbolic::{MoebiusMap, UpperHalfPoint};

use config::ConfigFile;
use output::{Emitter, Format, Record};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Violation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Internal(_) => 3,
            // A closed pipe on stdout is not worth a distinct code.
            CliError::Io(_) => 3,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::TooManyElements { .. } | GroupError::Quadrature(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<BergmanError> for CliError {
    fn from(e: BergmanError) -> Self {
        match e {
            BergmanError::InvalidWeight(_)
            | BergmanError::InvalidScale(_)
            | BergmanError::InvalidParameter(_)
            | BergmanError::WeightMismatch(..) => CliError::Usage(e.to_string()),
            BergmanError::Group(g) => g.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<GaborError> for CliError {
    fn from(e: GaborError) -> Self {
        match e {
            GaborError::ModulusTooSmall(_)
            | GaborError::ModulusTooLarge { .. }
            | GaborError::LengthMismatch { .. }
            | GaborError::BadWindow
            | GaborError::NotSubgroup(_) => CliError::Usage(e.to_string()),
            GaborError::TheoremViolation(_) => CliError::Violation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "orbit-density",
    version,
    about = "Density conditions for frames and Riesz sequences in lattice orbits"
)]
struct Cli {
    /// Flat `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exhaustive exact check over all subgroups of Z_n x Z_n.
    FiniteScan {
        #[arg(long)]
        n_max: Option<usize>,
        /// Random windows per (n, subgroup) case.
        #[arg(long)]
        windows: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Density report for a kernel orbit of a Fuchsian lattice.
    BergmanDensity {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Point of the upper half-plane, e.g. `i`, `2i`, `0.5+0.866i`.
        #[arg(long)]
        z: Option<String>,
        /// Frobenius norm bound of the largest ball.
        #[arg(long)]
        ball: Option<f64>,
        #[arg(long)]
        probes: Option<usize>,
        #[arg(long)]
        probe_radius: Option<f64>,
        #[arg(long)]
        haar_scale: Option<f64>,
        #[arg(long)]
        frame_floor: Option<f64>,
        #[arg(long)]
        riesz_floor: Option<f64>,
        /// Formal-degree grid as `RADIALxANGULAR`.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Formal degree of the weighted Bergman representation by quadrature.
    FormalDegree {
        #[arg(long)]
        alpha: Option<f64>,
        /// Centre of the generating kernel.
        #[arg(long)]
        z: Option<String>,
        /// Grid as `RADIALxANGULAR`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        haar_scale: Option<f64>,
        /// Largest accepted relative error estimate.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Enumerate a Frobenius-norm ball of lattice elements.
    Ball {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        norm: Option<f64>,
    },
    /// Point and kernel stabilisers within a ball.
    Stabilizer {
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        ball: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Hyperbolic-distance tolerance for stabiliser membership
        /// (default 1e-4, enough for points typed to four decimals).
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

struct Ctx {
    cfg: ConfigFile,
    format: Format,
}

impl Ctx {
    fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.cfg.get(key)?.unwrap_or(default)),
        }
    }

    fn pick_opt<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.cfg.get(key),
        }
    }

    fn point(&self, flag: Option<String>) -> Result<UpperHalfPoint, CliError> {
        let s = self.pick(flag, "z", "i".to_string())?;
        UpperHalfPoint::parse(&s).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn weight(&self, flag: Option<f64>) -> Result<Weight, CliError> {
        let alpha = self.pick(flag, "alpha", 2.0)?;
        if alpha > 50.0 {
            return Err(CliError::Usage(format!("alpha {alpha} outside (1, 50]")));
        }
        Ok(Weight::new(alpha)?)
    }

    fn haar_scale(&self, flag: Option<f64>) -> Result<f64, CliError> {
        let c = self.pick(flag, "haar_scale", 1.0)?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(CliError::Usage(format!("haar scale must be positive, got {c}")));
        }
        Ok(c)
    }

    fn grid(&self, flag: Option<String>) -> Result<(usize, usize), CliError> {
        let s = self.pick(flag, "grid", "400x16".to_string())?;
        parse_grid(&s)
    }

    fn lattice(&self, flag: Option<String>) -> Result<LatticeSpec, CliError> {
        let name = match flag {
            Some(n) => n,
            None => self
                .cfg
                .raw("lattice")
                .or(self.cfg.raw("lattice.name"))
                .unwrap_or("psl2z")
                .to_string(),
        };
        if self.cfg.raw("lattice.name") == Some(name.as_str()) {
            let generators = match self.cfg.raw("lattice.generators") {
                Some(g) => parse_generators(g)?,
                None if name == "psl2z" => LatticeSpec::psl2z().generators,
                None => return Err(CliError::Usage(format!("lattice {name:?} needs lattice.generators"))),
            };
            let covolume = self.cfg.get::<f64>("lattice.covolume")?;
            if covolume.is_some_and(|v| !(v > 0.0 && v.is_finite())) {
                return Err(CliError::Usage("lattice.covolume must be positive".into()));
            }
            return Ok(LatticeSpec {
                name,
                generators,
                covolume,
                full_integer_group: self.cfg.get("lattice.full_integer_group")?.unwrap_or(false),
            });
        }
        if name == "psl2z" {
            Ok(LatticeSpec::psl2z())
        } else {
            Err(CliError::Usage(format!(
                "unknown lattice {name:?}; define it with lattice.* config keys"
            )))
        }
    }

    fn emitter(&self) -> Emitter<io::StdoutLock<'static>> {
        Emitter::new(self.format, io::stdout().lock())
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let err = || CliError::Usage(format!("grid must look like 400x16, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(err)?;
    let a: usize = a.trim().parse().map_err(|_| err())?;
    let b: usize = b.trim().parse().map_err(|_| err())?;
    if !(2..=20_000).contains(&a) || !(1..=20_000).contains(&b) {
        return Err(CliError::Usage(format!("grid {a}x{b} outside [2, 20000] x [1, 20000]")));
    }
    Ok((a, b))
}

/// `a,b,c,d; a,b,c,d; ...`
fn parse_generators(s: &str) -> Result<Vec<MoebiusMap>, CliError> {
    let mut out = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let nums: Result<Vec<f64>, _> = part.split(',').map(|x| x.trim().parse::<f64>()).collect();
        let nums = nums.map_err(|_| CliError::Usage(format!("cannot parse generator {part:?}")))?;
        let [a, b, c, d] = nums[..] else {
            return Err(CliError::Usage(format!("generator {part:?} needs four entries")));
        };
        out.push(MoebiusMap::new(a, b, c, d).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    if out.is_empty() {
        return Err(CliError::Usage("lattice.generators is empty".into()));
    }
    Ok(out)
}

fn check_range<T: PartialOrd + std::fmt::Display>(name: &str, v: T, lo: T, hi: T) -> Result<T, CliError> {
    if v < lo || v > hi {
        Err(CliError::Usage(format!("{name} = {v} outside [{lo}, {hi}]")))
    } else {
        Ok(v)
    }
}

fn element_record(m: &MoebiusMap) -> Record {
    let [a, b, c, d] = m.entries();
    Record::new()
        .with("a", a)
        .with("b", b)
        .with("c", c)
        .with("d", d)
        .with("norm", m.frobenius_norm())
}

fn frame_report_record(r: &FrameReport) -> Record {
    Record::new()
        .with("schema_version", r.schema_version as usize)
        .with("mode", format!("{:?}", r.mode).to_lowercase())
        .with("step", r.step)
        .with("truncation_radius", r.truncation_radius)
        .with("index_count", r.index_count)
        .with("probe_count", r.probe_count)
        .with("frame_lower_estimate", r.frame_lower_estimate)
        .with("frame_upper_estimate", r.frame_upper_estimate)
        .with("riesz_min", r.riesz_min)
        .with("riesz_max", r.riesz_max)
        .with("stab_order", r.stab_order)
        .with("covolume", r.covolume)
        .with("covolume_error", r.covolume_error)
        .with("formal_degree", r.formal_degree)
        .with("formal_degree_error", r.formal_degree_error)
        .with("density_product", r.density_product)
        .with("stabilizer_bound", r.stabilizer_bound)
        .with("is_frame", r.is_frame)
        .with("is_riesz", r.is_riesz)
        .with("verdict_frame", r.verdict_frame.as_str())
        .with("verdict_riesz", r.verdict_riesz.as_str())
        .with("flagged", r.flagged)
        .with("note", r.note.clone())
}

fn cmd_finite_scan(ctx: &Ctx, n_max: Option<usize>, windows: Option<usize>, seed: Option<u64>) -> Result<(), CliError> {
    let n_max = check_range("n_max", ctx.pick(n_max, "n_max", 6)?, 2, MAX_SCAN_MODULUS)?;
    let windows = check_range("windows", ctx.pick(windows, "windows", 50)?, 0, 100_000)?;
    let seed = ctx.pick(seed, "seed", 0)?;
    let report = finite_gabor::exhaustive_scan(n_max, windows, seed)?;
    let s = &report.summary;
    let summary = Record::new()
        .with("record", "summary")
        .with("n_max", s.n_max)
        .with("windows_per_case", s.windows_per_case)
        .with("seed", s.seed)
        .with("cases", s.cases)
        .with("frames", s.frames)
        .with("riesz", s.riesz)
        .with("violations", s.violations)
        .with("max_identity_residual", s.max_identity_residual);
    match ctx.format {
        Format::Csv => {
            let mut out = io::stdout().lock();
            report.write_csv(&mut out)?;
            out.flush()?;
            Emitter::new(Format::Csv, io::sink()).summary(&summary)?;
        }
        Format::Json => {
            let mut em = ctx.emitter();
            for r in &report.rows {
                em.record(
                    &Record::new()
                        .with("n", r.n)
                        .with("subgroup_order", r.subgroup_order)
                        .with("subgroup_gens", r.subgroup_gens.clone())
                        .with("window_id", r.window_id.clone())
                        .with("stab_order", r.stab_order)
                        .with("lambda_size", r.lambda_size)
                        .with("is_frame", r.is_frame)
                        .with("is_riesz", r.is_riesz)
                        .with("vol_times_d", r.vol_times_d)
                        .with("bound", r.bound)
                        .with("verdict_i", r.verdict_i.as_str())
                        .with("verdict_ii", r.verdict_ii.as_str())
                        .with("max_identity_residual", r.max_identity_residual),
                )?;
            }
            em.summary(&summary)?;
            em.finish()?;
        }
        Format::Human => {
            let mut em = ctx.emitter();
            em.summary(&summary)?;
            em.finish()?;
        }
    }
    if !report.violations.is_empty() {
        for v in &report.violations {
            eprintln!(
                "violation: n={} gens={} window={} seed={} window_entries={:?}: {}",
                v.n, v.subgroup_gens, v.window_id, v.seed, v.window, v.message
            );
        }
        return Err(CliError::Violation(format!(
            "{} theorem violations",
            report.violations.len()
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bergman_density(
    ctx: &Ctx,
    lattice: Option<String>,
    alpha: Option<f64>,
    z: Option<String>,
    ball: Option<f64>,
    probes: Option<usize>,
    probe_radius: Option<f64>,
    haar_scale: Option<f64>,
    frame_floor: Option<f64>,
    riesz_floor: Option<f64>,
    grid: Option<String>,
) -> Result<(), CliError> {
    let spec = ctx.lattice(lattice)?;
    let weight = ctx.weight(alpha)?;
    let z = ctx.point(z)?;
    let mut cfg = DensityStudyConfig::new(spec.clone(), weight, z);
    cfg.ball = check_range("ball", ctx.pick(ball, "ball", 6.0)?, 2f64.sqrt(), 30.0)?;
    cfg.probes = check_range("probes", ctx.pick(probes, "probes", 40)?, 1, 500)?;
    cfg.probe_radius = check_range("probe_radius", ctx.pick(probe_radius, "probe_radius", 1.0)?, 1e-3, 10.0)?;
    cfg.haar_scale = ctx.haar_scale(haar_scale)?;
    cfg.frame_floor = check_range("frame_floor", ctx.pick(frame_floor, "frame_floor", 1e-6)?, 0.0, 1.0)?;
    cfg.riesz_floor = check_range("riesz_floor", ctx.pick(riesz_floor, "riesz_floor", 1e-6)?, 0.0, 1.0)?;
    cfg.formal_degree_resolution = ctx.grid(grid)?;

    let study = density_study(&cfg)?;
    // Recompute the density product at unit scale: it must not move.
    let unit_covolume = lattice_covolume(&spec, 1.0)?.value;
    let unit_grid = default_formal_degree_grid(weight, z, cfg.formal_degree_resolution)?;
    let unit_degree = formal_degree(weight, &unit_grid, z, 1.0, None)?.value;
    let unit_density = unit_covolume * unit_degree;
    let density = study.reports.last().map(|r| r.density_product).unwrap_or(f64::NAN);
    let scale_deviation = (density - unit_density).abs() / unit_density;
    if scale_deviation > 1e-12 {
        return Err(CliError::Numerical(format!(
            "density product moved by {scale_deviation:e} under Haar rescaling"
        )));
    }

    let mut em = ctx.emitter();
    for r in &study.reports {
        em.record(&frame_report_record(r))?;
    }
    let consistent = study.verdicts_consistent;
    em.summary(
        &Record::new()
            .with("record", "summary")
            .with("lattice", spec.name.clone())
            .with("alpha", weight.alpha())
            .with("z", z.to_string())
            .with("haar_scale", cfg.haar_scale)
            .with("covolume", study.covolume.value)
            .with("formal_degree", study.formal_degree.value)
            .with("formal_degree_error", study.formal_degree.error_estimate)
            .with("density_product", density)
            .with("stab_order", study.stab_order)
            .with("stabilizer_bound", 1.0 / study.stab_order as f64)
            .with("stabilizer_closed", study.stabilizer_closed)
            .with("consistent_with_frame", study.consistent_with_frame)
            .with("consistent_with_riesz", study.consistent_with_riesz)
            .with("s_relation_residual", study.s_relation_residual)
            .with("span_equal", study.span_equal)
            .with("probe_trace_monotone", study.probe_trace_monotone)
            .with("riesz_trace_monotone", study.riesz_trace_monotone)
            .with("haar_scale_deviation", scale_deviation)
            .with("verdict_consistency", if consistent { "pass" } else { "flagged" })
            .with(
                "note",
                "finite sections only: frame and Riesz decisions are consistency statements about truncations",
            ),
    )?;
    em.finish()
}

fn cmd_formal_degree(
    ctx: &Ctx,
    alpha: Option<f64>,
    z: Option<String>,
    grid: Option<String>,
    haar_scale: Option<f64>,
    tolerance: Option<f64>,
) -> Result<(), CliError> {
    let weight = ctx.weight(alpha)?;
    let z = ctx.point(z)?;
    let resolution = ctx.grid(grid)?;
    let scale = ctx.haar_scale(haar_scale)?;
    let tolerance = ctx.pick_opt(tolerance, "tolerance")?;
    if let Some(t) = tolerance {
        check_range("tolerance", t, 1e-15, 1.0)?;
    }
    let grid = default_formal_degree_grid(weight, z, resolution)?;
    let est = formal_degree(weight, &grid, z, scale, tolerance)?;
    let mut em = ctx.emitter();
    em.record(
        &Record::new()
            .with("alpha", weight.alpha())
            .with("z", z.to_string())
            .with("grid_radial", resolution.0)
            .with("grid_angular", resolution.1)
            .with("radius", bergman::default_radius(weight))
            .with("haar_scale", scale)
            .with("formal_degree", est.value)
            .with("error_estimate", est.error_estimate)
            .with("coarse_value", est.coarse_value)
            .with("relative_error_estimate", est.error_estimate / est.value),
    )?;
    em.finish()
}

fn cmd_ball(ctx: &Ctx, lattice: Option<String>, norm: Option<f64>) -> Result<(), CliError> {
    let spec = ctx.lattice(lattice)?;
    let norm = ctx.pick(norm, "norm", 2.0)?;
    if !norm.is_finite() {
        return Err(CliError::Usage("norm must be finite".into()));
    }
    let ball = ball_enumerate(&spec, norm)?;
    let oracle_equal = if spec.full_integer_group && norm <= INTEGER_BALL_MAX_BOUND {
        Some(brute_force_integer_ball(norm)?.key_set() == ball.key_set())
    } else {
        None
    };
    let mut em = ctx.emitter();
    for m in ball.elements() {
        em.record(&element_record(m))?;
    }
    em.summary(
        &Record::new()
            .with("record", "summary")
            .with("lattice", spec.name.clone())
            .with("norm_bound", norm)
            .with("size", ball.len())
            .with("closure_certified", ball.closure_certified())
            .with("oracle_equal", oracle_equal),
    )?;
    em.finish()?;
    if oracle_equal == Some(false) {
        return Err(CliError::Numerical("ball differs from the integer enumeration".into()));
    }
    Ok(())
}

fn cmd_stabilizer(
    ctx: &Ctx,
    lattice: Option<String>,
    z: Option<String>,
    ball: Option<f64>,
    alpha: Option<f64>,
    tolerance: Option<f64>,
) -> Result<(), CliError> {
    let spec = ctx.lattice(lattice)?;
    let z = ctx.point(z)?;
    let norm = ctx.pick(ball, "ball", 4.0)?;
    let weight = ctx.weight(alpha)?;
    let tol = check_range("tolerance", ctx.pick(tolerance, "tolerance", 1e-4)?, 1e-12, 1e-4)?;
    let ball = ball_enumerate(&spec, norm)?;
    let point = stabilizer_of_point(&ball, z, tol)?;
    let kernel_tol = bergman::kernel_tolerance_for_distance(tol, weight);
    let kernel = projective_stabilizer_kernel(&ball, &KernelVector::new(z, weight), kernel_tol)?;
    let mut em = ctx.emitter();
    for (m, u) in &kernel.phases.entries {
        em.record(&element_record(m).with("phase_re", u.re).with("phase_im", u.im))?;
    }
    em.summary(
        &Record::new()
            .with("record", "summary")
            .with("lattice", spec.name.clone())
            .with("z", z.to_string())
            .with("norm_bound", norm)
            .with("ball_size", ball.len())
            .with("order", point.order())
            .with("kernel_order", kernel.order())
            .with("closed_in_ball", point.closed_in_ball),
    )?;
    em.finish()
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => cfg.get::<Format>("format")?.unwrap_or(Format::Human),
    };
    let ctx = Ctx { cfg, format };
    match cli.command {
        Command::FiniteScan { n_max, windows, seed } => cmd_finite_scan(&ctx, n_max, windows, seed),
        Command::BergmanDensity {
            lattice,
            alpha,
            z,
            ball,
            probes,
            probe_radius,
            haar_scale,
            frame_floor,
            riesz_floor,
            grid,
        } => cmd_bergman_density(
            &ctx,
            lattice,
            alpha,
            z,
            ball,
            probes,
            probe_radius,
            haar_scale,
            frame_floor,
            riesz_floor,
            grid,
        ),
        Command::FormalDegree {
            alpha,
            z,
            grid,
            haar_scale,
            tolerance,
        } => cmd_formal_degree(&ctx, alpha, z, grid, haar_scale, tolerance),
        Command::Ball { lattice, norm } => cmd_ball(&ctx, lattice, norm),
        Command::Stabilizer {
            lattice,
            z,
            ball,
            alpha,
            tolerance,
        } => cmd_stabilizer(&ctx, lattice, z, ball, alpha, tolerance),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
