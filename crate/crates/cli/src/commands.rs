//! One function per subcommand.

use std::io::Write as _;
use std::path::PathBuf;

use clap::Args;
use num_complex::Complex64;
use serde_json::{json, Value};

use ptspec_core::asymptotics::{eigenvalue_near_m2, near_m1, relative_error_percent, Sign};
use ptspec_core::classify::{classify_with, mirror_asymmetry, ClassifyConfig};
use ptspec_core::contour::PowerBranch;
use ptspec_core::discretize::{build_operator_on, DEFAULT_ETA};
use ptspec_core::eigensolve::{run_shift, spectrum_scan, Rect, ScanConfig, ShiftPlan};
use ptspec_core::shooting::{find_eigenvalue, scan_real_eigenvalues};
use ptspec_core::sweep::{sweep_circle, sweep_real, SolverConfig, SweepResult};
use ptspec_core::wedges::wedge_geometry;

use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, open_sink, write_json, CsvOut};
use crate::plot::{read_series, render, PlotSpec};
use crate::GlobalArgs;

const DEFAULT_SEED: u64 = 0x5eed;
const DEFAULT_RECT: &str = "-3,10,-6,6";

pub struct Context {
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub branch: PowerBranch,
    pub cfg: Config,
}

impl Context {
    pub fn new(g: &GlobalArgs, cfg: Config) -> Result<Self, CliError> {
        let out = cfg.resolve(g.out.clone(), "out")?;
        let seed = cfg.pick(g.seed, "seed", DEFAULT_SEED)?;
        let branch = cfg.pick(g.branch.clone(), "branch", "principal".to_string())?;
        let branch: PowerBranch = branch.parse()?;
        Ok(Self { out, seed, branch, cfg })
    }

    fn out(&self) -> Option<&std::path::Path> {
        self.out.as_deref()
    }

    fn plan(&self) -> ShiftPlan {
        ShiftPlan {
            seed: self.seed,
            ..ShiftPlan::default()
        }
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("{what}: cannot parse {p:?}: {e}")))
        })
        .collect()
}

/// `re,im` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    match parse_list(s, "complex value")?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(CliError::Usage(format!("expected re,im, got {s:?}"))),
    }
}

/// `re_min,re_max,im_min,im_max`.
pub fn parse_rect(s: &str) -> Result<Rect, CliError> {
    match parse_list(s, "rectangle")?.as_slice() {
        [a, b, c, d] => Ok(Rect::new(*a, *b, *c, *d)?),
        _ => Err(CliError::Usage(format!("expected re_min,re_max,im_min,im_max, got {s:?}"))),
    }
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("expected an index range like 0..12, got {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.trim().parse().map_err(|_| bad())?]),
    }
}

fn check_positive(x: f64, what: &str) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} must be positive, got {x}")))
    }
}

#[derive(Debug, Args)]
pub struct WedgesArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// text or json
    #[arg(long)]
    pub format: Option<String>,
}

pub fn wedges(ctx: &Context, a: WedgesArgs) -> Result<(), CliError> {
    let eps = ctx.cfg.require(a.eps, "eps")?;
    let format = ctx.cfg.pick(a.format, "format", "text".to_string())?;
    let w = wedge_geometry(eps)?;
    let angles = [
        ("right_center", w.right_center),
        ("right_lower", w.right_lower),
        ("right_upper", w.right_upper),
        ("left_center", w.left_center),
        ("left_lower", w.left_lower),
        ("left_upper", w.left_upper),
        ("opening", w.opening),
    ];
    match format.as_str() {
        "json" => {
            let mut obj = serde_json::Map::new();
            obj.insert("eps".into(), json!(eps));
            for (k, v) in angles {
                obj.insert(k.into(), json!({"rad": v, "deg": v.to_degrees()}));
            }
            write_json(ctx.out(), Value::Object(obj))
        }
        "text" => {
            let mut sink = open_sink(ctx.out())?;
            writeln!(sink, "eps = {}", num(eps))?;
            for (k, v) in angles {
                writeln!(sink, "{k:<13} {:>14} rad {:>14} deg", num(v), num(v.to_degrees()))?;
            }
            sink.flush()?;
            Ok(())
        }
        other => Err(CliError::Usage(format!("unknown format {other:?} (text or json)"))),
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Interior grid points
    #[arg(long)]
    pub n: Option<usize>,
    /// Dirichlet truncation distance from t = +-1
    #[arg(long)]
    pub eta: Option<f64>,
    /// Energy window re_min,re_max,im_min,im_max
    #[arg(long, allow_hyphen_values = true)]
    pub rect: Option<String>,
    /// Shift lattice columns
    #[arg(long)]
    pub nx: Option<usize>,
    /// Shift lattice rows
    #[arg(long)]
    pub ny: Option<usize>,
}

struct Grid {
    n: usize,
    eta: f64,
    rect: Rect,
    scan: ScanConfig,
}

fn grid(ctx: &Context, g: GridArgs, n_default: usize, lattice_default: usize) -> Result<Grid, CliError> {
    let n = ctx.cfg.pick(g.n, "n", n_default)?;
    let eta = ctx.cfg.pick(g.eta, "eta", DEFAULT_ETA)?;
    check_positive(eta, "eta")?;
    let rect = parse_rect(&ctx.cfg.pick(g.rect, "rect", DEFAULT_RECT.to_string())?)?;
    let nx = ctx.cfg.pick(g.nx, "nx", lattice_default)?;
    let ny = ctx.cfg.pick(g.ny, "ny", lattice_default)?;
    if nx == 0 || ny == 0 {
        return Err(CliError::Usage("nx and ny must be at least 1".into()));
    }
    Ok(Grid {
        n,
        eta,
        rect,
        scan: ScanConfig {
            nx,
            ny,
            plan: ctx.plan(),
            ..ScanConfig::default()
        },
    })
}

fn rect_text(r: &Rect) -> String {
    format!("{},{},{},{}", num(r.re_min), num(r.re_max), num(r.im_min), num(r.im_max))
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Skip classification (tags are then Unresolved)
    #[arg(long)]
    pub no_classify: bool,
}

pub fn solve(ctx: &Context, a: SolveArgs) -> Result<(), CliError> {
    let eps = ctx.cfg.require(a.eps, "eps")?;
    let g = grid(ctx, a.grid, 4000, 8)?;
    let skip = ctx.cfg.pick(a.no_classify.then_some(true), "no-classify", false)?;
    let e = Complex64::new(eps, 0.0);
    let op = build_operator_on(e, g.n, g.eta, ctx.branch)?;
    let pairs = spectrum_scan(&op, &g.rect, &g.scan)?;
    if pairs.is_empty() {
        return Err(CliError::Numerical(format!(
            "no eigenvalue converged in {}",
            rect_text(&g.rect)
        )));
    }
    let half = if skip {
        None
    } else {
        Some(build_operator_on(e, g.n, g.eta / 2.0, ctx.branch)?)
    };
    let cc = ClassifyConfig {
        plan: ShiftPlan {
            seed: ctx.seed,
            ..ClassifyConfig::default().plan
        },
        ..ClassifyConfig::default()
    };
    let mut csv = CsvOut::create(
        ctx.out(),
        &[
            ("command", "solve".into()),
            ("eps", num(eps)),
            ("n", g.n.to_string()),
            ("eta", num(g.eta)),
            ("rect", rect_text(&g.rect)),
            ("lattice", format!("{}x{}", g.scan.nx, g.scan.ny)),
            ("seed", ctx.seed.to_string()),
            ("branch", ctx.branch.to_string()),
        ],
        &["re_E", "im_E", "residual", "tag"],
    )?;
    for p in &pairs {
        let tag = match &half {
            Some(h) => classify_with(&op, h, p, &cc)?.verdict,
            None => p.tag,
        };
        csv.row([num(p.value.re), num(p.value.im), num(p.residual), tag.to_string()])?;
    }
    csv.finish()
}

#[derive(Debug, Args)]
pub struct ShootArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Upper end of the real-energy scan
    #[arg(long)]
    pub emax: Option<f64>,
    /// Secant start re,im; finds one complex eigenvalue instead of scanning
    #[arg(long, allow_hyphen_values = true)]
    pub guess: Option<String>,
}

pub fn shoot(ctx: &Context, a: ShootArgs) -> Result<(), CliError> {
    let eps = ctx.cfg.require(a.eps, "eps")?;
    let guess = ctx.cfg.resolve(a.guess, "guess")?;
    let mut params = vec![("command", "shoot".to_string()), ("eps", num(eps))];
    let values: Vec<Complex64> = match guess {
        Some(g) => {
            let g = parse_complex(&g)?;
            params.push(("guess", format!("{},{}", num(g.re), num(g.im))));
            vec![find_eigenvalue(Complex64::new(eps, 0.0), g)?]
        }
        None => {
            let emax = ctx.cfg.pick(a.emax, "emax", 20.0)?;
            params.push(("emax", num(emax)));
            let scan = scan_real_eigenvalues(eps, emax)?;
            for w in &scan.warnings {
                eprintln!("ptspec: warning: {w}");
            }
            scan.roots.into_iter().map(|r| Complex64::new(r, 0.0)).collect()
        }
    };
    let mut csv = CsvOut::create(ctx.out(), &params, &["re_E", "im_E"])?;
    for z in values {
        csv.row([num(z.re), num(z.im)])?;
    }
    csv.finish()
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Upper end of the real-energy shooting scan
    #[arg(long)]
    pub emax: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

fn solver_config(ctx: &Context, g: GridArgs, emax: Option<f64>) -> Result<SolverConfig, CliError> {
    let g = grid(ctx, g, 2000, 4)?;
    Ok(SolverConfig {
        n_interior: g.n,
        eta: g.eta,
        branch: ctx.branch,
        rect: g.rect,
        scan: g.scan,
        e_max: ctx.cfg.pick(emax, "emax", 12.0)?,
    })
}

fn solver_params(cfg: &SolverConfig, seed: u64) -> Vec<(&'static str, String)> {
    vec![
        ("n", cfg.n_interior.to_string()),
        ("eta", num(cfg.eta)),
        ("rect", rect_text(&cfg.rect)),
        ("lattice", format!("{}x{}", cfg.scan.nx, cfg.scan.ny)),
        ("emax", num(cfg.e_max)),
        ("seed", seed.to_string()),
        ("branch", cfg.branch.to_string()),
    ]
}

fn write_trajectories(csv: &mut CsvOut, res: &SweepResult) -> Result<(), CliError> {
    for t in &res.trajectories {
        for (eps, v) in res.eps_grid.iter().zip(&t.values) {
            if let Some(z) = v {
                csv.row(["point", &t.label, &num(eps.re), &num(eps.im), &num(z.re), &num(z.im)])?;
            }
        }
    }
    for m in &res.merges {
        let label = format!("{}+{}", res.trajectories[m.pair.0].label, res.trajectories[m.pair.1].label);
        csv.row(["merge", &label, &num(m.eps.re), &num(m.eps.im), &num(m.e.re), &num(m.e.im)])?;
    }
    for (i, why) in &res.failures {
        eprintln!("ptspec: solve failed at eps = {}: {why}", res.eps_grid[*i]);
    }
    for f in &res.flags {
        eprintln!("ptspec: flag: {f}");
    }
    Ok(())
}

const TRAJECTORY_COLUMNS: [&str; 6] = ["kind", "label", "eps_re", "eps_im", "re_E", "im_E"];

pub fn sweep(ctx: &Context, a: SweepArgs) -> Result<(), CliError> {
    let from = ctx.cfg.require(a.from, "from")?;
    let to = ctx.cfg.require(a.to, "to")?;
    let step = ctx.cfg.pick(a.step, "step", 0.01)?;
    check_positive(step, "step")?;
    let cfg = solver_config(ctx, a.grid, a.emax)?;
    let res = sweep_real(from, to, step, &cfg)?;
    let mut params = vec![
        ("command", "sweep".to_string()),
        ("from", num(from)),
        ("to", num(to)),
        ("step", num(step)),
    ];
    params.extend(solver_params(&cfg, ctx.seed));
    let mut csv = CsvOut::create(ctx.out(), &params, &TRAJECTORY_COLUMNS)?;
    write_trajectories(&mut csv, &res)?;
    csv.finish()?;
    for m in &res.merges {
        eprintln!("ptspec: merge at eps = {}, E = {}", num(m.eps.re), num(m.e.re));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    /// Circle center re,im
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Travel clockwise
    #[arg(long)]
    pub clockwise: bool,
    /// Where to write the monodromy report (JSON; default: stderr)
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
}

pub fn circle(ctx: &Context, a: CircleArgs) -> Result<(), CliError> {
    let center = parse_complex(&ctx.cfg.pick(a.center, "center", "-1,0".to_string())?)?;
    let radius = ctx.cfg.pick(a.radius, "radius", 0.05)?;
    let points = ctx.cfg.pick(a.points, "points", 64)?;
    let clockwise = ctx.cfg.pick(a.clockwise.then_some(true), "clockwise", false)?;
    let report = ctx.cfg.resolve(a.report, "report")?;
    let cfg = solver_config(ctx, a.grid, None)?;
    let res = sweep_circle(center, radius, points, clockwise, &cfg)?;
    let mut params = vec![
        ("command", "circle".to_string()),
        ("center", format!("{},{}", num(center.re), num(center.im))),
        ("radius", num(radius)),
        ("points", points.to_string()),
        ("clockwise", clockwise.to_string()),
    ];
    params.extend(solver_params(&cfg, ctx.seed));
    let mut csv = CsvOut::create(ctx.out(), &params, &TRAJECTORY_COLUMNS)?;
    write_trajectories(&mut csv, &res)?;
    csv.finish()?;

    let starts: Vec<Value> = res
        .trajectories
        .iter()
        .map(|t| t.values[0].map_or(Value::Null, |z| json!([z.re, z.im])))
        .collect();
    let mono = json!({
        "center": [center.re, center.im],
        "radius": radius,
        "points": points,
        "clockwise": clockwise,
        "labels": res.trajectories.iter().map(|t| t.label.clone()).collect::<Vec<_>>(),
        "start": starts,
        "monodromy": res.monodromy,
    });
    match report {
        Some(p) => write_json(Some(&p), mono),
        None => {
            eprintln!("{}", serde_json::to_string(&crate::output::round_json(mono))?);
            Ok(())
        }
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Shift re,im; the eigenvalues nearest it are classified
    #[arg(long, allow_hyphen_values = true)]
    pub near: Option<String>,
    /// How many eigenvalues to classify
    #[arg(long)]
    pub wanted: Option<usize>,
}

pub fn classify(ctx: &Context, a: ClassifyArgs) -> Result<(), CliError> {
    let eps = ctx.cfg.require(a.eps, "eps")?;
    let n = ctx.cfg.pick(a.n, "n", 4000)?;
    let eta = ctx.cfg.pick(a.eta, "eta", DEFAULT_ETA)?;
    check_positive(eta, "eta")?;
    let near = parse_complex(&ctx.cfg.require::<String>(a.near, "near")?)?;
    let wanted = ctx.cfg.pick(a.wanted, "wanted", 4)?;
    let e = Complex64::new(eps, 0.0);
    let op = build_operator_on(e, n, eta, ctx.branch)?;
    let half = build_operator_on(e, n, eta / 2.0, ctx.branch)?;
    let plan = ShiftPlan { wanted, ..ctx.plan() };
    let mut pairs = run_shift(&op, near, &plan, ctx.seed)?.converged;
    if pairs.is_empty() {
        return Err(CliError::Numerical(format!("no eigenvalue converged near {near}")));
    }
    pairs.sort_by(|p, q| (p.value - near).norm().total_cmp(&(q.value - near).norm()));
    let cc = ClassifyConfig {
        plan: ShiftPlan {
            seed: ctx.seed,
            ..ClassifyConfig::default().plan
        },
        ..ClassifyConfig::default()
    };
    let mut reports = Vec::new();
    for p in &pairs {
        let r = classify_with(&op, &half, p, &cc)?;
        reports.push(json!({
            "eig": [r.eig.re, r.eig.im],
            "counterpart": r.counterpart.map(|z| [z.re, z.im]),
            "drift": r.drift,
            "left_decay": r.left_decay,
            "right_decay": r.right_decay,
            "verdict": r.verdict,
            "residual": p.residual,
            "mirror_asymmetry": mirror_asymmetry(&p.vector),
        }));
    }
    write_json(
        ctx.out(),
        json!({
            "eps": eps,
            "n": n,
            "eta": eta,
            "near": [near.re, near.im],
            "seed": ctx.seed,
            "branch": ctx.branch.to_string(),
            "reports": reports,
        }),
    )
}

#[derive(Debug, Args)]
pub struct AsymptArgs {
    /// m2 (eps = -2 + delta) or m1 (eps = -1 + delta)
    #[arg(long)]
    pub near: Option<String>,
    /// One or more comma-separated offsets
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Level range for m2, e.g. 0..12
    #[arg(long)]
    pub k: Option<String>,
    /// Level index for m1 (parity must match the sign of delta)
    #[arg(long, allow_negative_numbers = true)]
    pub index: Option<i64>,
    /// Formula only
    #[arg(long)]
    pub no_numeric: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn asympt(ctx: &Context, a: AsymptArgs) -> Result<(), CliError> {
    let near = ctx.cfg.pick(a.near, "near", "m2".to_string())?;
    let deltas = parse_list(&ctx.cfg.pick(a.delta, "delta", "0.01".to_string())?, "delta")?;
    let numeric = !ctx.cfg.pick(a.no_numeric.then_some(true), "no-numeric", false)?;
    match near.as_str() {
        "m2" => {
            let ks = parse_range(&ctx.cfg.pick(a.k, "k", "0..12".to_string())?)?;
            let n = ctx.cfg.pick(a.n, "n", 20000)?;
            let eta = ctx.cfg.pick(a.eta, "eta", 1e-3)?;
            check_positive(eta, "eta")?;
            let mut csv = CsvOut::create(
                ctx.out(),
                &[
                    ("command", "asympt".into()),
                    ("near", near.clone()),
                    ("n", n.to_string()),
                    ("eta", num(eta)),
                    ("numeric", numeric.to_string()),
                    ("seed", ctx.seed.to_string()),
                    ("branch", ctx.branch.to_string()),
                ],
                &["delta", "k", "re_num", "im_num", "re_asym", "im_asym", "rel_err_re_pct", "rel_err_im_pct"],
            )?;
            for &delta in &deltas {
                let estimates: Vec<Complex64> = ks
                    .iter()
                    .map(|&k| eigenvalue_near_m2(k, delta, Sign::Minus))
                    .collect::<Result<_, _>>()?;
                let rows = if numeric {
                    near_m2_numeric(ctx, delta, &estimates, n, eta)?
                } else {
                    Vec::new()
                };
                for (&k, est) in ks.iter().zip(&estimates) {
                    // row k is the (k/2)-th eigenvalue
                    let numv = (k % 2 == 0).then(|| rows.get(k as usize / 2).copied()).flatten();
                    csv.row([
                        num(delta),
                        k.to_string(),
                        opt(numv.map(|z| z.re)),
                        opt(numv.map(|z| z.im)),
                        num(est.re),
                        num(est.im),
                        opt(numv.map(|z| relative_error_percent(z.re, est.re))),
                        opt(numv.map(|z| relative_error_percent(z.im, est.im))),
                    ])?;
                }
            }
            csv.finish()
        }
        "m1" => {
            let index = ctx.cfg.pick(a.index, "index", 0)?;
            let mut csv = CsvOut::create(
                ctx.out(),
                &[
                    ("command", "asympt".into()),
                    ("near", near.clone()),
                    ("index", index.to_string()),
                    ("numeric", numeric.to_string()),
                ],
                &["delta", "index", "re_num", "im_num", "re_asym", "im_asym", "rel_err_re_pct", "rel_err_im_pct"],
            )?;
            for &delta in &deltas {
                let est = near_m1(delta, index)?;
                let numv = if numeric { near_m1_numeric(delta, index, est.re_e, est.im_e)? } else { None };
                csv.row([
                    num(delta),
                    index.to_string(),
                    opt(numv.map(|z| z.re)),
                    opt(numv.map(|z| z.im)),
                    num(est.re_e),
                    num(est.im_e),
                    opt(numv.map(|z| relative_error_percent(z.re, est.re_e))),
                    opt(numv.and_then(|z| (z.im != 0.0).then(|| relative_error_percent(z.im, est.im_e)))),
                ])?;
            }
            csv.finish()
        }
        other => Err(CliError::Usage(format!("unknown --near {other:?} (m1 or m2)"))),
    }
}

/// Upper-half-plane eigenvalues left of -1 at `eps = -2 + delta`, in order
/// of decreasing real part.
fn near_m2_numeric(
    ctx: &Context,
    delta: f64,
    estimates: &[Complex64],
    n: usize,
    eta: f64,
) -> Result<Vec<Complex64>, CliError> {
    let op = build_operator_on(Complex64::new(-2.0 + delta, 0.0), n, eta, ctx.branch)?;
    let re_min = estimates.iter().map(|z| z.re).fold(-1.0, f64::min);
    let im_max = estimates.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    // a row of shifts along the band of eigenvalues left of -1
    let rect = Rect::new(re_min - 0.01, -1.0, 0.0, 2.0 * im_max)?;
    let scan = ScanConfig {
        nx: 4,
        ny: 1,
        plan: ctx.plan(),
        ..ScanConfig::default()
    };
    let mut v: Vec<Complex64> = spectrum_scan(&op, &rect, &scan)?
        .into_iter()
        .map(|p| p.value)
        .filter(|z| z.im > 0.0 && z.re < -1.0)
        .collect();
    v.sort_by(|a, b| b.re.total_cmp(&a.re));
    Ok(v)
}

fn near_m1_numeric(delta: f64, index: i64, re: f64, im: f64) -> Result<Option<Complex64>, CliError> {
    let eps = -1.0 + delta;
    if index == 0 {
        let roots = scan_real_eigenvalues(eps, (3.0 * re).max(10.0).min(50.0))?.roots;
        return Ok(roots.first().map(|&r| Complex64::new(r, 0.0)));
    }
    Ok(find_eigenvalue(Complex64::new(eps, 0.0), Complex64::new(re, im)).ok())
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// CSV file written by another command
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    /// Column whose values split the rows into series
    #[arg(long)]
    pub group: Option<String>,
    /// Points instead of lines
    #[arg(long)]
    pub scatter: bool,
    #[arg(long)]
    pub title: Option<String>,
}

pub fn plot(ctx: &Context, a: PlotArgs) -> Result<(), CliError> {
    let input = ctx.cfg.require(a.input, "input")?;
    let spec = PlotSpec {
        x: ctx.cfg.require(a.x, "x")?,
        y: ctx.cfg.require(a.y, "y")?,
        group: ctx.cfg.resolve(a.group, "group")?,
        scatter: ctx.cfg.pick(a.scatter.then_some(true), "scatter", false)?,
        title: ctx.cfg.resolve(a.title, "title")?,
    };
    let series = read_series(&input, &spec)?;
    let mut sink = open_sink(ctx.out())?;
    sink.write_all(render(&series, &spec).as_bytes())?;
    sink.flush()?;
    Ok(())
}
