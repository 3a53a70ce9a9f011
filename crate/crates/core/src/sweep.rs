//! Parameter continuation in `eps`: real sweeps, circles in the complex `eps`
//! plane, trajectory matching and exceptional-point location.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::PowerBranch;
use crate::discretize::{build_operator_on, DEFAULT_ETA};
use crate::eigensolve::{run_shift, spectrum_scan, Rect, ScanConfig, ShiftPlan};
use crate::error::{domain, Error, Result};
use crate::shooting::{find_eigenvalue, scan_real_eigenvalues};

/// Below this `eps` the winding contour replaces shooting.
pub const HANDOFF: f64 = -0.95;
/// Allowed disagreement of the two solvers next to the handoff.
pub const HANDOFF_AGREEMENT: f64 = 5e-4;
/// Imaginary parts below `REAL_TOL (1 + |E|)` are rounded to zero.
const REAL_TOL: f64 = 1e-8;
/// Eigenvalues closer than `MERGE_TOL (1 + |E|)` are one eigenvalue. The
/// operator is far from normal, so copies found from different shifts can
/// differ well above the Arnoldi tolerance.
const MERGE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub n_interior: usize,
    pub eta: f64,
    pub branch: PowerBranch,
    /// Energy window of the winding-contour solves.
    pub rect: Rect,
    pub scan: ScanConfig,
    /// Ceiling of the real-energy shooting scan.
    pub e_max: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_interior: 2000,
            eta: DEFAULT_ETA,
            branch: PowerBranch::default(),
            rect: Rect {
                re_min: -3.0,
                re_max: 10.0,
                im_min: -6.0,
                im_max: 6.0,
            },
            scan: ScanConfig {
                nx: 4,
                ny: 4,
                ..ScanConfig::default()
            },
            e_max: 12.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub label: String,
    /// One entry per grid point; `None` where the trajectory is absent.
    pub values: Vec<Option<Complex64>>,
}

impl Trajectory {
    pub fn first_index(&self) -> Option<usize> {
        self.values.iter().position(Option::is_some)
    }

    pub fn last_index(&self) -> Option<usize> {
        self.values.iter().rposition(Option::is_some)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub eps: Complex64,
    pub e: Complex64,
    /// Indices of the two trajectories that meet.
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub eps_grid: Vec<Complex64>,
    pub trajectories: Vec<Trajectory>,
    pub merges: Vec<Merge>,
    /// Grid indices whose solve failed, with the reason.
    pub failures: Vec<(usize, String)>,
    /// Non-fatal warnings, e.g. solver disagreement at the handoff.
    pub flags: Vec<String>,
    /// For closed loops: where each trajectory ends up, as an index into the
    /// starting set.
    pub monodromy: Option<Vec<Option<usize>>>,
}

/// Grid from `start` to `end` (either direction), refined tenfold within 0.05
/// of `-1`, `-2` and `-3`.
pub fn eps_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    for e in [start, end] {
        if !(e > -4.0 && e <= 1.0) {
            return Err(domain(format!("sweep endpoints must lie in (-4, 1], got {e}")));
        }
    }
    if !(step > 0.0) {
        return Err(domain(format!("step must be positive, got {step}")));
    }
    let dir = if end >= start { 1.0 } else { -1.0 };
    let near_integer = |x: f64| [-1.0, -2.0, -3.0].iter().any(|k| (x - k).abs() < 0.05);
    let mut grid = vec![start];
    let mut x = start;
    loop {
        let h = if near_integer(x) { step / 10.0 } else { step };
        let next = x + dir * h;
        if (next - end) * dir >= -1e-12 * (1.0 + end.abs()) {
            if (end - x).abs() > 1e-12 {
                grid.push(end);
            }
            break;
        }
        grid.push(next);
        x = next;
    }
    Ok(grid)
}

fn clean(z: Complex64) -> Complex64 {
    if z.im.abs() <= REAL_TOL * (1.0 + z.norm()) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

fn merge_close(mut v: Vec<Complex64>) -> Vec<Complex64> {
    sort_values(&mut v);
    let mut out: Vec<Complex64> = Vec::with_capacity(v.len());
    for z in v {
        if !out.iter().any(|w| (w - z).norm() <= MERGE_TOL * (1.0 + z.norm())) {
            out.push(z);
        }
    }
    out
}

/// Eigenvalues of the winding-contour operator in `cfg.rect`. For real `eps`
/// only the upper half of the window is scanned and mirrored.
pub fn solve_contour(eps: Complex64, cfg: &SolverConfig) -> Result<Vec<Complex64>> {
    let op = build_operator_on(eps, cfg.n_interior, cfg.eta, cfg.branch)?;
    if eps.im == 0.0 && cfg.rect.im_min < 0.0 && cfg.rect.im_max > 0.0 {
        let upper = Rect {
            im_min: 0.0,
            im_max: cfg.rect.im_max.max(-cfg.rect.im_min),
            ..cfg.rect
        };
        let upper = merge_close(spectrum_scan(&op, &upper, &cfg.scan)?.into_iter().map(|p| clean(p.value)).collect());
        let mut out = Vec::new();
        for z in upper {
            out.push(z);
            if z.im != 0.0 {
                out.push(z.conj());
            }
        }
        out.retain(|z| cfg.rect.contains(*z));
        sort_values(&mut out);
        Ok(out)
    } else {
        Ok(merge_close(spectrum_scan(&op, &cfg.rect, &cfg.scan)?.into_iter().map(|p| p.value).collect()))
    }
}

/// Real eigenvalues by shooting, plus complex ones continued by secant from
/// `seeds`.
pub fn solve_shooting(eps: f64, cfg: &SolverConfig, seeds: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = scan_real_eigenvalues(eps, cfg.e_max)?
        .roots
        .into_iter()
        .map(|e| Complex64::new(e, 0.0))
        .collect();
    let ec = Complex64::new(eps, 0.0);
    for &s in seeds.iter().filter(|s| s.im > 0.0) {
        if let Ok(z) = find_eigenvalue(ec, s) {
            let z = clean(z);
            let new = !out.iter().any(|w| (w - z).norm() <= 1e-6 * (1.0 + z.norm()));
            if z.im != 0.0 && z.re <= cfg.e_max && new {
                out.push(z);
                out.push(z.conj());
            }
        }
    }
    Ok(out)
}

fn sort_values(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn prediction(values: &[Option<Complex64>], i: usize) -> Option<Complex64> {
    let last = values[..i].iter().rposition(Option::is_some)?;
    let e1 = values[last]?;
    if last + 1 == i && last >= 1 {
        if let Some(e0) = values[last - 1] {
            return Some(2.0 * e1 - e0);
        }
    }
    Some(e1)
}

/// Greedy assignment of each grid point's eigenvalues to trajectories.
///
/// Each live trajectory predicts its next value by linear extrapolation; the
/// closest (prediction, eigenvalue) pairs within `10 step (1 + |E|)` are
/// matched first. Leftover eigenvalues start new trajectories.
pub fn match_trajectories(solves: &[Option<Vec<Complex64>>], steps: &[f64]) -> Vec<Trajectory> {
    let n = solves.len();
    let mut traj: Vec<Vec<Option<Complex64>>> = Vec::new();
    for i in 0..n {
        let Some(vals) = &solves[i] else {
            for t in &mut traj {
                t.push(None);
            }
            continue;
        };
        let step = steps.get(i).copied().unwrap_or(0.0);
        let mut cands: Vec<(f64, usize, usize)> = Vec::new();
        for (ti, t) in traj.iter().enumerate() {
            if let Some(p) = prediction(t, i) {
                for (vi, v) in vals.iter().enumerate() {
                    let d = (v - p).norm();
                    if d <= 10.0 * step * (1.0 + v.norm()) {
                        cands.push((d, ti, vi));
                    }
                }
            }
        }
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut t_used = vec![false; traj.len()];
        let mut v_used = vec![false; vals.len()];
        let mut assign: Vec<Option<usize>> = vec![None; traj.len()];
        for (_, ti, vi) in cands {
            if !t_used[ti] && !v_used[vi] {
                t_used[ti] = true;
                v_used[vi] = true;
                assign[ti] = Some(vi);
            }
        }
        for (ti, t) in traj.iter_mut().enumerate() {
            t.push(assign[ti].map(|vi| vals[vi]));
        }
        for (vi, v) in vals.iter().enumerate() {
            if !v_used[vi] {
                let mut t = vec![None; i];
                t.push(Some(*v));
                traj.push(t);
            }
        }
    }
    traj.into_iter()
        .enumerate()
        .map(|(k, values)| Trajectory {
            label: format!("T{k}"),
            values,
        })
        .collect()
}

fn local_steps(grid: &[Complex64]) -> Vec<f64> {
    (0..grid.len())
        .map(|i| if i == 0 { 0.0 } else { (grid[i] - grid[i - 1]).norm() })
        .collect()
}

/// Sweep along the real axis.
pub fn sweep_real(eps_start: f64, eps_end: f64, step: f64, cfg: &SolverConfig) -> Result<SweepResult> {
    let grid = eps_grid(eps_start, eps_end, step)?;
    let contour_idx: Vec<usize> = (0..grid.len()).filter(|&i| grid[i] <= HANDOFF).collect();
    let contour: Vec<(usize, Result<Vec<Complex64>>)> = contour_idx
        .par_iter()
        .map(|&i| (i, solve_contour(Complex64::new(grid[i], 0.0), cfg)))
        .collect();

    let mut solves: Vec<Option<Vec<Complex64>>> = vec![None; grid.len()];
    let mut failures = Vec::new();
    for (i, r) in contour {
        match r {
            Ok(mut v) => {
                sort_values(&mut v);
                solves[i] = Some(v);
            }
            Err(e) => failures.push((i, e.to_string())),
        }
    }

    // shooting points run in grid order so complex values can be continued
    let mut complex_seeds: Vec<Complex64> = Vec::new();
    let mut prev_real: Vec<f64> = Vec::new();
    for i in 0..grid.len() {
        if grid[i] <= HANDOFF {
            if let Some(v) = &solves[i] {
                complex_seeds = v.iter().copied().filter(|z| z.im > 0.0).collect();
                prev_real = v.iter().filter(|z| z.im == 0.0).map(|z| z.re).collect();
            }
            continue;
        }
        match solve_shooting(grid[i], cfg, &complex_seeds) {
            Ok(mut v) => {
                let real: Vec<f64> = v.iter().filter(|z| z.im == 0.0).map(|z| z.re).collect();
                // a real pair that vanished has turned into a complex pair
                if real.len() + 2 <= prev_real.len() {
                    for w in prev_real.windows(2) {
                        let lost = |x: f64| !real.iter().any(|r| (r - x).abs() < 10.0 * step * (1.0 + x.abs()));
                        if lost(w[0]) && lost(w[1]) {
                            let mid = 0.5 * (w[0] + w[1]);
                            let half = 0.5 * (w[1] - w[0]).max(10.0 * step);
                            if let Ok(z) = find_eigenvalue(Complex64::new(grid[i], 0.0), Complex64::new(mid, half)) {
                                let z = clean(z);
                                if z.im != 0.0 {
                                    v.push(Complex64::new(z.re, z.im.abs()));
                                    v.push(Complex64::new(z.re, -z.im.abs()));
                                }
                            }
                        }
                    }
                }
                sort_values(&mut v);
                v.dedup_by(|a, b| (*a - *b).norm() <= 1e-6 * (1.0 + b.norm()));
                complex_seeds = v.iter().copied().filter(|z| z.im > 0.0).collect();
                prev_real = real;
                solves[i] = Some(v);
            }
            Err(e) => failures.push((i, e.to_string())),
        }
    }

    let eps_grid: Vec<Complex64> = grid.iter().map(|&e| Complex64::new(e, 0.0)).collect();
    let flags = handoff_check(&grid, &solves, cfg);
    let trajectories = match_trajectories(&solves, &local_steps(&eps_grid));
    let mut result = SweepResult {
        eps_grid,
        trajectories,
        merges: Vec::new(),
        failures,
        flags,
        monodromy: None,
    };
    result.merges = find_merges(&result, cfg);
    Ok(result)
}

/// Runs the contour solver on up to three shooting points next to the
/// handoff and compares the real eigenvalues.
fn handoff_check(grid: &[f64], solves: &[Option<Vec<Complex64>>], cfg: &SolverConfig) -> Vec<String> {
    if !grid.iter().any(|&g| g <= HANDOFF) {
        return Vec::new();
    }
    let mut band: Vec<usize> = (0..grid.len()).filter(|&i| grid[i] > HANDOFF && grid[i] < 0.0).collect();
    band.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    band.truncate(3);
    let mut flags = Vec::new();
    for i in band {
        let Some(shot) = &solves[i] else { continue };
        let Ok(cont) = solve_contour(Complex64::new(grid[i], 0.0), cfg) else {
            flags.push(format!("eps = {}: contour solve failed in the handoff band", grid[i]));
            continue;
        };
        for z in shot.iter().filter(|z| z.im == 0.0) {
            let near = cont.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            if near > HANDOFF_AGREEMENT && cfg.rect.contains(*z) {
                flags.push(format!(
                    "eps = {}: solvers disagree at E = {:.6} by {:.2e}",
                    grid[i], z.re, near
                ));
            }
        }
    }
    flags
}

fn is_real(z: &Option<Complex64>) -> bool {
    matches!(z, Some(w) if w.im == 0.0)
}

/// Pairs of real trajectories that start or stop together next to each other.
fn merge_candidates(res: &SweepResult) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    let n = res.eps_grid.len();
    for i in 0..n.saturating_sub(1) {
        // real on one side of (i, i+1), missing on the other
        for (here, there) in [(i, i + 1), (i + 1, i)] {
            let mut ending: Vec<(f64, usize)> = res
                .trajectories
                .iter()
                .enumerate()
                .filter(|(_, t)| is_real(&t.values[here]) && t.values[there].is_none())
                .map(|(k, t)| (t.values[here].unwrap().re, k))
                .collect();
            ending.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut reals: Vec<f64> = res
                .trajectories
                .iter()
                .filter(|t| is_real(&t.values[here]))
                .map(|t| t.values[here].unwrap().re)
                .collect();
            reals.sort_by(f64::total_cmp);
            for w in ending.windows(2) {
                // neighbours in the real spectrum at `here`
                let between = reals.iter().filter(|&&r| r > w[0].0 && r < w[1].0).count();
                if between == 0 {
                    out.push((w[0].1, w[1].1, here, there));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn find_merges(res: &SweepResult, cfg: &SolverConfig) -> Vec<Merge> {
    merge_candidates(res)
        .into_iter()
        .filter_map(|(a, b, here, there)| {
            let ea = res.trajectories[a].values[here]?.re;
            let eb = res.trajectories[b].values[here]?.re;
            refine_merge(res.eps_grid[here].re, res.eps_grid[there].re, ea, eb, cfg)
                .ok()
                .map(|(eps, e)| Merge {
                    eps: Complex64::new(eps, 0.0),
                    e: Complex64::new(e, 0.0),
                    pair: (a, b),
                })
        })
        .collect()
}

fn real_roots_near(eps: f64, lo: f64, hi: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
    Ok(scan_real_eigenvalues(eps, cfg.e_max)?
        .roots
        .into_iter()
        .filter(|&r| r >= lo && r <= hi)
        .collect())
}

/// Bisection in `eps` between a grid point where the pair is real and one
/// where it is not.
fn refine_merge(eps_real: f64, eps_gone: f64, ea: f64, eb: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
    if eps_real.max(eps_gone) <= HANDOFF {
        // contour side: no real-root counter; report the grid midpoint
        return Ok((0.5 * (eps_real + eps_gone), 0.5 * (ea + eb)));
    }
    let margin = (eb - ea).abs().max(0.05);
    let (lo_e, hi_e) = (ea.min(eb) - margin, ea.max(eb) + margin);
    let base = real_roots_near(eps_real, lo_e, hi_e, cfg)?.len();
    let (mut real_side, mut gone_side) = (eps_real, eps_gone);
    let mut last_pair = (ea, eb);
    while (real_side - gone_side).abs() > 1e-5 {
        let mid = 0.5 * (real_side + gone_side);
        let roots = real_roots_near(mid, lo_e, hi_e, cfg)?;
        if roots.len() + 2 <= base {
            gone_side = mid;
        } else {
            real_side = mid;
            if roots.len() >= 2 {
                let c = 0.5 * (ea + eb);
                let mut r = roots.clone();
                r.sort_by(|x, y| (x - c).abs().total_cmp(&(y - c).abs()));
                last_pair = (r[0], r[1]);
            }
        }
    }
    Ok((0.5 * (real_side + gone_side), 0.5 * (last_pair.0 + last_pair.1)))
}

/// Exceptional point where two real trajectories of `res` meet.
pub fn detect_merge(res: &SweepResult, a: usize, b: usize, cfg: &SolverConfig) -> Result<Merge> {
    let cand = merge_candidates(res)
        .into_iter()
        .find(|&(x, y, _, _)| (x, y) == (a, b) || (x, y) == (b, a));
    let Some((x, y, here, there)) = cand else {
        return Err(Error::NoMerge(format!(
            "trajectories {a} and {b} never meet on the real axis"
        )));
    };
    let ea = res.trajectories[x].values[here].map_or(0.0, |z| z.re);
    let eb = res.trajectories[y].values[here].map_or(0.0, |z| z.re);
    let (eps, e) = refine_merge(res.eps_grid[here].re, res.eps_grid[there].re, ea, eb, cfg)?;
    Ok(Merge {
        eps: Complex64::new(eps, 0.0),
        e: Complex64::new(e, 0.0),
        pair: (a, b),
    })
}

/// Continuation around `center + radius e^{i phi}`.
///
/// The eigenvalues inside `cfg.rect` at `phi = 0` are followed with one
/// shift-invert solve per trajectory and point. `clockwise` reverses the
/// direction of travel.
pub fn sweep_circle(
    center: Complex64,
    radius: f64,
    n_points: usize,
    clockwise: bool,
    cfg: &SolverConfig,
) -> Result<SweepResult> {
    if center != Complex64::new(-1.0, 0.0) {
        return Err(domain(format!("only circles about eps = -1 are supported, got {center}")));
    }
    if !(radius >= 0.0 && radius <= 0.1) {
        return Err(domain(format!("radius must lie in [0, 0.1], got {radius}")));
    }
    if n_points < 64 {
        return Err(domain(format!("need at least 64 points on the circle, got {n_points}")));
    }
    let dir = if clockwise { -1.0 } else { 1.0 };
    let eps_grid: Vec<Complex64> = (0..=n_points)
        .map(|k| center + Complex64::from_polar(radius, dir * 2.0 * PI * k as f64 / n_points as f64))
        .collect();

    let mut start = solve_contour(eps_grid[0], cfg)?;
    sort_values(&mut start);
    let plan = ShiftPlan {
        wanted: 4,
        ..cfg.scan.plan.clone()
    };
    let mut tracks: Vec<Vec<Option<Complex64>>> = start.iter().map(|&z| vec![Some(z)]).collect();
    let mut failures = Vec::new();
    for (k, &eps) in eps_grid.iter().enumerate().skip(1) {
        if eps == eps_grid[k - 1] {
            // same operator, same eigenvalues
            for t in &mut tracks {
                let last = t[k - 1];
                t.push(last);
            }
            continue;
        }
        let op = match build_operator_on(eps, cfg.n_interior, cfg.eta, cfg.branch) {
            Ok(op) => op,
            Err(e) => {
                failures.push((k, e.to_string()));
                for t in &mut tracks {
                    t.push(None);
                }
                continue;
            }
        };
        let next: Vec<Option<Complex64>> = tracks
            .par_iter()
            .enumerate()
            .map(|(ti, t)| {
                let p = prediction(t, k)?;
                let out = run_shift(&op, p, &plan, plan.seed.wrapping_add(ti as u64)).ok()?;
                out.converged
                    .iter()
                    .map(|q| q.value)
                    .min_by(|a, b| (a - p).norm().total_cmp(&(b - p).norm()))
            })
            .collect();
        for (t, v) in tracks.iter_mut().zip(next) {
            t.push(v);
        }
    }

    let monodromy: Vec<Option<usize>> = tracks
        .iter()
        .map(|t| {
            let end = (*t.last()?)?;
            let (best, d) = start
                .iter()
                .enumerate()
                .map(|(i, s)| (i, (s - end).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))?;
            (d <= 1e-4 * (1.0 + end.norm())).then_some(best)
        })
        .collect();
    let trajectories = tracks
        .into_iter()
        .enumerate()
        .map(|(k, values)| Trajectory {
            label: format!("T{k}"),
            values,
        })
        .collect();
    Ok(SweepResult {
        eps_grid,
        trajectories,
        merges: Vec::new(),
        failures,
        flags: Vec::new(),
        monodromy: Some(monodromy),
    })
}

/// `q[p[i]]` where both are defined.
pub fn compose(p: &[Option<usize>], q: &[Option<usize>]) -> Vec<Option<usize>> {
    p.iter().map(|&i| i.and_then(|j| q.get(j).copied().flatten())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_refines_near_integers() {
        let g = eps_grid(-1.2, -0.8, 0.05).unwrap();
        assert_eq!(g[0], -1.2);
        assert_eq!(*g.last().unwrap(), -0.8);
        let fine = g.windows(2).filter(|w| (w[1] - w[0]) < 0.01).count();
        assert!(fine >= 15, "{g:?}");
        let back = eps_grid(-0.5, -0.7, 0.01).unwrap();
        assert_eq!(back.len(), 21);
        assert!(eps_grid(-4.0, 0.0, 0.1).is_err());
        assert!(eps_grid(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn matching_follows_crossing_lines() {
        // two straight lines crossing between grid points
        let steps = vec![0.1; 6];
        let solves: Vec<Option<Vec<Complex64>>> = (0..6)
            .map(|i| {
                let x = i as f64 * 0.1;
                Some(vec![c(x, 0.5), c(0.5 - x, 0.4)])
            })
            .collect();
        let t = match_trajectories(&solves, &steps);
        assert_eq!(t.len(), 2);
        assert!(t[0].values.iter().all(|v| v.unwrap().im == 0.5));
        assert!(t[1].values.iter().all(|v| v.unwrap().im == 0.4));
    }

    #[test]
    fn failed_solve_leaves_a_gap() {
        let steps = vec![0.1; 3];
        let solves = vec![Some(vec![c(1.0, 0.0)]), None, Some(vec![c(1.05, 0.0)])];
        let t = match_trajectories(&solves, &steps);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].values[1], None);
        assert_eq!(t[0].first_index(), Some(0));
        assert_eq!(t[0].last_index(), Some(2));
    }

    #[test]
    fn merge_candidates_from_vanishing_pair() {
        let grid: Vec<Complex64> = (0..3).map(|i| c(-0.6 + 0.01 * i as f64, 0.0)).collect();
        let res = SweepResult {
            eps_grid: grid,
            trajectories: vec![
                Trajectory { label: "a".into(), values: vec![Some(c(1.0, 0.0)); 3] },
                Trajectory { label: "b".into(), values: vec![None, Some(c(3.3, 0.0)), Some(c(3.2, 0.0))] },
                Trajectory { label: "c".into(), values: vec![None, Some(c(3.5, 0.0)), Some(c(3.7, 0.0))] },
            ],
            merges: vec![],
            failures: vec![],
            flags: vec![],
            monodromy: None,
        };
        assert_eq!(merge_candidates(&res), vec![(1, 2, 1, 0)]);
        assert!(matches!(detect_merge(&res, 0, 1, &SolverConfig::default()), Err(Error::NoMerge(_))));
    }

    #[test]
    fn composition_of_maps() {
        let p = vec![Some(1), Some(2), Some(0), None];
        let q = vec![Some(2), Some(0), Some(1), Some(3)];
        assert_eq!(compose(&p, &q), vec![Some(0), Some(1), Some(2), None]);
    }

    #[test]
    fn circle_preconditions() {
        let cfg = SolverConfig::default();
        assert!(sweep_circle(c(-2.0, 0.0), 0.05, 64, false, &cfg).is_err());
        assert!(sweep_circle(c(-1.0, 0.0), 0.5, 64, false, &cfg).is_err());
        assert!(sweep_circle(c(-1.0, 0.0), 0.05, 10, false, &cfg).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reversed_sweep_gives_the_same_tracks(
                slopes in proptest::collection::vec(-1.0f64..1.0, 2..5),
                offsets in proptest::collection::vec(0.0f64..1.0, 5),
            ) {
                // well-separated straight lines in the upper half plane
                let k = slopes.len();
                let n = 8;
                let solves: Vec<Option<Vec<Complex64>>> = (0..n)
                    .map(|i| {
                        let x = i as f64 * 0.01;
                        Some((0..k).map(|j| c(offsets[j] + slopes[j] * x, 1.0 + 3.0 * j as f64)).collect())
                    })
                    .collect();
                let steps = vec![0.01; n];
                let fwd = match_trajectories(&solves, &steps);
                let mut rev_solves = solves.clone();
                rev_solves.reverse();
                let mut bwd = match_trajectories(&rev_solves, &steps);
                for t in &mut bwd {
                    t.values.reverse();
                }
                prop_assert_eq!(fwd.len(), bwd.len());
                for t in &fwd {
                    prop_assert!(bwd.iter().any(|u| u.values == t.values));
                }
            }
        }
    }
}
