//! Discrete versus continuous spectrum.
//!
//! A discrete eigenvalue barely moves when the truncation `eta` is halved and
//! its eigenfunction decays exponentially towards both ends of the contour.
//! Eigenfunctions of the continuous spectrum stay large up to the cut-off and
//! are then forced to zero abruptly by the boundary condition.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discretize::{DiscretizedOperator, Grid};
use crate::eigensolve::{run_shift, EigenPair, ShiftPlan, Tag};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum End {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decay {
    Exponential,
    SharpDrop,
    /// Neither pattern fits.
    Indeterminate,
}

/// Tunable thresholds of the decay test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayThresholds {
    /// Minimum `|d ln|psi| / dt|` for an exponential tail.
    pub s_min: f64,
    /// Fraction of the grid forming the largest terminal window.
    pub window: f64,
    /// Number of window sizes tried, halving each time.
    pub scales: usize,
    /// Minimum squared rank correlation between `ln|psi|` and `t`.
    pub r2_min: f64,
    /// Plateau level, relative to the window maximum.
    pub plateau: f64,
    /// Fraction of the window, at the very end, in which the drop must happen.
    pub drop_fraction: f64,
    /// Level the final sample must fall below, relative to the window maximum.
    pub drop_tol: f64,
}

impl Default for DecayThresholds {
    fn default() -> Self {
        Self {
            s_min: 5.0,
            window: 0.1,
            scales: 3,
            r2_min: 0.9,
            plateau: 0.1,
            drop_fraction: 0.03,
            drop_tol: 0.05,
        }
    }
}

/// Samples needed inside the terminal window.
pub const MIN_WINDOW_SAMPLES: usize = 40;
/// Points next to the boundary left out of the exponential fit.
const FIT_SKIP: usize = 3;
/// Samples below this fraction of the window maximum are rounding noise and
/// are left out of the fit.
const NOISE_FLOOR: f64 = 1e-12;
const MIN_FIT_POINTS: usize = 10;

/// Shape of `|psi|` over the terminal window at one end of the grid.
pub fn decay_profile(psi: &[Complex64], grid: &Grid, end: End) -> Result<Decay> {
    decay_profile_with(psi, grid, end, &DecayThresholds::default())
}

pub fn decay_profile_with(psi: &[Complex64], grid: &Grid, end: End, th: &DecayThresholds) -> Result<Decay> {
    Ok(decay_detail(psi, grid, end, th)?.kind)
}

/// Decay shape together with the numbers behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayDetail {
    pub kind: Decay,
    /// Least-squares slope of `ln|psi|` against `t` over the window.
    pub slope: f64,
    /// Squared rank correlation of `ln|psi|` with `t`: 1 for a strictly
    /// monotone tail whatever its curvature.
    pub r2: f64,
    /// `|psi|` at the last grid point relative to the window maximum.
    pub final_level: f64,
}

/// Examines the window and its successive halvings (down to
/// `MIN_WINDOW_SAMPLES` points, at most `th.scales` of them). A sharp drop at
/// any scale wins; otherwise the first exponential scale is reported.
pub fn decay_detail(psi: &[Complex64], grid: &Grid, end: End, th: &DecayThresholds) -> Result<DecayDetail> {
    let n = grid.n_interior;
    if psi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: psi.len(),
        });
    }
    let m = (th.window * n as f64).floor() as usize;
    if m < MIN_WINDOW_SAMPLES {
        return Err(domain(format!(
            "terminal window holds {m} samples, need at least {MIN_WINDOW_SAMPLES}"
        )));
    }
    let mut found: Option<DecayDetail> = None;
    let mut first: Option<DecayDetail> = None;
    let mut size = m;
    for _ in 0..th.scales.max(1) {
        if size < MIN_WINDOW_SAMPLES {
            break;
        }
        let d = window_detail(psi, grid, end, size, th)?;
        first.get_or_insert(d);
        match d.kind {
            Decay::SharpDrop => return Ok(d),
            Decay::Exponential if found.is_none() => found = Some(d),
            _ => {}
        }
        size /= 2;
    }
    Ok(found.or(first).expect("at least one scale"))
}

fn window_detail(psi: &[Complex64], grid: &Grid, end: End, m: usize, th: &DecayThresholds) -> Result<DecayDetail> {
    let n = grid.n_interior;
    // window ordered from the interior towards the boundary
    let idx: Vec<usize> = match end {
        End::Right => (n - m..n).collect(),
        End::Left => (0..m).rev().collect(),
    };
    let mag: Vec<f64> = idx.iter().map(|&j| psi[j].norm()).collect();
    let peak = mag.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Ok(DecayDetail {
            kind: Decay::Indeterminate,
            slope: 0.0,
            r2: 0.0,
            final_level: 0.0,
        });
    }
    let final_level = mag[m - 1] / peak;

    let edge = 1.0 - grid.eta;
    let pts: Vec<(f64, f64)> = idx[..m - FIT_SKIP]
        .iter()
        .zip(&mag)
        .filter(|(_, &v)| v >= NOISE_FLOOR * peak)
        .map(|(&j, &v)| (edge - grid.point(j).abs(), (v / peak).ln()))
        .collect();
    let (slope, r2) = if pts.len() >= MIN_FIT_POINTS {
        (crate::asymptotics::linear_fit(&pts)?.slope, rank_r2(&pts))
    } else {
        (0.0, 0.0)
    };

    let tail = ((th.drop_fraction * m as f64).ceil() as usize).max(1);
    let plateau_ok = mag[..m - tail].iter().all(|&v| v >= th.plateau * peak);
    let kind = if plateau_ok && final_level < th.drop_tol {
        Decay::SharpDrop
    } else if slope.abs() >= th.s_min && r2 >= th.r2_min {
        Decay::Exponential
    } else {
        Decay::Indeterminate
    };
    Ok(DecayDetail {
        kind,
        slope,
        r2,
        final_level,
    })
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let avg = 0.5 * (i + j) as f64;
        for &k in &order[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Squared Spearman correlation of the two coordinates.
fn rank_r2(pts: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let ranked: Vec<(f64, f64)> = ranks(&xs).into_iter().zip(ranks(&ys)).collect();
    let n = ranked.len() as f64;
    let mx = ranked.iter().map(|p| p.0).sum::<f64>() / n;
    let my = ranked.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = ranked.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = ranked.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = ranked.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy * sxy / (sxx * syy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub eig: Complex64,
    /// Nearest eigenvalue of the operator with halved `eta`.
    pub counterpart: Option<Complex64>,
    /// `|E(eta) - E(eta/2)|`, absent when no unambiguous counterpart exists.
    pub drift: Option<f64>,
    pub left_decay: Decay,
    pub right_decay: Decay,
    pub verdict: Tag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyConfig {
    pub decay: DecayThresholds,
    /// Shift-invert run used to find the counterpart on the refined operator.
    pub plan: ShiftPlan,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            decay: DecayThresholds::default(),
            plan: ShiftPlan {
                wanted: 6,
                ..ShiftPlan::default()
            },
        }
    }
}

/// Largest drift still counted as convergence in `eta`.
pub fn tol_disc(e: Complex64) -> f64 {
    1e-3 * (1.0 + e.norm())
}

/// Combines drift and decay shape into a verdict.
pub fn verdict(drift: Option<f64>, eig: Complex64, left: Decay, right: Decay) -> Tag {
    let Some(d) = drift else {
        return Tag::Unresolved;
    };
    if left == Decay::SharpDrop || right == Decay::SharpDrop {
        return Tag::Continuous;
    }
    if d <= tol_disc(eig) && left == Decay::Exponential && right == Decay::Exponential {
        return Tag::Discrete;
    }
    Tag::Unresolved
}

/// Nearest of `candidates` to `target`, or `None` when the runner-up is
/// within twice that distance.
pub fn unambiguous_nearest(target: Complex64, candidates: &[Complex64]) -> Option<Complex64> {
    let mut sorted: Vec<(f64, Complex64)> = candidates.iter().map(|&c| ((c - target).norm(), c)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    match sorted.as_slice() {
        [] => None,
        [only] => Some(only.1),
        [first, second, ..] => {
            if second.0 <= 2.0 * first.0 {
                None
            } else {
                Some(first.1)
            }
        }
    }
}

pub fn classify(op_eta: &DiscretizedOperator, op_eta_half: &DiscretizedOperator, pair: &EigenPair) -> Result<ClassificationReport> {
    classify_with(op_eta, op_eta_half, pair, &ClassifyConfig::default())
}

pub fn classify_with(
    op_eta: &DiscretizedOperator,
    op_eta_half: &DiscretizedOperator,
    pair: &EigenPair,
    cfg: &ClassifyConfig,
) -> Result<ClassificationReport> {
    let left = decay_profile_with(&pair.vector, &op_eta.grid, End::Left, &cfg.decay)?;
    let right = decay_profile_with(&pair.vector, &op_eta.grid, End::Right, &cfg.decay)?;
    let refined = run_shift(op_eta_half, pair.value, &cfg.plan, cfg.plan.seed)?;
    let values: Vec<Complex64> = refined.converged.iter().map(|p| p.value).collect();
    let counterpart = unambiguous_nearest(pair.value, &values);
    let drift = counterpart.map(|c| (c - pair.value).norm());
    Ok(ClassificationReport {
        eig: pair.value,
        counterpart,
        drift,
        left_decay: left,
        right_decay: right,
        verdict: verdict(drift, pair.value, left, right),
    })
}

/// `|| |psi(t)| - |psi(-t)| || / ||psi||`, zero for a mirror-symmetric modulus.
pub fn mirror_asymmetry(psi: &[Complex64]) -> f64 {
    let n = psi.len();
    let den: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if den == 0.0 {
        return 0.0;
    }
    let num: f64 = (0..n)
        .map(|j| (psi[j].norm() - psi[n - 1 - j].norm()).powi(2))
        .sum::<f64>()
        .sqrt();
    num / den
}
