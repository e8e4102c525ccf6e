//! Empirical diagnostics: spatial Hölder exponent, time integrability of
//! trajectories, post-jump blow-up of `X₂`, and stochastic convolution on
//! the circle.

use crate::cylnoise::{LevyNoiseSpec, NoisePath};
use crate::error::{config, Result};
use crate::spectral_ou::{FieldSample, OuTrajectory, SpaceSpec, SpectralOperator};
use crate::stats::{log_log_fit, LinearFit};
use rand::Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Slope above which a log-log curve counts as growing.
pub const GROWTH_SLOPE: f64 = 0.1;

/// Hölder exponent estimate from maximal dyadic increments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderEstimate {
    pub delta: f64,
    /// 95% interval from the regression standard error.
    pub ci: (f64, f64),
    /// Lags as fractions of the domain.
    pub scales: Vec<f64>,
    pub increments: Vec<f64>,
}

/// `δ̂` for a function sampled at `M + 1` equispaced points: slope of
/// `log max_i |f(x_{i+h}) - f(x_i)|` against `log h` over lags
/// `h = 4, 8, …, M/8` grid steps.
pub fn estimate_holder_values(values: &[f64]) -> Result<HolderEstimate> {
    let m = values.len().saturating_sub(1);
    let mut scales = Vec::new();
    let mut increments = Vec::new();
    let mut h = 4;
    while h <= m / 8 {
        let inc = values.windows(h + 1).map(|w| (w[h] - w[0]).abs()).fold(0.0f64, f64::max);
        if inc > 0.0 && inc.is_finite() {
            scales.push(h as f64 / m as f64);
            increments.push(inc);
        }
        h *= 2;
    }
    if scales.len() < 4 {
        return config(format!("only {} usable scales on a grid of {m} cells (need 4)", scales.len()));
    }
    let fit = log_log_fit(&scales, &increments);
    let half = 1.96 * fit.slope_stderr;
    Ok(HolderEstimate { delta: fit.slope, ci: (fit.slope - half, fit.slope + half), scales, increments })
}

/// `δ̂` of a one-dimensional field synthesised on `M` cells (`M` a power of 2).
pub fn estimate_holder(sample: &FieldSample, op: &SpectralOperator, grid_m: usize) -> Result<HolderEstimate> {
    if !grid_m.is_power_of_two() {
        return config(format!("grid size must be a power of 2, got {grid_m}"));
    }
    estimate_holder_values(&sample.physical(op, grid_m)?)
}

/// Norm applied to `X(t)` inside time integrals.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldNorm {
    /// Weighted sequence norm.
    Space(SpaceSpec),
    /// `L^p(0, length)` of `√(2/length) Σ x_k sin(kπx/length)`, trapezoid
    /// rule on `grid_m` cells.
    PhysicalLp { p: f64, grid_m: usize, length: f64 },
}

impl FieldNorm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            FieldNorm::Space(s) => s.norm(x),
            FieldNorm::PhysicalLp { p, grid_m, length } => {
                let v = crate::sine::SineGrid::new(*grid_m).synthesize_sine(x);
                let scale = (2.0 / length).sqrt();
                let h = length / *grid_m as f64;
                // end values vanish
                let s: f64 = v.iter().map(|y| (scale * y).abs().powf(*p)).sum();
                (s * h).powf(1.0 / p)
            }
        }
    }
}

/// Which part of `X` a time integral uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    Full,
    Small,
    Large,
}

fn component(traj: &OuTrajectory, c: Component, i: usize) -> Vec<f64> {
    match c {
        Component::Full => traj.x(i),
        Component::Small => traj.x_small[i].clone(),
        Component::Large => traj.x_large[i].clone(),
    }
}

/// Right-endpoint Riemann sum of `|X(t)|^p` over the trajectory grid.
pub fn time_integral(traj: &OuTrajectory, which: Component, norm: &FieldNorm, p: f64) -> f64 {
    traj.times
        .windows(2)
        .enumerate()
        .map(|(i, w)| (w[1] - w[0]) * norm.eval(&component(traj, which, i + 1)).powf(p))
        .sum()
}

/// Time integrals of one path on nested grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    /// Number of time steps per level, coarse to fine.
    pub steps: Vec<usize>,
    pub integrals: Vec<f64>,
    /// `|I_fine - I_prev| / |I_fine|` on the last halving.
    pub last_change: f64,
}

/// Evaluates `∫|X|^p` on the fine trajectory and on `levels - 1` coarser
/// grids obtained by keeping every `2^k`-th point.
pub fn refinement_study(
    fine: &OuTrajectory,
    which: Component,
    norm: &FieldNorm,
    p: f64,
    levels: usize,
) -> Result<RefinementReport> {
    let cells = fine.times.len() - 1;
    if levels < 2 || !cells.is_multiple_of(1 << (levels - 1)) {
        return config("refinement needs >= 2 levels dividing the step count");
    }
    let mut steps = Vec::new();
    let mut integrals = Vec::new();
    for k in (0..levels).rev() {
        let sub = fine.subsample(1 << k);
        steps.push(sub.times.len() - 1);
        integrals.push(time_integral(&sub, which, norm, p));
    }
    let a = integrals[levels - 1];
    let b = integrals[levels - 2];
    let last_change = if a == 0.0 && b == 0.0 { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
    Ok(RefinementReport { steps, integrals, last_change })
}

/// Ensemble means of `∫_0^T |X₁|^p` across horizons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TScalingReport {
    pub horizons: Vec<f64>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub slope: f64,
    pub slope_stderr: f64,
    /// `2 - θp`.
    pub predicted: f64,
    /// `C` such that the largest horizon meets `C T^{2-θp}` exactly.
    pub constant: f64,
    /// Mean at every horizon lies below `C T^{2-θp}·(1 + band)`.
    pub bound_holds: bool,
    /// Doubling ratio check `mean(2T)/mean(T) <= 2^{2-θp}(1 + band)`.
    pub doubling_holds: bool,
}

/// Fits the T-exponent of `E∫_0^T |X₁(t)|^p dt` given per-horizon samples.
/// The bound constant is fitted at the largest horizon, where the power
/// law is loosest for `T < 1`.
pub fn t_scaling(horizons: &[f64], samples: &[Vec<f64>], theta: f64, p: f64, band: f64) -> Result<TScalingReport> {
    if horizons.len() < 2 || horizons.len() != samples.len() {
        return config("T-scaling needs >= 2 horizons with samples");
    }
    let est: Vec<_> = samples.iter().map(|s| crate::stats::Estimate::of(s)).collect();
    let means: Vec<f64> = est.iter().map(|e| e.mean).collect();
    let fit: LinearFit = log_log_fit(horizons, &means);
    let predicted = 2.0 - theta * p;
    let i_max = horizons.len() - 1;
    let constant = means[i_max] / horizons[i_max].powf(predicted);
    let bound_holds = horizons.iter().zip(&means).all(|(t, m)| *m <= constant * t.powf(predicted) * (1.0 + band));
    let doubling_holds = horizons
        .windows(2)
        .zip(means.windows(2))
        .filter(|(h, _)| (h[1] / h[0] - 2.0).abs() < 1e-9)
        .all(|(_, m)| m[1] / m[0] <= 2f64.powf(predicted) * (1.0 + band));
    Ok(TScalingReport {
        horizons: horizons.to_vec(),
        means,
        stderrs: est.iter().map(|e| e.stderr).collect(),
        slope: fit.slope,
        slope_stderr: fit.slope_stderr,
        predicted,
        constant,
        bound_holds,
        doubling_holds,
    })
}

/// Per-interval check of `∫_{τ_k}^{τ_{k+1}} |X₂|^p ≤ C ∫_0^{τ_{k+1}-τ_k} |e^{rA}|^p dr · |X₂(τ_k)|_U^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBoundReport {
    pub constant: f64,
    pub ratios: Vec<f64>,
    pub holds: bool,
}

/// Integrates `|X₂|_E^p` exactly in time between consecutive large jumps
/// (`X₂(t) = e^{(t-τ_k)A} X₂(τ_k)` there) and compares each interval with
/// the semigroup bound; `C` is the first interval's ratio.
pub fn x2_interval_bound(
    op: &SpectralOperator,
    large_jumps: &[(f64, Vec<f64>)],
    horizon: f64,
    u: &SpaceSpec,
    e: &FieldNorm,
    p: f64,
    slack: f64,
) -> Result<IntervalBoundReport> {
    if large_jumps.is_empty() {
        return Ok(IntervalBoundReport { constant: 0.0, ratios: vec![], holds: true });
    }
    let quad = crate::quad::Quadrature::with_rel_tol(1e-6);
    let e_space = match e {
        FieldNorm::Space(s) => s.clone(),
        FieldNorm::PhysicalLp { .. } => return config("interval bound needs a sequence norm for E"),
    };
    let opnorm = |r: f64| crate::spectral_ou::semigroup_norm(op, u, &e_space, r).value.powf(p);
    let mut state = vec![0.0; op.len()];
    let mut last = 0.0;
    let mut ratios = Vec::new();
    for (k, (tau, mark)) in large_jumps.iter().enumerate() {
        let decayed = op.semigroup(tau - last, &state);
        state = decayed.iter().zip(mark).map(|(a, b)| a + b).collect();
        last = *tau;
        let end = large_jumps.get(k + 1).map_or(horizon, |j| j.0);
        if end <= *tau {
            continue;
        }
        let s0 = state.clone();
        let lhs = quad.integrate_log(|s| e_space.norm(&op.semigroup(s, &s0)).powf(p), 0.0, end - tau, &[])?;
        let rhs = quad.integrate_log(opnorm, 0.0, end - tau, &[])? * u.norm(&s0).powf(p);
        ratios.push(lhs / rhs);
    }
    let constant = ratios.first().copied().unwrap_or(0.0);
    let holds = ratios.iter().all(|r| *r <= constant * (1.0 + slack) || *r <= 1.0 + slack);
    Ok(IntervalBoundReport { constant, ratios, holds })
}

/// Outcome of a blow-up probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlowupStatus {
    Divergent,
    Bounded,
    /// No large jump in the horizon.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub status: BlowupStatus,
    pub tau1: Option<f64>,
    pub truncations: Vec<usize>,
    /// `sup_{t ∈ (τ₁, τ₁+h]} |X₂(t)|_F` per truncation.
    pub sup_f: Vec<f64>,
    /// Same sup in `U`.
    pub sup_u: Vec<f64>,
    pub slope: f64,
    /// `max sup_u / min sup_u`.
    pub u_ratio: f64,
    /// `Σ (F weight / H weight)²` over the largest truncation.
    pub weight_series: f64,
}

/// Settings for [`blowup_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupSetup {
    pub f: SpaceSpec,
    pub u: SpaceSpec,
    /// `U`-size at which a jump counts as large.
    pub threshold: f64,
    pub truncations: Vec<usize>,
    /// Window after `τ₁`; `None` means `0.1·T`.
    pub window: Option<f64>,
    /// Time points per window.
    pub window_points: usize,
}

/// Simulates `X₂` right after the first large jump `τ₁` and reports how the
/// post-jump sup of `|X₂|_F` grows with the truncation.
pub fn blowup_probe(op: &SpectralOperator, noise: &NoisePath, setup: &BlowupSetup) -> Result<BlowupReport> {
    let n_max = *setup.truncations.iter().max().unwrap_or(&0);
    if setup.truncations.windows(2).any(|w| w[1] <= w[0]) || n_max == 0 {
        return config("truncations must be increasing and nonempty");
    }
    if n_max > op.len() || n_max > noise.truncation() || n_max > setup.f.weights().len() || n_max > setup.u.weights().len()
    {
        return config(format!("truncation {n_max} exceeds the available modes"));
    }
    let z = noise.zpath();
    let horizon = z.horizon();
    let h = setup.window.unwrap_or(0.1 * horizon);
    let weight_series: f64 =
        setup.f.weights()[..n_max].iter().zip(noise.weights()).map(|(f, w)| (f / w).powi(2)).sum();
    let large: Vec<(usize, f64)> = z
        .jumps()
        .iter()
        .enumerate()
        .filter(|(k, _)| setup.u.norm(&noise.mark(*k, n_max)) >= setup.threshold)
        .map(|(k, j)| (k, j.time))
        .collect();
    let Some(&(_, tau1)) = large.first() else {
        return Ok(BlowupReport {
            status: BlowupStatus::Inconclusive,
            tau1: None,
            truncations: setup.truncations.clone(),
            sup_f: vec![],
            sup_u: vec![],
            slope: 0.0,
            u_ratio: 0.0,
            weight_series,
        });
    };
    let end = (tau1 + h).min(horizon);
    let in_window: Vec<(usize, f64)> = large.iter().copied().filter(|(_, t)| *t <= end).collect();
    let marks: Vec<Vec<f64>> = in_window.iter().map(|(k, _)| noise.mark(*k, n_max)).collect();
    // Evaluation times: each large jump plus a geometric grid after τ₁.
    let mut times: Vec<f64> = in_window.iter().map(|(_, t)| *t).collect();
    let pts = setup.window_points.max(2);
    let span = (end - tau1).max(f64::MIN_POSITIVE);
    for i in 0..pts {
        let s = span * (1e-9f64).powf(1.0 - i as f64 / (pts - 1) as f64);
        times.push(tau1 + s);
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    let x2_at = |t: f64, n: usize| -> Vec<f64> {
        let mut x = vec![0.0; n];
        for ((_, tk), m) in in_window.iter().zip(&marks) {
            if *tk > t {
                break;
            }
            for j in 0..n {
                x[j] += (-op.lambda()[j] * (t - tk)).exp() * m[j];
            }
        }
        x
    };
    let mut sup_f = Vec::new();
    let mut sup_u = Vec::new();
    for &n in &setup.truncations {
        let (f, u) = (setup.f.truncated(n), setup.u.truncated(n));
        let mut sf = 0.0f64;
        let mut su = 0.0f64;
        for &t in &times {
            let x = x2_at(t, n);
            sf = sf.max(f.norm(&x));
            su = su.max(u.norm(&x));
        }
        sup_f.push(sf);
        sup_u.push(su);
    }
    let ns: Vec<f64> = setup.truncations.iter().map(|&n| n as f64).collect();
    let slope = if setup.truncations.len() >= 2 { log_log_fit(&ns, &sup_f).slope } else { 0.0 };
    let u_ratio = sup_u.iter().cloned().fold(0.0, f64::max) / sup_u.iter().cloned().fold(f64::INFINITY, f64::min);
    let status = if slope >= GROWTH_SLOPE { BlowupStatus::Divergent } else { BlowupStatus::Bounded };
    Ok(BlowupReport {
        status,
        tau1: Some(tau1),
        truncations: setup.truncations.clone(),
        sup_f,
        sup_u,
        slope,
        u_ratio,
        weight_series,
    })
}

/// Periodic profile and scalar driving increments on a fine grid of `[0, 2π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirclePath {
    /// `f̃` at `2πi/K`, `i = 0..=K`, with first = last.
    profile: Vec<f64>,
    /// `ΔY` over the `K` cells.
    increments: Vec<f64>,
}

impl CirclePath {
    pub fn new(profile: Vec<f64>, increments: Vec<f64>) -> Result<Self> {
        if profile.len() != increments.len() + 1 || increments.is_empty() {
            return config("profile needs one more value than there are cells");
        }
        let (a, b) = (profile[0], profile[profile.len() - 1]);
        if (a - b).abs() > 1e-12 * (1.0 + a.abs()) {
            return config(format!("profile is not periodic: f(0) = {a}, f(2π) = {b}"));
        }
        Ok(Self { profile, increments })
    }

    /// Uses the first coordinate of a noise path over `[0, 2π]`.
    pub fn from_noise(profile: &Profile, noise: &NoisePath, cells: usize) -> Result<Self> {
        if (noise.zpath().horizon() - 2.0 * PI).abs() > 1e-9 {
            return config("circle noise must run over [0, 2π]");
        }
        let inc = noise.cell_increments(cells).into_iter().map(|v| v[0]).collect();
        Self::new(profile.sample(cells), inc)
    }

    pub fn cells(&self) -> usize {
        self.increments.len()
    }

    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }
}

/// Profiles on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Profile {
    Constant { value: f64 },
    /// `Σ_{k=1}^{modes} k^{-(θ+1/2)} cos(kx + φ_k)` with phases from `seed`.
    Fourier { theta: f64, modes: usize, seed: u64 },
}

impl Profile {
    /// Values at `2πi/K`, `i = 0..=K`.
    pub fn sample(&self, cells: usize) -> Vec<f64> {
        match self {
            Profile::Constant { value } => vec![*value; cells + 1],
            Profile::Fourier { theta, modes, seed } => {
                let mut r = crate::rng::stream(*seed, crate::rng::tags::NODES, 7);
                let phases: Vec<f64> = (0..*modes).map(|_| r.random::<f64>() * 2.0 * PI).collect();
                let mut v: Vec<f64> = (0..cells)
                    .map(|i| {
                        let x = 2.0 * PI * i as f64 / cells as f64;
                        phases
                            .iter()
                            .enumerate()
                            .map(|(k, ph)| {
                                let k = (k + 1) as f64;
                                k.powf(-(theta + 0.5)) * (k * x + ph).cos()
                            })
                            .sum()
                    })
                    .collect();
                v.push(v[0]);
                v
            }
        }
    }
}

/// `z ↦ ∫_0^{2π} f̃(z - s) dY(s)` at `z = 2πi/M`, `i = 0..M`, with the
/// fine increments aggregated to `M` cells (`M` must divide `K`) and the
/// profile taken at the coarse nodes.
pub fn circle_convolution(path: &CirclePath, grid_m: usize) -> Result<Vec<f64>> {
    let k = path.cells();
    if grid_m == 0 || !k.is_multiple_of(grid_m) {
        return config(format!("grid {grid_m} must divide the path resolution {k}"));
    }
    let stride = k / grid_m;
    let mut f: Vec<Complex64> = (0..grid_m).map(|i| Complex64::new(path.profile[i * stride], 0.0)).collect();
    let mut dy: Vec<Complex64> =
        path.increments.chunks(stride).map(|c| Complex64::new(c.iter().sum(), 0.0)).collect();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(grid_m);
    let inv = planner.plan_fft_inverse(grid_m);
    fwd.process(&mut f);
    fwd.process(&mut dy);
    let mut prod: Vec<Complex64> = f.iter().zip(&dy).map(|(a, b)| a * b).collect();
    inv.process(&mut prod);
    Ok(prod.iter().map(|z| z.re / grid_m as f64).collect())
}

/// `sup_z |∫ f̃(z-s) dY(s)|` across grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSweep {
    pub grids: Vec<usize>,
    pub sups: Vec<f64>,
    pub slope: f64,
    pub grows: bool,
}

pub fn circle_refinement(path: &CirclePath, grids: &[usize]) -> Result<CircleSweep> {
    let sups = grids
        .iter()
        .map(|&m| circle_convolution(path, m).map(|v| v.iter().fold(0.0f64, |a, b| a.max(b.abs()))))
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = grids.iter().map(|&m| m as f64).collect();
    let slope = if grids.len() >= 2 { log_log_fit(&x, &sups).slope } else { 0.0 };
    Ok(CircleSweep { grids: grids.to_vec(), sups, slope, grows: slope >= GROWTH_SLOPE })
}

/// Scalar noise for circle experiments: `H = U = ℝ`.
pub fn scalar_noise(subordinator: crate::subordinator::SubordinatorSpec) -> Result<LevyNoiseSpec> {
    Ok(LevyNoiseSpec::new(crate::cylnoise::CylindricalWienerSpec::white(1)?, subordinator))
}
