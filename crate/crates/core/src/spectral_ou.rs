//! Diagonal generators `A = -(-Δ)^γ` on `(0, π)^d`, diagonal sequence
//! spaces, and exact-in-law sampling of the stochastic convolution
//! `X(t) = ∫_0^t e^{(t-s)A} dY(s)`.
//!
//! Eigenfunctions are `(2/π)^{d/2} Π sin(n_i ξ_i)` with Laplacian eigenvalue
//! `μ = |n|²` and generator eigenvalue `λ = μ^γ`. Modes are ordered by
//! `|n|²`, ties lexicographically.

use crate::cylnoise::{LevyNoiseSpec, NoisePath};
use crate::error::{config, Result};
use crate::quad::{QuadError, Quadrature};
use crate::rng::{self, tags};
use crate::sine::SineGrid;
use crate::stats::{log_log_fit, LinearFit};
use crate::subordinator::SubordinatorPath;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Eigenvalues of a diagonal negative generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperator {
    dim: usize,
    gamma: Option<f64>,
    indices: Vec<u32>,
    mu: Vec<f64>,
    lambda: Vec<f64>,
}

impl SpectralOperator {
    /// `(-Δ)^γ` with `n_i ∈ 1..=per_axis` on each of `d` axes.
    pub fn fractional_laplacian(d: usize, gamma: f64, per_axis: usize) -> Result<Self> {
        if d == 0 || per_axis == 0 {
            return config("operator needs d >= 1 and at least one mode per axis");
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return config(format!("fractional power must be positive, got {gamma}"));
        }
        let total = per_axis.checked_pow(d as u32).filter(|n| *n <= 1 << 26);
        let Some(total) = total else { return config("too many modes") };
        let mut idx: Vec<Vec<u32>> = (0..total)
            .map(|mut k| {
                (0..d)
                    .map(|_| {
                        let v = (k % per_axis) as u32 + 1;
                        k /= per_axis;
                        v
                    })
                    .rev()
                    .collect()
            })
            .collect();
        idx.sort_by(|a, b| {
            let na: u64 = a.iter().map(|&v| (v as u64).pow(2)).sum();
            let nb: u64 = b.iter().map(|&v| (v as u64).pow(2)).sum();
            na.cmp(&nb).then_with(|| a.cmp(b))
        });
        let mu: Vec<f64> = idx.iter().map(|n| n.iter().map(|&v| (v as f64).powi(2)).sum()).collect();
        let lambda = mu.iter().map(|m| m.powf(gamma)).collect();
        Ok(Self { dim: d, gamma: Some(gamma), indices: idx.concat(), mu, lambda })
    }

    /// User-supplied positive nondecreasing eigenvalues; `μ = λ`.
    pub fn from_eigenvalues(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || lambda.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return config("eigenvalues must be positive and finite");
        }
        if lambda.windows(2).any(|w| w[1] < w[0]) {
            return config("eigenvalues must be nondecreasing");
        }
        let n = lambda.len();
        Ok(Self { dim: 1, gamma: None, indices: (1..=n as u32).collect(), mu: lambda.clone(), lambda })
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Fractional power, `None` for user-supplied spectra.
    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Laplacian eigenvalues `|n|²`.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn multi_index(&self, j: usize) -> &[u32] {
        &self.indices[j * self.dim..(j + 1) * self.dim]
    }

    /// `e^{tA} x`.
    pub fn semigroup(&self, t: f64, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.lambda).map(|(x, l)| (-l * t).exp() * x).collect()
    }
}

/// Role of a sequence space in the diagonal framework.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceRole {
    E,
    U,
    H,
}

/// Weighted `ℓ^q`: `|x| = (Σ (b_j |x_j|)^q)^{1/q}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    role: SpaceRole,
    q: f64,
    weights: Vec<f64>,
    eigen_power: Option<f64>,
}

impl SpaceSpec {
    pub fn ell_q(role: SpaceRole, q: f64, weights: Vec<f64>) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return config(format!("norm exponent must be >= 1, got {q}"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return config("space weights must be positive and finite");
        }
        Ok(Self { role, q, weights, eigen_power: None })
    }

    /// Weights `λ_j^exponent`.
    pub fn eigen_power(role: SpaceRole, q: f64, op: &SpectralOperator, exponent: f64) -> Result<Self> {
        let mut s = Self::ell_q(role, q, op.lambda.iter().map(|l| l.powf(exponent)).collect())?;
        s.eigen_power = Some(exponent);
        Ok(s)
    }

    /// `ℓ^r_{a^{-1}}` with `a_j = λ_j^α`.
    pub fn inverse_power(role: SpaceRole, r: f64, op: &SpectralOperator, alpha: f64) -> Result<Self> {
        Self::eigen_power(role, r, op, -alpha)
    }

    /// Hilbert scale `H^{s,2}`: `|x|² = Σ μ_j^s x_j²`.
    pub fn sobolev(role: SpaceRole, op: &SpectralOperator, order: f64) -> Result<Self> {
        Self::ell_q(role, 2.0, op.mu.iter().map(|m| m.powf(order / 2.0)).collect())
    }

    pub fn role(&self) -> SpaceRole {
        self.role
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    /// Exponent `e` when the weights are `λ_j^e`.
    pub fn power(&self) -> Option<f64> {
        self.eigen_power
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        if self.q == 2.0 {
            x.iter().zip(&self.weights).map(|(x, b)| (b * x).powi(2)).sum::<f64>().sqrt()
        } else {
            x.iter().zip(&self.weights).map(|(x, b)| (b * x).abs().powf(self.q)).sum::<f64>().powf(1.0 / self.q)
        }
    }

    /// Same space restricted to the first `n` modes.
    pub fn truncated(&self, n: usize) -> Self {
        Self { weights: self.weights[..n.min(self.weights.len())].to_vec(), ..self.clone() }
    }
}

/// Value of `sup_n e^{-λ_n t} b_n a_n^{r/q}` with its maximiser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupNorm {
    pub value: f64,
    pub argmax: usize,
    /// `θ = β + (r/q) α` for power-law weights.
    pub theta: Option<f64>,
    /// `c* t^{-θ}` with `c* = e^{-θ} θ^θ`.
    pub envelope: Option<f64>,
}

/// `sup_n e^{-λ_n t} b_n a_n^{r/q}` for `U = ℓ^r_{a^{-1}}`, `E = ℓ^q_b`.
///
/// With power-law weights the term is `e^{-λt} λ^θ`, unimodal in `λ` with
/// peak at `θ/t`, so only the two eigenvalues around the peak are compared.
pub fn semigroup_norm(op: &SpectralOperator, u: &SpaceSpec, e: &SpaceSpec, t: f64) -> SemigroupNorm {
    let n = op.len().min(u.weights.len()).min(e.weights.len());
    let ratio = u.q / e.q;
    if let (Some(pa), Some(pb)) = (u.eigen_power, e.eigen_power) {
        let theta = pb - ratio * pa;
        let lam = &op.lambda[..n];
        let term = |j: usize| (-lam[j] * t + theta * lam[j].ln()).exp();
        let peak = theta / t;
        let i = lam.partition_point(|l| *l < peak);
        let mut best = (f64::NEG_INFINITY, 0);
        for c in [i.saturating_sub(1), i.min(n - 1)] {
            let first = lam.partition_point(|l| *l < lam[c]);
            let v = term(first);
            if v > best.0 || (v == best.0 && first < best.1) {
                best = (v, first);
            }
        }
        let c_star = (-theta).exp() * theta.powf(theta);
        return SemigroupNorm {
            value: best.0,
            argmax: best.1,
            theta: Some(theta),
            envelope: Some(c_star * t.powf(-theta)),
        };
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for j in 0..n {
        let a = 1.0 / u.weights[j];
        let v = (-op.lambda[j] * t).exp() * e.weights[j] * a.powf(ratio);
        if v > best.0 {
            best = (v, j);
        }
    }
    SemigroupNorm { value: best.0, argmax: best.1, theta: None, envelope: None }
}

/// Log-log fit of the semigroup norm over `points` log-spaced times in
/// `[t_lo, t_hi]`; the slope estimates `-θ`.
pub fn fit_semigroup_decay(
    op: &SpectralOperator,
    u: &SpaceSpec,
    e: &SpaceSpec,
    t_lo: f64,
    t_hi: f64,
    points: usize,
) -> LinearFit {
    let ts: Vec<f64> = (0..points)
        .map(|i| (t_lo.ln() + (t_hi / t_lo).ln() * i as f64 / (points - 1) as f64).exp())
        .collect();
    let v: Vec<f64> = ts.iter().map(|&t| semigroup_norm(op, u, e, t).value).collect();
    log_log_fit(&ts, &v)
}

/// Certificate for `Σ_j a_j^{-r} < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadonifyingCertificate {
    pub converges: bool,
    /// `r α g` where `λ_j ~ j^g`; the series converges iff it exceeds 1.
    pub exponent: f64,
    /// `Σ a_j^{-r}` over the retained modes.
    pub partial_sum: f64,
    /// Whether the growth exponent `g` came from the operator definition.
    pub analytic: bool,
}

/// Tolerance on `r α g - 1` when the growth exponent is fitted.
pub const RADONIFYING_FIT_TOL: f64 = 0.02;

/// Decides whether `H = ℓ² ↪ U = ℓ^r_{a^{-1}}`, `a_j = λ_j^α`, is
/// γ-radonifying, i.e. `Σ λ_j^{-rα} < ∞`.
pub fn check_radonifying(u: &SpaceSpec, op: &SpectralOperator) -> Result<RadonifyingCertificate> {
    let Some(pa) = u.eigen_power else {
        return config("radonifying check needs U weights of the form λ_j^{-α}");
    };
    let alpha = -pa;
    let r = u.q;
    let partial_sum = op.lambda.iter().map(|l| l.powf(-r * alpha)).sum();
    let (g, analytic) = match op.gamma {
        Some(gamma) => (2.0 * gamma / op.dim as f64, true),
        None => {
            let n = op.len();
            if n < 16 {
                return config("fitting the eigenvalue growth needs at least 16 modes");
            }
            let x: Vec<f64> = (n / 2..n).map(|j| (j + 1) as f64).collect();
            (log_log_fit(&x, &op.lambda[n / 2..]).slope, false)
        }
    };
    let exponent = r * alpha * g;
    let converges = if analytic {
        exponent > 1.0 && (exponent - 1.0).abs() > 1e-12
    } else {
        exponent > 1.0 + RADONIFYING_FIT_TOL
    };
    Ok(RadonifyingCertificate { converges, exponent, partial_sum, analytic })
}

/// Coefficient vector of a random field at a time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub coefficients: Vec<f64>,
    pub time: f64,
}

impl FieldSample {
    pub fn norm(&self, space: &SpaceSpec) -> f64 {
        space.norm(&self.coefficients)
    }

    /// Values on `x_i = iπ/M`, `i = 0..=M`, for a one-dimensional operator.
    pub fn physical(&self, op: &SpectralOperator, grid_m: usize) -> Result<Vec<f64>> {
        if op.dim() != 1 {
            return config("physical synthesis is implemented for d = 1");
        }
        let n_max = (0..op.len().min(self.coefficients.len())).map(|j| op.multi_index(j)[0] as usize).max().unwrap_or(0);
        let mut a = vec![0.0; n_max];
        for j in 0..op.len().min(self.coefficients.len()) {
            a[op.multi_index(j)[0] as usize - 1] = self.coefficients[j];
        }
        let g = SineGrid::new(grid_m);
        let scale = (2.0 / PI).sqrt();
        Ok(g.synthesize_sine(&a).into_iter().map(|v| scale * v).collect())
    }
}

/// `V_j = ∫_0^t e^{-2λ_j(t-s)} dZ(s)`.
pub fn convolution_variances(op: &SpectralOperator, zpath: &SubordinatorPath, t: f64) -> Vec<f64> {
    let slope = zpath.slope();
    let (_, jumps) = zpath.jumps_between(0.0, t);
    op.lambda
        .iter()
        .map(|&l| {
            let cont = slope * if l * t < 1e-8 { t } else { -(-2.0 * l * t).exp_m1() / (2.0 * l) };
            let mut v = cont;
            for j in jumps.iter().rev() {
                let w = (-2.0 * l * (t - j.time)).exp();
                if w < 1e-300 {
                    break;
                }
                v += w * j.size;
            }
            v
        })
        .collect()
}

/// Draw of `X(t)` given `zpath`: mode `j` is `N(0, V_j / w_j²)`.
pub fn sample_convolution(
    op: &SpectralOperator,
    noise: &LevyNoiseSpec,
    zpath: &SubordinatorPath,
    t: f64,
    seed: u64,
) -> Result<FieldSample> {
    if !(t > 0.0 && t <= zpath.horizon()) {
        return config(format!("time {t} outside (0, {}]", zpath.horizon()));
    }
    if noise.truncation() != op.len() {
        return config("noise truncation and operator size differ");
    }
    let v = convolution_variances(op, zpath, t);
    let mut r = rng::stream(seed, tags::FIELD, 0);
    let coefficients = v
        .iter()
        .zip(noise.wiener.weights())
        .map(|(v, w)| {
            let g: f64 = StandardNormal.sample(&mut r);
            v.sqrt() / w * g
        })
        .collect();
    Ok(FieldSample { coefficients, time: t })
}

/// `E e^{i⟨X(t), φ⟩_H} = exp(-∫_0^t ψ(½|S(σ)φ|²_H) dσ)`.
pub fn charfn_oracle(
    op: &SpectralOperator,
    noise: &LevyNoiseSpec,
    phi: &[f64],
    t: f64,
    quad: &Quadrature,
) -> Result<f64, QuadError> {
    let w = noise.wiener.weights();
    let active: Vec<(f64, f64)> = phi
        .iter()
        .zip(w)
        .zip(&op.lambda)
        .filter(|((p, _), _)| **p != 0.0)
        .map(|((p, w), l)| ((w * p).powi(2), *l))
        .collect();
    if active.is_empty() {
        return Ok(1.0);
    }
    let integrand = |s: f64| {
        let r = 0.5 * active.iter().map(|(c, l)| c * (-2.0 * l * s).exp()).sum::<f64>();
        noise.subordinator.laplace_exponent_with(r, quad).unwrap_or(f64::NAN)
    };
    let mut pts = vec![0.0];
    let mut scales: Vec<f64> = active.iter().map(|(_, l)| 1.0 / (2.0 * l)).filter(|s| *s < t).collect();
    scales.sort_by(f64::total_cmp);
    scales.dedup();
    pts.extend(scales);
    pts.push(t);
    let integral = quad.integrate_breaks(integrand, &pts)?;
    Ok((-integral).exp())
}

/// Target of a regularity query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RegularityTarget {
    /// `X(t) ∈ C_0^δ`.
    Holder(f64),
    /// `X(t) ∈ H^{r,q}`; admissible when `r - d/q` lies below the Hölder
    /// critical exponent (Sobolev embedding route).
    Sobolev { order: f64, q: f64 },
}

/// Critical exponent and verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    /// `δ* = ord / max(p̂, 1) - d/2` with `ord = 2γ` the operator order.
    pub critical: f64,
    /// Effective index: `α = 2β` for stable, 2 with a Gaussian part,
    /// otherwise the infimum of admissible `p` in `Sub(p)`.
    pub p_hat: f64,
    pub admissible: bool,
}

/// Analytic regularity bound for `X(t)` in dimension `d`.
pub fn regularity_exponent_bound(
    op: &SpectralOperator,
    noise: &LevyNoiseSpec,
    target: RegularityTarget,
) -> Result<RegularityVerdict> {
    let Some(gamma) = op.gamma else {
        return config("regularity bound needs a fractional Laplacian operator");
    };
    let sub = &noise.subordinator;
    let p_hat = if sub.drift() > 0.0 { 2.0 } else { (2.0 * sub.intensity().lower_index()).min(2.0) };
    let d = op.dim as f64;
    let critical = 2.0 * gamma / p_hat.max(1.0) - d / 2.0;
    let admissible = match target {
        RegularityTarget::Holder(delta) => delta >= 0.0 && delta < critical,
        RegularityTarget::Sobolev { order, q } => order >= 0.0 && order - d / q < critical && critical > 0.0,
    };
    Ok(RegularityVerdict { critical, p_hat, admissible })
}

/// Trajectory of `Y` and of `X = X₁ + X₂` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OuTrajectory {
    pub times: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    /// Continuous part plus small jumps.
    pub x_small: Vec<Vec<f64>>,
    /// Large jumps only.
    pub x_large: Vec<Vec<f64>>,
}

impl OuTrajectory {
    pub fn x(&self, i: usize) -> Vec<f64> {
        self.x_small[i].iter().zip(&self.x_large[i]).map(|(a, b)| a + b).collect()
    }

    /// Keeps every `stride`-th time point.
    pub fn subsample(&self, stride: usize) -> Self {
        let pick = |v: &Vec<Vec<f64>>| v.iter().step_by(stride).cloned().collect();
        Self {
            times: self.times.iter().step_by(stride).copied().collect(),
            y: pick(&self.y),
            x_small: pick(&self.x_small),
            x_large: pick(&self.x_large),
        }
    }
}

/// Jumps whose mark has `|u|_U >= threshold` go to `X₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSplit {
    pub space: SpaceSpec,
    pub threshold: f64,
}

/// Samples `(Y, X₁, X₂)` on `times` (starting at 0), exact given the path
/// of `Z`: over each step the continuous part contributes the Gaussian pair
/// `(ΔY, ∫ e^{-λ(t-s)} dY)` with
/// `Var ΔY = σ²Δ`, `Var I = σ²(1 - e^{-2λΔ})/(2λ)`, `Cov = σ²(1 - e^{-λΔ})/λ`,
/// and each jump adds its mark `m` to `Y` and `e^{-λ(t-τ)} m` to `X`.
pub fn sample_trajectory(
    op: &SpectralOperator,
    noise: &NoisePath,
    times: &[f64],
    split: Option<&JumpSplit>,
) -> Result<OuTrajectory> {
    let n = noise.truncation();
    if op.len() != n {
        return config("noise truncation and operator size differ");
    }
    if times.first() != Some(&0.0) || times.windows(2).any(|w| w[1] <= w[0]) {
        return config("trajectory times must start at 0 and increase");
    }
    if *times.last().unwrap() > noise.zpath().horizon() * (1.0 + 1e-12) {
        return config("trajectory times exceed the path horizon");
    }
    let slope = noise.zpath().slope();
    let mut y = vec![vec![0.0; n]];
    let mut xs = vec![vec![0.0; n]];
    let mut xl = vec![vec![0.0; n]];
    for (step, w) in times.windows(2).enumerate() {
        let (t0, t1) = (w[0], w[1]);
        let dt = t1 - t0;
        let mut r = rng::stream(noise.seed(), tags::CONTINUOUS, step as u64);
        let mut ny = y[step].clone();
        let mut nxs = xs[step].clone();
        let mut nxl = xl[step].clone();
        for j in 0..n {
            let l = op.lambda[j];
            let decay = (-l * dt).exp();
            nxs[j] *= decay;
            nxl[j] *= decay;
            let z1: f64 = StandardNormal.sample(&mut r);
            let z2: f64 = StandardNormal.sample(&mut r);
            if slope > 0.0 {
                let s2 = slope / noise.weights()[j].powi(2);
                let vy = s2 * dt;
                let vi = s2 * if l * dt < 1e-10 { dt } else { -(-2.0 * l * dt).exp_m1() / (2.0 * l) };
                let cov = s2 * if l * dt < 1e-10 { dt } else { -(-l * dt).exp_m1() / l };
                let dy = vy.sqrt() * z1;
                let b = cov / vy.sqrt();
                let c = (vi - b * b).max(0.0).sqrt();
                ny[j] += dy;
                nxs[j] += b * z1 + c * z2;
            }
        }
        let (offset, jumps) = noise.zpath().jumps_between(t0, t1);
        for (k, jump) in jumps.iter().enumerate() {
            let m = noise.mark(offset + k, n);
            let large = split.is_some_and(|s| s.space.norm(&m) >= s.threshold);
            let target = if large { &mut nxl } else { &mut nxs };
            for j in 0..n {
                ny[j] += m[j];
                target[j] += (-op.lambda[j] * (t1 - jump.time)).exp() * m[j];
            }
        }
        y.push(ny);
        xs.push(nxs);
        xl.push(nxl);
    }
    Ok(OuTrajectory { times: times.to_vec(), y, x_small: xs, x_large: xl })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylnoise::CylindricalWienerSpec;
    use crate::subordinator::{Jump, Resolution, SubordinatorSpec};

    #[test]
    fn mode_ordering() {
        let op = SpectralOperator::fractional_laplacian(2, 1.0, 3).unwrap();
        assert_eq!(op.multi_index(0), &[1, 1]);
        assert_eq!(op.multi_index(1), &[1, 2]);
        assert_eq!(op.multi_index(2), &[2, 1]);
        assert!(op.lambda().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn unit_weights_pick_first_mode() {
        let op = SpectralOperator::fractional_laplacian(1, 1.0, 50).unwrap();
        let u = SpaceSpec::eigen_power(SpaceRole::U, 2.0, &op, 0.0).unwrap();
        let e = SpaceSpec::eigen_power(SpaceRole::E, 2.0, &op, 0.0).unwrap();
        let s = semigroup_norm(&op, &u, &e, 0.3);
        assert_eq!(s.argmax, 0);
        assert!((s.value - (-0.3f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn single_jump_variance() {
        let op = SpectralOperator::fractional_laplacian(1, 1.0, 4).unwrap();
        let z = SubordinatorPath::new(2.0, 0.0, 0.0, vec![Jump { time: 0.5, size: 3.0 }], Resolution::Exact).unwrap();
        let v = convolution_variances(&op, &z, 1.25);
        for (j, l) in op.lambda().iter().enumerate() {
            assert!((v[j] - (-2.0 * l * 0.75).exp() * 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn regularity_examples() {
        let op = SpectralOperator::fractional_laplacian(1, 1.0, 8).unwrap();
        let w = CylindricalWienerSpec::white(8).unwrap();
        let stable = LevyNoiseSpec::new(w.clone(), SubordinatorSpec::stable(0.5).unwrap());
        let v = regularity_exponent_bound(&op, &stable, RegularityTarget::Holder(1.4)).unwrap();
        assert!((v.critical - 1.5).abs() < 1e-15 && v.admissible);
        let gauss = LevyNoiseSpec::new(w, SubordinatorSpec::drift_only(1.0).unwrap());
        let v = regularity_exponent_bound(&op, &gauss, RegularityTarget::Holder(0.5)).unwrap();
        assert!((v.critical - 0.5).abs() < 1e-15 && !v.admissible);
    }

    #[test]
    fn oracle_trivial_phi() {
        let op = SpectralOperator::fractional_laplacian(1, 1.0, 3).unwrap();
        let noise = LevyNoiseSpec::new(CylindricalWienerSpec::white(3).unwrap(), SubordinatorSpec::stable(0.7).unwrap());
        assert_eq!(charfn_oracle(&op, &noise, &[0.0; 3], 1.0, &Quadrature::default()).unwrap(), 1.0);
    }
}
