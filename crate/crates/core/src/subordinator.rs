//! Subordinators: increasing Lévy processes given by a drift `b` and an
//! intensity measure `ρ` on `(0, ∞)`, with Laplace exponent
//!
//! ```text
//! ψ(r) = b r + ∫ (1 - e^{-rξ}) ρ(dξ),      E e^{-r Z(t)} = e^{-t ψ(r)}.
//! ```

use crate::error::{config, Error, Result};
use crate::quad::{QuadError, Quadrature};
use crate::rng;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Default small-jump cutoff.
pub const DEFAULT_CUTOFF: f64 = 1e-4;

/// Density `c ξ^s` on `[lo, hi)`; `lo` may be 0 and `hi` may be ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PowerPiece {
    lo: f64,
    hi: f64,
    c: f64,
    s: f64,
}

impl PowerPiece {
    /// `∫ ξ^k c ξ^s dξ` over `[lo, hi) ∩ [a, b)`.
    fn moment(&self, k: f64, a: f64, b: f64) -> f64 {
        let lo = self.lo.max(a);
        let hi = self.hi.min(b);
        if !(hi > lo) {
            return 0.0;
        }
        let m = k + self.s + 1.0;
        if lo == 0.0 {
            return if m > 0.0 && hi.is_finite() { self.c * hi.powf(m) / m } else { f64::INFINITY };
        }
        if hi.is_infinite() {
            return if m < 0.0 { -self.c * lo.powf(m) / m } else { f64::INFINITY };
        }
        let l = (hi / lo).ln();
        if m.abs() * l < 1e-12 {
            self.c * lo.powf(m) * l
        } else {
            self.c * lo.powf(m) * (m * l).exp_m1() / m
        }
    }

    /// Inverse CDF of the piece restricted to `[a, hi)`, `a >= lo > 0`.
    fn quantile(&self, a: f64, mass: f64, u: f64) -> f64 {
        let m = self.s + 1.0;
        let target = u * mass;
        let lr = if m == 0.0 {
            target / self.c
        } else {
            (m * target / (self.c * a.powf(m))).ln_1p() / m
        };
        let x = a * lr.exp();
        x.min(self.hi).max(a)
    }

    fn density(&self, x: f64) -> f64 {
        if x >= self.lo && x < self.hi { self.c * x.powf(self.s) } else { 0.0 }
    }
}

/// The measure `ρ` of jump sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum IntensityMeasure {
    /// No jumps.
    Zero,
    /// One-sided stable: `ρ(dξ) = β / Γ(1-β) ξ^{-1-β} dξ`, `β ∈ (0,1)`.
    Stable { beta: f64 },
    /// Positive density given at increasing knots; log-log linear between
    /// knots and extended by the end slopes as power laws.
    Tabulated { knots: Vec<f64>, values: Vec<f64> },
    /// Finite measure `Σ rates[i] δ_{sizes[i]}`.
    Atoms { sizes: Vec<f64>, rates: Vec<f64> },
}

impl IntensityMeasure {
    fn pieces(&self) -> Vec<PowerPiece> {
        match self {
            IntensityMeasure::Stable { beta } => {
                vec![PowerPiece { lo: 0.0, hi: f64::INFINITY, c: beta / gamma(1.0 - beta), s: -1.0 - beta }]
            }
            IntensityMeasure::Tabulated { knots, values } => {
                let n = knots.len();
                let slope = |i: usize| (values[i + 1] / values[i]).ln() / (knots[i + 1] / knots[i]).ln();
                let mut out = Vec::with_capacity(n + 1);
                let s0 = slope(0);
                out.push(PowerPiece { lo: 0.0, hi: knots[0], c: values[0] / knots[0].powf(s0), s: s0 });
                for i in 0..n - 1 {
                    let s = slope(i);
                    out.push(PowerPiece { lo: knots[i], hi: knots[i + 1], c: values[i] / knots[i].powf(s), s });
                }
                let sl = slope(n - 2);
                out.push(PowerPiece {
                    lo: knots[n - 1],
                    hi: f64::INFINITY,
                    c: values[n - 1] / knots[n - 1].powf(sl),
                    s: sl,
                });
                out
            }
            _ => Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            IntensityMeasure::Zero => Ok(()),
            IntensityMeasure::Stable { beta } => {
                if *beta > 0.0 && *beta < 1.0 {
                    Ok(())
                } else {
                    config(format!("stable index beta must lie in (0,1), got {beta}"))
                }
            }
            IntensityMeasure::Tabulated { knots, values } => {
                if knots.len() < 2 || knots.len() != values.len() {
                    return config("tabulated density needs at least two knots and matching values");
                }
                if knots.iter().any(|x| !(x.is_finite() && *x > 0.0)) || knots.windows(2).any(|w| w[1] <= w[0]) {
                    return config("tabulated knots must be positive, finite and strictly increasing");
                }
                if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                    return config("tabulated density values must be positive and finite");
                }
                if !self.moment(1.0, 0.0, 1.0).is_finite() {
                    return config("tabulated density violates ∫_0^1 ξ ρ(dξ) < ∞ (lower slope must exceed -2)");
                }
                if !self.moment(0.0, 1.0, f64::INFINITY).is_finite() {
                    return config("tabulated density violates ρ([1,∞)) < ∞ (upper slope must be below -1)");
                }
                Ok(())
            }
            IntensityMeasure::Atoms { sizes, rates } => {
                if sizes.len() != rates.len() {
                    return config("atom sizes and rates must have equal length");
                }
                if sizes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return config("atom sizes must be positive and finite");
                }
                if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
                    return config("atom rates must be nonnegative and finite");
                }
                Ok(())
            }
        }
    }

    /// Density at `x` (zero for atomic or empty measures).
    pub fn density(&self, x: f64) -> f64 {
        self.pieces().iter().map(|p| p.density(x)).sum()
    }

    /// `∫_{[a,b)} ξ^k ρ(dξ)`, possibly `+∞`.
    pub fn moment(&self, k: f64, a: f64, b: f64) -> f64 {
        match self {
            IntensityMeasure::Zero => 0.0,
            IntensityMeasure::Atoms { sizes, rates } => sizes
                .iter()
                .zip(rates)
                .filter(|(s, _)| **s >= a && **s < b)
                .map(|(s, r)| r * s.powf(k))
                .sum(),
            _ => self.pieces().iter().map(|p| p.moment(k, a, b)).sum(),
        }
    }

    /// `ρ([ε, ∞))`.
    pub fn tail(&self, eps: f64) -> f64 {
        self.moment(0.0, eps, f64::INFINITY)
    }

    /// `∫_{[lo,hi)} g(ξ) ρ(dξ)`; densities are integrated in `ln ξ` with the
    /// given extra break points.
    pub fn integrate<G: Fn(f64) -> f64>(
        &self,
        g: G,
        lo: f64,
        hi: f64,
        breaks: &[f64],
        quad: &Quadrature,
    ) -> Result<f64, QuadError> {
        match self {
            IntensityMeasure::Zero => Ok(0.0),
            IntensityMeasure::Atoms { sizes, rates } => Ok(sizes
                .iter()
                .zip(rates)
                .filter(|(s, _)| **s >= lo && **s < hi)
                .map(|(s, r)| r * g(*s))
                .sum()),
            _ => {
                let pieces = self.pieces();
                let mut pts: Vec<f64> = breaks.to_vec();
                pts.extend(pieces.iter().map(|p| p.lo).filter(|x| *x > 0.0));
                quad.integrate_log(|x| g(x) * pieces.iter().map(|p| p.density(x)).sum::<f64>(), lo, hi, &pts)
            }
        }
    }

    /// Lower Blumenthal–Getoor type index: `inf { q : ∫_0^1 ξ^q ρ(dξ) < ∞ }`
    /// clipped below at 0.
    pub fn lower_index(&self) -> f64 {
        match self {
            IntensityMeasure::Zero | IntensityMeasure::Atoms { .. } => 0.0,
            IntensityMeasure::Stable { beta } => *beta,
            IntensityMeasure::Tabulated { .. } => (-(self.pieces()[0].s + 1.0)).max(0.0),
        }
    }
}

/// Which family a spec belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SubordinatorKind {
    Stable(f64),
    DriftOnly,
    TabulatedDensity,
    CompoundPoisson,
}

/// Drift and intensity of a subordinator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct SubordinatorSpec {
    drift_b: f64,
    intensity: IntensityMeasure,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    #[serde(default)]
    drift: f64,
    intensity: IntensityMeasure,
}

impl TryFrom<RawSpec> for SubordinatorSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        SubordinatorSpec::new(r.drift, r.intensity)
    }
}

impl From<SubordinatorSpec> for RawSpec {
    fn from(s: SubordinatorSpec) -> Self {
        RawSpec { drift: s.drift_b, intensity: s.intensity }
    }
}

/// Result of a `Sub(p)` membership query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubPMembership {
    pub member: bool,
    /// `∫_0^1 ξ^{p/2} ρ(dξ)`, `+∞` when divergent.
    pub certificate: f64,
}

/// How a path is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    /// Exact stable increments on `cells` equal cells; each increment is
    /// recorded as a jump at the right end of its cell.
    Exact { cells: usize },
    /// Jumps of size `>= epsilon` as a marked Poisson process, smaller jumps
    /// replaced by their mean drift.
    Cutoff { epsilon: f64 },
}

impl Default for Scheme {
    fn default() -> Self {
        Scheme::Cutoff { epsilon: DEFAULT_CUTOFF }
    }
}

impl SubordinatorSpec {
    pub fn new(drift_b: f64, intensity: IntensityMeasure) -> Result<Self> {
        if !(drift_b.is_finite() && drift_b >= 0.0) {
            return config(format!("drift must be finite and nonnegative, got {drift_b}"));
        }
        intensity.validate()?;
        Ok(Self { drift_b, intensity })
    }

    pub fn stable(beta: f64) -> Result<Self> {
        Self::new(0.0, IntensityMeasure::Stable { beta })
    }

    pub fn drift_only(b: f64) -> Result<Self> {
        Self::new(b, IntensityMeasure::Zero)
    }

    pub fn tabulated(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(0.0, IntensityMeasure::Tabulated { knots, values })
    }

    pub fn compound_poisson(sizes: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        Self::new(0.0, IntensityMeasure::Atoms { sizes, rates })
    }

    /// Same intensity with drift `b`.
    pub fn with_drift(mut self, b: f64) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return config(format!("drift must be finite and nonnegative, got {b}"));
        }
        self.drift_b = b;
        Ok(self)
    }

    pub fn drift(&self) -> f64 {
        self.drift_b
    }

    pub fn intensity(&self) -> &IntensityMeasure {
        &self.intensity
    }

    pub fn kind(&self) -> SubordinatorKind {
        match &self.intensity {
            IntensityMeasure::Zero => SubordinatorKind::DriftOnly,
            IntensityMeasure::Stable { beta } => SubordinatorKind::Stable(*beta),
            IntensityMeasure::Tabulated { .. } => SubordinatorKind::TabulatedDensity,
            IntensityMeasure::Atoms { .. } => SubordinatorKind::CompoundPoisson,
        }
    }

    /// `ψ(r)` with the default tolerance.
    pub fn laplace_exponent(&self, r: f64) -> Result<f64, QuadError> {
        self.laplace_exponent_with(r, &Quadrature::default())
    }

    pub fn laplace_exponent_with(&self, r: f64, quad: &Quadrature) -> Result<f64, QuadError> {
        assert!(r >= 0.0, "Laplace exponent needs r >= 0");
        if r == 0.0 {
            return Ok(0.0);
        }
        let jump = match &self.intensity {
            IntensityMeasure::Zero => 0.0,
            IntensityMeasure::Stable { beta } => r.powf(*beta),
            IntensityMeasure::Atoms { sizes, rates } => {
                sizes.iter().zip(rates).map(|(s, q)| -q * (-r * s).exp_m1()).sum()
            }
            IntensityMeasure::Tabulated { .. } => {
                self.intensity.integrate(|x| -(-r * x).exp_m1(), 0.0, f64::INFINITY, &[1.0 / r], quad)?
            }
        };
        Ok(self.drift_b * r + jump)
    }

    /// Membership in `Sub(p)`: `∫_0^1 ξ^{p/2} ρ(dξ) < ∞`.
    pub fn sub_p_membership(&self, p: f64) -> Result<SubPMembership> {
        if !(p > 0.0 && p <= 2.0) {
            return config(format!("Sub(p) needs p in (0,2], got {p}"));
        }
        let certificate = match &self.intensity {
            IntensityMeasure::Stable { beta } if p / 2.0 <= *beta => f64::INFINITY,
            m => m.moment(p / 2.0, 0.0, 1.0),
        };
        Ok(SubPMembership { member: certificate.is_finite(), certificate })
    }

    /// Finite variation of the scalar process `W(Z(t))`: no drift and
    /// `∫_0^1 s^{1/2} ρ(ds) < ∞`.
    pub fn finite_variation_diagnostic(&self) -> bool {
        self.drift_b == 0.0 && self.intensity.moment(0.5, 0.0, 1.0).is_finite()
    }

    /// `∫_0^ε ξ ρ(dξ)`, the mean rate of jumps below the cutoff.
    pub fn small_jump_mean(&self, eps: f64) -> f64 {
        self.intensity.moment(1.0, 0.0, eps)
    }

    /// One path on `[0, horizon]`, a pure function of the arguments.
    pub fn simulate_path(&self, horizon: f64, scheme: Scheme, seed: u64) -> Result<SubordinatorPath> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return config(format!("horizon must be positive, got {horizon}"));
        }
        let mut rng = rng::stream(seed, rng::tags::SUBORDINATOR, 0);
        match (&self.intensity, scheme) {
            (IntensityMeasure::Zero, _) => {
                SubordinatorPath::new(horizon, self.drift_b, 0.0, Vec::new(), Resolution::Exact)
            }
            (IntensityMeasure::Atoms { sizes, rates }, _) => {
                let total: f64 = rates.iter().sum();
                let times = poisson_times(&mut rng, total * horizon, horizon);
                let cum: Vec<f64> = rates
                    .iter()
                    .scan(0.0, |a, r| {
                        *a += r;
                        Some(*a)
                    })
                    .collect();
                let jumps = times
                    .into_iter()
                    .map(|t| {
                        let u = rng.random::<f64>() * total;
                        let i = cum.partition_point(|c| *c <= u).min(sizes.len() - 1);
                        Jump { time: t, size: sizes[i] }
                    })
                    .collect();
                SubordinatorPath::new(horizon, self.drift_b, 0.0, jumps, Resolution::Exact)
            }
            (IntensityMeasure::Stable { beta }, Scheme::Exact { cells }) => {
                if cells == 0 {
                    return config("exact scheme needs at least one cell");
                }
                let dt = horizon / cells as f64;
                let scale = dt.powf(1.0 / beta);
                let jumps = (1..=cells)
                    .map(|k| {
                        let s = stable_unit(*beta, &mut rng);
                        Jump { time: if k == cells { horizon } else { k as f64 * dt }, size: scale * s }
                    })
                    .filter(|j| j.size > 0.0)
                    .collect();
                SubordinatorPath::new(horizon, self.drift_b, 0.0, jumps, Resolution::Grid { cells })
            }
            (IntensityMeasure::Tabulated { .. }, Scheme::Exact { .. }) => {
                config("exact sampling is only available for stable, drift-only and compound Poisson subordinators")
            }
            (_, Scheme::Cutoff { epsilon }) => {
                if !(epsilon > 0.0 && epsilon <= 1.0) {
                    return config(format!("cutoff must lie in (0,1], got {epsilon}"));
                }
                let sampler = JumpSampler::new(&self.intensity, epsilon)?;
                let times = poisson_times(&mut rng, sampler.rate * horizon, horizon);
                let jumps = times
                    .into_iter()
                    .map(|t| Jump { time: t, size: sampler.draw(&mut rng) })
                    .collect();
                SubordinatorPath::new(
                    horizon,
                    self.drift_b,
                    self.small_jump_mean(epsilon),
                    jumps,
                    Resolution::Cutoff { epsilon },
                )
            }
        }
    }
}

/// Uniform in the open interval `(0, 1)`.
pub(crate) fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.random::<u64>() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// One draw with `E e^{-rS} = e^{-r^β}`.
pub fn stable_unit<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    let u = PI * open01(rng);
    let w: f64 = Exp1.sample(rng);
    let a = (beta * u).sin() / u.sin().powf(1.0 / beta);
    let b = (((1.0 - beta) * u).sin() / w).powf((1.0 - beta) / beta);
    a * b
}

fn poisson_times<R: Rng + ?Sized>(rng: &mut R, mean: f64, horizon: f64) -> Vec<f64> {
    if !(mean > 0.0) {
        return Vec::new();
    }
    let n = Poisson::new(mean).map(|p| p.sample(rng) as usize).unwrap_or(0);
    let mut t: Vec<f64> = (0..n).map(|_| horizon * (1.0 - rng.random::<f64>())).collect();
    t.sort_by(f64::total_cmp);
    t
}

struct JumpSampler {
    rate: f64,
    pieces: Vec<(PowerPiece, f64, f64)>,
}

impl JumpSampler {
    fn new(m: &IntensityMeasure, eps: f64) -> Result<Self> {
        let mut pieces = Vec::new();
        let mut rate = 0.0;
        for p in m.pieces() {
            if p.hi <= eps {
                continue;
            }
            let a = p.lo.max(eps);
            let mass = p.moment(0.0, eps, f64::INFINITY);
            if !mass.is_finite() {
                return config("intensity has infinite mass above the cutoff");
            }
            rate += mass;
            pieces.push((p, a, mass));
        }
        Ok(Self { rate, pieces })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut u = rng.random::<f64>() * self.rate;
        for (p, a, mass) in &self.pieces {
            if u < *mass {
                return p.quantile(*a, *mass, u / mass);
            }
            u -= mass;
        }
        let (p, a, mass) = self.pieces.last().expect("nonempty sampler");
        p.quantile(*a, *mass, 0.5)
    }
}

/// A jump of `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub time: f64,
    pub size: f64,
}

/// How the jump list of a path was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Resolution {
    /// All jumps present (drift-only or compound Poisson).
    Exact,
    /// Increments aggregated to the right ends of `cells` grid cells.
    Grid { cells: usize },
    /// Jumps below `epsilon` folded into the slope.
    Cutoff { epsilon: f64 },
}

/// One realisation of `Z` on `[0, T]`:
/// `Z(t) = (drift + compensation) t + Σ_{τ_k <= t} ΔZ_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinatorPath {
    horizon: f64,
    drift_slope: f64,
    small_jump_compensation: f64,
    jumps: Vec<Jump>,
    resolution: Resolution,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl SubordinatorPath {
    /// Builds a path; jumps at equal times are merged and must lie in `(0, T]`.
    pub fn new(
        horizon: f64,
        drift_slope: f64,
        small_jump_compensation: f64,
        mut jumps: Vec<Jump>,
        resolution: Resolution,
    ) -> Result<Self> {
        if !(horizon > 0.0 && drift_slope >= 0.0 && small_jump_compensation >= 0.0) {
            return config("path needs positive horizon and nonnegative slopes");
        }
        jumps.sort_by(|a, b| a.time.total_cmp(&b.time));
        let mut merged: Vec<Jump> = Vec::with_capacity(jumps.len());
        for j in jumps {
            if !(j.time > 0.0 && j.time <= horizon && j.size > 0.0 && j.size.is_finite()) {
                return config(format!("jump ({}, {}) outside (0, T] or nonpositive", j.time, j.size));
            }
            match merged.last_mut() {
                Some(last) if last.time == j.time => last.size += j.size,
                _ => merged.push(j),
            }
        }
        let cumulative = merged
            .iter()
            .scan(0.0, |a, j| {
                *a += j.size;
                Some(*a)
            })
            .collect();
        Ok(Self { horizon, drift_slope, small_jump_compensation, jumps: merged, resolution, cumulative })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
    pub fn drift_slope(&self) -> f64 {
        self.drift_slope
    }
    pub fn small_jump_compensation(&self) -> f64 {
        self.small_jump_compensation
    }
    /// Total continuous slope.
    pub fn slope(&self) -> f64 {
        self.drift_slope + self.small_jump_compensation
    }
    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }
    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    fn cum(&self, i: usize) -> f64 {
        if self.cumulative.len() == self.jumps.len() {
            if i == 0 { 0.0 } else { self.cumulative[i - 1] }
        } else {
            self.jumps[..i].iter().map(|j| j.size).sum()
        }
    }

    /// Number of jumps with `τ <= t`.
    pub fn count_until(&self, t: f64) -> usize {
        self.jumps.partition_point(|j| j.time <= t)
    }

    /// `Z(t)`.
    pub fn value(&self, t: f64) -> f64 {
        self.slope() * t + self.cum(self.count_until(t))
    }

    /// `Z(t) - Z(s)`.
    pub fn increment(&self, s: f64, t: f64) -> f64 {
        self.slope() * (t - s) + self.cum(self.count_until(t)) - self.cum(self.count_until(s))
    }

    /// Jumps with `s < τ <= t`, with their global indices starting at the
    /// returned offset.
    pub fn jumps_between(&self, s: f64, t: f64) -> (usize, &[Jump]) {
        let a = self.count_until(s);
        let b = self.count_until(t).max(a);
        (a, &self.jumps[a..b])
    }
}
