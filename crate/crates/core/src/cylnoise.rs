//! Subordinated cylindrical noise `Y(t) = W(Z(t))` on a sine truncation.
//!
//! Coefficients are taken in the `L²`-orthonormal sine basis. The
//! reproducing space `H` carries weights `w_j`, `|x|²_H = Σ w_j² x_j²`, so
//! given `Z` a mode-`j` increment is centred Gaussian with variance
//! `w_j^{-2} ΔZ` and `⟨Y(t), φ⟩_H = Σ w_j² Y_j φ_j` has variance
//! `Z(t) |φ|²_H`.

use crate::error::{config, Result};
use crate::quad::{QuadError, Quadrature};
use crate::rng::{self, tags};
use crate::spectral_ou::SpaceSpec;
use crate::stats::{log_log_fit, par_map};
use crate::subordinator::{Scheme, SubordinatorPath, SubordinatorSpec};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::sync::Arc;

/// Weights of the reproducing space `H` on the retained modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylindricalWienerSpec {
    weights: Vec<f64>,
}

impl CylindricalWienerSpec {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return config("cylindrical Wiener spec needs at least one mode");
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return config("H weights must be positive and finite");
        }
        Ok(Self { weights })
    }

    /// `H = L²`: unit weights.
    pub fn white(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    /// `H = H^{ϑ,2}`: weights `μ_j^{ϑ/2}` for Laplacian eigenvalues `μ_j`.
    pub fn sobolev(theta: f64, mu: &[f64]) -> Result<Self> {
        Self::new(mu.iter().map(|m| m.powf(theta / 2.0)).collect())
    }

    pub fn truncation(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `|φ|²_H`.
    pub fn h_norm_sq(&self, phi: &[f64]) -> f64 {
        phi.iter().zip(&self.weights).map(|(p, w)| (w * p).powi(2)).sum()
    }

    /// `⟨x, φ⟩_H`.
    pub fn pairing(&self, x: &[f64], phi: &[f64]) -> f64 {
        x.iter().zip(phi).zip(&self.weights).map(|((x, p), w)| w * w * x * p).sum()
    }

    /// Standard deviation of a mode-`j` increment per unit of `ΔZ`.
    pub fn mode_scale(&self, j: usize) -> f64 {
        1.0 / self.weights[j]
    }
}

/// `Y = W ∘ Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyNoiseSpec {
    pub wiener: CylindricalWienerSpec,
    pub subordinator: SubordinatorSpec,
}

/// Increment of `Y` over one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseIncrementSample {
    pub start: f64,
    pub end: f64,
    pub coefficients: Vec<f64>,
    pub generating_dz: f64,
}

/// Radial test functions `h(|u|_U)` with closed-form inner integrals.
#[derive(Clone)]
pub enum RadialTest {
    /// `1{|u| >= radius}`.
    Indicator { radius: f64 },
    /// `|u|^power 1{|u| < radius}`.
    PowerBelow { power: f64, radius: f64 },
    /// `|u|^power 1{|u| >= radius}`.
    PowerAbove { power: f64, radius: f64 },
    /// The constant `value`.
    Constant(f64),
    /// Arbitrary `h`, integrated numerically; `breakpoints` are radii where
    /// `h` is not smooth.
    Custom { h: Arc<dyn Fn(f64) -> f64 + Send + Sync>, breakpoints: Vec<f64> },
}

impl std::fmt::Debug for RadialTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RadialTest::Indicator { radius } => write!(f, "Indicator({radius})"),
            RadialTest::PowerBelow { power, radius } => write!(f, "PowerBelow({power}, {radius})"),
            RadialTest::PowerAbove { power, radius } => write!(f, "PowerAbove({power}, {radius})"),
            RadialTest::Constant(c) => write!(f, "Constant({c})"),
            RadialTest::Custom { breakpoints, .. } => write!(f, "Custom(breaks {breakpoints:?})"),
        }
    }
}

/// Number of radial nodes used for multi-mode intensity functionals.
pub const RADIAL_NODES: usize = 65_536;

/// Outcome of the second-moment comparison
/// `∫_{|u|<=1} |u|² ν(du) <= C ∫_0^1 s ρ(ds) + ρ([1,∞))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondMomentCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `C = E|g|²_U` for `g ~ ζ_1`.
    pub constant: f64,
    pub holds: bool,
}

/// Analytic and empirical finite-variation verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteVariationReport {
    /// `∫_0^1 [∫_{|u|<1} |u| ζ_s(du)] ρ(ds)`, `+∞` when divergent.
    pub criterion: f64,
    pub analytic_finite: bool,
    /// Cells per level of the refinement study.
    pub cells: Vec<usize>,
    /// Median total variation over paths per level.
    pub median_variation: Vec<f64>,
    pub growth_slope: f64,
    pub empirical_finite: bool,
    pub agree: bool,
}

/// Options for [`LevyNoiseSpec::finite_variation_test`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationStudy {
    pub paths: usize,
    pub cutoff: f64,
    pub coarsest_log2: u32,
    pub finest_log2: u32,
    pub slope_threshold: f64,
    pub seed: u64,
}

impl Default for VariationStudy {
    fn default() -> Self {
        Self { paths: 32, cutoff: 1e-7, coarsest_log2: 4, finest_log2: 12, slope_threshold: 0.1, seed: 0 }
    }
}

impl LevyNoiseSpec {
    pub fn new(wiener: CylindricalWienerSpec, subordinator: SubordinatorSpec) -> Self {
        Self { wiener, subordinator }
    }

    pub fn truncation(&self) -> usize {
        self.wiener.truncation()
    }

    /// `E e^{i⟨Y(t), φ⟩_H} = exp(-t ψ(½|φ|²_H))`.
    pub fn char_functional(&self, phi: &[f64], t: f64) -> Result<f64, QuadError> {
        let r = 0.5 * self.wiener.h_norm_sq(phi);
        Ok((-t * self.subordinator.laplace_exponent(r)?).exp())
    }

    /// Increments over the cells of `grid`, exact given `zpath`.
    pub fn sample_increments(
        &self,
        zpath: &SubordinatorPath,
        grid: &[f64],
        seed: u64,
    ) -> Result<Vec<NoiseIncrementSample>> {
        check_grid(grid, zpath.horizon())?;
        Ok(grid
            .windows(2)
            .enumerate()
            .map(|(c, w)| {
                let dz = zpath.increment(w[0], w[1]);
                let mut r = rng::stream(seed, tags::INCREMENT, c as u64);
                let sd = dz.max(0.0).sqrt();
                let coefficients = self
                    .wiener
                    .weights
                    .iter()
                    .map(|w| {
                        let g: f64 = StandardNormal.sample(&mut r);
                        sd * g / w
                    })
                    .collect();
                NoiseIncrementSample { start: w[0], end: w[1], coefficients, generating_dz: dz }
            })
            .collect())
    }

    /// Pairs `zpath` with Gaussian marks drawn from `seed`.
    pub fn noise_path(&self, zpath: SubordinatorPath, seed: u64) -> NoisePath {
        NoisePath { zpath, weights: self.wiener.weights.clone(), seed }
    }

    /// Simulates `Z` and wraps it into a [`NoisePath`].
    pub fn simulate(&self, horizon: f64, scheme: Scheme, seed: u64) -> Result<NoisePath> {
        let z = self.subordinator.simulate_path(horizon, scheme, rng::derive_seed(seed, tags::PATH, 0))?;
        Ok(self.noise_path(z, seed))
    }

    /// Nodes `R_k` representing the law of `|g|_U`, `g ~ ζ_1`. One mode
    /// uses exact half-normal quantiles, several modes a fixed-seed sample.
    pub fn radial_nodes(&self, u: &SpaceSpec) -> Vec<f64> {
        let n = self.truncation();
        if n == 1 {
            let scale = u.weights()[0] / self.wiener.weights[0];
            let normal = Normal::standard();
            return (0..RADIAL_NODES)
                .map(|k| {
                    let p = 0.5 + 0.5 * (k as f64 + 0.5) / RADIAL_NODES as f64;
                    scale * normal.inverse_cdf(p)
                })
                .collect();
        }
        let mut r = rng::stream(0x5eed, tags::NODES, n as u64);
        (0..RADIAL_NODES)
            .map(|_| {
                let g: Vec<f64> = self
                    .wiener
                    .weights
                    .iter()
                    .map(|w| {
                        let z: f64 = StandardNormal.sample(&mut r);
                        z / w
                    })
                    .collect();
                u.norm(&g)
            })
            .collect()
    }

    /// `∫ h(|u|_U) ν(du) = ∫ ρ(ds) E h(√s |g|_U)`.
    pub fn intensity_measure_functional(
        &self,
        test: &RadialTest,
        u: &SpaceSpec,
        quad: &Quadrature,
    ) -> Result<f64, QuadError> {
        let nodes = self.radial_nodes(u);
        self.intensity_on_nodes(test, &nodes, quad)
    }

    fn intensity_on_nodes(&self, test: &RadialTest, nodes: &[f64], quad: &Quadrature) -> Result<f64, QuadError> {
        let rho = self.subordinator.intensity();
        let inf = f64::INFINITY;
        let mut total = 0.0;
        for &r in nodes {
            if !(r > 0.0) {
                continue;
            }
            let v = match test {
                RadialTest::Indicator { radius } => rho.moment(0.0, (radius / r).powi(2), inf),
                RadialTest::PowerBelow { power, radius } => {
                    r.powf(*power) * rho.moment(power / 2.0, 0.0, (radius / r).powi(2))
                }
                RadialTest::PowerAbove { power, radius } => {
                    r.powf(*power) * rho.moment(power / 2.0, (radius / r).powi(2), inf)
                }
                RadialTest::Constant(c) => c * rho.moment(0.0, 0.0, inf),
                RadialTest::Custom { h, breakpoints } => {
                    let b: Vec<f64> = breakpoints.iter().map(|c| (c / r).powi(2)).collect();
                    rho.integrate(|s| h(s.sqrt() * r), 0.0, inf, &b, quad)?
                }
            };
            total += v;
        }
        Ok(total / nodes.len() as f64)
    }

    /// Checks `∫_{|u|<=1} |u|²_U ν(du) <= C ∫_0^1 s ρ(ds) + ρ([1,∞))`
    /// with `C = E|g|²_U`.
    pub fn second_moment_bound(&self, u: &SpaceSpec) -> SecondMomentCheck {
        let nodes = self.radial_nodes(u);
        let quad = Quadrature::default();
        let lhs = self
            .intensity_on_nodes(&RadialTest::PowerBelow { power: 2.0, radius: 1.0 }, &nodes, &quad)
            .unwrap_or(f64::NAN);
        let constant = if u.q() == 2.0 {
            u.weights().iter().zip(&self.wiener.weights).map(|(b, w)| (b / w).powi(2)).sum()
        } else {
            nodes.iter().map(|r| r * r).sum::<f64>() / nodes.len() as f64
        };
        let rho = self.subordinator.intensity();
        let rhs = constant * rho.moment(1.0, 0.0, 1.0) + rho.moment(0.0, 1.0, f64::INFINITY);
        SecondMomentCheck { lhs, rhs, constant, holds: lhs <= rhs * (1.0 + 1e-9) }
    }

    /// Finite variation of `Y` in `U`: the analytic criterion
    /// `∫_0^1 [∫_{|u|<1}|u| ζ_s(du)] ρ(ds) < ∞` (no Gaussian part), cross
    /// checked with the growth of the total variation under grid refinement.
    pub fn finite_variation_test(&self, u: &SpaceSpec, study: VariationStudy) -> Result<FiniteVariationReport> {
        let nodes = self.radial_nodes(u);
        let rho = self.subordinator.intensity();
        let criterion = if self.subordinator.drift() > 0.0 {
            f64::INFINITY
        } else {
            nodes
                .iter()
                .map(|&r| r * rho.moment(0.5, 0.0, (1.0 / (r * r)).min(1.0)))
                .sum::<f64>()
                / nodes.len() as f64
        };
        let analytic_finite = criterion.is_finite();

        let finest = 1usize << study.finest_log2;
        let cells: Vec<usize> = (study.coarsest_log2..=study.finest_log2).map(|k| 1usize << k).collect();
        let per_path: Vec<Vec<f64>> = par_map(study.paths, |i| {
            let seed = rng::derive_seed(study.seed, tags::PATH, i as u64);
            let path = self.simulate(1.0, Scheme::Cutoff { epsilon: study.cutoff }, seed)?;
            let fine = path.cell_increments(finest);
            Ok(cells
                .iter()
                .map(|&m| {
                    let agg = finest / m;
                    fine.chunks(agg)
                        .map(|chunk| {
                            let mut s = vec![0.0; self.truncation()];
                            for inc in chunk {
                                for (a, b) in s.iter_mut().zip(inc) {
                                    *a += b;
                                }
                            }
                            u.norm(&s)
                        })
                        .sum()
                })
                .collect())
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let median_variation: Vec<f64> = (0..cells.len())
            .map(|l| {
                let mut v: Vec<f64> = per_path.iter().map(|p| p[l]).collect();
                v.sort_by(f64::total_cmp);
                v[v.len() / 2]
            })
            .collect();
        let x: Vec<f64> = cells.iter().map(|&m| m as f64).collect();
        let growth_slope = log_log_fit(&x, &median_variation).slope;
        let empirical_finite = growth_slope < study.slope_threshold;
        Ok(FiniteVariationReport {
            criterion,
            analytic_finite,
            cells,
            median_variation,
            growth_slope,
            empirical_finite,
            agree: analytic_finite == empirical_finite,
        })
    }
}

fn check_grid(grid: &[f64], horizon: f64) -> Result<()> {
    if grid.len() < 2 {
        return config("grid needs at least two points");
    }
    if grid[0] < 0.0 || grid[grid.len() - 1] > horizon * (1.0 + 1e-12) || grid.windows(2).any(|w| w[1] < w[0]) {
        return config(format!("grid must be nondecreasing inside [0, {horizon}]"));
    }
    Ok(())
}

/// A path of `Z` together with the seed of its Gaussian marks. The mark of
/// jump `k` is regenerated on demand from `(seed, k)`; its first `n`
/// coordinates do not depend on how many are requested.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath {
    zpath: SubordinatorPath,
    weights: Vec<f64>,
    seed: u64,
}

impl NoisePath {
    pub fn zpath(&self) -> &SubordinatorPath {
        &self.zpath
    }

    pub fn truncation(&self) -> usize {
        self.weights.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `H` weights of the retained modes.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// First `n` coordinates of the jump of `Y` at the `k`-th jump of `Z`.
    pub fn mark(&self, k: usize, n: usize) -> Vec<f64> {
        let dz = self.zpath.jumps()[k].size.sqrt();
        let mut r = rng::stream(self.seed, tags::MARK, k as u64);
        self.weights[..n.min(self.weights.len())]
            .iter()
            .map(|w| {
                let g: f64 = StandardNormal.sample(&mut r);
                dz * g / w
            })
            .collect()
    }

    /// Increments of the continuous part over `cells` equal cells of
    /// `[0, T]`, variance `slope Δt / w_j²`. Coarser grids of the same path
    /// should be aggregated from one fine grid.
    pub fn continuous_increments(&self, cells: usize) -> Vec<Vec<f64>> {
        let dt = self.zpath.horizon() / cells as f64;
        let sd = (self.zpath.slope() * dt).sqrt();
        (0..cells)
            .map(|c| {
                let mut r = rng::stream(self.seed ^ cells as u64, tags::CONTINUOUS, c as u64);
                self.weights
                    .iter()
                    .map(|w| {
                        let g: f64 = StandardNormal.sample(&mut r);
                        sd * g / w
                    })
                    .collect()
            })
            .collect()
    }

    /// Increments of `Y` over `cells` equal cells: continuous part plus the
    /// marks of the jumps in each cell.
    pub fn cell_increments(&self, cells: usize) -> Vec<Vec<f64>> {
        let mut out = self.continuous_increments(cells);
        let n = self.truncation();
        let dt = self.zpath.horizon() / cells as f64;
        for (k, j) in self.zpath.jumps().iter().enumerate() {
            let c = (((j.time / dt).ceil() as usize).max(1) - 1).min(cells - 1);
            for (a, b) in out[c].iter_mut().zip(self.mark(k, n)) {
                *a += b;
            }
        }
        out
    }
}
