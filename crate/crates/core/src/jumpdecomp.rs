//! Jump measure of `Y`, the split `Y = Y₁ + Y₂` at the unit ball of `U`,
//! stochastic integrals of diagonal integrands, and Monte Carlo checks of
//! the Poisson moment inequalities.

use crate::cylnoise::{LevyNoiseSpec, NoisePath};
use crate::error::{config, Result};
use crate::rng::{self, tags};
use crate::spectral_ou::SpaceSpec;
use crate::stats::{par_map, Estimate, Moments};
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

/// One jump of `Y` with its mark and `U`-size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedJump {
    pub time: f64,
    pub mark: Vec<f64>,
    pub size: f64,
}

/// Time-ordered jumps on one side of the split.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MarkedJumpList {
    pub jumps: Vec<MarkedJump>,
    pub threshold: f64,
}

impl MarkedJumpList {
    /// `Σ_{τ_k <= t} u_k`.
    pub fn sum_until(&self, t: f64, n: usize) -> Vec<f64> {
        let mut s = vec![0.0; n];
        for j in self.jumps.iter().take_while(|j| j.time <= t) {
            for (a, b) in s.iter_mut().zip(&j.mark) {
                *a += b;
            }
        }
        s
    }
}

/// `Y₁` (continuous part plus small jumps) and `Y₂` (large jumps).
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub small: MarkedJumpList,
    pub large: MarkedJumpList,
}

/// Splits the jumps of `noise` at `|u|_U = threshold`.
pub fn split(noise: &NoisePath, u: &SpaceSpec, threshold: f64) -> Decomposition {
    let n = noise.truncation();
    let mut small = MarkedJumpList { jumps: Vec::new(), threshold };
    let mut large = MarkedJumpList { jumps: Vec::new(), threshold };
    for (k, j) in noise.zpath().jumps().iter().enumerate() {
        let mark = noise.mark(k, n);
        let size = u.norm(&mark);
        let mj = MarkedJump { time: j.time, mark, size };
        if size >= threshold {
            large.jumps.push(mj);
        } else {
            small.jumps.push(mj);
        }
    }
    Decomposition { small, large }
}

impl Decomposition {
    /// `Y₁` and `Y₂` at the right ends of `cells` equal cells, next to `Y`
    /// computed directly from all jumps.
    pub fn on_grid(&self, noise: &NoisePath, cells: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let n = noise.truncation();
        let dt = noise.zpath().horizon() / cells as f64;
        let cont = noise.continuous_increments(cells);
        let mut y1 = Vec::with_capacity(cells);
        let mut y2 = Vec::with_capacity(cells);
        let mut y = Vec::with_capacity(cells);
        let mut c_acc = vec![0.0; n];
        for (c, inc) in cont.iter().enumerate() {
            for (a, b) in c_acc.iter_mut().zip(inc) {
                *a += b;
            }
            let t = if c + 1 == cells { noise.zpath().horizon() } else { (c + 1) as f64 * dt };
            let s = self.small.sum_until(t, n);
            let l = self.large.sum_until(t, n);
            let mut all = c_acc.clone();
            for (k, _) in noise.zpath().jumps().iter().enumerate().take_while(|(_, j)| j.time <= t) {
                for (a, b) in all.iter_mut().zip(noise.mark(k, n)) {
                    *a += b;
                }
            }
            y1.push(c_acc.iter().zip(&s).map(|(a, b)| a + b).collect());
            y2.push(l);
            y.push(all);
        }
        (y, y1, y2)
    }
}

/// `Σ_{τ_k <= t} Ψ(τ_k) ΔY₂(τ_k)` for a diagonal time-dependent `Ψ`.
pub fn integrate_large(psi: impl Fn(f64) -> Vec<f64>, y2: &MarkedJumpList, t: f64) -> Vec<f64> {
    let n = y2.jumps.first().map_or(0, |j| j.mark.len());
    let mut out = vec![0.0; n];
    for j in y2.jumps.iter().take_while(|j| j.time <= t) {
        let d = psi(j.time);
        for i in 0..n {
            out[i] += d[i] * j.mark[i];
        }
    }
    out
}

/// Compensated small-jump integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompensatedIntegral {
    pub value: Vec<f64>,
    /// Euclidean norm of `∫_0^t ∫_{|u|<1} Ψ(s) u ν(du) ds`.
    pub compensator_norm: f64,
    /// Scale of the terms entering the compensator.
    pub compensator_scale: f64,
}

/// Nodes used for the compensator quadrature (antithetic pairs).
const COMPENSATOR_NODES: usize = 2048;
const COMPENSATOR_TIMES: usize = 64;

/// `∫_0^t ∫_{|u|<1} Ψ(s) u π̃(du, ds)`: the raw small-jump sum minus the
/// compensator `∫∫ Ψ(s) u 1{|u|<1} ν(du) ds`. The compensator is evaluated
/// on symmetric Gaussian nodes, on which it cancels term by term.
pub fn integrate_small_compensated(
    psi: impl Fn(f64) -> Vec<f64>,
    y1: &MarkedJumpList,
    noise: &LevyNoiseSpec,
    u: &SpaceSpec,
    t: f64,
) -> CompensatedIntegral {
    let n = noise.truncation();
    let mut value = vec![0.0; n];
    for j in y1.jumps.iter().take_while(|j| j.time <= t) {
        let d = psi(j.time);
        for i in 0..n {
            value[i] += d[i] * j.mark[i];
        }
    }
    // Compensator: ∫_0^t Ψ(s) ds ⊙ ∫ρ(dζ) E[√ζ g 1{√ζ|g|_U < 1}], g over ±nodes.
    let rho = noise.subordinator.intensity();
    let mut r = rng::stream(0x5eed, tags::NODES, 1);
    let mut inner = vec![0.0; n];
    let mut scale = 0.0;
    for _ in 0..COMPENSATOR_NODES / 2 {
        let g: Vec<f64> = noise
            .wiener
            .weights()
            .iter()
            .map(|w| {
                let z: f64 = StandardNormal.sample(&mut r);
                z / w
            })
            .collect();
        let neg: Vec<f64> = g.iter().map(|x| -x).collect();
        for h in [&g, &neg] {
            let rad = u.norm(h);
            let m = rho.moment(0.5, 0.0, (1.0 / (rad * rad)).min(f64::MAX));
            if !m.is_finite() {
                continue;
            }
            for i in 0..n {
                inner[i] += h[i] * m;
            }
            scale += rad * m;
        }
    }
    let dt = t / COMPENSATOR_TIMES as f64;
    let mut psi_int = vec![0.0; n];
    for k in 0..COMPENSATOR_TIMES {
        let d = psi((k as f64 + 0.5) * dt);
        for i in 0..n {
            psi_int[i] += d[i] * dt;
        }
    }
    let comp: Vec<f64> = (0..n).map(|i| psi_int[i] * inner[i] / COMPENSATOR_NODES as f64).collect();
    let compensator_norm = comp.iter().map(|c| c * c).sum::<f64>().sqrt();
    let psi_max = psi_int.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for i in 0..n {
        value[i] -= comp[i];
    }
    CompensatedIntegral {
        value,
        compensator_norm,
        compensator_scale: psi_max * scale / COMPENSATOR_NODES as f64,
    }
}

/// Step integrand `Σ_i f_i 1_{B_i}` with `ν_π(B_i) = measure`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepIntegrand {
    pub pieces: Vec<StepPiece>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepPiece {
    pub measure: f64,
    pub value: Vec<f64>,
}

impl StepIntegrand {
    pub fn new(pieces: Vec<StepPiece>) -> Result<Self> {
        if pieces.iter().any(|p| !(p.measure.is_finite() && p.measure >= 0.0)) {
            return config("step pieces need finite nonnegative measure");
        }
        let n = pieces.first().map_or(0, |p| p.value.len());
        if pieces.iter().any(|p| p.value.len() != n) {
            return config("step values must share one dimension");
        }
        Ok(Self { pieces })
    }

    pub fn dim(&self) -> usize {
        self.pieces.first().map_or(0, |p| p.value.len())
    }

    /// `∫ |f|^p dν_π`.
    pub fn lp_mass(&self, p: f64, q: f64) -> f64 {
        self.pieces.iter().map(|s| lq_norm(&s.value, q).powf(p) * s.measure).sum()
    }
}

pub(crate) fn lq_norm(x: &[f64], q: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q)
}

/// Outcome of a moment-inequality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub inequality: String,
    pub p: f64,
    pub lhs: Estimate,
    pub rhs: f64,
    /// Constant multiplying `∫|f|^p dν` on the right-hand side.
    pub constant: f64,
    pub sigmas: f64,
    pub holds: bool,
}

fn poisson<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    if mean > 0.0 { Poisson::new(mean).map(|d| d.sample(rng)).unwrap_or(0.0) } else { 0.0 }
}

fn mc_moment(step: &StepIntegrand, p: f64, q: f64, mc: usize, seed: u64, compensated: bool) -> Estimate {
    let n = step.dim();
    const CHUNK: usize = 4096;
    let chunks = mc.div_ceil(CHUNK);
    par_map(chunks, |c| {
        let mut r = rng::stream(seed, tags::POISSON, c as u64);
        let mut m = Moments::default();
        let mut s = vec![0.0; n];
        for _ in 0..CHUNK.min(mc - c * CHUNK) {
            s.iter_mut().for_each(|v| *v = 0.0);
            for piece in &step.pieces {
                let mut k = poisson(&mut r, piece.measure);
                if compensated {
                    k -= piece.measure;
                }
                for (a, b) in s.iter_mut().zip(&piece.value) {
                    *a += k * b;
                }
            }
            m.push(lq_norm(&s, q).powf(p));
        }
        m
    })
    .into_iter()
    .fold(Moments::default(), Moments::merge)
    .into()
}

/// `E|∫ f dπ|^p <= ∫ |f|^p dν_π` for `p ∈ (0, 1]`, `E = ℓ^q`.
pub fn verify_moment_inequality_p_le_1(
    step: &StepIntegrand,
    p: f64,
    q: f64,
    mc: usize,
    seed: u64,
) -> Result<MomentReport> {
    if !(p > 0.0 && p <= 1.0) {
        return config(format!("p must lie in (0,1], got {p}"));
    }
    let lhs = mc_moment(step, p, q, mc, seed, false);
    let rhs = step.lp_mass(p, q);
    let sigmas = 4.0;
    Ok(MomentReport {
        inequality: "poisson-p-le-1".into(),
        p,
        lhs,
        rhs,
        constant: 1.0,
        sigmas,
        holds: lhs.mean <= rhs + sigmas * lhs.stderr + 1e-12 * rhs,
    })
}

/// Empirical Rademacher type-`p` constant of `(ℝ^n, ℓ^q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeConstant {
    pub estimate: f64,
    pub families: usize,
}

fn rademacher_ratio(xs: &[Vec<f64>], p: f64, q: f64, rng: &mut impl Rng) -> f64 {
    let m = xs.len();
    let n = xs[0].len();
    let denom: f64 = xs.iter().map(|x| lq_norm(x, q).powf(p)).sum();
    if denom == 0.0 {
        return 0.0;
    }
    let mut s = vec![0.0; n];
    let mut eval = |signs: u64| {
        s.iter_mut().for_each(|v| *v = 0.0);
        for (i, x) in xs.iter().enumerate() {
            let e = if signs >> i & 1 == 1 { 1.0 } else { -1.0 };
            for (a, b) in s.iter_mut().zip(x) {
                *a += e * b;
            }
        }
        lq_norm(&s, q).powf(p)
    };
    let num = if m <= 12 {
        (0..1u64 << m).map(&mut eval).sum::<f64>() / (1u64 << m) as f64
    } else {
        (0..4096).map(|_| eval(rng.random::<u64>())).sum::<f64>() / 4096.0
    };
    num / denom
}

/// Maximises `E|Σ ε_i x_i|^p / Σ |x_i|^p` over `given` and random families
/// (exact sign enumeration up to 12 vectors). This is a lower bound for the
/// true constant.
pub fn estimate_type_constant(given: &[Vec<f64>], p: f64, q: f64, random_families: usize, seed: u64) -> TypeConstant {
    let n = given.first().map_or(1, |v| v.len());
    let mut r = rng::stream(seed, tags::SIGNS, 0);
    let mut best = 1.0f64;
    if !given.is_empty() {
        best = best.max(rademacher_ratio(given, p, q, &mut r));
    }
    let basis: Vec<Vec<f64>> = (0..n.min(12))
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    best = best.max(rademacher_ratio(&basis, p, q, &mut r));
    for f in 0..random_families {
        let m = 2 + f % 7;
        let fam: Vec<Vec<f64>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut r);
                        z
                    })
                    .collect()
            })
            .collect();
        best = best.max(rademacher_ratio(&fam, p, q, &mut r));
    }
    TypeConstant { estimate: best, families: random_families + 2 }
}

/// `E|∫ f dπ̃|^p <= 2^{2-p} K_p ∫ |f|^p dν_π` for `p ∈ (1, 2]`, `E = ℓ^q`
/// with `q >= p`; `K_p` is replaced by `margin · K̂_p`.
pub fn verify_moment_inequality_type_p(
    step: &StepIntegrand,
    p: f64,
    q: f64,
    mc: usize,
    margin: f64,
    seed: u64,
) -> Result<(MomentReport, TypeConstant)> {
    if !(p > 1.0 && p <= 2.0) {
        return config(format!("p must lie in (1,2], got {p}"));
    }
    if q < p {
        return config(format!("ℓ^q has type p only for q >= p (q = {q}, p = {p})"));
    }
    let given: Vec<Vec<f64>> = step.pieces.iter().map(|s| s.value.clone()).collect();
    let k = estimate_type_constant(&given, p, q, 64, seed);
    let lhs = mc_moment(step, p, q, mc, seed, true);
    let constant = 2f64.powf(2.0 - p) * margin * k.estimate;
    let rhs = constant * step.lp_mass(p, q);
    let sigmas = 4.0;
    Ok((
        MomentReport {
            inequality: "compensated-type-p".into(),
            p,
            lhs,
            rhs,
            constant,
            sigmas,
            holds: lhs.mean <= rhs + sigmas * lhs.stderr + 1e-12 * rhs,
        },
        k,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylnoise::CylindricalWienerSpec;
    use crate::spectral_ou::SpaceRole;
    use crate::subordinator::{Jump, Resolution, SubordinatorPath, SubordinatorSpec};

    fn noise(n: usize) -> LevyNoiseSpec {
        LevyNoiseSpec::new(CylindricalWienerSpec::white(n).unwrap(), SubordinatorSpec::stable(0.5).unwrap())
    }

    #[test]
    fn single_and_double_jump_integrals() {
        let lam: [f64; 3] = [1.0, 4.0, 9.0];
        let list = MarkedJumpList {
            jumps: vec![
                MarkedJump { time: 0.2, mark: vec![1.0, -2.0, 0.5], size: 2.3 },
                MarkedJump { time: 0.7, mark: vec![0.3, 0.1, -1.0], size: 1.1 },
            ],
            threshold: 1.0,
        };
        let t: f64 = 1.0;
        let psi = |s: f64| lam.iter().map(|l: &f64| (-l * (t - s)).exp()).collect::<Vec<f64>>();
        let out = integrate_large(psi, &list, 0.5);
        for i in 0..3 {
            assert!((out[i] - (-lam[i] * 0.8f64).exp() * list.jumps[0].mark[i]).abs() < 1e-15);
        }
        let both = integrate_large(psi, &list, 1.0);
        let mut brute = [0.0; 3];
        for j in &list.jumps {
            for i in 0..3 {
                brute[i] += (-lam[i] * (t - j.time)).exp() * j.mark[i];
            }
        }
        assert_eq!(both, brute.to_vec());
        assert_eq!(integrate_large(|_| vec![1.0; 3], &list, 1.0), list.sum_until(1.0, 3));
    }

    #[test]
    fn split_is_pathwise_additive() {
        let s = noise(6);
        let path = s.simulate(1.0, crate::subordinator::Scheme::Cutoff { epsilon: 1e-4 }, 3).unwrap();
        let u = SpaceSpec::ell_q(SpaceRole::U, 2.0, vec![1.0; 6]).unwrap();
        let d = split(&path, &u, 1.0);
        assert!(d.large.jumps.iter().all(|j| j.size >= 1.0));
        let (y, y1, y2) = d.on_grid(&path, 64);
        for c in 0..64 {
            for i in 0..6 {
                assert!((y[c][i] - y1[c][i] - y2[c][i]).abs() < 1e-12 * (1.0 + y[c][i].abs()));
            }
        }
    }

    #[test]
    fn no_large_jump_gives_zero_y2() {
        let s = noise(2);
        let z = SubordinatorPath::new(1.0, 0.1, 0.0, vec![Jump { time: 0.5, size: 1e-6 }], Resolution::Exact).unwrap();
        let p = s.noise_path(z, 1);
        let u = SpaceSpec::ell_q(SpaceRole::U, 2.0, vec![1.0; 2]).unwrap();
        let d = split(&p, &u, 1.0);
        assert!(d.large.jumps.is_empty());
        assert_eq!(d.large.sum_until(1.0, 2), vec![0.0, 0.0]);
    }

    #[test]
    fn compensator_vanishes_and_zero_integrand() {
        let s = noise(4);
        let path = s.simulate(1.0, crate::subordinator::Scheme::Cutoff { epsilon: 1e-3 }, 5).unwrap();
        let u = SpaceSpec::ell_q(SpaceRole::U, 2.0, vec![1.0; 4]).unwrap();
        let d = split(&path, &u, 1.0);
        let c = integrate_small_compensated(|s| vec![(-s).exp(); 4], &d.small, &s, &u, 1.0);
        assert!(c.compensator_norm <= 1e-12 * c.compensator_scale.max(1.0));
        let z = integrate_small_compensated(|_| vec![0.0; 4], &d.small, &s, &u, 1.0);
        assert!(z.value.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn zero_integrand_bounds() {
        let step = StepIntegrand::new(vec![StepPiece { measure: 2.0, value: vec![0.0, 0.0] }]).unwrap();
        let r = verify_moment_inequality_p_le_1(&step, 0.5, 2.0, 1000, 1).unwrap();
        assert_eq!(r.lhs.mean, 0.0);
        assert!(r.holds);
        let (r, _) = verify_moment_inequality_type_p(&step, 1.5, 2.0, 1000, 1.25, 1).unwrap();
        assert_eq!(r.lhs.mean, 0.0);
    }

    #[test]
    fn type_constant_of_hilbert_space_is_one() {
        let k = estimate_type_constant(&[vec![1.0, 2.0], vec![-0.5, 3.0]], 2.0, 2.0, 32, 4);
        assert!((k.estimate - 1.0).abs() < 1e-12);
    }
}
