//! Adaptive Gauss–Kronrod quadrature.
//!
//! Global adaptive bisection with the 10/21-point Gauss–Kronrod pair. The
//! error of a panel is `|K21 - G10|`, which is pessimistic but robust for
//! the algebraic endpoint behaviour of Lévy densities. Semi-infinite and
//! logarithmic ranges are reduced to finite ones by smooth substitutions.

use std::collections::BinaryHeap;

/// Quadrature did not reach the requested tolerance.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("quadrature did not converge: estimate {value:e}, achieved error {achieved:e}, requested {requested:e}")]
pub struct QuadError {
    pub value: f64,
    pub achieved: f64,
    pub requested: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_929_545_215,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[10] * fc;
    let mut g = 0.0;
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, (k - g).abs() * h)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Tolerances and panel budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-14, max_panels: 4000 }
    }
}

impl Quadrature {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }

    /// Integral over `[a, b]`, both finite.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64, QuadError> {
        self.integrate_breaks(f, &[a, b])
    }

    /// Integral over `[p0, p_last]` with forced panel boundaries at every
    /// interior point of `points` (which must be increasing and finite).
    pub fn integrate_breaks<F: Fn(f64) -> f64>(&self, f: F, points: &[f64]) -> Result<f64, QuadError> {
        let mut heap = BinaryHeap::new();
        let (mut total, mut err) = (0.0, 0.0);
        for w in points.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let (v, e) = gk21(&f, w[0], w[1]);
            total += v;
            err += e;
            heap.push(Panel { a: w[0], b: w[1], value: v, error: e });
        }
        loop {
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            if !(total.is_finite() && err.is_finite()) {
                return Err(QuadError { value: total, achieved: err, requested: target });
            }
            if err <= target {
                return Ok(total);
            }
            if heap.len() >= self.max_panels {
                return Err(QuadError { value: total, achieved: err, requested: target });
            }
            let Some(p) = heap.pop() else { return Ok(total) };
            let m = 0.5 * (p.a + p.b);
            if m <= p.a || m >= p.b {
                return Err(QuadError { value: total, achieved: err, requested: target });
            }
            let (v1, e1) = gk21(&f, p.a, m);
            let (v2, e2) = gk21(&f, m, p.b);
            total += v1 + v2 - p.value;
            err += e1 + e2 - p.error;
            heap.push(Panel { a: p.a, b: m, value: v1, error: e1 });
            heap.push(Panel { a: m, b: p.b, value: v2, error: e2 });
        }
    }

    /// Integral over `[a, ∞)` through `x = a + t / (1 - t)`.
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(&self, f: F, a: f64) -> Result<f64, QuadError> {
        let g = |t: f64| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        };
        self.integrate(g, 0.0, 1.0)
    }

    /// Integral of `f` over `(lo, hi)` with `0 <= lo < hi <= ∞`, computed in
    /// the variable `y = ln x`. Power-law behaviour at either end becomes
    /// exponential decay. `breaks` are extra interior points in `x`.
    pub fn integrate_log<F: Fn(f64) -> f64>(
        &self,
        f: F,
        lo: f64,
        hi: f64,
        breaks: &[f64],
    ) -> Result<f64, QuadError> {
        if !(hi > lo) {
            return Ok(0.0);
        }
        let g = |y: f64| {
            let x = y.exp();
            let v = f(x) * x;
            if v.is_finite() { v } else { 0.0 }
        };
        let mut ys: Vec<f64> = breaks
            .iter()
            .filter(|&&x| x > lo && x < hi && x > 0.0 && x.is_finite())
            .map(|x| x.ln())
            .collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        let y_lo = if lo > 0.0 { Some(lo.ln()) } else { None };
        let y_hi = if hi.is_finite() { Some(hi.ln()) } else { None };
        // Finite core interval; infinite ends are mapped separately.
        let core_lo = y_lo.unwrap_or_else(|| ys.first().copied().unwrap_or(0.0).min(y_hi.unwrap_or(0.0)));
        let core_hi = y_hi.unwrap_or_else(|| ys.last().copied().unwrap_or(0.0).max(core_lo));
        let mut pts = vec![core_lo];
        pts.extend(ys.iter().copied().filter(|&y| y > core_lo && y < core_hi));
        pts.push(core_hi);
        let mut total = self.integrate_breaks(g, &pts)?;
        if y_lo.is_none() {
            total += self.integrate_to_infinity(|u| g(core_lo - u), 0.0)?;
        }
        if y_hi.is_none() {
            total += self.integrate_to_infinity(|u| g(core_hi + u), 0.0)?;
        }
        Ok(total)
    }
}
