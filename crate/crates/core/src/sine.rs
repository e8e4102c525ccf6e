//! Sine and cosine transforms on a uniform grid via a length-`2K` FFT.
//!
//! A grid of `K` cells has nodes `x_i = i / K`, `i = 0..=K`, on the unit
//! interval (rescale for other lengths).

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Planned transforms for one grid size.
#[derive(Clone)]
pub struct SineGrid {
    cells: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SineGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SineGrid").field("cells", &self.cells).finish()
    }
}

impl SineGrid {
    pub fn new(cells: usize) -> Self {
        assert!(cells >= 2, "grid needs at least two cells");
        let fft = FftPlanner::new().plan_fft_forward(2 * cells);
        Self { cells, fft }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// `out[i] = Σ_{k=1}^{n} a[k-1] sin(π k i / K)` for `i = 0..=K`;
    /// coefficients beyond `K - 1` are ignored.
    pub fn synthesize_sine(&self, a: &[f64]) -> Vec<f64> {
        let k = self.cells;
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * k];
        for (j, &c) in a.iter().enumerate().take(k - 1) {
            buf[j + 1] = Complex64::new(c, 0.0);
            buf[2 * k - j - 1] = Complex64::new(-c, 0.0);
        }
        self.fft.process(&mut buf);
        let mut out: Vec<f64> = buf[..=k].iter().map(|z| -0.5 * z.im).collect();
        out[0] = 0.0;
        out[k] = 0.0;
        out
    }

    /// Trapezoid cosine sums `out[j] = Σ''_{i=0}^{K} w[i] cos(π j i / K)`
    /// for `j = 0..=K` (end points carry weight ½).
    pub fn cosine_sums(&self, w: &[f64]) -> Vec<f64> {
        let k = self.cells;
        assert_eq!(w.len(), k + 1);
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * k];
        for i in 0..=k {
            buf[i] = Complex64::new(w[i], 0.0);
        }
        for i in 1..k {
            buf[2 * k - i] = Complex64::new(w[i], 0.0);
        }
        self.fft.process(&mut buf);
        buf[..=k].iter().map(|z| 0.5 * z.re).collect()
    }

    /// Sine sums `out[j] = Σ_{i=1}^{K-1} f[i] sin(π j i / K)` for `j = 1..=n`.
    pub fn sine_sums(&self, f: &[f64], n: usize) -> Vec<f64> {
        let k = self.cells;
        assert_eq!(f.len(), k + 1);
        let full = self.synthesize_sine(&f[1..k]);
        (1..=n).map(|j| if j < k { full[j] } else { 0.0 }).collect()
    }
}
