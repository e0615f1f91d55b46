use num_complex::Complex64;

use super::sampled::{Cutoff, SampledFunction};
use super::FbiError;

/// Gaussian factors below `e^{-WINDOW_EXPONENT}` are dropped from the sum.
pub const WINDOW_EXPONENT: f64 = 40.0;

/// One transform value with its discretization diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FbiValue {
    pub value: Complex64,
    /// The same sum on the grid of even indices (spacing `2h`).
    pub coarse: Complex64,
    /// `4 ε Σ|term|`, the accumulated rounding scale.
    pub roundoff: f64,
}

impl FbiValue {
    /// Error estimate: the coarse/fine gap plus the rounding scale.
    pub fn noise(&self) -> f64 {
        (self.value - self.coarse).norm() + self.roundoff
    }
}

struct AxisWeights {
    lo: usize,
    /// Fine-grid weight including the trapezoid end factor.
    w: Vec<Complex64>,
    /// End factor for the coarse grid, zero on odd indices.
    coarse: Vec<f64>,
    /// Squared distance to the cutoff center along this axis.
    d2: Vec<f64>,
}

/// Checks the probe and cutoff against the grid.
pub fn validate(u: &SampledFunction, eta: &Cutoff, probe: &[f64], k: f64) -> Result<(), FbiError> {
    let dim = u.dim();
    if !(k > 0.0) || !k.is_finite() {
        return Err(FbiError::NonPositiveK(k));
    }
    if probe.len() != dim || eta.center.len() != dim {
        return Err(FbiError::Dimension { expected: dim, got: probe.len().max(eta.center.len()) });
    }
    if !u.axes().iter().zip(probe).all(|(a, &x)| a.contains(x)) {
        return Err(FbiError::ProbeOutsideGrid);
    }
    if eta.value(probe) < 1.0 {
        return Err(FbiError::ProbeOutsideCutoff);
    }
    let s = eta.support_radius();
    if !u.axes().iter().zip(&eta.center).all(|(a, &c)| a.min <= c - s && c + s <= a.max) {
        return Err(FbiError::CutoffExceedsGrid);
    }
    Ok(())
}

/// `∫ e^{i ω·(y - y') - K|ω||y - y'|²} η(y') u(y') dy'` by the trapezoid rule.
pub fn fbi_transform(u: &SampledFunction, eta: &Cutoff, probe: &[f64], freq: &[f64], k: f64) -> Result<Complex64, FbiError> {
    Ok(fbi_transform_detailed(u, eta, probe, freq, k)?.value)
}

pub fn fbi_transform_detailed(
    u: &SampledFunction,
    eta: &Cutoff,
    probe: &[f64],
    freq: &[f64],
    k: f64,
) -> Result<FbiValue, FbiError> {
    validate(u, eta, probe, k)?;
    if freq.len() != u.dim() {
        return Err(FbiError::Dimension { expected: u.dim(), got: freq.len() });
    }
    let norm = freq.iter().map(|x| x * x).sum::<f64>().sqrt();
    let damp = k * norm;
    let support = eta.support_radius();
    let mut axes = Vec::with_capacity(u.dim());
    for (d, a) in u.axes().iter().enumerate() {
        let h = a.spacing();
        // indices inside the cutoff support and the Gaussian window
        let mut lo_x = eta.center[d] - support;
        let mut hi_x = eta.center[d] + support;
        if damp > 0.0 {
            let reach = (WINDOW_EXPONENT / damp).sqrt();
            lo_x = lo_x.max(probe[d] - reach);
            hi_x = hi_x.min(probe[d] + reach);
        }
        if lo_x > hi_x {
            return Ok(FbiValue { value: Complex64::new(0.0, 0.0), coarse: Complex64::new(0.0, 0.0), roundoff: 0.0 });
        }
        let lo = (((lo_x - a.min) / h).floor().max(0.0)) as usize;
        let hi = ((((hi_x - a.min) / h).ceil()) as usize).min(a.count - 1);
        let last_even = if (a.count - 1) % 2 == 0 { a.count - 1 } else { a.count - 2 };
        let mut w = Vec::with_capacity(hi - lo + 1);
        let mut coarse = Vec::with_capacity(hi - lo + 1);
        let mut d2 = Vec::with_capacity(hi - lo + 1);
        for i in lo..=hi {
            let y = a.coord(i);
            let dy = probe[d] - y;
            let end = if i == 0 || i == a.count - 1 { 0.5 } else { 1.0 };
            w.push(Complex64::from_polar((-damp * dy * dy).exp() * end * h, freq[d] * dy));
            coarse.push(if i % 2 == 1 || i > last_even {
                0.0
            } else if i == 0 || i == last_even {
                1.0
            } else {
                2.0
            });
            d2.push((y - eta.center[d]).powi(2));
        }
        axes.push(AxisWeights { lo, w, coarse, d2 });
    }
    let limit = 2.0 * eta.r * eta.r;
    let mut idx = vec![0usize; u.dim()];
    let mut coords = vec![0.0; u.dim()];
    let mut acc = Acc::default();
    accumulate(u, eta, &axes, 0, Complex64::new(1.0, 0.0), 1.0, 0.0, limit, &mut idx, &mut coords, &mut acc);
    Ok(FbiValue { value: acc.fine, coarse: acc.coarse, roundoff: 4.0 * f64::EPSILON * acc.abs })
}

#[derive(Default)]
struct Acc {
    fine: Complex64,
    coarse: Complex64,
    abs: f64,
}

#[allow(clippy::too_many_arguments)]
fn accumulate(
    u: &SampledFunction,
    eta: &Cutoff,
    axes: &[AxisWeights],
    d: usize,
    w: Complex64,
    c: f64,
    d2: f64,
    limit: f64,
    idx: &mut [usize],
    coords: &mut [f64],
    acc: &mut Acc,
) {
    let ax = &axes[d];
    let grid = &u.axes()[d];
    for (j, wj) in ax.w.iter().enumerate() {
        let dd = d2 + ax.d2[j];
        if dd >= limit {
            continue;
        }
        idx[d] = ax.lo + j;
        coords[d] = grid.coord(idx[d]);
        let ww = w * wj;
        let cc = c * ax.coarse[j];
        if d + 1 < axes.len() {
            accumulate(u, eta, axes, d + 1, ww, cc, dd, limit, idx, coords, acc);
        } else {
            let term = ww * eta.value_sq(dd) * u.at(idx, coords);
            acc.fine += term;
            acc.coarse += term * cc;
            acc.abs += term.norm();
        }
    }
}
