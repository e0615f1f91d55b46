use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sampled::{Cutoff, SampledFunction};
use super::transform::{fbi_transform_detailed, validate};
use super::FbiError;
use crate::par;

/// Classification thresholds; copied into every report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Fitted order at or above which decay counts as rapid.
    pub rapid_order: f64,
    /// Fitted order at or below which decay counts as slow.
    pub slow_order: f64,
    /// A sample is resolved when `|F| > resolve_ratio · noise`.
    pub resolve_ratio: f64,
    /// Magnitudes at or below this are treated as zero.
    pub floor: f64,
    /// Fewer resolved samples than this means the signal fell into the noise.
    pub min_resolved: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { rapid_order: 6.0, slow_order: 2.0, resolve_ratio: 4.0, floor: 1e-300, min_resolved: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayOptions {
    pub scales: Vec<f64>,
    pub k: f64,
    pub thresholds: Thresholds,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self { scales: default_scales(), k: 1.0, thresholds: Thresholds::default() }
    }
}

/// `λ ∈ {4, 8, …, 256}`.
pub fn default_scales() -> Vec<f64> {
    (2..=8).map(|e| f64::from(1u32 << e)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "rapid-decay")]
    RapidDecay,
    #[serde(rename = "slow/no-decay")]
    SlowDecay,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::RapidDecay => "rapid-decay",
            Classification::SlowDecay => "slow/no-decay",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Exponential,
    Polynomial,
}

/// Least-squares fits of `log M` against `λ` and against `log λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `M ≈ C e^{-rate·λ}`.
    pub exp_rate: f64,
    pub exp_residual: f64,
    /// `M ≈ C λ^{-order}`.
    pub poly_order: f64,
    pub poly_residual: f64,
    pub best: Model,
    pub samples_used: usize,
}

/// FBI magnitudes along one frequency ray and their classification.
///
/// `normalized[j] = |F(λ_j)| · (Kλ_j/π)^{n₀/2}` removes the Gaussian mass of the
/// `n₀` directions transverse to the ray, so a jump across a hypersurface
/// reports order 1 as in one variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub direction: Vec<f64>,
    pub scales: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub normalized: Vec<f64>,
    pub noise: Vec<f64>,
    /// Frequency beyond half the Nyquist limit of some axis; never resolved.
    pub aliased: Vec<bool>,
    pub resolved: Vec<bool>,
    pub fit: Option<DecayFit>,
    pub classification: Classification,
    /// Set when too few samples rise above the noise or the floor.
    pub floor_flag: bool,
    pub k: f64,
    pub thresholds: Thresholds,
}

/// Unit vector along `v`.
pub fn normalize_direction(v: &[f64]) -> Result<Vec<f64>, FbiError> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(FbiError::Direction);
    }
    Ok(v.iter().map(|x| x / n).collect())
}

pub fn decay_profile(
    u: &SampledFunction,
    eta: &Cutoff,
    probe: &[f64],
    direction: &[f64],
    opts: &DecayOptions,
) -> Result<DecayProfile, FbiError> {
    validate(u, eta, probe, opts.k)?;
    if direction.len() != u.dim() {
        return Err(FbiError::Dimension { expected: u.dim(), got: direction.len() });
    }
    let dir = normalize_direction(direction)?;
    let s = &opts.scales;
    if s.len() < 6 || s.windows(2).any(|w| !(w[0] < w[1])) || !(s[0] > 0.0) {
        return Err(FbiError::Scales);
    }
    let samples = par::map_slice(s, |&lam| {
        let freq: Vec<f64> = dir.iter().map(|x| lam * x).collect();
        // the coarse grid (spacing 2h) must still resolve the oscillation
        let aliased = u.axes().iter().zip(&freq).any(|(a, w)| w.abs() * a.spacing() > std::f64::consts::FRAC_PI_2);
        fbi_transform_detailed(u, eta, probe, &freq, opts.k).map(|v| Sample { value: v.value, noise: v.noise(), aliased })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(classify_values(dir, s, &samples, u.dim() - 1, opts))
}

/// One transform value with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub value: Complex64,
    pub noise: f64,
    pub aliased: bool,
}

impl Sample {
    pub fn clean(value: Complex64, noise: f64) -> Self {
        Self { value, noise, aliased: false }
    }
}

/// Classification from `(F, noise)` samples.
pub fn classify_values(
    direction: Vec<f64>,
    scales: &[f64],
    values: &[Sample],
    n0: usize,
    opts: &DecayOptions,
) -> DecayProfile {
    let t = opts.thresholds;
    let magnitudes: Vec<f64> = values.iter().map(|v| v.value.norm()).collect();
    let noise: Vec<f64> = values.iter().map(|v| v.noise).collect();
    let aliased: Vec<bool> = values.iter().map(|v| v.aliased).collect();
    let normalized: Vec<f64> = magnitudes
        .iter()
        .zip(scales)
        .map(|(m, lam)| m * (opts.k * lam / std::f64::consts::PI).powf(n0 as f64 / 2.0))
        .collect();
    let resolved: Vec<bool> = (0..values.len())
        .map(|j| !aliased[j] && magnitudes[j] > t.floor && magnitudes[j] > t.resolve_ratio * noise[j])
        .collect();
    let pts: Vec<(f64, f64)> =
        scales.iter().zip(&normalized).zip(&resolved).filter(|(_, &r)| r).map(|((&l, &m), _)| (l, m)).collect();
    let (fit, classification, floor_flag) = if pts.len() < t.min_resolved.max(2) {
        (None, Classification::RapidDecay, true)
    } else {
        let fit = fit_models(&pts);
        (Some(fit), classify_fit(&fit, &t), false)
    };
    DecayProfile {
        direction,
        scales: scales.to_vec(),
        magnitudes,
        normalized,
        noise,
        aliased,
        resolved,
        fit,
        classification,
        floor_flag,
        k: opts.k,
        thresholds: t,
    }
}

/// Ordinary least squares `y = a + b x`; returns `(b, residual sum of squares)`.
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let rss = x.iter().zip(y).map(|(xi, yi)| (yi - a - b * xi).powi(2)).sum();
    (b, rss)
}

pub fn fit_models(pts: &[(f64, f64)]) -> DecayFit {
    let lam: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let loglam: Vec<f64> = lam.iter().map(|l| l.ln()).collect();
    let logm: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (be, re) = line_fit(&lam, &logm);
    let (bp, rp) = line_fit(&loglam, &logm);
    DecayFit {
        exp_rate: -be,
        exp_residual: re,
        poly_order: -bp,
        poly_residual: rp,
        best: if re < rp { Model::Exponential } else { Model::Polynomial },
        samples_used: pts.len(),
    }
}

/// Rapid if the exponential model wins with a positive rate or the order
/// reaches `rapid_order`; slow if the order is at most `slow_order`.
pub fn classify_fit(fit: &DecayFit, t: &Thresholds) -> Classification {
    if fit.best == Model::Exponential && fit.exp_rate > 0.0 || fit.poly_order >= t.rapid_order {
        Classification::RapidDecay
    } else if fit.poly_order <= t.slow_order {
        Classification::SlowDecay
    } else {
        Classification::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> DecayOptions {
        DecayOptions::default()
    }

    #[test]
    fn synthetic_power_law_is_slow() {
        let s = default_scales();
        let v: Vec<Sample> = s.iter().map(|l| Sample::clean(Complex64::new(l.powf(-1.5), 0.0), 1e-12)).collect();
        let p = classify_values(vec![0.0, 1.0], &s, &v, 1, &opts());
        let fit = p.fit.unwrap();
        assert!((fit.poly_order - 1.0).abs() < 1e-9, "{fit:?}");
        assert_eq!(p.classification, Classification::SlowDecay);
    }

    #[test]
    fn synthetic_exponential_is_rapid() {
        let s = default_scales();
        let v: Vec<Sample> = s.iter().map(|l| Sample::clean(Complex64::new((-l / 4.0).exp(), 0.0), 1e-30)).collect();
        let p = classify_values(vec![1.0, 0.0], &s, &v, 1, &opts());
        assert_eq!(p.classification, Classification::RapidDecay);
        assert!(!p.floor_flag);
    }

    #[test]
    fn all_below_floor_is_flagged_rapid() {
        let s = default_scales();
        let v = vec![Sample::clean(Complex64::new(0.0, 0.0), 0.0); s.len()];
        let p = classify_values(vec![1.0], &s, &v, 0, &opts());
        assert_eq!(p.classification, Classification::RapidDecay);
        assert!(p.floor_flag && p.fit.is_none());
    }

    #[test]
    fn middle_orders_are_inconclusive() {
        let s = default_scales();
        let v: Vec<Sample> = s.iter().map(|l| Sample::clean(Complex64::new(l.powf(-4.0), 0.0), 0.0)).collect();
        let p = classify_values(vec![1.0], &s, &v, 0, &opts());
        assert_eq!(p.classification, Classification::Inconclusive);
    }

    #[test]
    fn rejects_short_sweeps() {
        assert!(normalize_direction(&[0.0, 0.0]).is_err());
    }
}
