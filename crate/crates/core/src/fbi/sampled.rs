use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FbiError;

/// A uniform grid axis with `count ≥ 2` points from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, FbiError> {
        if count < 2 || !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(FbiError::Grid(format!("bad axis [{min}, {max}] with {count} points")));
        }
        Ok(Self { min, max, count })
    }

    /// Axis with spacing close to `h` and a grid point at every multiple of
    /// `h`'s exact value inside `[-half, half]`.
    pub fn symmetric(half: f64, h: f64) -> Result<Self, FbiError> {
        let steps = (half / h).round() as usize;
        Self::new(-(steps as f64) * h, steps as f64 * h, 2 * steps + 1)
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.min + i as f64 * self.spacing()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }

    /// Same interval with twice the resolution.
    pub fn refined(&self) -> Axis {
        Axis { count: 2 * self.count - 1, ..*self }
    }
}

pub type Generator = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;
/// Pointwise transformation `(y, u(y)) ↦ f(y, u(y))`.
pub type PointwiseMap = Arc<dyn Fn(&[f64], Complex64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum Samples {
    /// Row-major values, last axis fastest.
    Stored(Arc<Vec<Complex64>>),
    /// Evaluated on demand at grid points.
    Generated(Generator),
}

/// A function on a box in `R^{n₀+1}` known on a uniform grid.
#[derive(Clone)]
pub struct SampledFunction {
    axes: Vec<Axis>,
    samples: Samples,
    label: String,
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction").field("axes", &self.axes).field("label", &self.label).finish()
    }
}

impl SampledFunction {
    pub fn stored(axes: Vec<Axis>, values: Vec<Complex64>) -> Result<Self, FbiError> {
        let total: usize = axes.iter().map(|a| a.count).product();
        if axes.is_empty() || total != values.len() {
            return Err(FbiError::Grid(format!("{} samples for a grid of {total} points", values.len())));
        }
        Ok(Self { axes, samples: Samples::Stored(Arc::new(values)), label: "samples".into() })
    }

    pub fn generated(axes: Vec<Axis>, label: impl Into<String>, f: Generator) -> Result<Self, FbiError> {
        if axes.is_empty() {
            return Err(FbiError::Grid("no axes".into()));
        }
        Ok(Self { axes, samples: Samples::Generated(f), label: label.into() })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn samples(&self) -> &Samples {
        &self.samples
    }

    /// Value at a multi-index.
    pub fn at(&self, idx: &[usize], coords: &[f64]) -> Complex64 {
        match &self.samples {
            Samples::Stored(v) => {
                let mut flat = 0;
                for (a, &i) in self.axes.iter().zip(idx) {
                    flat = flat * a.count + i;
                }
                v[flat]
            }
            Samples::Generated(f) => f(coords),
        }
    }

    /// The same generated function on a grid with twice the resolution.
    pub fn refined(&self) -> Result<SampledFunction, FbiError> {
        match &self.samples {
            Samples::Generated(f) => Ok(Self {
                axes: self.axes.iter().map(Axis::refined).collect(),
                samples: Samples::Generated(f.clone()),
                label: self.label.clone(),
            }),
            Samples::Stored(_) => Err(FbiError::Grid("stored samples cannot be refined".into())),
        }
    }

    /// Materializes a generated function.
    pub fn to_stored(&self) -> SampledFunction {
        let total: usize = self.axes.iter().map(|a| a.count).product();
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.dim()];
        let mut coords: Vec<f64> = self.axes.iter().map(|a| a.coord(0)).collect();
        for _ in 0..total {
            values.push(self.at(&idx, &coords));
            for d in (0..self.dim()).rev() {
                idx[d] += 1;
                if idx[d] < self.axes[d].count {
                    coords[d] = self.axes[d].coord(idx[d]);
                    break;
                }
                idx[d] = 0;
                coords[d] = self.axes[d].coord(0);
            }
        }
        Self { axes: self.axes.clone(), samples: Samples::Stored(Arc::new(values)), label: self.label.clone() }
    }

    /// Pointwise `f(u)` on the same grid.
    pub fn map(&self, label: impl Into<String>, f: PointwiseMap) -> SampledFunction {
        let inner = self.clone();
        let axes = self.axes.clone();
        let g: Generator = Arc::new(move |x: &[f64]| {
            let idx: Vec<usize> = axes.iter().zip(x).map(|(a, &c)| ((c - a.min) / a.spacing()).round() as usize).collect();
            f(x, inner.at(&idx, x))
        });
        Self { axes: self.axes.clone(), samples: Samples::Generated(g), label: label.into() }
    }
}

/// Smooth cutoff: `η = 1` on `|y - c|² ≤ r²`, `η = 0` on `|y - c|² ≥ 2r²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub center: Vec<f64>,
    pub r: f64,
}

fn smooth_step(s: f64) -> f64 {
    // 0 for s ≤ 0, 1 for s ≥ 1, C^∞ in between
    let f = |t: f64| if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() };
    let (a, b) = (f(s), f(1.0 - s));
    a / (a + b)
}

impl Cutoff {
    pub fn new(center: Vec<f64>, r: f64) -> Result<Self, FbiError> {
        if !(r > 0.0) {
            return Err(FbiError::Grid("cutoff radius must be positive".into()));
        }
        Ok(Self { center, r })
    }

    /// `η` as a function of the squared distance to the center.
    pub fn value_sq(&self, d2: f64) -> f64 {
        let r2 = self.r * self.r;
        if d2 <= r2 {
            1.0
        } else if d2 >= 2.0 * r2 {
            0.0
        } else {
            1.0 - smooth_step((d2 - r2) / r2)
        }
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        self.value_sq(y.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum())
    }

    pub fn support_radius(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_profile() {
        let c = Cutoff::new(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(c.value(&[0.5, 0.5]), 1.0);
        assert_eq!(c.value(&[1.5, 0.0]), 0.0);
        assert!((c.value_sq(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for k in 0..=100 {
            let v = c.value_sq(1.0 + k as f64 / 100.0);
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn stored_round_trip() {
        let axes = vec![Axis::new(0.0, 1.0, 3).unwrap(), Axis::new(0.0, 2.0, 2).unwrap()];
        let g: Generator = Arc::new(|x: &[f64]| Complex64::new(x[0], x[1]));
        let f = SampledFunction::generated(axes, "xy", g).unwrap();
        let s = f.to_stored();
        assert_eq!(s.at(&[2, 1], &[1.0, 2.0]), Complex64::new(1.0, 2.0));
        assert_eq!(s.at(&[1, 0], &[0.5, 0.0]), Complex64::new(0.5, 0.0));
        assert_eq!(f.refined().unwrap().axes()[0].count, 5);
    }
}
