//! Built-in test functions and the JSON sample format.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sampled::{Axis, Generator, SampledFunction};
use super::FbiError;

/// A named built-in function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Zero,
    /// `exp(-1/(1 - |y-c|²/ρ²))` inside the ball, zero outside.
    Bump { center: Vec<f64>, radius: f64 },
    /// `exp(-|y-c|²/w²)`.
    Gaussian { center: Vec<f64>, width: f64 },
    /// Jump across `y_axis = offset`, valued 1/2 on the hyperplane.
    Heaviside { axis: usize, #[serde(default)] offset: f64 },
    /// `√(t + i|z|²)` in coordinates `(x₁, y₁, …, xₙ, yₙ, t)`, principal branch.
    HeisenbergSqrt,
    /// `e^{i ω·y}`.
    PlaneWave { omega: Vec<f64> },
}

impl GeneratorSpec {
    pub fn function(&self, dim: usize) -> Result<Generator, FbiError> {
        let check = |v: &[f64]| {
            if v.len() == dim {
                Ok(())
            } else {
                Err(FbiError::Dimension { expected: dim, got: v.len() })
            }
        };
        let g: Generator = match self.clone() {
            GeneratorSpec::Zero => Arc::new(|_| Complex64::new(0.0, 0.0)),
            GeneratorSpec::Bump { center, radius } => {
                check(&center)?;
                positive(radius)?;
                Arc::new(move |y| {
                    let s = dist2(y, &center) / (radius * radius);
                    Complex64::new(if s < 1.0 { (-1.0 / (1.0 - s)).exp() } else { 0.0 }, 0.0)
                })
            }
            GeneratorSpec::Gaussian { center, width } => {
                check(&center)?;
                positive(width)?;
                Arc::new(move |y| Complex64::new((-dist2(y, &center) / (width * width)).exp(), 0.0))
            }
            GeneratorSpec::Heaviside { axis, offset } => {
                if axis >= dim {
                    return Err(FbiError::Dimension { expected: dim, got: axis + 1 });
                }
                Arc::new(move |y| {
                    let v = match y[axis].partial_cmp(&offset) {
                        Some(std::cmp::Ordering::Greater) => 1.0,
                        Some(std::cmp::Ordering::Equal) => 0.5,
                        _ => 0.0,
                    };
                    Complex64::new(v, 0.0)
                })
            }
            GeneratorSpec::HeisenbergSqrt => {
                if dim < 3 || dim.is_multiple_of(2) {
                    return Err(FbiError::Dimension { expected: 3, got: dim });
                }
                Arc::new(move |y| {
                    let (t, z) = y.split_last().unwrap();
                    // +0.0 imaginary part selects i√|t| on the negative axis
                    Complex64::new(*t, z.iter().map(|c| c * c).sum::<f64>() + 0.0).sqrt()
                })
            }
            GeneratorSpec::PlaneWave { omega } => {
                check(&omega)?;
                Arc::new(move |y| Complex64::from_polar(1.0, y.iter().zip(&omega).map(|(a, b)| a * b).sum()))
            }
        };
        Ok(g)
    }

    pub fn label(&self) -> &'static str {
        match self {
            GeneratorSpec::Zero => "zero",
            GeneratorSpec::Bump { .. } => "bump",
            GeneratorSpec::Gaussian { .. } => "gaussian",
            GeneratorSpec::Heaviside { .. } => "heaviside",
            GeneratorSpec::HeisenbergSqrt => "heisenberg_sqrt",
            GeneratorSpec::PlaneWave { .. } => "plane_wave",
        }
    }

    pub fn sample(&self, axes: Vec<Axis>) -> Result<SampledFunction, FbiError> {
        let g = self.function(axes.len())?;
        SampledFunction::generated(axes, self.label(), g)
    }
}

fn positive(x: f64) -> Result<(), FbiError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(FbiError::Grid(format!("expected a positive parameter, got {x}")))
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSample {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// The JSON sample document: stored values or a generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleInput {
    Stored { axes: Vec<Axis>, samples: Vec<ComplexSample> },
    Generated { axes: Vec<Axis>, generator: GeneratorSpec },
}

impl SampleInput {
    pub fn axes(&self) -> &[Axis] {
        match self {
            SampleInput::Stored { axes, .. } | SampleInput::Generated { axes, .. } => axes,
        }
    }

    pub fn build(&self) -> Result<SampledFunction, FbiError> {
        for a in self.axes() {
            Axis::new(a.min, a.max, a.count)?;
        }
        match self {
            SampleInput::Stored { axes, samples } => {
                SampledFunction::stored(axes.clone(), samples.iter().map(|c| Complex64::new(c.re, c.im)).collect())
            }
            SampleInput::Generated { axes, generator } => generator.sample(axes.clone()),
        }
    }
}
