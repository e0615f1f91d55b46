//! The reference test set: a smooth bump, a planar jump and the Heisenberg
//! boundary value `√(t + i|z|²)`, with grids fine enough for `λ ≤ 256`.

use super::cone::circle_directions;
use super::decay::Classification;
use super::generators::GeneratorSpec;
use super::sampled::{Axis, Cutoff, SampledFunction};
use super::FbiError;

pub struct CanonicalCase {
    pub name: &'static str,
    pub function: SampledFunction,
    pub cutoff: Cutoff,
    pub probe: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    pub expected: Vec<Classification>,
}

impl CanonicalCase {
    /// The same case on a grid with twice the resolution.
    pub fn refined(&self) -> Result<CanonicalCase, FbiError> {
        Ok(CanonicalCase {
            name: self.name,
            function: self.function.refined()?,
            cutoff: self.cutoff.clone(),
            probe: self.probe.clone(),
            directions: self.directions.clone(),
            expected: self.expected.clone(),
        })
    }
}

pub fn bump_case(directions: usize) -> Result<CanonicalCase, FbiError> {
    let axes = vec![Axis::symmetric(1.0, 0.005)?; 2];
    let function = GeneratorSpec::Bump { center: vec![0.1, -0.05], radius: 0.5 }.sample(axes)?;
    Ok(CanonicalCase {
        name: "smooth bump",
        function,
        cutoff: Cutoff::new(vec![0.0, 0.0], 0.6)?,
        probe: vec![0.0, 0.0],
        directions: circle_directions(directions),
        expected: vec![Classification::RapidDecay; directions],
    })
}

/// `H(t)` in the variables `(x, t)`, probed along `±dt`.
pub fn heaviside_case() -> Result<CanonicalCase, FbiError> {
    let axes = vec![Axis::symmetric(1.0, 0.005)?; 2];
    let function = GeneratorSpec::Heaviside { axis: 1, offset: 0.0 }.sample(axes)?;
    Ok(CanonicalCase {
        name: "heaviside",
        function,
        cutoff: Cutoff::new(vec![0.0, 0.0], 0.6)?,
        probe: vec![0.0, 0.0],
        directions: vec![vec![0.0, 1.0], vec![0.0, -1.0]],
        expected: vec![Classification::SlowDecay; 2],
    })
}

/// `√(t + i(x² + y²))` in `(x, y, t)`, probed along `±dt`.
pub fn heisenberg_case() -> Result<CanonicalCase, FbiError> {
    let axes = vec![Axis::symmetric(0.6, 0.02)?, Axis::symmetric(0.6, 0.02)?, Axis::symmetric(0.6, 0.002)?];
    let function = GeneratorSpec::HeisenbergSqrt.sample(axes)?;
    Ok(CanonicalCase {
        name: "heisenberg sqrt",
        function,
        cutoff: Cutoff::new(vec![0.0, 0.0, 0.0], 0.4)?,
        probe: vec![0.0, 0.0, 0.0],
        directions: vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, -1.0]],
        expected: vec![Classification::SlowDecay, Classification::RapidDecay],
    })
}

pub fn canonical_cases() -> Result<Vec<CanonicalCase>, FbiError> {
    Ok(vec![bump_case(64)?, heaviside_case()?, heisenberg_case()?])
}
