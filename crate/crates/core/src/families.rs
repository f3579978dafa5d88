//! Built-in parametric families.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::state::DensityOperator;

/// Equatorial qubit family on a uniform angle grid over `[0, 2π)`.
///
/// `ρ_θ = (1 − mixing) · ½(I + radius (cos θ σx + sin θ σy)) + mixing · I/2`.
/// Returns the grid angles and the states.
pub fn rotating_qubit(
    grid_size: usize,
    radius: f64,
    mixing: f64,
) -> Result<(Vec<Vec<f64>>, Vec<DensityOperator>)> {
    if grid_size == 0 {
        return Err(Error::InvalidModel("grid size must be positive".into()));
    }
    if !(0.0..=1.0).contains(&radius) || !(0.0..=1.0).contains(&mixing) {
        return Err(Error::InvalidModel(format!(
            "radius {radius} and mixing {mixing} must lie in [0, 1]"
        )));
    }
    let r = (1.0 - mixing) * radius;
    let mut grid = Vec::with_capacity(grid_size);
    let mut states = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let theta = TAU * i as f64 / grid_size as f64;
        grid.push(vec![theta]);
        states.push(DensityOperator::qubit([
            r * theta.cos(),
            r * theta.sin(),
            0.0,
        ])?);
    }
    Ok((grid, states))
}

/// Commuting qubit family `diag(p, 1 − p)` with `p_i = (i + ½)/K`.
pub fn diagonal_qubit(grid_size: usize) -> Result<(Vec<Vec<f64>>, Vec<DensityOperator>)> {
    if grid_size == 0 {
        return Err(Error::InvalidModel("grid size must be positive".into()));
    }
    let mut grid = Vec::with_capacity(grid_size);
    let mut states = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let p = (i as f64 + 0.5) / grid_size as f64;
        grid.push(vec![p]);
        states.push(DensityOperator::diagonal(&[p, 1.0 - p])?);
    }
    Ok((grid, states))
}
