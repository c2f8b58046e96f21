//! Uniform space-time lattice with equal steps in x and t.

use crate::error::{MocError, Result};
use serde::Serialize;

/// Uniform grid of `m + 1` nodes on `[0, L]` or `[-L/2, L/2]`.
///
/// The time step equals the space step, so characteristics of speed
/// one pass exactly through grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    pub length: f64,
    pub h: f64,
    pub m: usize,
    pub centered: bool,
}

/// Largest deviation of `L/h` from an integer, in units of the ulp of `L/h`.
const RATIO_ULPS: f64 = 4.0;

pub fn make_grid(length: f64, h: f64, centered: bool) -> Result<Grid1D> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(MocError::InvalidGrid(format!("L must be positive, got {length}")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(MocError::InvalidGrid(format!("h must be positive, got {h}")));
    }
    let ratio = length / h;
    let m = ratio.round();
    let tol = RATIO_ULPS * f64::EPSILON * m.max(1.0);
    if (ratio - m).abs() > tol {
        return Err(MocError::NonIntegerRatio { ratio });
    }
    let m = m as usize;
    if m < 4 {
        return Err(MocError::DegenerateGrid { m });
    }
    Ok(Grid1D {
        length,
        h: length / m as f64,
        m,
        centered,
    })
}

impl Grid1D {
    pub fn nodes(&self) -> usize {
        self.m + 1
    }

    pub fn x(&self, i: usize) -> f64 {
        let origin = if self.centered { -0.5 * self.length } else { 0.0 };
        origin + i as f64 * self.h
    }

    pub fn midpoint(&self) -> f64 {
        if self.centered {
            0.0
        } else {
            0.5 * self.length
        }
    }

    /// Number of whole steps in `t`, if `t` is an integer multiple of `h`.
    pub fn steps_in(&self, t: f64) -> Option<usize> {
        let n = (t / self.h).round();
        if n < 0.0 || (t / self.h - n).abs() > 1e-9 * n.max(1.0) {
            None
        } else {
            Some(n as usize)
        }
    }
}
