//! Method-of-characteristics (MoC) laboratory for coupled-wave hyperbolic
//! systems: simple-Euler, modified-Euler and leapfrog steppers, their
//! stability theory under periodic and nonreflecting boundaries, and the
//! spectral diagnostics used to measure error growth.

pub mod error;
pub mod experiment;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod schemes;
pub mod spectral;
pub mod theory;

pub use error::{MocError, Result};
pub use grid::{make_grid, Grid1D};
