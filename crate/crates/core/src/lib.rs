//! Quantum gates from winding numbers.
//!
//! A qubit is a pair of planar sites holding a charge and a magnetic dipole.
//! Carrying one particle around another along a closed path multiplies the
//! amplitude by `e^{i n γ₀}`, where `n` is the path's winding number, so the
//! phase gates built this way are unaffected by any deformation that keeps
//! the winding. Partial swaps come from beam splitters and are not protected.
//!
//! Modules, bottom-up:
//!
//! * [`geometry`]: polylines, winding numbers, clearance, shoelace area.
//! * [`gates`]: gate matrices and the logical [`gates::Circuit`].
//! * [`ac_model`]: site layouts, loop moves, compilation and noisy execution.
//! * [`simulator`]: state-vector simulation and concurrence.
//! * [`synthesis`]: Euler decomposition and CZ / CNOT constructions.
//! * [`formats`] and [`experiments`]: file formats, sweeps and the demo.

pub mod ac_model;
pub mod experiments;
pub mod formats;
pub mod gates;
pub mod geometry;
pub mod matrix;
pub mod rng;
pub mod simulator;
pub mod synthesis;

mod error;

pub use error::Error;
