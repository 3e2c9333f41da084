//! Numerical laboratory for conformal dynamics on the circle and the sphere.
//!
//! The crate is organised by subsystem:
//!
//! * [`circle`]: expansive covering maps of the unit circle, Markov partitions,
//!   periodic-point classification and arc scaling laws.
//! * [`conjugacy`]: topological conjugacies built by Markov refinement, and
//!   their scalewise distortion.
//! * [`qc`]: Beurling–Ahlfors extension, Beltrami sampling and David tails.
//! * [`reflection`]: circle packings, necklace groups and Nielsen maps.
//! * [`holo`]: rational and anti-rational maps, fixed points, Julia rendering.
//! * [`schwarz`]: quadrature domains and piecewise Schwarz reflections.
//! * [`suffridge`]: cusps, tangential double points and bi-angled trees.
//!
//! Angles are measured in turns throughout: `t` stands for `e^{2πit}`.

pub mod circle;
pub mod config;
pub mod conjugacy;
mod error;
pub mod holo;
pub mod numeric;
pub mod qc;
pub mod raster;
pub mod reflection;
pub mod schwarz;
pub mod suffridge;

pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64 as C64;
