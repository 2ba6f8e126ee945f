//! Fixed-frequency wave scattering for compactly supported potentials, and
//! recovery of the complex scattering amplitude from phaseless (intensity)
//! measurements along an observation ray.
//!
//! The crate covers the forward chain and its inversion:
//!
//! * [`medium`] — compactly supported potentials (quantum or acoustic) and
//!   their midpoint grid discretizations;
//! * [`special`] — order-zero Bessel/Hankel evaluations backing the 2-D
//!   Green's function;
//! * [`forward`] — the volume-integral (Lippmann–Schwinger) solver for the
//!   scattering solution ψ⁺ and the Born amplitude oracle;
//! * [`farfield`] — scattering amplitudes f(k,l), the dimension-dependent
//!   far-field constant, and the phaseless observables a, a₀;
//! * [`resolvent`] — point-source fields R⁺, reciprocity checks, and the
//!   reduction of |R⁺|² data to |ψ⁺|²;
//! * [`recovery`] — the 2×2 inversion recovering f(k,l) from intensity
//!   samples on the ray lattice s_j + nT, with decay-rate estimation.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes
//! through `libm`. File formats, configuration, and the CLI live in the
//! companion `phaserec-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod farfield;
pub mod forward;
pub mod geometry;
pub mod linalg;
pub mod medium;
pub mod recovery;
pub mod resolvent;
pub mod special;

pub use error::Error;
pub use geometry::{Dimension, Vector};
pub use num_complex::Complex64;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
