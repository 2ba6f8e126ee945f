//! Scattering amplitudes, the dimension-dependent far-field constant, and
//! the phaseless ray observables.
//!
//! Far from the scatterer the field behaves as
//!
//! ψ⁺(x,k) ≈ e^{ik·x} + c(d,|k|) · e^{i|k||x|} / |x|^{(d−1)/2} · f(k, |k|x̂),
//!
//! and the intensity observable a(x,k) = |x|^{(d−1)/2}(|ψ⁺|² − 1) oscillates
//! along a ray with the leading term a₀ carrying the amplitude's modulus and
//! phase.

use num_complex::Complex64;

use crate::forward::{evaluate_psi, ScatteringSolution, SHELL_TOLERANCE};
use crate::geometry::{Dimension, Vector};
use crate::{Error, Result};

/// Below this modulus the amplitude's phase is reported as 0 by convention.
pub const ZERO_MODULUS_FLOOR: f64 = 1e-14;

/// The complex constant multiplying the outgoing spherical wave:
/// c(d,|k|) = −πi·(−2πi)^{(d−1)/2}·|k|^{(d−3)/2}, principal branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FarFieldConstant {
    dimension: Dimension,
    k_norm: f64,
    c: Complex64,
    modulus: f64,
    phase_beta: f64,
}

/// Evaluates the far-field constant for dimension 2 or 3.
///
/// d = 3: c = −2π² exactly (the |k| power vanishes). d = 2: the principal
/// branch of (−2πi)^{1/2} gives c = −π^{3/2}(1+i)·|k|^{−1/2}, i.e. modulus
/// π√(2π)/√|k| and phase −3π/4.
pub fn farfield_constant(dimension: Dimension, k_norm: f64) -> Result<FarFieldConstant> {
    if !k_norm.is_finite() || k_norm <= 0.0 {
        return Err(Error::Domain {
            what: "farfield_constant requires k_norm > 0",
        });
    }
    let c = match dimension {
        Dimension::Three => Complex64::new(-2.0 * core::f64::consts::PI * core::f64::consts::PI, 0.0),
        Dimension::Two => {
            let scale = libm::pow(core::f64::consts::PI, 1.5) / libm::sqrt(k_norm);
            Complex64::new(-scale, -scale)
        }
    };
    Ok(FarFieldConstant {
        dimension,
        k_norm,
        c,
        modulus: c.norm(),
        phase_beta: c.arg(),
    })
}

impl FarFieldConstant {
    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn k_norm(&self) -> f64 {
        self.k_norm
    }

    pub fn value(&self) -> Complex64 {
        self.c
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// Phase β in (−π, π].
    pub fn phase_beta(&self) -> f64 {
        self.phase_beta
    }
}

/// One complex amplitude f(k,l) with its polar decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FarFieldEntry {
    k: Vector,
    l: Vector,
    f: Complex64,
    modulus: f64,
    phase_alpha: f64,
}

impl FarFieldEntry {
    /// Wraps an amplitude, validating that k and l sit on the same energy
    /// shell. Phases of near-zero amplitudes are set to 0.
    pub fn new(k: Vector, l: Vector, f: Complex64) -> Result<Self> {
        let k_norm = k.norm();
        let l_norm = l.norm();
        if libm::fabs(k_norm - l_norm) > SHELL_TOLERANCE * k_norm.max(l_norm) {
            return Err(Error::ShellMismatch { k_norm, l_norm });
        }
        let modulus = f.norm();
        let phase_alpha = if modulus < ZERO_MODULUS_FLOOR {
            0.0
        } else {
            f.arg()
        };
        Ok(FarFieldEntry {
            k,
            l,
            f,
            modulus,
            phase_alpha,
        })
    }

    pub fn k(&self) -> Vector {
        self.k
    }

    pub fn l(&self) -> Vector {
        self.l
    }

    pub fn value(&self) -> Complex64 {
        self.f
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// Phase α in (−π, π]; 0 when the modulus is below the floor.
    pub fn phase_alpha(&self) -> f64 {
        self.phase_alpha
    }
}

/// Scattering amplitude from a solved field:
/// f(k,l) = (2π)^{−d} Σⱼ e^{−i l·xⱼ} v(xⱼ) ψ⁺(xⱼ) vol.
pub fn scattering_amplitude(solution: &ScatteringSolution, l: &Vector) -> Result<FarFieldEntry> {
    let grid = solution.grid();
    let k = solution.context().wave_vector();
    if l.dim() != grid.dimension() {
        return Err(Error::DimensionMismatch {
            expected: grid.dimension(),
            got: l.dim(),
        });
    }
    let k_norm = k.norm();
    let l_norm = l.norm();
    if libm::fabs(k_norm - l_norm) > SHELL_TOLERANCE * k_norm.max(l_norm) {
        return Err(Error::ShellMismatch { k_norm, l_norm });
    }
    let d = grid.dimension().as_usize() as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for ((x, v), psi) in grid
        .cell_centers()
        .iter()
        .zip(grid.v_values())
        .zip(solution.psi_values())
    {
        if *v != 0.0 {
            sum += Complex64::new(0.0, -l.dot(x)).exp() * *v * psi;
        }
    }
    let f = sum * grid.cell_volume() * libm::pow(2.0 * core::f64::consts::PI, -d);
    FarFieldEntry::new(k, *l, f)
}

fn check_ray_direction(entry: &FarFieldEntry, x: &Vector) -> Result<f64> {
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::Domain {
            what: "evaluation point must be nonzero",
        });
    }
    // entry.l must equal |k| * x/|x|
    let k_norm = entry.k.norm();
    let expected = *x * (k_norm / r);
    if (expected - entry.l).norm() > 1e-9 * k_norm {
        return Err(Error::DirectionMismatch);
    }
    Ok(r)
}

/// Leading far-field approximation
/// ψ₁⁺(x,k) = e^{ik·x} + c(d,|k|)·e^{i|k||x|}/|x|^{(d−1)/2}·f(k,|k|x̂).
///
/// The entry must hold the amplitude at the outgoing direction of `x`.
pub fn leading_field(entry: &FarFieldEntry, x: &Vector) -> Result<Complex64> {
    let r = check_ray_direction(entry, x)?;
    let dim = x.dim();
    let k = entry.k;
    let k_norm = k.norm();
    let c = farfield_constant(dim, k_norm)?;
    let incident = Complex64::new(0.0, k.dot(x)).exp();
    let spherical = Complex64::new(0.0, k_norm * r).exp()
        / libm::pow(r, (dim.as_usize() as f64 - 1.0) / 2.0);
    Ok(incident + c.value() * spherical * entry.value())
}

/// Phaseless ray observable a(x,k) = |x|^{(d−1)/2}(|ψ⁺(x,k)|² − 1).
///
/// The point must lie strictly outside the scatterer support (intensity
/// measurements are taken outside the scatterer).
pub fn phaseless_a(solution: &ScatteringSolution, x: &Vector) -> Result<f64> {
    let r = x.norm();
    let support = solution.grid().support_radius();
    if r <= support {
        return Err(Error::InsideSupport {
            norm: r,
            support_radius: support,
        });
    }
    let d = x.dim().as_usize() as f64;
    let psi = evaluate_psi(solution, x);
    Ok(libm::pow(r, (d - 1.0) / 2.0) * (psi.norm_sqr() - 1.0))
}

/// Leading oscillation of the phaseless observable:
/// a₀(x,k) = 2·Re(c(d,|k|)·e^{i(|k||x| − k·x)}·f(k,|k|x̂)).
pub fn background_a0(entry: &FarFieldEntry, x: &Vector) -> Result<f64> {
    let r = check_ray_direction(entry, x)?;
    let k = entry.k;
    let k_norm = k.norm();
    let c = farfield_constant(x.dim(), k_norm)?;
    let osc = Complex64::new(0.0, k_norm * r - k.dot(x)).exp();
    Ok(2.0 * (c.value() * osc * entry.value()).re)
}
