//! Volume-integral solver for the scattering solution ψ⁺.
//!
//! On the active cells the field satisfies the collocation system
//!
//! ψ(xᵢ) = e^{i k·xᵢ} + Σⱼ Wᵢⱼ v(xⱼ) ψ(xⱼ),
//!
//! where Wᵢⱼ is the free outgoing Green's function times the cell volume for
//! i ≠ j, and the diagonal weight integrates the kernel analytically over
//! the equal-area disc / equal-volume ball centered on the cell. The same
//! representation evaluates ψ anywhere in space once the on-support values
//! are known.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::geometry::{Dimension, Vector};
use crate::linalg::{ComplexMatrix, LuFactorization};
use crate::medium::{GridDiscretization, Potential, PotentialKind};
use crate::special::{bessel_j1, hankel1_0, EULER_GAMMA};
use crate::{Error, Result};

/// Condition-estimate threshold above which a solve is refused.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Relative tolerance for energy-shell membership checks.
pub const SHELL_TOLERANCE: f64 = 1e-12;

/// An incident plane wave e^{i k·x} at energy E = |k|².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWaveContext {
    wave_vector: Vector,
    energy: f64,
}

impl PlaneWaveContext {
    /// Context from the wave vector itself; the energy is |k|².
    pub fn from_wave_vector(k: Vector) -> Result<Self> {
        if !k.is_finite() || k.norm_sq() == 0.0 {
            return Err(Error::Domain {
                what: "wave vector must be finite and nonzero",
            });
        }
        Ok(PlaneWaveContext {
            wave_vector: k,
            energy: k.norm_sq(),
        })
    }

    /// Context from a unit direction and an energy E > 0; k = sqrt(E) * direction.
    pub fn from_direction(direction: Vector, energy: f64) -> Result<Self> {
        if !energy.is_finite() || energy <= 0.0 {
            return Err(Error::Domain {
                what: "energy must be finite and > 0",
            });
        }
        if libm::fabs(direction.norm() - 1.0) > 1e-10 {
            return Err(Error::Domain {
                what: "direction must have unit norm (within 1e-10)",
            });
        }
        Ok(PlaneWaveContext {
            wave_vector: direction * libm::sqrt(energy),
            energy,
        })
    }

    pub fn wave_vector(&self) -> Vector {
        self.wave_vector
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// |k| = sqrt(E).
    pub fn wave_number(&self) -> f64 {
        libm::sqrt(self.energy)
    }

    pub fn dimension(&self) -> Dimension {
        self.wave_vector.dim()
    }
}

/// Free outgoing Green's function G₀⁺(distance, |k|).
///
/// d = 3: −e^{iκρ}/(4πρ);  d = 2: −(i/4)·H₀⁽¹⁾(κρ). Zero distance is a
/// singularity error — inside a cell use the singular-cell weight instead.
pub fn green_free(dimension: Dimension, distance: f64, k_norm: f64) -> Result<Complex64> {
    if !(distance.is_finite() && k_norm.is_finite()) || k_norm <= 0.0 {
        return Err(Error::Domain {
            what: "green_free requires finite distance and k_norm > 0",
        });
    }
    if distance <= 0.0 {
        return Err(Error::Singularity);
    }
    match dimension {
        Dimension::Three => {
            let (s, c) = libm::sincos(k_norm * distance);
            let scale = -1.0 / (4.0 * core::f64::consts::PI * distance);
            Ok(Complex64::new(scale * c, scale * s))
        }
        Dimension::Two => {
            let h = hankel1_0(k_norm * distance)?;
            Ok(Complex64::new(0.0, -0.25) * h)
        }
    }
}

/// Diagonal (singular-cell) quadrature weight: the kernel integrated over
/// the equal-area disc (2-D) or equal-volume ball (3-D) of a cell with edge
/// length `spacing`.
pub(crate) fn singular_weight(dimension: Dimension, spacing: f64, k_norm: f64) -> Complex64 {
    match dimension {
        Dimension::Two => {
            // small-argument H0: 1 + (2i/pi)(ln(z/2) + gamma), integrated in
            // polar coordinates over the disc of equal area a = h/sqrt(pi)
            let a = spacing / libm::sqrt(core::f64::consts::PI);
            let re = 0.5 * a * a * (libm::log(0.5 * k_norm * a) + EULER_GAMMA - 0.5);
            let im = -0.25 * core::f64::consts::PI * a * a;
            Complex64::new(re, im)
        }
        Dimension::Three => {
            // exact integral of -e^{i kappa s}/(4 pi s) over the ball of
            // equal volume a = h (3/(4 pi))^{1/3}:
            //   (1 - e^{i kappa a})/kappa^2 + (i a / kappa) e^{i kappa a}
            let a = spacing * libm::cbrt(3.0 / (4.0 * core::f64::consts::PI));
            let e = Complex64::new(0.0, k_norm * a).exp();
            (Complex64::new(1.0, 0.0) - e) / (k_norm * k_norm)
                + Complex64::new(0.0, a / k_norm) * e
        }
    }
}

/// The assembled and factored collocation operator I − W·diag(v) for one
/// grid at one energy. Reusable across incident directions and point
/// sources, which share the matrix and differ only in the right-hand side.
pub struct LippmannSchwingerOperator {
    grid: GridDiscretization,
    k_norm: f64,
    matrix: ComplexMatrix,
    lu: LuFactorization,
    condition: f64,
}

impl LippmannSchwingerOperator {
    /// Assembles and factors the system; refuses condition estimates above
    /// [`CONDITION_LIMIT`].
    pub fn assemble(grid: &GridDiscretization, energy: f64) -> Result<Self> {
        if !energy.is_finite() || energy <= 0.0 {
            return Err(Error::Domain {
                what: "energy must be finite and > 0",
            });
        }
        let k_norm = libm::sqrt(energy);
        let dim = grid.dimension();
        let centers = grid.cell_centers();
        let v = grid.v_values();
        let vol = grid.cell_volume();
        let n = centers.len();
        let diag = singular_weight(dim, grid.spacing(), k_norm);
        let mut a = ComplexMatrix::zeros(n);
        for i in 0..n {
            let xi = centers[i];
            let row = a.row_mut(i);
            for (j, (xj, vj)) in centers.iter().zip(v).enumerate() {
                let w = if i == j {
                    diag
                } else {
                    // distance > 0 off the diagonal by construction
                    green_free(dim, xi.distance(xj), k_norm).unwrap() * vol
                };
                row[j] = -w * *vj;
            }
            row[i] += Complex64::new(1.0, 0.0);
        }
        let matrix = a.clone();
        let norm_one = matrix.norm_one();
        let lu = a.factor()?;
        let condition = lu.condition_estimate(norm_one);
        if condition > CONDITION_LIMIT {
            return Err(Error::IllConditioned {
                estimate: condition,
            });
        }
        Ok(LippmannSchwingerOperator {
            grid: grid.clone(),
            k_norm,
            matrix,
            lu,
            condition,
        })
    }

    pub fn grid(&self) -> &GridDiscretization {
        &self.grid
    }

    pub fn energy(&self) -> f64 {
        self.k_norm * self.k_norm
    }

    pub fn k_norm(&self) -> f64 {
        self.k_norm
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    /// Solves for the field driven by `rhs` and returns the solution with
    /// its relative backsubstitution residual (infinity norm).
    pub(crate) fn solve_rhs(&self, rhs: &[Complex64]) -> (Vec<Complex64>, f64) {
        let x = self.lu.solve(rhs);
        let back = self.matrix.matvec(&x);
        let mut err = 0.0f64;
        let mut scale = 0.0f64;
        for (b, r) in back.iter().zip(rhs) {
            err = err.max((b - r).norm());
            scale = scale.max(r.norm());
        }
        let residual = if scale > 0.0 { err / scale } else { err };
        (x, residual)
    }

    /// Scattering solution for an incident plane wave on this grid.
    pub fn solve_plane_wave(&self, context: &PlaneWaveContext) -> Result<ScatteringSolution> {
        if context.dimension() != self.grid.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.dimension(),
                got: context.dimension(),
            });
        }
        if libm::fabs(context.energy() - self.energy()) > SHELL_TOLERANCE * self.energy() {
            return Err(Error::Invalid {
                what: alloc::format!(
                    "operator assembled at E = {} cannot solve at E = {}",
                    self.energy(),
                    context.energy()
                ),
            });
        }
        let k = context.wave_vector();
        let rhs: Vec<Complex64> = self
            .grid
            .cell_centers()
            .iter()
            .map(|x| Complex64::new(0.0, k.dot(x)).exp())
            .collect();
        let (psi, residual) = self.solve_rhs(&rhs);
        Ok(ScatteringSolution {
            context: *context,
            grid: self.grid.clone(),
            psi,
            residual,
        })
    }
}

/// ψ⁺ on the active cells of a grid, for one incident plane wave.
#[derive(Clone, Debug)]
pub struct ScatteringSolution {
    context: PlaneWaveContext,
    grid: GridDiscretization,
    psi: Vec<Complex64>,
    residual: f64,
}

impl ScatteringSolution {
    pub fn context(&self) -> &PlaneWaveContext {
        &self.context
    }

    pub fn grid(&self) -> &GridDiscretization {
        &self.grid
    }

    /// ψ⁺ values aligned with `grid().cell_centers()`.
    pub fn psi_values(&self) -> &[Complex64] {
        &self.psi
    }

    /// Relative backsubstitution residual of the direct solve.
    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// Assembles, factors, and solves the on-support system for one plane wave.
pub fn solve_psi_on_support(
    grid: &GridDiscretization,
    context: &PlaneWaveContext,
) -> Result<ScatteringSolution> {
    LippmannSchwingerOperator::assemble(grid, context.energy())?.solve_plane_wave(context)
}

/// Shared representation sum Σⱼ G(x, xⱼ)·vⱼ·fieldⱼ·vol with the
/// singular-cell rule applied to the cell owning `x`.
pub(crate) fn representation_sum(
    grid: &GridDiscretization,
    k_norm: f64,
    field: &[Complex64],
    x: &Vector,
) -> Complex64 {
    let dim = grid.dimension();
    let vol = grid.cell_volume();
    let half_cell = 0.5 * grid.spacing();
    let mut sum = Complex64::new(0.0, 0.0);
    for ((center, v), value) in grid.cell_centers().iter().zip(grid.v_values()).zip(field) {
        if *v == 0.0 {
            continue;
        }
        let dist = x.distance(center);
        let w = if dist < half_cell {
            singular_weight(dim, grid.spacing(), k_norm)
        } else {
            green_free(dim, dist, k_norm).unwrap() * vol
        };
        sum += w * *v * *value;
    }
    sum
}

/// Evaluates ψ⁺ anywhere in space through the volume-integral
/// representation. At active cell centers this reproduces the solved values
/// up to the solve residual.
pub fn evaluate_psi(solution: &ScatteringSolution, x: &Vector) -> Complex64 {
    let k = solution.context.wave_vector();
    let incident = Complex64::new(0.0, k.dot(x)).exp();
    incident
        + representation_sum(
            &solution.grid,
            solution.context.wave_number(),
            &solution.psi,
            x,
        )
}

/// First Born approximation of the scattering amplitude,
/// f_B(k, l) = (2π)^{−d} ∫ e^{i(k−l)·y} v(y) dy.
///
/// Analytic for constant discs/balls and truncated Gaussians; midpoint
/// quadrature on an internal fine grid for bump sums.
pub fn born_amplitude(potential: &Potential, k: &Vector, l: &Vector) -> Result<Complex64> {
    let k_norm = k.norm();
    let l_norm = l.norm();
    if libm::fabs(k_norm - l_norm) > SHELL_TOLERANCE * k_norm.max(l_norm) {
        return Err(Error::ShellMismatch { k_norm, l_norm });
    }
    let dim = potential.dimension();
    let d = dim.as_usize() as f64;
    let q_vec = *k - *l;
    let q = q_vec.norm();
    let prefactor = libm::pow(2.0 * core::f64::consts::PI, -d);
    match potential.kind() {
        PotentialKind::DiscConstant { amplitude, radius } => {
            let transform = match dim {
                // FT of the disc indicator: 2 pi R J1(qR)/q, -> pi R^2 at q = 0
                Dimension::Two => {
                    if q * radius < 1e-12 {
                        core::f64::consts::PI * radius * radius
                    } else {
                        2.0 * core::f64::consts::PI * radius * bessel_j1(q * radius)? / q
                    }
                }
                // FT of the ball indicator: 4 pi (sin(qR) - qR cos(qR))/q^3
                Dimension::Three => {
                    if q * radius < 1e-12 {
                        4.0 / 3.0 * core::f64::consts::PI * radius * radius * radius
                    } else {
                        let (s, c) = libm::sincos(q * radius);
                        4.0 * core::f64::consts::PI * (s - q * radius * c) / (q * q * q)
                    }
                }
            };
            Ok(Complex64::new(prefactor * amplitude * transform, 0.0))
        }
        PotentialKind::TruncatedGaussian { amplitude, width } => {
            // FT of the full Gaussian; the clipped tail outside the support
            // ball is negligible for width <= r/3
            let s2 = width * width;
            let transform = libm::pow(2.0 * core::f64::consts::PI * s2, d / 2.0)
                * libm::exp(-0.5 * s2 * q * q);
            Ok(Complex64::new(prefactor * amplitude * transform, 0.0))
        }
        PotentialKind::SumOfBumps { .. } => {
            // midpoint quadrature over the support cube
            let cells: u32 = match dim {
                Dimension::Two => 128,
                Dimension::Three => 48,
            };
            let grid = crate::medium::discretize(potential, cells)?;
            let mut sum = Complex64::new(0.0, 0.0);
            for (c, v) in grid.cell_centers().iter().zip(grid.v_values()) {
                if *v != 0.0 {
                    sum += Complex64::new(0.0, q_vec.dot(c)).exp() * *v;
                }
            }
            Ok(sum * grid.cell_volume() * prefactor)
        }
    }
}
