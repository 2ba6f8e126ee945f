//! Point-source (resolvent) fields, reciprocity checks, and the reduction
//! of far point-source intensities |R⁺|² to plane-wave intensities |ψ⁺|².
//!
//! The field R⁺(·, x′, E) solves the same volume-integral system as the
//! plane-wave solution, with the incident wave replaced by the point-source
//! wave −G₀⁺(|x − x′|, √E). Far from the scatterer, R⁺ along −k̂ carries
//! |ψ⁺(x′, k)|² up to an explicit scale factor, which is how intensity-only
//! point-source data reduces to plane-wave intensity data.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::farfield::farfield_constant;
use crate::forward::{green_free, representation_sum, LippmannSchwingerOperator};
use crate::geometry::{Dimension, Vector};
use crate::medium::GridDiscretization;
use crate::{Error, Result};

/// R⁺ on the active cells of a grid, for one point source.
#[derive(Clone, Debug)]
pub struct ResolventField {
    source: Vector,
    energy: f64,
    grid: GridDiscretization,
    r_values: Vec<Complex64>,
    residual: f64,
    source_shifted: bool,
}

impl ResolventField {
    pub fn source(&self) -> Vector {
        self.source
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn grid(&self) -> &GridDiscretization {
        &self.grid
    }

    /// R⁺ values aligned with `grid().cell_centers()`.
    pub fn r_values(&self) -> &[Complex64] {
        &self.r_values
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// True when the requested source coincided with a cell center and was
    /// shifted by half a cell diagonal (measure-zero collision).
    pub fn source_shifted(&self) -> bool {
        self.source_shifted
    }
}

/// Solves the point-source system on an already assembled operator.
pub fn solve_point_source(
    operator: &LippmannSchwingerOperator,
    source: &Vector,
) -> Result<ResolventField> {
    let grid = operator.grid();
    if source.dim() != grid.dimension() {
        return Err(Error::DimensionMismatch {
            expected: grid.dimension(),
            got: source.dim(),
        });
    }
    let k_norm = operator.k_norm();
    let h = grid.spacing();
    // a source sitting exactly on a cell center would make the right-hand
    // side singular; shift it by half a cell diagonal
    let mut src = *source;
    let mut shifted = false;
    let collision = grid
        .cell_centers()
        .iter()
        .any(|c| c.distance(&src) < 1e-9 * h);
    if collision {
        let offset = 0.5 * h;
        src = match grid.dimension() {
            Dimension::Two => src + Vector::new2(offset, offset),
            Dimension::Three => src + Vector::new3(offset, offset, offset),
        };
        shifted = true;
    }
    let rhs: Vec<Complex64> = grid
        .cell_centers()
        .iter()
        .map(|x| -green_free(grid.dimension(), x.distance(&src), k_norm).unwrap())
        .collect();
    let (r_values, residual) = operator.solve_rhs(&rhs);
    Ok(ResolventField {
        source: src,
        energy: operator.energy(),
        grid: grid.clone(),
        r_values,
        residual,
        source_shifted: shifted,
    })
}

/// Assembles the operator and solves for one point source.
pub fn solve_resolvent_field(
    grid: &GridDiscretization,
    source: &Vector,
    energy: f64,
) -> Result<ResolventField> {
    let operator = LippmannSchwingerOperator::assemble(grid, energy)?;
    solve_point_source(&operator, source)
}

/// Evaluates R⁺(x, x′) anywhere away from the source through the
/// volume-integral representation.
pub fn evaluate_resolvent(field: &ResolventField, x: &Vector) -> Result<Complex64> {
    let k_norm = libm::sqrt(field.energy);
    let dist = x.distance(&field.source);
    if dist == 0.0 {
        return Err(Error::Singularity);
    }
    let incident = -green_free(field.grid.dimension(), dist, k_norm)?;
    Ok(incident + representation_sum(&field.grid, k_norm, &field.r_values, x))
}

/// |R⁺(x, x′, E) − R⁺(x′, x, E)| from two independent solves sharing one
/// assembled operator. Both points must lie strictly outside the support.
pub fn reciprocity_defect(
    grid: &GridDiscretization,
    x: &Vector,
    x_prime: &Vector,
    energy: f64,
) -> Result<f64> {
    if x == x_prime {
        return Err(Error::Domain {
            what: "reciprocity requires x != x_prime",
        });
    }
    let support = grid.support_radius();
    for point in [x, x_prime] {
        let r = point.norm();
        if r <= support {
            return Err(Error::InsideSupport {
                norm: r,
                support_radius: support,
            });
        }
    }
    let operator = LippmannSchwingerOperator::assemble(grid, energy)?;
    let field_from_prime = solve_point_source(&operator, x_prime)?;
    let field_from_x = solve_point_source(&operator, x)?;
    let forward = evaluate_resolvent(&field_from_prime, x)?;
    let backward = evaluate_resolvent(&field_from_x, x_prime)?;
    Ok((forward - backward).norm())
}

/// Scale factor turning |R⁺(−s k̂, x′, E)|² into an |ψ⁺(x′, k)|² estimate:
/// (2π)^{2d} |c(d,|k|)|^{−2} s^{d−1}.
pub fn psi_sq_scale(dimension: Dimension, k_norm: f64, s: f64) -> Result<f64> {
    let c = farfield_constant(dimension, k_norm)?;
    let d = dimension.as_usize() as f64;
    Ok(libm::pow(2.0 * core::f64::consts::PI, 2.0 * d) / (c.modulus() * c.modulus())
        * libm::pow(s, d - 1.0))
}

/// Alternative scaling in which the far-field link is applied without
/// squaring: (2π)^d |c(d,|k|)|^{−1} s^{(d−1)/2}.
///
/// Kept for diagnostics only: applied to |R⁺|² it does not recover the
/// |ψ⁺|² limit even for the zero potential (see the reduction tests, which
/// assert its non-convergence).
pub fn psi_sq_scale_unsquared(dimension: Dimension, k_norm: f64, s: f64) -> Result<f64> {
    let c = farfield_constant(dimension, k_norm)?;
    let d = dimension.as_usize() as f64;
    Ok(libm::pow(2.0 * core::f64::consts::PI, d) / c.modulus() * libm::pow(s, (d - 1.0) / 2.0))
}

/// Result of the |R⁺|² → |ψ⁺|² reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiSqEstimate {
    /// Estimate at the largest sample radius (no extrapolation).
    pub value: f64,
    /// Absolute difference between the two largest-radius estimates — an
    /// empirical error bar for the O(1/s) remainder.
    pub defect: f64,
    /// All (s, scaled estimate) pairs, in increasing s.
    pub per_radius: Vec<(f64, f64)>,
}

/// Estimates |ψ⁺(x′, k)|² from point-source intensities
/// |R⁺(−s k̂, x′, E)|² sampled at increasing radii `samples = (s, |R⁺|²)`.
///
/// Needs at least two radii, all at least twice the support radius.
pub fn psi_sq_from_resolvent(
    dimension: Dimension,
    k: &Vector,
    samples: &[(f64, f64)],
    support_radius: f64,
) -> Result<PsiSqEstimate> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: samples.len(),
        });
    }
    let k_norm = k.norm();
    let mut prev = f64::NEG_INFINITY;
    for &(s, r_sq) in samples {
        if s < 2.0 * support_radius {
            return Err(Error::Invalid {
                what: format!(
                    "sample radius {s} must be at least twice the support radius {support_radius}"
                ),
            });
        }
        if s <= prev {
            return Err(Error::Invalid {
                what: format!("sample radii must be strictly increasing (at s = {s})"),
            });
        }
        if !r_sq.is_finite() || r_sq < 0.0 {
            return Err(Error::Invalid {
                what: format!("|R|^2 sample at s = {s} must be finite and >= 0"),
            });
        }
        prev = s;
    }
    let per_radius: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(s, r_sq)| Ok((s, psi_sq_scale(dimension, k_norm, s)? * r_sq)))
        .collect::<Result<_>>()?;
    let last = per_radius[per_radius.len() - 1].1;
    let prev = per_radius[per_radius.len() - 2].1;
    Ok(PsiSqEstimate {
        value: last,
        defect: libm::fabs(last - prev),
        per_radius,
    })
}
