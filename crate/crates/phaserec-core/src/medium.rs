//! Compactly supported scattering potentials and their grid discretizations.
//!
//! Every potential vanishes identically outside its support ball of radius
//! `support_radius`; the solvers rely on that exact compact support.

use alloc::format;
use alloc::vec::Vec;

use crate::geometry::{Dimension, Vector};
use crate::{Error, Result};

/// A Gaussian bump of a composite potential.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub amplitude: f64,
    pub center: Vector,
    pub width: f64,
}

/// Parametric families of scatterers.
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialKind {
    /// Constant value `amplitude` on the disc (2-D) or ball (3-D) of the
    /// given radius, zero outside.
    DiscConstant { amplitude: f64, radius: f64 },
    /// amplitude * exp(-|x|^2 / (2 width^2)), hard-clipped to zero outside
    /// the support ball.
    TruncatedGaussian { amplitude: f64, width: f64 },
    /// Sum of Gaussian bumps centered strictly inside the support ball,
    /// hard-clipped at the support boundary.
    SumOfBumps { bumps: Vec<Bump> },
}

/// A real, bounded potential with compact support inside the ball of radius
/// `support_radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    dimension: Dimension,
    kind: PotentialKind,
    support_radius: f64,
}

impl Potential {
    pub fn new(dimension: Dimension, kind: PotentialKind, support_radius: f64) -> Result<Self> {
        if !support_radius.is_finite() || support_radius <= 0.0 {
            return Err(Error::Invalid {
                what: format!("support_radius must be finite and > 0, got {support_radius}"),
            });
        }
        match &kind {
            PotentialKind::DiscConstant { amplitude, radius } => {
                if !amplitude.is_finite() {
                    return Err(Error::Invalid {
                        what: format!("disc amplitude must be finite, got {amplitude}"),
                    });
                }
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::Invalid {
                        what: format!("disc radius must be finite and > 0, got {radius}"),
                    });
                }
                if *radius > support_radius {
                    return Err(Error::Invalid {
                        what: format!(
                            "disc radius {radius} exceeds support_radius {support_radius}"
                        ),
                    });
                }
            }
            PotentialKind::TruncatedGaussian { amplitude, width } => {
                if !amplitude.is_finite() {
                    return Err(Error::Invalid {
                        what: format!("gaussian amplitude must be finite, got {amplitude}"),
                    });
                }
                if !width.is_finite() || *width <= 0.0 {
                    return Err(Error::Invalid {
                        what: format!("gaussian width must be finite and > 0, got {width}"),
                    });
                }
            }
            PotentialKind::SumOfBumps { bumps } => {
                for (i, bump) in bumps.iter().enumerate() {
                    if !bump.amplitude.is_finite() || !bump.width.is_finite() || bump.width <= 0.0
                    {
                        return Err(Error::Invalid {
                            what: format!("bump {i} has non-finite or non-positive parameters"),
                        });
                    }
                    if bump.center.dim() != dimension {
                        return Err(Error::DimensionMismatch {
                            expected: dimension,
                            got: bump.center.dim(),
                        });
                    }
                    if !bump.center.is_finite() || bump.center.norm() >= support_radius {
                        return Err(Error::Invalid {
                            what: format!(
                                "bump {i} center must lie strictly inside the support ball"
                            ),
                        });
                    }
                }
            }
        }
        Ok(Potential {
            dimension,
            kind,
            support_radius,
        })
    }

    /// The zero potential on a support ball; useful as the free-space case.
    pub fn zero(dimension: Dimension, support_radius: f64) -> Result<Self> {
        Potential::new(
            dimension,
            PotentialKind::DiscConstant {
                amplitude: 0.0,
                radius: support_radius,
            },
            support_radius,
        )
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    /// Pointwise value; exactly zero for |x| >= support_radius.
    pub fn evaluate(&self, x: &Vector) -> f64 {
        debug_assert_eq!(x.dim(), self.dimension);
        let r = x.norm();
        if r >= self.support_radius {
            return 0.0;
        }
        match &self.kind {
            PotentialKind::DiscConstant { amplitude, radius } => {
                if r < *radius {
                    *amplitude
                } else {
                    0.0
                }
            }
            PotentialKind::TruncatedGaussian { amplitude, width } => {
                amplitude * libm::exp(-r * r / (2.0 * width * width))
            }
            PotentialKind::SumOfBumps { bumps } => bumps
                .iter()
                .map(|b| {
                    let d2 = (*x - b.center).norm_sq();
                    b.amplitude * libm::exp(-d2 / (2.0 * b.width * b.width))
                })
                .sum(),
        }
    }
}

/// An acoustic medium converted to potential form: v(x) = (1 - n^2(x)) (omega/c0)^2
/// at energy E = (omega/c0)^2.
#[derive(Clone, Debug, PartialEq)]
pub struct AcousticMedium {
    pub potential: Potential,
    pub energy: f64,
}

/// A constant-index inclusion: refraction index `n_inside` on the disc/ball
/// of the given radius, 1 outside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefractionIndex {
    pub n_inside: f64,
    pub radius: f64,
}

/// Converts a constant-index acoustic inclusion at frequency `omega` and
/// reference sound speed `c0` into a scattering potential and its energy.
///
/// The index must be 1 on and outside the support boundary shell, so the
/// inclusion radius may not exceed the support radius.
pub fn acoustic_to_potential(
    dimension: Dimension,
    index: RefractionIndex,
    omega: f64,
    c0: f64,
    support_radius: f64,
) -> Result<AcousticMedium> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Invalid {
            what: format!("omega must be finite and > 0, got {omega}"),
        });
    }
    if !c0.is_finite() || c0 <= 0.0 {
        return Err(Error::Invalid {
            what: format!("c0 must be finite and > 0, got {c0}"),
        });
    }
    if !index.n_inside.is_finite() {
        return Err(Error::Invalid {
            what: format!("refraction index must be finite, got {}", index.n_inside),
        });
    }
    if index.radius > support_radius {
        return Err(Error::Invalid {
            what: format!(
                "index inclusion radius {} exceeds support_radius {}; n must equal 1 on the support boundary shell",
                index.radius, support_radius
            ),
        });
    }
    let energy = (omega / c0) * (omega / c0);
    let amplitude = (1.0 - index.n_inside * index.n_inside) * energy;
    let potential = Potential::new(
        dimension,
        PotentialKind::DiscConstant {
            amplitude,
            radius: index.radius,
        },
        support_radius,
    )?;
    Ok(AcousticMedium { potential, energy })
}

/// Midpoint discretization of the support ball: cells tile the bounding
/// cube [-r, r]^d, the active set keeps cells whose center lies strictly
/// inside the ball, and v is sampled at cell centers.
#[derive(Clone, Debug)]
pub struct GridDiscretization {
    potential: Potential,
    cells_per_side: u32,
    centers: Vec<Vector>,
    v_values: Vec<f64>,
    spacing: f64,
    cell_volume: f64,
}

/// Builds the midpoint grid for a potential. `cells_per_side >= 4`.
pub fn discretize(potential: &Potential, cells_per_side: u32) -> Result<GridDiscretization> {
    if cells_per_side < 4 {
        return Err(Error::Invalid {
            what: format!("cells_per_side must be >= 4, got {cells_per_side}"),
        });
    }
    let r = potential.support_radius();
    let n = cells_per_side as usize;
    let h = 2.0 * r / cells_per_side as f64;
    let coord = |i: usize| -r + (i as f64 + 0.5) * h;
    let mut centers = Vec::new();
    match potential.dimension() {
        Dimension::Two => {
            for i in 0..n {
                for j in 0..n {
                    let c = Vector::new2(coord(i), coord(j));
                    if c.norm() < r {
                        centers.push(c);
                    }
                }
            }
        }
        Dimension::Three => {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let c = Vector::new3(coord(i), coord(j), coord(k));
                        if c.norm() < r {
                            centers.push(c);
                        }
                    }
                }
            }
        }
    }
    let v_values = centers.iter().map(|c| potential.evaluate(c)).collect();
    let cell_volume = libm::pow(h, potential.dimension().as_usize() as f64);
    Ok(GridDiscretization {
        potential: potential.clone(),
        cells_per_side,
        centers,
        v_values,
        spacing: h,
        cell_volume,
    })
}

impl GridDiscretization {
    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn dimension(&self) -> Dimension {
        self.potential.dimension()
    }

    pub fn support_radius(&self) -> f64 {
        self.potential.support_radius()
    }

    pub fn cells_per_side(&self) -> u32 {
        self.cells_per_side
    }

    /// Centers of the active cells (strictly inside the support ball).
    pub fn cell_centers(&self) -> &[Vector] {
        &self.centers
    }

    /// Potential values at the active cell centers.
    pub fn v_values(&self) -> &[f64] {
        &self.v_values
    }

    pub fn active_len(&self) -> usize {
        self.centers.len()
    }

    /// Cell edge length h = 2r / cells_per_side.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Cell volume h^d.
    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    /// Discrete integral of the potential over the support.
    pub fn discrete_mass(&self) -> f64 {
        self.v_values.iter().sum::<f64>() * self.cell_volume
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(amplitude: f64, radius: f64, support: f64) -> Potential {
        Potential::new(
            Dimension::Two,
            PotentialKind::DiscConstant { amplitude, radius },
            support,
        )
        .unwrap()
    }

    #[test]
    fn disc_values() {
        let v = disc(0.5, 1.0, 1.0);
        assert_eq!(v.evaluate(&Vector::new2(0.3, 0.2)), 0.5);
        assert_eq!(v.evaluate(&Vector::new2(2.0, 0.0)), 0.0);
        assert_eq!(v.evaluate(&Vector::new2(0.8, 0.8)), 0.0); // norm > 1
    }

    #[test]
    fn gaussian_peak_is_amplitude() {
        let v = Potential::new(
            Dimension::Three,
            PotentialKind::TruncatedGaussian {
                amplitude: 0.01,
                width: 0.5,
            },
            2.0,
        )
        .unwrap();
        assert_eq!(v.evaluate(&Vector::zero(Dimension::Three)), 0.01);
        assert_eq!(v.evaluate(&Vector::new3(2.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn radius_beyond_support_rejected() {
        let err = Potential::new(
            Dimension::Two,
            PotentialKind::DiscConstant {
                amplitude: 1.0,
                radius: 2.0,
            },
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invalid { .. }));
    }

    #[test]
    fn non_finite_params_rejected() {
        assert!(Potential::new(
            Dimension::Two,
            PotentialKind::DiscConstant {
                amplitude: f64::NAN,
                radius: 1.0
            },
            1.0
        )
        .is_err());
        assert!(Potential::new(
            Dimension::Two,
            PotentialKind::TruncatedGaussian {
                amplitude: 1.0,
                width: 0.0
            },
            1.0
        )
        .is_err());
    }

    #[test]
    fn bump_center_must_be_inside() {
        let err = Potential::new(
            Dimension::Two,
            PotentialKind::SumOfBumps {
                bumps: alloc::vec![Bump {
                    amplitude: 1.0,
                    center: Vector::new2(1.0, 0.0),
                    width: 0.2,
                }],
            },
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invalid { .. }));
    }

    #[test]
    fn acoustic_conversion_arithmetic() {
        // n = 1.1 on a disc, omega/c0 = 1  ->  v = 1 - 1.21 = -0.21
        let m = acoustic_to_potential(
            Dimension::Two,
            RefractionIndex {
                n_inside: 1.1,
                radius: 1.0,
            },
            1.0,
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(m.energy, 1.0);
        let inside = m.potential.evaluate(&Vector::new2(0.1, 0.0));
        assert!((inside - (-0.21)).abs() < 1e-15);

        // n = 0.9, omega/c0 = 2  ->  v = (1 - 0.81) * 4 = 0.76
        let m = acoustic_to_potential(
            Dimension::Two,
            RefractionIndex {
                n_inside: 0.9,
                radius: 1.0,
            },
            2.0,
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(m.energy, 4.0);
        assert!((m.potential.evaluate(&Vector::new2(0.1, 0.0)) - 0.76).abs() < 1e-15);

        // homogeneous medium: n = 1 -> v = 0
        let m = acoustic_to_potential(
            Dimension::Two,
            RefractionIndex {
                n_inside: 1.0,
                radius: 1.0,
            },
            1.0,
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(m.potential.evaluate(&Vector::new2(0.2, 0.3)), 0.0);
    }

    #[test]
    fn acoustic_inclusion_beyond_support_rejected() {
        assert!(acoustic_to_potential(
            Dimension::Two,
            RefractionIndex {
                n_inside: 1.1,
                radius: 1.5
            },
            1.0,
            1.0,
            1.0
        )
        .is_err());
    }

    #[test]
    fn grid_basic_properties() {
        let v = disc(0.5, 1.0, 1.0);
        let g = discretize(&v, 8).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.cell_volume(), 0.0625);
        // every active center is strictly inside the ball and carries 0.5 or 0
        for (c, val) in g.cell_centers().iter().zip(g.v_values()) {
            assert!(c.norm() < 1.0);
            assert!(*val == 0.5 || *val == 0.0);
        }
        assert!(discretize(&v, 3).is_err());
    }

    #[test]
    fn zero_potential_grid_is_zero() {
        let v = Potential::zero(Dimension::Two, 1.0).unwrap();
        let g = discretize(&v, 8).unwrap();
        assert!(g.v_values().iter().all(|&x| x == 0.0));
    }
}
