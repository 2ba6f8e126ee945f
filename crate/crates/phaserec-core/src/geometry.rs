//! Small fixed-dimension vectors for points, wave vectors, and directions.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use alloc::format;

use crate::{Error, Result};

/// Spatial dimension of the scattering problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub const fn as_usize(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(Error::Invalid {
                what: format!("dimension must be 2 or 3, got {d}"),
            }),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_usize())
    }
}

/// A point or wave vector in 2 or 3 dimensions.
///
/// 2-D vectors carry a zero third component, so dot products and norms are
/// dimension-independent; the tag is kept for interface validation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector {
    x: f64,
    y: f64,
    z: f64,
    dim: Dimension,
}

impl Vector {
    pub const fn new2(x: f64, y: f64) -> Self {
        Vector {
            x,
            y,
            z: 0.0,
            dim: Dimension::Two,
        }
    }

    pub const fn new3(x: f64, y: f64, z: f64) -> Self {
        Vector {
            x,
            y,
            z,
            dim: Dimension::Three,
        }
    }

    pub const fn zero(dim: Dimension) -> Self {
        Vector {
            x: 0.0,
            y: 0.0,
            z: 0.0,
            dim,
        }
    }

    /// Builds a vector from a coordinate slice whose length must match the
    /// dimension.
    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        match coords {
            [x, y] => Ok(Vector::new2(*x, *y)),
            [x, y, z] => Ok(Vector::new3(*x, *y, *z)),
            _ => Err(Error::Invalid {
                what: format!("coordinate list must have length 2 or 3, got {}", coords.len()),
            }),
        }
    }

    pub const fn dim(&self) -> Dimension {
        self.dim
    }

    pub const fn x(&self) -> f64 {
        self.x
    }

    pub const fn y(&self) -> f64 {
        self.y
    }

    pub const fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    /// Unit vector along `self`; domain error for the zero vector.
    pub fn normalized(&self) -> Result<Vector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Domain {
                what: "cannot normalize the zero vector",
            });
        }
        Ok(*self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        Vector {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            z: self.z + rhs.z,
            dim: self.dim,
        }
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        Vector {
            x: self.x - rhs.x,
            y: self.y - rhs.y,
            z: self.z - rhs.z,
            dim: self.dim,
        }
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        Vector {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
            dim: self.dim,
        }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self * -1.0
    }
}
