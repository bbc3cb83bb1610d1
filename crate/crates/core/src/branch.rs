//! Points of the Riemann surface of the logarithm and branch-aware complex
//! powers.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(r, theta, n)` of the log surface: modulus `r > 0`, principal
/// angle `theta` in `(-pi, pi]` and sheet index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBranchPoint")]
pub struct BranchPoint {
    r: f64,
    theta: f64,
    n: i64,
}

#[derive(Deserialize)]
struct RawBranchPoint {
    r: f64,
    #[serde(default)]
    theta: f64,
    #[serde(default)]
    n: i64,
}

impl TryFrom<RawBranchPoint> for BranchPoint {
    type Error = Error;

    fn try_from(raw: RawBranchPoint) -> Result<Self> {
        BranchPoint::new(raw.r, raw.theta, raw.n)
    }
}

impl BranchPoint {
    pub fn new(r: f64, theta: f64, n: i64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidInput(format!(
                "branch point modulus {r} must be positive"
            )));
        }
        if !(theta > -PI && theta <= PI) {
            return Err(Error::InvalidInput(format!(
                "branch point angle {theta} outside (-pi, pi]"
            )));
        }
        Ok(Self { r, theta, n })
    }

    /// The point over `z != 0` on sheet `n`.
    pub fn from_complex(z: Complex64, n: i64) -> Result<Self> {
        let mut theta = z.im.atan2(z.re);
        if theta <= -PI {
            theta = PI;
        }
        Self::new(z.norm(), theta, n)
    }

    /// The point whose logarithm is `log`.
    pub fn from_log(log: Complex64) -> Result<Self> {
        let turns = ((log.im + PI) / (2.0 * PI)).floor();
        let mut theta = log.im - 2.0 * PI * turns;
        let mut n = turns as i64;
        if theta <= -PI {
            theta += 2.0 * PI;
            n -= 1;
        }
        if theta > PI {
            theta -= 2.0 * PI;
            n += 1;
        }
        Self::new(log.re.exp(), theta, n)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn sheet(&self) -> i64 {
        self.n
    }

    /// `ln r + i theta + 2 pi i n`.
    pub fn log(&self) -> Complex64 {
        Complex64::new(self.r.ln(), self.theta + 2.0 * PI * self.n as f64)
    }

    /// The image `z^1` in the complex plane.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// `z^gamma = exp(gamma ln r + i gamma theta + 2 pi i n gamma)`.
pub fn branch_pow(z: &BranchPoint, gamma: Complex64) -> Complex64 {
    (gamma * z.log()).exp()
}
