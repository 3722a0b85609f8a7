use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::TWO_PI;
use crate::error::{Error, Result};

/// Coin angles `(eta, theta)`.
///
/// `eta` is reduced into `[0, 2pi)`; `theta` must lie in `[0, pi/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    eta: f64,
    theta: f64,
}

impl CoinParams {
    pub fn new(eta: f64, theta: f64) -> Result<Self> {
        if !eta.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coin angles must be finite (eta={eta}, theta={theta})"
            )));
        }
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "theta={theta} outside [0, pi/2]"
            )));
        }
        Ok(Self {
            eta: reduce_angle(eta),
            theta,
        })
    }

    /// The Hadamard coin, `(0, pi/4)`.
    pub fn hadamard() -> Self {
        Self {
            eta: 0.0,
            theta: PI / 4.0,
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Bloch-sphere angles `(phi, omega)` of the initial spinor at site 0.
///
/// `phi` is reduced into `[0, 2pi)`; `omega` must lie in `[-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitParams {
    phi: f64,
    omega: f64,
}

impl InitParams {
    pub fn new(phi: f64, omega: f64) -> Result<Self> {
        if !phi.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "initial-state angles must be finite (phi={phi}, omega={omega})"
            )));
        }
        if !(-PI..=PI).contains(&omega) {
            return Err(Error::InvalidParameter(format!(
                "omega={omega} outside [-pi, pi]"
            )));
        }
        let params = Self {
            phi: reduce_angle(phi),
            omega,
        };
        let (up, down) = params.spinor();
        debug_assert!((up.norm_sqr() + down.norm_sqr() - 1.0).abs() <= 1e-15);
        Ok(params)
    }

    /// Pure up spinor, `(0, 0)`.
    pub fn up() -> Self {
        Self {
            phi: 0.0,
            omega: 0.0,
        }
    }

    /// `(|up> + i|down>)/sqrt(2)`, the initial state that makes the Hadamard
    /// walk symmetric.
    pub fn symmetric() -> Self {
        Self {
            phi: FRAC_PI_2,
            omega: FRAC_PI_2,
        }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `(cos(omega/2), e^{i phi} sin(omega/2))`.
    pub fn spinor(&self) -> (C64, C64) {
        let half = 0.5 * self.omega;
        (
            C64::new(half.cos(), 0.0),
            C64::from_polar(1.0, self.phi) * half.sin(),
        )
    }
}

fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TWO_PI);
    // rem_euclid can round up to exactly 2pi for tiny negative inputs
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// A 2x2 complex coin matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coin(pub [[C64; 2]; 2]);

impl Coin {
    /// Largest entry of `|U U^dagger - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let u = &self.0;
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let dot = u[r][0] * u[c][0].conj() + u[r][1] * u[c][1].conj();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    #[inline]
    pub(crate) fn apply(&self, up: C64, down: C64) -> (C64, C64) {
        let u = &self.0;
        (u[0][0] * up + u[0][1] * down, u[1][0] * up + u[1][1] * down)
    }
}

/// `[[e^{i eta} cos theta, sin theta], [sin theta, -e^{-i eta} cos theta]]`.
pub fn coin_matrix(params: CoinParams) -> Coin {
    let (s, c) = params.theta.sin_cos();
    let phase = C64::from_polar(1.0, params.eta);
    Coin([
        [phase * c, C64::new(s, 0.0)],
        [C64::new(s, 0.0), -phase.conj() * c],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn assert_close(coin: Coin, expected: [[f64; 2]; 2]) {
        for (r, row) in expected.iter().enumerate() {
            for (c, &want) in row.iter().enumerate() {
                let d = coin.0[r][c] - C64::new(want, 0.0);
                assert!(d.norm() < 1e-15, "entry ({r},{c}) = {}", coin.0[r][c]);
            }
        }
    }

    #[test]
    fn limiting_coins() {
        let h = coin_matrix(CoinParams::new(0.0, PI / 4.0).unwrap());
        assert_close(
            h,
            [
                [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
                [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
            ],
        );
        let z = coin_matrix(CoinParams::new(0.0, 0.0).unwrap());
        assert_close(z, [[1.0, 0.0], [0.0, -1.0]]);
        let x = coin_matrix(CoinParams::new(0.0, FRAC_PI_2).unwrap());
        assert_close(x, [[0.0, 1.0], [1.0, 0.0]]);
    }

    #[test]
    fn angle_validation() {
        assert!(CoinParams::new(0.0, -1e-9).is_err());
        assert!(CoinParams::new(0.0, FRAC_PI_2 + 1e-9).is_err());
        assert!(CoinParams::new(f64::NAN, 0.1).is_err());
        assert!(InitParams::new(0.0, PI + 1e-9).is_err());
        assert!(InitParams::new(0.0, -PI).is_ok());

        let c = CoinParams::new(-0.5, 0.3).unwrap();
        assert!((c.eta() - (TWO_PI - 0.5)).abs() < 1e-15);
        let c = CoinParams::new(7.0, 0.3).unwrap();
        assert!((c.eta() - (7.0 - TWO_PI)).abs() < 1e-15);
        let i = InitParams::new(-1e-300, 0.0).unwrap();
        assert!(i.phi() < TWO_PI);
    }

    #[test]
    fn spinor_poles() {
        let (a, b) = InitParams::up().spinor();
        assert_eq!((a, b), (C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
        let (a, b) = InitParams::new(0.0, PI).unwrap().spinor();
        assert!(a.norm() < 1e-16);
        assert!((b - C64::new(1.0, 0.0)).norm() < 1e-15);
        let (a, b) = InitParams::symmetric().spinor();
        assert!((a - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((b - C64::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn non_unitary_detected() {
        let bad = Coin([
            [C64::new(1.0, 0.0), C64::new(0.1, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
        assert!(bad.unitarity_deviation() > 0.09);
    }
}
