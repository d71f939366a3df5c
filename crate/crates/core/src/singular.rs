//! Singular-shock algebra.
//!
//! A singular shock from `left = (u0, v0)` to `right = (u1, v1)` moves with
//! the speed given by the first jump condition and carries a delta in `v`
//! whose strength grows at the rate `k = c[v] - [u^3/3 - u]` (brackets are
//! right minus left). The strength is split between the two sides of the
//! front with weights `a0 = (u0 - c)/(u0 - u1)` and `a1 = (c - u1)/(u0 - u1)`.

use serde::{Deserialize, Serialize};

use crate::states::{g, jump, lambda1, lambda2, State};
use crate::{Error, Result};

const DEGENERATE_JUMP: f64 = 1e-14;
const NEGATIVE_STRENGTH_TOL: f64 = 1e-12;

/// A space-time point `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub t: f64,
}

impl Point {
    pub const fn new(x: f64, t: f64) -> Self {
        Point { x, t }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularShock {
    pub left: State,
    pub right: State,
    pub speed: f64,
    /// Strength at the birth time.
    pub zeta0: f64,
    pub k: f64,
    pub birth: Point,
    pub alpha0_sq_per_beta: f64,
    pub alpha1_sq_per_beta: f64,
}

impl SingularShock {
    /// Builds the wave from its two states. Fails if the speed does not lie
    /// in `[u1, u0]`, where the split coefficients would be negative.
    pub fn new(left: State, right: State, zeta0: f64, birth: Point) -> Result<Self> {
        let speed = shock_speed(left, right)?;
        let k = growth_rate(left, right)?;
        let (a0, a1) = alpha_split(left, right, speed)?;
        if !(zeta0 >= 0.0) {
            return Err(Error::Invalid(format!("initial strength {zeta0} < 0")));
        }
        Ok(SingularShock {
            left,
            right,
            speed,
            zeta0,
            k,
            birth,
            alpha0_sq_per_beta: a0,
            alpha1_sq_per_beta: a1,
        })
    }

    pub fn position(&self, t: f64) -> f64 {
        self.birth.x + self.speed * (t - self.birth.t)
    }

    pub fn strength_at(&self, t: f64) -> Result<f64> {
        strength_at(self, t)
    }

    pub fn vanish_time(&self) -> Option<f64> {
        vanish_time(self)
    }

    pub fn is_overcompressive(&self) -> bool {
        is_overcompressive(self.left, self.right, self.speed)
    }
}

/// Speed from the first jump condition, `[u^2 - v] / [u]`.
pub fn shock_speed(left: State, right: State) -> Result<f64> {
    let du = jump(left.u, right.u);
    if du.abs() < DEGENERATE_JUMP {
        return Err(Error::DegenerateJump { u: left.u });
    }
    Ok(jump(left.u * left.u - left.v, right.u * right.u - right.v) / du)
}

/// Rankine–Hugoniot deficiency of the second equation, `c[v] - [u^3/3 - u]`.
pub fn growth_rate(left: State, right: State) -> Result<f64> {
    let c = shock_speed(left, right)?;
    Ok(deficiency(left, right, c))
}

/// Second-equation deficiency for a given front speed.
#[inline]
pub fn deficiency(left: State, right: State, c: f64) -> f64 {
    c * jump(left.v, right.v) - jump(g(left.u), g(right.u))
}

/// Split coefficients `(a0, a1)` with `alpha0^2 = a0 beta`, `alpha1^2 = a1 beta`.
pub fn alpha_split(left: State, right: State, c: f64) -> Result<(f64, f64)> {
    let (u0, u1) = (left.u, right.u);
    if !(u0 > u1) || c < u1 || c > u0 {
        return Err(Error::NotRepresentable { c, u0, u1 });
    }
    let w = u0 - u1;
    let a0 = (u0 - c) / w;
    Ok((a0, 1.0 - a0))
}

/// `lambda1(left) >= c >= lambda2(right)`.
pub fn is_overcompressive(left: State, right: State, c: f64) -> bool {
    lambda1(left) >= c && c >= lambda2(right)
}

pub fn strength_at(ss: &SingularShock, t: f64) -> Result<f64> {
    let beta = ss.zeta0 + ss.k * (t - ss.birth.t);
    if beta < -NEGATIVE_STRENGTH_TOL {
        return Err(Error::NegativeStrength { t, beta });
    }
    Ok(beta.max(0.0))
}

/// Time at which a decaying strength reaches zero.
pub fn vanish_time(ss: &SingularShock) -> Option<f64> {
    if ss.k < 0.0 {
        Some(ss.birth.t - ss.zeta0 / ss.k)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const O: State = State::new(0.0, 0.0);

    #[test]
    fn speed_examples() {
        assert_eq!(shock_speed(State::new(1.0, 0.0), State::new(3.0, 4.0)).unwrap(), 2.0);
        assert_eq!(shock_speed(O, State::new(-4.0, 6.0)).unwrap(), -2.5);
        assert_eq!(shock_speed(State::new(1.0, 0.0), State::new(-1.0, 0.0)).unwrap(), 0.0);
        assert!(matches!(shock_speed(O, State::new(0.0, 1.0)), Err(Error::DegenerateJump { .. })));
    }

    #[test]
    fn growth_rate_examples() {
        let k = growth_rate(O, State::new(-4.0, 6.0)).unwrap();
        assert!((k - 7.0 / 3.0).abs() < 1e-14);
        let j = State::new(-3.2, crate::curves::hugoniot_v(O, -3.2, crate::curves::Branch::Plus).unwrap());
        assert!(growth_rate(O, j).unwrap().abs() < 1e-10);
        // strictly inside the Hugoniot loop the strength decays
        let k = growth_rate(O, State::new(-3.2, 5.0)).unwrap();
        assert!(k < 0.0);
        assert!((k - (-11.3875 + 32.768 / 3.0)).abs() < 1e-12, "{k}");
    }

    #[test]
    fn alpha_split_examples() {
        let r = State::new(-4.0, 6.0);
        let (a0, a1) = alpha_split(O, r, -2.5).unwrap();
        assert_eq!((a0, a1), (0.625, 0.375));
        // back substitution with beta = 1
        assert!((a0 + a1 - 1.0).abs() < 1e-15);
        assert!((r.u * a0 + O.u * a1 - (-2.5)).abs() < 1e-15);
        assert_eq!(alpha_split(O, r, 0.0).unwrap(), (0.0, 1.0));
        assert_eq!(alpha_split(O, r, -4.0).unwrap(), (1.0, 0.0));
        assert!(matches!(alpha_split(O, r, 0.5), Err(Error::NotRepresentable { .. })));
    }

    #[test]
    fn overcompressive_examples() {
        assert!(is_overcompressive(O, State::new(-4.0, 6.0), -2.5));
        for c in [-3.0, -2.0, -1.0, 0.0] {
            assert!(!is_overcompressive(O, State::new(-1.0, 0.5), c));
        }
        assert!(is_overcompressive(O, State::new(-4.0, 6.0), -1.0));
    }

    #[test]
    fn strength_and_vanish() {
        let mut ss = SingularShock::new(O, State::new(-4.0, 6.0), 0.0, Point::new(0.0, 0.0)).unwrap();
        assert!((ss.strength_at(3.0).unwrap() - 7.0).abs() < 1e-13);
        assert_eq!(ss.vanish_time(), None);
        ss.zeta0 = 1.0;
        ss.k = 0.0;
        assert_eq!(ss.strength_at(17.0).unwrap(), 1.0);
        ss.k = -2.0;
        assert_eq!(ss.strength_at(0.5).unwrap(), 0.0);
        assert_eq!(ss.vanish_time(), Some(0.5));
        assert!(matches!(ss.strength_at(1.0), Err(Error::NegativeStrength { .. })));
        ss.zeta0 = 0.0;
        ss.k = -1.0;
        ss.birth.t = 2.0;
        assert_eq!(ss.vanish_time(), Some(2.0));
    }
}
