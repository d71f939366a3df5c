use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point `(u, v)` of phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub u: f64,
    pub v: f64,
}

impl State {
    pub const fn new(u: f64, v: f64) -> Self {
        State { u, v }
    }

    /// Rejects NaN and infinite coordinates.
    pub fn checked(u: f64, v: f64) -> Result<Self> {
        if u.is_finite() && v.is_finite() {
            Ok(State { u, v })
        } else {
            Err(Error::Invalid(format!("non-finite state ({u}, {v})")))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.u, self.v]
    }

    pub fn flux(&self) -> Flux {
        flux(*self)
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        eigenvalues(*self)
    }
}

impl From<[f64; 2]> for State {
    fn from(a: [f64; 2]) -> Self {
        State::new(a[0], a[1])
    }
}

/// Physical flux `(u^2 - v, u^3/3 - u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flux {
    pub f1: f64,
    pub f2: f64,
}

/// A constant state with a point delta of strength `zeta` in `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaState {
    pub state: State,
    pub zeta: f64,
}

impl DeltaState {
    pub fn new(state: State, zeta: f64) -> Result<Self> {
        if !(zeta >= 0.0) || !zeta.is_finite() {
            return Err(Error::Invalid(format!("delta strength must be >= 0, got {zeta}")));
        }
        Ok(DeltaState { state, zeta })
    }

    pub fn plain(state: State) -> Self {
        DeltaState { state, zeta: 0.0 }
    }
}

#[inline]
pub fn g(u: f64) -> f64 {
    u * u * u / 3.0 - u
}

pub fn flux(s: State) -> Flux {
    Flux { f1: s.u * s.u - s.v, f2: g(s.u) }
}

/// Characteristic speeds `(u - 1, u + 1)`.
pub fn eigenvalues(s: State) -> (f64, f64) {
    (s.u - 1.0, s.u + 1.0)
}

#[inline]
pub fn lambda1(s: State) -> f64 {
    s.u - 1.0
}

#[inline]
pub fn lambda2(s: State) -> f64 {
    s.u + 1.0
}

/// Jump bracket `[q] = right - left`.
#[inline]
pub fn jump(left: f64, right: f64) -> f64 {
    right - left
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jacobian_eigs(s: State, h: f64) -> (f64, f64) {
        let d = |ds: State| {
            let p = flux(State::new(s.u + ds.u, s.v + ds.v));
            let m = flux(State::new(s.u - ds.u, s.v - ds.v));
            ((p.f1 - m.f1) / (2.0 * h), (p.f2 - m.f2) / (2.0 * h))
        };
        let (a11, a21) = d(State::new(h, 0.0));
        let (a12, a22) = d(State::new(0.0, h));
        let tr = a11 + a22;
        let det = a11 * a22 - a12 * a21;
        let disc = (tr * tr / 4.0 - det).sqrt();
        (tr / 2.0 - disc, tr / 2.0 + disc)
    }

    #[test]
    fn flux_values() {
        assert_eq!(flux(State::new(0.0, 0.0)), Flux { f1: 0.0, f2: 0.0 });
        assert_eq!(flux(State::new(1.0, 0.0)), Flux { f1: 1.0, f2: 1.0 / 3.0 - 1.0 });
        let f = flux(State::new(-4.0, 6.0));
        assert_eq!(f.f1, 10.0);
        assert!((f.f2 - (-64.0 / 3.0 + 4.0)).abs() < 1e-14);
    }

    #[test]
    fn eigenvalue_values() {
        assert_eq!(eigenvalues(State::new(0.0, 0.0)), (-1.0, 1.0));
        assert_eq!(eigenvalues(State::new(3.0, 7.0)), (2.0, 4.0));
        assert_eq!(eigenvalues(State::new(-4.0, 1.0)), (-5.0, -3.0));
        // independent Jacobian route
        let (l1, l2) = jacobian_eigs(State::new(3.0, 7.0), 1e-6);
        assert!((l1 - 2.0).abs() < 1e-6 && (l2 - 4.0).abs() < 1e-6);
    }

    #[test]
    fn jump_is_right_minus_left() {
        assert_eq!(jump(0.0, 6.0), 6.0);
        assert_eq!(jump(1.0, 1.0), 0.0);
        assert_eq!(jump(4.0, -4.0), -8.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(State::checked(f64::NAN, 0.0).is_err());
        assert!(DeltaState::new(State::new(0.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn jacobian_eigenvalues_match_on_random_states() {
        // deterministic LCG; 100 states in [-5, 5]^2
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 10.0 - 5.0
        };
        for _ in 0..100 {
            let s = State::new(next(), next());
            let (l1, l2) = eigenvalues(s);
            assert!((l2 - l1 - 2.0).abs() <= 4.0 * f64::EPSILON);
            let (n1, n2) = jacobian_eigs(s, 1e-6);
            assert!((l1 - n1).abs() < 1e-6, "{s:?}");
            assert!((l2 - n2).abs() < 1e-6, "{s:?}");
        }
    }
}
