//! Wave curves through a base state and classification of right states.
//!
//! For a base (left) state `(u0, v0)` the relevant curves are
//!
//! * the Hugoniot locus, split into the `plus` branch (label `S1`) and the
//!   `minus` branch (label `S2`); for `u < u0` the plus branch is the lower one;
//! * the rarefaction curves `R1`, `R2`;
//! * `D` (wave speed equals `lambda1` of the base) and `E` (wave speed equals
//!   `lambda2` of the right state). Between them a discontinuity is
//!   overcompressive.
//!
//! The growth rate of a singular shock is a quadratic in `v` at fixed `u`
//! whose roots are the two Hugoniot branches, so it is negative strictly
//! inside the closed Hugoniot loop and positive outside. The part of the loop
//! with `u in [u0 - sqrt(12), u0 - 3]` is the zero-growth locus `J1`.

use serde::{Deserialize, Serialize};

use crate::states::State;
use crate::{Error, Result};

pub const SQRT12: f64 = 3.464_101_615_137_754_6;

/// Relative tolerance for region membership.
pub const REGION_TOL: f64 = 1e-9;
const DOMAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    One,
    Two,
}

impl Family {
    pub fn index(self) -> u8 {
        match self {
            Family::One => 1,
            Family::Two => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveId {
    S1,
    S2,
    R1,
    R2,
    R1Inv,
    R2Inv,
    D,
    E,
    /// 1-rarefaction curve from `G~`.
    J,
    /// 2-rarefaction curve from `D~`.
    J2,
}

impl CurveId {
    /// Evaluates the curve at `u`, with `base` the base state of the curve
    /// (the right state for the inverse rarefaction curves).
    pub fn eval(self, base: State, u: f64) -> Result<f64> {
        Ok(match self {
            CurveId::S1 => hugoniot_v(base, u, Branch::Plus)?,
            CurveId::S2 => hugoniot_v(base, u, Branch::Minus)?,
            CurveId::R1 => rarefaction_v(base, u, Family::One),
            CurveId::R2 => rarefaction_v(base, u, Family::Two),
            CurveId::R1Inv => inverse_rarefaction_v(base, u, Family::One),
            CurveId::R2Inv => inverse_rarefaction_v(base, u, Family::Two),
            CurveId::D => curve_d_v(base, u),
            CurveId::E => curve_e_v(base, u),
            CurveId::J => rarefaction_v(locus_points(base).g_tilde, u, Family::One),
            CurveId::J2 => rarefaction_v(locus_points(base).d_tilde, u, Family::Two),
        })
    }
}

/// Hugoniot locus of `base` at `u`.
pub fn hugoniot_v(base: State, u: f64, branch: Branch) -> Result<f64> {
    let du = u - base.u;
    let r = 1.0 - du * du / 12.0;
    if r < 0.0 {
        if du.abs() <= SQRT12 + DOMAIN_TOL {
            return Ok(hugoniot_at(base, u, 0.0));
        }
        return Err(Error::Domain { u0: base.u, u });
    }
    let s = r.sqrt();
    Ok(hugoniot_at(base, u, if branch == Branch::Plus { s } else { -s }))
}

#[inline]
fn hugoniot_at(base: State, u: f64, signed_root: f64) -> f64 {
    base.v + (u - base.u) * ((base.u + u) / 2.0 + signed_root)
}

/// Lower and upper Hugoniot values for `u < base.u`, if the locus exists.
pub fn hugoniot_bounds(base: State, u: f64) -> Option<(f64, f64)> {
    let a = hugoniot_v(base, u, Branch::Plus).ok()?;
    let b = hugoniot_v(base, u, Branch::Minus).ok()?;
    Some((a.min(b), a.max(b)))
}

/// Forward rarefaction curve through `base`.
pub fn rarefaction_v(base: State, u: f64, family: Family) -> f64 {
    let sign = match family {
        Family::One => 1.0,
        Family::Two => -1.0,
    };
    base.v - 0.5 * base.u * base.u + 0.5 * u * u + sign * (u - base.u)
}

/// Left states at `u` whose forward rarefaction of `family` reaches `right`.
///
/// Rarefaction curves are integral curves, so this is the forward relation
/// solved for the base: `rarefaction_v(State(u, inverse), right.u) == right.v`.
pub fn inverse_rarefaction_v(right: State, u: f64, family: Family) -> f64 {
    let sign = match family {
        Family::One => 1.0,
        Family::Two => -1.0,
    };
    right.v + 0.5 * (u * u - right.u * right.u) + sign * (u - right.u)
}

/// Curve on which the discontinuity speed equals `lambda1(base)`.
pub fn curve_d_v(base: State, u: f64) -> f64 {
    base.v + u * u + u - base.u * u - base.u
}

/// Curve on which the discontinuity speed equals `lambda2` of the right state.
pub fn curve_e_v(base: State, u: f64) -> f64 {
    base.v - u + base.u * u - base.u * base.u + base.u
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPoints {
    /// `J1` meets `E`.
    pub d_tilde: State,
    /// `J1` meets `D`.
    pub g_tilde: State,
    /// `D` meets `E`.
    pub de_corner: State,
}

pub fn locus_points(base: State) -> LocusPoints {
    let u3 = base.u - 3.0;
    let u2 = base.u - 2.0;
    LocusPoints {
        d_tilde: State::new(u3, base.v - 3.0 * base.u + 3.0),
        g_tilde: State::new(u3, curve_d_v(base, u3)),
        de_corner: State::new(u2, base.v - 2.0 * base.u + 2.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    /// Singular shock with zero initial strength and non-negative growth.
    Q7,
    /// Second delta singular locus minus `Q7` and the named sub-regions.
    SdslOnly,
    AboveD,
    BelowE,
    OnJ1,
    HatD,
    HatHatD,
    HatE,
    HatHatE,
    D0,
    Classical,
}

impl Region {
    pub const ALL: [Region; 11] = [
        Region::Q7,
        Region::SdslOnly,
        Region::AboveD,
        Region::BelowE,
        Region::OnJ1,
        Region::HatD,
        Region::HatHatD,
        Region::HatE,
        Region::HatHatE,
        Region::D0,
        Region::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Region::Q7 => "Q7",
            Region::SdslOnly => "SDSL_ONLY",
            Region::AboveD => "ABOVE_D",
            Region::BelowE => "BELOW_E",
            Region::OnJ1 => "ON_J1",
            Region::HatD => "HAT_D",
            Region::HatHatD => "HAT_HAT_D",
            Region::HatE => "HAT_E",
            Region::HatHatE => "HAT_HAT_E",
            Region::D0 => "D0",
            Region::Classical => "CLASSICAL",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Region::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown region {s}")))
    }
}

/// Values of the bounding curves at `u`, used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveValues {
    pub u: f64,
    pub d: f64,
    pub e: f64,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub r1: f64,
    pub r2: f64,
}

pub fn curve_values(base: State, u: f64) -> CurveValues {
    CurveValues {
        u,
        d: curve_d_v(base, u),
        e: curve_e_v(base, u),
        s1: hugoniot_v(base, u, Branch::Plus).ok(),
        s2: hugoniot_v(base, u, Branch::Minus).ok(),
        r1: rarefaction_v(base, u, Family::One),
        r2: rarefaction_v(base, u, Family::Two),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub region: Region,
    pub base: State,
    pub point: State,
    /// Set when the point lies on a region boundary within tolerance.
    pub boundary: Option<&'static str>,
}

#[inline]
fn tol(a: f64, b: f64) -> f64 {
    REGION_TOL * 1f64.max(a.abs()).max(b.abs())
}

/// `a <= b` within the region tolerance.
#[inline]
fn le(a: f64, b: f64) -> bool {
    a <= b + tol(a, b)
}

/// `a < b` beyond the region tolerance.
#[inline]
fn lt(a: f64, b: f64) -> bool {
    a < b - tol(a, b)
}

/// Point lies in the closed band between `E` and `D` (`D >= E` for `u <= u0 - 2`).
pub fn between_d_and_e(base: State, q: State) -> bool {
    let d = curve_d_v(base, q.u);
    let e = curve_e_v(base, q.u);
    le(d.min(e), q.v) && le(q.v, d.max(e))
}

/// Point lies strictly inside the Hugoniot loop (negative growth rate).
fn inside_loop(base: State, q: State) -> bool {
    if q.u >= base.u {
        return false;
    }
    match hugoniot_bounds(base, q.u) {
        Some((lo, hi)) => lt(lo, q.v) && lt(q.v, hi),
        None => false,
    }
}

fn on_j1(base: State, q: State) -> bool {
    if !(le(base.u - SQRT12, q.u) && le(q.u, base.u - 3.0)) {
        return false;
    }
    let du = (q.u - base.u).max(-SQRT12);
    let u = base.u + du;
    [Branch::Plus, Branch::Minus].into_iter().any(|b| {
        hugoniot_v(base, u, b)
            .map(|h| (h - q.v).abs() <= tol(h, q.v))
            .unwrap_or(false)
    })
}

/// Membership in the second delta singular locus: the band between `E` and
/// `D` for `u <= u0 - 3`, and the inside of the Hugoniot loop for
/// `u0 - 3 <= u <= u0`.
pub fn in_sdsl(base: State, q: State) -> bool {
    if le(q.u, base.u - 3.0) && between_d_and_e(base, q) {
        return true;
    }
    if le(base.u - 3.0, q.u) && le(q.u, base.u) {
        if let Some((lo, hi)) = hugoniot_bounds(base, q.u.min(base.u)) {
            return le(lo, q.v) && le(q.v, hi);
        }
    }
    false
}

/// Above `D` for `u <= u0 - 3`, above `J` (the 1-rarefaction curve from
/// `G~`) for larger `u`: reachable by a 1-rarefaction followed by a
/// singular shock with non-negative growth.
pub fn above_d_or_j(base: State, q: State) -> bool {
    if le(q.u, base.u - 3.0) {
        lt(curve_d_v(base, q.u), q.v)
    } else {
        lt(rarefaction_v(locus_points(base).g_tilde, q.u, Family::One), q.v)
    }
}

/// Below `E` for `u <= u0 - 3`, below `J2` (the 2-rarefaction curve from
/// `D~`) for larger `u`.
pub fn below_e_or_j2(base: State, q: State) -> bool {
    if le(q.u, base.u - 3.0) {
        lt(q.v, curve_e_v(base, q.u))
    } else {
        lt(q.v, rarefaction_v(locus_points(base).d_tilde, q.u, Family::Two))
    }
}

/// Classifies `q` relative to the base state. Boundaries are resolved by a
/// fixed priority order so results are reproducible.
pub fn classify(base: State, q: State) -> Classification {
    let u0 = base.u;
    let d = curve_d_v(base, q.u);
    let e = curve_e_v(base, q.u);
    let band = between_d_and_e(base, q);
    let bounds = if q.u < u0 { hugoniot_bounds(base, q.u) } else { None };
    let inside = inside_loop(base, q);
    let left_of_2 = lt(q.u, u0 - 2.0);
    let right_of_2 = lt(u0 - 2.0, q.u) && lt(q.u, u0);

    let trivial = (q.u - base.u).abs() <= tol(q.u, base.u) && (q.v - base.v).abs() <= tol(q.v, base.v);
    let region = if trivial {
        Region::Classical
    } else if on_j1(base, q) {
        Region::OnJ1
    } else if le(q.u, u0 - 3.0) && band && !inside {
        Region::Q7
    } else if left_of_2 && band && inside {
        Region::D0
    } else if left_of_2 && inside && lt(d, q.v) {
        Region::HatD
    } else if left_of_2 && inside && lt(q.v, e) {
        Region::HatE
    } else if right_of_2 && inside && lt(e, q.v) {
        Region::HatHatD
    } else if right_of_2 && inside && lt(q.v, d) {
        Region::HatHatE
    } else if in_sdsl(base, q) {
        Region::SdslOnly
    } else if above_d_or_j(base, q) {
        Region::AboveD
    } else if below_e_or_j2(base, q) {
        Region::BelowE
    } else {
        Region::Classical
    };

    let corner = locus_points(base).de_corner;
    let near = |a: f64, b: f64| (a - b).abs() <= tol(a, b);
    let boundary = if near(q.u, corner.u) && near(q.v, corner.v) {
        Some("D∩E corner")
    } else if region == Region::OnJ1 {
        Some("J1")
    } else if near(q.v, d) && q.u < u0 {
        Some("D")
    } else if near(q.v, e) && q.u < u0 {
        Some("E")
    } else if let Some((lo, hi)) = bounds {
        if near(q.v, lo) || near(q.v, hi) {
            Some("Hugoniot")
        } else {
            None
        }
    } else {
        None
    };

    Classification { region, base, point: q, boundary }
}

/// Independent strict-inequality predicates for each named region, used to
/// check that the classification is a partition away from boundaries.
pub fn strict_region_predicates(base: State, q: State) -> Vec<Region> {
    let u0 = base.u;
    let (u, v) = (q.u, q.v);
    let d = curve_d_v(base, u);
    let e = curve_e_v(base, u);
    let (lo, hi) = if u < u0 {
        hugoniot_bounds(base, u).unwrap_or((f64::NAN, f64::NAN))
    } else {
        (f64::NAN, f64::NAN)
    };
    let inside = lo < v && v < hi;
    let mut out = Vec::new();
    if u < u0 - 3.0 && e < v && v < d && (u < u0 - SQRT12 || v < lo || v > hi) {
        out.push(Region::Q7);
    }
    if u < u0 - 2.0 && e < v && v < d && inside {
        out.push(Region::D0);
    }
    if u < u0 - 2.0 && d < v && v < hi {
        out.push(Region::HatD);
    }
    if u < u0 - 2.0 && lo < v && v < e {
        out.push(Region::HatE);
    }
    if u0 - 2.0 < u && u < u0 && e < v && v < hi {
        out.push(Region::HatHatD);
    }
    if u0 - 2.0 < u && u < u0 && lo < v && v < d {
        out.push(Region::HatHatE);
    }
    if u0 - 2.0 < u && u < u0 && d < v && v < e {
        out.push(Region::SdslOnly);
    }
    let lp = locus_points(base);
    if (u < u0 - 3.0 && v > d) || (u > u0 - 3.0 && v > rarefaction_v(lp.g_tilde, u, Family::One)) {
        out.push(Region::AboveD);
    }
    if (u < u0 - 3.0 && v < e) || (u > u0 - 3.0 && v < rarefaction_v(lp.d_tilde, u, Family::Two)) {
        out.push(Region::BelowE);
    }
    if out.is_empty() {
        out.push(Region::Classical);
    }
    out
}

/// Smallest distance in `v` from `q` to any region boundary at `q.u`, and
/// distance in `u` to the vertical lines.
pub fn boundary_distance(base: State, q: State) -> f64 {
    let mut dist = f64::INFINITY;
    for x in [base.u - SQRT12, base.u - 3.0, base.u - 2.0, base.u] {
        dist = dist.min((q.u - x).abs());
    }
    let lp = locus_points(base);
    dist = dist.min((q.v - rarefaction_v(lp.g_tilde, q.u, Family::One)).abs());
    dist = dist.min((q.v - rarefaction_v(lp.d_tilde, q.u, Family::Two)).abs());
    dist = dist.min((q.v - curve_d_v(base, q.u)).abs());
    dist = dist.min((q.v - curve_e_v(base, q.u)).abs());
    if let Some((lo, hi)) = hugoniot_bounds(base, q.u) {
        dist = dist.min((q.v - lo).abs()).min((q.v - hi).abs());
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    const O: State = State::new(0.0, 0.0);

    fn rh_residual(base: State, q: State) -> (f64, f64) {
        use crate::states::flux;
        let c = (flux(q).f1 - flux(base).f1) / (q.u - base.u);
        let r2 = c * (q.v - base.v) - (flux(q).f2 - flux(base).f2);
        (c, r2)
    }

    #[test]
    fn hugoniot_examples() {
        assert_eq!(hugoniot_v(O, 0.0, Branch::Plus).unwrap(), 0.0);
        let p = hugoniot_v(O, -2.0, Branch::Plus).unwrap();
        let m = hugoniot_v(O, -2.0, Branch::Minus).unwrap();
        assert!((p - 0.367_006_8).abs() < 1e-7, "{p}");
        assert!((m - 3.632_993_2).abs() < 1e-7, "{m}");
        // both satisfy the second jump condition with the first-component speed
        assert!(rh_residual(O, State::new(-2.0, p)).1.abs() < 1e-12);
        assert!(rh_residual(O, State::new(-2.0, m)).1.abs() < 1e-12);
        assert!(matches!(hugoniot_v(O, -3.5, Branch::Plus), Err(Error::Domain { .. })));
        // branches coincide at the domain edge
        let a = hugoniot_v(O, -SQRT12, Branch::Plus).unwrap();
        let b = hugoniot_v(O, -SQRT12, Branch::Minus).unwrap();
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn rarefaction_examples() {
        assert_eq!(rarefaction_v(O, 2.0, Family::One), 4.0);
        assert_eq!(rarefaction_v(O, 0.0, Family::Two), 0.0);
        assert_eq!(rarefaction_v(State::new(1.0, 1.0), 3.0, Family::Two), 3.0);
    }

    #[test]
    fn inverse_rarefaction_examples() {
        assert_eq!(inverse_rarefaction_v(State::new(2.0, 4.0), 0.0, Family::One), 0.0);
        assert_eq!(inverse_rarefaction_v(O, 0.0, Family::One), 0.0);
        let v = inverse_rarefaction_v(O, -1.0, Family::Two);
        assert_eq!(v, 1.5);
        assert_eq!(rarefaction_v(State::new(-1.0, v), 0.0, Family::Two), 0.0);
    }

    #[test]
    fn d_and_e_examples() {
        assert_eq!(curve_d_v(O, -4.0), 12.0);
        assert_eq!(curve_e_v(O, -4.0), 4.0);
        assert_eq!(curve_d_v(O, 0.0), 0.0);
        assert_eq!(curve_e_v(O, 0.0), 0.0);
        assert_eq!(curve_d_v(O, -2.0), 2.0);
        assert_eq!(curve_e_v(O, -2.0), 2.0);
    }

    #[test]
    fn d_and_e_are_characteristic_speed_curves() {
        let base = State::new(0.7, -1.3);
        for u in [-5.0, -3.1, -1.0] {
            let (c, _) = rh_residual(base, State::new(u, curve_d_v(base, u)));
            assert!((c - (base.u - 1.0)).abs() < 1e-12);
            let (c, _) = rh_residual(base, State::new(u, curve_e_v(base, u)));
            assert!((c - (u + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn locus_point_examples() {
        let lp = locus_points(O);
        assert_eq!(lp.d_tilde, State::new(-3.0, 3.0));
        assert_eq!(lp.g_tilde, State::new(-3.0, 6.0));
        assert_eq!(lp.de_corner, State::new(-2.0, 2.0));
        assert_eq!(locus_points(State::new(1.0, 0.0)).de_corner, State::new(-1.0, 0.0));
        let s1 = hugoniot_v(O, -3.0, Branch::Plus).unwrap();
        let s2 = hugoniot_v(O, -3.0, Branch::Minus).unwrap();
        assert!((s1 - 3.0).abs() < 1e-12 && (curve_e_v(O, -3.0) - 3.0).abs() < 1e-12);
        assert!((s2 - 6.0).abs() < 1e-12);
        assert_eq!(CurveId::J.eval(O, -3.0).unwrap(), 6.0);
        assert_eq!(CurveId::J2.eval(O, -3.0).unwrap(), 3.0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(O, State::new(-4.0, 6.0)).region, Region::Q7);
        assert_eq!(classify(O, State::new(-4.0, 13.0)).region, Region::AboveD);
        assert_eq!(classify(O, State::new(-4.0, 3.0)).region, Region::BelowE);
        // below the lower Hugoniot branch, outside the loop: positive growth
        assert_eq!(classify(O, State::new(-3.2, 3.5)).region, Region::Q7);
        assert_eq!(classify(O, State::new(-3.2, 5.0)).region, Region::D0);
        assert_eq!(classify(O, State::new(-2.5, 4.5)).region, Region::HatD);
        assert_eq!(classify(O, State::new(-2.5, 2.0)).region, Region::HatE);
        assert_eq!(classify(O, State::new(-1.0, 1.2)).region, Region::HatHatD);
        assert_eq!(classify(O, State::new(-1.0, -0.2)).region, Region::HatHatE);
        assert_eq!(classify(O, State::new(-1.0, 0.5)).region, Region::SdslOnly);
        assert_eq!(classify(O, O).region, Region::Classical);
        assert_eq!(classify(O, State::new(5.0, 5.0)).region, Region::Classical);
        // composite regions continue past u0 - 3 along J and J2
        assert_eq!(classify(O, State::new(1.6, 11.2)).region, Region::AboveD);
        assert_eq!(classify(O, State::new(2.7, -4.2)).region, Region::BelowE);
        let c = classify(O, State::new(-2.0, 2.0));
        assert_eq!(c.boundary, Some("D∩E corner"));
        let j = State::new(-3.2, hugoniot_v(O, -3.2, Branch::Plus).unwrap());
        assert_eq!(classify(O, j).region, Region::OnJ1);
    }

    #[test]
    fn region_names_round_trip() {
        for r in Region::ALL {
            assert_eq!(r.name().parse::<Region>().unwrap(), r);
        }
    }
}
