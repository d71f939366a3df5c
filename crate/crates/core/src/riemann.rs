//! Exact Riemann solver.
//!
//! Classical data are solved by intersecting the forward 1-wave curve of the
//! left state with the backward 2-wave curve of the right state. Right states
//! in `Q7` get a single singular shock; right states above `D` (below `E`)
//! far enough to the left get a 1-rarefaction followed by a singular shock
//! (a singular shock followed by a 2-rarefaction).

use serde::{Deserialize, Serialize};

use crate::curves::{
    classify, curve_d_v, curve_e_v, hugoniot_v, in_sdsl, rarefaction_v, Branch, Family, Region,
};
use crate::singular::{is_overcompressive, shock_speed, Point, SingularShock};
use crate::states::{lambda1, lambda2, DeltaState, State};
use crate::{Error, Result};

const ROOT_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;
const SCAN_CELLS: usize = 512;
/// Relative tolerance on wave speed inequalities.
pub const SPEED_TOL: f64 = 1e-10;
const SAME_STATE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Wave {
    Shock {
        family: Family,
        left: State,
        right: State,
        speed: f64,
    },
    Rarefaction {
        family: Family,
        left: State,
        right: State,
        tail_speed: f64,
        head_speed: f64,
    },
    Singular(SingularShock),
}

impl Wave {
    pub fn left(&self) -> State {
        match self {
            Wave::Shock { left, .. } | Wave::Rarefaction { left, .. } => *left,
            Wave::Singular(s) => s.left,
        }
    }

    pub fn right(&self) -> State {
        match self {
            Wave::Shock { right, .. } | Wave::Rarefaction { right, .. } => *right,
            Wave::Singular(s) => s.right,
        }
    }

    /// Slowest and fastest characteristic speed occupied by the wave.
    pub fn speed_range(&self) -> (f64, f64) {
        match self {
            Wave::Shock { speed, .. } => (*speed, *speed),
            Wave::Rarefaction { tail_speed, head_speed, .. } => (*tail_speed, *head_speed),
            Wave::Singular(s) => (s.speed, s.speed),
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, Wave::Singular(_))
    }

    pub fn as_singular(&self) -> Option<&SingularShock> {
        match self {
            Wave::Singular(s) => Some(s),
            _ => None,
        }
    }
}

/// A self-similar sequence of waves, ordered by speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct WaveFan {
    pub waves: Vec<Wave>,
}

impl WaveFan {
    pub fn empty() -> Self {
        WaveFan { waves: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.waves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waves.is_empty()
    }

    pub fn singular(&self) -> Option<&SingularShock> {
        self.waves.iter().find_map(Wave::as_singular)
    }

    pub fn shocks(&self) -> impl Iterator<Item = &Wave> {
        self.waves.iter().filter(|w| matches!(w, Wave::Shock { .. }))
    }

    /// State at similarity coordinate `xi = (x - X)/(t - T)` (delta parts
    /// are not represented).
    pub fn sample(&self, left: State, xi: f64) -> State {
        let mut state = left;
        for w in &self.waves {
            match *w {
                Wave::Rarefaction { family, left, right, tail_speed, head_speed } => {
                    if xi < tail_speed {
                        return state;
                    }
                    if xi <= head_speed {
                        return rarefaction_state(family, left, xi);
                    }
                    state = right;
                }
                _ => {
                    let (s, _) = w.speed_range();
                    if xi < s {
                        return state;
                    }
                    state = w.right();
                }
            }
        }
        state
    }

    /// Checks ordering, state matching and admissibility of every wave.
    pub fn check(&self, left: State, right: State) -> Result<()> {
        let mut state = left;
        let mut prev_head = f64::NEG_INFINITY;
        for w in &self.waves {
            if !close(w.left(), state) {
                return Err(Error::Invalid(format!("wave states do not match: {w:?}")));
            }
            let (tail, head) = w.speed_range();
            if tail < prev_head - SPEED_TOL * (1.0 + tail.abs()) {
                return Err(Error::Invalid(format!("waves out of order at {w:?}")));
            }
            match *w {
                Wave::Shock { family, left, right, speed } => {
                    if !lax_admissible(family, left, right, speed) {
                        return Err(Error::Invalid(format!("shock violates Lax: {w:?}")));
                    }
                }
                Wave::Singular(s) => {
                    if s.zeta0 == 0.0 && !overcompressive_tol(s.left, s.right, s.speed) {
                        return Err(Error::Invalid(format!("singular not overcompressive: {w:?}")));
                    }
                    if s.zeta0 == 0.0 && s.k < -1e-9 * (1.0 + s.speed.abs()) {
                        return Err(Error::Invalid(format!("zero-strength singular decays: {w:?}")));
                    }
                }
                Wave::Rarefaction { .. } => {}
            }
            prev_head = head;
            state = w.right();
        }
        if !close(state, right) {
            return Err(Error::Invalid("fan does not end at the right state".into()));
        }
        Ok(())
    }
}

fn close(a: State, b: State) -> bool {
    let s = 1f64.max(a.u.abs()).max(a.v.abs());
    (a.u - b.u).abs() <= 1e-9 * s && (a.v - b.v).abs() <= 1e-9 * s
}

fn tol_le(a: f64, b: f64) -> bool {
    a <= b + SPEED_TOL * 1f64.max(a.abs()).max(b.abs())
}

pub fn overcompressive_tol(left: State, right: State, c: f64) -> bool {
    tol_le(c, lambda1(left)) && tol_le(lambda2(right), c)
}

/// Rounding error of a difference-quotient speed; dominates for weak jumps.
fn speed_rounding(left: State, right: State) -> f64 {
    let mass = left.u * left.u + left.v.abs() + right.u * right.u + right.v.abs();
    8.0 * f64::EPSILON * mass / (right.u - left.u).abs().max(f64::MIN_POSITIVE)
}

/// Lax entropy inequalities for a shock of the given family.
pub fn lax_admissible(family: Family, left: State, right: State, c: f64) -> bool {
    let slack = speed_rounding(left, right);
    let le = |a: f64, b: f64| tol_le(a, b + slack);
    match family {
        Family::One => le(lambda1(right), c) && le(c, lambda1(left)) && le(c, lambda2(right)),
        Family::Two => le(lambda2(right), c) && le(c, lambda2(left)) && le(lambda1(left), c),
    }
}

/// State inside a centered rarefaction of `family` whose tail state is `tail`.
pub fn rarefaction_state(family: Family, tail: State, xi: f64) -> State {
    let u = match family {
        Family::One => xi + 1.0,
        Family::Two => xi - 1.0,
    };
    State::new(u, rarefaction_v(tail, u, family))
}

fn characteristic(family: Family, s: State) -> f64 {
    match family {
        Family::One => lambda1(s),
        Family::Two => lambda2(s),
    }
}

/// Elementary wave connecting `left` to `right` along a `family` curve.
/// Returns `None` when the states coincide.
fn elementary(family: Family, left: State, right: State) -> Result<Option<Wave>> {
    if (right.u - left.u).abs() < SAME_STATE {
        return Ok(None);
    }
    if right.u > left.u {
        Ok(Some(Wave::Rarefaction {
            family,
            left,
            right,
            tail_speed: characteristic(family, left),
            head_speed: characteristic(family, right),
        }))
    } else {
        let speed = shock_speed(left, right)?;
        Ok(Some(Wave::Shock { family, left, right, speed }))
    }
}

/// Forward 1-wave curve from `left`.
fn forward_one(left: State, u: f64) -> Result<(f64, f64)> {
    if u >= left.u {
        Ok((rarefaction_v(left, u, Family::One), u + 1.0))
    } else {
        let v = hugoniot_v(left, u, Branch::Plus)?;
        Ok((v, hugoniot_slope(left, u, 1.0)))
    }
}

/// Backward 2-wave curve into `right`: states that reach `right` by a 2-wave.
fn backward_two(right: State, u: f64) -> Result<(f64, f64)> {
    if u <= right.u {
        Ok((rarefaction_v(right, u, Family::Two), u - 1.0))
    } else {
        let v = hugoniot_v(right, u, Branch::Minus)?;
        Ok((v, hugoniot_slope(right, u, -1.0)))
    }
}

fn hugoniot_slope(base: State, u: f64, sign: f64) -> f64 {
    let du = u - base.u;
    let r = (1.0 - du * du / 12.0).max(1e-300);
    let s = sign * r.sqrt();
    let ds = sign * (-du / 12.0) / r.sqrt();
    ((base.u + u) / 2.0 + s) + du * (0.5 + ds)
}

/// Bisection on a sign-changing bracket, polished by guarded Newton steps.
fn refine_root<F>(f: F, mut a: f64, mut b: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let (mut fa, _) = f(a)?;
    let (fb, _) = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_ITER {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == (fa < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        if (b - a).abs() <= ROOT_TOL * 1f64.max(x.abs()) {
            // a few more halvings push the residual to rounding level
            return polish(&f, a, fa, b);
        }
        let newton = if dfx != 0.0 { x - fx / dfx } else { f64::NAN };
        x = if newton > a.min(b) && newton < a.max(b) { newton } else { 0.5 * (a + b) };
    }
    Err(Error::ConvergenceFailure(MAX_ITER))
}

fn polish<F>(f: &F, mut a: f64, mut fa: f64, mut b: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    for _ in 0..64 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let (fm, _) = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let (fb, _) = f(b)?;
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

/// Classical two-wave solution (1-wave then 2-wave).
pub fn solve_classical(left: State, right: State) -> Result<WaveFan> {
    if close(left, right) {
        return Ok(WaveFan::empty());
    }
    let mismatch = |u: f64| -> Result<(f64, f64)> {
        let (w1, d1) = forward_one(left, u)?;
        let (w2, d2) = backward_two(right, u)?;
        Ok((w1 - w2, d1 - d2))
    };
    let lo = left.u - 3.0;
    let hi = right.u + 3.0;
    if lo > hi {
        return Err(Error::NoClassicalSolution(left.to_array(), right.to_array()));
    }
    let mut candidates = Vec::new();
    let n = if hi > lo { SCAN_CELLS } else { 1 };
    let h = (hi - lo) / n as f64;
    let mut prev = (lo, mismatch(lo)?.0);
    if prev.1 == 0.0 {
        candidates.push(lo);
    }
    for i in 1..=n {
        let x = if i == n { hi } else { lo + h * i as f64 };
        let fx = mismatch(x)?.0;
        if fx == 0.0 {
            candidates.push(x);
        } else if prev.1 != 0.0 && (fx < 0.0) != (prev.1 < 0.0) {
            candidates.push(refine_root(mismatch, prev.0, x)?);
        }
        prev = (x, fx);
    }
    for um in candidates {
        let middle = State::new(um, forward_one(left, um)?.0);
        let residual = (middle.v - backward_two(right, um)?.0).abs();
        if residual > 1e-12 * 1f64.max(middle.v.abs()) {
            continue;
        }
        // land exactly on the right state when the 2-wave is trivial
        let middle = if (um - right.u).abs() < SAME_STATE { right } else { middle };
        let middle = if (um - left.u).abs() < SAME_STATE { left } else { middle };
        let waves: Vec<Wave> = [elementary(Family::One, left, middle)?, elementary(Family::Two, middle, right)?]
            .into_iter()
            .flatten()
            .collect();
        let fan = WaveFan { waves };
        if fan.check(left, right).is_ok() {
            return Ok(fan);
        }
    }
    Err(Error::NoClassicalSolution(left.to_array(), right.to_array()))
}

/// Intermediate state for a 1-rarefaction from `left` followed by a singular
/// shock to `right` whose speed equals the rarefaction head speed. The
/// intermediate lies on `R1(left)` and `right` lies on its `D` curve; the
/// resulting condition is quadratic in the intermediate `u`.
pub fn composite_r1_middle(left: State, right: State) -> Result<State> {
    let c0 = left.v - 0.5 * left.u * left.u - left.u + right.u * right.u + right.u - right.v;
    let disc = right.u * right.u - 2.0 * c0;
    if disc < 0.0 {
        return Err(Error::Unresolvable(left.to_array(), right.to_array()));
    }
    let um = right.u + disc.sqrt();
    if um < left.u - SAME_STATE {
        return Err(Error::Unresolvable(left.to_array(), right.to_array()));
    }
    let um = um.max(left.u);
    Ok(State::new(um, rarefaction_v(left, um, Family::One)))
}

/// Intermediate state for a singular shock from `left` followed by a
/// 2-rarefaction to `right`; the intermediate lies on `E(left)` and `right`
/// on its 2-rarefaction curve.
pub fn composite_r2_middle(left: State, right: State) -> Result<State> {
    let c1 = left.v - left.u * left.u + left.u + 0.5 * right.u * right.u - right.u - right.v;
    let disc = left.u * left.u + 2.0 * c1;
    if disc < 0.0 {
        return Err(Error::Unresolvable(left.to_array(), right.to_array()));
    }
    let um = left.u - disc.sqrt();
    if um > right.u + SAME_STATE {
        return Err(Error::Unresolvable(left.to_array(), right.to_array()));
    }
    let um = um.min(right.u);
    Ok(State::new(um, curve_e_v(left, um)))
}

/// 1-rarefaction followed by a singular shock carrying `zeta`.
pub fn solve_composite_r1(left: State, right: State, zeta: f64, birth: Point) -> Result<WaveFan> {
    let middle = composite_r1_middle(left, right)?;
    let mut waves = Vec::new();
    if let Some(w) = elementary(Family::One, left, middle)? {
        waves.push(w);
    }
    let ss = SingularShock::new(middle, right, zeta, birth)?;
    // numerically the speed equals the rarefaction head; pin it
    waves.push(Wave::Singular(ss));
    Ok(WaveFan { waves })
}

/// Singular shock carrying `zeta` followed by a 2-rarefaction.
pub fn solve_composite_r2(left: State, right: State, zeta: f64, birth: Point) -> Result<WaveFan> {
    let middle = composite_r2_middle(left, right)?;
    let mut waves = vec![Wave::Singular(SingularShock::new(left, middle, zeta, birth)?)];
    if let Some(w) = elementary(Family::Two, middle, right)? {
        waves.push(w);
    }
    Ok(WaveFan { waves })
}

/// Riemann solution for plain data.
pub fn solve(left: State, right: State) -> Result<WaveFan> {
    let origin = Point::new(0.0, 0.0);
    match classify(left, right).region {
        Region::Q7 | Region::OnJ1 => Ok(WaveFan {
            waves: vec![Wave::Singular(SingularShock::new(left, right, 0.0, origin)?)],
        }),
        Region::AboveD => solve_composite_r1(left, right, 0.0, origin),
        Region::BelowE => solve_composite_r2(left, right, 0.0, origin),
        _ => solve_classical(left, right),
    }
}

/// Riemann data whose right state carries a point delta.
pub fn solve_with_delta(left: State, right: DeltaState) -> Result<WaveFan> {
    if right.zeta == 0.0 {
        return solve(left, right.state);
    }
    if !in_sdsl(left, right.state) {
        return Err(Error::OutsideSdsl(left.to_array(), right.state.to_array()));
    }
    let ss = SingularShock::new(left, right.state, right.zeta, Point::new(0.0, 0.0)).map_err(|e| match e {
        Error::NotRepresentable { .. } => Error::OutsideSdsl(left.to_array(), right.state.to_array()),
        e => e,
    })?;
    Ok(WaveFan { waves: vec![Wave::Singular(ss)] })
}

/// Delta-data solution is overcompressive: band between `D` and `E` with
/// `u1 <= u0 - 2`.
pub fn delta_overcompressive(left: State, right: State) -> bool {
    right.u <= left.u - 2.0 + 1e-12 && {
        let d = curve_d_v(left, right.u);
        let e = curve_e_v(left, right.u);
        let t = 1e-9 * 1f64.max(right.v.abs());
        right.v <= d + t && right.v >= e - t
    }
}

/// Front speeds of a fan with its singular shock overcompressive or not.
pub fn singular_is_overcompressive(ss: &SingularShock) -> bool {
    is_overcompressive(ss.left, ss.right, ss.speed) || overcompressive_tol(ss.left, ss.right, ss.speed)
}
