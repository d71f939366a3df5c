//! Curved singular-shock paths through centered rarefaction fans.
//!
//! While a singular shock crosses a fan, the state on the fan side changes
//! with the similarity coordinate `xi = (x - xc)/(t - tc)`. The path and the
//! strength then obey
//!
//! ```text
//! x'(t)    = [u^2 - v] / [u]
//! beta'(t) = x'(t) [v] - [u^3/3 - u]
//! ```
//!
//! evaluated against the instantaneous fan state. The system is integrated
//! with classical RK4 at a fixed step; events (strength reaching zero, the
//! path leaving the fan, loss of overcompressibility) are located by
//! bisection on the step length.

use serde::{Deserialize, Serialize};

use crate::curves::{rarefaction_v, Family};
use crate::riemann::rarefaction_state;
use crate::singular::{deficiency, shock_speed, Point};
use crate::states::{lambda1, lambda2, State};
use crate::{Error, Result};

const FAN_TOL: f64 = 1e-12;
const EVENT_T_TOL: f64 = 1e-13;
/// Slack on the overcompressibility inequalities before a band exit fires.
const BAND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanDescriptor {
    pub family: Family,
    pub center: Point,
    pub tail_speed: f64,
    pub head_speed: f64,
    pub tail_state: State,
}

impl FanDescriptor {
    pub fn new(family: Family, center: Point, tail: State, head: State) -> Result<Self> {
        if head.u < tail.u - FAN_TOL {
            return Err(Error::Invalid("rarefaction must increase u from tail to head".into()));
        }
        let expected = rarefaction_v(tail, head.u, family);
        if (expected - head.v).abs() > 1e-9 * 1f64.max(head.v.abs()) {
            return Err(Error::Invalid(format!(
                "head state {head:?} is not on the {}-rarefaction curve of {tail:?}",
                family.index()
            )));
        }
        let speed = |s: State| match family {
            Family::One => lambda1(s),
            Family::Two => lambda2(s),
        };
        Ok(FanDescriptor {
            family,
            center,
            tail_speed: speed(tail),
            head_speed: speed(head),
            tail_state: tail,
        })
    }

    pub fn head_state(&self) -> State {
        rarefaction_state(self.family, self.tail_state, self.head_speed)
    }

    pub fn is_degenerate(&self) -> bool {
        self.head_speed - self.tail_speed <= FAN_TOL
    }

    pub fn xi(&self, x: f64, t: f64) -> f64 {
        (x - self.center.x) / (t - self.center.t)
    }

    /// Fan state, with constant continuation beyond the edges.
    pub fn state_clamped(&self, xi: f64) -> State {
        if xi <= self.tail_speed {
            self.tail_state
        } else if xi >= self.head_speed {
            self.head_state()
        } else {
            rarefaction_state(self.family, self.tail_state, xi)
        }
    }
}

pub fn fan_state(fd: &FanDescriptor, xi: f64) -> Result<State> {
    if xi < fd.tail_speed - FAN_TOL || xi > fd.head_speed + FAN_TOL {
        return Err(Error::OutsideFan { xi, tail: fd.tail_speed, head: fd.head_speed });
    }
    Ok(fd.state_clamped(xi.clamp(fd.tail_speed, fd.head_speed)))
}

/// Which side of the path the fan lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FanSide {
    /// The path enters through the fan tail and the fan supplies the right state.
    Right,
    /// The fan head overtakes the path and supplies the left state.
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub t: f64,
    pub x: f64,
    pub c: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandEdge {
    /// Path speed exceeded `lambda1` of the left state (crossed `D`).
    D,
    /// Path speed dropped below `lambda2` of the right state (crossed `E`).
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum PathEvent {
    Vanished { x: f64, t: f64, left: State, right: State },
    ExitedFan { x: f64, t: f64, beta: f64, left: State, right: State },
    LeftBand { x: f64, t: f64, beta: f64, edge: BandEdge, left: State, right: State },
    Completed { x: f64, t: f64, beta: f64 },
}

impl PathEvent {
    pub fn point(&self) -> Point {
        match *self {
            PathEvent::Vanished { x, t, .. }
            | PathEvent::ExitedFan { x, t, .. }
            | PathEvent::LeftBand { x, t, .. }
            | PathEvent::Completed { x, t, .. } => Point::new(x, t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTrajectory {
    pub samples: Vec<PathSample>,
    pub event: PathEvent,
    /// Extreme strength rates seen along the path.
    pub min_rate: f64,
    pub max_rate: f64,
}

impl PathTrajectory {
    pub fn terminal(&self) -> PathSample {
        *self.samples.last().expect("trajectory has at least one sample")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    pub steps_per_unit: usize,
    pub t_end: f64,
    /// Stop at the fan edge; otherwise continue against the constant edge state.
    pub stop_on_exit: bool,
    /// Report loss of overcompressibility as an event instead of an error.
    pub allow_band_exit: bool,
}

impl PathOptions {
    pub fn until(t_end: f64) -> Self {
        PathOptions { steps_per_unit: 10_000, t_end, stop_on_exit: true, allow_band_exit: false }
    }
}

struct PathSystem<'a> {
    constant: State,
    fan: &'a FanDescriptor,
    side: FanSide,
}

impl PathSystem<'_> {
    fn states(&self, t: f64, x: f64) -> (State, State) {
        let varying = self.fan.state_clamped(self.fan.xi(x, t));
        match self.side {
            FanSide::Right => (self.constant, varying),
            FanSide::Left => (varying, self.constant),
        }
    }

    fn rhs(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        let (l, r) = self.states(t, x);
        let c = shock_speed(l, r)?;
        Ok((c, deficiency(l, r, c)))
    }

    fn rk4(&self, t: f64, x: f64, beta: f64, h: f64) -> Result<(f64, f64)> {
        let (k1x, k1b) = self.rhs(t, x)?;
        let (k2x, k2b) = self.rhs(t + h / 2.0, x + h / 2.0 * k1x)?;
        let (k3x, k3b) = self.rhs(t + h / 2.0, x + h / 2.0 * k2x)?;
        let (k4x, k4b) = self.rhs(t + h, x + h * k3x)?;
        Ok((
            x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            beta + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b),
        ))
    }

    /// Event functions; an event fires when its value turns negative.
    fn events(&self, t: f64, x: f64, beta: f64, watch_exit: bool) -> Result<[f64; 4]> {
        let (l, r) = self.states(t, x);
        let c = shock_speed(l, r)?;
        let xi = self.fan.xi(x, t);
        let exit = if !watch_exit {
            1.0
        } else {
            match self.side {
                FanSide::Right => self.fan.head_speed - xi,
                FanSide::Left => xi - self.fan.tail_speed,
            }
        };
        let scale = 1f64.max(c.abs());
        Ok([
            beta,
            exit + FAN_TOL,
            lambda1(l) - c + BAND_TOL * scale,
            c - lambda2(r) + BAND_TOL * scale,
        ])
    }
}

/// Integrates a singular shock path through a fan, starting at `start` with
/// strength `zeta`. `constant` is the state on the non-fan side of the path.
pub fn integrate_path(
    constant: State,
    fd: &FanDescriptor,
    side: FanSide,
    start: Point,
    zeta: f64,
    opts: PathOptions,
) -> Result<PathTrajectory> {
    if !(zeta >= 0.0) {
        return Err(Error::Invalid(format!("initial strength {zeta} < 0")));
    }
    if !(start.t > fd.center.t) {
        return Err(Error::Invalid("path must start after the fan center time".into()));
    }
    let sys = PathSystem { constant, fan: fd, side };
    let (mut t, mut x, mut beta) = (start.t, start.x, zeta);
    let (c0, r0) = sys.rhs(t, x)?;
    let mut samples = vec![PathSample { t, x, c: c0, beta }];
    let (mut min_rate, mut max_rate) = (r0, r0);

    let edge_event = |t: f64, x: f64, beta: f64| -> PathEvent {
        let (l, r) = sys.states(t, x);
        PathEvent::ExitedFan { x, t, beta, left: l, right: r }
    };

    if opts.stop_on_exit && (fd.is_degenerate() || sys.events(t, x, beta, true)?[1] <= FAN_TOL) {
        return Ok(PathTrajectory { event: edge_event(t, x, beta), samples, min_rate, max_rate });
    }
    let initial = sys.events(t, x, beta, opts.stop_on_exit)?;
    if initial[2] < 0.0 || initial[3] < 0.0 {
        let (l, r) = sys.states(t, x);
        let (edge, bound) = if initial[2] < 0.0 { (BandEdge::D, lambda1(l)) } else { (BandEdge::E, lambda2(r)) };
        if !opts.allow_band_exit {
            return Err(Error::OvercompressibilityLost { t, x, c: c0, bound });
        }
        let event = PathEvent::LeftBand { x, t, beta, edge, left: l, right: r };
        return Ok(PathTrajectory { event, samples, min_rate, max_rate });
    }
    if zeta == 0.0 && r0 < 0.0 {
        let (l, r) = sys.states(t, x);
        let event = PathEvent::Vanished { x, t, left: l, right: r };
        return Ok(PathTrajectory { event, samples, min_rate, max_rate });
    }

    let h = 1.0 / opts.steps_per_unit as f64;
    while t < opts.t_end {
        let step = h.min(opts.t_end - t);
        let (xn, bn) = sys.rk4(t, x, beta, step)?;
        let ev = sys.events(t + step, xn, bn, opts.stop_on_exit)?;
        if let Some(fired) = ev.iter().position(|g| *g < 0.0) {
            // earliest root among the events that fired in this step
            let mut best: Option<(f64, usize)> = None;
            for (i, g) in ev.iter().enumerate() {
                if *g >= 0.0 {
                    continue;
                }
                let (mut lo, mut hi) = (0.0, step);
                while hi - lo > EVENT_T_TOL {
                    let mid = 0.5 * (lo + hi);
                    let (xm, bm) = sys.rk4(t, x, beta, mid)?;
                    if sys.events(t + mid, xm, bm, opts.stop_on_exit)?[i] < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                if best.is_none_or(|(s, _)| hi < s) {
                    best = Some((hi, i));
                }
            }
            let (s, which) = best.unwrap_or((step, fired));
            let (xe, be) = sys.rk4(t, x, beta, s)?;
            let te = t + s;
            let (ce, re) = sys.rhs(te, xe)?;
            min_rate = min_rate.min(re);
            max_rate = max_rate.max(re);
            let (l, r) = sys.states(te, xe);
            let event = match which {
                0 => PathEvent::Vanished { x: xe, t: te, left: l, right: r },
                1 => PathEvent::ExitedFan { x: xe, t: te, beta: be.max(0.0), left: l, right: r },
                _ => {
                    let edge = if which == 2 { BandEdge::D } else { BandEdge::E };
                    if !opts.allow_band_exit {
                        let bound = if which == 2 { lambda1(l) } else { lambda2(r) };
                        return Err(Error::OvercompressibilityLost { t: te, x: xe, c: ce, bound });
                    }
                    PathEvent::LeftBand { x: xe, t: te, beta: be.max(0.0), edge, left: l, right: r }
                }
            };
            let beta_out = if which == 0 { 0.0 } else { be.max(0.0) };
            samples.push(PathSample { t: te, x: xe, c: ce, beta: beta_out });
            return Ok(PathTrajectory { samples, event, min_rate, max_rate });
        }
        t += step;
        x = xn;
        beta = bn;
        let (c, rate) = sys.rhs(t, x)?;
        min_rate = min_rate.min(rate);
        max_rate = max_rate.max(rate);
        samples.push(PathSample { t, x, c, beta });
    }
    Ok(PathTrajectory { samples, event: PathEvent::Completed { x, t, beta }, min_rate, max_rate })
}

/// Closed-form path speed for a singular shock entering a centered
/// 1-rarefaction, evaluated verbatim. Diagnostic only: the ODE integration in
/// [`integrate_path`] is authoritative.
pub fn closed_form_c(left_pair: (State, State), interaction_t: f64, t: f64) -> Result<f64> {
    let (s0, s1) = left_pair;
    let (u0, v0, u1, v1) = (s0.u, s0.v, s1.u, s1.v);
    if (u0 - 1.0).abs() < 1e-14 {
        return Err(Error::Pole);
    }
    let a = 1.0 - 2.0 * (u1 - v0 + v1 + u0 * u0 - u1 * u1);
    let b = 1.0 - 2.0 * (u0 - v1 - u0 * u1 + u0 * u0 - u1 * u1);
    Ok((t * a + interaction_t * b) / (2.0 * (u0 - 1.0)))
}
