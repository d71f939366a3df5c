//! Wave interaction engine.
//!
//! Fronts are tracked left to right: straight shocks and singular shocks,
//! centered rarefaction fans, and singular shocks traversing a fan along a
//! curved path. The engine repeatedly advances to the earliest event
//! (pairwise collision, strength vanishing, end of a fan traversal), solves
//! the local Riemann problem with the summed delta strength, and splices the
//! outgoing waves into the front list.
//!
//! Collisions that do not involve a singular shock entering a fan are
//! resolved by collapsing any fan involved to its edge states.

use serde::{Deserialize, Serialize};

use crate::curves::{between_d_and_e, curve_d_v, curve_e_v, in_sdsl, Family};
use crate::fanode::{integrate_path, FanDescriptor, FanSide, PathEvent, PathOptions, PathSample, PathTrajectory};
use crate::riemann::{
    composite_r1_middle, composite_r2_middle, solve, solve_classical, solve_composite_r1, solve_composite_r2, Wave,
    WaveFan,
};
use crate::singular::{Point, SingularShock};
use crate::states::{DeltaState, State};
use crate::{Error, Result};

const CONGESTION_T: f64 = 1e-12;
const CONGESTION_X: f64 = 1e-9;
const MAX_EVENTS: usize = 10_000;
const MAX_CURVE_SAMPLES: usize = 2000;
/// Growth rates below this magnitude count as constant strength.
pub const CONSTANT_RATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub states: Vec<State>,
    pub breakpoints: Vec<f64>,
    #[serde(default)]
    pub deltas: Vec<f64>,
    pub t_max: f64,
}

impl Scenario {
    pub fn new(states: Vec<State>, breakpoints: Vec<f64>, deltas: Vec<f64>, t_max: f64) -> Result<Self> {
        let s = Scenario { states, breakpoints, deltas, t_max };
        s.validate()?;
        Ok(s)
    }

    pub fn riemann(left: State, right: State, t_max: f64) -> Result<Self> {
        Scenario::new(vec![left, right], vec![0.0], vec![], t_max)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(m.to_string()));
        if self.states.len() != self.breakpoints.len() + 1 {
            return bad("need exactly one more state than breakpoints");
        }
        if self.breakpoints.is_empty() {
            return bad("need at least one breakpoint");
        }
        if !self.deltas.is_empty() && self.deltas.len() != self.breakpoints.len() {
            return bad("deltas must align with breakpoints");
        }
        if !self.states.iter().all(State::is_finite) || !self.breakpoints.iter().all(|x| x.is_finite()) {
            return bad("non-finite state or breakpoint");
        }
        if self.breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("breakpoints must be strictly increasing");
        }
        if !self.deltas.iter().all(|z| z.is_finite() && *z >= 0.0) {
            return bad("deltas must be finite and non-negative");
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return bad("t_max must be positive");
        }
        Ok(())
    }

    pub fn delta(&self, i: usize) -> f64 {
        self.deltas.get(i).copied().unwrap_or(0.0)
    }

    /// Same scenario shifted in space.
    pub fn shifted(&self, dx: f64) -> Scenario {
        let mut s = self.clone();
        s.breakpoints.iter_mut().for_each(|x| *x += dx);
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    Shock,
    Singular,
    FanEdge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Path {
    Line { x0: f64, t0: f64, speed: f64 },
    Curve { samples: Vec<PathSample> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Strength {
    None,
    /// `zeta0 + k (t - t0)` on a straight path.
    Linear { zeta0: f64, k: f64 },
    /// Read from the path samples.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub id: usize,
    pub kind: TrajectoryKind,
    pub family: Option<u8>,
    /// States on either side at the start of the trajectory.
    pub left: State,
    pub right: State,
    pub t_start: f64,
    pub t_end: f64,
    pub path: Path,
    pub strength: Strength,
    pub start_event: Option<usize>,
    pub end_event: Option<usize>,
}

impl Trajectory {
    pub fn position(&self, t: f64) -> f64 {
        match &self.path {
            Path::Line { x0, t0, speed } => x0 + speed * (t - t0),
            Path::Curve { samples } => interpolate(samples, t, |s| s.x),
        }
    }

    pub fn strength_at(&self, t: f64) -> f64 {
        match (&self.strength, &self.path) {
            (Strength::None, _) => 0.0,
            (Strength::Linear { zeta0, k }, _) => (zeta0 + k * (t - self.t_start)).max(0.0),
            (Strength::Sampled, Path::Curve { samples }) => interpolate(samples, t, |s| s.beta).max(0.0),
            (Strength::Sampled, Path::Line { .. }) => 0.0,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.kind == TrajectoryKind::Singular
    }

    pub fn is_curved(&self) -> bool {
        matches!(self.path, Path::Curve { .. })
    }

    /// `(t, x)` polyline covering the trajectory.
    pub fn polyline(&self) -> Vec<[f64; 2]> {
        match &self.path {
            Path::Line { .. } => vec![
                [self.t_start, self.position(self.t_start)],
                [self.t_end, self.position(self.t_end)],
            ],
            Path::Curve { samples } => samples.iter().map(|s| [s.t, s.x]).collect(),
        }
    }

    /// `(t, beta)` samples; empty for classical fronts.
    pub fn strength_samples(&self) -> Vec<[f64; 2]> {
        match (&self.strength, &self.path) {
            (Strength::None, _) => vec![],
            (Strength::Linear { .. }, _) => vec![
                [self.t_start, self.strength_at(self.t_start)],
                [self.t_end, self.strength_at(self.t_end)],
            ],
            (Strength::Sampled, Path::Curve { samples }) => samples.iter().map(|s| [s.t, s.beta]).collect(),
            (Strength::Sampled, _) => vec![],
        }
    }
}

fn interpolate(samples: &[PathSample], t: f64, f: impl Fn(&PathSample) -> f64) -> f64 {
    let i = samples.partition_point(|s| s.t <= t);
    if i == 0 {
        return f(&samples[0]);
    }
    if i == samples.len() {
        return f(&samples[i - 1]);
    }
    let (a, b) = (&samples[i - 1], &samples[i]);
    let w = (t - a.t) / (b.t - a.t);
    f(a) + w * (f(b) - f(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Interaction,
    FanEntry,
    FanExit,
    BandExit,
    Vanish,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub id: usize,
    pub kind: EventKind,
    pub x: f64,
    pub t: f64,
    pub incoming: Vec<usize>,
    pub outgoing: Vec<usize>,
    /// Delta strength carried into the outgoing waves.
    pub zeta: f64,
}

/// Constant state between two fronts over a time interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub state: State,
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub t_start: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Growing,
    Constant,
    Decaying,
}

/// Outcome of a singular shock crossing a rarefaction fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    /// Single straight singular shock with increasing strength.
    #[serde(rename = "a")]
    A,
    /// 1-rarefaction then singular shock with increasing strength.
    #[serde(rename = "b")]
    B,
    /// Singular shock with increasing strength then 2-rarefaction.
    #[serde(rename = "c")]
    C,
    /// Decaying singular shock continued by a growing singular shock or two shocks.
    #[serde(rename = "d")]
    D,
    /// 1-rarefaction then singular shock with constant strength.
    #[serde(rename = "e")]
    E,
    /// Singular shock with constant strength then 2-rarefaction.
    #[serde(rename = "f")]
    F,
    /// Decaying singular shock continued by a rarefaction and a non-growing singular shock.
    #[serde(rename = "g")]
    G,
}

impl Outcome {
    pub fn label(self) -> char {
        match self {
            Outcome::A => 'a',
            Outcome::B => 'b',
            Outcome::C => 'c',
            Outcome::D => 'd',
            Outcome::E => 'e',
            Outcome::F => 'f',
            Outcome::G => 'g',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FanInteraction {
    pub entry_event: usize,
    pub end_event: Option<usize>,
    pub path: usize,
    pub side: FanSide,
    pub family: u8,
    pub regimes: Vec<Regime>,
    pub outcome: Option<Outcome>,
    /// The outcome describes the limit approached as `t` grows rather than
    /// a structure reached at a finite time.
    pub asymptotic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    pub t_max: f64,
    pub trajectories: Vec<Trajectory>,
    pub events: Vec<Event>,
    pub cells: Vec<Cell>,
    pub fan_interactions: Vec<FanInteraction>,
}

impl Timeline {
    pub fn trajectory(&self, id: usize) -> Option<&Trajectory> {
        self.trajectories.get(id)
    }

    pub fn count(&self, kind: TrajectoryKind) -> usize {
        self.trajectories.iter().filter(|t| t.kind == kind).count()
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    pub fn outcomes(&self) -> Vec<Outcome> {
        self.fan_interactions.iter().filter_map(|f| f.outcome).collect()
    }

    /// Structural checks: ids are dense and every reference resolves.
    pub fn validate(&self) -> Result<()> {
        let n = self.trajectories.len();
        for (i, tr) in self.trajectories.iter().enumerate() {
            if tr.id != i || tr.t_end < tr.t_start {
                return Err(Error::Invalid(format!("bad trajectory {i}")));
            }
            for e in [tr.start_event, tr.end_event].into_iter().flatten() {
                if e >= self.events.len() {
                    return Err(Error::Invalid(format!("trajectory {i} references event {e}")));
                }
            }
        }
        for (i, ev) in self.events.iter().enumerate() {
            if ev.id != i || ev.incoming.iter().chain(&ev.outgoing).any(|&t| t >= n) {
                return Err(Error::Invalid(format!("bad event {i}")));
            }
        }
        for c in &self.cells {
            if c.left.into_iter().chain(c.right).any(|t| t >= n) {
                return Err(Error::Invalid("cell references a missing trajectory".into()));
            }
        }
        Ok(())
    }
}

/// Meeting point of two straight paths, if they converge after both start.
pub fn meet_lines(a: Point, ca: f64, b: Point, cb: f64, t_max: f64) -> Option<Point> {
    let dc = ca - cb;
    if dc.abs() <= 1e-14 * (1.0 + ca.abs().max(cb.abs())) {
        return None;
    }
    // x_a(t) = a.x + ca (t - a.t), x_b(t) = b.x + cb (t - b.t)
    let t = (b.x - a.x + ca * a.t - cb * b.t) / dc;
    let t0 = a.t.max(b.t);
    if t < t0 - CONGESTION_T || t > t_max {
        return None;
    }
    let t = t.max(t0);
    if a.x + ca * (t0 - a.t) > b.x + cb * (t0 - b.t) + CONGESTION_X {
        return None;
    }
    Some(Point::new(b.x + cb * (t - b.t), t))
}

/// Earliest crossing of `w1` (on the left) and `w2` before `t_max`.
pub fn meet(w1: &Trajectory, w2: &Trajectory, t_max: f64) -> Option<Point> {
    let t0 = w1.t_start.max(w2.t_start);
    let t1 = w1.t_end.min(w2.t_end).min(t_max);
    if let (Path::Line { x0: xa, t0: ta, speed: ca }, Path::Line { x0: xb, t0: tb, speed: cb }) = (&w1.path, &w2.path) {
        return meet_lines(Point::new(*xa, *ta), *ca, Point::new(*xb, *tb), *cb, t1);
    }
    first_crossing(|t| w2.position(t) - w1.position(t), t0, t1, 1e-3)
}

/// First `t` in `(t0, t1]` where `gap` becomes non-positive, by scanning at
/// `dt` and bisecting to 1e-13.
fn first_crossing(gap: impl Fn(f64) -> f64, t0: f64, t1: f64, dt: f64) -> Option<Point> {
    if !(t1 > t0) {
        return None;
    }
    let n = ((t1 - t0) / dt).ceil().max(1.0) as usize;
    let mut lo = t0;
    if gap(lo) <= 0.0 {
        return None;
    }
    for i in 1..=n {
        let hi = if i == n { t1 } else { t0 + (t1 - t0) * i as f64 / n as f64 };
        if gap(hi) <= 0.0 {
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-13 {
                let m = 0.5 * (a + b);
                if gap(m) <= 0.0 {
                    b = m
                } else {
                    a = m
                }
            }
            return Some(Point::new(f64::NAN, b));
        }
        lo = hi;
    }
    None
}

/// Riemann data formed at an interaction point.
pub fn post_interaction_data(w1: &Trajectory, w2: &Trajectory, at: Point) -> (State, DeltaState) {
    let zeta = w1.strength_at(at.t) + w2.strength_at(at.t);
    (w1.left, DeltaState { state: w2.right, zeta })
}

/// Outgoing waves of a resolved interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub fan: WaveFan,
    /// Where a decaying singular shock loses its strength.
    pub vanish_at: Option<Point>,
}

/// Solves delta-carrying Riemann data at an interaction point.
pub fn resolve(left: State, right: DeltaState, at: Point) -> Result<Resolution> {
    let fan = resolve_fan(left, right, at)?;
    let vanish_at = fan.singular().and_then(|s| {
        s.vanish_time().filter(|_| s.zeta0 > 0.0).map(|t| Point::new(s.position(t), t))
    });
    Ok(Resolution { fan, vanish_at })
}

fn resolve_fan(left: State, right: DeltaState, at: Point) -> Result<WaveFan> {
    let (q, zeta) = (right.state, right.zeta);
    let rebirth = |mut fan: WaveFan| {
        for w in &mut fan.waves {
            if let Wave::Singular(s) = w {
                s.birth = at;
            }
        }
        fan
    };
    if zeta == 0.0 {
        return solve(left, q).map(rebirth);
    }
    let single = || -> Result<WaveFan> {
        let ss = SingularShock::new(left, q, zeta, at)
            .map_err(|_| Error::OutsideSdsl(left.to_array(), q.to_array()))?;
        Ok(WaveFan { waves: vec![Wave::Singular(ss)] })
    };
    if q.u <= left.u - 2.0 + 1e-12 && between_d_and_e(left, q) {
        return single();
    }
    let composite = |f: fn(State, State, f64, Point) -> Result<WaveFan>| -> Option<WaveFan> {
        f(left, q, zeta, at).ok().filter(|fan| fan.check(left, q).is_ok())
    };
    if q.v > curve_d_v(left, q.u) {
        if let Some(fan) = composite(solve_composite_r1) {
            return Ok(fan);
        }
    }
    if q.v < curve_e_v(left, q.u) {
        if let Some(fan) = composite(solve_composite_r2) {
            return Ok(fan);
        }
    }
    if in_sdsl(left, q) {
        return single();
    }
    Err(Error::OutsideSdsl(left.to_array(), q.to_array()))
}

/// Classical re-solve when a decaying singular shock loses its strength.
pub fn resolve_vanish(left: State, right: State) -> Result<WaveFan> {
    let fan = solve_classical(left, right)?;
    let shocks = fan.shocks().count();
    if shocks != 2 || fan.len() != 2 {
        return Err(Error::ExpectedTwoShocks { found: shocks });
    }
    fan.check(left, right)?;
    Ok(fan)
}

// ---------------------------------------------------------------- engine

#[derive(Debug, Clone)]
struct LineFront {
    traj: usize,
    left: State,
    right: State,
    start: Point,
    speed: f64,
    zeta0: f64,
    k: f64,
    singular: bool,
}

#[derive(Debug, Clone)]
struct FanFront {
    tail: usize,
    head: usize,
    fd: FanDescriptor,
}

#[derive(Debug, Clone)]
struct TraverseFront {
    traj: usize,
    /// Remaining fan edge trajectory (head for a fan on the right).
    edge: usize,
    fd: FanDescriptor,
    side: FanSide,
    constant: State,
    path: PathTrajectory,
    interaction: usize,
}

#[derive(Debug, Clone)]
enum Shape {
    Line(LineFront),
    Fan(FanFront),
    Traverse(TraverseFront),
}

#[derive(Debug, Clone)]
struct Front {
    shape: Shape,
    /// Fronts born from the same Riemann solution never collide.
    origin: usize,
}

impl Front {
    fn outer(&self) -> (State, State) {
        match &self.shape {
            Shape::Line(l) => (l.left, l.right),
            Shape::Fan(f) => (f.fd.tail_state, f.fd.head_state()),
            Shape::Traverse(tr) => match tr.side {
                FanSide::Right => (tr.constant, tr.fd.head_state()),
                FanSide::Left => (tr.fd.tail_state, tr.constant),
            },
        }
    }

    fn edge_trajs(&self) -> (usize, usize) {
        match &self.shape {
            Shape::Line(l) => (l.traj, l.traj),
            Shape::Fan(f) => (f.tail, f.head),
            Shape::Traverse(tr) => match tr.side {
                FanSide::Right => (tr.traj, tr.edge),
                FanSide::Left => (tr.edge, tr.traj),
            },
        }
    }

    fn strength(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::Line(l) if l.singular => (l.zeta0 + l.k * (t - l.start.t)).max(0.0),
            Shape::Traverse(tr) => interpolate(&tr.path.samples, t, |s| s.beta).max(0.0),
            _ => 0.0,
        }
    }

    fn fan_line(fd: &FanDescriptor, speed: f64) -> (Point, f64) {
        (fd.center, speed)
    }

    /// Left and right edges: either a straight line `(point, speed)` or the
    /// curved path.
    fn edge(&self, right: bool) -> Edge<'_> {
        match &self.shape {
            Shape::Line(l) => Edge::Line(l.start, l.speed),
            Shape::Fan(f) => {
                let (p, s) = Front::fan_line(&f.fd, if right { f.fd.head_speed } else { f.fd.tail_speed });
                Edge::Line(p, s)
            }
            Shape::Traverse(tr) => {
                let path_side = matches!((tr.side, right), (FanSide::Right, false) | (FanSide::Left, true));
                if path_side {
                    Edge::Curve(&tr.path.samples)
                } else {
                    let s = if right { tr.fd.head_speed } else { tr.fd.tail_speed };
                    Edge::Line(tr.fd.center, s)
                }
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Edge<'a> {
    Line(Point, f64),
    Curve(&'a [PathSample]),
}

impl Edge<'_> {
    fn x(&self, t: f64) -> f64 {
        match self {
            Edge::Line(p, c) => p.x + c * (t - p.t),
            Edge::Curve(s) => interpolate(s, t, |s| s.x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pending {
    Meet(usize),
    Vanish(usize),
    TraverseEnd(usize),
}

struct Engine {
    t_max: f64,
    origin_x: f64,
    fronts: Vec<Front>,
    trajectories: Vec<Trajectory>,
    events: Vec<Event>,
    cells: Vec<Cell>,
    open_cells: Vec<(Option<usize>, Option<usize>, usize)>,
    fan_interactions: Vec<FanInteraction>,
    next_origin: usize,
}

/// Runs the interaction engine on a scenario.
pub fn run_scenario(s: &Scenario) -> Result<Timeline> {
    s.validate()?;
    // positions are tracked relative to the first breakpoint
    let origin_x = s.breakpoints[0];
    let mut eng = Engine {
        t_max: s.t_max,
        origin_x,
        fronts: vec![],
        trajectories: vec![],
        events: vec![],
        cells: vec![],
        open_cells: vec![],
        fan_interactions: vec![],
        next_origin: 0,
    };
    for (i, &x) in s.breakpoints.iter().enumerate() {
        let at = Point::new(x - origin_x, 0.0);
        let res = resolve(s.states[i], DeltaState::new(s.states[i + 1], s.delta(i))?, at)?;
        let origin = eng.fresh_origin();
        let fronts = eng.spawn(&res.fan, at, None, origin);
        eng.fronts.extend(fronts);
    }
    eng.refresh_cells(0.0, s.states[0]);
    eng.run(s.states[0])?;
    Ok(eng.finish())
}

impl Engine {
    fn fresh_origin(&mut self) -> usize {
        self.next_origin += 1;
        self.next_origin
    }

    fn new_traj(&mut self, kind: TrajectoryKind, family: Option<Family>, left: State, right: State, at: Point, path: Path, strength: Strength, start_event: Option<usize>) -> usize {
        let id = self.trajectories.len();
        self.trajectories.push(Trajectory {
            id,
            kind,
            family: family.map(Family::index),
            left,
            right,
            t_start: at.t,
            t_end: self.t_max,
            path,
            strength,
            start_event,
            end_event: None,
        });
        id
    }

    fn spawn(&mut self, fan: &WaveFan, at: Point, event: Option<usize>, origin: usize) -> Vec<Front> {
        let mut out = vec![];
        for w in &fan.waves {
            let shape = match *w {
                Wave::Shock { family, left, right, speed } => {
                    let path = Path::Line { x0: at.x, t0: at.t, speed };
                    let traj = self.new_traj(TrajectoryKind::Shock, Some(family), left, right, at, path, Strength::None, event);
                    Shape::Line(LineFront { traj, left, right, start: at, speed, zeta0: 0.0, k: 0.0, singular: false })
                }
                Wave::Singular(ss) => {
                    let path = Path::Line { x0: at.x, t0: at.t, speed: ss.speed };
                    let strength = Strength::Linear { zeta0: ss.zeta0, k: ss.k };
                    let traj = self.new_traj(TrajectoryKind::Singular, None, ss.left, ss.right, at, path, strength, event);
                    Shape::Line(LineFront {
                        traj,
                        left: ss.left,
                        right: ss.right,
                        start: at,
                        speed: ss.speed,
                        zeta0: ss.zeta0,
                        k: ss.k,
                        singular: true,
                    })
                }
                Wave::Rarefaction { family, left, right, tail_speed, head_speed } => {
                    let fd = FanDescriptor { family, center: at, tail_speed, head_speed, tail_state: left };
                    let head_state = fd.head_state();
                    let tail = self.new_traj(
                        TrajectoryKind::FanEdge,
                        Some(family),
                        left,
                        left,
                        at,
                        Path::Line { x0: at.x, t0: at.t, speed: tail_speed },
                        Strength::None,
                        event,
                    );
                    let head = self.new_traj(
                        TrajectoryKind::FanEdge,
                        Some(family),
                        head_state,
                        right,
                        at,
                        Path::Line { x0: at.x, t0: at.t, speed: head_speed },
                        Strength::None,
                        event,
                    );
                    Shape::Fan(FanFront { tail, head, fd })
                }
            };
            out.push(Front { shape, origin });
        }
        out
    }

    fn end_traj(&mut self, id: usize, t: f64, event: usize) {
        let tr = &mut self.trajectories[id];
        tr.t_end = t;
        tr.end_event = Some(event);
        if let Path::Curve { samples } = &mut tr.path {
            truncate_samples(samples, t);
        }
    }

    fn push_event(&mut self, kind: EventKind, at: Point, incoming: Vec<usize>, zeta: f64) -> usize {
        let id = self.events.len();
        self.events.push(Event { id, kind, x: at.x, t: at.t, incoming, outgoing: vec![], zeta });
        id
    }

    fn traj_ids(front: &Front) -> Vec<usize> {
        let (a, b) = front.edge_trajs();
        if a == b {
            vec![a]
        } else {
            vec![a, b]
        }
    }

    fn next_event(&self, now: f64) -> Result<Option<(f64, f64, Pending)>> {
        let mut cands: Vec<(f64, f64, Pending)> = vec![];
        for i in 0..self.fronts.len() {
            let f = &self.fronts[i];
            match &f.shape {
                Shape::Line(l) if l.singular && l.zeta0 > 0.0 && l.k < -CONSTANT_RATE_TOL => {
                    let t = l.start.t - l.zeta0 / l.k;
                    if t <= self.t_max {
                        cands.push((t, l.start.x + l.speed * (t - l.start.t), Pending::Vanish(i)));
                    }
                }
                Shape::Traverse(tr) if !matches!(tr.path.event, PathEvent::Completed { .. }) => {
                    let p = tr.path.event.point();
                    cands.push((p.t, p.x, Pending::TraverseEnd(i)));
                }
                _ => {}
            }
            if i + 1 < self.fronts.len() {
                let g = &self.fronts[i + 1];
                if f.origin == g.origin {
                    continue;
                }
                if let Some(p) = self.meet_fronts(f, g, now) {
                    cands.push((p.t, p.x, Pending::Meet(i)));
                }
            }
        }
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        if cands.len() >= 2 {
            let (a, b) = (cands[0], cands[1]);
            if (b.0 - a.0).abs() <= CONGESTION_T && (b.1 - a.1).abs() <= CONGESTION_X {
                return Err(Error::EventCongestion {
                    t1: a.0,
                    t2: b.0,
                    x1: a.1 + self.origin_x,
                    x2: b.1 + self.origin_x,
                });
            }
        }
        Ok(cands.first().copied())
    }

    fn meet_fronts(&self, f: &Front, g: &Front, now: f64) -> Option<Point> {
        let (a, b) = (f.edge(true), g.edge(false));
        match (a, b) {
            (Edge::Line(pa, ca), Edge::Line(pb, cb)) => meet_lines(pa, ca, pb, cb, self.t_max),
            _ => {
                let end = |e: &Edge| match e {
                    Edge::Curve(s) => s.last().map_or(now, |s| s.t),
                    Edge::Line(..) => self.t_max,
                };
                let t1 = end(&a).min(end(&b)).min(self.t_max);
                first_crossing(|t| b.x(t) - a.x(t), now, t1, 1e-3).map(|p| Point::new(a.x(p.t), p.t))
            }
        }
    }

    fn run(&mut self, far_left: State) -> Result<()> {
        let mut now = 0.0;
        for _ in 0..MAX_EVENTS {
            let Some((t, x, pending)) = self.next_event(now)? else {
                self.label_running_traversals();
                return Ok(());
            };
            let at = Point::new(x, t);
            let handled = match pending {
                Pending::Meet(i) => self.on_meet(i, at),
                Pending::Vanish(i) => self.on_vanish(i, at),
                Pending::TraverseEnd(i) => self.on_traverse_end(i, at),
            };
            handled.map_err(|e| Error::AtEvent { t, x: x + self.origin_x, source: Box::new(e) })?;
            now = t;
            self.refresh_cells(t, far_left);
        }
        Err(Error::ConvergenceFailure(MAX_EVENTS))
    }

    fn on_meet(&mut self, i: usize, at: Point) -> Result<()> {
        let (f, g) = (self.fronts[i].clone(), self.fronts[i + 1].clone());
        match (&f.shape, &g.shape) {
            (Shape::Line(l), Shape::Fan(fan)) if l.singular => {
                return self.start_traverse(i, l.clone(), fan.clone(), FanSide::Right, at);
            }
            (Shape::Fan(fan), Shape::Line(l)) if l.singular => {
                return self.start_traverse(i, l.clone(), fan.clone(), FanSide::Left, at);
            }
            _ => {}
        }
        let left = f.outer().0;
        let right = g.outer().1;
        let zeta = f.strength(at.t) + g.strength(at.t);
        let incoming: Vec<usize> = Engine::traj_ids(&f).into_iter().chain(Engine::traj_ids(&g)).collect();
        let ev = self.push_event(EventKind::Interaction, at, incoming.clone(), zeta);
        for id in incoming {
            self.end_traj(id, at.t, ev);
        }
        let res = resolve(left, DeltaState { state: right, zeta }, at)?;
        self.splice(i, 2, &res.fan, at, ev);
        Ok(())
    }

    fn on_vanish(&mut self, i: usize, at: Point) -> Result<()> {
        let Shape::Line(l) = self.fronts[i].shape.clone() else {
            unreachable!("vanish scheduled for a line front")
        };
        let ev = self.push_event(EventKind::Vanish, at, vec![l.traj], 0.0);
        self.end_traj(l.traj, at.t, ev);
        let fan = resolve_vanish(l.left, l.right)?;
        self.splice(i, 1, &fan, at, ev);
        Ok(())
    }

    fn splice(&mut self, i: usize, remove: usize, fan: &WaveFan, at: Point, ev: usize) {
        let origin = self.fresh_origin();
        let new = self.spawn(fan, at, Some(ev), origin);
        let outgoing: Vec<usize> = new.iter().flat_map(Engine::traj_ids).collect();
        self.events[ev].outgoing = outgoing;
        self.fronts.splice(i..i + remove, new);
    }

    fn start_traverse(&mut self, i: usize, l: LineFront, fan: FanFront, side: FanSide, at: Point) -> Result<()> {
        let zeta = (l.zeta0 + l.k * (at.t - l.start.t)).max(0.0);
        let (consumed_edge, edge) = match side {
            FanSide::Right => (fan.tail, fan.head),
            FanSide::Left => (fan.head, fan.tail),
        };
        let ev = self.push_event(EventKind::FanEntry, at, vec![l.traj, consumed_edge], zeta);
        self.end_traj(l.traj, at.t, ev);
        self.end_traj(consumed_edge, at.t, ev);
        let constant = match side {
            FanSide::Right => l.left,
            FanSide::Left => l.right,
        };
        let opts = PathOptions { steps_per_unit: 10_000, t_end: self.t_max, stop_on_exit: true, allow_band_exit: true };
        let path = integrate_path(constant, &fan.fd, side, at, zeta, opts)?;
        let (left, right) = match side {
            FanSide::Right => (l.left, fan.fd.tail_state),
            FanSide::Left => (fan.fd.head_state(), l.right),
        };
        let samples = thin(&path.samples);
        let traj = self.new_traj(
            TrajectoryKind::Singular,
            None,
            left,
            right,
            at,
            Path::Curve { samples },
            Strength::Sampled,
            Some(ev),
        );
        self.events[ev].outgoing = vec![traj];
        let interaction = self.fan_interactions.len();
        self.fan_interactions.push(FanInteraction {
            entry_event: ev,
            end_event: None,
            path: traj,
            side,
            family: fan.fd.family.index(),
            regimes: regimes(&path.samples),
            outcome: None,
            asymptotic: false,
        });
        let zero_length = path.event.point().t <= at.t && !matches!(path.event, PathEvent::Completed { .. });
        let origin = self.fresh_origin();
        let front = Front {
            shape: Shape::Traverse(TraverseFront { traj, edge, fd: fan.fd, side, constant, path, interaction }),
            origin,
        };
        self.fronts.splice(i..i + 2, [front]);
        if zero_length {
            let p = match &self.fronts[i].shape {
                Shape::Traverse(tr) => tr.path.event.point(),
                _ => unreachable!(),
            };
            self.on_traverse_end(i, p)?;
        }
        Ok(())
    }

    fn on_traverse_end(&mut self, i: usize, at: Point) -> Result<()> {
        let Shape::Traverse(tr) = self.fronts[i].shape.clone() else {
            unreachable!("traverse end scheduled for a traverse front")
        };
        let (kind, zeta) = match tr.path.event {
            PathEvent::Vanished { .. } => (EventKind::Vanish, 0.0),
            PathEvent::ExitedFan { beta, .. } => (EventKind::FanExit, beta),
            PathEvent::LeftBand { beta, .. } => (EventKind::BandExit, beta),
            PathEvent::Completed { .. } => unreachable!("completed paths are not events"),
        };
        let ev = self.push_event(kind, at, vec![tr.traj, tr.edge], zeta);
        self.end_traj(tr.traj, at.t, ev);
        self.end_traj(tr.edge, at.t, ev);
        let (left, right) = self.fronts[i].outer();
        let res = resolve(left, DeltaState { state: right, zeta }, at)?;
        let vanished = kind == EventKind::Vanish;
        let outcome = label_outcome(&tr.path, vanished, &res.fan);
        let fi = &mut self.fan_interactions[tr.interaction];
        fi.end_event = Some(ev);
        fi.outcome = outcome;
        self.splice(i, 1, &res.fan, at, ev);
        Ok(())
    }

    fn label_running_traversals(&mut self) {
        for f in &self.fronts {
            if let Shape::Traverse(tr) = &f.shape {
                if let Some(o) = asymptotic_outcome(tr) {
                    let fi = &mut self.fan_interactions[tr.interaction];
                    fi.outcome = Some(o);
                    fi.asymptotic = true;
                }
            }
        }
    }

    fn refresh_cells(&mut self, t: f64, far_left: State) {
        let mut keys = vec![];
        let mut state = far_left;
        let mut prev: Option<usize> = None;
        for f in &self.fronts {
            let (l, r) = f.edge_trajs();
            keys.push((prev, Some(l), state));
            prev = Some(r);
            state = f.outer().1;
        }
        keys.push((prev, None, state));
        let mut still_open = vec![];
        for &(l, r, idx) in &self.open_cells {
            if keys.iter().any(|k| k.0 == l && k.1 == r) {
                still_open.push((l, r, idx));
            } else {
                self.cells[idx].t_end = t;
            }
        }
        for (l, r, state) in keys {
            if !still_open.iter().any(|k| k.0 == l && k.1 == r) {
                self.cells.push(Cell { state, left: l, right: r, t_start: t, t_end: self.t_max });
                still_open.push((l, r, self.cells.len() - 1));
            }
        }
        self.open_cells = still_open;
    }

    fn finish(mut self) -> Timeline {
        let ox = self.origin_x;
        // traversals still running at t_max keep their samples up to t_max
        for tr in &mut self.trajectories {
            match &mut tr.path {
                Path::Line { x0, .. } => *x0 += ox,
                Path::Curve { samples } => samples.iter_mut().for_each(|s| s.x += ox),
            }
        }
        for ev in &mut self.events {
            ev.x += ox;
        }
        Timeline {
            t_max: self.t_max,
            trajectories: self.trajectories,
            events: self.events,
            cells: self.cells,
            fan_interactions: self.fan_interactions,
        }
    }
}

fn truncate_samples(samples: &mut Vec<PathSample>, t: f64) {
    if samples.last().is_none_or(|s| s.t <= t) {
        return;
    }
    let x = interpolate(samples, t, |s| s.x);
    let c = interpolate(samples, t, |s| s.c);
    let beta = interpolate(samples, t, |s| s.beta).max(0.0);
    samples.retain(|s| s.t < t);
    samples.push(PathSample { t, x, c, beta });
}

fn thin(samples: &[PathSample]) -> Vec<PathSample> {
    let stride = samples.len().div_ceil(MAX_CURVE_SAMPLES).max(1);
    let mut out: Vec<PathSample> = samples.iter().step_by(stride).copied().collect();
    if let Some(last) = samples.last() {
        if out.last() != Some(last) {
            out.push(*last);
        }
    }
    out
}

/// Sequence of strength regimes along sampled `beta`.
pub fn regimes(samples: &[PathSample]) -> Vec<Regime> {
    let mut out: Vec<Regime> = vec![];
    for w in samples.windows(2) {
        let dt = w[1].t - w[0].t;
        if dt <= 0.0 {
            continue;
        }
        let rate = (w[1].beta - w[0].beta) / dt;
        let r = if rate > CONSTANT_RATE_TOL {
            Regime::Growing
        } else if rate < -CONSTANT_RATE_TOL {
            Regime::Decaying
        } else {
            Regime::Constant
        };
        if out.last() != Some(&r) {
            out.push(r);
        }
    }
    out
}

fn rate_class(k: f64) -> std::cmp::Ordering {
    if k > CONSTANT_RATE_TOL {
        std::cmp::Ordering::Greater
    } else if k < -CONSTANT_RATE_TOL {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Equal
    }
}

/// A singular shock inside a 2-fan on its right (1-fan on its left) cannot
/// cross the fan ray on which its speed equals the fan characteristic speed;
/// it approaches that ray. The limit is the composite wave whose middle state
/// lies inside the fan.
fn asymptotic_outcome(tr: &TraverseFront) -> Option<Outcome> {
    let end = tr.path.terminal();
    let at = Point::new(end.x, end.t);
    let (tail, head) = (tr.fd.tail_state, tr.fd.head_state());
    let (middle, fan) = match (tr.side, tr.fd.family) {
        (FanSide::Right, Family::Two) => (
            composite_r2_middle(tr.constant, head).ok()?,
            solve_composite_r2(tr.constant, head, end.beta, at).ok()?,
        ),
        (FanSide::Left, Family::One) => (
            composite_r1_middle(tail, tr.constant).ok()?,
            solve_composite_r1(tail, tr.constant, end.beta, at).ok()?,
        ),
        _ => return None,
    };
    let inside = middle.u >= tail.u - 1e-9 && middle.u <= head.u + 1e-9;
    inside.then(|| label_outcome(&tr.path, false, &fan)).flatten()
}

/// Labels a fan traversal by the strength history along the path and the
/// wave structure emitted at its end.
pub fn label_outcome(path: &PathTrajectory, vanished: bool, post: &WaveFan) -> Option<Outcome> {
    use std::cmp::Ordering::*;
    let decayed = vanished || path.min_rate < -CONSTANT_RATE_TOL;
    let kinds: Vec<char> = post
        .waves
        .iter()
        .map(|w| match w {
            Wave::Shock { .. } => 's',
            Wave::Singular(_) => 'x',
            Wave::Rarefaction { family: Family::One, .. } => '1',
            Wave::Rarefaction { family: Family::Two, .. } => '2',
        })
        .collect();
    let k = post.singular().map(|s| rate_class(s.k));
    match (kinds.as_slice(), k) {
        (['s', 's'], _) if vanished => Some(Outcome::D),
        (['x'], Some(Greater)) => Some(if decayed { Outcome::D } else { Outcome::A }),
        (['x'], Some(Less)) => Some(Outcome::D),
        (['1', 'x'], Some(Greater)) => Some(Outcome::B),
        (['1', 'x'], Some(Equal)) => Some(if decayed { Outcome::G } else { Outcome::E }),
        (['1', 'x'], Some(Less)) => Some(Outcome::G),
        (['x', '2'], Some(Greater)) => Some(Outcome::C),
        (['x', '2'], Some(Equal)) => Some(if decayed { Outcome::G } else { Outcome::F }),
        (['x', '2'], Some(Less)) => Some(Outcome::G),
        _ => None,
    }
}
