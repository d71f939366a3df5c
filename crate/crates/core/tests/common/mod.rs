#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singshock::curves::{classify, curve_d_v, curve_e_v, hugoniot_v, locus_points, rarefaction_v, Branch, Family, Region};
use singshock::interact::{Outcome, Scenario};
use singshock::singular::{shock_speed, SingularShock, Point};
use singshock::states::flux;
use singshock::State;

pub const O: State = State::new(0.0, 0.0);
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Seed from `SINGSHOCK_SEED`, or a fixed default.
pub fn seed() -> u64 {
    std::env::var("SINGSHOCK_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn random_base(r: &mut impl Rng) -> State {
    State::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0))
}

/// Uniform point of `Q7(base)` with `u` in `[u0 - 7, u0 - 3]`.
pub fn q7_point(r: &mut impl Rng, base: State) -> State {
    loop {
        let u = r.gen_range(base.u - 7.0..base.u - 3.0);
        let (e, d) = (curve_e_v(base, u), curve_d_v(base, u));
        let q = State::new(u, r.gen_range(e..d));
        if classify(base, q).region == Region::Q7 {
            return q;
        }
    }
}

/// Singular shock `L -> U1` catching a classical 1- or 2-shock `U1 -> U2`.
#[derive(Debug, Clone, Copy)]
pub struct DssSwCase {
    pub left: State,
    pub middle: State,
    pub right: State,
    pub zeta: f64,
}

pub fn dss_sw_case(r: &mut impl Rng) -> DssSwCase {
    loop {
        let left = random_base(r);
        let middle = q7_point(r, left);
        let branch = if r.gen_bool(0.5) { Branch::Plus } else { Branch::Minus };
        let u = middle.u - r.gen_range(0.01..2.99);
        let Ok(v) = hugoniot_v(middle, u, branch) else { continue };
        let right = State::new(u, v);
        if singshock::riemann::solve_classical(middle, right).is_err() {
            continue;
        }
        return DssSwCase { left, middle, right, zeta: r.gen_range(0.1..5.0) };
    }
}

/// Two singular shocks `L -> U1 -> U2`, the second faster from the left.
#[derive(Debug, Clone, Copy)]
pub struct DoubleSingular {
    pub left: State,
    pub middle: State,
    pub right: State,
    pub first: SingularShock,
    pub second: SingularShock,
}

pub fn double_singular(r: &mut impl Rng) -> DoubleSingular {
    loop {
        let left = random_base(r);
        let middle = q7_point(r, left);
        let right = q7_point(r, middle);
        let first = SingularShock::new(left, middle, 0.0, Point::new(0.0, 0.0)).unwrap();
        let second = SingularShock::new(middle, right, 0.0, Point::new(0.0, 0.0)).unwrap();
        if second.speed < first.speed {
            return DoubleSingular { left, middle, right, first, second };
        }
    }
}

/// Data `(L, U2)` with `u2 <= u0 - 6`, spread over all three trichotomy regions.
pub fn far_left_pair(r: &mut impl Rng) -> (State, State) {
    let left = random_base(r);
    let u = r.gen_range(left.u - 10.0..left.u - 6.0);
    let (e, d) = (curve_e_v(left, u), curve_d_v(left, u));
    let w = d - e;
    (left, State::new(u, r.gen_range(e - w..d + w)))
}

/// Expected trichotomy branch from the region of the right state alone:
/// 0 single singular shock, 1 rarefaction then singular, 2 singular then rarefaction.
pub fn trichotomy_branch(left: State, right: State) -> u8 {
    if right.v > curve_d_v(left, right.u) {
        1
    } else if right.v < curve_e_v(left, right.u) {
        2
    } else {
        0
    }
}

/// Rankine–Hugoniot residuals `(c[u] - [f1], c[v] - [f2])`.
pub fn rh_residual(left: State, right: State, c: f64) -> (f64, f64) {
    let (fl, fr) = (flux(left), flux(right));
    (c * (right.u - left.u) - (fr.f1 - fl.f1), c * (right.v - left.v) - (fr.f2 - fl.f2))
}

pub fn classical_speed(left: State, right: State) -> f64 {
    shock_speed(left, right).unwrap()
}

/// Singular shock from `L` into a rarefaction fan centred at the origin.
#[derive(Debug, Clone, Copy)]
pub struct FanCase {
    pub outcome: Outcome,
    pub family: Family,
    pub left: State,
    pub tail: State,
    pub head: State,
    pub zeta: f64,
}

impl FanCase {
    pub fn scenario(&self) -> Scenario {
        Scenario::new(vec![self.left, self.tail, self.head], vec![-1.0, 0.0], vec![self.zeta, 0.0], 20.0).unwrap()
    }

    /// Plain fan state at `(x, t)`, clamped to the fan edges.
    pub fn fan_state(&self, x: f64, t: f64) -> State {
        let xi = x / t;
        let (lo, hi) = match self.family {
            Family::One => (self.tail.u - 1.0, self.head.u - 1.0),
            Family::Two => (self.tail.u + 1.0, self.head.u + 1.0),
        };
        singshock::riemann::rarefaction_state(self.family, self.tail, xi.clamp(lo, hi))
    }
}

fn along(base: State, family: Family, tail_u: f64, head_u: f64) -> (State, State) {
    (
        State::new(tail_u, rarefaction_v(base, tail_u, family)),
        State::new(head_u, rarefaction_v(base, head_u, family)),
    )
}

fn fan_from(tail: State, family: Family, width: f64) -> (State, State) {
    (tail, State::new(tail.u + width, rarefaction_v(tail, tail.u + width, family)))
}

/// One scenario per outcome (a)–(g), all with left state `(0, 0)`.
pub fn outcome_suite() -> Vec<FanCase> {
    let lp = locus_points(O);
    let case = |outcome, family, (tail, head): (State, State), zeta| FanCase { outcome, family, left: O, tail, head, zeta };
    vec![
        case(Outcome::A, Family::Two, fan_from(State::new(-5.363793379791813, 18.30156336504275), Family::Two, 1.117327352064413), 0.0),
        case(Outcome::B, Family::One, fan_from(State::new(-3.345330897631156, 7.382473498372974), Family::One, 0.8073094283891322), 0.0),
        case(Outcome::C, Family::Two, fan_from(State::new(-5.351844254820205, 7.839429817588776), Family::Two, 1.177690696162109), 0.0),
        case(Outcome::D, Family::One, fan_from(State::new(-3.3, 4.3), Family::One, 0.5), 2.0),
        case(Outcome::E, Family::One, along(lp.g_tilde, Family::One, -3.5, -2.5), 0.0),
        case(Outcome::F, Family::Two, along(lp.d_tilde, Family::Two, -3.5, -2.5), 0.0),
        case(Outcome::G, Family::One, fan_from(State::new(-3.507142676732372, 6.60721320418649), Family::One, 0.9574739828238479), 0.0),
    ]
}

/// The case-(iii) scenario: a singular shock with an initial delta crosses a
/// 1-fan into the Hugoniot loop and decays to zero.
pub fn case_iii() -> FanCase {
    outcome_suite().into_iter().find(|c| c.outcome == Outcome::D).unwrap()
}

/// Singular shock `(0,0) -> (-4,6)` behind a 1-shock it overtakes.
pub fn two_jump() -> Scenario {
    let u1 = State::new(-4.0, 6.0);
    let u2 = State::new(-5.0, hugoniot_v(u1, -5.0, Branch::Plus).unwrap());
    Scenario::new(vec![O, u1, u2], vec![-1.0, 0.0], vec![], 4.0).unwrap()
}

pub fn canonical() -> Scenario {
    Scenario::riemann(O, State::new(-4.0, 6.0), 1.0).unwrap()
}
