use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("u = {u} is outside the Hugoniot domain |u - u0| <= sqrt(12) around u0 = {u0}")]
    Domain { u0: f64, u: f64 },
    #[error("degenerate jump: left and right u coincide ({u})")]
    DegenerateJump { u: f64 },
    #[error("speed {c} is outside [{u1}, {u0}]; split coefficients would be negative")]
    NotRepresentable { c: f64, u0: f64, u1: f64 },
    #[error("strength became negative ({beta}) at t = {t}")]
    NegativeStrength { t: f64, beta: f64 },
    #[error("no classical Riemann solution from ({0:?}) to ({1:?})")]
    NoClassicalSolution([f64; 2], [f64; 2]),
    #[error("root finder did not converge after {0} iterations")]
    ConvergenceFailure(usize),
    #[error("no solution branch applies from ({0:?}) to ({1:?})")]
    Unresolvable([f64; 2], [f64; 2]),
    #[error("right state ({1:?}) is outside the second delta singular locus of ({0:?})")]
    OutsideSdsl([f64; 2], [f64; 2]),
    #[error("similarity coordinate {xi} outside fan [{tail}, {head}]")]
    OutsideFan { xi: f64, tail: f64, head: f64 },
    #[error("overcompressibility lost at t = {t}, x = {x}: path speed {c}, bound {bound}")]
    OvercompressibilityLost { t: f64, x: f64, c: f64, bound: f64 },
    #[error("closed-form path speed has a pole at u0 = 1")]
    Pole,
    #[error("strength vanished but re-solve gave {found} wave(s) instead of two Lax shocks")]
    ExpectedTwoShocks { found: usize },
    #[error("events at t = {t1} and t = {t2} coincide (x = {x1}, x = {x2})")]
    EventCongestion { t1: f64, t2: f64, x1: f64, x2: f64 },
    #[error("finite-volume solution blew up at t = {t}")]
    BlowUp { t: f64 },
    #[error("no front found in snapshot (max jump {0})")]
    NoFront(f64),
    #[error("measurement window [{lo}, {hi}] leaves the domain")]
    WindowClipped { lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("while resolving the event at t = {t}, x = {x}: {source}")]
    AtEvent { t: f64, x: f64, source: Box<Error> },
}

impl Error {
    /// The underlying error, without event context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtEvent { source, .. } => source.root(),
            e => e,
        }
    }
}
