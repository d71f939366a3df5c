//! C ABI over the `singshock` solver.
//!
//! Every fallible function returns an [`SsStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`ss_last_error`] on the same thread. Strings returned through
//! out-pointers are owned by the caller and released with [`ss_string_free`];
//! timelines are released with [`ss_timeline_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use singshock::cli::{self, ScenarioFile, SolutionDescriptor};
use singshock::curves::{classify, Region};
use singshock::interact::{run_scenario, EventKind, Scenario, Timeline, TrajectoryKind};
use singshock::{Error, State};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    /// No admissible Riemann solution for the data.
    NoSolution = 4,
    /// A numerical step failed to converge or left its domain.
    Numerical = 5,
    /// The interaction engine could not resolve an event.
    Engine = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsRegion {
    Q7 = 0,
    SdslOnly = 1,
    AboveD = 2,
    BelowE = 3,
    OnJ1 = 4,
    HatD = 5,
    HatHatD = 6,
    HatE = 7,
    HatHatE = 8,
    D0 = 9,
    Classical = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsTrajectoryKind {
    Shock = 0,
    Singular = 1,
    FanEdge = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsEventKind {
    Interaction = 0,
    FanEntry = 1,
    FanExit = 2,
    BandExit = 3,
    Vanish = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsTrajectoryInfo {
    pub kind: SsTrajectoryKind,
    /// 1 or 2 for classical waves, 0 otherwise.
    pub family: u8,
    pub curved: bool,
    pub t_start: f64,
    pub t_end: f64,
    pub x_start: f64,
    pub x_end: f64,
    pub strength_start: f64,
    pub strength_end: f64,
    /// Event ids, or -1.
    pub start_event: i64,
    pub end_event: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsEventInfo {
    pub kind: SsEventKind,
    pub t: f64,
    pub x: f64,
    pub zeta: f64,
    pub incoming: usize,
    pub outgoing: usize,
}

/// Opaque solved scenario.
pub struct SsTimeline {
    scenario: Scenario,
    timeline: Timeline,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SsStatus {
    match e.root() {
        Error::Invalid(_) => SsStatus::InvalidInput,
        Error::Domain { .. }
        | Error::DegenerateJump { .. }
        | Error::NotRepresentable { .. }
        | Error::NoClassicalSolution(..)
        | Error::Unresolvable(..)
        | Error::OutsideSdsl(..) => SsStatus::NoSolution,
        Error::EventCongestion { .. } | Error::ExpectedTwoShocks { .. } | Error::OvercompressibilityLost { .. } => {
            SsStatus::Engine
        }
        _ => SsStatus::Numerical,
    }
}

struct Failure(SsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SsStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a>(h: *const SsTimeline) -> Result<&'a SsTimeline, Failure> {
    h.as_ref().ok_or_else(|| null("timeline"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(SsStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn region(r: Region) -> SsRegion {
    match r {
        Region::Q7 => SsRegion::Q7,
        Region::SdslOnly => SsRegion::SdslOnly,
        Region::AboveD => SsRegion::AboveD,
        Region::BelowE => SsRegion::BelowE,
        Region::OnJ1 => SsRegion::OnJ1,
        Region::HatD => SsRegion::HatD,
        Region::HatHatD => SsRegion::HatHatD,
        Region::HatE => SsRegion::HatE,
        Region::HatHatE => SsRegion::HatHatE,
        Region::D0 => SsRegion::D0,
        Region::Classical => SsRegion::Classical,
    }
}

fn finite(values: &[f64]) -> Result<(), Failure> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Failure(SsStatus::InvalidInput, "non-finite argument".into()))
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread; empty after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn ss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Classifies `(u, v)` relative to the base state `(base_u, base_v)`.
///
/// # Safety
/// `out_region` must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn ss_classify(base_u: f64, base_v: f64, u: f64, v: f64, out_region: *mut SsRegion) -> SsStatus {
    guard(|| {
        let dst = out(out_region, "out_region")?;
        finite(&[base_u, base_v, u, v])?;
        *dst = region(classify(State::new(base_u, base_v), State::new(u, v)).region);
        Ok(())
    })
}

/// Solves the Riemann problem with an incoming delta of strength `zeta` and
/// writes the JSON description of the wave fan to `out_json`.
///
/// # Safety
/// `out_json` must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn ss_riemann_json(
    left_u: f64,
    left_v: f64,
    right_u: f64,
    right_v: f64,
    zeta: f64,
    out_json: *mut *mut c_char,
) -> SsStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        finite(&[left_u, left_v, right_u, right_v, zeta])?;
        let d = cli::riemann_descriptor(State::new(left_u, left_v), State::new(right_u, right_v), zeta)?;
        let json = serde_json::to_string(&d).map_err(|e| Failure(SsStatus::Numerical, e.to_string()))?;
        *dst = owned(json);
        Ok(())
    })
}

/// Runs the interaction engine on a scenario given as JSON
/// (`states`, `breakpoints`, optional `deltas`, `t_max`).
///
/// # Safety
/// `scenario_json` must be null or a NUL-terminated string; `out_timeline`
/// must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn ss_simulate(scenario_json: *const c_char, out_timeline: *mut *mut SsTimeline) -> SsStatus {
    guard(|| {
        let dst = out(out_timeline, "out_timeline")?;
        let scenario = ScenarioFile::parse(text(scenario_json, "scenario_json")?)?.to_scenario()?;
        let timeline = run_scenario(&scenario)?;
        *dst = Box::into_raw(Box::new(SsTimeline { scenario, timeline }));
        Ok(())
    })
}

/// # Safety
/// `timeline` must be null or a handle from [`ss_simulate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_timeline_free(timeline: *mut SsTimeline) {
    if !timeline.is_null() {
        drop(Box::from_raw(timeline));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ss_timeline_counts(
    timeline: *const SsTimeline,
    out_trajectories: *mut usize,
    out_events: *mut usize,
) -> SsStatus {
    guard(|| {
        let h = handle(timeline)?;
        *out(out_trajectories, "out_trajectories")? = h.timeline.trajectories.len();
        *out(out_events, "out_events")? = h.timeline.events.len();
        Ok(())
    })
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ss_timeline_trajectory(
    timeline: *const SsTimeline,
    index: usize,
    out_info: *mut SsTrajectoryInfo,
) -> SsStatus {
    guard(|| {
        let h = handle(timeline)?;
        let dst = out(out_info, "out_info")?;
        let tr = h
            .timeline
            .trajectories
            .get(index)
            .ok_or_else(|| Failure(SsStatus::OutOfRange, format!("no trajectory {index}")))?;
        let id = |e: Option<usize>| e.map_or(-1, |i| i as i64);
        *dst = SsTrajectoryInfo {
            kind: match tr.kind {
                TrajectoryKind::Shock => SsTrajectoryKind::Shock,
                TrajectoryKind::Singular => SsTrajectoryKind::Singular,
                TrajectoryKind::FanEdge => SsTrajectoryKind::FanEdge,
            },
            family: tr.family.unwrap_or(0),
            curved: tr.is_curved(),
            t_start: tr.t_start,
            t_end: tr.t_end,
            x_start: tr.position(tr.t_start),
            x_end: tr.position(tr.t_end),
            strength_start: tr.strength_at(tr.t_start),
            strength_end: tr.strength_at(tr.t_end),
            start_event: id(tr.start_event),
            end_event: id(tr.end_event),
        };
        Ok(())
    })
}

/// Position and delta strength of a trajectory at time `t` within its life.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ss_timeline_sample(
    timeline: *const SsTimeline,
    index: usize,
    t: f64,
    out_x: *mut f64,
    out_strength: *mut f64,
) -> SsStatus {
    guard(|| {
        let h = handle(timeline)?;
        let tr = h
            .timeline
            .trajectories
            .get(index)
            .ok_or_else(|| Failure(SsStatus::OutOfRange, format!("no trajectory {index}")))?;
        if !(tr.t_start..=tr.t_end).contains(&t) {
            return Err(Failure(SsStatus::OutOfRange, format!("t = {t} outside [{}, {}]", tr.t_start, tr.t_end)));
        }
        *out(out_x, "out_x")? = tr.position(t);
        *out(out_strength, "out_strength")? = tr.strength_at(t);
        Ok(())
    })
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ss_timeline_event(
    timeline: *const SsTimeline,
    index: usize,
    out_info: *mut SsEventInfo,
) -> SsStatus {
    guard(|| {
        let h = handle(timeline)?;
        let dst = out(out_info, "out_info")?;
        let ev = h
            .timeline
            .events
            .get(index)
            .ok_or_else(|| Failure(SsStatus::OutOfRange, format!("no event {index}")))?;
        *dst = SsEventInfo {
            kind: match ev.kind {
                EventKind::Interaction => SsEventKind::Interaction,
                EventKind::FanEntry => SsEventKind::FanEntry,
                EventKind::FanExit => SsEventKind::FanExit,
                EventKind::BandExit => SsEventKind::BandExit,
                EventKind::Vanish => SsEventKind::Vanish,
            },
            t: ev.t,
            x: ev.x,
            zeta: ev.zeta,
            incoming: ev.incoming.len(),
            outgoing: ev.outgoing.len(),
        };
        Ok(())
    })
}

unsafe fn export(
    timeline: *const SsTimeline,
    out_text: *mut *mut c_char,
    render: impl FnOnce(&SsTimeline) -> String,
) -> SsStatus {
    guard(|| {
        let h = handle(timeline)?;
        let dst = out(out_text, "out_text")?;
        *dst = owned(render(h));
        Ok(())
    })
}

/// Solution descriptor JSON, readable by the command-line tool.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ss_timeline_to_json(timeline: *const SsTimeline, out_json: *mut *mut c_char) -> SsStatus {
    export(timeline, out_json, |h| SolutionDescriptor::new(&h.scenario, h.timeline.clone()).to_json())
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ss_timeline_to_csv(timeline: *const SsTimeline, out_csv: *mut *mut c_char) -> SsStatus {
    export(timeline, out_csv, |h| cli::trajectories_csv(&h.timeline))
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ss_timeline_to_svg(timeline: *const SsTimeline, out_svg: *mut *mut c_char) -> SsStatus {
    export(timeline, out_svg, |h| cli::render_svg(&h.timeline))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Invalid("x".into())), SsStatus::InvalidInput);
        assert_eq!(status_of(&Error::OutsideSdsl([0.0; 2], [1.0; 2])), SsStatus::NoSolution);
        let wrapped = Error::AtEvent {
            t: 1.0,
            x: 0.0,
            source: Box::new(Error::EventCongestion { t1: 1.0, t2: 1.0, x1: 0.0, x2: 0.0 }),
        };
        assert_eq!(status_of(&wrapped), SsStatus::Engine);
        assert_eq!(status_of(&Error::ConvergenceFailure(10)), SsStatus::Numerical);
    }

    #[test]
    fn regions_map_in_order() {
        for (i, r) in Region::ALL.into_iter().enumerate() {
            assert_eq!(region(r) as usize, i);
        }
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), SsStatus::Panic);
        let msg = unsafe { CStr::from_ptr(ss_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }
}
