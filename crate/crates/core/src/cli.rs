//! Command-line front end.
//!
//! Four subcommands: `classify` prints the region of a right state,
//! `riemann` emits the JSON descriptor of one Riemann solution, `simulate`
//! runs the interaction engine on a scenario file and writes
//! `solution.json`, `trajectories.csv` and `diagram.svg`, and `oracle` runs
//! the finite-volume scheme and compares it with the analytic front.
//!
//! Exit codes: 0 success, 2 bad input, 3 Riemann solver failure, 4 engine
//! failure, 5 oracle failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::curves::{classify, curve_values, Region};
use crate::fvoracle::{self, FieldSnapshot, Grid, RunOptions};
use crate::interact::{run_scenario, EventKind, FanInteraction, Path, Scenario, Strength, Timeline, TrajectoryKind};
use crate::riemann::{solve_with_delta, Wave};
use crate::states::{DeltaState, State};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RIEMANN: i32 = 3;
pub const EXIT_ENGINE: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;

pub const DESCRIPTOR_FORMAT: &str = "singshock-solution";
pub const DESCRIPTOR_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "singshock", version, about = "Singular shock solver for the ion-acoustic system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Region of a right state relative to a base state.
    Classify {
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        base: State,
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        point: State,
    },
    /// Solve one Riemann problem, optionally with a delta of strength `zeta` at the jump.
    Riemann {
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        left: State,
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        right: State,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        zeta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the interaction engine on a scenario file.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the finite-volume oracle and compare with the analytic front.
    Oracle {
        scenario: PathBuf,
        #[arg(long)]
        cells: usize,
        #[arg(long = "t-end")]
        t_end: f64,
        #[arg(long, default_value_t = 0.45)]
        cfl: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Parses `u,v`.
pub fn parse_state(s: &str) -> std::result::Result<State, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [u, v] = parts.as_slice() else {
        return Err(format!("expected u,v but got {s:?}"));
    };
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    State::checked(num(u)?, num(v)?).map_err(|e| e.to_string())
}

/// Scenario as stored on disk: states are `[u, v]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub states: Vec<[f64; 2]>,
    pub breakpoints: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<f64>,
    pub t_max: f64,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("scenario: {e}")))?;
        f.to_scenario()?;
        Ok(f)
    }

    pub fn read(path: &FsPath) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        ScenarioFile::parse(&text)
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        Scenario::new(
            self.states.iter().map(|&s| State::from(s)).collect(),
            self.breakpoints.clone(),
            self.deltas.clone(),
            self.t_max,
        )
    }

    pub fn from_scenario(s: &Scenario) -> Self {
        ScenarioFile {
            states: s.states.iter().map(|s| s.to_array()).collect(),
            breakpoints: s.breakpoints.clone(),
            deltas: s.deltas.clone(),
            t_max: s.t_max,
        }
    }
}

/// Sampled view of one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryView {
    pub id: usize,
    pub kind: TrajectoryKind,
    /// `(t, x)` samples.
    pub path: Vec<[f64; 2]>,
    /// `(t, beta)` samples; empty for classical fronts.
    pub strength: Vec<[f64; 2]>,
}

/// JSON document written by `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDescriptor {
    pub format: String,
    pub version: u32,
    pub scenario: ScenarioFile,
    pub views: Vec<TrajectoryView>,
    pub timeline: Timeline,
}

impl SolutionDescriptor {
    pub fn new(scenario: &Scenario, timeline: Timeline) -> Self {
        let views = timeline
            .trajectories
            .iter()
            .map(|t| TrajectoryView { id: t.id, kind: t.kind, path: t.polyline(), strength: t.strength_samples() })
            .collect();
        SolutionDescriptor {
            format: DESCRIPTOR_FORMAT.into(),
            version: DESCRIPTOR_VERSION,
            scenario: ScenarioFile::from_scenario(scenario),
            views,
            timeline,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    /// Parses and checks that every reference resolves.
    pub fn parse(text: &str) -> Result<Self> {
        let d: SolutionDescriptor = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("descriptor: {e}")))?;
        if d.format != DESCRIPTOR_FORMAT {
            return Err(Error::Invalid(format!("unknown format {}", d.format)));
        }
        d.timeline.validate()?;
        let n = d.timeline.trajectories.len();
        if d.views.len() != n || d.views.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(Error::Invalid("views do not match trajectories".into()));
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularSummary {
    pub speed: f64,
    pub k: f64,
    pub zeta0: f64,
    pub alpha_split: [f64; 2],
}

/// JSON document written by `riemann`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannDescriptor {
    pub left: State,
    pub right: State,
    pub zeta: f64,
    pub region: Region,
    pub waves: Vec<Wave>,
    pub singular: Option<SingularSummary>,
}

pub fn riemann_descriptor(left: State, right: State, zeta: f64) -> Result<RiemannDescriptor> {
    let fan = solve_with_delta(left, DeltaState::new(right, zeta)?)?;
    let singular = fan.singular().map(|s| SingularSummary {
        speed: s.speed,
        k: s.k,
        zeta0: s.zeta0,
        alpha_split: [s.alpha0_sq_per_beta, s.alpha1_sq_per_beta],
    });
    Ok(RiemannDescriptor { left, right, zeta, region: classify(left, right).region, waves: fan.waves, singular })
}

/// Machine-readable error body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
}

impl ErrorReport {
    pub fn new(e: &Error) -> Self {
        ErrorReport { error: error_kind(e).into(), message: e.to_string() }
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e.root() {
        Error::Domain { .. } => "domain",
        Error::DegenerateJump { .. } => "degenerate_jump",
        Error::NotRepresentable { .. } => "not_representable",
        Error::NegativeStrength { .. } => "negative_strength",
        Error::NoClassicalSolution(..) => "no_classical_solution",
        Error::ConvergenceFailure(_) => "convergence_failure",
        Error::Unresolvable(..) => "unresolvable",
        Error::OutsideSdsl(..) => "outside_sdsl",
        Error::OutsideFan { .. } => "outside_fan",
        Error::OvercompressibilityLost { .. } => "overcompressibility_lost",
        Error::Pole => "pole",
        Error::ExpectedTwoShocks { .. } => "expected_two_shocks",
        Error::EventCongestion { .. } => "event_congestion",
        Error::BlowUp { .. } => "blow_up",
        Error::NoFront(_) => "no_front",
        Error::WindowClipped { .. } => "window_clipped",
        Error::Invalid(_) => "invalid",
        Error::AtEvent { .. } => unreachable!(),
    }
}

/// `trajectory_id,t,x,beta` rows.
pub fn trajectories_csv(tl: &Timeline) -> String {
    let mut s = String::from("trajectory_id,t,x,beta\n");
    for tr in &tl.trajectories {
        let times: Vec<f64> = match &tr.path {
            Path::Line { .. } => vec![tr.t_start, tr.t_end],
            Path::Curve { samples } => samples.iter().map(|p| p.t).collect(),
        };
        for t in times {
            let _ = writeln!(s, "{},{},{},{}", tr.id, t, tr.position(t), tr.strength_at(t));
        }
    }
    s
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 600.0;
const SVG_MARGIN: f64 = 50.0;
const LINE_PIECES: usize = 24;

struct Frame {
    x0: f64,
    x1: f64,
    t1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        SVG_MARGIN + (x - self.x0) / (self.x1 - self.x0) * (SVG_W - 2.0 * SVG_MARGIN)
    }

    fn py(&self, t: f64) -> f64 {
        SVG_H - SVG_MARGIN - t / self.t1 * (SVG_H - 2.0 * SVG_MARGIN)
    }
}

/// Static x–t diagram. Output depends only on the timeline.
pub fn render_svg(tl: &Timeline) -> String {
    let pts: Vec<[f64; 2]> = tl.trajectories.iter().flat_map(|t| t.polyline()).collect();
    let (mut x0, mut x1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[1]), b.max(p[1])));
    if !(x0.is_finite() && x1.is_finite()) || x1 - x0 < 1e-9 {
        let c = if x0.is_finite() { x0 } else { 0.0 };
        x0 = c - 1.0;
        x1 = c + 1.0;
    }
    let pad = 0.05 * (x1 - x0);
    let fr = Frame { x0: x0 - pad, x1: x1 + pad, t1: tl.t_max };
    let beta_max = tl
        .trajectories
        .iter()
        .filter(|t| t.is_singular())
        .flat_map(|t| t.strength_samples())
        .fold(0.0f64, |m, s| m.max(s[1]));

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="white"/>"#);
    let (l, r, b, t) = (fr.px(fr.x0), fr.px(fr.x1), fr.py(0.0), fr.py(fr.t1));
    let _ = writeln!(
        s,
        r##"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444" stroke-width="0.8"/>"##,
        r - l,
        b - t
    );
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{text}</text>"#);
    };
    label(&mut s, l, b + 16.0, "start", format!("x = {:.3}", fr.x0));
    label(&mut s, r, b + 16.0, "end", format!("x = {:.3}", fr.x1));
    label(&mut s, l - 6.0, b + 4.0, "end", "t = 0".into());
    label(&mut s, l - 6.0, t + 4.0, "end", format!("t = {:.3}", fr.t1));

    for tr in &tl.trajectories {
        match tr.kind {
            TrajectoryKind::FanEdge | TrajectoryKind::Shock => {
                let style = if tr.kind == TrajectoryKind::FanEdge {
                    r##"stroke="#888" stroke-width="0.8" stroke-dasharray="4 3""##
                } else {
                    r##"stroke="#1f4e9c" stroke-width="1.2""##
                };
                let pts: Vec<String> =
                    tr.polyline().iter().map(|p| format!("{:.2},{:.2}", fr.px(p[1]), fr.py(p[0]))).collect();
                let _ = writeln!(s, r#"<polyline points="{}" fill="none" {style}/>"#, pts.join(" "));
            }
            TrajectoryKind::Singular => {
                let times: Vec<f64> = match &tr.path {
                    Path::Line { .. } => (0..=LINE_PIECES)
                        .map(|i| tr.t_start + (tr.t_end - tr.t_start) * i as f64 / LINE_PIECES as f64)
                        .collect(),
                    Path::Curve { samples } => samples.iter().map(|p| p.t).collect(),
                };
                for w in times.windows(2) {
                    let beta = 0.5 * (tr.strength_at(w[0]) + tr.strength_at(w[1]));
                    let width = 2.0 + if beta_max > 0.0 { 4.0 * beta / beta_max } else { 0.0 };
                    let _ = writeln!(
                        s,
                        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#b22222" stroke-width="{width:.2}" stroke-linecap="round"/>"##,
                        fr.px(tr.position(w[0])),
                        fr.py(w[0]),
                        fr.px(tr.position(w[1])),
                        fr.py(w[1])
                    );
                }
            }
        }
    }
    for ev in &tl.events {
        let fill = match ev.kind {
            EventKind::Interaction => "#222",
            EventKind::FanEntry => "#2a9d8f",
            EventKind::FanExit => "#e9c46a",
            EventKind::BandExit => "#f4a261",
            EventKind::Vanish => "#e76f51",
        };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{fill}"><title>{:?} at x = {:.4}, t = {:.4}</title></circle>"#,
            fr.px(ev.x),
            fr.py(ev.t),
            ev.kind,
            ev.x,
            ev.t
        );
    }
    for fi in &tl.fan_interactions {
        if let (Some(o), Some(tr)) = (fi.outcome, tl.trajectory(fi.path)) {
            let te = tr.t_end;
            label(&mut s, fr.px(tr.position(te)) + 6.0, fr.py(te) - 4.0, "start", format!("({})", o.label()));
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Oracle comparison written to stdout by `oracle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub front_found: bool,
    pub measured_speed: Option<f64>,
    pub measured_slope: f64,
    pub analytic_speed: Option<f64>,
    pub analytic_slope: Option<f64>,
    /// Relative when the analytic value is nonzero, absolute otherwise.
    pub speed_error: Option<f64>,
    pub slope_error: Option<f64>,
    pub conservation_error: f64,
}

/// Domain wide enough to hold every wave of the scenario up to `t_end`.
pub fn oracle_domain(s: &Scenario, t_end: f64) -> (f64, f64) {
    let umin = s.states.iter().map(|q| q.u).fold(f64::INFINITY, f64::min);
    let umax = s.states.iter().map(|q| q.u).fold(f64::NEG_INFINITY, f64::max);
    let b0 = s.breakpoints[0];
    let b1 = *s.breakpoints.last().unwrap();
    let lo = b0.min(b0 + (umin - 1.0) * t_end);
    let hi = b1.max(b1 + (umax + 1.0) * t_end);
    let margin = 0.25 * (hi - lo) + 0.5;
    (lo - margin, hi + margin)
}

/// Straight front that dominates at `t`: the strongest singular shock, or
/// failing that the largest classical jump. Returns `(speed, slope)`.
fn analytic_front(tl: &Timeline, t: f64) -> Option<(f64, f64)> {
    let alive = |tr: &&crate::interact::Trajectory| tr.t_start <= t && t <= tr.t_end;
    let line = |tr: &crate::interact::Trajectory| match tr.path {
        Path::Line { speed, .. } => Some(speed),
        Path::Curve { .. } => None,
    };
    if let Some(tr) = tl
        .trajectories
        .iter()
        .filter(alive)
        .filter(|tr| tr.is_singular())
        .max_by(|a, b| a.strength_at(t).total_cmp(&b.strength_at(t)))
    {
        let k = match tr.strength {
            Strength::Linear { k, .. } => Some(k),
            _ => None,
        };
        return Some((line(tr)?, k?));
    }
    let tr = tl
        .trajectories
        .iter()
        .filter(alive)
        .filter(|tr| tr.kind == TrajectoryKind::Shock)
        .max_by(|a, b| (a.right.u - a.left.u).abs().total_cmp(&(b.right.u - b.left.u).abs()))?;
    Some((line(tr)?, 0.0))
}

fn rel_error(measured: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        measured.abs()
    } else {
        (measured - exact).abs() / exact.abs()
    }
}

/// Runs the scheme and compares with the analytic solution. Also returns
/// the final snapshot.
pub fn oracle_report(s: &Scenario, cells: usize, cfl: f64, t_end: f64) -> Result<(OracleReport, FieldSnapshot)> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::Invalid(format!("t_end = {t_end} must be positive")));
    }
    let (x_min, x_max) = oracle_domain(s, t_end);
    let grid = Grid::new(x_min, x_max, cells, cfl)?;
    let times = fvoracle::sample_times(0.2 * t_end, t_end, 9);
    let snaps = fvoracle::run_with(s, &grid, t_end, &RunOptions { snapshot_times: times, known_speed: None })?;
    let conservation_error = fvoracle::max_conservation_error(&snaps);
    let (front_found, measured_speed, measured_slope) = match fvoracle::measure_snapshots(&snaps) {
        Ok(m) => (true, Some(m.speed), m.mass_slope),
        Err(Error::NoFront(_)) => (false, None, 0.0),
        Err(e) => return Err(e),
    };
    let mut at_end = s.clone();
    at_end.t_max = t_end;
    let analytic = run_scenario(&at_end).ok().and_then(|tl| analytic_front(&tl, t_end));
    let report = OracleReport {
        cells,
        cfl,
        t_end,
        x_min,
        x_max,
        front_found,
        measured_speed,
        measured_slope,
        analytic_speed: analytic.map(|a| a.0),
        analytic_slope: analytic.map(|a| a.1),
        speed_error: measured_speed.zip(analytic).map(|(m, a)| rel_error(m, a.0)),
        slope_error: analytic.map(|a| rel_error(measured_slope, a.1)),
        conservation_error,
    };
    let last = snaps.into_iter().last().expect("run returns the final snapshot");
    Ok((report, last))
}

fn io_err(path: &FsPath, e: std::io::Error) -> Error {
    Error::Invalid(format!("{}: {e}", path.display()))
}

fn write_file(path: &FsPath, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn create_dir(path: &FsPath) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| io_err(path, e))
}

fn fail(err: &mut dyn Write, code: i32, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    code
}

fn cmd_classify(out: &mut dyn Write, base: State, point: State) -> i32 {
    let c = classify(base, point);
    let cv = curve_values(base, point.u);
    let opt = |x: Option<f64>| x.map_or("undefined".to_string(), |v| v.to_string());
    let _ = writeln!(out, "{}", c.region);
    let _ = writeln!(out, "base = ({}, {}), point = ({}, {})", base.u, base.v, point.u, point.v);
    let _ = writeln!(
        out,
        "at u = {}: D = {}, E = {}, S1 = {}, S2 = {}, R1 = {}, R2 = {}",
        cv.u,
        cv.d,
        cv.e,
        opt(cv.s1),
        opt(cv.s2),
        cv.r1,
        cv.r2
    );
    match c.boundary {
        Some(b) => {
            let _ = writeln!(out, "boundary: {b}");
        }
        None => {
            let _ = writeln!(out, "boundary: none");
        }
    }
    EXIT_OK
}

fn cmd_riemann(out: &mut dyn Write, err: &mut dyn Write, left: State, right: State, zeta: f64, path: Option<PathBuf>) -> i32 {
    match riemann_descriptor(left, right, zeta) {
        Ok(d) => {
            let json = serde_json::to_string_pretty(&d).expect("descriptor serializes");
            match path {
                Some(p) => {
                    if let Err(e) = write_file(&p, json.as_bytes()) {
                        return fail(err, EXIT_PARSE, &e);
                    }
                }
                None => {
                    let _ = writeln!(out, "{json}");
                }
            }
            EXIT_OK
        }
        Err(e @ Error::Invalid(_)) => fail(err, EXIT_PARSE, &e),
        Err(e) => {
            let _ = writeln!(out, "{}", serde_json::to_string(&ErrorReport::new(&e)).expect("report serializes"));
            fail(err, EXIT_RIEMANN, &e)
        }
    }
}

fn cmd_simulate(out: &mut dyn Write, err: &mut dyn Write, scenario: &FsPath, dir: &FsPath) -> i32 {
    let s = match ScenarioFile::read(scenario).and_then(|f| f.to_scenario()) {
        Ok(s) => s,
        Err(e) => return fail(err, EXIT_PARSE, &e),
    };
    let tl = match run_scenario(&s) {
        Ok(tl) => tl,
        Err(e) => return fail(err, EXIT_ENGINE, &e),
    };
    let written = create_dir(dir)
        .and_then(|_| write_file(&dir.join("trajectories.csv"), trajectories_csv(&tl).as_bytes()))
        .and_then(|_| write_file(&dir.join("diagram.svg"), render_svg(&tl).as_bytes()));
    let d = SolutionDescriptor::new(&s, tl);
    if let Err(e) = written.and_then(|_| write_file(&dir.join("solution.json"), d.to_json().as_bytes())) {
        return fail(err, EXIT_PARSE, &e);
    }
    let tl = &d.timeline;
    let _ = writeln!(out, "trajectories: {}", tl.trajectories.len());
    let _ = writeln!(out, "events: {}", tl.events.len());
    for ev in &tl.events {
        let _ = writeln!(out, "  {:?} at x = {}, t = {}, zeta = {}", ev.kind, ev.x, ev.t, ev.zeta);
    }
    for FanInteraction { outcome, asymptotic, path, .. } in &tl.fan_interactions {
        let label = outcome.map_or("unlabeled".to_string(), |o| format!("({})", o.label()));
        let tag = if *asymptotic { " as t grows" } else { "" };
        let _ = writeln!(out, "fan traversal along trajectory {path}: {label}{tag}");
    }
    EXIT_OK
}

fn cmd_oracle(out: &mut dyn Write, err: &mut dyn Write, scenario: &FsPath, cells: usize, cfl: f64, t_end: f64, dir: &FsPath) -> i32 {
    let s = match ScenarioFile::read(scenario).and_then(|f| f.to_scenario()) {
        Ok(s) => s,
        Err(e) => return fail(err, EXIT_PARSE, &e),
    };
    let (report, snap) = match oracle_report(&s, cells, cfl, t_end) {
        Ok(r) => r,
        Err(e) => return fail(err, EXIT_ORACLE, &e),
    };
    let mut csv = vec![];
    snap.write_csv(&mut csv).expect("writing to memory");
    if let Err(e) = create_dir(dir).and_then(|_| write_file(&dir.join("oracle.csv"), &csv)) {
        return fail(err, EXIT_ORACLE, &e);
    }
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    EXIT_OK
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_PARSE
                }
            };
        }
    };
    match cli.command {
        Command::Classify { base, point } => cmd_classify(out, base, point),
        Command::Riemann { left, right, zeta, out: path } => cmd_riemann(out, err, left, right, zeta, path),
        Command::Simulate { scenario, out: dir } => cmd_simulate(out, err, &scenario, &dir),
        Command::Oracle { scenario, cells, t_end, cfl, out: dir } => cmd_oracle(out, err, &scenario, cells, cfl, t_end, &dir),
    }
}
