//! Lax–Friedrichs finite-volume oracle.
//!
//! Conservative first-order scheme with outflow ghost cells. Boundary fluxes
//! are accumulated so the domain totals can be audited exactly, and the
//! front position and the delta mass concentrated on it can be measured from
//! snapshots.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::interact::Scenario;
use crate::states::{flux, State};
use crate::{Error, Result};

const BLOW_UP: f64 = 1e12;
const MIN_FRONT_JUMP: f64 = 1e-6;
/// Cells averaged on each side of a window to estimate the background.
const BACKGROUND_CELLS: usize = 4;
/// Relative change below which a widened window counts as converged.
pub const MASS_STABLE: f64 = 2e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
    pub cfl: f64,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, cells: usize, cfl: f64) -> Result<Self> {
        if cells < 16 {
            return Err(Error::Invalid(format!("grid needs at least 16 cells, got {cells}")));
        }
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::Invalid(format!("CFL number {cfl} outside (0, 1)")));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::Invalid("grid bounds must be finite and increasing".into()));
        }
        Ok(Grid { x_min, x_max, cells, cfl })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSnapshot {
    pub t: f64,
    pub grid: Grid,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// Time-integrated flux entering through the two boundaries, per component.
    pub boundary_inflow: [f64; 2],
    pub initial_totals: [f64; 2],
}

impl FieldSnapshot {
    pub fn totals(&self) -> [f64; 2] {
        let dx = self.grid.dx();
        [sum(&self.u) * dx, sum(&self.v) * dx]
    }

    /// Relative mismatch between the domain totals and their initial values
    /// plus the recorded boundary inflow, per component.
    pub fn conservation_error(&self) -> [f64; 2] {
        let now = self.totals();
        let dx = self.grid.dx();
        let scale = [
            self.u.iter().map(|x| x.abs()).sum::<f64>() * dx,
            self.v.iter().map(|x| x.abs()).sum::<f64>() * dx,
        ];
        let mut err = [0.0; 2];
        for c in 0..2 {
            let expected = self.initial_totals[c] + self.boundary_inflow[c];
            err[c] = (now[c] - expected).abs() / scale[c].max(1.0);
        }
        err
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,u,v")?;
        for i in 0..self.u.len() {
            writeln!(w, "{},{},{}", self.grid.center(i), self.u[i], self.v[i])?;
        }
        Ok(())
    }
}

/// Compensated sum in index order.
fn sum(xs: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for &x in xs {
        let y = x - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Snapshot times in `(0, t_end]`; `t_end` is always included.
    pub snapshot_times: Vec<f64>,
    /// Speed of a front known in advance, included in the time-step bound.
    pub known_speed: Option<f64>,
}

/// Exact cell averages of the piecewise-constant scenario data; point deltas
/// are deposited in the cell containing their breakpoint.
pub fn initial_cells(s: &Scenario, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    let dx = grid.dx();
    let mut u = vec![0.0; grid.cells];
    let mut v = vec![0.0; grid.cells];
    for i in 0..grid.cells {
        let (a, b) = (grid.x_min + i as f64 * dx, grid.x_min + (i + 1) as f64 * dx);
        let mut lo = a;
        for (j, st) in s.states.iter().enumerate() {
            let hi = s.breakpoints.get(j).copied().unwrap_or(f64::INFINITY).min(b);
            if hi > lo {
                u[i] += st.u * (hi - lo) / dx;
                v[i] += st.v * (hi - lo) / dx;
                lo = hi;
            }
        }
    }
    for (j, &x) in s.breakpoints.iter().enumerate() {
        let z = s.delta(j);
        if z > 0.0 && x >= grid.x_min && x < grid.x_max {
            let i = (((x - grid.x_min) / dx) as usize).min(grid.cells - 1);
            v[i] += z / dx;
        }
    }
    (u, v)
}

/// Runs the scheme from the scenario data up to `t_end`.
pub fn run(initial: &Scenario, grid: &Grid, t_end: f64) -> Result<Vec<FieldSnapshot>> {
    run_with(initial, grid, t_end, &RunOptions::default())
}

pub fn run_with(initial: &Scenario, grid: &Grid, t_end: f64, opts: &RunOptions) -> Result<Vec<FieldSnapshot>> {
    if !(t_end > 0.0) {
        return Err(Error::Invalid(format!("t_end {t_end} must be positive")));
    }
    let n = grid.cells;
    let dx = grid.dx();
    let (mut u, mut v) = initial_cells(initial, grid);
    let initial_totals = [sum(&u) * dx, sum(&v) * dx];
    let mut times: Vec<f64> = opts.snapshot_times.iter().copied().filter(|t| *t > 0.0 && *t < t_end).collect();
    times.push(t_end);
    times.sort_by(f64::total_cmp);
    times.dedup();

    let mut snaps = vec![];
    let mut inflow = [(0.0f64, 0.0f64); 2];
    let mut f1 = vec![0.0; n + 1];
    let mut f2 = vec![0.0; n + 1];
    let mut t = 0.0;
    let mut next = 0;
    while next < times.len() {
        let mut smax = u.iter().map(|x| x.abs() + 1.0).fold(0.0, f64::max);
        if let Some(c) = opts.known_speed {
            smax = smax.max(c.abs());
        }
        let mut dt = grid.cfl * dx / smax;
        let mut hit = false;
        if t + dt >= times[next] {
            dt = times[next] - t;
            hit = true;
        }
        let r = 0.5 * dx / dt;
        for i in 0..=n {
            // outflow ghosts copy the adjacent interior cell
            let (l, rr) = (i.saturating_sub(1).min(n - 1), i.min(n - 1));
            let fl = flux(State::new(u[l], v[l]));
            let fr = flux(State::new(u[rr], v[rr]));
            f1[i] = 0.5 * (fl.f1 + fr.f1) - r * (u[rr] - u[l]);
            f2[i] = 0.5 * (fl.f2 + fr.f2) - r * (v[rr] - v[l]);
        }
        let lam = dt / dx;
        for i in 0..n {
            u[i] -= lam * (f1[i + 1] - f1[i]);
            v[i] -= lam * (f2[i + 1] - f2[i]);
        }
        for (acc, x) in inflow.iter_mut().zip([dt * (f1[0] - f1[n]), dt * (f2[0] - f2[n])]) {
            let y = x - acc.1;
            let s = acc.0 + y;
            acc.1 = (s - acc.0) - y;
            acc.0 = s;
        }
        t = if hit { times[next] } else { t + dt };
        if u.iter().chain(&v).any(|x| !x.is_finite() || x.abs() > BLOW_UP) {
            return Err(Error::BlowUp { t });
        }
        if hit {
            snaps.push(FieldSnapshot {
                t,
                grid: *grid,
                u: u.clone(),
                v: v.clone(),
                boundary_inflow: [inflow[0].0, inflow[1].0],
                initial_totals,
            });
            next += 1;
        }
    }
    Ok(snaps)
}

/// Position of the dominant front: the interface with the largest jump in
/// `u`, refined by the centroid of the `v` excess around it (or of the jump
/// magnitudes when there is no concentrated excess).
pub fn measure_shock_position(snap: &FieldSnapshot) -> Result<f64> {
    let n = snap.u.len();
    let (mut best, mut jump) = (0, 0.0);
    for i in 0..n - 1 {
        let d = (snap.u[i + 1] - snap.u[i]).abs();
        if d > jump {
            best = i;
            jump = d;
        }
    }
    if jump < MIN_FRONT_JUMP {
        return Err(Error::NoFront(jump));
    }
    let dx = snap.grid.dx();
    let w = 8usize;
    let lo = best.saturating_sub(w);
    let hi = (best + 1 + w).min(n - 1);
    let interface = |i: usize| snap.grid.x_min + (i + 1) as f64 * dx;

    // v excess against the plateau values just outside the window
    let (vl, vr) = (snap.v[lo], snap.v[hi]);
    let (mut m, mut mx, mut abs) = (0.0, 0.0, 0.0);
    for i in lo..=hi {
        let bg = if i <= best { vl } else { vr };
        let e = snap.v[i] - bg;
        m += e;
        mx += e * snap.grid.center(i);
        abs += e.abs();
    }
    if m > 0.0 && m > 0.5 * abs {
        return Ok(mx / m);
    }
    let (mut m, mut mx) = (0.0, 0.0);
    for i in lo..hi {
        let d = (snap.u[i + 1] - snap.u[i]).abs();
        m += d;
        mx += d * interface(i);
    }
    Ok(mx / m)
}

/// Excess of `v` over the piecewise-constant background in a window around
/// the front.
pub fn measure_delta_mass(snap: &FieldSnapshot, window_halfwidth: f64) -> Result<f64> {
    let x = measure_shock_position(snap)?;
    let g = snap.grid;
    let dx = g.dx();
    let (a, b) = (x - window_halfwidth, x + window_halfwidth);
    let margin = BACKGROUND_CELLS as f64 * dx;
    if a - margin < g.x_min || b + margin > g.x_max {
        return Err(Error::WindowClipped { lo: a, hi: b });
    }
    // whole cells whose centers fall inside the window
    let i0 = ((a - g.x_min) / dx - 0.5).ceil().max(0.0) as usize;
    let i1 = ((b - g.x_min) / dx - 0.5).floor() as usize;
    let lo_edge = g.x_min + i0 as f64 * dx;
    let hi_edge = g.x_min + (i1 + 1) as f64 * dx;
    let mean = |f: &[f64], r: std::ops::Range<usize>| {
        let k = r.len() as f64;
        f[r].iter().sum::<f64>() / k
    };
    let left = i0 - BACKGROUND_CELLS..i0;
    let right = i1 + 1..i1 + 1 + BACKGROUND_CELLS;
    let (ul, ur) = (mean(&snap.u, left.clone()), mean(&snap.u, right.clone()));
    let (vl, vr) = (mean(&snap.v, left), mean(&snap.v, right));
    // u carries no delta, so its window mass fixes where the background jumps
    let split = if (ur - ul).abs() > MIN_FRONT_JUMP {
        let mass = sum(&snap.u[i0..=i1]) * dx;
        ((mass - ur * hi_edge + ul * lo_edge) / (ul - ur)).clamp(lo_edge, hi_edge)
    } else {
        x
    };
    let inside = sum(&snap.v[i0..=i1]) * dx;
    let background = vl * (split - lo_edge) + vr * (hi_edge - split);
    Ok(inside - background)
}

/// Default window halfwidth: 40 cells.
pub fn default_window(grid: &Grid) -> f64 {
    40.0 * grid.dx()
}

/// Delta mass with the window doubled from `min_halfwidth` until the
/// measured mass changes by less than `rel_tol` (relative to `max(1, mass)`)
/// or the window would leave the domain.
pub fn measure_delta_mass_adaptive(snap: &FieldSnapshot, min_halfwidth: f64, rel_tol: f64) -> Result<f64> {
    let mut w = min_halfwidth;
    let mut m = measure_delta_mass(snap, w)?;
    loop {
        let wider = match measure_delta_mass(snap, 2.0 * w) {
            Ok(x) => x,
            Err(Error::WindowClipped { .. }) => return Ok(m),
            Err(e) => return Err(e),
        };
        if (wider - m).abs() <= rel_tol * m.abs().max(1.0) {
            return Ok(wider);
        }
        m = wider;
        w *= 2.0;
    }
}

/// Least-squares slope and intercept.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Front speed and delta-mass growth measured over a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontMeasurement {
    pub speed: f64,
    pub mass_slope: f64,
    pub mass_intercept: f64,
    pub max_conservation_error: f64,
}

/// Evenly spaced snapshot times in `[t_from, t_end]`.
pub fn sample_times(t_from: f64, t_end: f64, samples: usize) -> Vec<f64> {
    (0..samples).map(|i| t_from + (t_end - t_from) * i as f64 / (samples - 1).max(1) as f64).collect()
}

/// Runs the scheme with evenly spaced snapshots in `[t_from, t_end]` and fits
/// front position and delta mass linearly in time.
pub fn measure_front(s: &Scenario, grid: &Grid, t_from: f64, t_end: f64, samples: usize) -> Result<FrontMeasurement> {
    let opts = RunOptions { snapshot_times: sample_times(t_from, t_end, samples), known_speed: None };
    let snaps = run_with(s, grid, t_end, &opts)?;
    let snaps: Vec<_> = snaps.into_iter().filter(|sn| sn.t >= t_from - 1e-12).collect();
    measure_snapshots(&snaps)
}

/// Linear fits of front position and delta mass over the given snapshots.
pub fn measure_snapshots(snaps: &[FieldSnapshot]) -> Result<FrontMeasurement> {
    let Some(first) = snaps.first() else {
        return Err(Error::Invalid("no snapshots to measure".into()));
    };
    let w = default_window(&first.grid);
    let mut ts = vec![];
    let mut xs = vec![];
    let mut ms = vec![];
    for sn in snaps {
        ts.push(sn.t);
        xs.push(measure_shock_position(sn)?);
        ms.push(measure_delta_mass_adaptive(sn, w, MASS_STABLE)?);
    }
    let (speed, _) = linear_fit(&ts, &xs);
    let (mass_slope, mass_intercept) = linear_fit(&ts, &ms);
    Ok(FrontMeasurement { speed, mass_slope, mass_intercept, max_conservation_error: max_conservation_error(snaps) })
}

pub fn max_conservation_error(snaps: &[FieldSnapshot]) -> f64 {
    snaps.iter().map(|sn| sn.conservation_error()).fold(0.0, |m, e| m.max(e[0]).max(e[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const O: State = State::new(0.0, 0.0);

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 1.0, 8, 0.45).is_err());
        assert!(Grid::new(0.0, 1.0, 16, 1.0).is_err());
        assert!(Grid::new(0.0, 1.0, 16, 0.45).is_ok());
    }

    #[test]
    fn constant_data_stays_constant() {
        let s = Scenario::riemann(State::new(0.5, -1.25), State::new(0.5, -1.25), 1.0).unwrap();
        let g = Grid::new(-1.0, 1.0, 64, 0.45).unwrap();
        let snap = run(&s, &g, 0.5).unwrap().pop().unwrap();
        assert!(snap.u.iter().all(|x| *x == 0.5));
        assert!(snap.v.iter().all(|x| *x == -1.25));
        assert!(matches!(measure_shock_position(&snap), Err(Error::NoFront(_))));
    }

    #[test]
    fn initial_averages_split_straddling_cells() {
        let s = Scenario::riemann(O, State::new(2.0, 4.0), 1.0).unwrap();
        let g = Grid::new(-1.0, 1.0, 16, 0.45).unwrap();
        let (u, _) = initial_cells(&s, &g);
        assert_eq!(u[7], 0.0);
        assert_eq!(u[8], 2.0);
        let s = Scenario::riemann(O, State::new(2.0, 4.0), 1.0).unwrap().shifted(0.0625);
        let (u, _) = initial_cells(&s, &g);
        assert_eq!(u[8], 1.0);
    }

    #[test]
    fn exact_step_is_located_at_its_interface() {
        let g = Grid::new(-1.0, 1.0, 32, 0.45).unwrap();
        let s = Scenario::riemann(O, State::new(2.0, 4.0), 1.0).unwrap();
        let (u, v) = initial_cells(&s, &g);
        let snap = FieldSnapshot { t: 0.0, grid: g, u, v, boundary_inflow: [0.0; 2], initial_totals: [0.0; 2] };
        assert!(measure_shock_position(&snap).unwrap().abs() <= g.dx());
    }

    #[test]
    fn delta_mass_of_initial_point_delta() {
        let g = Grid::new(-1.0, 1.0, 200, 0.45).unwrap();
        let s = Scenario::new(vec![O, State::new(-4.0, 6.0)], vec![0.0], vec![0.75], 1.0).unwrap();
        let (u, v) = initial_cells(&s, &g);
        let snap = FieldSnapshot { t: 0.0, grid: g, u, v, boundary_inflow: [0.0; 2], initial_totals: [0.0; 2] };
        let m = measure_delta_mass(&snap, default_window(&g)).unwrap();
        assert!((m - 0.75).abs() < 1e-9, "{m}");
    }

    #[test]
    fn window_clipping() {
        let g = Grid::new(-1.0, 1.0, 64, 0.45).unwrap();
        let s = Scenario::riemann(O, State::new(-4.0, 6.0), 1.0).unwrap();
        let snap = run(&s, &g, 0.05).unwrap().pop().unwrap();
        assert!(matches!(measure_delta_mass(&snap, 2.0), Err(Error::WindowClipped { .. })));
    }

    #[test]
    fn conservation_holds_with_boundary_flux() {
        let s = Scenario::riemann(O, State::new(-4.0, 6.0), 1.0).unwrap();
        let g = Grid::new(-2.0, 1.0, 300, 0.45).unwrap();
        for snap in run(&s, &g, 0.6).unwrap() {
            let e = snap.conservation_error();
            assert!(e[0] <= 1e-10 && e[1] <= 1e-10, "{e:?}");
        }
    }
}
