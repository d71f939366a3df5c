use singshock::curves::{hugoniot_v, Branch};
use singshock::fvoracle::*;
use singshock::interact::Scenario;
use singshock::riemann::rarefaction_state;
use singshock::curves::Family;
use singshock::State;

const O: State = State::new(0.0, 0.0);

fn canonical() -> Scenario {
    Scenario::riemann(O, State::new(-4.0, 6.0), 1.0).unwrap()
}

/// Slope of the mass measured in a fixed physical window.
fn fixed_window_slope(n: usize, halfwidth: f64) -> f64 {
    let g = Grid::new(-4.0, 2.0, n, 0.45).unwrap();
    let times: Vec<f64> = (0..9).map(|i| 0.2 + 0.1 * i as f64).collect();
    let snaps = run_with(&canonical(), &g, 1.0, &RunOptions { snapshot_times: times, known_speed: None }).unwrap();
    let ts: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let ms: Vec<f64> = snaps.iter().map(|s| measure_delta_mass(s, halfwidth).unwrap()).collect();
    linear_fit(&ts, &ms).0
}

#[test]
fn mass_slope_self_converges() {
    let k = 7.0 / 3.0;
    let errs: Vec<f64> = [1000, 2000, 4000].iter().map(|&n| (fixed_window_slope(n, 0.2) - k).abs()).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn canonical_front_speed_and_growth() {
    let g = Grid::new(-4.0, 2.0, 2000, 0.45).unwrap();
    let m = measure_front(&canonical(), &g, 0.2, 1.0, 9).unwrap();
    assert!((m.speed + 2.5).abs() / 2.5 < 0.02, "{m:?}");
    assert!((m.mass_slope - 7.0 / 3.0).abs() / (7.0 / 3.0) < 0.1, "{m:?}");
    assert!(m.max_conservation_error <= 1e-10);
}

#[test]
fn position_at_early_time() {
    let g = Grid::new(-4.0, 2.0, 4000, 0.45).unwrap();
    let snap = run(&canonical(), &g, 0.4).unwrap().pop().unwrap();
    let x = measure_shock_position(&snap).unwrap();
    assert!((x + 1.0).abs() <= 2.0 * g.dx() + 0.02, "{x}");
    assert!(measure_delta_mass(&snap, default_window(&g)).unwrap() > 0.0);
}

#[test]
fn classical_shock_carries_no_mass() {
    let r = State::new(-2.0, hugoniot_v(O, -2.0, Branch::Plus).unwrap());
    let s = Scenario::riemann(O, r, 1.0).unwrap();
    let mass = |n| {
        let g = Grid::new(-4.0, 2.0, n, 0.45).unwrap();
        let snap = run(&s, &g, 1.0).unwrap().pop().unwrap();
        measure_delta_mass(&snap, 0.2).unwrap().abs()
    };
    let (a, b) = (mass(500), mass(4000));
    assert!(b < a && b < 0.01, "{a} {b}");
}

#[test]
fn rarefaction_profile_converges() {
    let r = State::new(2.0, 4.0);
    let s = Scenario::riemann(O, r, 1.0).unwrap();
    let t = 0.5;
    let l1 = |n| {
        let g = Grid::new(-2.0, 2.0, n, 0.45).unwrap();
        let snap = run(&s, &g, t).unwrap().pop().unwrap();
        let mut e = 0.0;
        for i in 0..n {
            let xi = g.center(i) / t;
            let exact = if xi <= -1.0 {
                O
            } else if xi >= 1.0 {
                r
            } else {
                rarefaction_state(Family::One, O, xi)
            };
            e += ((snap.u[i] - exact.u).abs() + (snap.v[i] - exact.v).abs()) * g.dx();
        }
        e
    };
    let errs: Vec<f64> = [200, 400, 800].iter().map(|&n| l1(n)).collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 0.5, "{errs:?}");
    }
}

#[test]
fn conservation_on_interaction_data() {
    let u1 = State::new(-4.0, 6.0);
    let u2 = State::new(-5.0, hugoniot_v(u1, -5.0, Branch::Plus).unwrap());
    let s = Scenario::new(vec![O, u1, u2], vec![-1.0, 0.0], vec![0.5, 0.0], 2.0).unwrap();
    let g = Grid::new(-8.0, 2.0, 1000, 0.45).unwrap();
    for snap in run_with(&s, &g, 2.0, &RunOptions { snapshot_times: vec![0.5, 1.0, 1.5], known_speed: Some(2.5) }).unwrap() {
        let e = snap.conservation_error();
        assert!(e[0] <= 1e-10 && e[1] <= 1e-10, "{e:?}");
    }
}

#[test]
fn snapshot_csv_has_one_row_per_cell() {
    let g = Grid::new(-1.0, 1.0, 16, 0.45).unwrap();
    let snap = run(&canonical(), &g, 0.1).unwrap().pop().unwrap();
    let mut buf = vec![];
    snap.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.starts_with("x,u,v\n"));
}

#[test]
fn canonical_mass_tracks_linear_growth() {
    let g = Grid::new(-4.0, 2.0, 4000, 0.45).unwrap();
    let times: Vec<f64> = (0..9).map(|i| 0.2 + 0.1 * i as f64).collect();
    let snaps = run_with(&canonical(), &g, 1.0, &RunOptions { snapshot_times: times, known_speed: None }).unwrap();
    let k = 7.0 / 3.0;
    for s in &snaps {
        let m = measure_delta_mass_adaptive(s, default_window(&g), MASS_STABLE).unwrap();
        assert!((m - k * s.t).abs() <= 0.1 * k * s.t, "t = {}: {m}", s.t);
    }
}

#[test]
fn riemann_solution_is_self_similar() {
    use singshock::riemann::solve;
    for right in [State::new(0.5, -1.0), State::new(-1.0, 0.5), State::new(1.0, 2.0)] {
        let fan = solve(O, right).unwrap();
        assert!(fan.singular().is_none());
        let s = Scenario::riemann(O, right, 1.0).unwrap();
        for t in [0.5, 1.0] {
            let l1 = |n: usize| {
                let g = Grid::new(-4.0, 4.0, n, 0.45).unwrap();
                let snap = run(&s, &g, t).unwrap().pop().unwrap();
                (0..n)
                    .map(|i| {
                        let exact = fan.sample(O, g.center(i) / t);
                        ((snap.u[i] - exact.u).abs() + (snap.v[i] - exact.v).abs()) * g.dx()
                    })
                    .sum::<f64>()
            };
            let (coarse, fine) = (l1(500), l1(2000));
            let order = (coarse / fine).log(4.0);
            assert!(order >= 0.5, "{right:?} t = {t}: {coarse} {fine}");
        }
    }
}
