mod common;

use common::rh_residual;
use proptest::prelude::*;
use singshock::curves::{
    boundary_distance, classify, curve_d_v, curve_e_v, hugoniot_v, in_sdsl, inverse_rarefaction_v, rarefaction_v,
    strict_region_predicates, Branch, Family, Region,
};
use singshock::riemann::{solve, Wave};
use singshock::singular::{alpha_split, deficiency, growth_rate, is_overcompressive, shock_speed};
use singshock::states::{eigenvalues, flux};
use singshock::State;

const SQRT12: f64 = 3.4641016151377544;

fn state(r: f64) -> impl Strategy<Value = State> {
    (-r..r, -r..r).prop_map(|(u, v)| State::new(u, v))
}

/// A base and a point of its `Q7`, as `(base, du, fraction of the D–E band)`.
fn q7_pair() -> impl Strategy<Value = (State, State)> {
    (state(3.0), 3.0f64..7.0, 0.0f64..1.0).prop_filter_map("outside Q7", |(b, du, s)| {
        let u = b.u - du;
        let (e, d) = (curve_e_v(b, u), curve_d_v(b, u));
        let q = State::new(u, e + s * (d - e));
        (classify(b, q).region == Region::Q7).then_some((b, q))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigenvalue_gap_is_two(s in state(100.0)) {
        // exact up to the rounding of u - 1 and u + 1
        let (l1, l2) = eigenvalues(s);
        prop_assert!((l2 - l1 - 2.0).abs() <= 2.0 * f64::EPSILON * (1.0 + s.u.abs()));
    }

    #[test]
    fn inverse_rarefaction_round_trip(r in state(5.0), u in -5.0f64..5.0, two in any::<bool>()) {
        let fam = if two { Family::Two } else { Family::One };
        let l = State::new(u, inverse_rarefaction_v(r, u, fam));
        prop_assert!((rarefaction_v(l, r.u, fam) - r.v).abs() <= 1e-12 * (1.0 + r.v.abs()));
    }

    #[test]
    fn q7_lies_in_sdsl((b, q) in q7_pair()) {
        prop_assert!(in_sdsl(b, q));
    }

    #[test]
    fn q7_pairs_are_admissible_and_growing((b, q) in q7_pair()) {
        let c = shock_speed(b, q).unwrap();
        prop_assert!(is_overcompressive(b, q, c));
        prop_assert!(alpha_split(b, q, c).is_ok());
        prop_assert!(growth_rate(b, q).unwrap() > 0.0);
    }

    #[test]
    fn split_back_substitution((b, q) in q7_pair(), beta in 0.0f64..10.0) {
        let c = shock_speed(b, q).unwrap();
        let (a0, a1) = alpha_split(b, q, c).unwrap();
        let (al0, al1) = (a0 * beta, a1 * beta);
        let scale = 1.0 + beta * (1.0 + b.u.abs() + q.u.abs() + c.abs());
        prop_assert!((al0 + al1 - beta).abs() <= 1e-12 * scale);
        prop_assert!((q.u * al0 + b.u * al1 - c * beta).abs() <= 1e-12 * scale);
    }

    #[test]
    fn classify_is_a_partition_off_boundaries(b in state(3.0), du in -8.0f64..3.0, dv in -40.0f64..60.0) {
        let q = State::new(b.u + du, b.v + dv);
        prop_assume!(boundary_distance(b, q) > 1e-6);
        let strict = strict_region_predicates(b, q);
        prop_assert_eq!(strict, vec![classify(b, q).region]);
    }

    #[test]
    fn emitted_waves_satisfy_jump_conditions(l in state(4.0), r in state(4.0)) {
        let Ok(fan) = solve(l, r) else { return Ok(()) };
        prop_assert!(fan.check(l, r).is_ok());
        for w in &fan.waves {
            match *w {
                Wave::Shock { left, right, speed, .. } => {
                    let (r1, r2) = rh_residual(left, right, speed);
                    prop_assert!(r1.abs() <= 1e-10 && r2.abs() <= 1e-10, "{:?}: {} {}", w, r1, r2);
                }
                Wave::Singular(s) => {
                    let (r1, _) = rh_residual(s.left, s.right, s.speed);
                    prop_assert!(r1.abs() <= 1e-10);
                    prop_assert_eq!(s.k, deficiency(s.left, s.right, s.speed));
                }
                Wave::Rarefaction { .. } => {}
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn growth_vanishes_on_j1(b in state(3.0), s in 0.0f64..1.0, plus in any::<bool>()) {
        let u = b.u - 3.0 - s * (SQRT12 - 3.0);
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let q = State::new(u, hugoniot_v(b, u, branch).unwrap());
        prop_assert!(growth_rate(b, q).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn boundary_stitching(b in state(3.0)) {
        let u = b.u - 3.0;
        prop_assert!((hugoniot_v(b, u, Branch::Plus).unwrap() - curve_e_v(b, u)).abs() <= 1e-12);
        prop_assert!((hugoniot_v(b, u, Branch::Minus).unwrap() - curve_d_v(b, u)).abs() <= 1e-12);
        let u = b.u - SQRT12;
        let (p, m) = (hugoniot_v(b, u, Branch::Plus).unwrap(), hugoniot_v(b, u, Branch::Minus).unwrap());
        prop_assert!((p - m).abs() <= 1e-6, "{} {}", p, m);
    }

    #[test]
    fn shock_and_rarefaction_curves_have_second_order_contact(b in state(3.0)) {
        for (fam, branch) in [(Family::One, Branch::Plus), (Family::Two, Branch::Minus)] {
            for sign in [-1.0, 1.0] {
                let c = |h: f64| {
                    let u = b.u + sign * h;
                    (hugoniot_v(b, u, branch).unwrap() - rarefaction_v(b, u, fam)).abs() / h.powi(3)
                };
                let (c1, c2) = (c(0.1), c(0.01));
                prop_assert!(c1 > 1e-3 && (c2 / c1 - 1.0).abs() < 0.1, "{:?} {}: {} {}", fam, sign, c1, c2);
            }
        }
    }
}

#[test]
fn flux_of_origin_is_zero() {
    let f = flux(State::new(0.0, 0.0));
    assert_eq!((f.f1, f.f2), (0.0, 0.0));
}
