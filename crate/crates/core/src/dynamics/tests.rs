use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use proptest::prelude::*;

use super::*;
use crate::expression::{parse, rat, Coord, Poly4, Rational};
use crate::geometry::lemma23_geodesic_accel;
use crate::random::{random_psi34_metric, random_strict_metric, rng};

fn thm51(k: Rational, f: &str) -> WalkerMetric {
    let f = parse(f, &BTreeMap::new()).unwrap();
    let fd = f.differentiate(Coord::X4);
    let x1 = Poly4::var(Coord::X1);
    let x2 = Poly4::var(Coord::X2);
    let c4k = Poly4::constant(&k * rat(4, 1));
    let inv4k = (&k * rat(4, 1)).recip();
    let psi33 = &(&c4k * &(&x1 * &x1)) - &(&f * &f).scale(&inv4k);
    let psi44 = &c4k * &(&x2 * &x2);
    let psi34 = &(&(&c4k * &(&x1 * &x2)) + &(&x2 * &f)) - &fd.scale(&inv4k);
    WalkerMetric::new("thm51", psi33, psi34, psi44)
}

fn psi34(text: &str) -> WalkerMetric {
    WalkerMetric::psi34_only(text, parse(text, &BTreeMap::new()).unwrap())
}

fn metric(psi33: &str, psi34: &str, psi44: &str) -> WalkerMetric {
    WalkerMetric::from_exprs("m", BTreeMap::new(), psi33, psi34, psi44).unwrap()
}

const COORDINATE_FRAME: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn flat_geodesics_are_lines() {
    let m = WalkerMetric::flat();
    let s0 = GeodesicState::new([1.0, -2.0, 0.5, 3.0], [0.3, 1.0, -0.7, 0.25]);
    let (traj, out) =
        integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(100.0)).unwrap();
    assert_eq!(out.verdict, Verdict::Completed { t_final: 100.0 });
    for s in &traj.samples {
        for i in 0..4 {
            assert!((s.x[i] - (s0.x[i] + s0.v[i] * s.t)).abs() < 1e-10);
            assert_eq!(s.v[i], s0.v[i]);
        }
    }
    let e = monitor(&m, &traj, Monitor::Energy, None).unwrap();
    assert!(e.iter().all(|&x| x == e[0]));
    assert!(monitor(&m, &traj, Monitor::Ricci, None)
        .unwrap()
        .iter()
        .all(|&x| x == 0.0));
    let frames = parallel_transport(&m, &traj, &COORDINATE_FRAME).unwrap();
    assert!(frames.frames.iter().all(|f| *f == COORDINATE_FRAME));
    let r = monitor(
        &m,
        &traj,
        Monitor::CurvatureComponent([0, 2, 2, 3]),
        Some(&frames),
    )
    .unwrap();
    assert!(r.iter().all(|&x| x == 0.0));
}

#[test]
fn rhs_of_strict_metrics_has_no_x3_x4_acceleration() {
    let mut r = rng(3, 0);
    for i in 0..10 {
        let m = random_strict_metric(&mut r, &format!("s{i}"), 3);
        let s = GeodesicState::new([0.3, -1.0, 0.7, 1.1], [1.0, 0.5, -0.25, 2.0]);
        let (_, a) = geodesic_rhs(&m, &s).unwrap();
        assert_eq!((a[2], a[3]), (0.0, 0.0));
    }
}

#[test]
fn rhs_on_symmetric_state_of_2d() {
    let m = psi34("x1*x3 + x2*x4");
    let (h, hd) = (1.3, 0.7);
    let s = GeodesicState::new([0.0, 0.0, h, h], [0.0, 0.0, hd, hd]);
    let (_, a) = geodesic_rhs(&m, &s).unwrap();
    assert!((a[2] - hd * hd * h).abs() < 1e-14);
    assert!((a[3] - hd * hd * h).abs() < 1e-14);
}

#[test]
fn rhs_matches_closed_form_equations() {
    let mut r = rng(8, 1);
    for i in 0..20 {
        let m = random_psi34_metric(&mut r, &format!("p{i}"));
        let x = [0.5, -0.75, 1.25, 0.3 * i as f64 - 2.0];
        let v = [-1.0, 0.5, 2.0, -0.6];
        let (_, a) = geodesic_rhs(&m, &GeodesicState::new(x, v)).unwrap();
        let b = lemma23_geodesic_accel(&m, &x, &v).unwrap();
        for k in 0..4 {
            assert!(
                (a[k] - b[k]).abs() <= 1e-10 * (1.0 + b[k].abs()),
                "{} {a:?} {b:?}",
                m.label
            );
        }
    }
}

#[test]
fn invalid_options_are_rejected() {
    let m = WalkerMetric::flat();
    let s0 = GeodesicState::new([0.0; 4], [1.0, 0.0, 0.0, 0.0]);
    let bad = [
        IntegrationOptions::with_horizon(0.0),
        IntegrationOptions::with_horizon(1.0).with_tolerances(0.0, 1e-10),
        IntegrationOptions {
            max_steps: 0,
            ..Default::default()
        },
    ];
    for o in bad {
        assert!(matches!(
            integrate_geodesic(&m, &s0, &o),
            Err(DynamicsError::InvalidOptions(_))
        ));
    }
}

#[test]
fn step_budget_is_reported() {
    let m = psi34("x1^2 - x2^2");
    let s0 = GeodesicState::new([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, -1.0]);
    let opts = IntegrationOptions {
        max_steps: 20,
        ..IntegrationOptions::with_horizon(5.0)
    };
    let (traj, out) = integrate_geodesic(&m, &s0, &opts).unwrap();
    assert!(matches!(out.verdict, Verdict::BudgetExhausted { .. }));
    assert_eq!(traj.samples.len(), out.stats.steps + 1);
}

#[test]
fn osserman_family_log_geodesic() {
    for (k, f, x1, fdot) in [
        (rat(1, 1), "x4", 0.25, 1.0),
        (rat(-1, 2), "x4^2", -0.5, 2.0),
    ] {
        let m = thm51(k.clone(), f);
        let s0 = GeodesicState::new([x1, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]);
        let (traj, out) =
            integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(2.0)).unwrap();
        let t_star = out.verdict.t_star().expect("blowup");
        assert!((0.99..=1.01).contains(&t_star), "{t_star}");
        assert!(out.stats.min_step < 1e-12);
        for s in traj.samples.iter().filter(|s| s.t <= 0.9) {
            assert!((s.x[2] + (1.0 - s.t).ln()).abs() < 1e-6);
        }

        let frames = parallel_transport(&m, &traj, &COORDINATE_FRAME).unwrap();
        let law = monitor(
            &m,
            &traj,
            Monitor::CurvatureComponent([0, 2, 2, 3]),
            Some(&frames),
        )
        .unwrap();
        let kf = 4.0 * k.to_f64().unwrap();
        for ((s, e), r) in traj.samples.iter().zip(&frames.frames).zip(&law) {
            if s.t > 0.99 {
                break;
            }
            let expect_e1 = (-kf * x1 * s.x[2]).exp();
            assert!(
                rel(e[0][0], expect_e1) < 1e-6,
                "t={} {} {}",
                s.t,
                e[0][0],
                expect_e1
            );
            let expect_r = fdot * ((2.0 * kf * x1 * s.x[2]).exp() - 1.0);
            if s.t > 0.01 {
                assert!(rel(*r, expect_r) < 1e-5, "t={} {r} {expect_r}", s.t);
            }
        }
        assert!(law.iter().any(|r| r.abs() > 1e4));
        let drift = gram_drift(&m, &frames);
        assert!(drift.relative < 1e-9, "{drift:?}");
    }
}

#[test]
fn closed_form_blowup_of_1a() {
    let m = psi34("x1^2 - x2^2");
    let s0 = GeodesicState::new([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, -1.0]);
    let (traj, out) = integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(2.0)).unwrap();
    let t_star = out.verdict.t_star().expect("blowup");
    assert!((0.99..=1.01).contains(&t_star));
    for s in traj.samples.iter().filter(|s| s.t <= 0.9) {
        assert!((s.x[0] - 1.0 / (1.0 - s.t)).abs() < 1e-6);
    }
    // ρ(γ̇,γ̇) = −2ẋ1 − 2x1² along this geodesic
    let ric = monitor(&m, &traj, Monitor::Ricci, None).unwrap();
    for (s, r) in traj.samples.iter().zip(&ric) {
        let expect = -2.0 * s.v[0] - 2.0 * s.x[0] * s.x[0];
        assert!(rel(*r, expect) < 1e-9);
    }
    assert!(ric.last().unwrap().abs() > 1e6);
}

#[test]
fn ricci_monitor_on_symmetric_2d_geodesic() {
    let m = psi34("x1*x3 + x2*x4");
    let s0 = GeodesicState::new([0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 1.0, 1.0]);
    let (traj, out) = integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(2.0)).unwrap();
    assert_eq!(out.verdict.name(), "Blowup");
    let ric = monitor(&m, &traj, Monitor::Ricci, None).unwrap();
    for (s, r) in traj.samples.iter().zip(&ric) {
        assert!(rel(*r, -2.0 * s.v[2] * s.v[2]) < 1e-6);
    }
}

#[test]
fn strict_reference_quadrature_example() {
    let m = metric("x3^2", "0", "0");
    let s0 = GeodesicState::new([0.5, 0.0, 2.0, 0.0], [0.1, 0.0, 1.0, 0.0]);
    // ẍ1 = −x3 = −(2 + t)
    let exact = |t: f64| 0.5 + 0.1 * t - t * t - t * t * t / 6.0;
    let reference = strict_geodesic_reference(&m, &s0, 3.0, 30).unwrap();
    for s in &reference.samples {
        assert!((s.x[0] - exact(s.t)).abs() < 1e-12);
        assert_eq!(s.x[2], 2.0 + s.t);
    }
    let (traj, _) = integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(3.0)).unwrap();
    let end = traj.last();
    assert!((end.x[0] - exact(3.0)).abs() < 1e-8);

    assert!(matches!(
        strict_geodesic_at(&psi34("x1*x3"), &s0, 1.0),
        Err(DynamicsError::Precondition(_))
    ));
}

#[test]
fn strict_reference_agrees_with_integrator() {
    let mut r = rng(21, 0);
    for i in 0..5 {
        let m = random_strict_metric(&mut r, &format!("s{i}"), 2);
        let s0 = GeodesicState::new([0.2, -0.4, 0.5, 0.1], [0.3, -0.2, 0.25, -0.1]);
        let (traj, out) =
            integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(100.0)).unwrap();
        assert_eq!(out.verdict.name(), "Completed");
        let end = traj.last();
        let want = strict_geodesic_at(&m, &s0, 100.0).unwrap();
        for k in 0..4 {
            assert!(
                (end.x[k] - want.x[k]).abs() <= 1e-7 * (1.0 + want.x[k].abs()),
                "{}: {:?} vs {:?}",
                m.label,
                end.x,
                want.x
            );
        }
    }
}

#[test]
fn lemma41_examples() {
    use CertificateVerdict::*;
    let r = |n, d| rat(n, d);
    assert_eq!(
        lemma41_certificate(&r(1, 1), &r(1, 1), &r(1, 1)),
        CertifiedBlowup
    );
    assert_eq!(
        lemma41_certificate(&r(1, 1), &r(2, 1), &r(1, 1)),
        CertifiedBlowup
    );
    assert_eq!(
        lemma41_certificate(&r(1, 1), &r(1, 1), &r(2, 1)),
        CertifiedBlowup
    );
    assert_eq!(
        lemma41_certificate(&r(1, 1), &r(1, 1), &r(0, 1)),
        NotApplicable
    );
    assert_eq!(
        lemma41_certificate(&r(1, 1), &r(1, 1), &r(999, 1000)),
        NotApplicable
    );
    assert_eq!(
        lemma41_certificate(&r(0, 1), &r(2, 1), &r(2, 1)),
        NotApplicable
    );
    assert_eq!(
        lemma41_certificate(&r(1, 1), &r(-1, 1), &r(6, 1)),
        NotApplicable
    );
    let c = Lemma41Certificate::new(r(1, 1), r(1, 1), r(1, 1));
    assert_eq!(c.to_json()["verdict"], "certified-blowup");
}

#[test]
fn csv_and_outcome_json() {
    let m = WalkerMetric::flat();
    let s0 = GeodesicState::new([0.0; 4], [1.0, 0.0, 0.0, 0.0]);
    let (mut traj, out) =
        integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(1.0)).unwrap();
    let e = monitor(&m, &traj, Monitor::Energy, None).unwrap();
    traj.monitors.insert("energy".into(), e);
    let csv = traj.to_csv_string();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,x1,x2,x3,x4,v1,v2,v3,v4,energy");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0.0000000000000000e0");
    assert_eq!(first[5], "1.0000000000000000e0");
    assert_eq!(csv.lines().count(), traj.samples.len() + 1);
    let j = out.to_json();
    assert_eq!(j["verdict"], "Completed");
    assert_eq!(j["t_final"], 1.0);
    assert!(j["t_star"].is_null());
    assert!(j["stats"]["steps"].as_u64().unwrap() >= 1);
}

#[test]
fn monitor_errors() {
    let m = WalkerMetric::flat();
    let s0 = GeodesicState::new([0.0; 4], [1.0, 0.0, 0.0, 0.0]);
    let (traj, _) = integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(1.0)).unwrap();
    assert_eq!(
        monitor(&m, &traj, Monitor::CurvatureComponent([0, 1, 2, 3]), None),
        Err(DynamicsError::MissingFrame)
    );
    assert_eq!(
        monitor(&m, &traj, Monitor::CurvatureComponent([0, 1, 2, 4]), None),
        Err(DynamicsError::InvalidIndex(4))
    );
    assert_eq!(
        Monitor::CurvatureComponent([0, 2, 2, 3]).name(),
        "R(e1,e3,e3,e4)"
    );
}

fn state() -> impl Strategy<Value = GeodesicState> {
    (
        prop::array::uniform4(-1.0f64..1.0),
        prop::array::uniform4(-1.0f64..1.0),
    )
        .prop_map(|(x, v)| GeodesicState::new(x, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn strict_runs_conserve_energy_and_reverse(seed in 0u64..1000, s0 in state()) {
        let m = random_strict_metric(&mut rng(seed, 2), "strict", 2);
        let opts = IntegrationOptions::with_horizon(10.0);
        let (traj, out) = integrate_geodesic(&m, &s0, &opts).unwrap();
        prop_assert_eq!(out.verdict.name(), "Completed");
        let e = monitor(&m, &traj, Monitor::Energy, None).unwrap();
        for v in &e {
            prop_assert!((v - e[0]).abs() <= 1e-7 * (1.0 + e[0].abs()));
        }
        let end = traj.last();
        let back = GeodesicState { t: 0.0, x: end.x, v: end.v.map(|c| -c) };
        let (rev, _) = integrate_geodesic(&m, &back, &opts).unwrap();
        let r = rev.last();
        for k in 0..4 {
            prop_assert!((r.x[k] - s0.x[k]).abs() < 1e-6, "{:?} vs {:?}", r.x, s0.x);
        }
    }

    #[test]
    fn transport_preserves_gram_on_strict_runs(seed in 0u64..1000, s0 in state()) {
        let m = random_strict_metric(&mut rng(seed, 3), "strict", 2);
        let (traj, _) = integrate_geodesic(&m, &s0, &IntegrationOptions::with_horizon(5.0)).unwrap();
        let frames = parallel_transport(&m, &traj, &COORDINATE_FRAME).unwrap();
        let d = gram_drift(&m, &frames);
        prop_assert!(d.absolute < 1e-9, "{:?}", d);
    }
}
