mod common;

use common::{c, gaussian_matrix, min_eigenvalue, random_mixed};
use gconc::linalg::{identity, kron, max_abs, max_abs_diff};
use gconc::seed;
use gconc::states::{
    apply_one_sided, apply_two_sided, channel_from_jamiolkowski, depolarizing_channel,
    depolarizing_probability, dual_form, filtering_operator, isotropic_state, jamiolkowski_state,
    max_entangled, random_channel, random_channel_from, weyl_operator,
};
use gconc::{ComplexMatrix, DensityMatrix, KrausChannel, PureState, Subsystem};
use proptest::prelude::*;
use rand::Rng as _;

#[test]
fn filter_maps_phi_to_chi() {
    let mut rng = seed::rng(1);
    for d in 2..=6 {
        let phi = max_entangled(d).unwrap().vector();
        for _ in 0..200 {
            let chi = PureState::random(d, d, &mut rng).unwrap();
            let m = filtering_operator(&chi).unwrap();
            let out = kron(&m, &identity(d)) * &phi;
            let err = (out - chi.vector()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err <= 1e-12, "d={d}: {err:e}");
        }
    }
}

#[test]
fn dual_form_matches_direct_evolution() {
    let mut rng = seed::rng(2);
    for d in 2..=4 {
        for _ in 0..100 {
            let chi = PureState::random(d, d, &mut rng).unwrap();
            let n = rng.random_range(1..=d * d);
            let ch = random_channel_from(d, n, &mut rng).unwrap();
            let direct = apply_one_sided(&ch, &chi, Subsystem::Second).unwrap();
            let dual = dual_form(&chi, &ch).unwrap();
            assert!(max_abs_diff(direct.matrix(), dual.matrix()) <= 1e-10);
        }
    }
}

#[test]
fn depolarizing_matches_closed_form_action() {
    let mut rng = seed::rng(3);
    for d in 2..=4 {
        for p in [0.0, 0.3, 1.0] {
            let ch = depolarizing_channel(d, p).unwrap();
            assert!(ch.trace_preserving());
            let x = gaussian_matrix(d, d, &mut rng);
            let want = x.scale(1.0 - p) + identity(d).scale(p / d as f64).map(|z| z * x.trace());
            assert!(max_abs_diff(&ch.apply_matrix(&x).unwrap(), &want) <= 1e-12);
        }
    }
    assert!(depolarizing_channel(2, 1.5).is_err());
}

#[test]
fn depolarizing_semigroup() {
    let mut rng = seed::rng(4);
    for d in 2..=4 {
        for _ in 0..10 {
            let gamma = rng.random_range(0.1..3.0);
            let (t1, t2) = (rng.random_range(0.0..0.5), rng.random_range(0.0..0.5));
            let p = |t| depolarizing_probability(d, gamma, t).unwrap();
            let composed = depolarizing_channel(d, p(t1))
                .unwrap()
                .compose(&depolarizing_channel(d, p(t2)).unwrap())
                .unwrap();
            let direct = depolarizing_channel(d, p(t1 + t2)).unwrap();
            assert!(composed.action_distance(&direct).unwrap() <= 1e-12);
            let rho = random_mixed(d, d, d, &mut rng);
            let a = apply_one_sided(&composed, &rho, Subsystem::Second).unwrap();
            let b = apply_one_sided(&direct, &rho, Subsystem::Second).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) <= 1e-12);
        }
    }
}

#[test]
fn jamiolkowski_of_depolarizing_is_isotropic() {
    for d in 2..=5 {
        for p in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let rho = jamiolkowski_state(&depolarizing_channel(d, p).unwrap(), d).unwrap();
            let f = 1.0 - p + p / (d * d) as f64;
            let iso = isotropic_state(d, f).unwrap();
            assert!(max_abs_diff(rho.matrix(), iso.matrix()) <= 1e-12);
        }
    }
}

#[test]
fn jamiolkowski_round_trip() {
    let mut rng = seed::rng(5);
    for d in [2, 3] {
        for _ in 0..50 {
            let n = rng.random_range(1..=d * d);
            let ch = random_channel_from(d, n, &mut rng).unwrap();
            let back = channel_from_jamiolkowski(&jamiolkowski_state(&ch, d).unwrap()).unwrap();
            assert!(back.kraus().len() <= d * d);
            assert!(ch.action_distance(&back).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn jamiolkowski_inverse_rejects_non_channel_states() {
    let rho = DensityMatrix::new(2, 2, {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        m
    })
    .unwrap();
    assert!(channel_from_jamiolkowski(&rho).is_err());
}

#[test]
fn weyl_operators_form_an_orthogonal_unitary_basis() {
    let d = 3;
    let ops: Vec<_> = (0..d).flat_map(|a| (0..d).map(move |b| weyl_operator(d, a, b))).collect();
    for (i, u) in ops.iter().enumerate() {
        assert!(max_abs_diff(&(u.adjoint() * u), &identity(d)) < 1e-12);
        for (j, v) in ops.iter().enumerate() {
            let ip = (u.adjoint() * v).trace();
            let want = if i == j { d as f64 } else { 0.0 };
            assert!((ip - c(want, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn channel_validation() {
    assert!(KrausChannel::new(vec![]).is_err());
    assert!(KrausChannel::new(vec![ComplexMatrix::zeros(2, 3)]).is_err());
    assert!(KrausChannel::new(vec![identity(2).scale(1.1)]).is_err());
    let damp = KrausChannel::new(vec![identity(2).scale(0.5)]).unwrap();
    assert!(!damp.trace_preserving());
    assert!(random_channel(2, 5, 0).is_err());
    assert!(KrausChannel::new(vec![identity(2), identity(3)]).is_err());
}

#[test]
fn two_sided_application_order_is_irrelevant() {
    let mut rng = seed::rng(6);
    let rho = random_mixed(2, 2, 3, &mut rng);
    let a = random_channel_from(2, 2, &mut rng).unwrap();
    let b = random_channel_from(2, 3, &mut rng).unwrap();
    let one = apply_two_sided(&a, &b, &rho).unwrap();
    let other = apply_one_sided(&a, &apply_one_sided(&b, &rho, Subsystem::Second).unwrap(), Subsystem::First).unwrap();
    assert!(max_abs_diff(one.matrix(), other.matrix()) < 1e-12);
}

#[test]
fn pure_and_mixed_paths_agree() {
    let mut rng = seed::rng(7);
    let chi = PureState::random(2, 3, &mut rng).unwrap();
    let ch = random_channel_from(3, 4, &mut rng).unwrap();
    let from_pure = apply_one_sided(&ch, &chi, Subsystem::Second).unwrap();
    let from_mixed = apply_one_sided(&ch, &chi.density(), Subsystem::Second).unwrap();
    assert!(max_abs_diff(from_pure.matrix(), from_mixed.matrix()) < 1e-12);
    assert!(apply_one_sided(&ch, &chi, Subsystem::First).is_err());
}

#[test]
fn json_round_trips() {
    let mut rng = seed::rng(8);
    let chi = PureState::random(2, 3, &mut rng).unwrap();
    let text = serde_json::to_string(&chi).unwrap();
    let back: PureState = serde_json::from_str(&text).unwrap();
    assert!(max_abs_diff(chi.coeffs(), back.coeffs()) == 0.0);

    let rho = random_mixed(2, 2, 2, &mut rng);
    let text = serde_json::to_string(&rho).unwrap();
    assert!(text.contains("\"d\":2") && text.contains("\"f\":2"));
    let back: DensityMatrix = serde_json::from_str(&text).unwrap();
    assert!(max_abs_diff(rho.matrix(), back.matrix()) == 0.0);

    let ch = random_channel(3, 2, 1).unwrap();
    let text = serde_json::to_string(&ch).unwrap();
    assert!(text.contains("\"trace_preserving\":true"));
    let back: KrausChannel = serde_json::from_str(&text).unwrap();
    assert_eq!(ch.action_distance(&back).unwrap(), 0.0);
}

#[test]
fn json_entries_are_re_im_pairs() {
    let v: serde_json::Value = serde_json::to_value(max_entangled(2).unwrap()).unwrap();
    let first = v["coeffs"][0][0].as_array().unwrap();
    assert!((first[0].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert_eq!(first[1], serde_json::json!(0.0));
    assert_eq!(v["coeffs"][0][1], serde_json::json!([0.0, 0.0]));
}

#[test]
fn json_rejects_inconsistent_input() {
    let bad_dims = r#"{"d":2,"f":2,"coeffs":[[[1,0],[0,0],[0,0]]]}"#;
    assert!(serde_json::from_str::<PureState>(bad_dims).is_err());
    let not_hermitian = r#"{"d":1,"f":2,"matrix":[[[0.5,0],[0.3,0]],[[0,0],[0.5,0]]]}"#;
    assert!(serde_json::from_str::<DensityMatrix>(not_hermitian).is_err());
    let wrong_flag = r#"{"d":1,"trace_preserving":false,"kraus":[[[[1,0]]]]}"#;
    assert!(serde_json::from_str::<KrausChannel>(wrong_flag).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructed_states_are_valid(d in 2usize..=4, n in 1usize..=16, s in any::<u64>()) {
        let n = n.min(d * d);
        let mut rng = seed::rng(s);
        let chi = PureState::random(d, d, &mut rng).unwrap();
        let ch = random_channel_from(d, n, &mut rng).unwrap();
        let states = [
            chi.density(),
            apply_one_sided(&ch, &chi, Subsystem::Second).unwrap(),
            dual_form(&chi, &ch).unwrap(),
            jamiolkowski_state(&ch, d).unwrap(),
            isotropic_state(d, rng.random_range(1.0 / (d * d) as f64..=1.0)).unwrap(),
        ];
        for rho in &states {
            prop_assert!(rho.check_invariants().is_ok());
            prop_assert!((rho.trace() - 1.0).abs() <= 1e-10);
            prop_assert!(min_eigenvalue(rho.matrix()) >= -1e-10);
            prop_assert!(max_abs(&(rho.matrix() - rho.matrix().adjoint())) <= 1e-12);
        }
    }
}
