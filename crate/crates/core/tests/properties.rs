use nalgebra::DVector;
use proptest::prelude::*;
use usbp_core::operators::{
    build_lgl_usbp_with, build_usbp, verify_usbp, DissipationSpec, OperatorBundle,
};
use usbp_core::physics::{advection_splitting, Equation, EulerState, FluxSplitting, SplittingKind};
use usbp_core::semidisc::{Boundary, Coupling, Dg1d, Mesh1D, SemiDiscretization};

fn spec(n: usize, degree: usize, lambdas: &[f64]) -> DissipationSpec {
    let eigenvalues = (0..n)
        .map(|k| if k <= degree { 0.0 } else { lambdas[k] })
        .collect();
    DissipationSpec::new(eigenvalues, degree).unwrap()
}

fn arb_spec() -> impl Strategy<Value = DissipationSpec> {
    (3usize..=7)
        .prop_flat_map(|n| (Just(n), 0..=n - 2, prop::collection::vec(-2.0f64..-1e-4, n)))
        .prop_map(|(n, d, l)| spec(n, d, &l))
}

fn arb_state(dim: usize) -> impl Strategy<Value = EulerState> {
    (
        0.1f64..5.0,
        prop::collection::vec(-3.0f64..3.0, dim),
        0.1f64..5.0,
    )
        .prop_map(|(rho, v, p)| EulerState::from_primitive(rho, &v, p))
}

fn unit(angle: f64) -> [f64; 2] {
    [angle.cos(), angle.sin()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_invariants_and_round_trip(spec in arb_spec()) {
        let pair = build_lgl_usbp_with(&spec).unwrap();
        let report = verify_usbp(&pair);
        prop_assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
        prop_assert!(report.exactness_degree >= spec.degree);

        let d = (&pair.d_plus + &pair.d_minus) * 0.5;
        let s = pair.p() * (&pair.d_plus - &pair.d_minus);
        prop_assert!((d - pair.d()).amax() < 1e-12);
        prop_assert!((&s - &pair.s).amax() < 1e-12);
        let again = build_usbp(&pair.base, &s, spec.degree).unwrap();
        prop_assert!((&again.d_plus - &pair.d_plus).amax() < 1e-12);

        let json = OperatorBundle::from_pair(&pair).to_json().unwrap();
        let back = OperatorBundle::from_json(&json).unwrap().to_pair().unwrap();
        prop_assert_eq!(back.d_plus, pair.d_plus);
    }

    #[test]
    fn dissipation_is_nonpositive(spec in arb_spec(), seed in any::<u64>()) {
        let pair = build_lgl_usbp_with(&spec).unwrap();
        let n = pair.len();
        let mut rng = seed;
        let u = DVector::from_fn(n, |_, _| {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        });
        let sym = &pair.q_plus + pair.q_plus.transpose();
        prop_assert!((&u.transpose() * &sym * &u)[(0, 0)] <= 1e-13);
        prop_assert!((&u.transpose() * &pair.s * &u)[(0, 0)] <= 1e-13);
    }

    #[test]
    fn upwind_advection_energy_decays(
        spec in arb_spec(),
        j in 1usize..6,
        values in prop::collection::vec(-1.0f64..1.0, 7 * 6),
    ) {
        let pair = build_lgl_usbp_with(&spec).unwrap();
        let sd = Dg1d::new(
            Mesh1D::new(-1.0, 1.0, j).unwrap(),
            &pair,
            Equation::advection_1d(),
            Coupling::Upwind(advection_splitting(1.0).unwrap()),
            Boundary::Periodic,
        )
        .unwrap();
        let u = values[..sd.len()].to_vec();
        let mut du = vec![0.0; u.len()];
        sd.rhs(&u, 0.0, &mut du).unwrap();
        let bound = 1e-12 * sd.inner(&u, &u, 0).max(1.0) / sd.h_min();
        prop_assert!(sd.inner(&u, &du, 0) <= bound);
    }

    #[test]
    fn splittings_sum_to_flux(
        state in arb_state(2),
        angle in 0.0f64..std::f64::consts::TAU,
        stretch in 0.2f64..3.0,
    ) {
        let eq = Equation::Euler { dim: 2 };
        let u = state.to_conserved();
        let n = unit(angle).map(|c| c * stretch);
        let mut f = vec![0.0; 4];
        eq.flux(&u, &n, &mut f);
        let lf = Some(eq.max_speed(&u) * stretch);
        for (kind, lambda) in [
            (SplittingKind::StegerWarming, None),
            (SplittingKind::VanLeerHaenel, None),
            (SplittingKind::LaxFriedrichs, lf),
        ] {
            let (fp, fm) = FluxSplitting::new(kind, eq.clone(), lambda).unwrap().split_vec(&u, &n).unwrap();
            for k in 0..4 {
                let tol = 1e-12 * (1.0 + f[k].abs());
                prop_assert!((fp[k] + fm[k] - f[k]).abs() < tol, "{kind:?} component {k}");
            }
        }
    }

    #[test]
    fn supersonic_flow_is_fully_upwinded(
        rho in 0.1f64..5.0,
        p in 0.1f64..5.0,
        mach in 1.0f64..4.0,
        tangential in -2.0f64..2.0,
        angle in 0.0f64..std::f64::consts::TAU,
        forward in any::<bool>(),
    ) {
        let eq = Equation::Euler { dim: 2 };
        let c = (usbp_core::physics::GAMMA * p / rho).sqrt();
        let n = unit(angle);
        let t = [-n[1], n[0]];
        let vn = if forward { mach * c } else { -mach * c };
        let v = [vn * n[0] + tangential * t[0], vn * n[1] + tangential * t[1]];
        let u = EulerState::from_primitive(rho, &v, p).to_conserved();
        for kind in [SplittingKind::StegerWarming, SplittingKind::VanLeerHaenel] {
            let (fp, fm) = FluxSplitting::new(kind, eq.clone(), None).unwrap().split_vec(&u, &n).unwrap();
            let upstream = if forward { &fm } else { &fp };
            let scale = 1.0 + fp.iter().chain(&fm).fold(0.0f64, |m, x| m.max(x.abs()));
            prop_assert!(upstream.iter().all(|x| x.abs() < 1e-12 * scale), "{kind:?} {upstream:?}");
        }
    }
}
