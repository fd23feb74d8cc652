mod common;

use common::*;
use proptest::prelude::*;
use swfem::diagnostics::{observed_rate, RateTable};
use swfem::mesh_space::Constraint;
use swfem::semidiscrete::SourceMode;
use swfem::steady_state::Branch;

fn order_and_continuity() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=5).prop_flat_map(|r| (Just(r), 0..r - 1))
}

fn constraint() -> impl Strategy<Value = Constraint> {
    prop_oneof![
        Just(Constraint::Free),
        Just(Constraint::ZeroLeft),
        Just(Constraint::ZeroRight),
        Just(Constraint::ZeroBoth),
        Just(Constraint::Periodic),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauss_rules_integrate_their_degree(
        s in 1usize..=10,
        c in prop::collection::vec(-2.0f64..2.0, 20),
        a in -3.0f64..1.0,
        w in 0.1f64..4.0,
    ) {
        prop_assert!(quadrature_defect(s, &c[..2 * s], a, a + w) < 1e-13);
    }

    #[test]
    fn mass_matrix_is_spd_and_solves(
        (r, k) in order_and_continuity(),
        n in 12usize..40,
        pert in 0.0f64..0.3,
        c in constraint(),
        seed in any::<u64>(),
    ) {
        let sp = space(mesh(n, pert, seed), r, k, c);
        let (asym, rayleigh, res) = mass_defects(&sp, seed);
        prop_assert!(asym == 0.0);
        prop_assert!(rayleigh > 0.0);
        prop_assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn projection_is_a_linear_orthogonal_idempotent(
        (r, k) in order_and_continuity(),
        n in 4usize..30,
        pert in 0.0f64..0.3,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        freq in 1.0f64..12.0,
        seed in any::<u64>(),
    ) {
        let sp = space(mesh(n, pert, seed), r, k, Constraint::Free);
        let [idem, lin, orth] = projection_defects(&sp, a, b, freq);
        prop_assert!(idem < 1e-12, "idempotence {idem}");
        prop_assert!(lin < 1e-12, "linearity {lin}");
        prop_assert!(orth < 1e-12, "orthogonality {orth}");
    }

    #[test]
    fn splines_reproduce_polynomials(
        (r, k) in order_and_continuity(),
        n in 1usize..25,
        pert in 0.0f64..0.3,
        c in prop::collection::vec(-2.0f64..2.0, 5),
        seed in any::<u64>(),
    ) {
        let sp = space(mesh(n, pert, seed), r, k, Constraint::Free);
        prop_assert!(reproduction_defect(&sp, &c[..r]) < 1e-12);
        prop_assert!(partition_defect(&sp) < 1e-14);
    }

    #[test]
    fn rate_of_a_power_law_is_its_exponent(
        c in 1.0f64..1e3,
        p in 0.5f64..4.0,
        n0 in 4usize..50,
        m in 2usize..5,
    ) {
        let e = |n: usize| c * (n as f64).powf(-p);
        let mut t = RateTable::new(["x"]);
        let ns: Vec<usize> = (0..m).map(|i| n0 << i).collect();
        for &n in &ns {
            t.push(n, vec![e(n)]);
        }
        for (w, row) in ns.windows(2).zip(&t.rows[1..]) {
            let direct = observed_rate(w[0] as f64, e(w[0]), w[1] as f64, e(w[1])).unwrap();
            prop_assert!((direct - p).abs() < 1e-12);
            prop_assert_eq!(row.rates[0], Some(direct));
        }
    }

    #[test]
    fn still_water_is_a_fixed_point(
        periodic in any::<bool>(),
        amp in 0.0f64..0.4,
        eta0 in -0.2f64..0.2,
        r in 2usize..=4,
        n in 8usize..60,
    ) {
        prop_assert!(still_water_defect(periodic, amp, eta0, r, n) <= 1e-13);
    }

    #[test]
    fn discrete_lake_at_rest_is_a_fixed_point(
        amp in 0.0f64..0.4,
        r in 2usize..=5,
        n in 10usize..60,
        interpolated in any::<bool>(),
    ) {
        let source = if interpolated { SourceMode::InterpolatedBeta } else { SourceMode::ProjectedBeta };
        prop_assert!(lake_at_rest_defect(amp, r, n, source) <= 1e-12);
    }

    #[test]
    fn steady_profiles_keep_discharge_and_head(
        amp in 0.0f64..0.1,
        fr in prop_oneof![0.1f64..0.5, 2.0f64..4.0],
    ) {
        let branch = if fr > 1.0 { Branch::Supercritical } else { Branch::Subcritical };
        prop_assert!(steady_invariant_defect(amp, fr, branch) <= 1e-12);
    }

    #[test]
    fn characteristic_ends_vanish_exactly(
        sub in any::<bool>(),
        (r, _) in order_and_continuity(),
        n in 2usize..30,
        seed in any::<u64>(),
    ) {
        prop_assert_eq!(boundary_values(sub, r, n, seed), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagonal_variables_round_trip(
        depth in 0.2f64..3.0,
        u0 in 0.0f64..0.5,
        a in -0.1f64..0.1,
        b in -0.1f64..0.1,
        r in 2usize..=4,
    ) {
        let g = 9.81;
        let cfg = config(serde_json::json!({
            "formulation": "subcritical_char",
            "bathymetry": {"kind": "flat", "depth": depth},
            "constants": {"eta0": 0.0, "u0": u0, "g": g},
            "initial": {"kind": "constant"}
        }));
        let disc = swfem::semidiscrete::Discretization { order: r, ..Default::default() };
        let scheme = swfem::semidiscrete::Scheme::new(&cfg, mesh(12, 0.0, 0), &disc).unwrap();
        // linear v, w vanishing where the space constrains them
        let (v, w) = (move |x: f64| a * x, move |x: f64| b * (1.0 - x));
        let c0 = (g * depth).sqrt();
        let eta = move |x: f64| (0.5 * (v(x) - w(x)) + c0).powi(2) / g - depth;
        let u = move |x: f64| v(x) + w(x) + u0;
        let s = scheme.state_from_physical(0.0, eta, u).unwrap();
        for i in 0..=24 {
            let x = i as f64 / 24.0;
            prop_assert!((scheme.eta(&s, x) - eta(x)).abs() < 1e-13 * depth.max(1.0));
            prop_assert!((scheme.u(&s, x) - u(x)).abs() < 1e-13);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn periodic_mass_is_conserved(
        amp in 0.0f64..0.3,
        pulse in 0.01f64..0.2,
        r in 2usize..=4,
        n in 16usize..64,
    ) {
        prop_assert!(mass_drift(amp, pulse, r, n, 40) <= 1e-11);
    }
}
