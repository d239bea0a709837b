use depthzero::affine::LevelSet;
use depthzero::calc::{default_table, parse_spec, run_pipeline};
use depthzero::hecke::{CoxeterPresentation, HeckeAlgebra, LaurentPoly, OmegaGroup, ParameterFunction};
use depthzero::rational::{q, qr};
use depthzero::rootdata::{FrobeniusAction, RootDatum};
use depthzero::theta::{theta_root_subsystem, ThetaDatum};
use proptest::prelude::*;

const SL3: &str = r#""root_datum": {"rank": 2,
    "roots": [[2, -1], [-2, 1], [-1, 2], [1, -2], [1, 1], [-1, -1]],
    "coroots": [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]]}"#;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // s with denominator dividing q - 1, so every wall is decided by the oracle
    #[test]
    fn sl3_relevance_is_theta_membership(a in 0i64..4, b in 0i64..4, qq in prop::sample::select(vec![3u64, 5])) {
        let den = qq as i64 - 1;
        let text = format!(
            r#"{{"schema_version": 1, {SL3}, "theta": ["{a}/{den}", "{b}/{den}"], "x0": ["1/10", "1/7"],
                "options": {{"q": {qq}, "check_oracle": true}}}}"#
        );
        let r = run_pipeline(&parse_spec(&text).unwrap(), &default_table()).unwrap();
        prop_assert!(r.relevance_matches_theta);
        prop_assert!(r.oracle_checks.iter().all(|c| c.agree));
        prop_assert!(r.walls.iter().all(|w| w.status == "resolved"));
        prop_assert_eq!(&r.hecke.parameter_check, "ok");
    }

    #[test]
    fn sl2_generic_points_see_two_walls(n in 1i64..40, d in 41i64..97) {
        prop_assume!(2 * n != d);
        let text = format!(
            r#"{{"schema_version": 1, "root_datum": {{"rank": 1, "roots": [[2], [-2]], "coroots": [[1], [-1]]}},
                "theta": ["0"], "x0": ["{n}/{d}"]}}"#
        );
        let r = run_pipeline(&parse_spec(&text).unwrap(), &default_table()).unwrap();
        prop_assert_eq!(r.walls.len(), 2);
        prop_assert_eq!(r.hecke.type_label.as_str(), "~A1");
    }

    #[test]
    fn theta_subsystem_is_closed_under_negation(a in 0i64..12, b in 0i64..12, c in 0i64..12) {
        let d = RootDatum::gl(3);
        let t = ThetaDatum::new(vec![qr(a, 12), qr(b, 12), qr(c, 12)], FrobeniusAction::identity(3)).unwrap();
        let phi = theta_root_subsystem(&d, &t);
        let sys = d.system();
        for &i in &phi {
            prop_assert!(phi.contains(&sys.negative(i).unwrap()));
        }
        prop_assert_eq!(phi.is_empty(), a != b && b != c && a != c);
    }

    #[test]
    fn level_shift_moves_membership(off in -20i64..20, per in 1i64..6, k in -30i64..30, c in -10i64..10) {
        let l = LevelSet::new(qr(off, 3), qr(per, 2));
        let x = qr(k, 6);
        prop_assert_eq!(l.contains(x), l.shift(qr(c, 5)).contains(x + qr(c, 5)));
    }

    #[test]
    fn quadratic_relation_for_any_parameter(e in 1i64..7, half in any::<bool>()) {
        let m = if half { qr(e, 2) } else { q(e) };
        let cox = CoxeterPresentation::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let h = HeckeAlgebra::new(cox, OmegaGroup::trivial(2), ParameterFunction::from_exponents(&[m, m])).unwrap();
        let t = h.generator(1);
        let qs = LaurentPoly::q_pow(m);
        let expected = t.scale(&(&qs - &LaurentPoly::one())).add(&h.unit().scale(&qs));
        prop_assert_eq!(h.multiply(&t, &t), expected);
    }
}
