use std::collections::BTreeMap;

use bbs_core::measures::{AlphaParams, Excursion, AB};
use bbs_core::{
    eliminate_k, evolve, parse_config, reconstruct_from_zeta, skip, ts_decompose,
    verify_linearization, zeta_of, BallConfig, Boundary, Capacity, Observable,
};
use proptest::prelude::*;

fn half_line(max_len: usize) -> impl Strategy<Value = BallConfig> {
    prop::collection::vec(0..2u8, 0..=max_len).prop_map(|bits| {
        let sites: Vec<i64> = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(j, _)| j as i64 + 1)
            .collect();
        BallConfig::from_sites(&sites, Boundary::HalfLine).unwrap()
    })
}

fn whole_line(max_len: usize) -> impl Strategy<Value = BallConfig> {
    (prop::collection::vec(0..2u8, 1..=max_len), -30i64..10)
        .prop_map(|(bits, origin)| BallConfig::new(origin, bits, Boundary::WholeLine).unwrap())
}

fn capacity() -> impl Strategy<Value = Capacity> {
    prop_oneof![
        (1u32..5).prop_map(Capacity::Finite),
        Just(Capacity::Infinite)
    ]
}

/// A random Dyck-type excursion: 0, then a balanced path, built from a bracket sequence.
fn excursion(max_pairs: usize) -> impl Strategy<Value = Excursion> {
    prop::collection::vec(any::<bool>(), 0..=2 * max_pairs).prop_map(|coins| {
        let mut word = vec![0u8];
        let (mut open, mut left) = (0usize, coins.len() / 2);
        for c in coins {
            if left > 0 && (open == 0 || c) {
                word.push(1);
                open += 1;
                left -= 1;
            } else if open > 0 {
                word.push(0);
                open -= 1;
            }
        }
        word.extend(std::iter::repeat_n(0, open));
        Excursion::new(word).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn evolution_conserves_balls(cfg in whole_line(30), cap in capacity()) {
        prop_assert_eq!(evolve(&cfg, cap).ball_count(), cfg.ball_count());
    }

    #[test]
    fn soliton_content_is_conserved(cfg in whole_line(30), cap in capacity()) {
        let before = ts_decompose(&cfg).size_counts();
        prop_assert_eq!(ts_decompose(&evolve(&cfg, cap)).size_counts(), before);
    }

    #[test]
    fn soliton_content_matches_zeta_totals(cfg in whole_line(30)) {
        let ts = ts_decompose(&cfg);
        prop_assert_eq!(ts.size_counts(), zeta_of(&cfg).totals());
        let mass: u32 = ts.solitons.iter().map(|s| s.size).sum();
        prop_assert_eq!(mass as usize, cfg.ball_count());
    }

    #[test]
    fn evolution_commutes_with_shifts(cfg in whole_line(24), y in -12i64..12, cap in capacity()) {
        let shifted = cfg.shift(y).unwrap();
        prop_assert_eq!(evolve(&shifted, cap), evolve(&cfg, cap).shift(y).unwrap());
    }

    #[test]
    fn shift_round_trip(cfg in whole_line(24), y in -40i64..40) {
        prop_assert_eq!(cfg.shift(y).unwrap().shift(-y).unwrap(), cfg);
    }

    #[test]
    fn render_parse_round_trip(cfg in whole_line(24)) {
        prop_assert_eq!(parse_config(&cfg.render(), Boundary::WholeLine).unwrap(), cfg);
    }

    #[test]
    fn skip_semigroup(cfg in whole_line(26), k in 1u32..4, l in 1u32..4) {
        let twice = skip(&skip(&cfg, l).unwrap(), k).unwrap();
        prop_assert_eq!(twice, skip(&cfg, k + l).unwrap());
    }

    #[test]
    fn elimination_equals_skip(cfg in half_line(24), k in 1u32..6) {
        let (phi, rig) = eliminate_k(&cfg, k).unwrap();
        prop_assert_eq!(&phi, &skip(&cfg, k).unwrap());
        let zeta: BTreeMap<(u32, i64), u32> =
            zeta_of(&cfg).entries().iter().filter(|(&(j, _), _)| j <= k).map(|(a, b)| (*a, *b)).collect();
        prop_assert_eq!(rig.entries(), &zeta);
    }

    #[test]
    fn zeta_round_trip_half_line(cfg in half_line(30)) {
        prop_assert_eq!(reconstruct_from_zeta(&zeta_of(&cfg), Boundary::HalfLine).unwrap(), cfg);
    }

    #[test]
    fn half_line_linearization(cfg in half_line(24), cap in capacity(), k in 1u32..6) {
        let r = verify_linearization(&cfg, cap, k).unwrap();
        prop_assert!(r.ok, "{:?}", r.mismatches);
    }

    #[test]
    fn whole_line_linearization(cfg in whole_line(24), k in 1u32..6) {
        let r = verify_linearization(&cfg, Capacity::Infinite, k).unwrap();
        prop_assert!(r.ok, "{:?}", r.mismatches);
    }

    #[test]
    fn skip_removes_one_ball_per_level_and_soliton(cfg in half_line(26), k in 1u32..4) {
        let totals = zeta_of(&cfg).totals();
        let lost: u32 = totals.iter().map(|(&size, &n)| size.min(k) * n).sum();
        prop_assert_eq!(skip(&cfg, k).unwrap().ball_count(), cfg.ball_count() - lost as usize);
    }

    #[test]
    fn excursion_content_fixes_length(eps in excursion(12)) {
        let content = eps.content();
        let weight: u32 = content.iter().enumerate().map(|(i, &n)| (i as u32 + 1) * n).sum();
        prop_assert_eq!(eps.len(), 1 + 2 * weight as usize);
    }

    #[test]
    fn markov_matrix_round_trip(a in 0.01f64..0.6, b in 0.0f64..0.6) {
        prop_assume!(a.sqrt() + b.sqrt() < 0.99);
        let ab = AB::new(a, b).unwrap();
        let back = AB::from_matrix(&ab.matrix()).unwrap();
        prop_assert!((back.a - a).abs() < 1e-12 && (back.b - b).abs() < 1e-12);
    }

    #[test]
    fn alpha_q_round_trip(head in prop::collection::vec(0.0f64..0.08, 1..5)) {
        let alpha = AlphaParams::finite(head).unwrap();
        let back = alpha.to_q().unwrap().to_alpha();
        for k in 1..=6 {
            prop_assert!((back.get(k) - alpha.get(k)).abs() < 1e-12, "k={}", k);
        }
    }

    #[test]
    fn observable_display_round_trip(k in 1u32..5, j in -3i64..4, l in 1u32..4) {
        for s in [format!("skip:{k}:eta:{j}*up:{l}:{j}"), format!("wseat:{k}*carrier:{l}"), format!("down:{k}:{j}")] {
            let o: Observable = s.parse().unwrap();
            prop_assert_eq!(o.to_string(), s);
        }
    }
}
