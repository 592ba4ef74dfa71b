use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use eisdenom::arith::{is_prime, padic_val, zeta_denominator, zeta_neg, zeta_numerator};
use eisdenom::eis_eval::{delta_p, denominator_eis, lift_limit, pair_lift, w_series};
use eisdenom::padic::teichmuller;
use eisdenom::quadfield::{
    narrow_classes, partial_zeta_table, rademacher, reduced_forms, valid_discriminant,
};
use eisdenom::sympoly::Mat2;

fn small_prime() -> impl Strategy<Value = u64> {
    (2u64..200).prop_filter("prime", |&p| is_prime(p))
}

fn sl2_nonzero_trace() -> impl Strategy<Value = Mat2> {
    (-12i64..=12, -12i64..=12, -12i64..=12).prop_filter_map(
        "integral d with nonzero trace",
        |(a, b, c)| {
            if a == 0 || (1 + b * c) % a != 0 {
                return None;
            }
            let d = (1 + b * c) / a;
            (a + d != 0).then(|| Mat2::from_i64(a, b, c, d))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn defect_equals_numerator_valuation(half in 1usize..=10, p in small_prime()) {
        let n = 2 * half;
        let ord = padic_val(&eisdenom::arith::big_rat(zeta_numerator(n + 2)), p).unwrap_or(0);
        prop_assert_eq!(delta_p(n, p).unwrap(), ord);
    }

    #[test]
    fn zeta_splits_into_numerator_over_denominator(half in 1usize..=60) {
        let m = 2 * half;
        let v = zeta_neg(m);
        prop_assert_eq!(v.numer().magnitude().clone(), zeta_numerator(m).magnitude().clone());
        prop_assert_eq!(v.denom().clone(), zeta_denominator(m));
    }

    #[test]
    fn lift_pairing_is_congruent_to_limit(p in prop::sample::select(vec![3u64, 5, 7]), m in 1u32..=8) {
        let value = pair_lift(2, p, 1, m).unwrap();
        let w = w_series(2, p, 1, m).unwrap();
        prop_assert!(padic_val(&w, p).is_none_or(|v| v >= 0));
        let limit = lift_limit(2, 1, p).unwrap();
        let gap = padic_val(&(value - limit), p);
        prop_assert!(gap.is_none_or(|v| v >= 1));
    }

    #[test]
    fn teichmuller_is_a_root_of_unity(p in (3u64..60).prop_filter("prime", |&p| is_prime(p)), a in 1i64..1000, r in 1u32..6) {
        prop_assume!(a % p as i64 != 0);
        let w = teichmuller(&BigInt::from(a), p, r).unwrap();
        let one = w.pow(&BigInt::from(p - 1));
        prop_assert!(one.residue.is_one());
        prop_assert_eq!((&w.residue - BigInt::from(a)) % BigInt::from(p), BigInt::from(0));
    }

    #[test]
    fn rademacher_values_are_integers(g in sl2_nonzero_trace(), k in 2usize..=4) {
        prop_assert!(rademacher(k, &g).unwrap().integral);
    }

    #[test]
    fn scaled_partial_zeta_is_integral(d in 5i64..150, k in 2usize..=3) {
        prop_assume!(valid_discriminant(d));
        for row in partial_zeta_table(d, k).unwrap() {
            prop_assert!(row.j_times_zeta.is_integer(), "D={} class {}", d, row.class_index);
        }
    }

    #[test]
    fn classes_partition_reduced_forms(d in 5i64..400) {
        prop_assume!(valid_discriminant(d));
        let mut seen: Vec<_> = narrow_classes(d).unwrap().into_iter().flat_map(|c| c.cycle).collect();
        seen.sort();
        let mut all = reduced_forms(d);
        all.sort();
        prop_assert_eq!(seen, all);
    }
}

#[test]
fn denominator_report_covers_small_weights() {
    for n in [2usize, 4, 6, 8] {
        let rep = denominator_eis(n, 200).unwrap();
        assert!(rep.all_match, "n = {n}");
        assert_eq!(rep.numerator, BigInt::one());
    }
}
