use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use wellpoised::exact::{int, rat, MPoly, Rational};
use wellpoised::mzv::{normalize, regularize_word, stuffle, weak_partial, weak_to_strict, zeta_partial, Word};
use wellpoised::numeric::{eval_series_direct, NumericValue, SeriesInput};
use wellpoised::partial_fractions::{check_row_sums, decompose_multivariate, denominator_at};
use wellpoised::reducer::merge_pair;
use wellpoised::symmetric::orbit_decompose;
use wellpoised::symmetry::{act, GroupElement};
use wellpoised::AsymExp;

fn word_strategy(max_depth: usize, max_entry: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=max_entry, 1..=max_depth).prop_map(Word::new)
}

fn eval_partial(c: &wellpoised::ZCombo, n: u64) -> Rational {
    let mut total = Rational::zero();
    for (m, coeff) in c.terms() {
        let mut v = coeff.clone();
        for w in m.words() {
            v *= zeta_partial(w, n);
        }
        total += v;
    }
    total
}

/// Random polynomial with per-variable degree ≤ `deg` and small integer coefficients.
fn poly_strategy(p: usize, deg: u32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0..=deg, p), -4i64..=4), 1..5).prop_map(
        move |terms| MPoly::from_terms(p, terms.into_iter().map(|(e, c)| (e, int(c)))),
    )
}

fn group_element(p: usize) -> impl Strategy<Value = GroupElement> {
    (
        prop::collection::vec(prop::bool::ANY, p),
        Just((0..p).collect::<Vec<usize>>()).prop_shuffle(),
    )
        .prop_map(|(signs, perm)| {
            GroupElement::new(signs.into_iter().map(|b| if b { -1 } else { 1 }).collect(), perm)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stuffle_is_exact_at_every_truncation(a in word_strategy(2, 3), b in word_strategy(2, 3), n in 1u64..12) {
        let lhs = zeta_partial(&a, n) * zeta_partial(&b, n);
        prop_assert_eq!(lhs, eval_partial(&stuffle(&a, &b), n));
    }

    #[test]
    fn stuffle_commutes(a in word_strategy(3, 4), b in word_strategy(3, 4)) {
        prop_assert_eq!(stuffle(&a, &b), stuffle(&b, &a));
    }

    #[test]
    fn weak_sums_split_into_strict_sums(s in prop::collection::vec(1u32..=3, 1..=3), n in 1u64..10) {
        prop_assert_eq!(weak_partial(&s, n), eval_partial(&weak_to_strict(&s), n));
    }

    #[test]
    fn regularization_is_multiplicative(a in word_strategy(2, 2), b in word_strategy(2, 2)) {
        let mut lhs = AsymExp::zero();
        for (m, c) in stuffle(&a, &b).terms() {
            lhs.add_scaled(&regularize_word(&m.words()[0]), c);
        }
        let rhs = regularize_word(&a).mul(&regularize_word(&b));
        prop_assert_eq!(lhs.normalized().unwrap(), rhs.normalized().unwrap());
    }

    #[test]
    fn partial_fractions_recombine(
        (n, a, poly) in (0u32..=2, 1u32..=2, 1usize..=2)
            .prop_flat_map(|(n, a, p)| (Just(n), Just(a), poly_strategy(p, a * (n + 1) - 1))),
        pt in prop::collection::vec(1i64..40, 2),
    ) {
        let table = decompose_multivariate(&poly, n, a).unwrap();
        let x: Vec<Rational> = pt[..poly.arity()].iter().map(|&v| int(v)).collect();
        prop_assert_eq!(table.recombine_at(&x), poly.eval(&x) / denominator_at(&x, n, a));
    }

    #[test]
    fn convergent_tables_have_vanishing_row_sums(poly in poly_strategy(2, 4), n in 1u32..=2, a in 2u32..=3) {
        let bound = a * (n + 1) - 2;
        prop_assume!((0..2).all(|i| poly.degree_in(i) <= bound));
        let table = decompose_multivariate(&poly, n, a).unwrap();
        prop_assert!(check_row_sums(&table, 0));
        prop_assert!(check_row_sums(&table, 1));
    }

    #[test]
    fn group_action_is_compatible_with_composition(
        g in group_element(3),
        h in group_element(3),
        j in prop::collection::vec(0u32..=4, 3),
        s in prop::collection::vec(1u32..=5, 3),
    ) {
        let pt = (j, s);
        let direct = act(&g.compose(&h), &pt, 4).unwrap();
        let stepwise = act(&g, &act(&h, &pt, 4).unwrap(), 4).unwrap();
        prop_assert_eq!(direct, stepwise);
        prop_assert_eq!(act(&g.inverse(), &act(&g, &pt, 4).unwrap(), 4).unwrap(), pt);
    }

    #[test]
    fn merged_pairs_are_exact(a in 0u32..5, s in 1u32..4, b in 0u32..5, t in 1u32..4, k in 1i64..50) {
        let kr = int(k);
        let direct = Rational::one()
            / (num_traits::pow(&kr + int(a as i64), s as usize) * num_traits::pow(&kr + int(b as i64), t as usize));
        prop_assert_eq!(merge_pair(a, s, b, t).eval(&kr), direct);
    }

    #[test]
    fn orbit_sums_transform_by_sign(
        j in prop::collection::vec(0u32..=2, 2),
        s in prop::collection::vec(1u32..=3, 2),
        flip in 0usize..2,
    ) {
        let base = orbit_decompose(2, &j, &s).unwrap().gens;
        let swapped = orbit_decompose(2, &[j[1], j[0]], &[s[1], s[0]]).unwrap().gens;
        prop_assert_eq!(swapped, base.scale(&int(-1)));
        let mut jf = j.clone();
        jf[flip] = 2 - jf[flip];
        let flipped = orbit_decompose(2, &jf, &s).unwrap().gens;
        let sign = if s[flip] % 2 == 1 { int(1) } else { int(-1) };
        prop_assert_eq!(flipped, base.scale(&sign));
    }

    #[test]
    fn rational_conversion_error_is_sound(num in -10_000i64..10_000, den in 1i64..10_000) {
        let r = rat(num, den);
        let v = NumericValue::from_rational(&r, 80);
        let gap = (v.to_rational() - &r).abs();
        prop_assert!(wellpoised::exact::rat_to_f64(&gap) <= v.error_bound());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn doubling_truncation_never_increases_the_bound(poly in poly_strategy(2, 2), k in 20u64..80) {
        let input = SeriesInput { poly, n: 1, a: 2, decoupled: false };
        let b1 = eval_series_direct(&input, k, 30).unwrap().value.error_bound();
        let b2 = eval_series_direct(&input, 2 * k, 30).unwrap().value.error_bound();
        prop_assert!(b2 <= b1, "{b2} > {b1}");
    }
}

#[test]
fn normalization_is_idempotent() {
    let w = Word::new(vec![2, 1]);
    let c = wellpoised::ZCombo::word(w.clone()).mul(&wellpoised::ZCombo::word(Word::new(vec![3])));
    let once = normalize(&c).unwrap();
    assert_eq!(normalize(&once).unwrap(), once);
}
