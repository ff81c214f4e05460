use num_bigint::BigInt;
use proptest::prelude::*;

use nilschober_core::algebra::{parabolic_split, parse_expression, truncated_polynomial_module, ExpressionAst};
use nilschober_core::fiber::{cross_check_order, sweep};
use nilschober_core::oracle::oracle_matches_engine_on;
use nilschober_core::report::ReportDocument;
use nilschober_core::shuffles::enumerate_shuffles;
use nilschober_core::{evaluate, psi, psi_inv, run_checks, total_fiber, BinaryString, CheckOptions, Composition, Error, Perm};

const STRANDS: usize = 4;

fn ast() -> impl Strategy<Value = ExpressionAst> {
    let leaf = prop_oneof![
        (-5i64..=5).prop_map(|n| ExpressionAst::Int(BigInt::from(n))),
        Just(ExpressionAst::Hbar),
        (1..=STRANDS).prop_map(ExpressionAst::X),
        (1..STRANDS).prop_map(ExpressionAst::S),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| ExpressionAst::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExpressionAst::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExpressionAst::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| ExpressionAst::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
}

fn composition(max_total: usize) -> impl Strategy<Value = Composition> {
    (1..=max_total)
        .prop_flat_map(|total| (Just(total), 0u64..1 << (total - 1)))
        .prop_map(|(total, mask)| psi_inv(&BinaryString::from_mask(mask, total - 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_expressions_reparse_to_the_same_element(e in ast()) {
        let tau = Composition::single(STRANDS);
        let printed = e.to_string();
        prop_assert_eq!(parse_expression(&printed).unwrap().evaluate(&tau).unwrap(), e.evaluate(&tau).unwrap());
    }

    #[test]
    fn canonical_forms_are_fixed_points(e in ast()) {
        let tau = Composition::single(STRANDS);
        let canonical = e.evaluate(&tau).unwrap();
        let text = canonical.to_string();
        let again = evaluate(&tau, &text).unwrap();
        prop_assert_eq!(&again, &canonical);
        prop_assert_eq!(again.to_string(), text);
    }

    #[test]
    fn arbitrary_input_evaluates_or_reports(src in "[sXh0-9+*() -]{0,24}") {
        match evaluate(&Composition::single(STRANDS), &src) {
            Ok(_) => {}
            Err(Error::Parse { pos, .. }) => prop_assert!(pos <= src.len()),
            Err(Error::GeneratorOutOfRange { .. }) => {}
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn permutation_group_laws(u in perm(6), v in perm(6)) {
        prop_assert!(u.compose(&u.inverse()).is_identity());
        prop_assert_eq!(u.compose(&v).inverse(), v.inverse().compose(&u.inverse()));
        prop_assert!(u.compose(&v).length() <= u.length() + v.length());
        prop_assert_eq!(u.inverse().length(), u.length());
        prop_assert_eq!(u.mirror().mirror(), u.clone());
        prop_assert_eq!(u.reduced_word().len(), u.length());
    }

    #[test]
    fn binary_presentation_round_trips(sigma in composition(9)) {
        let bits = psi(&sigma).unwrap();
        prop_assert_eq!(bits.len() + 1, sigma.n_total());
        prop_assert_eq!(psi_inv(&bits), sigma.clone());
        prop_assert_eq!(bits.bits().iter().filter(|&&b| b).count() + 1, sigma.len());
    }

    #[test]
    fn parabolic_split_factors_uniquely(w in perm(6), tau in composition(6).prop_filter("six strands", |t| t.n_total() == 6)) {
        let (alpha, rest) = parabolic_split(&w, &tau);
        prop_assert_eq!(alpha.compose(&rest), w.clone());
        prop_assert_eq!(alpha.length() + rest.length(), w.length());
        prop_assert!(rest.preserves_ranges(&tau.block_ranges()));
        let shuffles = enumerate_shuffles(&Composition::single(6), &tau).unwrap();
        prop_assert!(shuffles.contains(&alpha));
    }
}

#[test]
fn alternate_collapse_orders_agree() {
    for total in 2..=6 {
        for r in sweep(total).unwrap() {
            assert!(cross_check_order(&r.source, &r.target).unwrap(), "{} {}", r.source, r.target);
        }
    }
}

#[test]
fn reports_round_trip_and_reject_tampering() {
    let doc = run_checks(3, None, CheckOptions::default()).unwrap();
    let text = doc.to_json().unwrap();
    assert_eq!(ReportDocument::from_json(&text).unwrap(), doc);
    assert_eq!(doc.to_json().unwrap(), run_checks(3, None, CheckOptions::default()).unwrap().to_json().unwrap());
    let tampered = text.replacen("\"schema_version\": 1", "\"schema_version\": 7", 1);
    assert!(ReportDocument::from_json(&tampered).is_err());
    assert!(ReportDocument::from_json("{").is_err());
}

#[test]
fn oracle_ranks_scale_with_deformed_coefficients() {
    for total in 2..=4 {
        for a in 1..total {
            for c in 1..total {
                let (x, y) = (Composition::new(vec![a, total - a]).unwrap(), Composition::new(vec![c, total - c]).unwrap());
                let t = truncated_polynomial_module(&x, 2).unwrap();
                let report = total_fiber(&x, &y).unwrap();
                assert!(oracle_matches_engine_on(&report, &t).unwrap(), "{x} {y}");
            }
        }
    }
}
