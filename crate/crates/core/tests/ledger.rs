use nslab::ledger::*;
use num_rational::BigRational;
use proptest::prelude::*;

fn e(p: i64, q: i64) -> ExponentExpr {
    ExponentExpr::c(p, q)
}

fn table(name: &str) -> BalanceTable {
    catalog().into_iter().find(|t| t.name == name).unwrap()
}

#[test]
fn local_balance_terms_sum_to_minus_21_over_4() {
    let terms = [e(-3, 1), e(-1, 1), e(-1, 2), e(-1, 2), e(-1, 4)];
    assert_eq!(combine_exponents(&terms), e(-21, 4));
}

#[test]
fn empty_sum_is_zero() {
    assert_eq!(combine_exponents(&[]), ExponentExpr::zero());
}

#[test]
fn heat_local_terms_sum_to_minus_19_over_6() {
    assert_eq!(combine_exponents(&[e(-3, 1), e(1, 12), e(-1, 4)]), e(-19, 6));
}

#[test]
fn named_table_totals() {
    assert_eq!(table("local-A").total(), e(-21, 4));
    assert_eq!(table("global-B").total(), e(-25, 12));
    assert_eq!(table("coronal-global").total(), ExponentExpr::affine(-7, 4, -1, 1));
    assert_eq!(table("coronal-local").total(), ExponentExpr::affine(-19, 4, -1, 1));
    assert_eq!(table("offdiag-global").total(), e(-15, 4));
}

#[test]
fn every_shipped_table_is_exact_and_passes_at_five_eighths() {
    let checks = verify_catalog();
    assert!(checks.len() >= 8);
    for c in &checks {
        assert!(c.exact, "{}: {} vs {}", c.name, c.computed, c.expected);
        assert!(c.pass, "{}", c.name);
        assert!(c.margin.is_some(), "{} inactive at 5/8", c.name);
    }
}

#[test]
fn coronal_tables_inactive_at_or_below_one_half() {
    let checks = verify_tables(&catalog(), &DeltaParam::half());
    for c in checks {
        let coronal = c.name.starts_with("coronal");
        assert_eq!(c.margin.is_none(), coronal, "{}", c.name);
    }
}

#[test]
fn margins_positive_at_both_ends_of_delta_range() {
    let lo = DeltaParam::new(rat(1, 3) + rat(1, 1_000_000)).unwrap();
    for d in [lo, DeltaParam::max()] {
        for t in catalog().iter().filter(|t| t.is_active(&d)) {
            assert!(logfree_margin(&t.total(), &d) > rat(0, 1), "{} at {}", t.name, fmt_pq(d.value()));
        }
    }
}

#[test]
fn logfree_margin_examples() {
    let d = DeltaParam::max();
    assert_eq!(logfree_margin(&e(-15, 4), &d), rat(11, 4));
    assert_eq!(logfree_margin(&e(-1, 1), &DeltaParam::half()), rat(0, 1));
    assert_eq!(logfree_margin(&ExponentExpr::affine(-7, 4, -1, 1), &d), rat(11, 8));
}

#[test]
fn delta_range_is_open_at_one_third() {
    assert!(DeltaParam::from_ratio(1, 3).is_err());
    assert!(DeltaParam::from_ratio(5, 8).is_ok());
    assert!(DeltaParam::from_ratio(2, 3).is_err());
    assert!(DeltaParam::parse("0.5").is_ok());
    assert!(DeltaParam::parse("1/4").is_err());
}

#[test]
fn tail_sum_examples() {
    let t = dyadic_tail_sum(&rat(15, 4), 0, 20).unwrap();
    assert!((t.partial - 1.0 / (1.0 - 2f64.powf(-3.75))).abs() < 1e-6);
    assert_eq!(dyadic_tail_sum(&rat(1, 1), 0, 0).unwrap().tail_bound, 2.0);
    let t = dyadic_tail_sum(&rat(25, 12), 3, 3).unwrap();
    let want = 2f64.powf(-25.0 / 4.0) / (1.0 - 2f64.powf(-25.0 / 12.0));
    assert!((t.tail_bound - want).abs() < 1e-15 * want);
    assert!(dyadic_tail_sum(&rat(0, 1), 0, 5).is_err());
    assert!(dyadic_tail_sum(&rat(-1, 2), 0, 5).is_err());
}

#[test]
fn json_uses_pq_strings() {
    let s = serde_json::to_string(&ExponentExpr::affine(-19, 4, -1, 1)).unwrap();
    assert_eq!(s, r#"{"const":"-19/4","delta":"-1/1"}"#);
    let back: ExponentExpr = serde_json::from_str(&s).unwrap();
    assert_eq!(back, ExponentExpr::affine(-19, 4, -1, 1));
    let checks = verify_catalog();
    let js = serde_json::to_string(&checks).unwrap();
    let again: Vec<TableCheck> = serde_json::from_str(&js).unwrap();
    assert_eq!(again, checks);
}

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-200i64..200, 1i64..48).prop_map(|(p, q)| rat(p, q))
}

fn expr() -> impl Strategy<Value = ExponentExpr> {
    (small_rat(), small_rat()).prop_map(|(a, b)| ExponentExpr::new(a, b))
}

fn delta() -> impl Strategy<Value = DeltaParam> {
    (1i64..=1000).prop_map(|k| DeltaParam::new(rat(1, 3) + rat(7, 24) * rat(k, 1000)).unwrap())
}

proptest! {
    #[test]
    fn addition_commutes_and_associates(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b + c));
        prop_assert_eq!(a.clone() + ExponentExpr::zero(), a);
    }

    #[test]
    fn eval_is_additive(a in expr(), b in expr(), d in delta()) {
        prop_assert_eq!((a.clone() + b.clone()).eval(&d), a.eval(&d) + b.eval(&d));
    }

    #[test]
    fn eval_monotone_with_sign_of_delta_coefficient(a in expr(), d1 in delta(), d2 in delta()) {
        prop_assume!(d1.value() < d2.value());
        let (x, y) = (a.eval(&d1), a.eval(&d2));
        let b = a.delta_coeff.clone();
        if b > rat(0, 1) { prop_assert!(x < y) }
        else if b < rat(0, 1) { prop_assert!(x > y) }
        else { prop_assert_eq!(x, y) }
    }

    #[test]
    fn tail_partials_increase_below_bound(p in 1i64..80, q in 1i64..12, k0 in -3i64..5, len in 0i64..30) {
        let alpha = rat(p, q);
        let mut prev = 0.0;
        for kmax in k0..=k0 + len {
            let t = dyadic_tail_sum(&alpha, k0, kmax).unwrap();
            prop_assert!(t.partial >= prev);
            prop_assert!(t.partial <= t.tail_bound * (1.0 + 1e-12));
            prev = t.partial;
        }
    }

    #[test]
    fn pq_round_trip(r in small_rat()) {
        prop_assert_eq!(parse_rational(&fmt_pq(&r)).unwrap(), r);
    }
}
