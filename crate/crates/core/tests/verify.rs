use cyclodet_core::verify::{self, BackendChoice, Decomp, DeltaMode, NoClock, Status, VerifyOptions};
use cyclodet_core::{arith, Error};
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn assert_all_pass(r: &verify::PrimeReport) {
    let bad: Vec<_> = r.failures().map(|(n, c)| format!("{n}: {} vs {}", c.lhs, c.rhs)).collect();
    assert!(bad.is_empty(), "p = {}: {bad:#?}", r.p);
}

#[test]
fn p7_end_to_end() {
    let r = verify::verify_prime(7, &VerifyOptions::default(), &NoClock);
    assert_all_pass(&r);
    assert_eq!(r.det_s, Some(BigInt::from(-4)));
    let Some(Decomp::Quadratic { a, b, .. }) = &r.decomp else { panic!() };
    assert!(*a == q(7, 2) || *a == q(-7, 2));
    assert!(*b == q(1, 2) || *b == q(-1, 2));
    assert_eq!((r.nu_a, r.nu_b), (Some(1), Some(0)));
    assert_eq!(r.class.as_ref().unwrap().h_neg, Some(1));
    for name in ["ab_identity", "norm_identity", "valuations_ab", "two_adic_det_s", "squared_det_d", "matrix_identity_e"] {
        assert_eq!(r.checks[name].status, Status::Pass, "{name}");
    }
}

#[test]
fn p5_end_to_end() {
    let r = verify::verify_prime(5, &VerifyOptions::default(), &NoClock);
    assert_all_pass(&r);
    assert_eq!(r.deltas, vec![2]);
    assert_eq!(r.det_t, Some(BigInt::from(-4)));
    assert_eq!(r.det_s_delta, Some(BigInt::from(0)));
    let Some(Decomp::Quartic(qd)) = &r.decomp else { panic!() };
    assert_eq!(qd.alpha, q(0, 1));
    assert_eq!((qd.delta_sign, qd.period_sign), (1, -1));
    assert!(qd.beta == q(1, 2) || qd.beta == q(-1, 2));
    assert_eq!(qd.b, 2);
    assert_eq!(r.checks["t_identity[Δ=2]"].lhs, "|-20|");
    assert_eq!(r.checks["t_identity[Δ=2]"].rhs, "|-20|");
    assert!(r.discrepancies.iter().any(|d| d.name == "two_power_exponent"));
}

#[test]
fn p5_alternative_delta() {
    let opts = VerifyOptions { delta: DeltaMode::Explicit(3), ..VerifyOptions::default() };
    let r = verify::verify_prime(5, &opts, &NoClock);
    assert_all_pass(&r);
    assert_eq!(r.deltas, vec![3]);
    assert!(r.checks.contains_key("s_delta_det_zero[Δ=3]"));
}

#[test]
fn residue_delta_is_a_failed_check() {
    let opts = VerifyOptions { delta: DeltaMode::Explicit(4), ..VerifyOptions::default() };
    let r = verify::verify_prime(5, &opts, &NoClock);
    assert_eq!(r.checks["delta_nonresidue"].status, Status::Fail);
}

#[test]
fn perm_sign_examples() {
    assert_eq!(verify::check_perm_sign(5, 2).unwrap(), verify::PermSign { sign: -1, expected: -1 });
    assert_eq!(verify::check_perm_sign(7, 3).unwrap().sign, 1);
    assert_eq!(verify::check_perm_sign(13, 1).unwrap(), verify::PermSign { sign: 1, expected: 1 });
    assert!(matches!(verify::check_perm_sign(7, 14), Err(Error::NotCoprime { a: 14, p: 7 })));
}

#[test]
fn perm_sign_formula_below_100() {
    for p in (3u32..100).filter(|&p| arith::is_prime(p as u64)) {
        for a in verify::perm_sign_sample(p) {
            let s = verify::check_perm_sign(p, a).unwrap();
            assert_eq!(s.sign, s.expected, "p = {p}, a = {a}");
        }
    }
}

#[test]
fn range_examples() {
    let opts = VerifyOptions::default();
    let rs = verify::run_range(5, 7, &opts, &NoClock).unwrap();
    assert_eq!(rs.iter().map(|r| r.p).collect::<Vec<_>>(), vec![5, 7]);
    rs.iter().for_each(assert_all_pass);
    assert!(verify::run_range(4, 4, &opts, &NoClock).unwrap().is_empty());
    assert!(verify::run_range(10, 5, &opts, &NoClock).is_err());
    assert!(verify::run_range(3, 5, &opts, &NoClock).is_err());
}

#[test]
fn check_names_are_stable() {
    let opts = VerifyOptions { delta: DeltaMode::Sweep(3), backend: BackendChoice::Modular, bareiss_max_p: 0 };
    let a = verify::verify_prime(13, &opts, &NoClock);
    let b = verify::verify_prime(13, &VerifyOptions { backend: BackendChoice::Both, ..opts.clone() }, &NoClock);
    assert_eq!(a.checks.keys().collect::<Vec<_>>(), b.checks.keys().collect::<Vec<_>>());
    assert_eq!(a.deltas, vec![2, 5, 6]);
    assert_eq!(a.checks["backends_agree:C"].status, Status::Skipped);
    assert_all_pass(&a);
}

#[test]
fn sweep_to_40() {
    let opts = VerifyOptions { delta: DeltaMode::Sweep(3), ..VerifyOptions::default() };
    for r in verify::run_range(5, 40, &opts, &NoClock).unwrap() {
        assert_all_pass(&r);
    }
}
