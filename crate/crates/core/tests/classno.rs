use std::collections::HashSet;

use cyclodet_core::classno::{self, ProductCheck};
use cyclodet_core::subfield::QuadElt;
use cyclodet_core::{arith, CycElt, Error};
use num_bigint::BigInt;
use num_traits::Signed;

fn primes(lo: u32, hi: u32, class: u32) -> impl Iterator<Item = u32> {
    (lo..=hi).filter(move |&p| p % 4 == class && arith::is_prime(p as u64))
}

/// `h(-p) = -(1/p) Σ a·(a/p)` for `p ≡ 3 (mod 4)`, `p > 3`.
fn dirichlet_h_neg(p: u32) -> i64 {
    let s: i64 = (1..p as i64).map(|a| a * arith::legendre(a, p) as i64).sum();
    assert_eq!(s % p as i64, 0);
    -s / p as i64
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Number of cycles of reduced indefinite forms of discriminant `d`, which
/// for prime `d ≡ 1 (mod 4)` is the class number of `Q(√d)`.
fn form_cycles(d: i64) -> usize {
    let s = isqrt(d);
    let reduced = |a: i64, b: i64| {
        let two_a = 2 * a.abs();
        b > 0 && b * b < d && (two_a + b) * (two_a + b) > d && (two_a - b <= 0 || (two_a - b) * (two_a - b) < d)
    };
    let mut forms = Vec::new();
    for b in (1..=s).filter(|b| (b - d).rem_euclid(2) == 0) {
        let ac = (b * b - d) / 4;
        for a in 1..=ac.abs() {
            if ac % a == 0 {
                for sa in [a, -a] {
                    if reduced(sa, b) {
                        forms.push((sa, b, ac / sa));
                    }
                }
            }
        }
    }
    let rho = |(_, b, c): (i64, i64, i64)| {
        let m = 2 * c.abs();
        let b2 = s - (s + b).rem_euclid(m);
        (c, b2, (b2 * b2 - d) / (4 * c))
    };
    let mut seen = HashSet::new();
    let mut cycles = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        while seen.insert(g) {
            assert!(reduced(g.0, g.1), "{g:?}");
            g = rho(g);
        }
        assert_eq!(g, f, "reduced forms fall into pure cycles");
    }
    cycles
}

#[test]
fn h_neg_examples() {
    for (p, h) in [(7, 1), (11, 1), (19, 1), (23, 3), (31, 3), (43, 1), (47, 5), (71, 7), (199, 9)] {
        assert_eq!(classno::h_neg(p).unwrap(), h, "p = {p}");
    }
}

#[test]
fn h_neg_matches_dirichlet_sum() {
    for p in primes(7, 2000, 3) {
        assert_eq!(classno::h_neg(p).unwrap() as i64, dirichlet_h_neg(p), "p = {p}");
    }
}

#[test]
fn h_neg_errors() {
    assert!(matches!(classno::h_neg(5), Err(Error::WrongResidueClass { p: 5, .. })));
    assert!(matches!(classno::h_neg(3), Err(Error::InvalidArgument(_))));
    assert!(matches!(classno::h_neg(15), Err(Error::NotOddPrime(15))));
}

#[test]
fn fundamental_unit_examples() {
    let unit = |p| {
        let e = classno::fundamental_unit(p).unwrap();
        (e.t.try_into().unwrap(), e.u.try_into().unwrap(), e.norm)
    };
    assert_eq!(unit(5), (1u64, 1u64, -1i8));
    assert_eq!(unit(13), (3, 1, -1));
    assert_eq!(unit(29), (5, 1, -1));
    assert_eq!(unit(61), (39, 5, -1));
    assert_eq!(unit(97), (11208, 1138, -1));
}

#[test]
fn fundamental_unit_is_minimal() {
    for p in primes(5, 400, 1) {
        let e = classno::fundamental_unit(p).unwrap();
        assert_eq!(e, classno::fundamental_unit_cf(p).unwrap(), "p = {p}");
        let (t, u): (u128, u128) = (e.t.clone().try_into().unwrap(), e.u.clone().try_into().unwrap());
        let pu2 = p as u128 * u * u;
        assert!(t * t == pu2 + 4 || t * t + 4 == pu2);
        assert_eq!(e.norm, if t * t < pu2 { -1 } else { 1 });
        for v in 1..u.min(100_000) {
            let pv2 = p as u128 * v * v;
            for cand in [pv2 - 4, pv2 + 4] {
                let r = (cand as f64).sqrt() as u128;
                assert!((r.saturating_sub(1)..=r + 1).all(|x| x * x != cand), "p = {p}, u = {v}");
            }
        }
        // ε > 1 and its norm is ±1 in the field.
        let q = e.to_quad(p);
        assert_eq!(q.norm().abs(), num_rational::BigRational::from_integer(1.into()));
    }
}

#[test]
fn fundamental_unit_past_the_brute_force_cap() {
    // ε_313 = 126862368 + 7170685√313.
    assert_eq!(classno::fundamental_unit_search(313, 1_000), None);
    let e = classno::fundamental_unit(313).unwrap();
    assert_eq!((e.t, e.u, e.norm), (BigInt::from(253_724_736u64), BigInt::from(14_341_370u64), -1));
}

#[test]
fn form_cycle_oracle_sanity() {
    // Q(√229), Q(√257) and Q(√401) are the first with h(p) > 1 among p ≡ 1 (mod 4).
    assert_eq!(form_cycles(229), 3);
    assert_eq!(form_cycles(257), 3);
    assert_eq!(form_cycles(401), 5);
    for p in primes(5, 200, 1) {
        assert_eq!(form_cycles(p as i64), 1, "p = {p}");
    }
}

#[test]
fn product_formula_imaginary() {
    for p in primes(7, 100, 3) {
        let pf = classno::verify_product_formula(p).unwrap();
        let ProductCheck::Imaginary { ratio, h_neg, expected, square_ok } = pf.check.clone() else { panic!() };
        assert!(square_ok);
        assert_eq!(ratio, expected, "p = {p}, h = {h_neg}");
        assert!(pf.holds());
    }
    let pf = classno::verify_product_formula(7).unwrap();
    assert_eq!(pf.product, -&QuadElt::g(7));
}

#[test]
fn product_formula_real_recovers_class_number() {
    for p in primes(5, 100, 1).chain([229, 257]) {
        let pf = classno::verify_product_formula(p).unwrap();
        let ProductCheck::Real { h, ref eps } = pf.check else { panic!() };
        assert_eq!(h as usize, form_cycles(p as i64), "p = {p}");
        let back = &pf.product * &eps.to_quad(p).pow(h);
        assert_eq!(back, QuadElt::g(p));
        let cd = classno::class_data(p).unwrap();
        assert_eq!(cd.h_pos, Some(h));
    }
}

#[test]
fn full_range_product_is_the_square() {
    for p in [5u32, 7, 11, 13] {
        let half = classno::square_product(p).unwrap();
        let full = (1..p as i64).fold(CycElt::one(p), |acc, k| {
            &acc * &(&CycElt::one(p) - &CycElt::zeta_pow(p, k * k))
        });
        assert_eq!(full, &half * &half);
    }
    // For p ≡ 3 (mod 4) the product over 1 ≤ k ≤ p-1 is rational.
    let full7 = classno::square_product(7).unwrap().pow(2);
    assert_eq!(full7, CycElt::from_int(7, BigInt::from(-7)));
}

#[test]
fn class_data_by_residue() {
    let c = classno::class_data(23).unwrap();
    assert_eq!((c.h_neg, c.h_pos, c.eps), (Some(3), None, None));
    let c = classno::class_data(5).unwrap();
    assert_eq!((c.h_neg, c.h_pos), (None, Some(1)));
    assert!(classno::class_data(9).is_err());
    assert!(classno::class_data(3).is_err());
}
