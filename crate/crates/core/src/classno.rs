//! Class numbers of `Q(√±p)` and the fundamental unit of `Q(√p)`, computed
//! by elementary means, and the product formulas that tie them to
//! `P = Π_{k=1}^{m} (1 - ζ^{k²})`.

use alloc::format;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;

use crate::arith;
use crate::cycring::CycElt;
use crate::error::{Error, Result};
use crate::subfield::{self, QuadElt};

/// Largest `u` tried in the Pell search.
pub const PELL_CAP: u64 = 10_000_000;
/// Largest exponent tried when inverting the real product formula.
pub const H_CAP: u32 = 1_000;

/// Fundamental unit `ε = (t + u√p)/2` with `t² - p u² = 4·norm`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FundamentalUnit {
    pub t: BigInt,
    pub u: BigInt,
    pub norm: i8,
}

impl FundamentalUnit {
    pub fn to_quad(&self, p: u32) -> QuadElt {
        let two = BigInt::from(2);
        QuadElt::new(p, BigRational::new(self.t.clone(), two.clone()), BigRational::new(self.u.clone(), two))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassData {
    pub p: u32,
    /// `h(-p)`, for `p ≡ 3 (mod 4)`.
    pub h_neg: Option<u64>,
    /// `h(p)`, for `p ≡ 1 (mod 4)`, read off the product formula.
    pub h_pos: Option<u32>,
    pub eps: Option<FundamentalUnit>,
}

fn check_class(p: u32, class: u32) -> Result<u32> {
    let p = arith::odd_prime(p as i64)?;
    if p == 3 {
        return Err(Error::InvalidArgument("p must exceed 3".into()));
    }
    if p % 4 != class {
        let expected = if class == 1 { "1 mod 4" } else { "3 mod 4" };
        return Err(Error::WrongResidueClass { p, expected });
    }
    Ok(p)
}

/// Number of reduced forms `ax² + bxy + cy²` of discriminant `-p`:
/// `-a < b ≤ a ≤ c`, with `b ≥ 0` when `a = c`.
pub fn h_neg(p: u32) -> Result<u64> {
    let p = check_class(p, 3)? as i64;
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= p {
        for b in -a + 1..=a {
            let n = b * b + p;
            if n % (4 * a) != 0 {
                continue;
            }
            let c = n / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    Ok(count)
}

/// Smallest `u ≥ 1` for which `t² - p u² = ±4` has a solution `t > 0`.
/// The negative norm is tried first, so for `p = 5` this finds
/// `(1 + √5)/2` rather than its square. Brute force on `u` up to
/// `PELL_CAP`, then the continued fraction of `(1 + √p)/2`.
pub fn fundamental_unit(p: u32) -> Result<FundamentalUnit> {
    let p = check_class(p, 1)?;
    match fundamental_unit_search(p, PELL_CAP) {
        Some(e) => Ok(e),
        None => fundamental_unit_cf(p),
    }
}

/// Brute force on `u ≤ cap`.
pub fn fundamental_unit_search(p: u32, cap: u64) -> Option<FundamentalUnit> {
    let p = p as u128;
    for u in 1..=cap as u128 {
        let pu2 = p * u * u;
        for (norm, t2) in [(-1i8, pu2 - 4), (1, pu2 + 4)] {
            let t = t2.sqrt();
            if t * t == t2 {
                return Some(FundamentalUnit { t: BigInt::from(t), u: BigInt::from(u), norm });
            }
        }
    }
    None
}

/// The first convergent `h/k` of `ω = (1 + √p)/2` with
/// `(2h - k)² - p k² = ±4`. For `p > 16` every unit `(t + u√p)/2 > 1`
/// gives such a convergent, and denominators increase, so the first hit
/// is fundamental.
pub fn fundamental_unit_cf(p: u32) -> Result<FundamentalUnit> {
    let p = check_class(p, 1)?;
    if p < 17 {
        return fundamental_unit_search(p, PELL_CAP)
            .ok_or_else(|| Error::SearchCap(format!("no unit found for p = {p}")));
    }
    let d = p as i64;
    let root = d.sqrt();
    // ω_k = (P + √d)/Q.
    let (mut pk, mut qk) = (1i64, 2i64);
    let (mut h_prev, mut h) = (BigInt::from(0), BigInt::from(1));
    let (mut k_prev, mut k) = (BigInt::from(1), BigInt::from(0));
    let pb = BigInt::from(p);
    for _ in 0..4 * p as usize + 8 {
        let a = (pk + root).div_euclid(qk);
        (h_prev, h) = (h.clone(), BigInt::from(a) * &h + &h_prev);
        (k_prev, k) = (k.clone(), BigInt::from(a) * &k + &k_prev);
        let t = BigInt::from(2) * &h - &k;
        let n = &t * &t - &pb * &k * &k;
        if n == BigInt::from(-4) || n == BigInt::from(4) {
            let norm = if n < BigInt::from(0) { -1 } else { 1 };
            return Ok(FundamentalUnit { t, u: k, norm });
        }
        pk = a * qk - pk;
        qk = (d - pk * pk) / qk;
    }
    Err(Error::SearchCap(format!("continued fraction for p = {p} did not close")))
}

/// `P = Π_{k=1}^{m} (1 - ζ^{k²})`, one factor per nonzero square.
pub fn square_product(p: u32) -> Result<CycElt> {
    let p = arith::odd_prime(p as i64)?;
    let m = (p - 1) / 2;
    Ok((1..=m as i64).fold(CycElt::one(p), |acc, k| {
        let e = (k * k) % p as i64;
        &acc * &(&CycElt::one(p) - &CycElt::zeta_pow(p, e))
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductCheck {
    /// `p ≡ 3 (mod 4)`: `P = ratio·g`, and `P² = -p` holds.
    Imaginary { ratio: i8, h_neg: u64, expected: i8, square_ok: bool },
    /// `p ≡ 1 (mod 4)`: `P·ε^h = g` with the least such `h`.
    Real { h: u32, eps: FundamentalUnit },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFormula {
    pub p: u32,
    /// `P` in quadratic coordinates.
    pub product: QuadElt,
    pub check: ProductCheck,
}

impl ProductFormula {
    pub fn holds(&self) -> bool {
        match &self.check {
            ProductCheck::Imaginary { ratio, expected, square_ok, .. } => *square_ok && ratio == expected,
            ProductCheck::Real { .. } => true,
        }
    }
}

/// Checks the product formula for `p`.
///
/// For `p ≡ 3 (mod 4)` the ratio `P/g` must be `(-1)^{(h(-p)+1)/2}`; with
/// `g = Σ (t/p) ζ^t` this is the statement for `ζ ↦ e^{2πi/p}`, where
/// `g = i√p`. For `p ≡ 1 (mod 4)` the least `h` with `P·ε^h = g` is
/// returned; failure to find one within `H_CAP` is an error.
pub fn verify_product_formula(p: u32) -> Result<ProductFormula> {
    let p = arith::odd_prime(p as i64)?;
    if p == 3 {
        return Err(Error::InvalidArgument("p must exceed 3".into()));
    }
    let product = subfield::quad_decompose(&square_product(p)?)?;
    let check = if p % 4 == 3 {
        let h = h_neg(p)?;
        let expected = if ((h + 1) / 2) % 2 == 0 { 1 } else { -1 };
        let square_ok = (&product * &product) == QuadElt::from_ints(p, -(p as i64), 0);
        let ratio = if product == QuadElt::g(p) {
            1
        } else if product == -&QuadElt::g(p) {
            -1
        } else {
            0
        };
        ProductCheck::Imaginary { ratio, h_neg: h, expected, square_ok }
    } else {
        let eps = fundamental_unit(p)?;
        let e = eps.to_quad(p);
        let target = QuadElt::g(p);
        let mut acc = product.clone();
        let mut found = None;
        for h in 1..=H_CAP {
            acc = &acc * &e;
            if acc == target {
                found = Some(h);
                break;
            }
        }
        let h = found.ok_or_else(|| Error::SearchCap(format!("no h with P·ε^h = g for p = {p}")))?;
        ProductCheck::Real { h, eps }
    };
    Ok(ProductFormula { p, product, check })
}

/// Class data for `p > 3`: `h(-p)` or `(h(p), ε_p)` by residue class.
pub fn class_data(p: u32) -> Result<ClassData> {
    let p = arith::odd_prime(p as i64)?;
    if p == 3 {
        return Err(Error::InvalidArgument("p must exceed 3".into()));
    }
    if p % 4 == 3 {
        Ok(ClassData { p, h_neg: Some(h_neg(p)?), h_pos: None, eps: None })
    } else {
        let pf = verify_product_formula(p)?;
        let ProductCheck::Real { h, eps } = pf.check else { unreachable!("residue class checked") };
        Ok(ClassData { p, h_neg: None, h_pos: Some(h), eps: Some(eps) })
    }
}
