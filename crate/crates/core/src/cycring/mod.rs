//! Exact arithmetic in the cyclotomic field `Q(ζ_p)` for an odd prime `p`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{p-2}`; the relation
//! `1 + ζ + … + ζ^{p-1} = 0` eliminates `ζ^{p-1}`, so equal field elements
//! always have equal coefficient vectors. Coefficients are rationals, kept as
//! integer numerators over one positive common denominator.

mod eval;

pub use eval::{eval_complex, eval_mod, ComplexApprox};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycElt {
    p: u32,
    /// Numerators of the coefficients of `ζ^0 … ζ^{p-2}`.
    num: Vec<BigInt>,
    /// Positive, coprime to the content of `num`; `1` for zero.
    den: BigInt,
}

impl CycElt {
    /// Canonical element from the `p` coefficients of `ζ^0 … ζ^{p-1}`.
    pub fn make(p: i64, raw: &[BigRational]) -> Result<Self> {
        let p = arith::odd_prime(p)?;
        if raw.len() != p as usize {
            return Err(Error::BadLength { expected: p as usize, got: raw.len() });
        }
        let den = raw.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lifted = raw.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::from_lift(p, lifted, den))
    }

    /// Canonical element from integer coefficients of `ζ^0 …`; shorter
    /// vectors are zero-padded, longer ones must not exceed `p` entries.
    pub fn from_integers(p: u32, raw: Vec<BigInt>) -> Self {
        Self::from_lift(p, raw, BigInt::one())
    }

    /// `raw` holds at most `p` coefficients of a lift to `Q[x]/(x^p - 1)`,
    /// scaled by `den`.
    pub(crate) fn from_lift(p: u32, mut raw: Vec<BigInt>, den: BigInt) -> Self {
        let n = p as usize;
        assert!(raw.len() <= n, "lift longer than p");
        raw.resize(n, BigInt::zero());
        let top = raw.pop().expect("p >= 3");
        if !top.is_zero() {
            for c in raw.iter_mut() {
                *c -= &top;
            }
        }
        Self::normalized(p, raw, den)
    }

    fn normalized(p: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), p as usize - 1);
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                for c in num.iter_mut() {
                    *c /= &g;
                }
                den /= &g;
            }
        }
        CycElt { p, num, den }
    }

    pub fn zero(p: u32) -> Self {
        CycElt { p, num: vec![BigInt::zero(); p as usize - 1], den: BigInt::one() }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, BigInt::one())
    }

    pub fn from_int(p: u32, c: BigInt) -> Self {
        let mut e = Self::zero(p);
        e.num[0] = c;
        e
    }

    pub fn from_rational(p: u32, c: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); p as usize - 1];
        num[0] = c.numer().clone();
        Self::normalized(p, num, c.denom().clone())
    }

    /// `c · ζ^e` for any integer exponent.
    pub fn monomial(p: u32, e: i64, c: BigInt) -> Self {
        let mut raw = vec![BigInt::zero(); p as usize];
        raw[arith::rem_euclid(e, p) as usize] = c;
        Self::from_integers(p, raw)
    }

    pub fn zeta_pow(p: u32, e: i64) -> Self {
        Self::monomial(p, e, BigInt::one())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// Largest coefficient numerator, in bits.
    pub fn max_bits(&self) -> u64 {
        self.num.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.combine(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.combine(other, |a, b| a - b))
    }

    fn combine(&self, other: &Self, f: impl Fn(BigInt, BigInt) -> BigInt) -> Self {
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| f(a.clone(), b.clone())).collect();
            return Self::normalized(self.p, num, self.den.clone());
        }
        let den = self.den.lcm(&other.den);
        let sa = &den / &self.den;
        let sb = &den / &other.den;
        let num = self.num.iter().zip(&other.num).map(|(a, b)| f(a * &sa, b * &sb)).collect();
        Self::normalized(self.p, num, den)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.p as usize;
        let den = &self.den * &other.den;
        let x = self.sparse_lift();
        let y = other.sparse_lift();
        if let Some(raw) = small_convolution(&x, &y, p) {
            let raw = raw.into_iter().map(BigInt::from).collect();
            return Ok(Self::from_lift(self.p, raw, den));
        }
        let mut raw = vec![BigInt::zero(); p];
        for (i, a) in &x {
            for (j, b) in &y {
                let k = (i + j) % p;
                raw[k] += a * b;
            }
        }
        Ok(Self::from_lift(self.p, raw, den))
    }

    /// Numerators of the lift to `Z[x]/(x^p - 1)` with the fewest nonzero
    /// terms, as `(exponent, coefficient)` pairs. A lift may add any constant
    /// to all `p` coefficients, so the most frequent value is shifted to 0.
    pub(crate) fn sparse_lift(&self) -> Vec<(usize, BigInt)> {
        let mut sorted: Vec<&BigInt> = self.num.iter().collect();
        sorted.sort_unstable();
        let zeros = 1 + sorted.iter().filter(|c| c.is_zero()).count();
        let (mut best, mut best_count) = (None, zeros);
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            if j - i > best_count {
                best = Some(sorted[i].clone());
                best_count = j - i;
            }
            i = j;
        }
        let shift = best.unwrap_or_default();
        let mut out = Vec::with_capacity(self.num.len() + 1 - best_count);
        for (i, c) in self.num.iter().enumerate() {
            let v = c - &shift;
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        if !shift.is_zero() {
            out.push((self.num.len(), -shift));
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let num = self.num.iter().map(|a| a * c.numer()).collect();
        Self::normalized(self.p, num, &self.den * c.denom())
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let num = self.num.iter().map(|a| a * c).collect();
        Self::normalized(self.p, num, self.den.clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The automorphism `σ_a : ζ ↦ ζ^a`.
    pub fn galois(&self, a: i64) -> Result<Self> {
        let p = self.p;
        let orig = a;
        let a = arith::rem_euclid(a, p) as usize;
        if a == 0 {
            return Err(Error::NotCoprime { a: orig, p });
        }
        let mut raw = vec![BigInt::zero(); p as usize];
        for (i, c) in self.num.iter().enumerate() {
            raw[(a * i) % p as usize] = c.clone();
        }
        Ok(Self::from_lift(p, raw, self.den.clone()))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in
    /// `Q[x] / Φ_p(x)`, run fraction-free as a subresultant remainder
    /// sequence over `Z[x]` that carries the cofactor of `self`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p as usize;
        let mut a: Vec<BigInt> = vec![BigInt::one(); p];
        let mut b = trim_int(self.num.clone());
        // Invariants: sa·self ≡ a and sb·self ≡ b (mod Φ_p), up to the
        // common denominator of self.
        let mut sa: Vec<BigInt> = Vec::new();
        let mut sb: Vec<BigInt> = vec![BigInt::one()];
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        while b.len() > 1 {
            let delta = (a.len() - b.len()) as u32;
            let lead = b.last().expect("nonzero").clone();
            let (q, r) = pseudo_divrem(&a, &b);
            let sr = int_poly_sub(&int_poly_scale(&sa, &lead.pow(delta + 1)), &int_poly_mul(&q, &sb));
            let r = trim_int(r);
            if r.is_empty() {
                return Err(Error::InexactDivision(format!("element shares a factor with Φ_{p}")));
            }
            let divisor = &g * h.pow(delta);
            let r = exact_scalar_div(r, &divisor)?;
            let sr = exact_scalar_div(sr, &divisor)?;
            a = core::mem::replace(&mut b, r);
            sa = core::mem::replace(&mut sb, sr);
            g = a.last().expect("nonzero").clone();
            h = if delta == 0 {
                h
            } else {
                let num = g.pow(delta);
                let den = h.pow(delta - 1);
                let (q, rem) = num.div_rem(&den);
                if !rem.is_zero() {
                    return Err(Error::InexactDivision("subresultant scale factor".into()));
                }
                q
            };
        }
        // sb·(num) ≡ c (mod Φ_p) with c = b[0], so self⁻¹ = den·sb / c.
        let c = b.pop().expect("constant remainder");
        let mut folded = vec![BigInt::zero(); p];
        for (i, x) in sb.into_iter().enumerate() {
            folded[i % p] += x * &self.den;
        }
        let inv = Self::from_lift(self.p, folded, c);
        Ok(inv)
    }

    /// Inverse as `Π_{a≠1} σ_a(x) / N(x)`, an independent route to the
    /// same element.
    pub fn inverse_by_norm(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let cof = (2..self.p as i64).try_fold(Self::one(self.p), |acc, a| Ok::<_, Error>(&acc * &self.galois(a)?))?;
        let norm = (&cof * self)
            .as_rational()
            .ok_or_else(|| Error::InexactDivision("product of conjugates is not rational".into()))?;
        Ok(cof.scale(&(BigRational::one() / norm)))
    }

    /// The quotient `self / den`, verified by multiplying back.
    pub fn exact_div(&self, den: &Self) -> Result<Self> {
        self.check_same(den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self * &den.inverse()?;
        if &(&q * den) != self {
            return Err(Error::InexactDivision(format!("quotient does not multiply back (p = {})", self.p)));
        }
        Ok(q)
    }

    /// `Σ_{t=0}^{n-1} ζ^{et}`, which equals `(1 - ζ^{en}) / (1 - ζ^e)`.
    pub fn geometric_quotient(p: i64, e: i64, n: i64) -> Result<Self> {
        let p = arith::odd_prime(p)?;
        if e.rem_euclid(p as i64) == 0 {
            return Err(Error::ZeroExponent { e, p });
        }
        if n < 1 {
            return Err(Error::InvalidArgument(format!("geometric quotient needs n >= 1, got {n}")));
        }
        let step = arith::rem_euclid(e, p) as u64;
        let mut counts = vec![0i64; p as usize];
        // Only n mod p matters beyond whole orbits, each of which sums to 0.
        let full = n as u64 / p as u64;
        let rest = n as u64 % p as u64;
        for t in 0..rest {
            counts[((step * t) % p as u64) as usize] += 1;
        }
        if full > 0 {
            for c in counts.iter_mut() {
                *c += full as i64;
            }
        }
        Ok(Self::from_integers(p, counts.into_iter().map(BigInt::from).collect()))
    }
}

fn small_convolution(x: &[(usize, BigInt)], y: &[(usize, BigInt)], p: usize) -> Option<Vec<i128>> {
    let max = |v: &[(usize, BigInt)]| v.iter().map(|(_, c)| c.bits()).max().unwrap_or(0);
    let terms = (x.len().min(y.len()).max(1) as u64).ilog2() as u64 + 1;
    if max(x) + max(y) + terms > 120 {
        return None;
    }
    let xs: Vec<(usize, i128)> = x.iter().map(|(i, c)| (*i, c.to_i128().expect("bounded"))).collect();
    let ys: Vec<(usize, i128)> = y.iter().map(|(i, c)| (*i, c.to_i128().expect("bounded"))).collect();
    let mut raw = vec![0i128; p];
    for &(i, a) in &xs {
        for &(j, b) in &ys {
            raw[(i + j) % p] += a * b;
        }
    }
    Some(raw)
}

fn trim_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn int_poly_scale(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * c).collect()
}

fn int_poly_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y,
            (None, None) => BigInt::zero(),
        })
        .collect();
    trim_int(out)
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_int(out)
}

/// `lc(b)^{δ+1}·a = q·b + r` with `δ = deg a - deg b`.
fn pseudo_divrem(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    let lead = &b[db];
    let delta = a.len() - b.len();
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); delta + 1];
    for i in (0..=delta).rev() {
        let c = r[db + i].clone();
        for x in r.iter_mut() {
            *x *= lead;
        }
        for x in q.iter_mut() {
            *x *= lead;
        }
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] -= &c * y;
            }
            q[i] += c;
        }
    }
    r.truncate(db);
    (q, r)
}

fn exact_scalar_div(v: Vec<BigInt>, d: &BigInt) -> Result<Vec<BigInt>> {
    if d.is_one() {
        return Ok(v);
    }
    v.into_iter()
        .map(|x| {
            let (q, r) = x.div_rem(d);
            if r.is_zero() {
                Ok(q)
            } else {
                Err(Error::InexactDivision("subresultant division left a remainder".into()))
            }
        })
        .collect()
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a CycElt> for &'a CycElt {
            type Output = CycElt;
            fn $method(self, rhs: &'a CycElt) -> CycElt {
                self.$checked(rhs).expect("operands in the same cyclotomic field")
            }
        }
        impl $tr<CycElt> for CycElt {
            type Output = CycElt;
            fn $method(self, rhs: CycElt) -> CycElt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        CycElt { p: self.p, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        -&self
    }
}

impl fmt::Display for CycElt {
    /// Sum of nonzero terms, e.g. `1 - 2*z^3 + 1/2*z^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.num.len() {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c) };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "z")?,
                1 => write!(f, "{mag}*z")?,
                _ if mag.is_one() => write!(f, "z^{i}")?,
                _ => write!(f, "{mag}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElt[p={}]({})", self.p, self)
    }
}
