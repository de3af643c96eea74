//! The quadratic and quartic subfields of `Q(ζ_p)`.
//!
//! The quadratic subfield is generated by the Gauss sum
//! `g = Σ (t/p) ζ^t`, with `g² = (-1)^{(p-1)/2} p`. For `p ≡ 1 (mod 4)`
//! the quartic subfield is generated by `δ`, a square root of
//! `(2/p)·2p + 2a·g` where `p = a² + b²`; inside `Z[ζ_p]` it is realised
//! exactly as `g(4) - g` with `g(4) = Σ_t ζ^{t⁴}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::cycring::{eval_complex, CycElt};
use crate::error::{Error, Result};

/// Classical quadratic Gauss sum `Σ_{t=1}^{p-1} (t/p) ζ^t`.
pub fn gauss_sum(p: u32) -> CycElt {
    let raw = (0..p).map(|t| BigInt::from(arith::legendre(t as i64, p))).collect();
    CycElt::from_integers(p, raw)
}

/// `g² = (-1)^{(p-1)/2} p`.
pub fn gauss_square(p: u32) -> i64 {
    if p % 4 == 1 {
        p as i64
    } else {
        -(p as i64)
    }
}

/// `x + y·g` in the quadratic subfield.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElt {
    pub p: u32,
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadElt {
    pub fn new(p: u32, x: BigRational, y: BigRational) -> Self {
        QuadElt { p, x, y }
    }

    pub fn from_ints(p: u32, x: i64, y: i64) -> Self {
        Self::new(p, rat(x), rat(y))
    }

    pub fn rational(p: u32, x: BigRational) -> Self {
        Self::new(p, x, BigRational::zero())
    }

    pub fn g(p: u32) -> Self {
        Self::from_ints(p, 0, 1)
    }

    pub fn one(p: u32) -> Self {
        Self::from_ints(p, 1, 0)
    }

    /// `g²` as a rational.
    pub fn g_square(&self) -> BigRational {
        rat(gauss_square(self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.p, self.x.clone(), -&self.y)
    }

    /// `x² - g² y²`.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - self.g_square() * &self.y * &self.y
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(self.p, &self.x / &n, -&self.y / &n))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.p), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.p, &self.x * c, &self.y * c)
    }

    /// The element of `Q(ζ_p)` this represents.
    pub fn to_cyc(&self) -> CycElt {
        let p = self.p;
        &CycElt::from_rational(p, &self.x) + &gauss_sum(p).scale(&self.y)
    }
}

impl<'a> Add<&'a QuadElt> for &'a QuadElt {
    type Output = QuadElt;
    fn add(self, o: &'a QuadElt) -> QuadElt {
        assert_eq!(self.p, o.p);
        QuadElt::new(self.p, &self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Sub<&'a QuadElt> for &'a QuadElt {
    type Output = QuadElt;
    fn sub(self, o: &'a QuadElt) -> QuadElt {
        assert_eq!(self.p, o.p);
        QuadElt::new(self.p, &self.x - &o.x, &self.y - &o.y)
    }
}

impl<'a> Mul<&'a QuadElt> for &'a QuadElt {
    type Output = QuadElt;
    fn mul(self, o: &'a QuadElt) -> QuadElt {
        assert_eq!(self.p, o.p);
        let x = &self.x * &o.x + self.g_square() * &self.y * &o.y;
        let y = &self.x * &o.y + &self.y * &o.x;
        QuadElt::new(self.p, x, y)
    }
}

impl Neg for &QuadElt {
    type Output = QuadElt;
    fn neg(self) -> QuadElt {
        QuadElt::new(self.p, -&self.x, -&self.y)
    }
}

impl fmt::Display for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_negative() {
            write!(f, "{} - {}*g", self.x, -&self.y)
        } else {
            write!(f, "{} + {}*g", self.x, self.y)
        }
    }
}

impl fmt::Debug for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadElt[p={}]({self})", self.p)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Whether `x` is fixed by `σ_{n²}` for a primitive root `n`, i.e. lies in
/// the quadratic subfield.
pub fn is_quadratic(x: &CycElt) -> bool {
    let n = arith::least_primitive_root(x.p()) as i64;
    x.galois(n * n).is_ok_and(|y| &y == x)
}

/// Writes `x = u + v·g`, using the least non-residue for the conjugation.
pub fn quad_decompose(x: &CycElt) -> Result<QuadElt> {
    quad_decompose_with(x, arith::least_nonresidue(x.p()) as i64)
}

/// Writes `x = u + v·g` using the non-residue `n`: `σ_n` fixes `u` and
/// negates `g`, so `x + σ_n(x) = 2u` and `(x - σ_n(x))·g = 2v·g²`.
pub fn quad_decompose_with(x: &CycElt, n: i64) -> Result<QuadElt> {
    let p = x.p();
    if arith::legendre(n, p) != -1 {
        return Err(Error::NotNonResidue { delta: n, p });
    }
    if !is_quadratic(x) {
        return Err(Error::NotGaloisStable);
    }
    let conj = x.galois(n)?;
    let two = rat(2);
    let u = (x + &conj)
        .as_rational()
        .ok_or_else(|| Error::Decomposition(format!("x + σ_{n}(x) is not rational (p = {p})")))?
        / &two;
    let g = gauss_sum(p);
    let v = (&(x - &conj) * &g)
        .as_rational()
        .ok_or_else(|| Error::Decomposition(format!("(x - σ_{n}(x))·g is not rational (p = {p})")))?
        / (two * rat(gauss_square(p)));
    let out = QuadElt::new(p, u, v);
    if &out.to_cyc() != x {
        return Err(Error::Decomposition(format!("u + v·g does not reconstruct x (p = {p})")));
    }
    Ok(out)
}

/// `p = a² + b²` with `a` odd and both positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoSquares {
    pub p: u32,
    pub a: u32,
    pub b: u32,
}

pub fn two_squares(p: u32) -> Result<TwoSquares> {
    if p % 4 != 1 {
        return Err(Error::WrongResidueClass { p, expected: "1 mod 4" });
    }
    arith::odd_prime(p as i64)?;
    let mut a = 1u64;
    while a * a < p as u64 {
        let rest = p as u64 - a * a;
        let b = rest.sqrt();
        if b * b == rest {
            return Ok(TwoSquares { p, a: a as u32, b: b as u32 });
        }
        a += 2;
    }
    unreachable!("every prime 1 mod 4 is a sum of two squares")
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

/// A rational square root of `c + d·√p`, i.e. `(α, β)` with
/// `α² + pβ² = c` and `2αβ = d`. The sign is normalised so that `α > 0`,
/// or `β > 0` when `α = 0`.
pub fn sqrt_in_quad(c: &BigRational, d: &BigRational, p: u32) -> Option<(BigRational, BigRational)> {
    let pr = rat(p as i64);
    // α² is a root of t² - c·t + p·d²/4.
    let disc = c * c - &pr * d * d;
    let root = rational_sqrt(&disc)?;
    for sign in [1i64, -1] {
        let t = (c + &root * rat(sign)) / rat(2);
        let Some(alpha) = rational_sqrt(&t) else { continue };
        let beta = if alpha.is_zero() {
            match rational_sqrt(&(c / &pr)) {
                Some(b) if d.is_zero() => b,
                _ => continue,
            }
        } else {
            d / (rat(2) * &alpha)
        };
        if &alpha * &alpha + &pr * &beta * &beta == *c && rat(2) * &alpha * &beta == *d {
            return Some(normalize_sign(alpha, beta));
        }
    }
    None
}

fn normalize_sign(alpha: BigRational, beta: BigRational) -> (BigRational, BigRational) {
    if alpha.is_negative() || (alpha.is_zero() && beta.is_negative()) {
        (-alpha, -beta)
    } else {
        (alpha, beta)
    }
}

/// `g(4) = Σ_{t=0}^{p-1} ζ^{t⁴}`.
pub fn quartic_period(p: u32) -> CycElt {
    let mut raw = vec![BigInt::zero(); p as usize];
    for t in 0..p as u64 {
        raw[(t.pow(2) % p as u64).pow(2) as usize % p as usize] += 1;
    }
    CycElt::from_integers(p, raw)
}

/// Finds the sign `s` with `(g(4) - g)² = (2/p)·2p + 2sa·g` exactly.
pub fn quartic_gauss_check(p: u32) -> Result<i8> {
    let ts = two_squares(p)?;
    let delta = &quartic_period(p) - &gauss_sum(p);
    let sq = quad_decompose(&(&delta * &delta))?;
    let c = arith::legendre(2, p) as i64 * 2 * p as i64;
    for s in [1i8, -1] {
        if sq == QuadElt::from_ints(p, c, 2 * s as i64 * ts.a as i64) {
            return Ok(s);
        }
    }
    Err(Error::Decomposition(format!("(g(4) - g)^2 = {sq} matches neither branch for p = {p}")))
}

/// `δ = g(4) - g`, a square root of `(2/p)·2p + 2sa·g` in `Z[ζ_p]` for the
/// sign `s` found by `quartic_gauss_check`.
pub fn quartic_delta(p: u32) -> CycElt {
    &quartic_period(p) - &gauss_sum(p)
}

/// A square root in `Z[ζ_p]` of `(2/p)·2p + 2s·a·g`, with `a > 0` from
/// `two_squares`: `g(4) - g` on its own branch, its conjugate under a
/// non-residue on the other.
pub fn quartic_root(p: u32, s: i8) -> Result<CycElt> {
    let ts = two_squares(p)?;
    let base = quartic_delta(p);
    let root = if quartic_gauss_check(p)? == s { base } else { base.galois(arith::least_nonresidue(p) as i64)? };
    let c = arith::legendre(2, p) as i64 * 2 * p as i64;
    let want = QuadElt::from_ints(p, c, 2 * s as i64 * ts.a as i64).to_cyc();
    if &root * &root != want {
        return Err(Error::Decomposition(format!("no square root of the branch-{s} quartic element for p = {p}")));
    }
    Ok(root)
}

/// `det D_p = (α + β·g)·δ` with `δ² = (2/p)·2p + 2·delta_sign·a·g`, `a > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticDecomp {
    pub p: u32,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub a: u32,
    pub b: u32,
    pub delta_sign: i8,
    /// The sign `s` with `(g(4) - g)² = (2/p)·2p + 2s·a·g`.
    pub period_sign: i8,
    pub resolved_numerically: bool,
}

impl QuarticDecomp {
    pub fn coefficient(&self) -> QuadElt {
        QuadElt::new(self.p, self.alpha.clone(), self.beta.clone())
    }

    /// `δ²` as an element of the quadratic subfield.
    pub fn delta_square(&self) -> QuadElt {
        let c = arith::legendre(2, self.p) as i64 * 2 * self.p as i64;
        QuadElt::from_ints(self.p, c, 2 * self.delta_sign as i64 * self.a as i64)
    }

    /// `α² - pβ²`.
    pub fn norm(&self) -> BigRational {
        self.coefficient().norm()
    }
}

/// A branch sign `s` and its rational root `(α, β)`, if any.
pub type Branch = (i8, Option<(BigRational, BigRational)>);

/// Solves `(α + β·g)² · ((2/p)·2p + 2s·a·g) = d²` on both branches `s`.
pub fn quartic_branches(d: &CycElt) -> Result<Vec<Branch>> {
    let p = d.p();
    let ts = two_squares(p)?;
    let sq = quad_decompose(&(d * d))?;
    let c = arith::legendre(2, p) as i64 * 2 * p as i64;
    let mut out = Vec::new();
    for s in [1i8, -1] {
        let delta_sq = QuadElt::from_ints(p, c, 2 * s as i64 * ts.a as i64);
        let target = sq.div(&delta_sq)?;
        out.push((s, sqrt_in_quad(&target.x, &target.y, p)));
    }
    Ok(out)
}

/// Decomposes `d` (a determinant of `D_p` or `D_p^Δ`) on the branch
/// `δ² = (2/p)·2p + 2a·g` with `a > 0`.
pub fn quartic_decompose(d: &CycElt) -> Result<QuarticDecomp> {
    quartic_decompose_branch(d, 1)
}

/// Decomposes `d` on the branch `s`. Both branches admit rational roots,
/// because `δ₊·δ₋ = ±2b·g` lies in the quadratic subfield. The pair from
/// the rational square root of `d²/δ²` is signed by the exact quotient
/// `d / δ`, which must agree with it up to sign.
pub fn quartic_decompose_branch(d: &CycElt, s: i8) -> Result<QuarticDecomp> {
    let p = d.p();
    if p % 4 != 1 {
        return Err(Error::WrongResidueClass { p, expected: "1 mod 4" });
    }
    if s != 1 && s != -1 {
        return Err(Error::InvalidArgument(format!("branch must be ±1, got {s}")));
    }
    let ts = two_squares(p)?;
    let period_sign = quartic_gauss_check(p)?;
    let (alpha, beta) = quartic_branches(d)?
        .into_iter()
        .find(|(bs, _)| *bs == s)
        .and_then(|(_, sol)| sol)
        .ok_or_else(|| Error::Decomposition(format!("no rational (α, β) on branch {s} for p = {p}")))?;
    let delta = quartic_root(p, s)?;
    let y = d.exact_div(&delta)?;
    let y = quad_decompose(&y).map_err(|e| Error::Decomposition(format!("d/δ is not in Q(√p): {e}")))?;
    let (alpha, beta) = if y.x == alpha && y.y == beta {
        (alpha, beta)
    } else if y.x == -&alpha && y.y == -&beta {
        (-alpha, -beta)
    } else {
        return Err(Error::Decomposition(format!("d/δ = {y} disagrees with ±({alpha}, {beta}) for p = {p}")));
    };
    let out =
        QuarticDecomp { p, alpha, beta, a: ts.a, b: ts.b, delta_sign: s, period_sign, resolved_numerically: false };
    let d_sq = quad_decompose(&(d * d))?;
    let coef = out.coefficient();
    if &(&coef * &coef) * &out.delta_square() != d_sq {
        return Err(Error::Decomposition(format!("(α + βg)²δ² ≠ d² for p = {p}")));
    }
    let lhs = eval_complex(d, 20)?;
    let rhs = eval_complex(&(&coef.to_cyc() * &delta), 20)?;
    Ok(QuarticDecomp { resolved_numerically: lhs.agrees_with(&rhs), ..out })
}

/// `ν_p(x)`; `None` stands for `+∞` at zero.
pub fn padic_val(x: &BigRational, p: u32) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(arith::int_valuation(x.numer(), p) as i64 - arith::int_valuation(x.denom(), p) as i64)
}

/// Whether `2x` is an integer.
pub fn is_half_integer(x: &BigRational) -> bool {
    (x * rat(2)).is_integer()
}

/// `ν_2` of a nonzero integer.
pub fn two_adic(x: &BigInt) -> Option<u64> {
    (!x.is_zero()).then(|| x.trailing_zeros().unwrap_or(0))
}
