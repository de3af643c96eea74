//! Evaluation homomorphisms: into `C` through the embedding `ζ ↦ e^{2πi/p}`
//! and into `F_q` through an element of order `p`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CycElt;
use crate::arith;
use crate::error::{Error, Result};

/// A complex approximation with a rigorous absolute error bound on each
/// component (including the final conversion to `f64`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub error_bound: f64,
}

impl ComplexApprox {
    pub fn abs(&self) -> f64 {
        hypot(self.re, self.im)
    }

    /// Whether `other` lies within the combined error of `self`.
    pub fn agrees_with(&self, other: &ComplexApprox) -> bool {
        let slack = self.error_bound + other.error_bound;
        let scale = 1.0 + self.abs().max(other.abs());
        (self.re - other.re).abs() <= slack + 1e-12 * scale && (self.im - other.im).abs() <= slack + 1e-12 * scale
    }
}

fn hypot(a: f64, b: f64) -> f64 {
    // no_std has no sqrt intrinsic; Newton from a power-of-two start is enough.
    let s = a * a + b * b;
    if s == 0.0 {
        return 0.0;
    }
    let mut x = if s > 1.0 { s } else { 1.0 };
    for _ in 0..2000 {
        let next = 0.5 * (x + s / x);
        if (next - x).abs() <= 1e-16 * next {
            return next;
        }
        x = next;
    }
    x
}

/// Fixed-point real with `frac` fractional bits.
struct Fixed {
    frac: u64,
}

impl Fixed {
    fn one(&self) -> BigInt {
        BigInt::one() << self.frac
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.frac
    }

    /// `atan(1/k)` with the number of series terms used, each rounded by
    /// at most one unit in the last place.
    fn atan_inv(&self, k: u64) -> (BigInt, u64) {
        let k2 = BigInt::from(k * k);
        let mut power = self.one() / k;
        let mut sum = BigInt::zero();
        let mut n = 0u64;
        while !power.is_zero() {
            let term = &power / (2 * n + 1);
            if n % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &k2;
            n += 1;
        }
        (sum, 2 * n + 1)
    }

    /// `π` and its error in ulps.
    fn pi(&self) -> (BigInt, u64) {
        let (a, ea) = self.atan_inv(5);
        let (b, eb) = self.atan_inv(239);
        (a * 16 - b * 4, 16 * ea + 4 * eb + 4)
    }

    /// `(cos θ, sin θ)` for `0 ≤ θ < 4`, with the Taylor rounding in ulps.
    fn cos_sin(&self, theta: &BigInt) -> (BigInt, BigInt, u64) {
        let mut cos = BigInt::zero();
        let mut sin = BigInt::zero();
        let mut term = self.one();
        let mut n = 0u64;
        let mut ops = 0u64;
        while !term.is_zero() {
            let sign_neg = (n / 2) % 2 == 1;
            let target = if n % 2 == 0 { &mut cos } else { &mut sin };
            if sign_neg {
                *target -= &term;
            } else {
                *target += &term;
            }
            n += 1;
            term = self.mul(&term, theta) / n;
            ops += 1;
        }
        // Each step rounds twice; the tail after the last nonzero term is
        // below one ulp because θ < 4 makes the terms eventually decrease.
        (cos, sin, 2 * ops + 4)
    }
}

/// Evaluates `x` at `ζ = e^{2πi/p}` with absolute error at most about
/// `10^{-prec}` times the size of the coefficients.
pub fn eval_complex(x: &CycElt, prec: u32) -> Result<ComplexApprox> {
    if prec < 15 {
        return Err(Error::PrecisionTooLow(prec));
    }
    let p = x.p as u64;
    let coeff_bits = x.num.iter().map(|c| c.bits()).sum::<u64>().max(1);
    let frac = (prec as u64 * 3322).div_ceil(1000) + coeff_bits + 4 * (64 - p.leading_zeros() as u64) + 64;
    let fx = Fixed { frac };

    let (pi, e_pi) = fx.pi();
    let theta = (pi * 2u8) / p;
    let e_theta = (2 * e_pi).div_ceil(p) + 1;
    let (c1, s1, e_taylor) = fx.cos_sin(&theta);
    // |d cos|, |d sin| <= |dθ|.
    let e_trig = e_theta + e_taylor;

    // z_k ≈ ζ^k; each complex multiply adds ≤ 2·√2·e_trig + 2 ulps of error.
    let step = 3 * e_trig + 4;
    let mut re_acc = BigInt::zero();
    let mut im_acc = BigInt::zero();
    let mut err_ulps = BigInt::zero();
    let (mut zr, mut zi) = (fx.one(), BigInt::zero());
    for (k, c) in x.num.iter().enumerate() {
        if k > 0 {
            let nr = fx.mul(&zr, &c1) - fx.mul(&zi, &s1);
            let ni = fx.mul(&zr, &s1) + fx.mul(&zi, &c1);
            zr = nr;
            zi = ni;
        }
        if !c.is_zero() {
            re_acc += c * &zr;
            im_acc += c * &zi;
            err_ulps += c.abs() * BigInt::from(step * k as u64 + 1);
        }
    }
    let den_f = big_to_f64(&x.den, 0);
    let re = big_to_f64(&re_acc, frac) / den_f;
    let im = big_to_f64(&im_acc, frac) / den_f;
    let fixed_err = big_to_f64(&err_ulps, frac) / den_f;
    // f64 conversion and the final division each lose at most a few ulps.
    let round_err = (re.abs() + im.abs()) * 4.0 * f64::EPSILON;
    Ok(ComplexApprox { re, im, error_bound: fixed_err + round_err + f64::MIN_POSITIVE })
}

/// `v / 2^shift` as the nearest-ish `f64`.
fn big_to_f64(v: &BigInt, shift: u64) -> f64 {
    let bits = v.bits();
    let drop = bits.saturating_sub(62);
    let top = (v >> drop).to_i64().expect("62-bit value") as f64;
    ldexp(top, drop as i64 - shift as i64)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 0 {
        let s = e.min(1000);
        x *= pow2(s as i32);
        e -= s;
    }
    while e < 0 {
        let s = (-e).min(1000);
        x /= pow2(s as i32);
        e += s;
    }
    x
}

fn pow2(e: i32) -> f64 {
    debug_assert!((0..=1000).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// The image of an integral `x` under `ζ ↦ r` in `F_q`, where `r` has
/// multiplicative order exactly `p` modulo the prime `q`.
pub fn eval_mod(x: &CycElt, q: u64, r: u64) -> Result<u64> {
    let p = x.p;
    let r = r % q;
    if r == 1 || arith::pow_mod(r, p as u64, q) != 1 {
        return Err(Error::BadRootOrder { r, p, q });
    }
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    let residues: Vec<u64> = x.num.iter().map(|c| arith::big_mod(c, q)).collect();
    Ok(residues.iter().rev().fold(0, |acc, &c| (arith::mul_mod(acc, r, q) + c) % q))
}
