//! Word-sized number theory shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    // Deterministic Miller-Rabin for all 64-bit inputs.
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Validates `p` as an odd prime and narrows it to `u32`.
pub fn odd_prime(p: i64) -> Result<u32> {
    if p < 3 || p > u32::MAX as i64 || !is_prime(p as u64) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(p as u32)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `m`.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

/// Reduces any integer into `0..m`.
pub fn rem_euclid(a: i64, m: u32) -> u32 {
    a.rem_euclid(m as i64) as u32
}

pub fn big_mod(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    // r is in 0..m, so the low digit is the whole value.
    r.iter_u64_digits().next().unwrap_or(0)
}

/// Legendre symbol by Euler's criterion.
pub fn legendre(a: i64, p: u32) -> i8 {
    let r = rem_euclid(a, p) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p as u64 - 1) / 2, p as u64) == 1 {
        1
    } else {
        -1
    }
}

pub fn least_nonresidue(p: u32) -> u32 {
    (2..p).find(|&n| legendre(n as i64, p) == -1).expect("odd prime has a non-residue")
}

/// The first `count` quadratic non-residues in `2..p`.
pub fn nonresidues(p: u32, count: usize) -> alloc::vec::Vec<u32> {
    (2..p).filter(|&n| legendre(n as i64, p) == -1).take(count).collect()
}

pub fn least_primitive_root(p: u32) -> u32 {
    let order = p as u64 - 1;
    let factors = prime_factors(order);
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g as u64, order / f, p as u64) != 1))
        .unwrap_or(1)
}

pub fn prime_factors(mut n: u64) -> alloc::vec::Vec<u64> {
    let mut out = alloc::vec::Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(x: &BigInt, p: u32) -> u32 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// Smallest primes `q = 1 (mod p)` above `floor`, in increasing order.
pub fn primes_one_mod(p: u32, floor: u64) -> impl Iterator<Item = u64> {
    let p = p as u64;
    (floor / p..).map(move |k| k * p + 1).filter(move |&q| q > floor && is_prime(q))
}
