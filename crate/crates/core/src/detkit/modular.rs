use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::DetStats;
use crate::arith;
use crate::matrices::IntMatrix;

/// CRT moduli: primes just below 2^31, descending.
const MODULUS_CEILING: u64 = 1 << 31;

/// `⌈n^{n/2}⌉ · max|a_ij|^n`.
pub fn hadamard_bound(m: &IntMatrix) -> BigInt {
    let n = m.dim() as u32;
    let max = m.entries().iter().map(|x| x.abs()).max().unwrap_or_default();
    let nn = BigInt::from(n).pow(n);
    let root = nn.sqrt();
    let root = if &root * &root == nn { root } else { root + 1 };
    root * max.pow(n)
}

pub fn det_int_modular(m: &IntMatrix) -> BigInt {
    det_int_modular_with_stats(m).0
}

/// Determinant from residues modulo enough word-sized primes that their
/// product exceeds twice the Hadamard bound, reconstructed into the
/// symmetric range.
pub fn det_int_modular_with_stats(m: &IntMatrix) -> (BigInt, DetStats) {
    let mut stats = DetStats::default();
    let n = m.dim();
    if n == 0 {
        return (BigInt::one(), stats);
    }
    let target = hadamard_bound(m) * 2u8;
    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    let mut q = MODULUS_CEILING;
    while modulus <= target {
        q = prev_prime(q);
        let rows: Vec<Vec<u64>> = m.rows().map(|r| r.iter().map(|x| arith::big_mod(x, q)).collect()).collect();
        let r = det_mod(rows, q);
        value = crt_step(&value, &modulus, r, q);
        modulus *= q;
        stats.moduli.push(q);
        stats.elimination_steps += 1;
    }
    let half = &modulus >> 1;
    let det = if value > half { value - &modulus } else { value };
    stats.coefficient_bits = det.bits();
    (det, stats)
}

fn prev_prime(mut q: u64) -> u64 {
    loop {
        q -= 1;
        if arith::is_prime(q) {
            return q;
        }
    }
}

/// Combines `x ≡ value (mod modulus)` with `x ≡ r (mod q)`; the result is
/// in `0..modulus·q`.
pub(crate) fn crt_step(value: &BigInt, modulus: &BigInt, r: u64, q: u64) -> BigInt {
    let vq = arith::big_mod(value, q);
    let mq = arith::big_mod(modulus, q);
    let diff = (r + q - vq) % q;
    let t = arith::mul_mod(diff, arith::inv_mod(mq, q), q);
    value + modulus * t
}

/// Determinant over `F_q` by Gaussian elimination.
pub(crate) fn det_mod(mut a: Vec<Vec<u64>>, q: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if piv != k {
            a.swap(piv, k);
            det = (q - det) % q;
        }
        det = arith::mul_mod(det, a[k][k], q);
        let inv = arith::inv_mod(a[k][k], q);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = arith::mul_mod(row[k], inv, q);
            for j in k + 1..n {
                row[j] = (row[j] + q - arith::mul_mod(f, pivot_row[j], q)) % q;
            }
        }
    }
    det
}
