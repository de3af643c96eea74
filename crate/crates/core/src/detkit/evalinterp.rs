use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::modular::{crt_step, det_mod};
use super::DetStats;
use crate::arith;
use crate::cycring::CycElt;
use crate::error::{Error, Result};
use crate::matrices::CycMatrix;

/// Auxiliary primes are the smallest `q ≡ 1 (mod p)` above this floor.
pub const AUX_PRIME_FLOOR: u64 = 1 << 20;

const MAX_PRIMES: usize = 4096;
const AUX_SEARCH_LIMIT: u64 = 1 << 32;

pub fn det_cyc_evalinterp(m: &CycMatrix) -> Result<CycElt> {
    det_cyc_evalinterp_with_stats(m).map(|r| r.0)
}

/// For each auxiliary prime `q`, evaluates the matrix at the `p - 1`
/// elements of order `p` in `F_q`, takes the scalar determinants, and
/// interpolates the power-basis coefficients modulo `q`. Coefficients are
/// combined by CRT until the symmetric reconstruction is unchanged by one
/// further prime.
pub fn det_cyc_evalinterp_with_stats(m: &CycMatrix) -> Result<(CycElt, DetStats)> {
    let Some(p) = m.p() else {
        return Err(Error::BadMatrix("empty cyclotomic matrix has no field".into()));
    };
    if m.entries().iter().any(|x| x.p() != p) {
        return Err(Error::BadMatrix("entries from different fields".into()));
    }
    if !m.entries().iter().all(CycElt::is_integral) {
        return Err(Error::NotIntegral);
    }
    let lifts: Vec<Vec<(usize, BigInt)>> = m.entries().iter().map(CycElt::sparse_lift).collect();
    let mut stats = DetStats::default();
    let mut primes = arith::primes_one_mod(p, AUX_PRIME_FLOOR);
    let mut modulus = BigInt::one();
    let mut residues = vec![BigInt::zero(); p as usize - 1];
    let mut previous: Option<Vec<BigInt>> = None;
    for _ in 0..MAX_PRIMES {
        let q = primes.next().filter(|&q| q < AUX_SEARCH_LIMIT).ok_or(Error::NoAuxiliaryPrime(p))?;
        let (coeffs, dets) = coefficients_mod(m.dim(), &lifts, p, q);
        stats.elimination_steps += dets;
        for (acc, &r) in residues.iter_mut().zip(&coeffs) {
            *acc = crt_step(acc, &modulus, r, q);
        }
        modulus *= q;
        stats.moduli.push(q);
        let half = &modulus >> 1;
        let symmetric: Vec<BigInt> =
            residues.iter().map(|r| if r > &half { r - &modulus } else { r.clone() }).collect();
        if previous.as_ref() == Some(&symmetric) {
            let det = CycElt::from_integers(p, symmetric);
            stats.coefficient_bits = det.max_bits();
            return Ok((det, stats));
        }
        previous = Some(symmetric);
    }
    Err(Error::CrtUnstable(MAX_PRIMES))
}

fn order_p_element(p: u32, q: u64) -> u64 {
    let e = (q - 1) / p as u64;
    (2..q).map(|h| arith::pow_mod(h, e, q)).find(|&w| w != 1).expect("F_q* is cyclic of order divisible by p")
}

/// Power-basis coefficients of the determinant modulo `q`, and the number
/// of scalar determinants taken.
fn coefficients_mod(n: usize, lifts: &[Vec<(usize, BigInt)>], p: u32, q: u64) -> (Vec<u64>, usize) {
    let pu = p as usize;
    let w = order_p_element(p, q);
    let mut powers = vec![1u64; pu];
    for e in 1..pu {
        powers[e] = arith::mul_mod(powers[e - 1], w, q);
    }
    let lifts_q: Vec<Vec<(usize, u64)>> =
        lifts.iter().map(|l| l.iter().map(|(e, c)| (*e, arith::big_mod(c, q))).collect()).collect();
    // values[k] = det(M(w^k)) for k = 1..p-1.
    let mut values = vec![0u64; pu];
    for k in 1..pu {
        let mut rows = vec![vec![0u64; n]; n];
        for (idx, lift) in lifts_q.iter().enumerate() {
            let mut acc = 0u64;
            for &(e, c) in lift {
                acc = (acc + arith::mul_mod(c, powers[(e * k) % pu], q)) % q;
            }
            rows[idx / n][idx % n] = acc;
        }
        values[k] = det_mod(rows, q);
    }
    // The coefficient lift with c_{p-1} = 0 has DFT values V_0, V_1, …;
    // V_0 is the one unknown, fixed by Σ_k V_k w^k = p·c_{p-1} = 0.
    let v0 = (1..pu).fold(0u64, |acc, k| (acc + arith::mul_mod(values[k], powers[k], q)) % q);
    values[0] = (q - v0) % q;
    let p_inv = arith::inv_mod(p as u64 % q, q);
    let coeffs = (0..pu - 1)
        .map(|i| {
            let s = (0..pu).fold(0u64, |acc, k| {
                let e = (pu - (i * k) % pu) % pu;
                (acc + arith::mul_mod(values[k], powers[e], q)) % q
            });
            arith::mul_mod(s, p_inv, q)
        })
        .collect();
    (coeffs, pu - 1)
}
