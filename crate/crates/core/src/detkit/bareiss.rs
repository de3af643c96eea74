use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::DetStats;
use crate::cycring::CycElt;
use crate::error::{Error, Result};
use crate::matrices::{CycMatrix, IntMatrix};

pub fn det_int_bareiss(m: &IntMatrix) -> BigInt {
    det_int_bareiss_with_stats(m).0
}

/// One-step fraction-free elimination. Pivots are the first nonzero entry
/// in the current column; every division is checked to be exact.
pub fn det_int_bareiss_with_stats(m: &IntMatrix) -> (BigInt, DetStats) {
    let n = m.dim();
    let mut stats = DetStats::default();
    if n == 0 {
        return (BigInt::one(), stats);
    }
    let mut a: Vec<Vec<BigInt>> = m.rows().map(<[BigInt]>::to_vec).collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return (BigInt::zero(), stats);
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let t = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                let (q, r) = t.div_rem(&prev);
                assert!(r.is_zero(), "Bareiss division not exact at step {k}");
                row[j] = q;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
        stats.elimination_steps += 1;
    }
    let det = a[n - 1][n - 1].clone();
    let det = if negate { -det } else { det };
    stats.coefficient_bits = det.bits();
    (det, stats)
}

pub fn det_cyc_bareiss(m: &CycMatrix) -> Result<CycElt> {
    det_cyc_bareiss_with_stats(m).map(|r| r.0)
}

/// Fraction-free elimination over `Z[ζ_p]`. Each step divides by the
/// previous pivot through its precomputed field inverse; for integral input
/// every quotient must come out integral, otherwise the run aborts.
pub fn det_cyc_bareiss_with_stats(m: &CycMatrix) -> Result<(CycElt, DetStats)> {
    let n = m.dim();
    let mut stats = DetStats::default();
    let Some(p) = m.p() else {
        return Err(Error::BadMatrix("empty cyclotomic matrix has no field".into()));
    };
    if m.entries().iter().any(|x| x.p() != p) {
        return Err(Error::BadMatrix("entries from different fields".into()));
    }
    let integral = m.entries().iter().all(CycElt::is_integral);
    let mut a: Vec<Vec<CycElt>> = m.rows().map(<[CycElt]>::to_vec).collect();
    let mut negate = false;
    let mut prev_inv: Option<CycElt> = None;
    for k in 0..n - 1 {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok((CycElt::zero(p), stats));
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let t = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                let q = match &prev_inv {
                    None => t,
                    Some(inv) => &t * inv,
                };
                if integral && !q.is_integral() {
                    return Err(Error::InexactDivision(format!("Bareiss step {k} over Z[ζ_{p}] left a fraction")));
                }
                row[j] = q;
            }
            row[k] = CycElt::zero(p);
        }
        let pivot = &a[k][k];
        prev_inv = if pivot.is_one() { None } else { Some(pivot.inverse()?) };
        stats.elimination_steps += 1;
    }
    let det = a[n - 1][n - 1].clone();
    let det = if negate { -det } else { det };
    stats.coefficient_bits = det.max_bits();
    Ok((det, stats))
}
