//! Exact determinants with two independent backends per entry kind.
//!
//! Integer matrices: fraction-free Bareiss elimination and a multi-modular
//! CRT reconstruction under the Hadamard bound. Cyclotomic matrices:
//! Bareiss elimination over `Z[ζ_p]` and evaluation–interpolation through
//! the order-`p` roots of unity in `F_q` for auxiliary primes `q ≡ 1 (mod p)`.

mod bareiss;
mod evalinterp;
mod modular;

pub use bareiss::{det_cyc_bareiss, det_cyc_bareiss_with_stats, det_int_bareiss, det_int_bareiss_with_stats};
pub use evalinterp::{det_cyc_evalinterp, det_cyc_evalinterp_with_stats, AUX_PRIME_FLOOR};
pub use modular::{det_int_modular, det_int_modular_with_stats, hadamard_bound};

use num_bigint::BigInt;

use crate::cycring::CycElt;
use crate::error::Result;
use crate::matrices::{Entries, ExactMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Bareiss,
    Modular,
    EvalInterp,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Bareiss => "bareiss",
            Backend::Modular => "modular",
            Backend::EvalInterp => "evalinterp",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetStats {
    /// Pivot steps (Bareiss) or scalar determinants computed (modular).
    pub elimination_steps: usize,
    pub moduli: alloc::vec::Vec<u64>,
    /// Bits of the largest coefficient of the result.
    pub coefficient_bits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DetValue {
    Integer(BigInt),
    Cyclotomic(CycElt),
}

impl DetValue {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            DetValue::Integer(v) => Some(v),
            DetValue::Cyclotomic(_) => None,
        }
    }

    pub fn as_cyc(&self) -> Option<&CycElt> {
        match self {
            DetValue::Cyclotomic(v) => Some(v),
            DetValue::Integer(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetResult {
    pub value: DetValue,
    pub backend: Backend,
    pub stats: DetStats,
}

/// Determinant of a family matrix with the requested backend. `Modular` and
/// `EvalInterp` both name the multi-modular route, which is CRT over word
/// primes for integer entries and evaluation–interpolation for cyclotomic
/// ones; the result is tagged with the algorithm actually run.
pub fn det(m: &ExactMatrix, backend: Backend) -> Result<DetResult> {
    match (&m.entries, backend) {
        (Entries::Integer(a), Backend::Bareiss) => {
            let (v, stats) = det_int_bareiss_with_stats(a);
            Ok(DetResult { value: DetValue::Integer(v), backend: Backend::Bareiss, stats })
        }
        (Entries::Integer(a), _) => {
            let (v, stats) = det_int_modular_with_stats(a);
            Ok(DetResult { value: DetValue::Integer(v), backend: Backend::Modular, stats })
        }
        (Entries::Cyclotomic(a), Backend::Bareiss) => {
            let (v, stats) = det_cyc_bareiss_with_stats(a)?;
            Ok(DetResult { value: DetValue::Cyclotomic(v), backend: Backend::Bareiss, stats })
        }
        (Entries::Cyclotomic(a), _) => {
            let (v, stats) = det_cyc_evalinterp_with_stats(a)?;
            Ok(DetResult { value: DetValue::Cyclotomic(v), backend: Backend::EvalInterp, stats })
        }
    }
}
