//! Square matrices over `Z` and `Z[ζ_p]`, and constructors for the
//! cyclotomic-unit, root-of-unity and Legendre-symbol families.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith;
use crate::cycring::CycElt;
use crate::error::{Error, Result};
use crate::subfield::gauss_sum;

/// Row-major square matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

pub type IntMatrix = SquareMatrix<BigInt>;
pub type CycMatrix = SquareMatrix<CycElt>;

impl<T> SquareMatrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadMatrix(format!("{n} rows of unequal length")));
        }
        Ok(SquareMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        let n = self.n;
        let mut it = self.data.into_iter();
        (0..n).map(|_| it.by_ref().take(n).collect()).collect()
    }
}

impl<T: Clone> SquareMatrix<T> {
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Entries as `i64`; panics on entries that do not fit.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        self.rows().map(|r| r.iter().map(|x| x.to_i64().expect("entry fits in i64")).collect()).collect()
    }
}

impl CycMatrix {
    pub fn p(&self) -> Option<u32> {
        self.data.first().map(CycElt::p)
    }

    /// Exact product. Entries are multiplied through their sparsest lifts and
    /// accumulated before canonical reduction, so matrices of monomials cost
    /// `O(n^3)` word operations.
    pub fn mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.n != other.n {
            return Err(Error::BadMatrix(format!("dimension {} times dimension {}", self.n, other.n)));
        }
        let Some(p) = self.p() else { return Ok(other.clone()) };
        if let Some(q) = other.p().filter(|&q| q != p) {
            return Err(Error::PrimeMismatch(p, q));
        }
        let n = self.n;
        let integral = self.data.iter().chain(&other.data).all(CycElt::is_integral);
        if !integral {
            return Ok(Self::from_fn(n, |i, k| {
                (0..n).fold(CycElt::zero(p), |acc, l| &acc + &(self.get(i, l) * other.get(l, k)))
            }));
        }
        let lift = |m: &CycMatrix| -> Vec<Vec<(usize, BigInt)>> { m.data.iter().map(CycElt::sparse_lift).collect() };
        let (la, lb) = (lift(self), lift(other));
        let bits = |l: &[Vec<(usize, BigInt)>]| l.iter().flatten().map(|(_, c)| c.bits()).max().unwrap_or(0);
        let pu = p as usize;
        let headroom = 64 - ((n * pu) as u64).leading_zeros() as u64;
        let small = bits(&la) + bits(&lb) + headroom < 120;
        Ok(Self::from_fn(n, |i, k| {
            if small {
                let mut raw = vec![0i128; pu];
                for l in 0..n {
                    for (ea, ca) in &la[i * n + l] {
                        let ca = ca.to_i128().expect("bounded");
                        for (eb, cb) in &lb[l * n + k] {
                            raw[(ea + eb) % pu] += ca * cb.to_i128().expect("bounded");
                        }
                    }
                }
                CycElt::from_integers(p, raw.into_iter().map(BigInt::from).collect())
            } else {
                let mut raw = vec![BigInt::zero(); pu];
                for l in 0..n {
                    for (ea, ca) in &la[i * n + l] {
                        for (eb, cb) in &lb[l * n + k] {
                            raw[(ea + eb) % pu] += ca * cb;
                        }
                    }
                }
                CycElt::from_integers(p, raw)
            }
        }))
    }

    pub fn scale(&self, c: &CycElt) -> CycMatrix {
        self.map(|x| x * c)
    }

    pub fn from_int_matrix(p: u32, m: &IntMatrix) -> CycMatrix {
        m.map(|x| CycElt::from_int(p, x.clone()))
    }
}

impl<T: fmt::Display> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in self.rows() {
            write!(f, "  [")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `((1 - ζ^{j²k²}) / (1 - ζ^{j²}))`, `1 ≤ j,k ≤ m`.
    C,
    /// `(ζ^{j²k²})`, `0 ≤ j,k ≤ m`.
    D,
    /// `(ζ^{Δj²k²})`, `0 ≤ j,k ≤ m`.
    DDelta,
    /// Column 0 all ones, elsewhere `2ζ^{j²k²}`.
    DTilde,
    /// Corner `-g`, elsewhere `((j²+k²)/p)`; `p ≡ 3 (mod 4)`.
    E,
    /// Corner `g`, elsewhere `((j²+Δk²)/p)`; `p ≡ 1 (mod 4)`.
    F,
    /// `((j²+k²)/p)`, `1 ≤ j,k ≤ m`.
    S,
    /// `((j²+Δk²)/p)`, `0 ≤ j,k ≤ m`.
    T,
    /// `((j²+Δk²)/p)`, `1 ≤ j,k ≤ m`.
    SDelta,
}

impl Family {
    pub const ALL: [Family; 9] =
        [Family::C, Family::D, Family::DDelta, Family::DTilde, Family::E, Family::F, Family::S, Family::T, Family::SDelta];

    pub fn name(self) -> &'static str {
        match self {
            Family::C => "C",
            Family::D => "D",
            Family::DDelta => "DD",
            Family::DTilde => "Dtilde",
            Family::E => "E",
            Family::F => "F",
            Family::S => "S",
            Family::T => "T",
            Family::SDelta => "SD",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(name))
    }

    pub fn needs_delta(self) -> bool {
        matches!(self, Family::DDelta | Family::F | Family::T | Family::SDelta)
    }

    pub fn is_integer(self) -> bool {
        matches!(self, Family::S | Family::T | Family::SDelta)
    }

    /// Dimension for the prime `p`: `m` or `m + 1` with `m = (p-1)/2`.
    pub fn dim(self, p: u32) -> usize {
        let m = (p as usize - 1) / 2;
        match self {
            Family::C | Family::S | Family::SDelta => m,
            _ => m + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixMeta {
    pub p: u32,
    pub delta: Option<u32>,
    pub family: Family,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Entries {
    Integer(IntMatrix),
    Cyclotomic(CycMatrix),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    pub meta: MatrixMeta,
    pub entries: Entries,
}

impl ExactMatrix {
    pub fn dim(&self) -> usize {
        match &self.entries {
            Entries::Integer(m) => m.dim(),
            Entries::Cyclotomic(m) => m.dim(),
        }
    }

    pub fn as_int(&self) -> Option<&IntMatrix> {
        match &self.entries {
            Entries::Integer(m) => Some(m),
            Entries::Cyclotomic(_) => None,
        }
    }

    pub fn as_cyc(&self) -> Option<&CycMatrix> {
        match &self.entries {
            Entries::Cyclotomic(m) => Some(m),
            Entries::Integer(_) => None,
        }
    }

    pub fn into_int(self) -> Option<IntMatrix> {
        match self.entries {
            Entries::Integer(m) => Some(m),
            Entries::Cyclotomic(_) => None,
        }
    }

    pub fn into_cyc(self) -> Option<CycMatrix> {
        match self.entries {
            Entries::Cyclotomic(m) => Some(m),
            Entries::Integer(_) => None,
        }
    }

    /// Builds any family; `delta` is required exactly for the families that
    /// use a non-residue.
    pub fn build(family: Family, p: u32, delta: Option<i64>) -> Result<ExactMatrix> {
        let need = |d: Option<i64>| {
            d.ok_or_else(|| Error::InvalidArgument(format!("family {} needs a non-residue Δ", family.name())))
        };
        match family {
            Family::C => build_c(p),
            Family::D => build_d(p),
            Family::DDelta => build_d_delta(p, need(delta)?),
            Family::DTilde => build_d_tilde(p),
            Family::E => build_e(p),
            Family::F => build_f(p, need(delta)?),
            Family::S => build_s(p),
            Family::T => build_t(p, need(delta)?),
            Family::SDelta => build_s_delta(p, need(delta)?),
        }
    }
}

fn prime(p: u32) -> Result<u32> {
    arith::odd_prime(p as i64)
}

/// Validates `Δ` as a non-residue and reduces it into `1..p`.
pub fn check_nonresidue(p: u32, delta: i64) -> Result<u32> {
    if arith::legendre(delta, p) != -1 {
        return Err(Error::NotNonResidue { delta, p });
    }
    Ok(arith::rem_euclid(delta, p))
}

fn cyc(p: u32, delta: Option<u32>, family: Family, m: CycMatrix) -> ExactMatrix {
    ExactMatrix { meta: MatrixMeta { p, delta, family }, entries: Entries::Cyclotomic(m) }
}

fn int(p: u32, delta: Option<u32>, family: Family, m: IntMatrix) -> ExactMatrix {
    ExactMatrix { meta: MatrixMeta { p, delta, family }, entries: Entries::Integer(m) }
}

fn sq(j: usize, p: u32) -> i64 {
    ((j * j) % p as usize) as i64
}

pub fn build_c(p: u32) -> Result<ExactMatrix> {
    let p = prime(p)?;
    let m = Family::C.dim(p);
    let mat = SquareMatrix::from_fn(m, |j, k| {
        let (j, k) = (j + 1, k + 1);
        CycElt::geometric_quotient(p as i64, sq(j, p), (k * k) as i64).expect("j² is a unit mod p")
    });
    Ok(cyc(p, None, Family::C, mat))
}

fn root_matrix(p: u32, scale: i64) -> CycMatrix {
    SquareMatrix::from_fn(Family::D.dim(p), |j, k| CycElt::zeta_pow(p, scale * sq(j, p) * sq(k, p)))
}

pub fn build_d(p: u32) -> Result<ExactMatrix> {
    let p = prime(p)?;
    Ok(cyc(p, None, Family::D, root_matrix(p, 1)))
}

pub fn build_d_delta(p: u32, delta: i64) -> Result<ExactMatrix> {
    let p = prime(p)?;
    let d = check_nonresidue(p, delta)?;
    Ok(cyc(p, Some(d), Family::DDelta, root_matrix(p, d as i64)))
}

pub fn build_d_tilde(p: u32) -> Result<ExactMatrix> {
    let p = prime(p)?;
    let mat = SquareMatrix::from_fn(Family::DTilde.dim(p), |j, k| {
        if k == 0 {
            CycElt::one(p)
        } else {
            CycElt::monomial(p, sq(j, p) * sq(k, p), BigInt::from(2))
        }
    });
    Ok(cyc(p, None, Family::DTilde, mat))
}

fn legendre_matrix(p: u32, delta: i64, offset: usize, dim: usize) -> IntMatrix {
    SquareMatrix::from_fn(dim, |j, k| {
        let (j, k) = (j + offset, k + offset);
        BigInt::from(arith::legendre(sq(j, p) + delta * sq(k, p), p))
    })
}

pub fn build_e(p: u32) -> Result<ExactMatrix> {
    let p = prime(p)?;
    if p % 4 != 3 {
        return Err(Error::WrongResidueClass { p, expected: "3 mod 4" });
    }
    let g = gauss_sum(p);
    let leg = legendre_matrix(p, 1, 0, Family::E.dim(p));
    let mat = SquareMatrix::from_fn(leg.dim(), |j, k| {
        if j == 0 && k == 0 {
            -&g
        } else {
            CycElt::from_int(p, leg.get(j, k).clone())
        }
    });
    Ok(cyc(p, None, Family::E, mat))
}

pub fn build_f(p: u32, delta: i64) -> Result<ExactMatrix> {
    let p = prime(p)?;
    if p % 4 != 1 {
        return Err(Error::WrongResidueClass { p, expected: "1 mod 4" });
    }
    let d = check_nonresidue(p, delta)?;
    let g = gauss_sum(p);
    let leg = legendre_matrix(p, d as i64, 0, Family::F.dim(p));
    let mat = SquareMatrix::from_fn(leg.dim(), |j, k| {
        if j == 0 && k == 0 {
            g.clone()
        } else {
            CycElt::from_int(p, leg.get(j, k).clone())
        }
    });
    Ok(cyc(p, Some(d), Family::F, mat))
}

pub fn build_s(p: u32) -> Result<ExactMatrix> {
    let p = prime(p)?;
    Ok(int(p, None, Family::S, legendre_matrix(p, 1, 1, Family::S.dim(p))))
}

pub fn build_t(p: u32, delta: i64) -> Result<ExactMatrix> {
    let p = prime(p)?;
    let d = check_nonresidue(p, delta)?;
    Ok(int(p, Some(d), Family::T, legendre_matrix(p, d as i64, 0, Family::T.dim(p))))
}

pub fn build_s_delta(p: u32, delta: i64) -> Result<ExactMatrix> {
    let p = prime(p)?;
    let d = check_nonresidue(p, delta)?;
    Ok(int(p, Some(d), Family::SDelta, legendre_matrix(p, d as i64, 1, Family::SDelta.dim(p))))
}
