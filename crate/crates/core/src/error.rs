use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("elements live in different fields: p = {0} and p = {1}")]
    PrimeMismatch(u32, u32),
    #[error("expected {expected} raw coefficients, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("{a} is not coprime to {p}")]
    NotCoprime { a: i64, p: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("exact division failed: {0}")]
    InexactDivision(String),
    #[error("element is not integral")]
    NotIntegral,
    #[error("{r} does not have multiplicative order {p} modulo {q}")]
    BadRootOrder { r: u64, p: u32, q: u64 },
    #[error("exponent {e} is divisible by {p}")]
    ZeroExponent { e: i64, p: u32 },
    #[error("{delta} is not a quadratic non-residue modulo {p}")]
    NotNonResidue { delta: i64, p: u32 },
    #[error("p = {p} is not {expected}")]
    WrongResidueClass { p: u32, expected: &'static str },
    #[error("precision of {0} digits is below the 15-digit minimum")]
    PrecisionTooLow(u32),
    #[error("element is not fixed by the squares subgroup of the Galois group")]
    NotGaloisStable,
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("matrix is not square or has inconsistent entries: {0}")]
    BadMatrix(String),
    #[error("no auxiliary prime q = 1 mod {0} found below the search limit")]
    NoAuxiliaryPrime(u32),
    #[error("CRT reconstruction did not stabilise after {0} primes")]
    CrtUnstable(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("search cap exceeded: {0}")]
    SearchCap(String),
}
