//! Decomposition of rational primes in number fields.
//!
//! Good primes go through Kummer's factorization of the minimal polynomial
//! modulo p. Bad primes go through a one-level Newton polygon analysis; when
//! a residual polynomial is inseparable the answer is `Undetermined`.

mod field;
mod kummer;
mod local;
mod newton;

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{valuation, PolyError};

pub use field::{Irreducibility, NumberField};
pub use kummer::{dedekind_index_test, good_prime_test, kummer_decompose};
pub use local::{local_primes, LocalPrime, LocalShape};
pub use newton::{newton_polygon, ore_local_decompose, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} divides the index; Kummer's theorem does not apply")]
    BadPrime(u64),
    #[error("p-adic precision {precision} is insufficient at p = {prime}")]
    InsufficientPrecision { prime: u64, precision: u32 },
    #[error("decomposition at p = {0} is undetermined")]
    Undetermined(u64),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("polynomial has zero discriminant")]
    ZeroDiscriminant,
    #[error("minimal polynomial must be monic of degree at least 1")]
    NotMonic,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    Kummer,
    NewtonPolygon,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    /// Pairs (e, f) sorted ascending by (f, e).
    Resolved(Vec<(u32, u32)>),
    Undetermined(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeDecomposition {
    pub prime: u64,
    pub method: Method,
    pub status: Status,
}

impl PrimeDecomposition {
    pub(crate) fn resolved(prime: u64, method: Method, mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_by_key(|&(e, f)| (f, e));
        PrimeDecomposition {
            prime,
            method,
            status: Status::Resolved(pairs),
        }
    }

    pub fn factors(&self) -> Option<&[(u32, u32)]> {
        match &self.status {
            Status::Resolved(v) => Some(v),
            Status::Undetermined(_) => None,
        }
    }

    pub fn is_resolved(&self) -> bool {
        matches!(self.status, Status::Resolved(_))
    }

    /// Σ e_i f_i, when resolved.
    pub fn degree_sum(&self) -> Option<u32> {
        self.factors().map(|v| v.iter().map(|(e, f)| e * f).sum())
    }

    /// Every prime above p unramified with residue degree 1.
    pub fn is_completely_split(&self, n: usize) -> bool {
        self.factors()
            .is_some_and(|v| v.len() == n && v.iter().all(|&(e, f)| e == 1 && f == 1))
    }
}

impl fmt::Display for PrimeDecomposition {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Resolved(v) => {
                for (e, f) in v {
                    write!(out, "({e},{f})")?;
                }
                let m = match self.method {
                    Method::Kummer => "Kummer",
                    Method::NewtonPolygon => "NewtonPolygon",
                };
                write!(out, " via {m}")
            }
            Status::Undetermined(r) => write!(out, "Undetermined: {r}"),
        }
    }
}

/// Residue degrees of the primes above p, nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct SplittingType(pub Vec<u32>);

impl SplittingType {
    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&f| f == 1)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "(")?;
        for (i, f) in self.0.iter().enumerate() {
            if i > 0 {
                write!(out, ",")?;
            }
            write!(out, "{f}")?;
        }
        write!(out, ")")
    }
}

pub fn splitting_type(d: &PrimeDecomposition) -> Result<SplittingType, SplitError> {
    let pairs = d.factors().ok_or(SplitError::Undetermined(d.prime))?;
    let mut fs: Vec<u32> = pairs.iter().map(|&(_, f)| f).collect();
    fs.sort_unstable();
    Ok(SplittingType(fs))
}

/// 2·(1 + v_p(disc)) + 4.
pub fn default_precision(k: &NumberField, p: u64) -> u32 {
    2 * (1 + valuation(k.poly_disc(), p)) + 4
}

const PRECISION_RETRIES: u32 = 4;

type CacheKey = (Vec<BigInt>, u64, Option<u32>);

fn cache() -> &'static RwLock<HashMap<CacheKey, PrimeDecomposition>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, PrimeDecomposition>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Decomposition of p in K. Good primes use Kummer; bad primes use the
/// Newton polygon method, starting at `precision` (or the default) and
/// doubling on insufficient precision. Results are memoized.
pub fn decompose(
    k: &NumberField,
    p: u64,
    precision: Option<u32>,
) -> Result<PrimeDecomposition, SplitError> {
    if !num_prime::nt_funcs::is_prime64(p) {
        return Err(SplitError::NotPrime(p));
    }
    let key = (k.min_poly().coeffs().to_vec(), p, precision);
    if let Some(hit) = cache().read().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let d = decompose_uncached(k, p, precision)?;
    cache().write().unwrap().entry(key).or_insert_with(|| d.clone());
    Ok(d)
}

fn decompose_uncached(
    k: &NumberField,
    p: u64,
    precision: Option<u32>,
) -> Result<PrimeDecomposition, SplitError> {
    if good_prime_test(k, p) {
        return kummer_decompose(k, p);
    }
    let mut m = precision.unwrap_or_else(|| default_precision(k, p)).max(2);
    for _ in 0..=PRECISION_RETRIES {
        match ore_local_decompose(k, p, m) {
            Err(SplitError::InsufficientPrecision { .. }) => m *= 2,
            other => return other,
        }
    }
    Ok(PrimeDecomposition {
        prime: p,
        method: Method::NewtonPolygon,
        status: Status::Undetermined(format!(
            "insufficient p-adic precision (gave up at {})",
            m / 2
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(s: &str) -> NumberField {
        NumberField::new(s.parse().unwrap(), None).unwrap()
    }

    #[test]
    fn splitting_type_projection() {
        let d = PrimeDecomposition::resolved(5, Method::Kummer, vec![(1, 3), (1, 1)]);
        assert_eq!(splitting_type(&d).unwrap(), SplittingType(vec![1, 3]));
        let d = PrimeDecomposition::resolved(2, Method::NewtonPolygon, vec![(2, 1)]);
        assert_eq!(splitting_type(&d).unwrap(), SplittingType(vec![1]));
    }

    #[test]
    fn dispatcher() {
        let k = field("x^2 - 2");
        let d = decompose(&k, 7, None).unwrap();
        assert_eq!(d.to_string(), "(1,1)(1,1) via Kummer");
        let d = decompose(&k, 2, Some(8)).unwrap();
        assert_eq!(d.to_string(), "(2,1) via NewtonPolygon");
        assert_eq!(decompose(&k, 3, None).unwrap().factors(), Some(&[(1, 2)][..]));
        assert!(matches!(decompose(&k, 4, None), Err(SplitError::NotPrime(4))));
    }

    #[test]
    fn rational_field() {
        let k = field("x");
        for p in [2, 3, 5, 7, 11] {
            assert_eq!(decompose(&k, p, None).unwrap().factors(), Some(&[(1, 1)][..]));
        }
    }

    #[test]
    fn undetermined_when_not_regular() {
        let k = field("x^2 - 12");
        let d = decompose(&k, 2, None).unwrap();
        assert!(!d.is_resolved());
        assert!(splitting_type(&d).is_err());
    }
}
