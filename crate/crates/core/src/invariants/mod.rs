//! Adelic elementary invariants of number fields and the verdicts built on
//! them: splitting spectra, signature, degree detection, zeta local factors,
//! bounded arithmetic equivalence, residue rings and adele-ring isomorphism.

mod adele;
mod equiv;
mod json;
mod residue;
mod spectrum;
mod zeta;

use thiserror::Error;

use crate::splitting::SplitError;

pub use adele::{adele_iso_verdict, adele_iso_verdict_with_cap, ASSUMPTION_NOTE, AdeleIsoKind, AdeleIsoVerdict, Certification, LocalMatch, NotIsoReason};
pub use equiv::{arithmetic_equiv, ArithEquivKind, ArithEquivVerdict};
pub use json::{MalformedVerdict, VerdictJson};
pub use residue::{
    finite_ring_isomorphic, keating_bound, residue_ring_construct, Presentation, ResidueRing, RingElem,
    DEFAULT_RING_ORDER_CAP,
};
pub use spectrum::{
    aq_distinguisher, degree_via_split_prime, signature, spectrum, Signature, SplitPrimeDegree,
    SplittingSpectrum,
};
pub use zeta::{
    zeta_good_coefficients, zeta_local_factor, zeta_partial_coefficients, ZetaLocalFactor,
};

/// Default prime bound for sweeps.
pub const DEFAULT_BOUND: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvError {
    #[error("no completely split prime up to {0}")]
    NotFound(u64),
    #[error("decomposition at p = {0} is undetermined")]
    UnresolvedPrime(u64),
    #[error("ring order {order} exceeds the cap {cap}")]
    CapExceeded { order: String, cap: u64 },
    #[error("residue ring not constructible: {0}")]
    Unsupported(String),
    #[error("bound must be at least 2")]
    BoundTooSmall,
    #[error(transparent)]
    Split(#[from] SplitError),
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
    }
    out
}
