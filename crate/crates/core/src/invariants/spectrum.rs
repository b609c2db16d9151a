use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::exactpoly::sturm_real_roots;
use crate::splitting::{decompose, good_prime_test, splitting_type, NumberField, SplittingType};

use super::{primes_up_to, InvError};

/// The sets P_K(A) ∩ [2, B], keyed by splitting type A.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingSpectrum {
    pub field: String,
    pub bound: u64,
    #[serde(serialize_with = "entries_as_list")]
    pub entries: BTreeMap<SplittingType, Vec<u64>>,
    /// Primes whose decomposition is undetermined.
    pub excluded: Vec<u64>,
}

fn entries_as_list<S: Serializer>(
    entries: &BTreeMap<SplittingType, Vec<u64>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        #[serde(rename = "type")]
        ty: &'a SplittingType,
        primes: &'a [u64],
    }
    let mut seq = s.serialize_seq(Some(entries.len()))?;
    for (ty, primes) in entries {
        seq.serialize_element(&Entry { ty, primes })?;
    }
    seq.end()
}

pub fn spectrum(k: &NumberField, bound: u64) -> Result<SplittingSpectrum, InvError> {
    if bound < 2 {
        return Err(InvError::BoundTooSmall);
    }
    let decomps = primes_up_to(bound)
        .par_iter()
        .map(|&p| decompose(k, p, None))
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries: BTreeMap<SplittingType, Vec<u64>> = BTreeMap::new();
    let mut excluded = Vec::new();
    for d in decomps {
        match splitting_type(&d) {
            Ok(t) => entries.entry(t).or_default().push(d.prime),
            Err(_) => excluded.push(d.prime),
        }
    }
    Ok(SplittingSpectrum {
        field: k.name(),
        bound,
        entries,
        excluded,
    })
}

/// Numbers of real and complex places.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Signature {
    pub r1: usize,
    pub r2: usize,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(out, "({},{})", self.r1, self.r2)
    }
}

pub fn signature(k: &NumberField) -> Signature {
    let r1 = sturm_real_roots(k.min_poly()).expect("minimal polynomial is squarefree");
    Signature {
        r1,
        r2: (k.degree() - r1) / 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitPrimeDegree {
    pub degree: usize,
    pub witness: u64,
}

/// The degree read off the least completely split good prime ≤ B, as the
/// number of primes above it.
pub fn degree_via_split_prime(k: &NumberField, bound: u64) -> Result<SplitPrimeDegree, InvError> {
    for p in primes_up_to(bound) {
        if !good_prime_test(k, p) {
            continue;
        }
        let d = decompose(k, p, None)?;
        let t = splitting_type(&d)?;
        let unramified = d.factors().unwrap().iter().all(|&(e, _)| e == 1);
        if unramified && t.is_all_ones() {
            return Ok(SplitPrimeDegree {
                degree: t.0.len(),
                witness: p,
            });
        }
    }
    Err(InvError::NotFound(bound))
}

/// Good primes ≤ B with exactly one prime above them, unramified of residue
/// degree 1; a stalk with residue field F_p that only the rational field has
/// at every good prime.
pub fn aq_distinguisher(k: &NumberField, bound: u64) -> Result<Vec<u64>, InvError> {
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        if !good_prime_test(k, p) {
            continue;
        }
        if decompose(k, p, None)?.factors() == Some(&[(1, 1)][..]) {
            out.push(p);
        }
    }
    Ok(out)
}
