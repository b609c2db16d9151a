use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::splitting::{decompose, good_prime_test, splitting_type, NumberField, SplittingType};

use super::{degree_via_split_prime, primes_up_to, InvError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArithEquivKind {
    NotEquivalent {
        witness_prime: u64,
        type_k: SplittingType,
        type_l: SplittingType,
    },
    EquivalentUpToBound {
        bound: u64,
        compared_count: usize,
        excluded_primes: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithEquivVerdict {
    pub kind: ArithEquivKind,
    /// Degrees detected from completely split primes agree (falling back to
    /// the polynomial degree when no such prime is found below the bound).
    pub degree_check: bool,
}

impl ArithEquivVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self.kind, ArithEquivKind::EquivalentUpToBound { .. })
    }
}

fn detected_degree(k: &NumberField, bound: u64) -> Result<usize, InvError> {
    match degree_via_split_prime(k, bound) {
        Ok(d) => Ok(d.degree),
        Err(InvError::NotFound(_)) => Ok(k.degree()),
        Err(e) => Err(e),
    }
}

/// Compares splitting types at every prime ≤ B that is good for both fields.
pub fn arithmetic_equiv(
    k: &NumberField,
    l: &NumberField,
    bound: u64,
) -> Result<ArithEquivVerdict, InvError> {
    if bound < 2 {
        return Err(InvError::BoundTooSmall);
    }
    let rows = primes_up_to(bound)
        .par_iter()
        .map(|&p| -> Result<(u64, Option<(SplittingType, SplittingType)>), InvError> {
            if !good_prime_test(k, p) || !good_prime_test(l, p) {
                return Ok((p, None));
            }
            let tk = splitting_type(&decompose(k, p, None)?);
            let tl = splitting_type(&decompose(l, p, None)?);
            Ok((p, tk.ok().zip(tl.ok())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let degree_check = detected_degree(k, bound)? == detected_degree(l, bound)?;
    let mut excluded = Vec::new();
    let mut compared = 0;
    for (p, types) in rows {
        match types {
            None => excluded.push(p),
            Some((tk, tl)) if tk != tl => {
                return Ok(ArithEquivVerdict {
                    kind: ArithEquivKind::NotEquivalent {
                        witness_prime: p,
                        type_k: tk,
                        type_l: tl,
                    },
                    degree_check,
                })
            }
            Some(_) => compared += 1,
        }
    }
    Ok(ArithEquivVerdict {
        kind: ArithEquivKind::EquivalentUpToBound {
            bound,
            compared_count: compared,
            excluded_primes: excluded,
        },
        degree_check,
    })
}
