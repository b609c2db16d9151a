use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exactpoly::ModPoly;
use crate::splitting::{local_primes, LocalPrime, LocalShape, NumberField, SplitError, SplittingType};

use super::residue::{finite_ring_isomorphic, keating_bound, residue_ring_construct, ResidueRing};
use super::{arithmetic_equiv, signature, ArithEquivKind, InvError, Signature, DEFAULT_RING_ORDER_CAP};

pub const ASSUMPTION_NOTE: &str = "(e, f) determines the local field among candidates present";

/// How a matched pair of local fields was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum Certification {
    /// O/π^s are isomorphic at s above the Keating bound.
    Ring { s: u32 },
    /// Both fields have the same minimal polynomial.
    Identity,
    /// Only (e, f) was compared.
    Assumption,
}

/// The `index_k`-th prime of K above `prime` matched with the `index_l`-th
/// prime of L, both in (f, e) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMatch {
    pub prime: u64,
    pub e: u32,
    pub f: u32,
    pub index_k: usize,
    pub index_l: usize,
    pub certification: Certification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotIsoReason {
    ArithmeticWitness {
        prime: u64,
        type_k: SplittingType,
        type_l: SplittingType,
    },
    Signature { k: Signature, l: Signature },
    /// The (e, f) multisets above `prime` differ.
    LocalMismatch {
        prime: u64,
        k: Vec<(u32, u32)>,
        l: Vec<(u32, u32)>,
    },
    /// No matching of the (e, f) class pairs up isomorphic residue rings.
    ResidueRings { prime: u64, e: u32, f: u32, s: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdeleIsoKind {
    NotIsomorphic { reason: NotIsoReason },
    IsomorphicCertified { matching: Vec<LocalMatch> },
    IsomorphicModuloAssumption {
        matching: Vec<LocalMatch>,
        unmatched: Vec<LocalMatch>,
        assumption_note: String,
    },
    Undetermined { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdeleIsoVerdict {
    pub kind: AdeleIsoKind,
    pub bound: u64,
    /// Primes left out of the splitting-type comparison.
    pub excluded_primes: Vec<u64>,
}

impl AdeleIsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(
            self.kind,
            AdeleIsoKind::IsomorphicCertified { .. } | AdeleIsoKind::IsomorphicModuloAssumption { .. }
        )
    }
}

enum Pair {
    Certified(u32),
    Assumed,
    Incompatible,
}

/// Residue ring O/π^s of a local prime, or None when its shape has no
/// supported presentation.
fn local_ring(p: u64, lp: &LocalPrime, s: u32) -> Result<Option<ResidueRing>, InvError> {
    let factor = match &lp.shape {
        LocalShape::Unramified => None,
        LocalShape::EisensteinLinear { eisenstein, precision } => Some(
            ModPoly::new(num_traits::pow(BigInt::from(p), *precision as usize), eisenstein.clone())
                .map_err(SplitError::from)?,
        ),
        LocalShape::Other => return Ok(None),
    };
    match residue_ring_construct(p, lp.e, lp.f, factor.as_ref(), s) {
        Ok(r) => Ok(Some(r)),
        Err(InvError::Unsupported(_) | InvError::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn compare(a: &Option<ResidueRing>, b: &Option<ResidueRing>, s: u32, cap: u64) -> Result<Pair, InvError> {
    let (Some(a), Some(b)) = (a, b) else {
        return Ok(Pair::Assumed);
    };
    match finite_ring_isomorphic(a, b, cap) {
        Ok(true) => Ok(Pair::Certified(s)),
        Ok(false) => Ok(Pair::Incompatible),
        Err(InvError::CapExceeded { .. }) => Ok(Pair::Assumed),
        Err(e) => Err(e),
    }
}

/// A perfect matching of one (e, f) class maximizing certified pairs, by
/// exhaustive search over permutations; None if every matching pairs up
/// non-isomorphic rings.
fn best_matching(table: &[Vec<Pair>]) -> Option<Vec<usize>> {
    fn go(
        table: &[Vec<Pair>],
        row: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        score: usize,
        best: &mut Option<(usize, Vec<usize>)>,
    ) {
        if row == table.len() {
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                *best = Some((score, current.clone()));
            }
            return;
        }
        for col in 0..table.len() {
            if used[col] {
                continue;
            }
            let gain = match table[row][col] {
                Pair::Certified(_) => 1,
                Pair::Assumed => 0,
                Pair::Incompatible => continue,
            };
            used[col] = true;
            current.push(col);
            go(table, row + 1, used, current, score + gain, best);
            current.pop();
            used[col] = false;
        }
    }
    let mut best = None;
    go(table, 0, &mut vec![false; table.len()], &mut Vec::new(), 0, &mut best);
    best.map(|(_, m)| m)
}

enum PrimeOutcome {
    Matched(Vec<LocalMatch>),
    Mismatch(NotIsoReason),
}

fn match_at_prime(
    k: &NumberField,
    l: &NumberField,
    p: u64,
    precision: Option<u32>,
    identical: bool,
    cap: u64,
) -> Result<PrimeOutcome, InvError> {
    let max_e = k.degree().max(l.degree()) as u32;
    let lift = (1..=max_e).map(|e| keating_bound(p, e)).max().unwrap_or(2);
    let lk = local_primes(k, p, precision, lift)?;
    let ll = local_primes(l, p, precision, lift)?;
    let shape = |v: &[LocalPrime]| v.iter().map(|x| (x.e, x.f)).collect::<Vec<_>>();
    let (mut sk, mut sl) = (shape(&lk), shape(&ll));
    sk.sort_unstable();
    sl.sort_unstable();
    if sk != sl {
        return Ok(PrimeOutcome::Mismatch(NotIsoReason::LocalMismatch { prime: p, k: sk, l: sl }));
    }
    let mut classes: BTreeMap<(u32, u32), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, x) in lk.iter().enumerate() {
        classes.entry((x.e, x.f)).or_default().0.push(i);
    }
    for (j, x) in ll.iter().enumerate() {
        classes.entry((x.e, x.f)).or_default().1.push(j);
    }
    let mut out = Vec::new();
    for ((e, f), (ik, il)) in classes {
        let entry = |index_k, index_l, certification| LocalMatch {
            prime: p,
            e,
            f,
            index_k,
            index_l,
            certification,
        };
        if identical {
            out.extend(ik.iter().map(|&i| entry(i, i, Certification::Identity)));
            continue;
        }
        let s = keating_bound(p, e);
        let rk = ik.iter().map(|&i| local_ring(p, &lk[i], s)).collect::<Result<Vec<_>, _>>()?;
        let rl = il.iter().map(|&j| local_ring(p, &ll[j], s)).collect::<Result<Vec<_>, _>>()?;
        let table = rk
            .iter()
            .map(|a| rl.iter().map(|b| compare(a, b, s, cap)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let Some(perm) = best_matching(&table) else {
            return Ok(PrimeOutcome::Mismatch(NotIsoReason::ResidueRings { prime: p, e, f, s }));
        };
        for (row, &col) in perm.iter().enumerate() {
            let cert = match table[row][col] {
                Pair::Certified(s) => Certification::Ring { s },
                _ => Certification::Assumption,
            };
            out.push(entry(ik[row], il[col], cert));
        }
    }
    Ok(PrimeOutcome::Matched(out))
}

/// Arithmetic equivalence up to B, then signatures, then a matching of the
/// local fields at every prime bad for either field.
pub fn adele_iso_verdict(
    k: &NumberField,
    l: &NumberField,
    bound: u64,
    precision: Option<u32>,
) -> Result<AdeleIsoVerdict, InvError> {
    adele_iso_verdict_with_cap(k, l, bound, precision, DEFAULT_RING_ORDER_CAP)
}

/// As [`adele_iso_verdict`], with an explicit cap on the residue-ring
/// isomorphism search; pairs beyond it are matched by assumption.
pub fn adele_iso_verdict_with_cap(
    k: &NumberField,
    l: &NumberField,
    bound: u64,
    precision: Option<u32>,
    ring_order_cap: u64,
) -> Result<AdeleIsoVerdict, InvError> {
    let equiv = arithmetic_equiv(k, l, bound)?;
    let verdict = |kind, excluded_primes| AdeleIsoVerdict {
        kind,
        bound,
        excluded_primes,
    };
    let excluded = match equiv.kind {
        ArithEquivKind::NotEquivalent { witness_prime, type_k, type_l } => {
            let reason = NotIsoReason::ArithmeticWitness { prime: witness_prime, type_k, type_l };
            return Ok(verdict(AdeleIsoKind::NotIsomorphic { reason }, Vec::new()));
        }
        ArithEquivKind::EquivalentUpToBound { excluded_primes, .. } => excluded_primes,
    };
    let (sk, sl) = (signature(k), signature(l));
    if sk != sl {
        let reason = NotIsoReason::Signature { k: sk, l: sl };
        return Ok(verdict(AdeleIsoKind::NotIsomorphic { reason }, excluded));
    }
    let (Some(bk), Some(bl)) = (k.bad_primes(), l.bad_primes()) else {
        let reason = "discriminant could not be factored".to_string();
        return Ok(verdict(AdeleIsoKind::Undetermined { reason }, excluded));
    };
    let mut joint: Vec<u64> = bk.into_iter().chain(bl).collect();
    joint.sort_unstable();
    joint.dedup();
    let identical = k.min_poly() == l.min_poly();
    let mut matching = Vec::new();
    for p in joint {
        match match_at_prime(k, l, p, precision, identical, ring_order_cap) {
            Ok(PrimeOutcome::Matched(m)) => matching.extend(m),
            Ok(PrimeOutcome::Mismatch(reason)) => {
                return Ok(verdict(AdeleIsoKind::NotIsomorphic { reason }, excluded))
            }
            Err(InvError::Split(SplitError::Undetermined(_))) => {
                let reason = format!("decomposition at p = {p} is undetermined");
                return Ok(verdict(AdeleIsoKind::Undetermined { reason }, excluded));
            }
            Err(e) => return Err(e),
        }
    }
    let unmatched: Vec<LocalMatch> = matching
        .iter()
        .filter(|m| m.certification == Certification::Assumption)
        .copied()
        .collect();
    let kind = if unmatched.is_empty() {
        AdeleIsoKind::IsomorphicCertified { matching }
    } else {
        AdeleIsoKind::IsomorphicModuloAssumption {
            matching,
            unmatched,
            assumption_note: ASSUMPTION_NOTE.to_string(),
        }
    };
    Ok(verdict(kind, excluded))
}
