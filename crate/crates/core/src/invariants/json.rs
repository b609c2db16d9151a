use serde::{Deserialize, Serialize};

use crate::splitting::SplittingType;

use super::adele::{AdeleIsoKind, AdeleIsoVerdict, LocalMatch, NotIsoReason};
use super::equiv::{ArithEquivKind, ArithEquivVerdict};

/// Flat JSON shape shared by both verdict types.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub types: Option<(SplittingType, SplittingType)>,
    #[serde(default)]
    pub matching: Vec<LocalMatch>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unmatched: Vec<LocalMatch>,
    pub excluded_primes: Vec<u64>,
    pub bound: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compared_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_check: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<NotIsoReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("JSON verdict of kind {0:?} is missing fields or has an unknown kind")]
pub struct MalformedVerdict(pub String);

impl VerdictJson {
    fn base(kind: &str, bound: u64, excluded_primes: Vec<u64>) -> Self {
        VerdictJson {
            kind: kind.to_string(),
            witness: None,
            types: None,
            matching: Vec::new(),
            unmatched: Vec::new(),
            excluded_primes,
            bound,
            compared_count: None,
            degree_check: None,
            reason: None,
            note: None,
        }
    }

    /// `bound` is used for `NotEquivalent`, which does not carry one.
    pub fn from_equiv(v: &ArithEquivVerdict, bound: u64) -> Self {
        let mut j = match &v.kind {
            ArithEquivKind::NotEquivalent { witness_prime, type_k, type_l } => {
                let mut j = Self::base("NotEquivalent", bound, Vec::new());
                j.witness = Some(*witness_prime);
                j.types = Some((type_k.clone(), type_l.clone()));
                j
            }
            ArithEquivKind::EquivalentUpToBound { bound, compared_count, excluded_primes } => {
                let mut j = Self::base("EquivalentUpToBound", *bound, excluded_primes.clone());
                j.compared_count = Some(*compared_count);
                j
            }
        };
        j.degree_check = Some(v.degree_check);
        j
    }

    pub fn to_equiv(&self) -> Result<ArithEquivVerdict, MalformedVerdict> {
        let bad = || MalformedVerdict(self.kind.clone());
        let kind = match self.kind.as_str() {
            "NotEquivalent" => {
                let (type_k, type_l) = self.types.clone().ok_or_else(bad)?;
                ArithEquivKind::NotEquivalent { witness_prime: self.witness.ok_or_else(bad)?, type_k, type_l }
            }
            "EquivalentUpToBound" => ArithEquivKind::EquivalentUpToBound {
                bound: self.bound,
                compared_count: self.compared_count.ok_or_else(bad)?,
                excluded_primes: self.excluded_primes.clone(),
            },
            _ => return Err(bad()),
        };
        Ok(ArithEquivVerdict { kind, degree_check: self.degree_check.ok_or_else(bad)? })
    }

    pub fn from_adele(v: &AdeleIsoVerdict) -> Self {
        let ex = v.excluded_primes.clone();
        match &v.kind {
            AdeleIsoKind::NotIsomorphic { reason } => {
                let mut j = Self::base("NotIsomorphic", v.bound, ex);
                if let NotIsoReason::ArithmeticWitness { prime, type_k, type_l } = reason {
                    j.witness = Some(*prime);
                    j.types = Some((type_k.clone(), type_l.clone()));
                }
                j.reason = Some(reason.clone());
                j
            }
            AdeleIsoKind::IsomorphicCertified { matching } => {
                let mut j = Self::base("IsomorphicCertified", v.bound, ex);
                j.matching = matching.clone();
                j
            }
            AdeleIsoKind::IsomorphicModuloAssumption { matching, unmatched, assumption_note } => {
                let mut j = Self::base("IsomorphicModuloAssumption", v.bound, ex);
                j.matching = matching.clone();
                j.unmatched = unmatched.clone();
                j.note = Some(assumption_note.clone());
                j
            }
            AdeleIsoKind::Undetermined { reason } => {
                let mut j = Self::base("Undetermined", v.bound, ex);
                j.note = Some(reason.clone());
                j
            }
        }
    }

    pub fn to_adele(&self) -> Result<AdeleIsoVerdict, MalformedVerdict> {
        let bad = || MalformedVerdict(self.kind.clone());
        let kind = match self.kind.as_str() {
            "NotIsomorphic" => AdeleIsoKind::NotIsomorphic { reason: self.reason.clone().ok_or_else(bad)? },
            "IsomorphicCertified" => AdeleIsoKind::IsomorphicCertified { matching: self.matching.clone() },
            "IsomorphicModuloAssumption" => AdeleIsoKind::IsomorphicModuloAssumption {
                matching: self.matching.clone(),
                unmatched: self.unmatched.clone(),
                assumption_note: self.note.clone().ok_or_else(bad)?,
            },
            "Undetermined" => AdeleIsoKind::Undetermined { reason: self.note.clone().ok_or_else(bad)? },
            _ => return Err(bad()),
        };
        Ok(AdeleIsoVerdict { kind, bound: self.bound, excluded_primes: self.excluded_primes.clone() })
    }
}
