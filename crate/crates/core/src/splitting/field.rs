use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::exactpoly::{ddf, discriminant, IntPoly};

use super::SplitError;

/// How irreducibility over Q was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Irreducibility {
    /// Proved by a degree-pattern sieve or an Eisenstein shift.
    Certified,
    /// No rational root and no proof found; accepted as given.
    Unverified,
}

/// K = Q(α) presented by the monic minimal polynomial of α.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    min_poly: IntPoly,
    degree: usize,
    poly_disc: BigInt,
    label: Option<String>,
    irreducibility: Irreducibility,
}

impl NumberField {
    pub fn new(min_poly: IntPoly, label: Option<String>) -> Result<Self, SplitError> {
        let degree = match min_poly.degree() {
            Some(d) if d >= 1 && min_poly.is_monic() => d,
            _ => return Err(SplitError::NotMonic),
        };
        let poly_disc = discriminant(&min_poly)?;
        if poly_disc.is_zero() {
            return Err(SplitError::ZeroDiscriminant);
        }
        if degree > 1 {
            if let Some(r) = rational_root(&min_poly) {
                return Err(SplitError::Reducible(format!("{min_poly} has the root {r}")));
            }
        }
        let irreducibility = if degree == 1
            || eisenstein_shift(&min_poly).is_some()
            || degree_sieve(&min_poly, &poly_disc)
        {
            Irreducibility::Certified
        } else {
            Irreducibility::Unverified
        };
        Ok(NumberField {
            min_poly,
            degree,
            poly_disc,
            label,
            irreducibility,
        })
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poly_disc(&self) -> &BigInt {
        &self.poly_disc
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    /// The label if present, otherwise the polynomial.
    pub fn name(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.min_poly.to_string())
    }

    /// Primes dividing the polynomial discriminant. `None` when the
    /// discriminant has a prime factor beyond 64 bits or resists factoring.
    pub fn bad_primes(&self) -> Option<Vec<u64>> {
        let n = self.poly_disc.magnitude().clone();
        if n.is_one() {
            return Some(Vec::new());
        }
        let (found, rest) = num_prime::nt_funcs::factors(n, None);
        if rest.is_some() {
            return None;
        }
        found.keys().map(|q| q.to_u64()).collect()
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(out, "{l} [{}]", self.min_poly),
            None => write!(out, "{}", self.min_poly),
        }
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let m = n.magnitude().to_u128()?;
    if m == 0 {
        return None;
    }
    let mut divs = vec![1u128];
    for (q, k) in num_prime::nt_funcs::factorize128(m) {
        let mut next = Vec::with_capacity(divs.len() * (k + 1));
        for d in &divs {
            let mut x = *d;
            for _ in 0..=k {
                next.push(x);
                x *= q;
            }
        }
        divs = next;
        if divs.len() > 1 << 16 {
            return None;
        }
    }
    Some(divs.into_iter().map(BigInt::from).collect())
}

/// A rational (hence integral) root of a monic polynomial, if one is found.
fn rational_root(f: &IntPoly) -> Option<BigInt> {
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Some(BigInt::zero());
    }
    for d in small_divisors(&c0)? {
        for r in [d.clone(), -d] {
            if f.eval(&r).is_zero() {
                return Some(r);
            }
        }
    }
    None
}

/// A shift c in [-3, 3] and prime p with f(x + c) Eisenstein at p.
fn eisenstein_shift(f: &IntPoly) -> Option<(i64, u64)> {
    let n = f.degree()?;
    for c in [0i64, 1, -1, 2, -2, 3, -3] {
        let g = f.shift(&BigInt::from(c));
        let lower = &g.coeffs()[..n];
        let content = lower.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        if content.is_zero() {
            continue;
        }
        let Some(m) = content.magnitude().to_u128() else {
            continue;
        };
        for (q, _) in num_prime::nt_funcs::factorize128(m) {
            let q2 = BigInt::from(q) * BigInt::from(q);
            if !(&lower[0] % &q2).is_zero() {
                return Some((c, q as u64));
            }
        }
    }
    None
}

/// Proves irreducibility when the factor-degree patterns modulo good primes
/// leave no common proper subset sum.
fn degree_sieve(f: &IntPoly, disc: &BigInt) -> bool {
    let n = f.degree().unwrap_or(0);
    let mut possible: BTreeSet<usize> = (1..n).collect();
    let mut p = 1u64;
    let mut tried = 0;
    while tried < 80 && !possible.is_empty() {
        p += 1;
        if !num_prime::nt_funcs::is_prime64(p) || (disc % BigInt::from(p)).is_zero() {
            continue;
        }
        tried += 1;
        let Ok(counts) = f.reduce(&BigInt::from(p)).and_then(|g| ddf(&g)) else {
            continue;
        };
        let mut sums = BTreeSet::from([0usize]);
        for (d, c) in counts {
            for _ in 0..c {
                let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
                sums.extend(next);
            }
        }
        possible.retain(|s| sums.contains(s));
    }
    possible.is_empty()
}
