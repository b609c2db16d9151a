use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::int_poly::{write_terms, IntPoly};
use super::PolyError;

/// Polynomial over Z/m for m a prime or prime power. Coefficients are kept
/// reduced into `[0, m)` and trailing zeros stripped, so `==` is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModPoly {
    modulus: BigInt,
    coeffs: Vec<BigInt>,
}

impl ModPoly {
    pub fn new(modulus: BigInt, coeffs: Vec<BigInt>) -> Result<Self, PolyError> {
        if modulus.sign() != Sign::Plus || modulus.is_one() {
            return Err(PolyError::InvalidModulus(modulus));
        }
        let coeffs = coeffs.into_iter().map(|c| c.mod_floor(&modulus)).collect();
        Ok(Self::from_reduced(modulus, coeffs))
    }

    pub fn from_i64s(modulus: u64, coeffs: &[i64]) -> Result<Self, PolyError> {
        Self::new(
            BigInt::from(modulus),
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub(crate) fn from_reduced(modulus: BigInt, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ModPoly { modulus, coeffs }
    }

    /// Builds from residues modulo a word-sized prime.
    pub(crate) fn from_u64s(p: u64, coeffs: &[u64]) -> Self {
        Self::from_reduced(
            BigInt::from(p),
            coeffs.iter().map(|&c| BigInt::from(c % p)).collect(),
        )
    }

    pub fn zero(modulus: BigInt) -> Result<Self, PolyError> {
        Self::new(modulus, Vec::new())
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Lift to Z with coefficients in `[0, m)`.
    pub fn lift(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    /// Reduction to a smaller modulus dividing this one.
    pub fn reduce(&self, modulus: &BigInt) -> Result<ModPoly, PolyError> {
        if !self.modulus.is_multiple_of(modulus) {
            return Err(PolyError::ModulusMismatch(
                self.modulus.clone(),
                modulus.clone(),
            ));
        }
        ModPoly::new(modulus.clone(), self.coeffs.clone())
    }

    fn check_same(&self, other: &ModPoly) -> Result<(), PolyError> {
        if self.modulus != other.modulus {
            return Err(PolyError::ModulusMismatch(
                self.modulus.clone(),
                other.modulus.clone(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ModPoly) -> Result<ModPoly, PolyError> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)).mod_floor(&self.modulus))
            .collect();
        Ok(Self::from_reduced(self.modulus.clone(), coeffs))
    }

    pub fn try_sub(&self, other: &ModPoly) -> Result<ModPoly, PolyError> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) - other.coeff(i)).mod_floor(&self.modulus))
            .collect();
        Ok(Self::from_reduced(self.modulus.clone(), coeffs))
    }

    pub fn try_mul(&self, other: &ModPoly) -> Result<ModPoly, PolyError> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::from_reduced(self.modulus.clone(), Vec::new()));
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let out = out.into_iter().map(|c| c.mod_floor(&self.modulus)).collect();
        Ok(Self::from_reduced(self.modulus.clone(), out))
    }

    pub fn scale(&self, c: &BigInt) -> ModPoly {
        Self::from_reduced(
            self.modulus.clone(),
            self.coeffs
                .iter()
                .map(|a| (a * c).mod_floor(&self.modulus))
                .collect(),
        )
    }

    /// Quotient and remainder with `self = q * divisor + r`, `deg r < deg divisor`.
    /// A non-monic divisor is accepted only when the modulus is prime.
    pub fn div_rem(&self, divisor: &ModPoly) -> Result<(ModPoly, ModPoly), PolyError> {
        self.check_same(divisor)?;
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let m = &self.modulus;
        let lead_inv = if divisor.is_monic() {
            BigInt::one()
        } else {
            if !is_prime_modulus(m) {
                return Err(PolyError::NonMonicDivisor(m.clone()));
            }
            mod_inverse(&divisor.coeffs[dd], m).ok_or(PolyError::NonMonicDivisor(m.clone()))?
        };
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::from_reduced(m.clone(), Vec::new()), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = (&rem[k + dd] * &lead_inv).mod_floor(m);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = (&rem[k + j] - &c * dc).mod_floor(m);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((
            Self::from_reduced(m.clone(), quot),
            Self::from_reduced(m.clone(), rem),
        ))
    }

    pub fn derivative(&self) -> ModPoly {
        Self::from_reduced(
            self.modulus.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| (c * BigInt::from(i)).mod_floor(&self.modulus))
                .collect(),
        )
    }

    /// Word-sized prime modulus and residues, for the finite-field routines.
    pub(crate) fn to_fp(&self) -> Result<(u64, Vec<u64>), PolyError> {
        let p = self
            .modulus
            .to_u64()
            .filter(|p| *p < (1u64 << 62))
            .ok_or_else(|| PolyError::ModulusTooLarge(self.modulus.clone()))?;
        if !num_prime::nt_funcs::is_prime64(p) {
            return Err(PolyError::CompositeModulus(self.modulus.clone()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.to_u64().unwrap_or_default())
            .collect();
        Ok((p, coeffs))
    }
}

pub(crate) fn is_prime_modulus(m: &BigInt) -> bool {
    match m.to_u64() {
        Some(p) => num_prime::nt_funcs::is_prime64(p),
        None => m
            .to_biguint()
            .is_some_and(|u| num_prime::nt_funcs::is_prime(&u, None).probably()),
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.abs(), false)),
        )?;
        write!(f, " (mod {})", self.modulus)
    }
}
