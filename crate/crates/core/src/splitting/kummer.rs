use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactpoly::{factor_modp, gcd_modp, IntPoly, ModPoly};

use super::{Method, NumberField, PrimeDecomposition, SplitError};

/// p does not divide the polynomial discriminant.
pub fn good_prime_test(k: &NumberField, p: u64) -> bool {
    !(k.poly_disc() % BigInt::from(p)).is_zero()
}

/// Irreducible factors of the minimal polynomial mod p with multiplicities.
pub(crate) fn factor_mod(k: &NumberField, p: u64) -> Result<Vec<(ModPoly, u32)>, SplitError> {
    Ok(factor_modp(&k.min_poly().reduce(&BigInt::from(p))?)?)
}

/// Dedekind's criterion: true iff p divides [O_K : Z[α]].
pub fn dedekind_index_test(k: &NumberField, p: u64) -> Result<bool, SplitError> {
    let pb = BigInt::from(p);
    let factors = factor_mod(k, p)?;
    let mut g = IntPoly::one();
    let mut h = IntPoly::one();
    for (phi, mult) in &factors {
        let lift = phi.lift();
        g = &g * &lift;
        h = &h * &lift.pow(mult - 1);
    }
    let diff = &(&g * &h) - k.min_poly();
    let big_f = diff
        .div_exact_scalar(&pb)
        .expect("g*h agrees with f modulo p");
    let common = gcd_modp(&big_f.reduce(&pb)?, &g.reduce(&pb)?)?;
    let common = gcd_modp(&common, &h.reduce(&pb)?)?;
    Ok(common.degree().is_some_and(|d| d > 0))
}

/// Kummer's theorem: (e, f) = (multiplicity, degree) of each irreducible
/// factor mod p. Valid when p is good or does not divide the index.
pub fn kummer_decompose(k: &NumberField, p: u64) -> Result<PrimeDecomposition, SplitError> {
    if !num_prime::nt_funcs::is_prime64(p) {
        return Err(SplitError::NotPrime(p));
    }
    if !good_prime_test(k, p) && dedekind_index_test(k, p)? {
        return Err(SplitError::BadPrime(p));
    }
    let pairs = factor_mod(k, p)?
        .into_iter()
        .map(|(phi, m)| (m, phi.degree().unwrap() as u32))
        .collect();
    Ok(PrimeDecomposition::resolved(p, Method::Kummer, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(s: &str) -> NumberField {
        NumberField::new(s.parse().unwrap(), None).unwrap()
    }

    #[test]
    fn good_primes() {
        let k = field("x^2 - 2");
        assert!(good_prime_test(&k, 7));
        assert!(!good_prime_test(&k, 2));
        assert!(!good_prime_test(&field("x^3 - x - 1"), 23));
    }

    #[test]
    fn kummer_examples() {
        let k = field("x^2 - 2");
        assert_eq!(kummer_decompose(&k, 7).unwrap().factors(), Some(&[(1, 1), (1, 1)][..]));
        assert_eq!(kummer_decompose(&k, 3).unwrap().factors(), Some(&[(1, 2)][..]));
        // 2 is bad but not an index divisor, so Kummer still applies
        assert_eq!(kummer_decompose(&k, 2).unwrap().factors(), Some(&[(2, 1)][..]));
        assert_eq!(kummer_decompose(&field("x"), 5).unwrap().factors(), Some(&[(1, 1)][..]));
    }

    #[test]
    fn index_divisor_is_refused() {
        let k = field("x^3 - x^2 - 2*x - 8");
        assert!(dedekind_index_test(&k, 2).unwrap());
        assert!(matches!(kummer_decompose(&k, 2), Err(SplitError::BadPrime(2))));
    }

    #[test]
    fn dedekind_examples() {
        assert!(!dedekind_index_test(&field("x^2 - 2"), 2).unwrap());
        assert!(!dedekind_index_test(&field("x^2 - 3"), 2).unwrap());
        // Z[sqrt 5] has index 2 in the maximal order
        assert!(dedekind_index_test(&field("x^2 - 5"), 2).unwrap());
    }
}
