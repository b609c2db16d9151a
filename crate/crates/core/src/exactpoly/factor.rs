//! Factorization of polynomials over prime fields.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gf::{self, Fp};
use super::mod_poly::ModPoly;
use super::PolyError;

fn monic_input(a: &ModPoly) -> Result<(Fp, Vec<u64>), PolyError> {
    let (p, c) = a.to_fp()?;
    if a.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !a.is_monic() {
        return Err(PolyError::NotMonic);
    }
    Ok((Fp::new(p), c))
}

/// Monic gcd over F_p. `gcd(a, 0)` is `a` made monic.
pub fn gcd_modp(a: &ModPoly, b: &ModPoly) -> Result<ModPoly, PolyError> {
    if a.modulus() != b.modulus() {
        return Err(PolyError::ModulusMismatch(
            a.modulus().clone(),
            b.modulus().clone(),
        ));
    }
    let (p, ca) = a.to_fp()?;
    let (_, cb) = b.to_fp()?;
    let k = Fp::new(p);
    Ok(ModPoly::from_u64s(p, &gf::gcd(&k, &ca, &cb)))
}

/// Squarefree decomposition of a monic polynomial over F_p.
pub fn squarefree_decomposition(a: &ModPoly) -> Result<Vec<(ModPoly, u32)>, PolyError> {
    let (k, c) = monic_input(a)?;
    Ok(gf::squarefree_decomposition(&k, &c)
        .into_iter()
        .map(|(g, m)| (ModPoly::from_u64s(k.p, &g), m))
        .collect())
}

/// Distinct-degree factorization: degree -> number of irreducible factors of
/// that degree, for a monic squarefree polynomial.
pub fn ddf(a: &ModPoly) -> Result<BTreeMap<usize, usize>, PolyError> {
    let (k, c) = monic_input(a)?;
    if !gf::is_squarefree(&k, &c) {
        return Err(PolyError::NotSquarefree);
    }
    Ok(gf::factor_degree_counts(&k, &c).into_iter().collect())
}

/// Complete factorization of a monic squarefree polynomial into monic
/// irreducibles, deterministic in `seed`. Factors are sorted by
/// (degree, coefficients).
pub fn cz_factor(a: &ModPoly, seed: u64) -> Result<Vec<ModPoly>, PolyError> {
    let (k, c) = monic_input(a)?;
    if !gf::is_squarefree(&k, &c) {
        return Err(PolyError::NotSquarefree);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (d, part) in gf::distinct_degree(&k, &c) {
        factors.extend(gf::equal_degree(&k, &part, d, &mut rng));
    }
    factors.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(factors
        .into_iter()
        .map(|g| ModPoly::from_u64s(k.p, &g))
        .collect())
}

/// Seed for equal-degree splitting, a fixed function of the prime and the
/// coefficient sequence (FNV-1a over the little-endian bytes).
pub fn derived_seed(a: &ModPoly) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for b in bytes {
            h ^= *b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(&a.modulus().to_signed_bytes_le());
    for c in a.coeffs() {
        feed(&c.to_signed_bytes_le());
        feed(b"|");
    }
    h
}

/// Full factorization of a monic polynomial mod p: irreducible factors with
/// multiplicities, sorted by (degree, coefficients, multiplicity).
pub fn factor_modp(a: &ModPoly) -> Result<Vec<(ModPoly, u32)>, PolyError> {
    let seed = derived_seed(a);
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(a)? {
        for g in cz_factor(&part, seed)? {
            out.push((g, mult));
        }
    }
    out.sort_by(|(x, m), (y, n)| {
        x.degree()
            .cmp(&y.degree())
            .then_with(|| x.coeffs().cmp(y.coeffs()))
            .then(m.cmp(n))
    });
    Ok(out)
}

pub fn is_irreducible_modp(a: &ModPoly) -> Result<bool, PolyError> {
    let (k, c) = monic_input(a)?;
    if !gf::is_squarefree(&k, &c) {
        return Ok(false);
    }
    let counts = gf::factor_degree_counts(&k, &c);
    Ok(counts.len() == 1 && counts[0].1 == 1)
}

/// The first monic irreducible polynomial of degree `d` mod p, enumerating
/// lower coefficients as base-p digits (constant term least significant).
pub fn irreducible_modp(p: u64, d: usize) -> Result<ModPoly, PolyError> {
    if d == 0 {
        return Err(PolyError::ZeroPolynomial);
    }
    if !num_prime::nt_funcs::is_prime64(p) {
        return Err(PolyError::CompositeModulus(p.into()));
    }
    let k = Fp::new(p);
    let mut digits = vec![0u64; d];
    loop {
        let mut cand = digits.clone();
        cand.push(1);
        if gf::is_squarefree(&k, &cand) {
            let counts = gf::factor_degree_counts(&k, &cand);
            if counts == [(d, 1)] {
                return Ok(ModPoly::from_u64s(p, &cand));
            }
        }
        // increment the base-p counter
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
            if i == d {
                unreachable!("irreducible polynomials exist in every degree");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(m: u64, c: &[i64]) -> ModPoly {
        ModPoly::from_i64s(m, c).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            gcd_modp(&mp(5, &[-1, 0, 1]), &mp(5, &[-1, 1])).unwrap(),
            mp(5, &[-1, 1])
        );
        assert_eq!(
            gcd_modp(&mp(3, &[1, 0, 1]), &mp(3, &[0, 1])).unwrap(),
            mp(3, &[1])
        );
        assert_eq!(
            gcd_modp(&mp(7, &[2, 4]), &mp(7, &[])).unwrap(),
            mp(7, &[4, 1])
        );
        assert!(matches!(
            gcd_modp(&mp(9, &[1, 1]), &mp(9, &[1])),
            Err(PolyError::CompositeModulus(_))
        ));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(
            squarefree_decomposition(&mp(2, &[0, 0, 1])).unwrap(),
            vec![(mp(2, &[0, 1]), 2)]
        );
        // (x-1)^2 (x-2) mod 7
        let f = mp(7, &[-1, 1])
            .try_mul(&mp(7, &[-1, 1]))
            .unwrap()
            .try_mul(&mp(7, &[-2, 1]))
            .unwrap();
        assert_eq!(
            squarefree_decomposition(&f).unwrap(),
            vec![(mp(7, &[-2, 1]), 1), (mp(7, &[-1, 1]), 2)]
        );
        let mut x9 = vec![0i64; 9];
        x9.push(1);
        assert_eq!(
            squarefree_decomposition(&mp(3, &x9)).unwrap(),
            vec![(mp(3, &[0, 1]), 9)]
        );
    }

    #[test]
    fn ddf_examples() {
        assert_eq!(ddf(&mp(7, &[-2, 0, 1])).unwrap(), BTreeMap::from([(1, 2)]));
        assert_eq!(ddf(&mp(3, &[-2, 0, 1])).unwrap(), BTreeMap::from([(2, 1)]));
        assert_eq!(ddf(&mp(5, &[0, -1, 0, 1])).unwrap(), BTreeMap::from([(1, 3)]));
        assert!(matches!(
            ddf(&mp(5, &[0, 0, 1])),
            Err(PolyError::NotSquarefree)
        ));
    }

    #[test]
    fn cz_examples() {
        assert_eq!(
            cz_factor(&mp(7, &[-2, 0, 1]), 1).unwrap(),
            vec![mp(7, &[-4, 1]), mp(7, &[-3, 1])]
        );
        assert_eq!(
            cz_factor(&mp(3, &[1, 0, 1]), 1).unwrap(),
            vec![mp(3, &[1, 0, 1])]
        );
        assert_eq!(
            cz_factor(&mp(5, &[-1, 0, 0, 0, 1]), 9).unwrap(),
            vec![mp(5, &[-4, 1]), mp(5, &[-3, 1]), mp(5, &[-2, 1]), mp(5, &[-1, 1])]
        );
    }

    #[test]
    fn cz_characteristic_two() {
        // x^4 + x = x (x + 1) (x^2 + x + 1) over F_2
        let f = mp(2, &[0, 1, 0, 0, 1]);
        assert_eq!(
            cz_factor(&f, 3).unwrap(),
            vec![mp(2, &[0, 1]), mp(2, &[1, 1]), mp(2, &[1, 1, 1])]
        );
    }

    #[test]
    fn irreducible_examples() {
        assert_eq!(irreducible_modp(2, 1).unwrap(), mp(2, &[0, 1]));
        assert_eq!(irreducible_modp(3, 2).unwrap(), mp(3, &[1, 0, 1]));
        assert_eq!(irreducible_modp(2, 2).unwrap(), mp(2, &[1, 1, 1]));
        let g = irreducible_modp(5, 4).unwrap();
        assert_eq!(g.degree(), Some(4));
        assert!(is_irreducible_modp(&g).unwrap());
    }

    #[test]
    fn factor_with_multiplicities() {
        // x^2 - 3 mod 2 = (x + 1)^2
        assert_eq!(
            factor_modp(&mp(2, &[-3, 0, 1])).unwrap(),
            vec![(mp(2, &[1, 1]), 2)]
        );
    }
}
