use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::exactpoly::gf::{self, FiniteField, Fp};
use crate::exactpoly::{valuation, IntPoly, ModPoly};

use super::kummer::factor_mod;
use super::newton::analyze_phi;
use super::{default_precision, NumberField, SplitError, PRECISION_RETRIES};

/// Presentation data for the completion at one prime above p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LocalShape {
    /// e = 1.
    Unramified,
    /// f = 1 and the local factor, after x -> x + c, is the Eisenstein
    /// polynomial `eisenstein` (coefficients mod p^`precision`, monic).
    EisensteinLinear {
        eisenstein: Vec<BigInt>,
        precision: u32,
    },
    /// Ramified without an available Eisenstein presentation.
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalPrime {
    pub e: u32,
    pub f: u32,
    pub shape: LocalShape,
}

fn to_fp(c: &[BigInt], p: &BigInt) -> Vec<u64> {
    gf::trimmed(c.iter().map(|a| a.mod_floor(p).to_u64().unwrap()).collect())
}

fn from_fp(c: &[u64]) -> IntPoly {
    IntPoly::new(c.iter().map(|&a| BigInt::from(a)).collect())
}

/// s with s·a ≡ 1 modulo b over F_p, for coprime a, b.
fn inverse_mod(k: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut r0, mut r1) = (b.to_vec(), gf::rem(k, a, b));
    let (mut s0, mut s1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = gf::div_rem(k, &r0, &r1);
        let s = gf::sub(k, &s0, &gf::mul(k, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant
    let c = k.inv(&r0[0]);
    gf::rem(k, &gf::scale(k, &s0, &c), b)
}

/// Lifts f ≡ g0·h0 (mod p), g0 and h0 monic and coprime, to f ≡ g·h
/// (mod p^m); returns g.
fn hensel_lift(f: &IntPoly, g0: &[u64], h0: &[u64], p: u64, m: u32) -> IntPoly {
    let k = Fp::new(p);
    let pb = BigInt::from(p);
    let t = inverse_mod(&k, h0, g0);
    let (mut g, mut h) = (from_fp(g0), from_fp(h0));
    let mut pk = pb.clone();
    for _ in 1..m {
        let err = &(f - &(&g * &h)).div_exact_scalar(&pk).expect("lifted to p^k");
        let err = to_fp(err.coeffs(), &pb);
        let dg = gf::rem(&k, &gf::mul(&k, &t, &err), g0);
        let dh = gf::div_rem(&k, &gf::sub(&k, &err, &gf::mul(&k, &dg, h0)), g0).0;
        g = &g + &from_fp(&dg).scale(&pk);
        h = &h + &from_fp(&dh).scale(&pk);
        pk *= &pb;
    }
    g
}

/// Decomposition of p with shape data for each prime above it, sorted by
/// (f, e). `lift` is the p-adic precision of Eisenstein coefficients.
pub fn local_primes(
    k: &NumberField,
    p: u64,
    precision: Option<u32>,
    lift: u32,
) -> Result<Vec<LocalPrime>, SplitError> {
    if !num_prime::nt_funcs::is_prime64(p) {
        return Err(SplitError::NotPrime(p));
    }
    let pb = BigInt::from(p);
    let lift = lift.max(2);
    let f = k.min_poly();
    let fbar = to_fp(f.reduce(&pb)?.coeffs(), &pb);
    let kp = Fp::new(p);
    let mut out = Vec::new();
    for (phi, ell) in factor_mod(k, p)? {
        let deg_phi = phi.degree().unwrap() as u32;
        if ell == 1 {
            out.push(LocalPrime { e: 1, f: deg_phi, shape: LocalShape::Unramified });
            continue;
        }
        let analysis = analyze_with_retries(k, p, &phi, ell, precision)?;
        let pairs = analysis.pairs.ok_or(SplitError::Undetermined(p))?;
        let single_slope_one = analysis.segments.len() == 1 && analysis.segments[0].h == 1;
        for (e, fdeg) in pairs {
            let shape = if e == 1 {
                LocalShape::Unramified
            } else if deg_phi == 1 && single_slope_one {
                let phibar = to_fp(phi.coeffs(), &pb);
                let g0 = (0..ell).fold(vec![1u64], |acc, _| gf::mul(&kp, &acc, &phibar));
                let h0 = gf::div_rem(&kp, &fbar, &g0).0;
                let g = hensel_lift(f, &g0, &h0, p, lift);
                // φ = x + a, so shift by c = -a
                let c = -phi.coeff(0);
                eisenstein_shape(&g.shift(&c), p, lift)
            } else {
                LocalShape::Other
            };
            out.push(LocalPrime { e, f: fdeg, shape });
        }
    }
    out.sort_by_key(|l| (l.f, l.e));
    Ok(out)
}

fn analyze_with_retries(
    k: &NumberField,
    p: u64,
    phi: &ModPoly,
    ell: u32,
    precision: Option<u32>,
) -> Result<super::newton::PhiAnalysis, SplitError> {
    let mut m = precision.unwrap_or_else(|| default_precision(k, p)).max(2);
    for _ in 0..=PRECISION_RETRIES {
        let modulus = num_traits::pow(BigInt::from(p), m as usize);
        let f = k.min_poly().reduce(&modulus)?;
        let phi = phi.lift().reduce(&modulus)?;
        match analyze_phi(&f, &phi, ell, p, m) {
            Err(SplitError::InsufficientPrecision { .. }) => m *= 2,
            other => return other,
        }
    }
    Err(SplitError::InsufficientPrecision { prime: p, precision: m / 2 })
}

fn eisenstein_shape(g: &IntPoly, p: u64, lift: u32) -> LocalShape {
    let modulus = num_traits::pow(BigInt::from(p), lift as usize);
    let coeffs: Vec<BigInt> = g.coeffs().iter().map(|a| a.mod_floor(&modulus)).collect();
    let n = coeffs.len() - 1;
    let eisenstein = coeffs[n].is_one()
        && coeffs[..n].iter().all(|a| valuation(a, p) >= 1)
        && !coeffs[0].is_zero()
        && valuation(&coeffs[0], p) == 1;
    if eisenstein {
        LocalShape::EisensteinLinear { eisenstein: coeffs, precision: lift }
    } else {
        LocalShape::Other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(s: &str) -> NumberField {
        NumberField::new(s.parse().unwrap(), None).unwrap()
    }

    fn eis(v: &[i64], precision: u32) -> LocalShape {
        LocalShape::EisensteinLinear {
            eisenstein: v.iter().map(|&a| BigInt::from(a)).collect(),
            precision,
        }
    }

    #[test]
    fn quadratic_shapes() {
        let lp = local_primes(&field("x^2 - 2"), 2, None, 4).unwrap();
        assert_eq!(lp, vec![LocalPrime { e: 2, f: 1, shape: eis(&[14, 0, 1], 4) }]);
        // x^2 - 3 at 2: (x + 1)^2 - 2(x + 1) - 2
        let lp = local_primes(&field("x^2 - 3"), 2, None, 3).unwrap();
        assert_eq!(lp, vec![LocalPrime { e: 2, f: 1, shape: eis(&[6, 6, 1], 3) }]);
        // slope 3/2: ramified, but not Eisenstein in x
        let lp = local_primes(&field("x^2 - 8"), 2, None, 3).unwrap();
        assert_eq!(lp, vec![LocalPrime { e: 2, f: 1, shape: LocalShape::Other }]);
        let lp = local_primes(&field("x^2 - 2"), 3, None, 3).unwrap();
        assert_eq!(lp, vec![LocalPrime { e: 1, f: 2, shape: LocalShape::Unramified }]);
    }

    #[test]
    fn hensel_separates_the_ramified_part() {
        // x^3 (x + 1) mod 3; the x^3 part has a single edge of slope 1/3
        let k = field("x^4 + x^3 + 3*x + 6");
        let lp = local_primes(&k, 3, None, 5).unwrap();
        assert_eq!(lp.len(), 2);
        assert_eq!((lp[0].e, lp[0].f, &lp[0].shape), (1, 1, &LocalShape::Unramified));
        let LocalShape::EisensteinLinear { eisenstein, precision: 5 } = &lp[1].shape else {
            panic!("expected an Eisenstein presentation, got {:?}", lp[1]);
        };
        assert_eq!((lp[1].e, lp[1].f, eisenstein.len()), (3, 1, 4));
        // the lifted factor divides f modulo 3^5 (no shift since φ = x)
        let m = BigInt::from(243);
        let g = ModPoly::new(m.clone(), eisenstein.clone()).unwrap();
        let (_, r) = k.min_poly().reduce(&m).unwrap().div_rem(&g).unwrap();
        assert!(r.is_zero());
    }
}
