use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::exactpoly::gf::{self, Fp};
use crate::exactpoly::{irreducible_modp, valuation, ModPoly};

use super::InvError;

pub const DEFAULT_RING_ORDER_CAP: u64 = 1 << 20;

/// Least integer s with s > p/(p−1) + v_p(e)·e.
pub fn keating_bound(p: u64, e: u32) -> u32 {
    let v = valuation(&BigInt::from(e), p) as u64;
    let x = Ratio::new(p, p - 1) + Ratio::from_integer(v * e as u64);
    (x.floor().to_integer() + 1) as u32
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Presentation {
    /// W/p^s with W the unramified extension of degree f; π = p.
    Unramified,
    /// W[π]/(E(π), π^s) for an Eisenstein E with rational integer
    /// coefficients (constant term first).
    TotallyRamifiedOverUnramified { eisenstein: Vec<BigInt> },
}

/// O/π^s for a local field with invariants (p, e, f). Elements are
/// Σ_{j<e} w_j π^j with w_j ∈ W/p^{⌈(s−j)/e⌉}, stored flat as the
/// coefficients of ζ^i π^j at position j·f + i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueRing {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub s: u32,
    pub presentation: Presentation,
    pub order: BigUint,
    /// Monic degree-f polynomial, irreducible mod p, presenting W.
    unram: Vec<u64>,
    /// E mod p^n, length e + 1.
    eis: Vec<u64>,
    /// p^n with n = ⌈s/e⌉.
    modulus: u64,
    digit_mod: Vec<u64>,
}

pub type RingElem = Vec<u64>;

/// Largest p^⌈s/e⌉ for which element arithmetic stays in u64.
const MODULUS_LIMIT: u64 = 1 << 31;

pub fn residue_ring_construct(
    p: u64,
    e: u32,
    f: u32,
    local_factor: Option<&ModPoly>,
    s: u32,
) -> Result<ResidueRing, InvError> {
    if s == 0 || e == 0 || f == 0 || !num_prime::nt_funcs::is_prime64(p) {
        return Err(InvError::Unsupported(format!("invalid parameters p={p} e={e} f={f} s={s}")));
    }
    let n = s.div_ceil(e);
    let modulus = p
        .checked_pow(n)
        .filter(|&m| m < MODULUS_LIMIT)
        .ok_or_else(|| InvError::CapExceeded {
            order: format!("{p}^{}", f * s),
            cap: MODULUS_LIMIT,
        })?;
    let mb = BigInt::from(modulus);
    let (presentation, eis) = if e == 1 {
        (Presentation::Unramified, vec![modulus - p % modulus, 1])
    } else {
        let lf = local_factor.ok_or_else(|| {
            InvError::Unsupported(format!("no Eisenstein presentation for e={e}, f={f} at p={p}"))
        })?;
        let prec = valuation(lf.modulus(), p);
        if num_traits::pow(BigInt::from(p), prec as usize) != *lf.modulus() || prec < n.max(2) {
            return Err(InvError::Unsupported(format!(
                "local factor modulo {} does not determine O/π^{s}",
                lf.modulus()
            )));
        }
        let c = lf.coeffs();
        let eisenstein = lf.is_monic()
            && c.len() == e as usize + 1
            && c[..e as usize].iter().all(|a| valuation(a, p) >= 1)
            && !c[0].is_zero()
            && valuation(&c[0], p) == 1;
        if !eisenstein {
            return Err(InvError::Unsupported(format!("local factor {lf} is not Eisenstein at {p}")));
        }
        let eis = c.iter().map(|a| a.mod_floor(&mb).to_u64().unwrap()).collect();
        (
            Presentation::TotallyRamifiedOverUnramified {
                eisenstein: c.to_vec(),
            },
            eis,
        )
    };
    let g = irreducible_modp(p, f as usize).map_err(|e| InvError::Unsupported(e.to_string()))?;
    let unram = g.coeffs().iter().map(|a| a.to_u64().unwrap()).collect();
    let digit_mod = (0..e)
        .flat_map(|j| {
            let m = p.pow((s - j.min(s)).div_ceil(e));
            std::iter::repeat_n(m, f as usize)
        })
        .collect();
    Ok(ResidueRing {
        p,
        e,
        f,
        s,
        presentation,
        order: BigUint::from(p).pow(f * s),
        unram,
        eis,
        modulus,
        digit_mod,
    })
}

impl ResidueRing {
    /// p^⌈s/e⌉.
    pub fn characteristic(&self) -> u64 {
        self.modulus
    }

    /// |R| − |R|/p^f.
    pub fn unit_count(&self) -> BigUint {
        let q = BigUint::from(self.p).pow(self.f);
        &self.order - &self.order / q
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    fn len(&self) -> usize {
        (self.e * self.f) as usize
    }

    pub fn zero(&self) -> RingElem {
        vec![0; self.len()]
    }

    pub fn one(&self) -> RingElem {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u64) -> RingElem {
        let mut v = self.zero();
        v[0] = c % self.digit_mod[0];
        v
    }

    /// Element number `idx` in mixed radix, position 0 least significant.
    pub fn element(&self, mut idx: u64) -> RingElem {
        self.digit_mod
            .iter()
            .map(|&m| {
                let d = idx % m;
                idx /= m;
                d
            })
            .collect()
    }

    pub fn index(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.digit_mod)
            .rev()
            .fold(0, |acc, (&d, &m)| acc * m + d)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> RingElem {
        a.iter()
            .zip(b)
            .zip(&self.digit_mod)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> RingElem {
        a.iter()
            .zip(&self.digit_mod)
            .map(|(x, m)| (m - x) % m)
            .collect()
    }

    fn mul_w(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.f as usize;
        let m = self.modulus;
        let mut c = vec![0u64; 2 * f - 1];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + x * y) % m;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let t = c[k];
            if t == 0 {
                continue;
            }
            for i in 0..f {
                c[k - f + i] = (c[k - f + i] + m - t * self.unram[i] % m) % m;
            }
        }
        c.truncate(f);
        c
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> RingElem {
        let (e, f, m) = (self.e as usize, self.f as usize, self.modulus);
        let mut prod = vec![vec![0u64; f]; 2 * e - 1];
        for i in 0..e {
            let x = &a[i * f..(i + 1) * f];
            if x.iter().all(|&d| d == 0) {
                continue;
            }
            for j in 0..e {
                let y = &b[j * f..(j + 1) * f];
                let xy = self.mul_w(x, y);
                for (acc, v) in prod[i + j].iter_mut().zip(xy) {
                    *acc = (*acc + v) % m;
                }
            }
        }
        // π^e = −Σ E_k π^k
        for k in (e..2 * e - 1).rev() {
            let t = std::mem::take(&mut prod[k]);
            for i in 0..e {
                let c = self.eis[i];
                if c == 0 {
                    continue;
                }
                for (acc, v) in prod[k - e + i].iter_mut().zip(&t) {
                    *acc = (*acc + m - v * c % m) % m;
                }
            }
        }
        prod.truncate(e);
        prod.into_iter()
            .flatten()
            .zip(&self.digit_mod)
            .map(|(v, dm)| v % dm)
            .collect()
    }

    pub fn pow(&self, a: &[u64], mut k: u32) -> RingElem {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&d| d == 0)
    }

    /// In the maximal ideal: the residue of w_0 vanishes.
    pub fn is_nonunit(&self, a: &[u64]) -> bool {
        a[..self.f as usize].iter().all(|&d| d % self.p == 0)
    }

    /// Evaluates a polynomial with rational integer coefficients (given mod
    /// the characteristic), constant term first.
    fn eval_scalar_poly(&self, coeffs: &[u64], x: &[u64]) -> RingElem {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| {
            self.add(&self.mul(&acc, x), &self.scalar(c))
        })
    }
}

/// ḡ has a root in F_{p^k}: gcd(ḡ, x^{p^k} − x) is nonconstant.
fn has_root_in_extension(g: &[u64], p: u64, k: u32) -> bool {
    let fp = Fp::new(p);
    let g: Vec<u64> = gf::trimmed(g.iter().map(|c| c % p).collect());
    let q = BigUint::from(p).pow(k);
    let xq = gf::pow_mod(&fp, &[0, 1], &q, &g);
    let h = gf::sub(&fp, &xq, &[0, 1]);
    gf::gcd(&fp, &g, &h).len() > 1
}

/// Decides R1 ≅ R2. Equal invariants (p, e, f, s, E) are isomorphic by
/// the identity; otherwise rings of equal order, characteristic and unit
/// count are compared by searching for images of the generators ζ and π.
pub fn finite_ring_isomorphic(
    r1: &ResidueRing,
    r2: &ResidueRing,
    cap: u64,
) -> Result<bool, InvError> {
    for r in [r1, r2] {
        if r.order > BigUint::from(cap) {
            return Err(InvError::CapExceeded {
                order: r.order.to_string(),
                cap,
            });
        }
    }
    if r1.p != r2.p
        || r1.order != r2.order
        || r1.characteristic() != r2.characteristic()
        || r1.unit_count() != r2.unit_count()
    {
        return Ok(false);
    }
    if (r1.e, r1.f, r1.s, &r1.eis) == (r2.e, r2.f, r2.s, &r2.eis) {
        return Ok(true);
    }
    // ζ ↦ z: a root of g1 in R2 exists iff ḡ1 has one in the residue field
    // of R2, by Hensel's lemma (ḡ1 is separable).
    if !has_root_in_extension(&r1.unram, r1.p, r2.f) {
        return Ok(false);
    }
    // π ↦ t: E1(t) = 0, t^s1 = 0 and t^(s1−1) ≠ 0 (injective on the socle).
    let order = r2.order_u64().unwrap();
    let found = (0..order).any(|idx| {
        let t = r2.element(idx);
        r2.is_nonunit(&t)
            && r2.is_zero(&r2.eval_scalar_poly(&r1.eis, &t))
            && r2.is_zero(&r2.pow(&t, r1.s))
            && !r2.is_zero(&r2.pow(&t, r1.s - 1))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eis(p: u64, m: u32, c: &[i64]) -> ModPoly {
        ModPoly::new(
            num_traits::pow(BigInt::from(p), m as usize),
            c.iter().map(|&x| BigInt::from(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn keating_examples() {
        assert_eq!(keating_bound(3, 1), 2);
        assert_eq!(keating_bound(2, 2), 5);
        assert_eq!(keating_bound(5, 1), 2);
        assert_eq!(keating_bound(2, 1), 3);
    }

    #[test]
    fn construction_examples() {
        let z9 = residue_ring_construct(3, 1, 1, None, 2).unwrap();
        assert_eq!((z9.order.clone(), z9.characteristic()), (BigUint::from(9u32), 9));
        let r = residue_ring_construct(2, 2, 1, Some(&eis(2, 4, &[-2, 0, 1])), 2).unwrap();
        assert_eq!((r.order.clone(), r.characteristic()), (BigUint::from(4u32), 2));
        let f4 = residue_ring_construct(2, 1, 2, None, 1).unwrap();
        assert_eq!((f4.order.clone(), f4.characteristic()), (BigUint::from(4u32), 2));
        assert!(residue_ring_construct(2, 2, 1, None, 2).is_err());
        assert!(residue_ring_construct(2, 2, 1, Some(&eis(2, 4, &[-4, 0, 1])), 2).is_err());
    }

    #[test]
    fn order_four_rings_are_separated() {
        let z4 = residue_ring_construct(2, 1, 1, None, 2).unwrap();
        let f4 = residue_ring_construct(2, 1, 2, None, 1).unwrap();
        let dual = residue_ring_construct(2, 2, 1, Some(&eis(2, 4, &[-2, 0, 1])), 2).unwrap();
        let rings = [&z4, &f4, &dual];
        for (i, a) in rings.iter().enumerate() {
            for (j, b) in rings.iter().enumerate() {
                assert_eq!(finite_ring_isomorphic(a, b, 1 << 20).unwrap(), i == j);
            }
        }
    }

    #[test]
    fn multiplication_respects_eisenstein_relation() {
        // x^2 - 2 at 2, s = 5: π^2 = 2
        let r = residue_ring_construct(2, 2, 1, Some(&eis(2, 4, &[-2, 0, 1])), 5).unwrap();
        let pi = vec![0, 1];
        assert_eq!(r.mul(&pi, &pi), r.scalar(2));
        assert!(r.is_zero(&r.pow(&pi, 5)));
        assert!(!r.is_zero(&r.pow(&pi, 4)));
    }
}
