use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::exactpoly::gf::{self, GfExt};
use crate::exactpoly::{valuation, ModPoly};

use super::kummer::factor_mod;
use super::{Method, NumberField, PrimeDecomposition, SplitError, Status};

/// One edge of a Newton polygon: slope −h/e in lowest terms over a
/// horizontal run of `length`, starting at (`start`, `start_height`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub h: u32,
    pub e: u32,
    pub length: usize,
    pub start: usize,
    pub start_height: u32,
}

impl Segment {
    pub fn height_at(&self, t: usize) -> u32 {
        self.start_height - (t as u32) * self.h
    }
}

/// Lower convex hull of the points (i, vals[i]). `None` marks a coefficient
/// that vanishes modulo p^m, whose valuation is only known to be ≥ m.
pub(crate) fn lower_hull(vals: &[Option<u32>], p: u64, m: u32) -> Result<Vec<Segment>, SplitError> {
    let insufficient = SplitError::InsufficientPrecision { prime: p, precision: m };
    if vals.first().copied().flatten().is_none() || vals.last().copied().flatten().is_none() {
        return Err(insufficient);
    }
    let pts: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v as i64)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        // certified heights are below m, so uncertified interior points lie above every edge
        let (dx, dy) = (x1 - x0, y0 - y1);
        let g = dx.gcd(&dy);
        segments.push(Segment {
            h: (dy / g) as u32,
            e: (dx / g) as u32,
            length: dx as usize,
            start: x0 as usize,
            start_height: y0 as u32,
        });
    }
    Ok(segments)
}

fn modulus_exponent(modulus: &BigInt, p: u64) -> Option<u32> {
    let v = valuation(modulus, p);
    (num_traits::pow(BigInt::from(p), v as usize) == *modulus).then_some(v)
}

fn poly_valuation(c: &[BigInt], p: u64) -> Option<u32> {
    c.iter()
        .filter(|a| !a.is_zero())
        .map(|a| valuation(a, p))
        .min()
}

/// Newton polygon of a monic polynomial over Z/p^m, segments left to right
/// with strictly decreasing steepness.
pub fn newton_polygon(f_local: &ModPoly, p: u64) -> Result<Vec<Segment>, SplitError> {
    if !f_local.is_monic() {
        return Err(SplitError::NotMonic);
    }
    let m = modulus_exponent(f_local.modulus(), p).ok_or(SplitError::NotPrime(p))?;
    let vals: Vec<Option<u32>> = f_local
        .coeffs()
        .iter()
        .map(|a| (!a.is_zero()).then(|| valuation(a, p)))
        .collect();
    lower_hull(&vals, p, m)
}

/// The first `count` coefficients of the φ-adic expansion f = Σ a_j φ^j.
fn phi_adic(f: &ModPoly, phi: &ModPoly, count: usize) -> Result<Vec<ModPoly>, SplitError> {
    let mut out = Vec::with_capacity(count);
    let mut rest = f.clone();
    for _ in 0..count {
        let (q, r) = rest.div_rem(phi)?;
        out.push(r);
        rest = q;
    }
    Ok(out)
}

fn to_u64s(c: &[BigInt]) -> Vec<u64> {
    c.iter().map(|a| a.to_u64().unwrap()).collect()
}

/// Local analysis of one factor φ^ℓ of f mod p: the (e, f) pairs it
/// contributes, or `None` when some residual polynomial is inseparable.
pub(crate) struct PhiAnalysis {
    pub segments: Vec<Segment>,
    pub pairs: Option<Vec<(u32, u32)>>,
}

pub(crate) fn analyze_phi(
    f: &ModPoly,
    phi: &ModPoly,
    ell: u32,
    p: u64,
    m: u32,
) -> Result<PhiAnalysis, SplitError> {
    let deg_phi = phi.degree().unwrap();
    let ell = ell as usize;
    let digits = phi_adic(f, phi, ell + 1)?;
    let vals: Vec<Option<u32>> = digits
        .iter()
        .map(|a| poly_valuation(a.coeffs(), p))
        .collect();
    let segments = lower_hull(&vals, p, m)?;
    let pb = BigInt::from(p);
    let field = GfExt::new(p, to_u64s(phi.reduce(&pb)?.coeffs()));
    let mut pairs = Vec::new();
    for seg in &segments {
        let deg_res = seg.length / seg.e as usize;
        let mut residual = Vec::with_capacity(deg_res + 1);
        for t in 0..=deg_res {
            let j = seg.start + t * seg.e as usize;
            let y = seg.start_height - t as u32 * seg.h;
            let coeff = if vals[j] == Some(y) {
                let scale = num_traits::pow(pb.clone(), y as usize);
                let reduced: Vec<u64> = digits[j]
                    .coeffs()
                    .iter()
                    .map(|a| (a / &scale).mod_floor(&pb).to_u64().unwrap())
                    .collect();
                field.embed(&reduced)
            } else {
                gf::FiniteField::zero(&field)
            };
            residual.push(coeff);
        }
        let residual = gf::monic(&field, &residual);
        if !gf::is_squarefree(&field, &residual) {
            return Ok(PhiAnalysis { segments, pairs: None });
        }
        for (d, count) in gf::factor_degree_counts(&field, &residual) {
            for _ in 0..count {
                pairs.push((seg.e, (d * deg_phi) as u32));
            }
        }
    }
    Ok(PhiAnalysis {
        segments,
        pairs: Some(pairs),
    })
}

/// One-level Ore analysis at p with working precision p^m.
pub fn ore_local_decompose(
    k: &NumberField,
    p: u64,
    precision: u32,
) -> Result<PrimeDecomposition, SplitError> {
    if !num_prime::nt_funcs::is_prime64(p) {
        return Err(SplitError::NotPrime(p));
    }
    let m = precision.max(2);
    let modulus = num_traits::pow(BigInt::from(p), m as usize);
    let f = k.min_poly().reduce(&modulus)?;
    let mut pairs = Vec::new();
    for (phi, ell) in factor_mod(k, p)? {
        let deg_phi = phi.degree().unwrap() as u32;
        if ell == 1 {
            pairs.push((1, deg_phi));
            continue;
        }
        let phi = phi.lift().reduce(&modulus)?;
        match analyze_phi(&f, &phi, ell, p, m)?.pairs {
            Some(v) => pairs.extend(v),
            None => {
                return Ok(PrimeDecomposition {
                    prime: p,
                    method: Method::NewtonPolygon,
                    status: Status::Undetermined(format!(
                        "residual polynomial is inseparable at p = {p} for the factor {}",
                        phi.lift()
                    )),
                })
            }
        }
    }
    Ok(PrimeDecomposition::resolved(p, Method::NewtonPolygon, pairs))
}
