//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use adelic_core::exactpoly::ModPoly;
use adelic_core::fv::*;
use adelic_core::invariants::{residue_ring_construct, ResidueRing};
use adelic_core::splitting::{NumberField, SplittingType};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn field(s: &str) -> NumberField {
    NumberField::new(s.parse().unwrap(), None).unwrap()
}

pub fn small_primes(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)).collect()
}

pub fn coeffs_i64(k: &NumberField) -> Vec<i64> {
    k.min_poly().coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
}

pub fn eval_mod(c: &[i64], x: u64, p: u64) -> u64 {
    let p = p as i128;
    c.iter().rev().fold(0i128, |acc, &a| (acc * x as i128 + a as i128).rem_euclid(p)) as u64
}

// ---- oracle: distinct-degree factorization over F_p on plain vectors ------

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0; r.len().saturating_sub(b.len() - 1)];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * inv % p;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    divrem(&c, m, p).1
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = divrem(&a, &b, p).1;
        a = std::mem::replace(&mut b, r);
    }
    let inv = inv_mod(*a.last().unwrap(), p);
    a.iter().map(|x| x * inv % p).collect()
}

/// Sorted degrees of the irreducible factors of a squarefree monic f mod p.
pub fn ddf_degrees(c: &[i64], p: u64) -> Vec<u32> {
    let mut g: Vec<u64> = c.iter().map(|&a| a.rem_euclid(p as i64) as u64).collect();
    let mut out = Vec::new();
    let mut h = vec![0, 1];
    let mut d = 1;
    while g.len() > 1 && 2 * d <= g.len() - 1 {
        // h = x^{p^d} mod g
        let mut pw = vec![1u64];
        let mut base = divrem(&h, &g, p).1;
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                pw = mulmod(&pw, &base, &g, p);
            }
            base = mulmod(&base, &base, &g, p);
            e >>= 1;
        }
        h = pw;
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        let common = gcd(&g, &hx, p);
        let deg = common.len() - 1;
        out.extend(std::iter::repeat_n(d as u32, deg / d));
        if deg > 0 {
            g = divrem(&g, &common, p).0;
            h = divrem(&h, &g, p).1;
        }
        d += 1;
    }
    if g.len() > 1 {
        out.push(g.len() as u32 - 1);
    }
    out.sort_unstable();
    out
}

pub fn oracle_type(k: &NumberField, p: u64) -> SplittingType {
    SplittingType(ddf_degrees(&coeffs_i64(k), p))
}

pub fn ring(p: u64, e: u32, f: u32, eis: &[i64], s: u32) -> ResidueRing {
    let factor = (e > 1).then(|| {
        let prec = s.div_ceil(e).max(2);
        ModPoly::new(
            num_traits::pow(BigInt::from(p), prec as usize),
            eis.iter().map(|&c| BigInt::from(c)).collect(),
        )
        .unwrap()
    });
    residue_ring_construct(p, e, f, factor.as_ref(), s).unwrap()
}

/// v_p of a nonzero rational.
pub fn test_rings() -> Vec<ResidueRing> {
    vec![
        ring(2, 1, 1, &[], 2),
        ring(2, 1, 2, &[], 1),
        ring(2, 2, 1, &[-2, 0, 1], 2),
        ring(2, 3, 1, &[2, 0, 0, 1], 2),
        ring(2, 2, 1, &[-2, 0, 1], 3),
        ring(2, 2, 1, &[6, 6, 1], 3),
        ring(2, 2, 1, &[2, 2, 1], 3),
        ring(2, 2, 1, &[-6, 0, 1], 3),
        ring(2, 2, 1, &[-2, 0, 1], 5),
        ring(2, 2, 1, &[6, 6, 1], 5),
        ring(2, 2, 1, &[2, 0, 1], 5),
        ring(2, 2, 1, &[-10, 0, 1], 5),
        ring(2, 1, 1, &[], 3),
        ring(2, 3, 1, &[2, 0, 0, 1], 3),
        ring(3, 1, 1, &[], 2),
        ring(3, 2, 1, &[3, 0, 1], 2),
        ring(3, 2, 1, &[-3, 0, 1], 2),
        ring(3, 2, 1, &[3, 0, 1], 3),
        ring(3, 2, 1, &[-3, 0, 1], 3),
        ring(3, 2, 1, &[6, 0, 1], 3),
        ring(3, 3, 1, &[3, 0, 0, 1], 3),
        ring(2, 2, 2, &[-2, 0, 1], 2),
        ring(2, 1, 4, &[], 1),
        ring(2, 4, 1, &[2, 0, 0, 0, 1], 4),
    ]
}

// ---- fv generators ---------------------------------------------------------


pub fn random_term(rng: &mut ChaCha8Rng, vars: &[String], depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..4) {
            0 => Term::Zero,
            1 => Term::One,
            _ if !vars.is_empty() => Term::Var(vars.choose(rng).unwrap().clone()),
            _ => Term::One,
        };
    }
    let a = Box::new(random_term(rng, vars, depth - 1));
    let b = Box::new(random_term(rng, vars, depth - 1));
    match rng.gen_range(0..3) {
        0 => Term::Add(a, b),
        1 => Term::Sub(a, b),
        _ => Term::Mul(a, b),
    }
}

/// A random ring formula over the free variables w0..w{k-1}, with at most
/// `quantifiers` nested quantifiers.
pub fn random_formula(rng: &mut ChaCha8Rng, vars: &mut Vec<String>, depth: u32, quantifiers: u32) -> RingFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::Atom(RingAtom(random_term(rng, vars, 2), random_term(rng, vars, 2)));
    }
    match rng.gen_range(0..6) {
        0 => Formula::not(random_formula(rng, vars, depth - 1, quantifiers)),
        1 => Formula::and(
            random_formula(rng, vars, depth - 1, quantifiers),
            random_formula(rng, vars, depth - 1, quantifiers),
        ),
        2 => Formula::or(
            random_formula(rng, vars, depth - 1, quantifiers),
            random_formula(rng, vars, depth - 1, quantifiers),
        ),
        3 => Formula::Implies(
            Box::new(random_formula(rng, vars, depth - 1, quantifiers)),
            Box::new(random_formula(rng, vars, depth - 1, quantifiers)),
        ),
        _ if quantifiers > 0 => {
            let v = ["y", "z", "y1"][rng.gen_range(0..3)].to_string();
            vars.push(v.clone());
            let body = Box::new(random_formula(rng, vars, depth - 1, quantifiers - 1));
            vars.pop();
            if rng.gen_bool(0.5) { Formula::Exists(v, body) } else { Formula::Forall(v, body) }
        }
        _ => random_formula(rng, vars, depth - 1, quantifiers),
    }
}

pub fn free_w(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("w{i}")).collect()
}

pub fn random_spec(rng: &mut ChaCha8Rng) -> StalkSpec {
    match rng.gen_range(0..5) {
        0 | 1 => StalkSpec::Zmod { m: rng.gen_range(1..=12) },
        2 => {
            let (p, f) = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)][rng.gen_range(0..7)];
            StalkSpec::GF { p, f }
        }
        3 => {
            let (p, e, f, eisenstein, s) = [
                (2, 2, 1, vec![-2, 0, 1], 3),
                (2, 2, 1, vec![6, 6, 1], 4),
                (3, 2, 1, vec![3, 0, 1], 2),
                (2, 1, 2, vec![], 2),
                (2, 3, 1, vec![2, 0, 0, 1], 3),
            ][rng.gen_range(0..5)]
            .clone();
            StalkSpec::Residue { p, e, f, s, eisenstein }
        }
        _ => StalkSpec::Zmod { m: [4, 8, 9][rng.gen_range(0..3)] },
    }
}

pub fn family_from(specs: &[StalkSpec]) -> FiniteFamily {
    let index: Vec<String> = (0..specs.len()).map(|i| format!("i{i}")).collect();
    let stalks = specs.iter().map(|s| Stalk::from_spec(s).unwrap()).collect();
    FiniteFamily::new(index, stalks).unwrap()
}

pub fn random_family(rng: &mut ChaCha8Rng) -> (FiniteFamily, Vec<StalkSpec>) {
    let n = rng.gen_range(1..=6);
    let specs: Vec<StalkSpec> = (0..n).map(|_| random_spec(rng)).collect();
    (family_from(&specs), specs)
}

pub fn random_element(rng: &mut ChaCha8Rng, fam: &FiniteFamily) -> GlobalElement {
    fam.stalks().iter().map(|s| rng.gen_range(0..s.order())).collect()
}

pub fn random_sentence(rng: &mut ChaCha8Rng, k: usize) -> GeneralizedSentence {
    let n = rng.gen_range(1..=3);
    let thetas: Vec<RingFormula> = (0..n).map(|_| random_formula(rng, &mut free_w(k), 3, 2)).collect();
    let bvars: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let pick = |rng: &mut ChaCha8Rng| BoolTerm::Var(bvars.choose(rng).unwrap().clone());
    let atom = |rng: &mut ChaCha8Rng| -> BooleFormula {
        match rng.gen_range(0..4) {
            0 => Formula::Atom(BooleAtom::Eq(pick(rng), BoolTerm::One)),
            1 => Formula::Atom(BooleAtom::Eq(pick(rng), BoolTerm::Zero)),
            2 => Formula::Atom(BooleAtom::Sub(pick(rng), pick(rng))),
            _ => Formula::Atom(BooleAtom::Eq(
                BoolTerm::Meet(Box::new(pick(rng)), Box::new(BoolTerm::Compl(Box::new(pick(rng))))),
                BoolTerm::Zero,
            )),
        }
    };
    let mut psi = atom(rng);
    for _ in 0..rng.gen_range(0..3) {
        psi = if rng.gen_bool(0.5) { Formula::and(psi, atom(rng)) } else { Formula::or(Formula::not(psi), atom(rng)) };
    }
    if rng.gen_bool(0.3) {
        // exists u below v0 with a proper part
        psi = Formula::and(
            psi,
            Formula::Exists(
                "v9".into(),
                Box::new(Formula::Atom(BooleAtom::Sub(BoolTerm::Var("v9".into()), BoolTerm::Var("v0".into())))),
            ),
        );
    }
    GeneralizedSentence::new(psi, thetas, k).unwrap()
}

pub fn relabelled(rng: &mut ChaCha8Rng, specs: &[StalkSpec]) -> Vec<StalkSpec> {
    specs
        .iter()
        .map(|s| {
            let order = Stalk::from_spec(s).unwrap().order();
            let mut perm: Vec<usize> = (0..order).collect();
            perm.shuffle(rng);
            StalkSpec::Relabel { of: Box::new(s.clone()), perm }
        })
        .collect()
}

