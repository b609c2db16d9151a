//! Small finite fields and dense univariate polynomial algorithms over them.
//!
//! Polynomials here are plain coefficient vectors (constant first, trailing
//! zeros stripped). Everything is generic over [`FiniteField`] so the same
//! gcd / squarefree / distinct-degree code serves both the prime field and
//! the residue extensions used by the Newton-polygon analysis.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

pub(crate) trait FiniteField {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn characteristic(&self) -> u64;
    /// Number of elements q.
    fn order(&self) -> BigUint;
    fn from_u64(&self, n: u64) -> Self::Elem;
    /// Inverse Frobenius, `a^(q/p)`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem;
    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, exp: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

/// The prime field Z/p for p < 2^63.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }
}

impl FiniteField for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "inverse of non-unit");
        self.reduce_i128(t0)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
    fn random<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// F_p[t]/(m(t)) for a monic irreducible `m` of degree k; elements are
/// coefficient vectors of length exactly k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GfExt {
    base: Fp,
    modulus: Vec<u64>,
}

impl GfExt {
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        debug_assert!(modulus.len() >= 2 && *modulus.last().unwrap() == 1);
        GfExt {
            base: Fp::new(p),
            modulus,
        }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Reduces an arbitrary F_p-polynomial into the field.
    pub fn embed(&self, poly: &[u64]) -> Vec<u64> {
        let r = rem(&self.base, &trimmed(poly.to_vec()), &self.modulus);
        let mut out = r;
        out.resize(self.degree(), 0);
        out
    }
}

impl FiniteField for GfExt {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1 % self.base.p;
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let prod = mul(&self.base, &trimmed(a.clone()), &trimmed(b.clone()));
        self.embed(&prod)
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        let q = self.order();
        self.pow(a, &(q - 2u32))
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.base.p).pow(self.degree() as u32)
    }
    fn from_u64(&self, n: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = n % self.base.p;
        v
    }
    fn pth_root(&self, a: &Vec<u64>) -> Vec<u64> {
        let e = self.order() / BigUint::from(self.base.p);
        self.pow(a, &e)
    }
    fn random<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.degree()).map(|_| self.base.random(rng)).collect()
    }
}

pub(crate) fn trimmed(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn trim_in<F: FiniteField>(k: &F, v: &mut Vec<F::Elem>) {
    while v.last().is_some_and(|c| k.is_zero(c)) {
        v.pop();
    }
}

pub(crate) fn add<F: FiniteField>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let mut out: Vec<_> = (0..n)
        .map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim_in(k, &mut out);
    out
}

pub(crate) fn sub<F: FiniteField>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let mut out: Vec<_> = (0..n)
        .map(|i| k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim_in(k, &mut out);
    out
}

pub(crate) fn mul<F: FiniteField>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim_in(k, &mut out);
    out
}

pub(crate) fn scale<F: FiniteField>(k: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    let mut out: Vec<_> = a.iter().map(|x| k.mul(x, c)).collect();
    trim_in(k, &mut out);
    out
}

/// Division with remainder by a nonzero divisor.
pub(crate) fn div_rem<F: FiniteField>(
    k: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = k.inv(&b[db]);
    let mut q = vec![k.zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = k.mul(&r[i + db], &lead_inv);
        if k.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] = k.sub(&r[i + j], &k.mul(&c, bj));
        }
        q[i] = c;
    }
    r.truncate(db);
    trim_in(k, &mut r);
    trim_in(k, &mut q);
    (q, r)
}

pub(crate) fn rem<F: FiniteField>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    div_rem(k, a, b).1
}

pub(crate) fn monic<F: FiniteField>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(k, a, &k.inv(lc)),
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub(crate) fn gcd<F: FiniteField>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(k, &x, &y);
        x = y;
        y = r;
    }
    monic(k, &x)
}

pub(crate) fn derivative<F: FiniteField>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let mut out: Vec<_> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(c, &k.from_u64(i as u64)))
        .collect();
    trim_in(k, &mut out);
    out
}

pub(crate) fn is_one<F: FiniteField>(k: &F, a: &[F::Elem]) -> bool {
    a.len() == 1 && a[0] == k.one()
}

pub(crate) fn pow_mod<F: FiniteField>(
    k: &F,
    base: &[F::Elem],
    exp: &BigUint,
    modulus: &[F::Elem],
) -> Vec<F::Elem> {
    let base = rem(k, base, modulus);
    let mut acc = rem(k, &[k.one()], modulus);
    for i in (0..exp.bits()).rev() {
        acc = rem(k, &mul(k, &acc, &acc), modulus);
        if exp.bit(i) {
            acc = rem(k, &mul(k, &acc, &base), modulus);
        }
    }
    acc
}

fn x_poly<F: FiniteField>(k: &F) -> Vec<F::Elem> {
    vec![k.zero(), k.one()]
}

pub(crate) fn is_squarefree<F: FiniteField>(k: &F, a: &[F::Elem]) -> bool {
    if a.len() <= 1 {
        return true;
    }
    let d = derivative(k, a);
    !d.is_empty() && is_one(k, &gcd(k, a, &d))
}

/// Squarefree decomposition of a monic polynomial: pairs (part, multiplicity)
/// with pairwise coprime squarefree parts, sorted by multiplicity.
pub(crate) fn squarefree_decomposition<F: FiniteField>(
    k: &F,
    a: &[F::Elem],
) -> Vec<(Vec<F::Elem>, u32)> {
    let mut out = Vec::new();
    sqf_into(k, &monic(k, a), 1, &mut out);
    out.sort_by_key(|(_, m)| *m);
    out
}

fn sqf_into<F: FiniteField>(
    k: &F,
    a: &[F::Elem],
    scale_mult: u32,
    out: &mut Vec<(Vec<F::Elem>, u32)>,
) {
    if a.len() <= 1 {
        return;
    }
    let p = k.characteristic();
    let d = derivative(k, a);
    let mut c = gcd(k, a, &d);
    let mut w = div_rem(k, a, &c).0;
    let mut i = 1u32;
    while !is_one(k, &w) {
        let y = gcd(k, &w, &c);
        let fac = div_rem(k, &w, &y).0;
        if !is_one(k, &fac) {
            out.push((monic(k, &fac), i * scale_mult));
        }
        w = y;
        c = div_rem(k, &c, &w).0;
        i += 1;
    }
    if !is_one(k, &c) {
        // c is a p-th power: read off every p-th coefficient
        let root: Vec<F::Elem> = c
            .iter()
            .step_by(p as usize)
            .map(|e| k.pth_root(e))
            .collect();
        sqf_into(k, &root, scale_mult * p as u32, out);
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs (d, product of all irreducible factors of degree d).
pub(crate) fn distinct_degree<F: FiniteField>(
    k: &F,
    a: &[F::Elem],
) -> Vec<(usize, Vec<F::Elem>)> {
    let q = k.order();
    let x = x_poly(k);
    let mut rest = monic(k, a);
    let mut h = rem(k, &x, &rest);
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 2 * d {
        h = pow_mod(k, &h, &q, &rest);
        let g = gcd(k, &rest, &sub(k, &h, &x));
        if !is_one(k, &g) {
            rest = div_rem(k, &rest, &g).0;
            h = rem(k, &h, &rest);
            out.push((d, g));
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push((rest.len() - 1, rest));
    }
    out
}

/// Splits a monic squarefree product of irreducibles all of degree `d`
/// (equal-degree factorization).
pub(crate) fn equal_degree<F: FiniteField, R: Rng>(
    k: &F,
    a: &[F::Elem],
    d: usize,
    rng: &mut R,
) -> Vec<Vec<F::Elem>> {
    let n = a.len() - 1;
    if n == d {
        return vec![a.to_vec()];
    }
    let p = k.characteristic();
    let q = k.order();
    loop {
        let r: Vec<F::Elem> = (0..n).map(|_| k.random(rng)).collect();
        let mut r = r;
        trim_in(k, &mut r);
        if r.len() <= 1 {
            continue;
        }
        let candidate = if p == 2 {
            // absolute trace map  r + r^2 + r^4 + ... (m*d terms, q = 2^m)
            let steps = (q.bits() as usize - 1) * d;
            let two = BigUint::from(2u32);
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..steps {
                t = pow_mod(k, &t, &two, a);
                acc = add(k, &acc, &t);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            sub(k, &pow_mod(k, &r, &e, a), &[k.one()])
        };
        let g = gcd(k, a, &candidate);
        if g.len() > 1 && g.len() < a.len() {
            let h = div_rem(k, a, &g).0;
            let mut out = equal_degree(k, &g, d, rng);
            out.extend(equal_degree(k, &monic(k, &h), d, rng));
            return out;
        }
    }
}

/// Degree-only view of the factorization: counts of irreducible factors by degree.
pub(crate) fn factor_degree_counts<F: FiniteField>(
    k: &F,
    a: &[F::Elem],
) -> Vec<(usize, usize)> {
    distinct_degree(k, a)
        .into_iter()
        .map(|(d, g)| (d, (g.len() - 1) / d))
        .collect()
}
