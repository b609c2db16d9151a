use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exactpoly::{irreducible_modp, ModPoly};
use crate::invariants::residue_ring_construct;

use super::FvError;

/// Largest stalk admitted for evaluation.
pub const STALK_ORDER_CAP: usize = 1 << 12;
/// Largest stalk for which explicit tables are validated and isomorphisms
/// are searched.
pub const TABLE_ORDER_CAP: usize = 64;

/// A finite commutative ring on the elements 0..order, given by tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stalk {
    pub name: String,
    order: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    zero: usize,
    one: usize,
}

/// JSON description of a stalk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StalkSpec {
    /// Z/m, element k is the residue k.
    Zmod { m: u64 },
    /// F_{p^f} as F_p[x]/(g), element Σ c_i p^i is Σ c_i x^i.
    GF { p: u64, f: u32 },
    /// O/π^s with O presented by an Eisenstein polynomial over W(F_{p^f})
    /// (omitted for e = 1), elements in mixed radix.
    Residue {
        p: u64,
        e: u32,
        f: u32,
        s: u32,
        #[serde(default)]
        eisenstein: Vec<i64>,
    },
    /// Explicit tables, row-major.
    Table { add: Vec<Vec<usize>>, mul: Vec<Vec<usize>> },
    /// The ring `of` with element i renamed to position j where perm[j] = i.
    Relabel { of: Box<StalkSpec>, perm: Vec<usize> },
}

impl Stalk {
    fn from_ops(
        name: String,
        order: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Stalk, FvError> {
        if order == 0 || order > STALK_ORDER_CAP {
            return Err(FvError::StalkTooLarge { order: order.to_string(), cap: STALK_ORDER_CAP });
        }
        let mut at = Vec::with_capacity(order * order);
        let mut mt = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                at.push(add(a, b) as u16);
                mt.push(mul(a, b) as u16);
            }
        }
        Self::from_tables(name, order, at, mt)
    }

    fn from_tables(name: String, order: usize, add: Vec<u16>, mul: Vec<u16>) -> Result<Stalk, FvError> {
        let bad = |m: &str| FvError::InvalidStalk(format!("{name}: {m}"));
        if add.iter().chain(&mul).any(|&x| x as usize >= order) {
            return Err(bad("table entry out of range"));
        }
        let identity = |t: &[u16]| (0..order).find(|&z| (0..order).all(|a| t[z * order + a] as usize == a));
        let zero = identity(&add).ok_or_else(|| bad("no additive identity"))?;
        let one = identity(&mul).ok_or_else(|| bad("no multiplicative identity"))?;
        let neg = (0..order)
            .map(|a| (0..order).find(|&b| add[a * order + b] as usize == zero).map(|b| b as u16))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("an element has no additive inverse"))?;
        Ok(Stalk { name, order, add, mul, neg, zero, one })
    }

    pub fn zmod(m: u64) -> Result<Stalk, FvError> {
        let n = usize::try_from(m).ok().filter(|&n| n <= STALK_ORDER_CAP).ok_or(FvError::StalkTooLarge {
            order: m.to_string(),
            cap: STALK_ORDER_CAP,
        })?;
        if n < 1 {
            return Err(FvError::InvalidStalk("Z/0 is not finite".into()));
        }
        Self::from_ops(format!("Z/{m}"), n, |a, b| (a + b) % n, |a, b| (a * b) % n)
    }

    pub fn gf(p: u64, f: u32) -> Result<Stalk, FvError> {
        if f == 0 {
            return Err(FvError::InvalidStalk("GF needs f >= 1".into()));
        }
        let order = p
            .checked_pow(f)
            .filter(|&q| q as usize <= STALK_ORDER_CAP)
            .ok_or(FvError::StalkTooLarge { order: format!("{p}^{f}"), cap: STALK_ORDER_CAP })?
            as usize;
        let g = irreducible_modp(p, f as usize).map_err(|e| FvError::InvalidStalk(e.to_string()))?;
        let g: Vec<usize> = g.coeffs().iter().map(|c| c.to_usize().unwrap()).collect();
        let (p, f) = (p as usize, f as usize);
        let digits = |mut a: usize| {
            (0..f)
                .map(|_| {
                    let d = a % p;
                    a /= p;
                    d
                })
                .collect::<Vec<_>>()
        };
        let pack = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * p + d);
        let add = |a, b| {
            let s: Vec<usize> = digits(a).iter().zip(digits(b)).map(|(x, y)| (x + y) % p).collect();
            pack(&s)
        };
        let mul = |a, b| {
            let (x, y) = (digits(a), digits(b));
            let mut c = vec![0usize; 2 * f - 1];
            for i in 0..f {
                for j in 0..f {
                    c[i + j] = (c[i + j] + x[i] * y[j]) % p;
                }
            }
            for k in (f..2 * f - 1).rev() {
                let t = c[k];
                for i in 0..f {
                    c[k - f + i] = (c[k - f + i] + (p - t) * g[i]) % p;
                }
            }
            pack(&c[..f])
        };
        Self::from_ops(format!("GF({p}^{f})"), order, add, mul)
    }

    pub fn residue(p: u64, e: u32, f: u32, s: u32, eisenstein: &[i64]) -> Result<Stalk, FvError> {
        let unsupported = |e: crate::invariants::InvError| FvError::InvalidStalk(e.to_string());
        let factor = if e > 1 {
            let prec = s.div_ceil(e).max(2);
            let modulus = num_traits::pow(BigInt::from(p), prec as usize);
            let coeffs = eisenstein.iter().map(|&c| BigInt::from(c)).collect();
            Some(ModPoly::new(modulus, coeffs).map_err(|e| FvError::InvalidStalk(e.to_string()))?)
        } else {
            None
        };
        let r = residue_ring_construct(p, e, f, factor.as_ref(), s).map_err(unsupported)?;
        let order = r
            .order_u64()
            .map(|o| o as usize)
            .filter(|&o| o <= STALK_ORDER_CAP)
            .ok_or(FvError::StalkTooLarge { order: r.order.to_string(), cap: STALK_ORDER_CAP })?;
        let elems: Vec<_> = (0..order as u64).map(|i| r.element(i)).collect();
        Self::from_ops(
            format!("O/pi^{s}[p={p},e={e},f={f}]"),
            order,
            |a, b| r.index(&r.add(&elems[a], &elems[b])) as usize,
            |a, b| r.index(&r.mul(&elems[a], &elems[b])) as usize,
        )
    }

    /// Explicit tables, checked for the commutative ring axioms.
    pub fn table(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Stalk, FvError> {
        let n = add.len();
        if n == 0 || n > TABLE_ORDER_CAP {
            return Err(FvError::StalkTooLarge { order: n.to_string(), cap: TABLE_ORDER_CAP });
        }
        if mul.len() != n || add.iter().chain(mul).any(|r| r.len() != n) {
            return Err(FvError::InvalidStalk("tables must be square of equal size".into()));
        }
        let flat = |t: &[Vec<usize>]| t.iter().flatten().map(|&x| x.min(u16::MAX as usize) as u16).collect();
        let s = Self::from_tables("table".into(), n, flat(add), flat(mul))?;
        s.check_axioms()?;
        Ok(s)
    }

    pub fn from_spec(spec: &StalkSpec) -> Result<Stalk, FvError> {
        match spec {
            StalkSpec::Zmod { m } => Self::zmod(*m),
            StalkSpec::GF { p, f } => Self::gf(*p, *f),
            StalkSpec::Residue { p, e, f, s, eisenstein } => Self::residue(*p, *e, *f, *s, eisenstein),
            StalkSpec::Table { add, mul } => Self::table(add, mul),
            StalkSpec::Relabel { of, perm } => Self::from_spec(of)?.relabel(perm),
        }
    }

    /// New element j is old element perm[j].
    pub fn relabel(&self, perm: &[usize]) -> Result<Stalk, FvError> {
        let n = self.order;
        let mut inv = vec![usize::MAX; n];
        if perm.len() != n {
            return Err(FvError::InvalidStalk(format!("permutation of length {} for order {n}", perm.len())));
        }
        for (j, &i) in perm.iter().enumerate() {
            if i >= n || inv[i] != usize::MAX {
                return Err(FvError::InvalidStalk("relabelling is not a permutation".into()));
            }
            inv[i] = j;
        }
        Self::from_ops(
            format!("{}~", self.name),
            n,
            |a, b| inv[self.add(perm[a], perm[b])],
            |a, b| inv[self.mul(perm[a], perm[b])],
        )
    }

    fn check_axioms(&self) -> Result<(), FvError> {
        let n = self.order;
        let bad = |m: &str| Err(FvError::InvalidStalk(format!("{}: {m}", self.name)));
        for a in 0..n {
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return bad("not commutative");
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    {
                        return bad("not associative");
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return bad("not distributive");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    fn additive_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != self.zero {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// Isomorphism-invariant tag of an element used to prune the search.
    fn element_tag(&self, a: usize) -> (usize, bool, bool, bool) {
        let sq = self.mul(a, a);
        (
            self.additive_order(a),
            sq == self.zero,
            sq == a,
            (0..self.order).any(|b| self.mul(a, b) == self.one),
        )
    }

    /// Whether `phi` (indexed by elements of `self`) is a ring isomorphism
    /// onto `other`.
    pub fn is_isomorphism(&self, other: &Stalk, phi: &[usize]) -> bool {
        let n = self.order;
        if other.order != n || phi.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in phi {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        phi[self.one] == other.one
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    phi[self.add(a, b)] == other.add(phi[a], phi[b])
                        && phi[self.mul(a, b)] == other.mul(phi[a], phi[b])
                })
            })
    }

    /// Backtracking search for an isomorphism onto `other`, mapping a
    /// greedily chosen generating set and extending by closure.
    pub fn find_isomorphism(&self, other: &Stalk) -> Result<Option<Vec<usize>>, FvError> {
        let n = self.order;
        for s in [self, other] {
            if s.order > TABLE_ORDER_CAP {
                return Err(FvError::StalkTooLarge { order: s.order.to_string(), cap: TABLE_ORDER_CAP });
            }
        }
        if other.order != n {
            return Ok(None);
        }
        let mut tags_a: Vec<_> = (0..n).map(|a| self.element_tag(a)).collect();
        let mut tags_b: Vec<_> = (0..n).map(|b| other.element_tag(b)).collect();
        let (ta, tb) = (tags_a.clone(), tags_b.clone());
        tags_a.sort_unstable();
        tags_b.sort_unstable();
        if tags_a != tags_b {
            return Ok(None);
        }
        // generators: repeatedly the least element outside the current closure
        let mut gens = Vec::new();
        let mut phi = vec![usize::MAX; n];
        let mut inside = closure(self, &[]);
        while let Some(g) = (0..n).find(|&a| !inside[a]) {
            gens.push(g);
            inside = closure(self, &gens);
        }
        phi[self.zero] = other.zero;
        phi[self.one] = other.one;
        if !extend(self, other, &mut phi) {
            return Ok(None);
        }
        let result = search(self, other, &gens, 0, &phi, &ta, &tb);
        debug_assert!(result.as_ref().is_none_or(|m| self.is_isomorphism(other, m)));
        Ok(result)
    }
}

/// Elements of the subring generated by `gens`.
fn closure(r: &Stalk, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; r.order];
    let mut list = vec![r.zero, r.one];
    list.extend_from_slice(gens);
    list.sort_unstable();
    list.dedup();
    for &x in &list {
        inside[x] = true;
    }
    let mut i = 0;
    while i < list.len() {
        let a = list[i];
        for j in 0..=i {
            let b = list[j];
            for c in [r.add(a, b), r.mul(a, b)] {
                if !inside[c] {
                    inside[c] = true;
                    list.push(c);
                }
            }
        }
        i += 1;
    }
    inside
}

/// Propagates a partial map through sums and products of mapped elements;
/// false on an inconsistency or a collision.
fn extend(a: &Stalk, b: &Stalk, phi: &mut [usize]) -> bool {
    let n = a.order;
    let mut used = vec![false; n];
    for &y in phi.iter().filter(|&&y| y != usize::MAX) {
        if std::mem::replace(&mut used[y], true) {
            return false;
        }
    }
    let mut mapped: Vec<usize> = (0..n).filter(|&x| phi[x] != usize::MAX).collect();
    let mut i = 0;
    while i < mapped.len() {
        let x = mapped[i];
        for j in 0..=i {
            let y = mapped[j];
            for (z, w) in [(a.add(x, y), b.add(phi[x], phi[y])), (a.mul(x, y), b.mul(phi[x], phi[y]))] {
                if phi[z] == usize::MAX {
                    if used[w] {
                        return false;
                    }
                    phi[z] = w;
                    used[w] = true;
                    mapped.push(z);
                } else if phi[z] != w {
                    return false;
                }
            }
        }
        i += 1;
    }
    true
}

fn search(
    a: &Stalk,
    b: &Stalk,
    gens: &[usize],
    k: usize,
    phi: &[usize],
    ta: &[(usize, bool, bool, bool)],
    tb: &[(usize, bool, bool, bool)],
) -> Option<Vec<usize>> {
    let Some(&g) = gens.get(k) else {
        return phi.iter().all(|&y| y != usize::MAX).then(|| phi.to_vec());
    };
    if phi[g] != usize::MAX {
        return search(a, b, gens, k + 1, phi, ta, tb);
    }
    let taken: Vec<bool> = {
        let mut t = vec![false; b.order];
        for &y in phi.iter().filter(|&&y| y != usize::MAX) {
            t[y] = true;
        }
        t
    };
    for y in 0..b.order {
        if taken[y] || tb[y] != ta[g] {
            continue;
        }
        let mut next = phi.to_vec();
        next[g] = y;
        if extend(a, b, &mut next) {
            if let Some(m) = search(a, b, gens, k + 1, &next, ta, tb) {
                return Some(m);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_four_rings() {
        let z4 = Stalk::zmod(4).unwrap();
        let f4 = Stalk::gf(2, 2).unwrap();
        let dual = Stalk::residue(2, 2, 1, 2, &[-2, 0, 1]).unwrap();
        let rings = [&z4, &f4, &dual];
        for (i, x) in rings.iter().enumerate() {
            for (j, y) in rings.iter().enumerate() {
                assert_eq!(x.find_isomorphism(y).unwrap().is_some(), i == j, "{} {}", x.name, y.name);
            }
        }
    }

    #[test]
    fn relabelled_rings_are_isomorphic() {
        let z12 = Stalk::zmod(12).unwrap();
        let perm: Vec<usize> = (0..12).map(|i| (5 * i + 3) % 12).collect();
        let r = z12.relabel(&perm).unwrap();
        let phi = z12.find_isomorphism(&r).unwrap().unwrap();
        assert!(z12.is_isomorphism(&r, &phi));
        // Z/6 ≅ Z/2 × Z/3 is not Z/12's size; compare F_9 with Z/9
        assert!(Stalk::gf(3, 2).unwrap().find_isomorphism(&Stalk::zmod(9).unwrap()).unwrap().is_none());
    }

    #[test]
    fn tables_are_validated() {
        let add = vec![vec![0, 1], vec![1, 0]];
        let mul = vec![vec![0, 0], vec![0, 1]];
        assert!(Stalk::table(&add, &mul).is_ok());
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(Stalk::table(&add, &bad).is_err());
    }
}
