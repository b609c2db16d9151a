use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::formula::{var_index, BoolTerm, BooleAtom, BooleFormula, Formula, RingAtom, RingFormula, Term};
use super::stalk::{Stalk, StalkSpec};
use super::FvError;

pub const INDEX_CAP: usize = 16;
pub const QUANTIFIER_DEPTH_CAP: usize = 4;

/// A subset of the index set as a bit mask over index positions.
pub type IndexSet = u32;

/// An element of the product: one stalk element per index, in index order.
pub type GlobalElement = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFamily {
    index: Vec<String>,
    stalks: Vec<Stalk>,
}

#[derive(Deserialize, Serialize)]
struct FamilyJson {
    index: Vec<String>,
    stalks: std::collections::BTreeMap<String, StalkSpec>,
}

impl FiniteFamily {
    pub fn new(index: Vec<String>, stalks: Vec<Stalk>) -> Result<Self, FvError> {
        if index.len() > INDEX_CAP {
            return Err(FvError::IndexTooLarge { size: index.len(), cap: INDEX_CAP });
        }
        if stalks.len() != index.len() {
            return Err(FvError::Family(format!("{} labels but {} stalks", index.len(), stalks.len())));
        }
        let mut sorted = index.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != index.len() {
            return Err(FvError::Family("index labels are not distinct".into()));
        }
        Ok(FiniteFamily { index, stalks })
    }

    /// Parses `{"index": [...], "stalks": {"a": {"kind": "Zmod", "m": 4}, ...}}`.
    pub fn from_json(text: &str) -> Result<Self, FvError> {
        let doc: FamilyJson = serde_json::from_str(text).map_err(|e| FvError::Family(e.to_string()))?;
        let stalks = doc
            .index
            .iter()
            .map(|i| {
                let spec = doc.stalks.get(i).ok_or_else(|| FvError::UnknownIndex(i.clone()))?;
                Stalk::from_spec(spec)
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(extra) = doc.stalks.keys().find(|k| !doc.index.contains(k)) {
            return Err(FvError::UnknownIndex(extra.clone()));
        }
        Self::new(doc.index, stalks)
    }

    pub fn index(&self) -> &[String] {
        &self.index
    }

    pub fn stalks(&self) -> &[Stalk] {
        &self.stalks
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn full(&self) -> IndexSet {
        full_set(self.len())
    }

    /// Labels of the indices in `set`.
    pub fn labels(&self, set: IndexSet) -> Vec<&str> {
        (0..self.len()).filter(|i| set >> i & 1 == 1).map(|i| self.index[i].as_str()).collect()
    }

    fn check_element(&self, f: &GlobalElement) -> Result<(), FvError> {
        if f.len() != self.len() {
            return Err(FvError::ArityMismatch(format!(
                "global element has {} components for {} indices",
                f.len(),
                self.len()
            )));
        }
        for (i, (&x, s)) in f.iter().zip(&self.stalks).enumerate() {
            if x >= s.order() {
                return Err(FvError::ElementOutOfRange { index: self.index[i].clone(), value: x });
            }
        }
        Ok(())
    }
}

fn full_set(n: usize) -> IndexSet {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

struct Env<'a, T> {
    free: &'a [T],
    bound: Vec<(&'a str, T)>,
    prefix: char,
}

impl<'a, T: Copy> Env<'a, T> {
    fn lookup(&self, name: &str) -> Result<T, FvError> {
        if let Some(&(_, v)) = self.bound.iter().rev().find(|(n, _)| *n == name) {
            return Ok(v);
        }
        var_index(name, self.prefix)
            .and_then(|i| self.free.get(i).copied())
            .ok_or_else(|| FvError::UnboundVariable(name.to_string()))
    }
}

fn eval_term(t: &Term, s: &Stalk, env: &Env<usize>) -> Result<usize, FvError> {
    Ok(match t {
        Term::Var(v) => env.lookup(v)?,
        Term::Zero => s.zero(),
        Term::One => s.one(),
        Term::Add(a, b) => s.add(eval_term(a, s, env)?, eval_term(b, s, env)?),
        Term::Sub(a, b) => s.sub(eval_term(a, s, env)?, eval_term(b, s, env)?),
        Term::Mul(a, b) => s.mul(eval_term(a, s, env)?, eval_term(b, s, env)?),
    })
}

fn eval_bterm(t: &BoolTerm, full: IndexSet, env: &Env<IndexSet>) -> Result<IndexSet, FvError> {
    Ok(match t {
        BoolTerm::Var(v) => env.lookup(v)?,
        BoolTerm::Zero => 0,
        BoolTerm::One => full,
        BoolTerm::Join(a, b) => eval_bterm(a, full, env)? | eval_bterm(b, full, env)?,
        BoolTerm::Meet(a, b) => eval_bterm(a, full, env)? & eval_bterm(b, full, env)?,
        BoolTerm::Compl(a) => full & !eval_bterm(a, full, env)?,
    })
}

/// Connectives and quantifiers shared by both sorts; `domain` lists the
/// values a quantified variable ranges over.
fn eval_formula<'a, A, T: Copy>(
    f: &'a Formula<A>,
    env: &mut Env<'a, T>,
    domain: &dyn Fn() -> Box<dyn Iterator<Item = T> + 'a>,
    atom: &dyn Fn(&A, &Env<'a, T>) -> Result<bool, FvError>,
) -> Result<bool, FvError> {
    Ok(match f {
        Formula::Atom(a) => atom(a, env)?,
        Formula::Not(x) => !eval_formula(x, env, domain, atom)?,
        Formula::And(x, y) => eval_formula(x, env, domain, atom)? && eval_formula(y, env, domain, atom)?,
        Formula::Or(x, y) => eval_formula(x, env, domain, atom)? || eval_formula(y, env, domain, atom)?,
        Formula::Implies(x, y) => !eval_formula(x, env, domain, atom)? || eval_formula(y, env, domain, atom)?,
        Formula::Exists(v, x) | Formula::Forall(v, x) => {
            let exists = matches!(f, Formula::Exists(..));
            let mut result = !exists;
            for value in domain() {
                env.bound.push((v.as_str(), value));
                let r = eval_formula(x, env, domain, atom);
                env.bound.pop();
                if r? == exists {
                    result = exists;
                    break;
                }
            }
            result
        }
    })
}

fn check_depth<A: super::formula::AtomSyntax>(f: &Formula<A>) -> Result<(), FvError> {
    let depth = f.quantifier_depth();
    if depth > QUANTIFIER_DEPTH_CAP {
        return Err(FvError::QuantifierDepth { depth, cap: QUANTIFIER_DEPTH_CAP });
    }
    Ok(())
}

/// Satisfaction of θ in one stalk; `assignment[i]` is the value of w_i.
pub fn eval_ring_formula(theta: &RingFormula, stalk: &Stalk, assignment: &[usize]) -> Result<bool, FvError> {
    check_depth(theta)?;
    if let Some(&x) = assignment.iter().find(|&&x| x >= stalk.order()) {
        return Err(FvError::ElementOutOfRange { index: stalk.name.clone(), value: x });
    }
    let order = stalk.order();
    let mut env = Env { free: assignment, bound: Vec::new(), prefix: 'w' };
    eval_formula(
        theta,
        &mut env,
        &|| Box::new(0..order),
        &|RingAtom(l, r), env| Ok(eval_term(l, stalk, env)? == eval_term(r, stalk, env)?),
    )
}

/// Satisfaction of Ψ in the power-set algebra of an index set of size
/// `n`; `assignment[i]` is the value of v_i. Fin holds of every subset.
pub fn eval_boole(psi: &BooleFormula, n: usize, assignment: &[IndexSet]) -> Result<bool, FvError> {
    if n > INDEX_CAP {
        return Err(FvError::IndexTooLarge { size: n, cap: INDEX_CAP });
    }
    let full = full_set(n);
    if let Some(&x) = assignment.iter().find(|&&x| x & !full != 0) {
        return Err(FvError::ElementOutOfRange { index: "power set".into(), value: x as usize });
    }
    let mut env = Env { free: assignment, bound: Vec::new(), prefix: 'v' };
    eval_formula(
        psi,
        &mut env,
        &|| Box::new(0..=full),
        &|a, env| {
            Ok(match a {
                BooleAtom::Eq(x, y) => eval_bterm(x, full, env)? == eval_bterm(y, full, env)?,
                BooleAtom::Sub(x, y) => eval_bterm(x, full, env)? & !eval_bterm(y, full, env)? == 0,
                BooleAtom::Fin(x) => {
                    eval_bterm(x, full, env)?;
                    true
                }
            })
        },
    )
}

/// [[θ(f_0, …, f_{k−1})]]: the indices whose stalk satisfies θ pointwise.
pub fn theta_set(theta: &RingFormula, family: &FiniteFamily, tuple: &[GlobalElement]) -> Result<IndexSet, FvError> {
    for f in tuple {
        family.check_element(f)?;
    }
    let mut set = 0;
    for (i, stalk) in family.stalks.iter().enumerate() {
        let point: Vec<usize> = tuple.iter().map(|f| f[i]).collect();
        if eval_ring_formula(theta, stalk, &point)? {
            set |= 1 << i;
        }
    }
    Ok(set)
}

/// Ψ(θ_0, …, θ_{n−1}) over k-tuples of global elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedSentence {
    psi: BooleFormula,
    thetas: Vec<RingFormula>,
    k: usize,
}

impl GeneralizedSentence {
    /// Requires arity(Ψ) ≤ n = |θ̄| and arity(θ_j) ≤ k.
    pub fn new(psi: BooleFormula, thetas: Vec<RingFormula>, k: usize) -> Result<Self, FvError> {
        if psi.arity() > thetas.len() {
            return Err(FvError::ArityMismatch(format!(
                "Ψ has arity {} but {} formulas θ are given",
                psi.arity(),
                thetas.len()
            )));
        }
        if let Some((j, t)) = thetas.iter().enumerate().find(|(_, t)| t.arity() > k) {
            return Err(FvError::ArityMismatch(format!("θ_{j} has arity {} > k = {k}", t.arity())));
        }
        check_depth(&psi)?;
        for t in &thetas {
            check_depth(t)?;
        }
        Ok(GeneralizedSentence { psi, thetas, k })
    }

    pub fn psi(&self) -> &BooleFormula {
        &self.psi
    }

    pub fn thetas(&self) -> &[RingFormula] {
        &self.thetas
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

pub fn gen_product_eval(g: &GeneralizedSentence, family: &FiniteFamily, tuple: &[GlobalElement]) -> Result<bool, FvError> {
    if tuple.len() != g.k {
        return Err(FvError::ArityMismatch(format!("{} global elements for k = {}", tuple.len(), g.k)));
    }
    let sets = g
        .thetas
        .iter()
        .map(|t| theta_set(t, family, tuple))
        .collect::<Result<Vec<_>, _>>()?;
    eval_boole(&g.psi, family.len(), &sets)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PreservationReport {
    /// Stalks at `index` are not isomorphic.
    PreconditionFailed { index: String },
    Checked {
        /// Stalk isomorphisms used to transport tuples.
        isomorphisms: Vec<Vec<usize>>,
        agreed: usize,
        /// Positions in the check list where the two evaluations differ.
        disagreements: Vec<usize>,
    },
}

/// Evaluates each sentence on `family1` with its tuple and on `family2`
/// with the tuple transported along stalkwise isomorphisms (supplied or
/// found by search).
pub fn preservation_check(
    family1: &FiniteFamily,
    family2: &FiniteFamily,
    checks: &[(GeneralizedSentence, Vec<GlobalElement>)],
    witness: Option<&[Vec<usize>]>,
) -> Result<PreservationReport, FvError> {
    if family1.index != family2.index {
        return Err(FvError::Family("families have different index sets".into()));
    }
    let mut isos = Vec::with_capacity(family1.len());
    for (i, (a, b)) in family1.stalks.iter().zip(&family2.stalks).enumerate() {
        let phi = match witness.and_then(|w| w.get(i)) {
            Some(phi) => a.is_isomorphism(b, phi).then(|| phi.clone()),
            None => a.find_isomorphism(b)?,
        };
        match phi {
            Some(phi) => isos.push(phi),
            None => return Ok(PreservationReport::PreconditionFailed { index: family1.index[i].clone() }),
        }
    }
    let outcomes = checks
        .par_iter()
        .map(|(g, tuple)| {
            let moved: Vec<GlobalElement> = tuple
                .iter()
                .map(|f| f.iter().enumerate().map(|(i, &x)| isos[i].get(x).copied().unwrap_or(usize::MAX)).collect())
                .collect();
            Ok(gen_product_eval(g, family1, tuple)? == gen_product_eval(g, family2, &moved)?)
        })
        .collect::<Result<Vec<bool>, FvError>>()?;
    let disagreements: Vec<usize> = outcomes.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect();
    Ok(PreservationReport::Checked {
        isomorphisms: isos,
        agreed: outcomes.len() - disagreements.len(),
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fv::{parse_boole_formula, parse_ring_formula};

    fn ring(s: &str) -> RingFormula {
        parse_ring_formula(s).unwrap()
    }

    fn boole(s: &str) -> BooleFormula {
        parse_boole_formula(s).unwrap()
    }

    fn z235() -> FiniteFamily {
        FiniteFamily::from_json(
            r#"{"index": ["a", "b", "c"], "stalks": {"a": {"kind": "Zmod", "m": 2},
                "b": {"kind": "Zmod", "m": 3}, "c": {"kind": "Zmod", "m": 5}}}"#,
        )
        .unwrap()
    }

    #[test]
    fn ring_examples() {
        let double = ring("w0 + w0 = 0");
        assert!(eval_ring_formula(&double, &Stalk::zmod(2).unwrap(), &[1]).unwrap());
        assert!(!eval_ring_formula(&double, &Stalk::zmod(5).unwrap(), &[2]).unwrap());
        let square = ring("exists y (y*y = w0)");
        assert!(!eval_ring_formula(&square, &Stalk::zmod(7).unwrap(), &[3]).unwrap());
        assert!(matches!(
            eval_ring_formula(&ring("y = 0"), &Stalk::zmod(7).unwrap(), &[]),
            Err(FvError::UnboundVariable(_))
        ));
        let deep = ring("exists y exists z forall y forall z exists y y = z");
        assert!(matches!(
            eval_ring_formula(&deep, &Stalk::zmod(2).unwrap(), &[]),
            Err(FvError::QuantifierDepth { depth: 5, .. })
        ));
    }

    #[test]
    fn theta_set_examples() {
        let fam = z235();
        assert_eq!(fam.labels(theta_set(&ring("w0 + w0 = 0"), &fam, &[vec![1, 1, 1]]).unwrap()), ["a"]);
        assert_eq!(theta_set(&ring("w0 = 0"), &fam, &[vec![0, 0, 0]]).unwrap(), fam.full());
        let sq = theta_set(&ring("exists y (y*y = w0)"), &fam, &[vec![1, 2, 4]]).unwrap();
        assert_eq!(fam.labels(sq), ["a", "c"]);
    }

    #[test]
    fn boole_examples() {
        assert!(eval_boole(&boole("v0 = 1"), 3, &[0b111]).unwrap());
        assert!(eval_boole(&boole("Fin(v0)"), 3, &[0b010]).unwrap());
        assert!(eval_boole(&boole("exists v1 (v1 sub v0 and not v1 = v0)"), 3, &[0b001]).unwrap());
        assert!(eval_boole(&boole("v0 = 0"), 17, &[0]).is_err());
    }

    #[test]
    fn generalized_examples() {
        let fam = z235();
        let g = |psi: &str, theta: &str| GeneralizedSentence::new(boole(psi), vec![ring(theta)], 1).unwrap();
        let f = [vec![1, 1, 1]];
        assert!(gen_product_eval(&g("v0 = 1", "w0 = w0"), &fam, &f).unwrap());
        assert!(!gen_product_eval(&g("v0 = 0", "w0 = w0"), &fam, &f).unwrap());
        assert!(gen_product_eval(&g("not (v0 = 1)", "w0 + w0 = 0"), &fam, &f).unwrap());
        assert!(GeneralizedSentence::new(boole("v1 = 0"), vec![ring("w0 = 0")], 1).is_err());
        assert!(GeneralizedSentence::new(boole("v0 = 0"), vec![ring("w1 = 0")], 1).is_err());
    }

    #[test]
    fn preservation_examples() {
        let fam = z235();
        let g = GeneralizedSentence::new(boole("v0 = 1"), vec![ring("forall y (exists z y * z = 1 or y = 0)")], 0).unwrap();
        let checks = vec![(g, Vec::new())];
        let report = preservation_check(&fam, &fam, &checks, None).unwrap();
        assert!(matches!(report, PreservationReport::Checked { agreed: 1, .. }));
        let z4 = FiniteFamily::new(vec!["a".into()], vec![Stalk::zmod(4).unwrap()]).unwrap();
        let dual = FiniteFamily::new(vec!["a".into()], vec![Stalk::residue(2, 2, 1, 2, &[-2, 0, 1]).unwrap()]).unwrap();
        assert_eq!(
            preservation_check(&z4, &dual, &checks, None).unwrap(),
            PreservationReport::PreconditionFailed { index: "a".into() }
        );
    }
}
