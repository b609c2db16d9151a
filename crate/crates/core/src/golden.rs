//! The built-in golden suite: fixed checks over the corpus fields with
//! their expected values, rendered as a pass/fail table.

use std::fmt::Write;

use num_bigint::BigInt;

use crate::corpus::{corpus_field, corpus_fields, EQUIVALENT_PAIR};
use crate::exactpoly::ModPoly;
use crate::invariants::{
    adele_iso_verdict, aq_distinguisher, arithmetic_equiv, degree_via_split_prime, finite_ring_isomorphic,
    keating_bound, primes_up_to, residue_ring_construct, signature, zeta_good_coefficients, AdeleIsoKind,
    ArithEquivKind, InvError, DEFAULT_RING_ORDER_CAP,
};
use crate::splitting::{decompose, NumberField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenRow {
    pub check: String,
    pub subject: String,
    pub expected: String,
    pub got: String,
}

impl GoldenRow {
    pub fn pass(&self) -> bool {
        self.expected == self.got
    }
}

fn row(check: &str, subject: &str, expected: impl ToString, got: impl ToString) -> GoldenRow {
    GoldenRow {
        check: check.to_string(),
        subject: subject.to_string(),
        expected: expected.to_string(),
        got: got.to_string(),
    }
}

fn field(label: &str) -> NumberField {
    corpus_field(label).expect("corpus label")
}

fn identity_rows(out: &mut Vec<GoldenRow>) -> Result<(), InvError> {
    for k in corpus_fields() {
        let n = k.degree() as u32;
        let mut bad = Vec::new();
        let mut undetermined = 0;
        for p in primes_up_to(200) {
            match decompose(&k, p, None)?.degree_sum() {
                Some(s) if s != n => bad.push(p),
                Some(_) => {}
                None => undetermined += 1,
            }
        }
        let got = if bad.is_empty() {
            format!("sum e*f = {n}")
        } else {
            format!("fails at {bad:?}")
        };
        let subject = format!("{} (p<=200, {} undet.)", k.name(), undetermined);
        out.push(row("fundamental identity", &subject, format!("sum e*f = {n}"), got));
    }
    Ok(())
}

fn signature_rows(out: &mut Vec<GoldenRow>) {
    for (label, expected) in [("sqrt2", "(2,0)"), ("gaussian", "(0,1)"), ("cubic-23", "(1,1)")] {
        out.push(row("signature", label, expected, signature(&field(label))));
    }
    for k in corpus_fields() {
        let s = signature(&k);
        out.push(row("r1 + 2 r2 = n", &k.name(), k.degree(), s.r1 + 2 * s.r2));
    }
}

fn distinguisher_rows(out: &mut Vec<GoldenRow>) -> Result<(), InvError> {
    for k in corpus_fields() {
        let found = !aq_distinguisher(&k, 100)?.is_empty();
        let expected = if k.degree() == 1 { "nonempty" } else { "empty" };
        out.push(row("Q distinguisher (B=100)", &k.name(), expected, if found { "nonempty" } else { "empty" }));
    }
    Ok(())
}

fn degree_rows(out: &mut Vec<GoldenRow>) -> Result<(), InvError> {
    for k in corpus_fields() {
        let got = match degree_via_split_prime(&k, 1000) {
            Ok(d) => d.degree.to_string(),
            Err(InvError::NotFound(_)) => "no split prime".to_string(),
            Err(e) => return Err(e),
        };
        out.push(row("degree via split prime", &k.name(), k.degree(), got));
    }
    let w = degree_via_split_prime(&field("sqrt2"), 1000)?.witness;
    out.push(row("split-prime witness", "sqrt2", 7, w));
    Ok(())
}

fn equiv_rows(out: &mut Vec<GoldenRow>) -> Result<(), InvError> {
    let v = arithmetic_equiv(&field("sqrt2"), &field("sqrt3"), 100)?;
    let got = match v.kind {
        ArithEquivKind::NotEquivalent { witness_prime, type_k, type_l } => {
            format!("witness {witness_prime}: {type_k} vs {type_l}")
        }
        ArithEquivKind::EquivalentUpToBound { .. } => "equivalent".to_string(),
    };
    out.push(row("arithmetic equivalence", "sqrt2 / sqrt3", "witness 7: (1,1) vs (2)", got));

    let (a, b) = (EQUIVALENT_PAIR[0].field(), EQUIVALENT_PAIR[1].field());
    let v = arithmetic_equiv(&a, &b, 200)?;
    out.push(row(
        "arithmetic equivalence",
        "septic pair (B=200)",
        "equivalent",
        if v.is_equivalent() { "equivalent" } else { "not equivalent" },
    ));
    let (ba, bb) = (a.bad_primes().unwrap_or_default(), b.bad_primes().unwrap_or_default());
    let agree = zeta_good_coefficients(&a, 100, &bb)? == zeta_good_coefficients(&b, 100, &ba)?;
    out.push(row(
        "good Euler products (N=100)",
        "septic pair",
        "agree",
        if agree { "agree" } else { "differ" },
    ));
    Ok(())
}

fn keating_rows(out: &mut Vec<GoldenRow>) {
    out.push(row("keating bound", "(3,1)", 2, keating_bound(3, 1)));
    out.push(row("keating bound", "(2,2)", 5, keating_bound(2, 2)));
    for p in primes_up_to(100) {
        out.push(row("keating bound", &format!("({p},1)"), 2, keating_bound(p, 1)));
    }
}

fn adele_kind(k: &NumberField, l: &NumberField) -> Result<String, InvError> {
    Ok(match adele_iso_verdict(k, l, 1000, None)?.kind {
        AdeleIsoKind::NotIsomorphic { .. } => "NotIsomorphic",
        AdeleIsoKind::IsomorphicCertified { .. } => "IsomorphicCertified",
        AdeleIsoKind::IsomorphicModuloAssumption { .. } => "IsomorphicModuloAssumption",
        AdeleIsoKind::Undetermined { .. } => "Undetermined",
    }
    .to_string())
}

fn adele_rows(out: &mut Vec<GoldenRow>) -> Result<(), InvError> {
    for label in ["sqrt2", "cubic-23", "cbrt2"] {
        let k = field(label);
        out.push(row("adele isomorphism", &format!("{label} / {label}"), "IsomorphicCertified", adele_kind(&k, &k)?));
    }
    out.push(row(
        "adele isomorphism",
        "sqrt2 / sqrt3",
        "NotIsomorphic",
        adele_kind(&field("sqrt2"), &field("sqrt3"))?,
    ));
    out.push(row(
        "adele isomorphism",
        "sqrt2 / gaussian",
        "NotIsomorphic",
        adele_kind(&field("sqrt2"), &field("gaussian"))?,
    ));
    Ok(())
}

fn ring_rows(out: &mut Vec<GoldenRow>) -> Result<(), InvError> {
    let t2 = ModPoly::new(BigInt::from(16), [-2, 0, 1].into_iter().map(BigInt::from).collect())
        .map_err(|e| InvError::Unsupported(e.to_string()))?;
    let rings = [
        ("Z/4", residue_ring_construct(2, 1, 1, None, 2)?),
        ("F4", residue_ring_construct(2, 1, 2, None, 1)?),
        ("F2[t]/t^2", residue_ring_construct(2, 2, 1, Some(&t2), 2)?),
    ];
    for (i, (na, a)) in rings.iter().enumerate() {
        for (nb, b) in &rings[i..] {
            let expected = if na == nb { "isomorphic" } else { "not isomorphic" };
            let got = if finite_ring_isomorphic(a, b, DEFAULT_RING_ORDER_CAP)? { "isomorphic" } else { "not isomorphic" };
            out.push(row("finite ring isomorphism", &format!("{na} ~ {nb}"), expected, got));
        }
    }
    Ok(())
}

/// Runs every golden check in a fixed order.
pub fn golden_suite() -> Result<Vec<GoldenRow>, InvError> {
    let mut out = Vec::new();
    identity_rows(&mut out)?;
    signature_rows(&mut out);
    distinguisher_rows(&mut out)?;
    degree_rows(&mut out)?;
    equiv_rows(&mut out)?;
    keating_rows(&mut out);
    adele_rows(&mut out)?;
    ring_rows(&mut out)?;
    Ok(out)
}

/// Fixed-width table with a summary line.
pub fn render_golden(rows: &[GoldenRow]) -> String {
    let w = |f: fn(&GoldenRow) -> &str| rows.iter().map(|r| f(r).len()).max().unwrap_or(0);
    let (wc, ws, we, wg) = (w(|r| &r.check), w(|r| &r.subject), w(|r| &r.expected), w(|r| &r.got));
    let mut s = String::new();
    let _ = writeln!(s, "{:wc$}  {:ws$}  {:we$}  {:wg$}  result", "check", "subject", "expected", "got");
    for r in rows {
        let verdict = if r.pass() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{:wc$}  {:ws$}  {:we$}  {:wg$}  {verdict}", r.check, r.subject, r.expected, r.got);
    }
    let passed = rows.iter().filter(|r| r.pass()).count();
    let _ = writeln!(s, "{passed} passed, {} failed", rows.len() - passed);
    s
}
