//! Built-in test fields.

use crate::splitting::NumberField;

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub label: &'static str,
    pub poly: &'static str,
}

const fn entry(label: &'static str, poly: &'static str) -> CorpusEntry {
    CorpusEntry { label, poly }
}

/// Two degree-7 fields with the same splitting types at all good primes
/// (Galois closure with group PSL(2,7), the two non-conjugate index-7
/// subgroups). They are not isomorphic.
pub const EQUIVALENT_PAIR: [CorpusEntry; 2] = [
    entry("septic-a", "x^7 - 7*x + 3"),
    entry("septic-b", "x^7 + 14*x^4 - 42*x^2 - 21*x + 9"),
];

pub const CORPUS: [CorpusEntry; 26] = [
    entry("rational", "x"),
    entry("sqrt2", "x^2 - 2"),
    entry("sqrt3", "x^2 - 3"),
    entry("gaussian", "x^2 + 1"),
    entry("sqrt5", "x^2 - 5"),
    entry("sqrt-2", "x^2 + 2"),
    entry("cubic-23", "x^3 - x - 1"),
    entry("cbrt2", "x^3 - 2"),
    entry("cyclic-cubic", "x^3 - 3*x + 1"),
    entry("index-cubic", "x^3 - x^2 - 2*x - 8"),
    entry("zeta8", "x^4 + 1"),
    entry("fourth-root2", "x^4 - 2"),
    entry("quartic-s4", "x^4 - x - 1"),
    entry("zeta5", "x^4 + x^3 + x^2 + x + 1"),
    entry("sqrt2-sqrt3", "x^4 - 10*x^2 + 1"),
    entry("fifth-root2", "x^5 - 2"),
    entry("quintic-f20", "x^5 - 5*x + 12"),
    entry("zeta7", "x^6 + x^5 + x^4 + x^3 + x^2 + x + 1"),
    entry("zeta9", "x^6 + x^3 + 1"),
    entry("sixth-root2", "x^6 - 2"),
    EQUIVALENT_PAIR[0],
    EQUIVALENT_PAIR[1],
    entry("zeta15", "x^8 - x^7 + x^5 - x^4 + x^3 - x + 1"),
    entry("zeta16", "x^8 + 1"),
    entry("zeta24", "x^8 - x^4 + 1"),
    entry("eighth-root2", "x^8 - 2"),
];

impl CorpusEntry {
    pub fn field(&self) -> NumberField {
        NumberField::new(
            self.poly.parse().expect("corpus polynomial parses"),
            Some(self.label.to_string()),
        )
        .expect("corpus polynomial defines a field")
    }
}

pub fn corpus_fields() -> Vec<NumberField> {
    CORPUS.iter().map(CorpusEntry::field).collect()
}

pub fn corpus_field(label: &str) -> Option<NumberField> {
    CORPUS.iter().find(|e| e.label == label).map(CorpusEntry::field)
}
