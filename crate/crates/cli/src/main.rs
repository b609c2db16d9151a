//! `adelic`: prime decomposition, splitting spectra, adelic invariants and
//! generalized-product evaluation from the command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adelic_core::fv::{
    gen_product_eval, parse_boole_formula, parse_ring_formula, theta_set, FiniteFamily, FvError,
    GeneralizedSentence, GlobalElement,
};
use adelic_core::golden::{golden_suite, render_golden};
use adelic_core::invariants::{
    adele_iso_verdict_with_cap, aq_distinguisher, arithmetic_equiv, degree_via_split_prime, signature,
    spectrum, AdeleIsoKind, ArithEquivKind, Certification, InvError, LocalMatch, NotIsoReason, VerdictJson,
    DEFAULT_BOUND, DEFAULT_RING_ORDER_CAP,
};
use adelic_core::splitting::{decompose, NumberField, SplitError, Status};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "adelic", version, about = "Number-field splitting, adelic invariants and generalized products")]
struct Cli {
    /// Run the built-in golden suite and print a pass/fail table.
    #[arg(long)]
    corpus: bool,
    /// Prime bound B for sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND, value_parser = clap::value_parser!(u64).range(2..))]
    bound: u64,
    /// Starting p-adic precision at bad primes (default: chosen per prime).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    precision: Option<u32>,
    /// Largest residue ring searched for an isomorphism.
    #[arg(long, global = true, default_value_t = DEFAULT_RING_ORDER_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    ring_order_cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decomposition of a prime in a field.
    Split {
        field: PathBuf,
        #[arg(long)]
        prime: u64,
    },
    /// Primes up to the bound grouped by splitting type.
    Spectrum { field: PathBuf },
    /// Degree, signature and distinguisher summary.
    Invariants { field: PathBuf },
    /// Arithmetic-equivalence verdict up to the bound.
    Equiv { field1: PathBuf, field2: PathBuf },
    /// Adele-ring isomorphism verdict.
    AdeleIso { field1: PathBuf, field2: PathBuf },
    /// Evaluate Ψ(θ_0, …) on a finite family at a tuple of global elements.
    FvEval {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        psi: String,
        /// Ring formulas θ_0, θ_1, … in order.
        #[arg(long = "theta")]
        thetas: Vec<String>,
        /// A global element as comma-separated stalk values in index order;
        /// repeat for w0, w1, ….
        #[arg(long = "element")]
        elements: Vec<String>,
    },
}

/// Failure classes with their exit codes.
enum Failure {
    Parse(String),
    Undetermined(String),
    Cap(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Undetermined(_) => 3,
            Failure::Cap(_) => 4,
            Failure::Io(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Undetermined(m) | Failure::Cap(m) | Failure::Io(m) => m,
        }
    }
}

impl From<InvError> for Failure {
    fn from(e: InvError) -> Self {
        match e {
            InvError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            InvError::UnresolvedPrime(_) | InvError::Split(SplitError::Undetermined(_)) => {
                Failure::Undetermined(e.to_string())
            }
            _ => Failure::Parse(e.to_string()),
        }
    }
}

impl From<SplitError> for Failure {
    fn from(e: SplitError) -> Self {
        InvError::Split(e).into()
    }
}

impl From<FvError> for Failure {
    fn from(e: FvError) -> Self {
        match e {
            FvError::StalkTooLarge { .. } | FvError::IndexTooLarge { .. } | FvError::QuantifierDepth { .. } => {
                Failure::Cap(e.to_string())
            }
            _ => Failure::Parse(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// A field file holds one polynomial line and an optional `label:` line;
/// blank lines and `#` comments are ignored.
fn load_field(path: &Path) -> Result<NumberField, Failure> {
    let text = read(path)?;
    let mut label = None;
    let mut poly = None;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("label:") {
            label = Some(rest.trim().to_string());
        } else if poly.replace(line.to_string()).is_some() {
            return Err(Failure::Parse(format!("{}: more than one polynomial", path.display())));
        }
    }
    let poly = poly.ok_or_else(|| Failure::Parse(format!("{}: no polynomial", path.display())))?;
    let f = poly
        .parse()
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    NumberField::new(f, label).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn list(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

fn cmd_split(cli: &Cli, path: &Path, p: u64) -> Result<String, Failure> {
    let k = load_field(path)?;
    let d = decompose(&k, p, cli.precision)?;
    let out = match cli.format {
        Format::Json => to_json(&json!({
            "field": k.name(),
            "degree": k.degree(),
            "decomposition": d,
            "degree_sum": d.degree_sum(),
        })),
        Format::Text => {
            let mut s = format!("{d}\n");
            if let Some(sum) = d.degree_sum() {
                let ok = if sum as usize == k.degree() { "ok" } else { "MISMATCH" };
                let _ = writeln!(s, "sum e_i f_i = {sum}, [K:Q] = {} ({ok})", k.degree());
            }
            s
        }
    };
    match &d.status {
        Status::Undetermined(r) => {
            print!("{out}");
            Err(Failure::Undetermined(format!("p = {p}: {r}")))
        }
        Status::Resolved(_) => Ok(out),
    }
}

fn cmd_spectrum(cli: &Cli, path: &Path) -> Result<String, Failure> {
    let k = load_field(path)?;
    let sp = spectrum(&k, cli.bound)?;
    Ok(match cli.format {
        Format::Json => to_json(&sp),
        Format::Text => {
            let mut s = format!("{} (B = {})\n", sp.field, sp.bound);
            for (t, primes) in &sp.entries {
                let _ = writeln!(s, "{t} [{}]: {}", primes.len(), list(primes));
            }
            if !sp.excluded.is_empty() {
                let _ = writeln!(s, "undetermined: {}", list(&sp.excluded));
            }
            s
        }
    })
}

fn cmd_invariants(cli: &Cli, path: &Path) -> Result<String, Failure> {
    let k = load_field(path)?;
    let sig = signature(&k);
    let split = match degree_via_split_prime(&k, cli.bound) {
        Ok(d) => Some(d),
        Err(InvError::NotFound(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let dist = aq_distinguisher(&k, cli.bound)?;
    let bad = k.bad_primes();
    Ok(match cli.format {
        Format::Json => to_json(&json!({
            "field": k.name(),
            "polynomial": k.min_poly().to_string(),
            "degree": k.degree(),
            "irreducibility": k.irreducibility(),
            "discriminant": k.poly_disc().to_string(),
            "bad_primes": bad,
            "signature": sig,
            "bound": cli.bound,
            "degree_via_split_prime": split,
            "aq_distinguisher": dist,
        })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "field: {}", k.name());
            let _ = writeln!(s, "polynomial: {}", k.min_poly());
            let _ = writeln!(s, "degree: {}", k.degree());
            let _ = writeln!(s, "irreducibility: {:?}", k.irreducibility());
            let _ = writeln!(s, "discriminant: {}", k.poly_disc());
            match &bad {
                Some(b) => {
                    let _ = writeln!(s, "bad primes: {}", if b.is_empty() { "none".into() } else { list(b) });
                }
                None => {
                    let _ = writeln!(s, "bad primes: discriminant not factored");
                }
            }
            let _ = writeln!(s, "signature: {sig}");
            match split {
                Some(d) => {
                    let _ = writeln!(s, "degree via split prime (B = {}): {} (witness {})", cli.bound, d.degree, d.witness);
                }
                None => {
                    let _ = writeln!(s, "degree via split prime (B = {}): no completely split prime", cli.bound);
                }
            }
            let shown: Vec<u64> = dist.iter().copied().take(10).collect();
            let more = if dist.len() > shown.len() { ", ..." } else { "" };
            let _ = writeln!(s, "Q distinguisher (B = {}): {} primes [{}{more}]", cli.bound, dist.len(), list(&shown));
            s
        }
    })
}

fn cmd_equiv(cli: &Cli, a: &Path, b: &Path) -> Result<String, Failure> {
    let (k, l) = (load_field(a)?, load_field(b)?);
    let v = arithmetic_equiv(&k, &l, cli.bound)?;
    Ok(match cli.format {
        Format::Json => to_json(&VerdictJson::from_equiv(&v, cli.bound)),
        Format::Text => {
            let mut s = format!("{} vs {}\n", k.name(), l.name());
            match &v.kind {
                ArithEquivKind::NotEquivalent { witness_prime, type_k, type_l } => {
                    let _ = writeln!(s, "NotEquivalent: p = {witness_prime}, types {type_k} vs {type_l}");
                }
                ArithEquivKind::EquivalentUpToBound { bound, compared_count, excluded_primes } => {
                    let _ = writeln!(s, "EquivalentUpToBound: B = {bound}, {compared_count} primes compared");
                    let _ = writeln!(s, "excluded: {}", list(excluded_primes));
                }
            }
            let _ = writeln!(s, "degree check: {}", if v.degree_check { "agree" } else { "differ" });
            s
        }
    })
}

fn match_line(m: &LocalMatch) -> String {
    let by = match m.certification {
        Certification::Ring { s } => format!("residue rings mod pi^{s}"),
        Certification::Identity => "identical polynomials".to_string(),
        Certification::Assumption => "assumption".to_string(),
    };
    format!("p = {}: (e,f) = ({},{}) #{} <-> #{} by {by}", m.prime, m.e, m.f, m.index_k, m.index_l)
}

fn cmd_adele(cli: &Cli, a: &Path, b: &Path) -> Result<String, Failure> {
    let (k, l) = (load_field(a)?, load_field(b)?);
    let v = adele_iso_verdict_with_cap(&k, &l, cli.bound, cli.precision, cli.ring_order_cap)?;
    let out = match cli.format {
        Format::Json => to_json(&VerdictJson::from_adele(&v)),
        Format::Text => {
            let mut s = format!("{} vs {} (B = {})\n", k.name(), l.name(), v.bound);
            match &v.kind {
                AdeleIsoKind::NotIsomorphic { reason } => {
                    let why = match reason {
                        NotIsoReason::ArithmeticWitness { prime, type_k, type_l } => {
                            format!("splitting types differ at p = {prime}: {type_k} vs {type_l}")
                        }
                        NotIsoReason::Signature { k, l } => format!("signatures differ: {k} vs {l}"),
                        NotIsoReason::LocalMismatch { prime, k, l } => {
                            format!("local (e,f) multisets differ at p = {prime}: {k:?} vs {l:?}")
                        }
                        NotIsoReason::ResidueRings { prime, e, f, s } => {
                            format!("no matching of residue rings mod pi^{s} at p = {prime} for (e,f) = ({e},{f})")
                        }
                    };
                    let _ = writeln!(s, "NotIsomorphic: {why}");
                }
                AdeleIsoKind::IsomorphicCertified { matching } => {
                    let _ = writeln!(s, "IsomorphicCertified");
                    for m in matching {
                        let _ = writeln!(s, "  {}", match_line(m));
                    }
                }
                AdeleIsoKind::IsomorphicModuloAssumption { matching, unmatched, assumption_note } => {
                    let _ = writeln!(s, "IsomorphicModuloAssumption: {} of {} local pairs assumed", unmatched.len(), matching.len());
                    let _ = writeln!(s, "  assumption: {assumption_note}");
                    for m in matching {
                        let _ = writeln!(s, "  {}", match_line(m));
                    }
                }
                AdeleIsoKind::Undetermined { reason } => {
                    let _ = writeln!(s, "Undetermined: {reason}");
                }
            }
            if !v.excluded_primes.is_empty() {
                let _ = writeln!(s, "excluded: {}", list(&v.excluded_primes));
            }
            s
        }
    };
    if let AdeleIsoKind::Undetermined { reason } = &v.kind {
        print!("{out}");
        return Err(Failure::Undetermined(reason.clone()));
    }
    Ok(out)
}

fn parse_element(text: &str, n: usize) -> Result<GlobalElement, Failure> {
    let v = text
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Parse(format!("element `{text}`: {e}")))?;
    if v.len() != n {
        return Err(Failure::Parse(format!("element `{text}` has {} entries; the family has {n} stalks", v.len())));
    }
    Ok(v)
}

fn cmd_fv(cli: &Cli, family: &Path, psi: &str, thetas: &[String], elements: &[String]) -> Result<String, Failure> {
    let fam = FiniteFamily::from_json(&read(family)?)?;
    let psi = parse_boole_formula(psi).map_err(|e| Failure::Parse(format!("psi: {e}")))?;
    let thetas = thetas
        .iter()
        .enumerate()
        .map(|(i, t)| parse_ring_formula(t).map_err(|e| Failure::Parse(format!("theta {i}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let tuple = elements
        .iter()
        .map(|e| parse_element(e, fam.len()))
        .collect::<Result<Vec<_>, _>>()?;
    let g = GeneralizedSentence::new(psi, thetas, tuple.len())?;
    let sets = g
        .thetas()
        .iter()
        .map(|t| theta_set(t, &fam, &tuple).map(|s| fam.labels(s)))
        .collect::<Result<Vec<_>, _>>()?;
    let value = gen_product_eval(&g, &fam, &tuple)?;
    Ok(match cli.format {
        Format::Json => to_json(&json!({ "value": value, "theta_sets": sets })),
        Format::Text => {
            let mut s = String::new();
            for (i, set) in sets.iter().enumerate() {
                let _ = writeln!(s, "[[theta{i}]] = {{{}}}", set.join(", "));
            }
            let _ = writeln!(s, "{value}");
            s
        }
    })
}

fn cmd_corpus(cli: &Cli) -> Result<String, Failure> {
    let rows = golden_suite()?;
    Ok(match cli.format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| json!({"check": r.check, "subject": r.subject, "expected": r.expected, "got": r.got, "pass": r.pass()}))
                .collect();
            to_json(&v)
        }
        Format::Text => render_golden(&rows),
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    if cli.corpus {
        return cmd_corpus(cli);
    }
    match &cli.command {
        Some(Command::Split { field, prime }) => cmd_split(cli, field, *prime),
        Some(Command::Spectrum { field }) => cmd_spectrum(cli, field),
        Some(Command::Invariants { field }) => cmd_invariants(cli, field),
        Some(Command::Equiv { field1, field2 }) => cmd_equiv(cli, field1, field2),
        Some(Command::AdeleIso { field1, field2 }) => cmd_adele(cli, field1, field2),
        Some(Command::FvEval { family, psi, thetas, elements }) => cmd_fv(cli, family, psi, thetas, elements),
        None => Err(Failure::Parse("no subcommand given (see --help)".into())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
