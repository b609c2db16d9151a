//! Syntax of ring and Boolean-algebra formulas.
//!
//! Precedence, loosest first: `->` (right associative), `or`, `and`, then
//! the prefix forms `not`, `exists x`, `forall x`, which bind to the
//! smallest formula that follows. Terms use `+ - *` over the ring and
//! `| & ~` (join, meet, complement) over the Boolean algebra.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingAtom(pub Term, pub Term);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolTerm {
    Var(String),
    Zero,
    One,
    Join(Box<BoolTerm>, Box<BoolTerm>),
    Meet(Box<BoolTerm>, Box<BoolTerm>),
    Compl(Box<BoolTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BooleAtom {
    Eq(BoolTerm, BoolTerm),
    Sub(BoolTerm, BoolTerm),
    Fin(BoolTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula<A> {
    Atom(A),
    Not(Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
    Exists(String, Box<Formula<A>>),
    Forall(String, Box<Formula<A>>),
}

pub type RingFormula = Formula<RingAtom>;
pub type BooleFormula = Formula<BooleAtom>;

/// Variables of an atom, with the prefix letter that marks indexed free
/// variables (`w` for rings, `v` for Boolean algebras).
pub trait AtomSyntax: Sized + fmt::Display {
    const INDEXED: char;
    fn parse(p: &mut Parser) -> Result<Self, ParseError>;
    fn vars(&self, out: &mut Vec<String>);
}

impl<A: AtomSyntax> Formula<A> {
    /// Free variables, sorted and deduplicated.
    pub fn free_vars(&self) -> Vec<String> {
        fn go<A: AtomSyntax>(f: &Formula<A>, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                Formula::Atom(a) => {
                    let mut vs = Vec::new();
                    a.vars(&mut vs);
                    out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
                }
                Formula::Not(x) => go(x, bound, out),
                Formula::And(x, y) | Formula::Or(x, y) | Formula::Implies(x, y) => {
                    go(x, bound, out);
                    go(y, bound, out);
                }
                Formula::Exists(v, x) | Formula::Forall(v, x) => {
                    bound.push(v.clone());
                    go(x, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// One more than the largest index of a free indexed variable.
    pub fn arity(&self) -> usize {
        self.free_vars()
            .iter()
            .filter_map(|v| var_index(v, A::INDEXED))
            .map(|i| i + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(x) => x.quantifier_depth(),
            Formula::And(x, y) | Formula::Or(x, y) | Formula::Implies(x, y) => {
                x.quantifier_depth().max(y.quantifier_depth())
            }
            Formula::Exists(_, x) | Formula::Forall(_, x) => 1 + x.quantifier_depth(),
        }
    }

    pub fn not(x: Self) -> Self {
        Formula::Not(Box::new(x))
    }

    pub fn and(x: Self, y: Self) -> Self {
        Formula::And(Box::new(x), Box::new(y))
    }

    pub fn or(x: Self, y: Self) -> Self {
        Formula::Or(Box::new(x), Box::new(y))
    }
}

/// `Some(i)` for a variable named `<prefix><i>`.
pub fn var_index(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || (rest.len() > 1 && rest.starts_with('0')) {
        return None;
    }
    rest.parse().ok()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Sub(a, b) => write!(f, "({a} - {b})"),
            Term::Mul(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

impl fmt::Display for RingAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.0, self.1)
    }
}

impl fmt::Display for BoolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolTerm::Var(v) => write!(f, "{v}"),
            BoolTerm::Zero => write!(f, "0"),
            BoolTerm::One => write!(f, "1"),
            BoolTerm::Join(a, b) => write!(f, "({a} | {b})"),
            BoolTerm::Meet(a, b) => write!(f, "({a} & {b})"),
            BoolTerm::Compl(a) => write!(f, "~{a}"),
        }
    }
}

impl fmt::Display for BooleAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BooleAtom::Eq(a, b) => write!(f, "{a} = {b}"),
            BooleAtom::Sub(a, b) => write!(f, "{a} sub {b}"),
            BooleAtom::Fin(a) => write!(f, "Fin({a})"),
        }
    }
}

impl<A: fmt::Display> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => write!(f, "not {x}"),
            Formula::And(x, y) => write!(f, "({x} and {y})"),
            Formula::Or(x, y) => write!(f, "({x} or {y})"),
            Formula::Implies(x, y) => write!(f, "({x} -> {y})"),
            Formula::Exists(v, x) => write!(f, "exists {v} {x}"),
            Formula::Forall(v, x) => write!(f, "forall {v} {x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Zero,
    One,
    Sym(&'static str),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Zero => write!(f, "`0`"),
            Tok::One => write!(f, "`1`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: [&str; 11] = ["->", "+", "-", "*", "=", "(", ")", "&", "|", "~", ","];
const KEYWORDS: [&str; 7] = ["not", "and", "or", "exists", "forall", "sub", "Fin"];

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            out.push((Tok::Ident(chars[i..j].iter().collect()), start.0, start.1));
            col += j - i;
            i = j;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let tok = match chars[i..j].iter().collect::<String>().as_str() {
                "0" => Tok::Zero,
                "1" => Tok::One,
                other => {
                    return Err(ParseError {
                        line,
                        column: col,
                        message: format!("only the constants 0 and 1 are allowed, found `{other}`"),
                    })
                }
            };
            out.push((tok, start.0, start.1));
            col += j - i;
            i = j;
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                return Err(ParseError { line, column: col, message: format!("unexpected character `{c}`") });
            };
            out.push((Tok::Sym(sym), start.0, start.1));
            i += sym.len();
            col += sym.len();
        }
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

pub struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (_, line, column) = &self.toks[self.pos];
        ParseError { line: *line, column: *column, message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(t) if *t == s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == k) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// A variable whose name starts with one of `prefixes`.
    fn variable(&mut self, prefixes: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && s.starts_with(|c| prefixes.contains(c)) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => {
                let names: Vec<String> = prefixes.chars().map(|c| format!("{c}…")).collect();
                Err(self.unexpected(&format!("a variable ({})", names.join(", "))))
            }
        }
    }

    fn formula<A: AtomSyntax>(&mut self) -> Result<Formula<A>, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat_sym("->") {
            Ok(Formula::Implies(Box::new(lhs), Box::new(self.formula()?)))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction<A: AtomSyntax>(&mut self) -> Result<Formula<A>, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat_keyword("or") {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction<A: AtomSyntax>(&mut self) -> Result<Formula<A>, ParseError> {
        let mut acc = self.unary()?;
        while self.eat_keyword("and") {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary<A: AtomSyntax>(&mut self) -> Result<Formula<A>, ParseError> {
        if self.eat_keyword("not") {
            return Ok(Formula::not(self.unary()?));
        }
        for (kw, exists) in [("exists", true), ("forall", false)] {
            if self.eat_keyword(kw) {
                let v = self.variable(if A::INDEXED == 'w' { "wyz" } else { "v" })?;
                let body = Box::new(self.unary()?);
                return Ok(if exists { Formula::Exists(v, body) } else { Formula::Forall(v, body) });
            }
        }
        if *self.peek() == Tok::Sym("(") {
            let save = self.pos;
            let atom_err = match A::parse(self) {
                Ok(a) => return Ok(Formula::Atom(a)),
                Err(e) => (self.pos, e),
            };
            self.pos = save;
            self.bump();
            let inner = self.formula().and_then(|f| self.expect_sym(")").map(|_| f));
            return inner.map_err(|e| {
                let formula_pos = self.pos;
                if atom_err.0 > formula_pos { atom_err.1 } else { e }
            });
        }
        Ok(Formula::Atom(A::parse(self)?))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.product()?;
        loop {
            if self.eat_sym("+") {
                acc = Term::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat_sym("-") {
                acc = Term::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.factor()?;
        while self.eat_sym("*") {
            acc = Term::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(Term::One)
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            _ => Ok(Term::Var(self.variable("wyz")?)),
        }
    }

    fn bterm(&mut self) -> Result<BoolTerm, ParseError> {
        let mut acc = self.bmeet()?;
        while self.eat_sym("|") {
            acc = BoolTerm::Join(Box::new(acc), Box::new(self.bmeet()?));
        }
        Ok(acc)
    }

    fn bmeet(&mut self) -> Result<BoolTerm, ParseError> {
        let mut acc = self.bfactor()?;
        while self.eat_sym("&") {
            acc = BoolTerm::Meet(Box::new(acc), Box::new(self.bfactor()?));
        }
        Ok(acc)
    }

    fn bfactor(&mut self) -> Result<BoolTerm, ParseError> {
        match self.peek() {
            Tok::Zero => {
                self.bump();
                Ok(BoolTerm::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(BoolTerm::One)
            }
            Tok::Sym("~") => {
                self.bump();
                Ok(BoolTerm::Compl(Box::new(self.bfactor()?)))
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.bterm()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            _ => Ok(BoolTerm::Var(self.variable("v")?)),
        }
    }
}

impl AtomSyntax for RingAtom {
    const INDEXED: char = 'w';

    fn parse(p: &mut Parser) -> Result<Self, ParseError> {
        let lhs = p.term()?;
        p.expect_sym("=")?;
        Ok(RingAtom(lhs, p.term()?))
    }

    fn vars(&self, out: &mut Vec<String>) {
        fn go(t: &Term, out: &mut Vec<String>) {
            match t {
                Term::Var(v) => out.push(v.clone()),
                Term::Zero | Term::One => {}
                Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(&self.0, out);
        go(&self.1, out);
    }
}

impl AtomSyntax for BooleAtom {
    const INDEXED: char = 'v';

    fn parse(p: &mut Parser) -> Result<Self, ParseError> {
        if p.eat_keyword("Fin") {
            p.expect_sym("(")?;
            let t = p.bterm()?;
            p.expect_sym(")")?;
            return Ok(BooleAtom::Fin(t));
        }
        let lhs = p.bterm()?;
        if p.eat_sym("=") {
            Ok(BooleAtom::Eq(lhs, p.bterm()?))
        } else if p.eat_keyword("sub") {
            Ok(BooleAtom::Sub(lhs, p.bterm()?))
        } else {
            Err(p.unexpected("`=` or `sub`"))
        }
    }

    fn vars(&self, out: &mut Vec<String>) {
        fn go(t: &BoolTerm, out: &mut Vec<String>) {
            match t {
                BoolTerm::Var(v) => out.push(v.clone()),
                BoolTerm::Zero | BoolTerm::One => {}
                BoolTerm::Join(a, b) | BoolTerm::Meet(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                BoolTerm::Compl(a) => go(a, out),
            }
        }
        match self {
            BooleAtom::Eq(a, b) | BooleAtom::Sub(a, b) => {
                go(a, out);
                go(b, out);
            }
            BooleAtom::Fin(a) => go(a, out),
        }
    }
}

fn parse_formula<A: AtomSyntax>(text: &str) -> Result<Formula<A>, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

pub fn parse_ring_formula(text: &str) -> Result<RingFormula, ParseError> {
    parse_formula(text)
}

pub fn parse_boole_formula(text: &str) -> Result<BooleFormula, ParseError> {
    parse_formula(text)
}
