use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::mod_poly::ModPoly;
use super::parse::parse_poly;
use super::PolyError;

/// Univariate polynomial with arbitrary-precision integer coefficients,
/// constant term first. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, exp: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact division of every coefficient by `d`; `None` if some coefficient
    /// is not divisible.
    pub fn div_exact_scalar(&self, d: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(out))
    }

    /// Quotient and remainder by a monic divisor: `self = q * divisor + r`.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        if !divisor.is_monic() {
            return Err(PolyError::NotMonic);
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Composition `self(x + shift)`.
    pub fn shift(&self, shift: &BigInt) -> Self {
        let lin = IntPoly::new(vec![shift.clone(), BigInt::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, c| &(&acc * &lin) + &IntPoly::constant(c.clone()))
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest absolute coefficient (zero for the zero polynomial).
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn reduce(&self, modulus: &BigInt) -> Result<ModPoly, PolyError> {
        ModPoly::new(modulus.clone(), self.coeffs.clone())
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(
            (0..n)
                .map(|i| self.coeff(i) + rhs.coeff(i))
                .collect(),
        )
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(
            (0..n)
                .map(|i| self.coeff(i) - rhs.coeff(i))
                .collect(),
        )
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl FromStr for IntPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(parse_poly(s)?)
    }
}

/// Writes `c_n*x^n + ... + c_0` in the same grammar the parser accepts.
pub(crate) fn write_terms<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl DoubleEndedIterator<Item = (usize, T, bool)>,
) -> fmt::Result {
    // items: (exponent, |coefficient|, negative)
    let mut first = true;
    for (exp, mag, neg) in terms.rev() {
        let mag = mag.to_string();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = mag == "1";
        match exp {
            0 => write!(f, "{mag}")?,
            1 if unit => write!(f, "x")?,
            1 => write!(f, "{mag}*x")?,
            _ if unit => write!(f, "x^{exp}")?,
            _ => write!(f, "{mag}*x^{exp}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.abs(), c.is_negative())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p("x + 1") * &p("x - 1"), p("x^2 - 1"));
    }

    #[test]
    fn divmod_by_x() {
        let (q, r) = p("x^2 - 2").div_rem_monic(&p("x")).unwrap();
        assert_eq!(q, p("x"));
        assert_eq!(r, IntPoly::from_i64s(&[-2]));
    }

    #[test]
    fn non_monic_divisor_rejected() {
        assert!(matches!(
            p("x^2").div_rem_monic(&p("2*x")),
            Err(PolyError::NotMonic)
        ));
    }

    #[test]
    fn display_round_trip() {
        for s in ["x^7 - 7*x + 3", "-x^2 + 5", "0", "x", "-3*x^4 + x^3 - 1"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn shift_matches_substitution() {
        let f = p("x^2 - 3");
        assert_eq!(f.shift(&BigInt::from(-1)), p("x^2 - 2*x - 2"));
    }

    #[test]
    fn trailing_zeros_stripped() {
        let f = IntPoly::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(f.degree(), Some(1));
        assert!(IntPoly::from_i64s(&[0, 0]).is_zero());
    }
}
