use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::int_poly::IntPoly;
use super::PolyError;

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return r;
    }
    let lead = &b[db];
    for k in (0..=r.len() - 1 - db).rev() {
        let c = &r[k + db] / lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &c * bj;
        }
    }
    r.truncate(db);
    trim(&mut r);
    r
}

/// Resultant of two integer polynomials, by the Euclidean remainder sequence
/// over the rationals:
/// `res(a, b) = (-1)^(deg a * deg b) * lc(b)^(deg a - deg r) * res(b, r)`.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> Result<BigInt, PolyError> {
    if a.is_zero() || b.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut x = a.to_rational();
    let mut y = b.to_rational();
    let mut acc = BigRational::one();
    loop {
        let dx = x.len() - 1;
        let dy = y.len() - 1;
        if dy == 0 {
            acc *= num_traits::pow(y[0].clone(), dx);
            break;
        }
        if dx == 0 {
            acc *= num_traits::pow(x[0].clone(), dy);
            break;
        }
        let r = rem_q(&x, &y);
        if r.is_empty() {
            return Ok(BigInt::zero());
        }
        let dr = r.len() - 1;
        if (dx * dy) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(y[dy].clone(), dx - dr);
        x = y;
        y = r;
    }
    debug_assert!(acc.is_integer());
    Ok(acc.to_integer())
}

/// Discriminant of a monic polynomial: `(-1)^(n(n-1)/2) * res(f, f')`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt, PolyError> {
    let n = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if !f.is_monic() {
        return Err(PolyError::NotMonic);
    }
    if n == 0 {
        return Err(PolyError::ZeroPolynomial);
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = resultant(f, &f.derivative())?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

/// Exponent of `p` in a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn quadratic_discriminants() {
        assert_eq!(discriminant(&p("x^2 - 2")).unwrap(), BigInt::from(8));
        assert_eq!(discriminant(&p("x^2 - 3")).unwrap(), BigInt::from(12));
        assert_eq!(discriminant(&p("x^2 + 1")).unwrap(), BigInt::from(-4));
    }

    #[test]
    fn zero_when_repeated_root() {
        assert!(discriminant(&p("(x - 1)^2*(x + 2)")).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        assert!(discriminant(&IntPoly::zero()).is_err());
        assert!(discriminant(&p("2*x^2 + 1")).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(-24), 2), 3);
        assert_eq!(valuation(&BigInt::from(7), 2), 0);
    }
}
