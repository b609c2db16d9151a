use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::int_poly::IntPoly;
use super::PolyError;

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() > db {
        for k in (0..=r.len() - 1 - db).rev() {
            let c = &r[k + db] / &b[db];
            for (j, bj) in b.iter().enumerate() {
                r[k + j] = &r[k + j] - &c * bj;
            }
        }
        r.truncate(db);
    }
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    r
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn sign(c: &BigRational) -> i8 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots of a squarefree polynomial, from the sign
/// variations of its Sturm sequence at -inf and +inf.
pub fn sturm_real_roots(f: &IntPoly) -> Result<usize, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut seq = vec![f.to_rational(), f.derivative().to_rational()];
    if seq[1].is_empty() {
        return Ok(0);
    }
    loop {
        let n = seq.len();
        let r = rem_q(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    if seq.last().is_some_and(|g| g.len() > 1) {
        return Err(PolyError::NotSquarefree);
    }
    let at_pos_inf = sign_changes(seq.iter().map(|g| sign(g.last().unwrap())));
    let at_neg_inf = sign_changes(seq.iter().map(|g| {
        let s = sign(g.last().unwrap());
        if (g.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(at_neg_inf - at_pos_inf)
}
