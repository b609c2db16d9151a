use serde::Serialize;

use crate::splitting::{decompose, good_prime_test, splitting_type, NumberField, SplittingType};

use super::{primes_up_to, InvError};

/// The Euler factor ∏_j (1 − p^{−f_j s})^{−1} at p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaLocalFactor {
    pub prime: u64,
    pub residue_degrees: SplittingType,
}

impl ZetaLocalFactor {
    /// Numbers of ideals of norm p^k for k = 0..=kmax: the coefficients of
    /// ∏_j (1 − T^{f_j})^{−1}.
    pub fn ideal_counts(&self, kmax: usize) -> Vec<u64> {
        let mut c = vec![0u64; kmax + 1];
        c[0] = 1;
        for &f in &self.residue_degrees.0 {
            let f = f as usize;
            // multiply by 1 + T^f + T^{2f} + ...
            for k in f..=kmax {
                c[k] += c[k - f];
            }
        }
        c
    }
}

pub fn zeta_local_factor(k: &NumberField, p: u64) -> Result<ZetaLocalFactor, InvError> {
    let d = decompose(k, p, None)?;
    let t = splitting_type(&d).map_err(|_| InvError::UnresolvedPrime(p))?;
    Ok(ZetaLocalFactor {
        prime: p,
        residue_degrees: t,
    })
}

fn euler_coefficients(
    k: &NumberField,
    n: usize,
    skip: impl Fn(u64) -> bool,
) -> Result<Vec<u64>, InvError> {
    let mut a = vec![0u64; n + 1];
    if n == 0 {
        return Ok(Vec::new());
    }
    a[1] = 1;
    for p in primes_up_to(n as u64) {
        if skip(p) {
            continue;
        }
        let pu = p as usize;
        let mut kmax = 0;
        let mut pk = 1usize;
        while pk * pu <= n {
            pk *= pu;
            kmax += 1;
        }
        let counts = zeta_local_factor(k, p)?.ideal_counts(kmax);
        let mut next = vec![0u64; n + 1];
        for m in 1..=n {
            if a[m] == 0 {
                continue;
            }
            let mut q = m;
            for &c in &counts {
                next[q] += a[m] * c;
                match q.checked_mul(pu) {
                    Some(v) if v <= n => q = v,
                    _ => break,
                }
            }
        }
        a = next;
    }
    Ok(a[1..].to_vec())
}

/// a_1, …, a_N with a_n the number of integral ideals of norm n.
pub fn zeta_partial_coefficients(k: &NumberField, n: usize) -> Result<Vec<u64>, InvError> {
    euler_coefficients(k, n, |_| false)
}

/// Coefficients of the Euler product over good primes only, also omitting
/// the primes in `omit`.
pub fn zeta_good_coefficients(
    k: &NumberField,
    n: usize,
    omit: &[u64],
) -> Result<Vec<u64>, InvError> {
    euler_coefficients(k, n, |p| !good_prime_test(k, p) || omit.contains(&p))
}
