//! Counting integers `n <= x` whose prime factors all exceed `y` and lie in
//! a fixed residue class.

use rayon::prelude::*;
use serde::Serialize;

use crate::ap_constants::ApConstants;
use crate::arith::totient;
use crate::error::{Error, Result};
use crate::sieve::{ApTarget, PrimeTable};
use crate::special::gamma_fn;

/// Whether `n = 1` (empty factorization) is counted.
pub const COUNT_ONE: bool = true;

/// Default exponent `A` in the error envelope `(log log x)^{A+3} / log x`.
pub const DEFAULT_ENVELOPE_A: f64 = 1.0;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PliableQuery {
    pub x: u64,
    pub y: f64,
    pub target: ApTarget,
}

impl PliableQuery {
    pub fn new(x: u64, y: f64, target: ApTarget) -> Result<Self> {
        if x < 1 {
            return Err(Error::InvalidArgument("x must be at least 1".into()));
        }
        if !(y >= 1.0) {
            return Err(Error::InvalidArgument(format!("y = {y} must be at least 1")));
        }
        Ok(Self { x, y, target })
    }
}

fn admissible_primes(table: &PrimeTable, q: &PliableQuery) -> Result<Vec<u64>> {
    if q.x > table.limit() {
        return Err(Error::BeyondTable { value: q.x as f64, limit: table.limit() });
    }
    Ok(table
        .primes_up_to(q.x)
        .filter(|&p| p as f64 > q.y && q.target.contains(p))
        .collect())
}

/// Number of `n` with `current * n <= x` (n > 1) built from `primes[start..]`
/// with nondecreasing factors.
fn count_from(primes: &[u64], start: usize, current: u64, x: u64) -> u64 {
    let room = x / current;
    let tail = &primes[start..];
    let leaves = tail.partition_point(|&p| p <= room);
    let mut total = leaves as u64;
    for (i, &p) in tail[..leaves].iter().enumerate() {
        if room / p < p {
            break;
        }
        total += count_from(primes, start + i, current * p, x);
    }
    total
}

/// `Phi(x, y; q, a)`.
pub fn phi_count(table: &PrimeTable, query: &PliableQuery) -> Result<u64> {
    let primes = admissible_primes(table, query)?;
    let x = query.x;
    let rest: u64 = (0..primes.len())
        .into_par_iter()
        .map(|i| {
            let p = primes[i];
            1 + if x / p >= p { count_from(&primes, i, p, x) } else { 0 }
        })
        .sum();
    Ok(rest + COUNT_ONE as u64)
}

/// The counted integers themselves, ascending.
pub fn phi_members(table: &PrimeTable, query: &PliableQuery) -> Result<Vec<u64>> {
    fn walk(primes: &[u64], start: usize, current: u64, x: u64, out: &mut Vec<u64>) {
        for (i, &p) in primes[start..].iter().enumerate() {
            if x / current < p {
                break;
            }
            let n = current * p;
            out.push(n);
            walk(primes, start + i, n, x, out);
        }
    }
    let primes = admissible_primes(table, query)?;
    let mut out = Vec::new();
    if COUNT_ONE {
        out.push(1);
    }
    walk(&primes, 0, 1, query.x, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// `x (log x)^{1/phi - 1} G(q, a) / Gamma(1/phi) prod_{p <= y, p = a} (1 - 1/p)`.
pub fn main_term(query: &PliableQuery, constants: &ApConstants, table: &PrimeTable) -> Result<f64> {
    if query.x < 3 {
        return Err(Error::InvalidArgument(format!("main term needs x >= 3, got {}", query.x)));
    }
    if (constants.target.q(), constants.target.a()) != (query.target.q(), query.target.a()) {
        return Err(Error::InvalidArgument("constants belong to a different progression".into()));
    }
    let ymax = query.y.floor() as u64;
    if ymax > table.limit() {
        return Err(Error::BeyondTable { value: query.y, limit: table.limit() });
    }
    let log_prod: f64 = table
        .primes_up_to(ymax)
        .filter(|&p| query.target.contains(p))
        .map(|p| (-1.0 / p as f64).ln_1p())
        .sum();
    let inv_phi = 1.0 / totient(query.target.q()) as f64;
    let x = query.x as f64;
    Ok(x * x.ln().powf(inv_phi - 1.0) * constants.big_g / gamma_fn(inv_phi)? * log_prod.exp())
}

#[derive(Debug, Clone, Serialize)]
pub struct PliableRow {
    pub query: PliableQuery,
    pub exact: u64,
    pub main_term: f64,
    pub ratio: f64,
    pub envelope: f64,
}

pub fn envelope(x: f64, a_exp: f64) -> f64 {
    x.ln().ln().powf(a_exp + 3.0) / x.ln()
}

/// One row per query; `constants_for` supplies `G(q, a)` for each target.
pub fn pliable_report(
    table: &PrimeTable,
    queries: &[PliableQuery],
    a_exp: f64,
    mut constants_for: impl FnMut(ApTarget) -> Result<ApConstants>,
) -> Result<Vec<PliableRow>> {
    queries
        .iter()
        .map(|q| {
            let exact = phi_count(table, q)?;
            let c = constants_for(q.target)?;
            let main = main_term(q, &c, table)?;
            Ok(PliableRow {
                query: *q,
                exact,
                main_term: main,
                ratio: exact as f64 / main,
                envelope: envelope(q.x as f64, a_exp),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_table;

    fn query(x: u64, y: f64, q: u64, a: u64) -> PliableQuery {
        PliableQuery::new(x, y, ApTarget::new(q, a).unwrap()).unwrap()
    }

    #[test]
    fn small_examples() {
        let table = build_table(1000).unwrap();
        assert_eq!(phi_count(&table, &query(10, 1.0, 4, 1)).unwrap(), 2);
        assert_eq!(phi_members(&table, &query(10, 1.0, 4, 1)).unwrap(), vec![1, 5]);
        assert_eq!(phi_count(&table, &query(30, 1.0, 3, 1)).unwrap(), 4);
        assert_eq!(phi_members(&table, &query(30, 1.0, 3, 1)).unwrap(), vec![1, 7, 13, 19]);
        assert_eq!(phi_count(&table, &query(12, 1.0, 7, 6)).unwrap(), 1);
        assert_eq!(phi_count(&table, &query(1, 1.0, 1, 1)).unwrap(), 1);
    }

    #[test]
    fn all_integers_when_unrestricted() {
        let table = build_table(100_000).unwrap();
        for x in [1, 2, 3, 10, 97, 1000, 65_536, 100_000] {
            assert_eq!(phi_count(&table, &query(x, 1.0, 1, 1)).unwrap(), x);
        }
    }

    #[test]
    fn count_matches_members() {
        let table = build_table(20_000).unwrap();
        for (q, a, y) in [(1, 1, 3.0), (4, 3, 1.0), (5, 1, 10.0), (6, 5, 2.0)] {
            let qu = query(20_000, y, q, a);
            assert_eq!(phi_count(&table, &qu).unwrap(), phi_members(&table, &qu).unwrap().len() as u64);
        }
    }

    #[test]
    fn main_term_trivial_case() {
        let table = build_table(1000).unwrap();
        let c = crate::ap_constants::ap_constants(&table, ApTarget::new(1, 1).unwrap(), 1000).unwrap();
        let m = main_term(&query(500, 1.0, 1, 1), &c, &table).unwrap();
        assert!((m - 500.0).abs() < 1e-9);
        assert!(main_term(&query(2, 1.0, 1, 1), &c, &table).is_err());
    }

    #[test]
    fn sieve_factor_for_y() {
        let table = build_table(1000).unwrap();
        let c = crate::ap_constants::ap_constants(&table, ApTarget::new(4, 1).unwrap(), 1000).unwrap();
        let m1 = main_term(&query(1000, 1.0, 4, 1), &c, &table).unwrap();
        let m10 = main_term(&query(1000, 10.0, 4, 1), &c, &table).unwrap();
        assert!((m10 / m1 - 0.8).abs() < 1e-14);
    }
}
