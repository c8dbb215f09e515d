//! Prime sums and products over a progression compared with their
//! predicted main terms.
//!
//! Integrals of the step function `pi(t; q, a)` are taken exactly as sums
//! over primes, so the partial-summation identities hold to rounding and the
//! only approximation left is `li` (adaptive quadrature).

use serde::Serialize;

use crate::ap_constants::{big_g_star, g_star, ApConstants};
use crate::arith::{totient, CompensatedSum};
use crate::error::{Error, Result};
use crate::sieve::{error_term, li, ApTarget, PrimeTable};
use crate::special::EULER_GAMMA;

/// Observed versus predicted values at one `x`.
#[derive(Debug, Clone, Serialize)]
pub struct MertensRow {
    pub x: f64,
    pub target: ApTarget,
    pub sum_recip: f64,
    pub product_log: f64,
    pub predicted_sum: f64,
    pub predicted_product_log: f64,
    pub residual_sum: f64,
    pub residual_product: f64,
    /// Size of the `O((x log x)^-1)` term in the product comparison.
    pub tail_bound: f64,
}

impl MertensRow {
    /// `prod (1 - 1/p)^-1` divided by its predicted value.
    pub fn product_ratio(&self) -> f64 {
        self.residual_product.exp()
    }
}

/// Running sums over `p <= x`, `p = a (mod q)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProgressionSnapshot {
    pub x: u64,
    pub count: u64,
    pub sum_recip: f64,
    /// `sum log (1 - 1/p)^-1`
    pub product_log: f64,
}

fn check_x(table: &PrimeTable, x: f64) -> Result<u64> {
    if !(x >= 2.0) {
        return Err(Error::BelowTwo(x));
    }
    if x.floor() > table.limit() as f64 {
        return Err(Error::BeyondTable { value: x, limit: table.limit() });
    }
    Ok(x.floor() as u64)
}

/// One pass over the primes, reporting the sums at every grid point
/// (grid must be sorted ascending).
pub fn scan(table: &PrimeTable, ap: ApTarget, grid: &[u64]) -> Result<Vec<ProgressionSnapshot>> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("grid must be ascending".into()));
    }
    let Some(&last) = grid.last() else {
        return Ok(Vec::new());
    };
    check_x(table, grid[0] as f64)?;
    check_x(table, last as f64)?;
    let mut out = Vec::with_capacity(grid.len());
    let mut next = 0;
    let mut count = 0u64;
    let mut recip = CompensatedSum::new();
    let mut logs = CompensatedSum::new();
    let emit = |upto: u64, count: u64, recip: &CompensatedSum, logs: &CompensatedSum, out: &mut Vec<_>| {
        out.push(ProgressionSnapshot {
            x: upto,
            count,
            sum_recip: recip.value(),
            product_log: logs.value(),
        })
    };
    for p in table.primes_up_to(last) {
        while next < grid.len() && grid[next] < p {
            emit(grid[next], count, &recip, &logs, &mut out);
            next += 1;
        }
        if ap.contains(p) {
            count += 1;
            let inv = 1.0 / p as f64;
            recip += inv;
            logs += -(-inv).ln_1p();
        }
    }
    while next < grid.len() {
        emit(grid[next], count, &recip, &logs, &mut out);
        next += 1;
    }
    Ok(out)
}

fn snapshot(table: &PrimeTable, x: f64, ap: ApTarget) -> Result<ProgressionSnapshot> {
    let n = check_x(table, x)?;
    Ok(scan(table, ap, &[n])?[0])
}

pub fn partial_sum_recip(table: &PrimeTable, x: f64, ap: ApTarget) -> Result<f64> {
    Ok(snapshot(table, x, ap)?.sum_recip)
}

/// `|sum 1/p - (pi(x; q, a)/x + sum (1/p - 1/x))|`: the partial-summation
/// identity with the integral of the step function written out exactly.
pub fn abel_identity_residual(table: &PrimeTable, x: f64, ap: ApTarget) -> Result<f64> {
    let n = check_x(table, x)?;
    let mut lhs = CompensatedSum::new();
    let mut integral = CompensatedSum::new();
    let mut count = 0u64;
    let inv_x = 1.0 / x;
    for p in table.primes_up_to(n).filter(|&p| ap.contains(p)) {
        let inv = 1.0 / p as f64;
        lhs += inv;
        integral += inv - inv_x;
        count += 1;
    }
    let mut rhs = integral;
    rhs += count as f64 * inv_x;
    Ok((lhs.value() - rhs.value()).abs())
}

/// `int_2^X t^-2 E(t; q, a) dt`, with the prime part summed exactly and
/// `int t^-2 li(t) dt = -li(t)/t + log log t`.
pub fn error_integral(table: &PrimeTable, big_x: f64, ap: ApTarget) -> Result<f64> {
    let snap = snapshot(table, big_x, ap)?;
    let phi = totient(ap.q()) as f64;
    let mut acc = CompensatedSum::new();
    acc += snap.sum_recip;
    acc += -(snap.count as f64) / big_x;
    acc += li(big_x)? / (phi * big_x);
    acc += -big_x.ln().ln() / phi;
    acc += 2f64.ln().ln() / phi;
    Ok(acc.value())
}

/// Every term of the exact decomposition of `sum_{p <= x} 1/p` into the
/// log-log main term, the constant, `E(x)/x` and the tail integral, with
/// the infinite tail replaced by data on `(x, x_tail]`.
#[derive(Debug, Clone, Serialize)]
pub struct Proposition33 {
    pub x: f64,
    pub x_tail: f64,
    pub target: ApTarget,
    pub sum_recip: f64,
    pub loglog_term: f64,
    pub error_over_x: f64,
    /// `int_x^{x_tail} t^-2 E(t) dt`
    pub tail_integral: f64,
    /// `int_2^{x_tail} t^-2 E(t) dt - log log 2 / phi`, the finite-data
    /// surrogate for `g(q, a)`.
    pub g_finite: f64,
    /// `sum_recip - (loglog + g_finite + E(x)/x - tail_integral)`; zero up to rounding.
    pub closure_residual: f64,
    pub g_reference: Option<f64>,
    /// Same as `closure_residual` with `g_reference` in place of `g_finite`,
    /// i.e. the unobservable `int_{x_tail}^inf t^-2 E(t) dt`.
    pub reference_residual: Option<f64>,
}

pub fn proposition_33_report(
    table: &PrimeTable,
    x: f64,
    x_tail: f64,
    ap: ApTarget,
    g_reference: Option<f64>,
) -> Result<Proposition33> {
    if x > x_tail {
        return Err(Error::InvalidArgument(format!("x = {x} exceeds x_tail = {x_tail}")));
    }
    let phi = totient(ap.q()) as f64;
    let sum = partial_sum_recip(table, x, ap)?;
    let i_x = error_integral(table, x, ap)?;
    let i_tail = error_integral(table, x_tail, ap)?;
    let loglog = x.ln().ln() / phi;
    let e_over_x = error_term(table, x, ap)? / x;
    let tail_integral = i_tail - i_x;
    let g_finite = i_tail - 2f64.ln().ln() / phi;
    let predict = |g: f64| {
        let mut acc = CompensatedSum::new();
        acc += loglog;
        acc += g;
        acc += e_over_x;
        acc += -tail_integral;
        acc.value()
    };
    Ok(Proposition33 {
        x,
        x_tail,
        target: ap,
        sum_recip: sum,
        loglog_term: loglog,
        error_over_x: e_over_x,
        tail_integral,
        g_finite,
        closure_residual: sum - predict(g_finite),
        g_reference,
        reference_residual: g_reference.map(|g| sum - predict(g)),
    })
}

/// Sum and product at `x` against `phi^-1 log log x + g` and
/// `phi^-1 (gamma + log log x) + log G`.
pub fn product_report(table: &PrimeTable, x: f64, ap: ApTarget, constants: &ApConstants) -> Result<MertensRow> {
    let snap = snapshot(table, x, ap)?;
    Ok(row_from_snapshot(x, ap, &snap, constants))
}

pub fn row_from_snapshot(x: f64, ap: ApTarget, snap: &ProgressionSnapshot, constants: &ApConstants) -> MertensRow {
    let phi = totient(ap.q()) as f64;
    let loglog = x.ln().ln();
    let predicted_sum = loglog / phi + constants.g;
    let predicted_product_log = (EULER_GAMMA + loglog) / phi + constants.big_g.ln();
    MertensRow {
        x,
        target: ap,
        sum_recip: snap.sum_recip,
        product_log: snap.product_log,
        predicted_sum,
        predicted_product_log,
        residual_sum: snap.sum_recip - predicted_sum,
        residual_product: snap.product_log - predicted_product_log,
        tail_bound: 2.0 / (x * x.ln()),
    }
}

/// Empirical look at the large-modulus bounds: the sum is `g*` plus
/// `O(phi^-1 log log(3x/q))` and the product lies between `G*` and
/// `G* exp(c phi^-1 log log(3x/q))`.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem51Probe {
    pub x: f64,
    pub target: ApTarget,
    pub sum_recip: f64,
    pub product: f64,
    pub g_star: f64,
    pub big_g_star: f64,
    /// `G* <= product` (relative slack 1e-12 for rounding).
    pub holds_lower: bool,
    /// Smallest `c` making the upper product bound hold here.
    pub upper_c: f64,
    /// `|sum - g*| phi / log log(3x/q)` when `q < x`.
    pub sum_constant: Option<f64>,
}

pub fn theorem51_probe(table: &PrimeTable, x: f64, ap: ApTarget) -> Result<Theorem51Probe> {
    let snap = snapshot(table, x, ap)?;
    let phi = totient(ap.q()) as f64;
    let gs = g_star(ap);
    let bgs = big_g_star(ap);
    let product = snap.product_log.exp();
    let holds_lower = product >= bgs * (1.0 - 1e-12);
    let q = ap.q() as f64;
    let (upper_c, sum_constant) = if q < x {
        let scale = (3.0 * x / q).ln().ln();
        let c = (phi * (product / bgs).ln() / scale).max(0.0);
        (c, Some((snap.sum_recip - gs).abs() * phi / scale))
    } else {
        (if product <= bgs * (1.0 + 1e-12) { 0.0 } else { f64::INFINITY }, None)
    };
    Ok(Theorem51Probe {
        x,
        target: ap,
        sum_recip: snap.sum_recip,
        product,
        g_star: gs,
        big_g_star: bgs,
        holds_lower,
        upper_c,
        sum_constant,
    })
}
