//! Frobenius classes over the rationals for three families of Galois
//! extensions: cyclotomic fields, quadratic fields and the `S3` closure of
//! `x^3 - x - 1`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, gcd, is_prime_u64, mul_mod, pow_mod, prime_divisors, totient, CompensatedSum};
use crate::error::{Error, Result};
use crate::sieve::{li, PrimeTable};
use crate::special::{l_one_periodic, EULER_GAMMA};

/// Discriminant of `x^3 - x - 1`.
pub const CUBIC_DISCRIMINANT: i64 = -23;

const CUBIC_EXHAUSTIVE_BELOW: u64 = 1000;

pub const SPLIT: u64 = 0;
pub const INERT: u64 = 1;
pub const CUBIC_IDENTITY: u64 = 0;
pub const CUBIC_TRANSPOSITION: u64 = 1;
pub const CUBIC_THREE_CYCLE: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GaloisSetting {
    Cyclotomic(u64),
    Quadratic(i64),
    CubicS3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub id: u64,
    pub size: u64,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrobeniusOutcome {
    Class(u64),
    Ramified,
}

pub fn is_fundamental(d: i64) -> bool {
    let squarefree = |m: u64| factorize(m).iter().all(|&(_, k)| k == 1);
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

impl GaloisSetting {
    pub fn cyclotomic(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("cyclotomic modulus must be positive".into()));
        }
        Ok(Self::Cyclotomic(q))
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        Ok(Self::Quadratic(d))
    }

    pub fn group_order(&self) -> u64 {
        match *self {
            Self::Cyclotomic(q) => totient(q),
            Self::Quadratic(_) => 2,
            Self::CubicS3 => 6,
        }
    }

    pub fn classes(&self) -> Vec<ClassInfo> {
        let info = |id, size, label: &str| ClassInfo { id, size, label: label.to_string() };
        match *self {
            Self::Cyclotomic(q) => (1..=q)
                .filter(|&a| gcd(a, q) == 1)
                .map(|a| info(a % q.max(2), 1, &format!("{a} mod {q}")))
                .collect(),
            Self::Quadratic(_) => vec![info(SPLIT, 1, "split"), info(INERT, 1, "inert")],
            Self::CubicS3 => vec![
                info(CUBIC_IDENTITY, 1, "identity"),
                info(CUBIC_TRANSPOSITION, 3, "transposition"),
                info(CUBIC_THREE_CYCLE, 2, "3-cycle"),
            ],
        }
    }

    pub fn class(&self, id: u64) -> Result<ClassInfo> {
        self.classes()
            .into_iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::InvalidArgument(format!("no class {id} in {self}")))
    }

    /// Field discriminant; `None` for cyclotomic fields, whose excluded
    /// primes are the divisors of `q`.
    pub fn discriminant(&self) -> Option<i64> {
        match *self {
            Self::Cyclotomic(_) => None,
            Self::Quadratic(d) => Some(d),
            Self::CubicS3 => Some(CUBIC_DISCRIMINANT),
        }
    }

    /// Primes with no Frobenius class.
    pub fn ramified_primes(&self) -> Vec<u64> {
        match *self {
            Self::Cyclotomic(q) => prime_divisors(q),
            Self::Quadratic(d) => prime_divisors(d.unsigned_abs()),
            Self::CubicS3 => vec![23],
        }
    }

    fn class_position(&self, outcome: FrobeniusOutcome) -> Option<usize> {
        match (outcome, *self) {
            (FrobeniusOutcome::Ramified, _) => None,
            (FrobeniusOutcome::Class(a), Self::Cyclotomic(q)) => {
                let a = if q == 1 { 1 } else { a };
                Some((1..a).filter(|&b| gcd(b, q) == 1).count())
            }
            (FrobeniusOutcome::Class(id), _) => Some(id as usize),
        }
    }
}

impl fmt::Display for GaloisSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cyclotomic(q) => write!(f, "cyclo:{q}"),
            Self::Quadratic(d) => write!(f, "quad:{d}"),
            Self::CubicS3 => write!(f, "cubic-s3"),
        }
    }
}

impl FromStr for GaloisSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown setting '{s}'"));
        if s == "cubic-s3" {
            return Ok(Self::CubicS3);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "cyclo" => Self::cyclotomic(arg.parse().map_err(|_| bad())?),
            "quad" => Self::quadratic(arg.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return (a.unsigned_abs() == 1) as i32;
    }
    let two = |a: i64| match a.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    };
    let mut n = n;
    let mut t = 1;
    while n % 2 == 0 {
        n /= 2;
        t *= two(a);
    }
    if t == 0 {
        return 0;
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

type Cubic = [u64; 3];

// multiplication in F_p[x] / (x^3 - x - 1)
fn cubic_mul(u: &Cubic, v: &Cubic, p: u64) -> Cubic {
    let d = if p < 1 << 31 {
        // three products of residues below 2^31 fit in a u64
        let mut d = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                d[i + j] += u[i] * v[j];
            }
        }
        d.map(|c| c % p)
    } else {
        let mut d = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                d[i + j] = (d[i + j] + mul_mod(u[i], v[j], p)) % p;
            }
        }
        d
    };
    [(d[0] + d[3]) % p, (d[1] + d[3] + d[4]) % p, (d[2] + d[4]) % p]
}

fn x_pow_p(p: u64) -> Cubic {
    let mut acc: Cubic = [1, 0, 0];
    let mut base: Cubic = [0, 1, 0];
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = cubic_mul(&acc, &base, p);
        }
        base = cubic_mul(&base, &base, p);
        e >>= 1;
    }
    acc
}

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let lead_inv = pow_mod(*b.last().unwrap(), p - 2, p);
    while r.len() >= b.len() {
        let coef = mul_mod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(coef, bi, p)) % p;
        }
        r = poly_trim(r);
    }
    r
}

/// Number of distinct roots of `x^3 - x - 1` modulo the prime `p`.
pub fn cubic_root_count(p: u64) -> u32 {
    if p < CUBIC_EXHAUSTIVE_BELOW {
        return (0..p).filter(|&r| (r * r % p * r + 2 * p - r - 1) % p == 0).count() as u32;
    }
    let acc = x_pow_p(p);
    // x^p - x reduced mod f, then gcd with f
    let h = poly_trim(vec![acc[0], (acc[1] + p - 1) % p, acc[2]]);
    if h.is_empty() {
        return 3;
    }
    let mut a = vec![p - 1, p - 1, 0, 1];
    let mut b = h;
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    (a.len() - 1) as u32
}

/// Artin symbol of the prime `p`.
pub fn frobenius_class(setting: &GaloisSetting, p: u64) -> Result<FrobeniusOutcome> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(frobenius_unchecked(setting, p))
}

fn frobenius_unchecked(setting: &GaloisSetting, p: u64) -> FrobeniusOutcome {
    match *setting {
        GaloisSetting::Cyclotomic(q) => {
            if q > 1 && q % p == 0 {
                FrobeniusOutcome::Ramified
            } else {
                FrobeniusOutcome::Class(p % q.max(2))
            }
        }
        GaloisSetting::Quadratic(d) => match kronecker(d, p) {
            1 => FrobeniusOutcome::Class(SPLIT),
            -1 => FrobeniusOutcome::Class(INERT),
            _ => FrobeniusOutcome::Ramified,
        },
        GaloisSetting::CubicS3 => {
            if p == 23 {
                return FrobeniusOutcome::Ramified;
            }
            // Stickelberger: (disc / p) = -1 exactly when f has one linear factor
            if p >= CUBIC_EXHAUSTIVE_BELOW && kronecker(CUBIC_DISCRIMINANT, p) == -1 {
                return FrobeniusOutcome::Class(CUBIC_TRANSPOSITION);
            }
            FrobeniusOutcome::Class(match cubic_root_count(p) {
                3 => CUBIC_IDENTITY,
                1 => CUBIC_TRANSPOSITION,
                _ => CUBIC_THREE_CYCLE,
            })
        }
    }
}

fn check_t(table: &PrimeTable, t: f64) -> Result<u64> {
    if !(t >= 2.0) {
        return Err(Error::BelowTwo(t));
    }
    if t.floor() > table.limit() as f64 {
        return Err(Error::BeyondTable { value: t, limit: table.limit() });
    }
    Ok(t.floor() as u64)
}

/// Class position of every prime up to `x` (`u32::MAX` for ramified).
fn classify_all(table: &PrimeTable, setting: &GaloisSetting, x: u64) -> (Vec<u64>, Vec<u32>) {
    let primes: Vec<u64> = table.primes_up_to(x).collect();
    let pos = primes
        .par_iter()
        .map(|&p| {
            setting
                .class_position(frobenius_unchecked(setting, p))
                .map_or(u32::MAX, |i| i as u32)
        })
        .collect();
    (primes, pos)
}

pub fn pi_chebotarev(table: &PrimeTable, t: f64, setting: &GaloisSetting, class: u64) -> Result<u64> {
    let n = check_t(table, t)?;
    let target = setting.class_position(FrobeniusOutcome::Class(setting.class(class)?.id));
    Ok(table
        .primes_up_to(n)
        .filter(|&p| setting.class_position(frobenius_unchecked(setting, p)) == target)
        .count() as u64)
}

/// `pi(t; C) - (|C|/|G|) li(t)`.
pub fn chebotarev_error(table: &PrimeTable, t: f64, setting: &GaloisSetting, class: u64) -> Result<f64> {
    let size = setting.class(class)?.size as f64;
    let count = pi_chebotarev(table, t, setting, class)? as f64;
    Ok(count - size / setting.group_order() as f64 * li(t)?)
}

/// Per-class counts and sums at one grid point.
#[derive(Debug, Clone, Serialize)]
pub struct ClassSnapshot {
    pub x: u64,
    /// Indexed like `setting.classes()`.
    pub counts: Vec<u64>,
    pub sum_recip: Vec<f64>,
    pub product_log: Vec<f64>,
    pub ramified_sum: f64,
    pub ramified_count: u64,
    pub total_sum: f64,
    pub total_count: u64,
}

/// One pass over the primes up to the last grid point (ascending grid).
pub fn class_scan(table: &PrimeTable, setting: &GaloisSetting, grid: &[u64]) -> Result<Vec<ClassSnapshot>> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("grid must be ascending".into()));
    }
    let Some(&last) = grid.last() else {
        return Ok(Vec::new());
    };
    check_t(table, grid[0] as f64)?;
    check_t(table, last as f64)?;
    let k = setting.classes().len();
    let (primes, pos) = classify_all(table, setting, last);
    let mut counts = vec![0u64; k];
    let mut sums = vec![CompensatedSum::new(); k];
    let mut logs = vec![CompensatedSum::new(); k];
    let mut ram = CompensatedSum::new();
    let mut ram_count = 0;
    let mut total = CompensatedSum::new();
    let mut out = Vec::with_capacity(grid.len());
    let mut next = 0;
    let snap = |x, counts: &[u64], sums: &[CompensatedSum], logs: &[CompensatedSum], ram: &CompensatedSum, rc, total: &CompensatedSum| {
        ClassSnapshot {
            x,
            counts: counts.to_vec(),
            sum_recip: sums.iter().map(|s| s.value()).collect(),
            product_log: logs.iter().map(|s| s.value()).collect(),
            ramified_sum: ram.value(),
            ramified_count: rc,
            total_sum: total.value(),
            total_count: counts.iter().sum::<u64>() + rc,
        }
    };
    for (&p, &c) in primes.iter().zip(&pos) {
        while next < grid.len() && grid[next] < p {
            out.push(snap(grid[next], &counts, &sums, &logs, &ram, ram_count, &total));
            next += 1;
        }
        let inv = 1.0 / p as f64;
        total += inv;
        if c == u32::MAX {
            ram += inv;
            ram_count += 1;
        } else {
            counts[c as usize] += 1;
            sums[c as usize] += inv;
            logs[c as usize] += -(-inv).ln_1p();
        }
    }
    while next < grid.len() {
        out.push(snap(grid[next], &counts, &sums, &logs, &ram, ram_count, &total));
        next += 1;
    }
    Ok(out)
}

/// `|sum_C sum_{p in C} 1/p + sum_{p ramified} 1/p - sum_p 1/p|` up to `x`.
pub fn class_sum_residual(table: &PrimeTable, setting: &GaloisSetting, x: f64) -> Result<f64> {
    let n = check_t(table, x)?;
    Ok(partition_residual_from(&class_scan(table, setting, &[n])?[0]))
}

/// Least-squares slope of each class's `sum 1/p` against `log log x`.
pub fn mertens_slopes(table: &PrimeTable, setting: &GaloisSetting, grid: &[u64]) -> Result<Vec<f64>> {
    slopes_from(&class_scan(table, setting, grid)?)
}

pub fn slopes_from(snaps: &[ClassSnapshot]) -> Result<Vec<f64>> {
    if snaps.len() < 2 {
        return Err(Error::InvalidArgument("slope fit needs at least two grid points".into()));
    }
    let xs: Vec<f64> = snaps.iter().map(|s| (s.x as f64).ln().ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok((0..snaps[0].counts.len())
        .map(|c| {
            let ys: Vec<f64> = snaps.iter().map(|s| s.sum_recip[c]).collect();
            let my = ys.iter().sum::<f64>() / ys.len() as f64;
            xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx
        })
        .collect())
}

/// Partition residual of a single snapshot.
pub fn partition_residual_from(snap: &ClassSnapshot) -> f64 {
    let mut acc: CompensatedSum = snap.sum_recip.iter().copied().collect();
    acc += snap.ramified_sum;
    acc += -snap.total_sum;
    acc.value().abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    BruteForceEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChebotarevConstants {
    pub setting: GaloisSetting,
    pub class: ClassInfo,
    pub g: f64,
    pub big_g: f64,
    pub exactness: Exactness,
    pub script_l: Option<f64>,
    /// Prime cutoff of the correction sums (exact) or the data range (estimate).
    pub cutoff: u64,
    /// `1/P` for exact constants.
    pub tail_bound: Option<f64>,
    /// `|est(x) - est(x/10)|` for estimates.
    pub confidence: Option<f64>,
}

/// `L(1, chi_D)` from the digamma formula on the Kronecker character.
pub fn l_one_kronecker(d: i64) -> Result<f64> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(l_one_periodic(d.unsigned_abs(), |a| kronecker(d, a) as f64))
}

/// Exact `g` and `G` of a quadratic field class, with the prime-power
/// sums cut at `cutoff`.
pub fn g_quadratic_exact(table: &PrimeTable, d: i64, class: u64, cutoff: u64) -> Result<ChebotarevConstants> {
    let setting = GaloisSetting::quadratic(d)?;
    let info = setting.class(class)?;
    if cutoff > table.limit() {
        return Err(Error::BeyondTable { value: cutoff as f64, limit: table.limit() });
    }
    if cutoff < d.unsigned_abs() {
        return Err(Error::CutoffBelowModulus { cutoff, q: d.unsigned_abs() });
    }
    let l = l_one_kronecker(d)?;
    let ram: f64 = prime_divisors(d.unsigned_abs()).iter().map(|&p| 1.0 - 1.0 / p as f64).product();
    let sign = if class == SPLIT { 1.0 } else { -1.0 };
    let log_script_l = 0.5 * (ram.ln() + sign * l.ln());

    let mut correction = CompensatedSum::new();
    let mut own = CompensatedSum::new();
    for p in table.primes_up_to(cutoff) {
        let x = 1.0 / p as f64;
        let all_powers = -(-x).ln_1p() - x;
        match kronecker(d, p) {
            1 if class == SPLIT => {
                correction += all_powers;
                own += all_powers;
            }
            -1 if class == SPLIT => correction += -0.5 * (-x * x).ln_1p(),
            -1 => {
                correction += x.atanh() - x;
                own += all_powers;
            }
            _ => {}
        }
    }
    let g = EULER_GAMMA / 2.0 + log_script_l - correction.value();
    let big_g = (-EULER_GAMMA / 2.0 + g + own.value()).exp();
    Ok(ChebotarevConstants {
        setting,
        class: info,
        g,
        big_g,
        exactness: Exactness::Exact,
        script_l: Some(log_script_l.exp()),
        cutoff,
        tail_bound: Some(1.0 / cutoff as f64),
        confidence: None,
    })
}

/// `sum_{p <= x, Frob in C} 1/p - (|C|/|G|) log log x`, with `G` estimated
/// the same way from the product.
pub fn g_bruteforce_estimate(table: &PrimeTable, setting: &GaloisSetting, class: u64, x: f64) -> Result<ChebotarevConstants> {
    let n = check_t(table, x)?;
    let coarse = n / 10;
    let grid: Vec<u64> = if coarse >= 2 { vec![coarse, n] } else { vec![n] };
    estimate_from(setting, class, &class_scan(table, setting, &grid)?)
}

/// Estimate from the last snapshot, with the drift against a snapshot at
/// a tenth of its `x` when one is present.
pub fn estimate_from(setting: &GaloisSetting, class: u64, snaps: &[ClassSnapshot]) -> Result<ChebotarevConstants> {
    let info = setting.class(class)?;
    let c = setting.class_position(FrobeniusOutcome::Class(info.id)).unwrap();
    let density = info.size as f64 / setting.group_order() as f64;
    let est = |s: &ClassSnapshot| s.sum_recip[c] - density * (s.x as f64).ln().ln();
    let last = snaps.last().ok_or_else(|| Error::InvalidArgument("no snapshots".into()))?;
    let n = last.x;
    let previous = snaps.iter().find(|s| s.x == n / 10 && s.x >= 2);
    let g = est(last);
    let own = last.product_log[c] - last.sum_recip[c];
    Ok(ChebotarevConstants {
        setting: *setting,
        class: info,
        g,
        big_g: (-density * EULER_GAMMA + g + own).exp(),
        exactness: Exactness::BruteForceEstimate,
        script_l: None,
        cutoff: n,
        tail_bound: None,
        confidence: previous.map(|s| (g - est(s)).abs()),
    })
}

/// `(D, h, w, t, u)` rows, fundamental unit `(t + u sqrt D) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticField {
    pub d: i64,
    pub h: u64,
    pub w: u64,
    pub t: u64,
    pub u: u64,
}

const FIELD_TABLE: &str = include_str!("../data/quadratic_fields.txt");

pub fn quadratic_fields() -> Vec<QuadraticField> {
    FIELD_TABLE
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let int = |i: usize| f[i].parse::<u64>().expect("malformed field table");
            QuadraticField { d: f[0].parse().expect("malformed field table"), h: int(1), w: int(2), t: int(3), u: int(4) }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassNumberCheck {
    pub field: QuadraticField,
    pub l_value: f64,
    pub formula_value: f64,
    pub relative_residual: f64,
}

/// `L(1, chi_D)` against `2 pi h / (w sqrt|D|)` or `2 h log eps / sqrt D`.
pub fn class_number_crosscheck(d: i64) -> Result<ClassNumberCheck> {
    let field = quadratic_fields().into_iter().find(|f| f.d == d).ok_or(Error::NotInTable(d))?;
    let l_value = l_one_kronecker(d)?;
    let root = (d.unsigned_abs() as f64).sqrt();
    let formula_value = if d < 0 {
        2.0 * std::f64::consts::PI * field.h as f64 / (field.w as f64 * root)
    } else {
        let eps = (field.t as f64 + field.u as f64 * root) / 2.0;
        2.0 * field.h as f64 * eps.ln() / root
    };
    Ok(ClassNumberCheck {
        field,
        l_value,
        formula_value,
        relative_residual: ((l_value - formula_value) / formula_value).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_table;

    #[test]
    fn kronecker_against_euler_criterion() {
        for p in (3..10_000u64).filter(|&p| is_prime_u64(p)) {
            for a in [-7i64, -4, -3, -1, 2, 5, 8, 12, 13, 1000, -999] {
                let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let euler = if r == 0 { 0 } else if r == 1 { 1 } else { -1 };
                assert_eq!(kronecker(a, p), euler, "({a}/{p})");
            }
        }
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(8, 4), 0);
        assert_eq!(kronecker(-1, 1), 1);
    }

    #[test]
    fn cubic_roots_fast_path_matches_exhaustive() {
        for p in (1000..6000u64).filter(|&p| is_prime_u64(p)) {
            let brute = (0..p).filter(|&r| (r * r % p * r + 2 * p - r - 1) % p == 0).count() as u32;
            assert_eq!(cubic_root_count(p), brute, "p = {p}");
        }
    }

    #[test]
    fn discriminant_shortcut_agrees_with_root_count() {
        for p in (1000..200_000u64).filter(|&p| is_prime_u64(p)) {
            let k = kronecker(CUBIC_DISCRIMINANT, p);
            assert_eq!(k == -1, cubic_root_count(p) == 1, "p = {p}");
        }
        for p in [2_147_483_659u64, 1_099_511_627_791] {
            assert!(is_prime_u64(p));
            let k = kronecker(CUBIC_DISCRIMINANT, p);
            assert_eq!(k == -1, cubic_root_count(p) == 1, "p = {p}");
        }
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_class(&GaloisSetting::Quadratic(-4), 5).unwrap(), FrobeniusOutcome::Class(SPLIT));
        assert_eq!(frobenius_class(&GaloisSetting::CubicS3, 23).unwrap(), FrobeniusOutcome::Ramified);
        assert_eq!(frobenius_class(&GaloisSetting::CubicS3, 2).unwrap(), FrobeniusOutcome::Class(CUBIC_THREE_CYCLE));
        assert_eq!(frobenius_class(&GaloisSetting::Cyclotomic(12), 3).unwrap(), FrobeniusOutcome::Ramified);
        assert!(frobenius_class(&GaloisSetting::CubicS3, 21).is_err());
    }

    #[test]
    fn setting_invariants() {
        let settings = [
            GaloisSetting::Cyclotomic(1),
            GaloisSetting::Cyclotomic(12),
            GaloisSetting::Cyclotomic(7),
            GaloisSetting::Quadratic(-4),
            GaloisSetting::Quadratic(5),
            GaloisSetting::CubicS3,
        ];
        for s in settings {
            assert_eq!(s.classes().iter().map(|c| c.size).sum::<u64>(), s.group_order(), "{s}");
            if let Some(d) = s.discriminant() {
                assert_eq!(s.ramified_primes(), prime_divisors(d.unsigned_abs()));
            }
            assert_eq!(s.to_string().parse::<GaloisSetting>().unwrap(), s);
        }
        assert!("quad:-24".parse::<GaloisSetting>().is_ok());
        assert!("quad:-12".parse::<GaloisSetting>().is_err());
        assert!("quad:-5".parse::<GaloisSetting>().is_err());
        assert!("nope".parse::<GaloisSetting>().is_err());
    }

    #[test]
    fn fundamental_discriminants() {
        let small: Vec<i64> = (-30..=30).filter(|&d| is_fundamental(d)).collect();
        assert_eq!(
            small,
            vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24, 28, 29]
        );
    }

    #[test]
    fn counting_examples() {
        let table = build_table(10_000).unwrap();
        assert_eq!(pi_chebotarev(&table, 10.0, &GaloisSetting::Cyclotomic(4), 1).unwrap(), 1);
        assert_eq!(pi_chebotarev(&table, 100.0, &GaloisSetting::Quadratic(-4), SPLIT).unwrap(), 11);
        assert_eq!(pi_chebotarev(&table, 100.0, &GaloisSetting::CubicS3, CUBIC_IDENTITY).unwrap(), 1);
        assert_eq!(pi_chebotarev(&table, 58.0, &GaloisSetting::CubicS3, CUBIC_IDENTITY).unwrap(), 0);
        let e = chebotarev_error(&table, 100.0, &GaloisSetting::Quadratic(-4), SPLIT).unwrap();
        assert!((e - (11.0 - li(100.0).unwrap() / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn partition_is_exact() {
        let table = build_table(100_000).unwrap();
        for s in [GaloisSetting::Cyclotomic(12), GaloisSetting::Quadratic(-7), GaloisSetting::CubicS3] {
            assert!(class_sum_residual(&table, &s, 1e5).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn class_number_table() {
        let fields = quadratic_fields();
        assert_eq!(fields.len(), 61);
        for f in &fields {
            assert!(is_fundamental(f.d));
            let c = class_number_crosscheck(f.d).unwrap();
            assert!(c.relative_residual < 1e-9, "{c:?}");
        }
        assert!(matches!(class_number_crosscheck(-5), Err(Error::NotInTable(-5))));
    }

    #[test]
    fn quadratic_constants_partition() {
        let table = build_table(100_000).unwrap();
        let g = crate::ap_constants::mertens_constant(&table, 100_000).unwrap();
        for d in [-4i64, -3, 5, 8, -23] {
            let s = g_quadratic_exact(&table, d, SPLIT, 100_000).unwrap();
            let i = g_quadratic_exact(&table, d, INERT, 100_000).unwrap();
            let ram: f64 = prime_divisors(d.unsigned_abs()).iter().map(|&p| 1.0 / p as f64).sum();
            assert!((s.g + i.g + ram - g).abs() < 1e-9, "D = {d}");
        }
    }
}
