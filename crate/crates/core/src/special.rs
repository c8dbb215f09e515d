//! Euler's constant, digamma, Gamma, Hurwitz zeta on the real segment, and
//! the values `L(1, chi)` and `log L(1, chi)` with the branch fixed by
//! continuity from `sigma = 2`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::arith::{gcd, prime_divisors, CompensatedSum};
use crate::characters::{characters_of, DirichletCharacter, UnitGroup};
use crate::error::{Error, Result};
use crate::quad;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// `H_n - log n`; tends to gamma from above with offset about `1 / (2n)`.
pub fn gamma_limit_estimate(n: u64) -> f64 {
    let mut h = CompensatedSum::new();
    for k in (1..=n).rev() {
        h += 1.0 / k as f64;
    }
    h += -(n as f64).ln();
    h.value()
}

/// Digamma for `x > 0`: shift to `x >= 10`, then the asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("digamma needs x > 0, got {x}")));
    }
    Ok(digamma_unchecked(x))
}

fn digamma_unchecked(mut x: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    while x < 10.0 {
        acc += -1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // sum B_2k / (2k x^2k), k = 1..7
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc += x.ln();
    acc += -0.5 / x;
    acc += -series;
    acc.value()
}

fn ln_gamma_large(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2
                * (1.0 / 360.0
                    - inv2
                        * (1.0 / 1260.0
                            - inv2
                                * (1.0 / 1680.0
                                    - inv2 * (1.0 / 1188.0 - inv2 * (691.0 / 360_360.0 - inv2 / 156.0))))));
    (x - 0.5) * x.ln() - x + 0.5 * TAU.ln() + series
}

/// Gamma on `(0, 1]`.
pub fn gamma_fn(s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidArgument(format!("gamma_fn needs 0 < s <= 1, got {s}")));
    }
    let mut x = s;
    let mut denom = 1.0;
    while x < 12.0 {
        denom *= x;
        x += 1.0;
    }
    Ok(ln_gamma_large(x).exp() / denom)
}

// B_2k / (2k)!, k = 1..8
const EM_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// Euler-Maclaurin cut: direct terms until the argument reaches this value.
const EM_CUT: f64 = 20.0;

/// `zeta(s, x) - 1/(s - 1)` for real `s >= 1`, `x > 0`.
///
/// The subtracted pole makes the value finite at `s = 1`, where it equals
/// `-digamma(x)`. Differences over a full set of residues with weights
/// summing to zero (nonprincipal characters) then give `L(s, chi)` with no
/// cancellation near `s = 1`.
pub fn hurwitz_regularized(s: f64, x: f64) -> f64 {
    debug_assert!(s >= 1.0 && x > 0.0);
    let mut acc = CompensatedSum::new();
    let mut y = x;
    while y < EM_CUT {
        acc += (-s * y.ln()).exp();
        y += 1.0;
    }
    let ln_w = y.ln();
    // (w^{1-s} - 1) / (s - 1)
    let z = (1.0 - s) * ln_w;
    let ratio = if z.abs() < 1e-300 { 1.0 } else { z.exp_m1() / z };
    acc += -ln_w * ratio;
    let w_s = (-s * ln_w).exp();
    acc += 0.5 * w_s;
    // B_2k/(2k)! * s(s+1)...(s+2k-2) * w^{-s-2k+1}
    let mut rising = s;
    let mut power = w_s / y;
    let inv2 = 1.0 / (y * y);
    for (k, c) in EM_COEFFS.iter().enumerate() {
        acc += c * rising * power;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power *= inv2;
    }
    acc.value()
}

fn csum(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for v in values {
        re += v.re;
        im += v.im;
    }
    Complex64::new(re.value(), im.value())
}

fn euler_factors(chi: &DirichletCharacter, star: &DirichletCharacter, f: u64, sigma: f64) -> Complex64 {
    prime_divisors(chi.modulus())
        .into_iter()
        .filter(|p| f % p != 0)
        .fold(Complex64::new(1.0, 0.0), |acc, p| {
            acc * (Complex64::new(1.0, 0.0) - star.eval(p) * (-sigma * (p as f64).ln()).exp())
        })
}

/// `L(1, chi)` for nonprincipal `chi`, from the digamma values of its
/// primitive character times the Euler factors at primes dividing `q` but
/// not the conductor.
pub fn l_one(chi: &DirichletCharacter) -> Result<Complex64> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let (f, star) = chi.conductor_and_primitive();
    let ff = f as f64;
    let sum = csum((1..f).map(|a| star.eval(a) * digamma_unchecked(a as f64 / ff)));
    Ok(-sum / ff * euler_factors(chi, &star, f, 1.0))
}

/// `L(1)` of a periodic coefficient sequence with period `f` and mean zero:
/// `-(1/f) sum_{a=1}^{f} c(a) psi(a/f)`.
pub fn l_one_periodic(f: u64, coeff: impl Fn(u64) -> f64) -> f64 {
    let ff = f as f64;
    let s: CompensatedSum = (1..=f)
        .map(|a| coeff(a))
        .enumerate()
        .filter(|(_, c)| *c != 0.0)
        .map(|(i, c)| c * digamma_unchecked((i + 1) as f64 / ff))
        .collect();
    -s.value() / ff
}

/// `L(sigma, chi)` for real `sigma >= 1`, nonprincipal `chi`.
pub fn l_sigma(chi: &DirichletCharacter, sigma: f64) -> Result<Complex64> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    if !(sigma >= 1.0) {
        return Err(Error::InvalidArgument(format!("l_sigma needs sigma >= 1, got {sigma}")));
    }
    let (f, star) = chi.conductor_and_primitive();
    Ok(l_sigma_primitive(&star, f, sigma) * euler_factors(chi, &star, f, sigma))
}

fn l_sigma_primitive(star: &DirichletCharacter, f: u64, sigma: f64) -> Complex64 {
    let ff = f as f64;
    let sum = csum((1..=f).filter(|&a| gcd(a, f) == 1).map(|a| star.eval(a) * hurwitz_regularized(sigma, a as f64 / ff)));
    sum * (-sigma * ff.ln()).exp()
}

/// A logarithm of `L(1, chi)` on the branch that is continuous along the
/// real segment from `sigma = 2` (where the principal logarithm is correct,
/// `|log L(2, chi)| <= log zeta(2) < pi`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BranchedLogValue {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// Accepted sigma steps on the path.
    pub path_steps: u32,
    /// Whole turns separating the tracked argument from the principal one.
    pub winding: i64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Base grid step on the sigma path.
pub const SIGMA_STEP: f64 = 1.0 / 64.0;
const MIN_STEP: f64 = 1.0 / (1u64 << 20) as f64;
const SIGMA_START: f64 = 2.0;

fn principal_arg_step(from: Complex64, to: Complex64) -> f64 {
    (to / from).arg()
}

/// Argument increment between `sigma_hi` and `sigma_lo`, bisecting while any
/// sub-step turns by `pi/2` or more.
fn tracked_increment<F: FnMut(f64) -> Complex64>(
    eval: &mut F,
    sigma_hi: f64,
    l_hi: Complex64,
    sigma_lo: f64,
    l_lo: Complex64,
    steps: &mut u32,
) -> Result<f64> {
    let d = principal_arg_step(l_hi, l_lo);
    if d.abs() < PI / 2.0 {
        *steps += 1;
        return Ok(d);
    }
    if sigma_hi - sigma_lo <= MIN_STEP {
        return Err(Error::BranchTracking { sigma: sigma_lo });
    }
    let mid = 0.5 * (sigma_hi + sigma_lo);
    let l_mid = eval(mid);
    let a = tracked_increment(eval, sigma_hi, l_hi, mid, l_mid, steps)?;
    let b = tracked_increment(eval, mid, l_mid, sigma_lo, l_lo, steps)?;
    Ok(a + b)
}

fn sigma_grid() -> Vec<f64> {
    let n = ((SIGMA_START - 1.0) / SIGMA_STEP).round() as usize;
    (0..=n).map(|k| SIGMA_START - k as f64 * SIGMA_STEP).collect()
}

/// Walk precomputed grid values (`values[k]` at `grid[k]`), refining with
/// `eval` where needed, and assemble the branched logarithm at the end.
fn walk_path<F: FnMut(f64) -> Complex64>(grid: &[f64], values: &[Complex64], mut eval: F) -> Result<BranchedLogValue> {
    let mut arg = values[0].arg();
    let mut steps = 0u32;
    for k in 1..grid.len() {
        arg += tracked_increment(&mut eval, grid[k - 1], values[k - 1], grid[k], values[k], &mut steps)?;
    }
    let end = *values.last().expect("nonempty grid");
    let winding = ((arg - end.arg()) / TAU).round() as i64;
    Ok(BranchedLogValue {
        value: Complex64::new(end.norm().ln(), arg),
        path_steps: steps,
        winding,
    })
}

/// Branch-tracked `log L(1, chi)` for a single nonprincipal character.
pub fn log_l_one(chi: &DirichletCharacter) -> Result<BranchedLogValue> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let (f, star) = chi.conductor_and_primitive();
    let eval = |s: f64| l_sigma_primitive(&star, f, s) * euler_factors(chi, &star, f, s);
    let grid = sigma_grid();
    let values: Vec<Complex64> = grid.iter().map(|&s| eval(s)).collect();
    walk_path(&grid, &values, eval)
}

/// `sum_{p <= bound} sum_{nu >= 1} chi(p)^nu / (nu p^{nu sigma})`, the
/// absolutely convergent Euler-product logarithm for `sigma > 1`.
pub fn euler_log_series(chi: &DirichletCharacter, sigma: f64, primes: impl Iterator<Item = u64>) -> Complex64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for p in primes {
        let c = chi.eval(p);
        if c.norm() == 0.0 {
            continue;
        }
        let base = (-sigma * (p as f64).ln()).exp();
        let mut term = c * base;
        let mut pw = term;
        let mut nu = 1.0;
        while pw.norm() / nu > 1e-20 {
            re += term.re;
            im += term.im;
            nu += 1.0;
            pw *= c * base;
            term = pw / nu;
        }
    }
    Complex64::new(re.value(), im.value())
}

/// Branch-tracked `log L(1, chi)` for every character mod `q`, indexed as in
/// [`characters_of`]; the principal slot is `None`.
///
/// On each sigma of the grid the Hurwitz values `zeta(sigma, a/q)` are
/// computed once and all character sums are obtained together by a
/// multi-dimensional DFT over the cyclic factors of `(Z/qZ)*`.
pub fn log_l_one_all(group: &Arc<UnitGroup>) -> Result<Vec<Option<BranchedLogValue>>> {
    let chars = characters_of(group);
    let n = chars.len();
    if n == 1 {
        return Ok(vec![None]);
    }
    let q = group.modulus();
    let qf = q as f64;
    let orders = group.orders().to_vec();
    let strides: Vec<usize> = orders
        .iter()
        .scan(1usize, |acc, &o| {
            let s = *acc;
            *acc *= o as usize;
            Some(s)
        })
        .collect();
    // position of each unit residue in the mixed-radix array
    let units: Vec<(u64, usize)> = (1..q)
        .filter(|&a| gcd(a, q) == 1)
        .map(|a| {
            let d = group.dlog(a).expect("unit");
            (a, d.iter().zip(&strides).map(|(&e, &s)| e as usize * s).sum())
        })
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let plans: Vec<_> = orders.iter().map(|&o| planner.plan_fft_inverse(o as usize)).collect();

    let grid = sigma_grid();
    let mut table = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; n];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut line = Vec::new();
    for (k, &sigma) in grid.iter().enumerate() {
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for &(a, pos) in &units {
            buf[pos] = Complex64::new(hurwitz_regularized(sigma, a as f64 / qf), 0.0);
        }
        for (axis, plan) in plans.iter().enumerate() {
            let len = orders[axis] as usize;
            if len == 1 {
                continue;
            }
            let stride = strides[axis];
            line.resize(len, Complex64::new(0.0, 0.0));
            for base in 0..n {
                if (base / stride) % len != 0 {
                    continue;
                }
                for t in 0..len {
                    line[t] = buf[base + t * stride];
                }
                plan.process(&mut line);
                for t in 0..len {
                    buf[base + t * stride] = line[t];
                }
            }
        }
        let scale = (-sigma * qf.ln()).exp();
        for (c, row) in table.iter_mut().enumerate() {
            row[k] = buf[c] * scale;
        }
    }

    chars
        .iter()
        .zip(&table)
        .map(|(chi, values)| {
            if chi.is_principal() {
                return Ok(None);
            }
            let direct = |s: f64| {
                let (f, star) = chi.conductor_and_primitive();
                l_sigma_primitive(&star, f, s) * euler_factors(chi, &star, f, s)
            };
            walk_path(&grid, values, direct).map(Some)
        })
        .collect()
}

/// `|int_eta^inf e^{-delta u} du / u - (log(1/delta) - log eta - gamma)|`.
/// The integral is cut at `u = 50 / delta` and taken in `v = log u`.
pub fn lemma41_residual(eta: f64, delta: f64) -> Result<f64> {
    if !(eta > 0.0 && delta > 0.0) {
        return Err(Error::InvalidArgument(format!("need eta, delta > 0, got {eta}, {delta}")));
    }
    let upper = (50.0 / delta).ln();
    let lower = eta.ln();
    let integral = if upper > lower {
        quad::integrate(|v: f64| (-delta * v.exp()).exp(), lower, upper, 1e-14, 1e-14, 10_000).value
    } else {
        0.0
    };
    Ok((integral - ((1.0 / delta).ln() - eta.ln() - EULER_GAMMA)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::characters_mod;

    #[test]
    fn digamma_values() {
        let ln2 = 2f64.ln();
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(0.5).unwrap() - (-EULER_GAMMA - 2.0 * ln2)).abs() < 1e-13);
        assert!((digamma(0.25).unwrap() - (-EULER_GAMMA - 3.0 * ln2 - PI / 2.0)).abs() < 1e-13);
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.0).is_err());
    }

    #[test]
    fn digamma_series_oracle() {
        // psi(x) = -gamma + sum_{n>=0} (1/(n+1) - 1/(n+x)), tail summed in
        // closed form via the x-independent pairing; N large enough for 1e-12
        for &x in &[0.1, 0.3, 0.5, 0.77, 1.0] {
            let n = 2_000_000u64;
            let mut s = CompensatedSum::new();
            for k in 0..n {
                s += 1.0 / (k as f64 + 1.0) - 1.0 / (k as f64 + x);
            }
            // remainder ~ (1 - x) / N
            let tail = (1.0 - x) / (n as f64 + 0.5 * x + 0.25);
            let oracle = -EULER_GAMMA + s.value() - tail;
            assert!((digamma(x).unwrap() - oracle).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn gauss_digamma_sum() {
        for q in 2..=12u64 {
            let s: f64 = (1..q).map(|a| digamma(a as f64 / q as f64).unwrap()).sum();
            let expected = -((q - 1) as f64) * EULER_GAMMA - q as f64 * (q as f64).ln();
            assert!((s - expected).abs() < 1e-10, "q = {q}");
        }
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-13);
        assert!((gamma_fn(0.25).unwrap() - 3.625_609_908_221_908_3).abs() < 1e-12);
        assert!((gamma_fn(0.5).unwrap().powi(2) - PI).abs() < 1e-10);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(1.5).is_err());
    }

    #[test]
    fn gamma_integral_oracle() {
        // int_0^inf e^{-u} u^{s-1} du with u = t^{1/s}: (1/s) int_0^inf e^{-t^{1/s}} dt
        for &s in &[0.25, 0.5, 0.8, 1.0] {
            let r = quad::integrate(|t: f64| (-t.powf(1.0 / s)).exp(), 0.0, 60f64.powf(s), 1e-14, 1e-14, 5000);
            let oracle = r.value / s;
            assert!((gamma_fn(s).unwrap() / oracle - 1.0).abs() < 1e-11, "s = {s}");
        }
    }

    #[test]
    fn hurwitz_at_one_is_minus_digamma() {
        for &x in &[0.05, 0.25, 0.5, 0.9, 1.0] {
            assert!((hurwitz_regularized(1.0, x) + digamma(x).unwrap()).abs() < 1e-13);
        }
        // zeta(2, 1) = pi^2 / 6 and the regularized value subtracts 1
        assert!((hurwitz_regularized(2.0, 1.0) - (PI * PI / 6.0 - 1.0)).abs() < 1e-13);
        // zeta(2, 1/2) = 3 zeta(2)
        assert!((hurwitz_regularized(2.0, 0.5) - (PI * PI / 2.0 - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn hurwitz_near_pole_is_continuous() {
        let a = hurwitz_regularized(1.0, 0.3);
        let b = hurwitz_regularized(1.0 + 1e-9, 0.3);
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn l_one_examples() {
        let c4 = characters_mod(4);
        let v = l_one(&c4[1]).unwrap();
        assert!((v.re - PI / 4.0).abs() < 1e-12 && v.im.abs() < 1e-15);
        let c3 = characters_mod(3);
        let v = l_one(&c3[1]).unwrap();
        assert!((v.re - PI / (3.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!(matches!(l_one(&c4[0]), Err(Error::PrincipalCharacter)));

        // mod-8 character induced from mod 4: 2 | 4, no extra Euler factor
        let induced = characters_mod(8)
            .into_iter()
            .find(|c| c.conductor_and_primitive().0 == 4)
            .unwrap();
        assert!((l_one(&induced).unwrap().re - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn alternating_series_oracle_mod_4_and_3() {
        // averaging the partial sums over one full period cancels the
        // leading oscillating remainder
        let partial = |chi: &dyn Fn(u64) -> f64, n: u64| -> f64 { (1..=n).map(|k| chi(k) / k as f64).sum() };
        let chi4 = |k: u64| match k % 4 {
            1 => 1.0,
            3 => -1.0,
            _ => 0.0,
        };
        let n = 400_000u64;
        let avg4 = (0..4).map(|r| partial(&chi4, n + r)).sum::<f64>() / 4.0;
        assert!((avg4 - PI / 4.0).abs() < 1e-9);
        let chi3 = |k: u64| match k % 3 {
            1 => 1.0,
            2 => -1.0,
            _ => 0.0,
        };
        let avg3 = (0..3).map(|r| partial(&chi3, 3 * n + r)).sum::<f64>() / 3.0;
        let l3 = l_one(&characters_mod(3)[1]).unwrap().re;
        assert!((avg3 - l3).abs() < 1e-9);
        assert!((l3 - 0.604_599_788_078_072_6).abs() < 1e-12);
    }

    #[test]
    fn l_sigma_matches_l_one_at_one() {
        for q in [5u64, 7, 8, 12, 15, 16, 21] {
            for chi in characters_mod(q).into_iter().skip(1) {
                let a = l_one(&chi).unwrap();
                let b = l_sigma(&chi, 1.0).unwrap();
                assert!((a - b).norm() < 1e-12, "q = {q}");
            }
        }
    }

    #[test]
    fn l_sigma_two_matches_euler_product() {
        let table = crate::sieve::build_table(200_000).unwrap();
        for q in [5u64, 7, 12] {
            for chi in characters_mod(q).into_iter().skip(1) {
                let l2 = l_sigma(&chi, 2.0).unwrap();
                let series = euler_log_series(&chi, 2.0, table.primes());
                // tail beyond 2e5 is below sum_{n > 2e5} n^-2
                assert!((l2.ln() - series).norm() < 1e-5, "q = {q}");
            }
        }
    }

    #[test]
    fn log_l_one_examples() {
        let c4 = characters_mod(4);
        let v = log_l_one(&c4[1]).unwrap();
        assert!((v.value.re - (PI / 4.0).ln()).abs() < 1e-12);
        assert!(v.value.im.abs() < 1e-10);
        assert!((v.value.re + 0.2416).abs() < 1e-4);
        assert!(v.path_steps >= 64);

        for chi in characters_mod(13).into_iter().skip(1) {
            let a = log_l_one(&chi).unwrap();
            let b = log_l_one(&chi.conj()).unwrap();
            assert!((a.value - b.value.conj()).norm() < 1e-9);
            assert!((a.value.exp() / l_one(&chi).unwrap() - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn batch_matches_single_character_path() {
        for q in [1u64, 2, 3, 8, 15, 16, 24, 35, 60] {
            let group = crate::characters::decompose_units(q);
            let batch = log_l_one_all(&group).unwrap();
            for (chi, b) in characters_of(&group).iter().zip(&batch) {
                match b {
                    None => assert!(chi.is_principal()),
                    Some(b) => {
                        let single = log_l_one(chi).unwrap();
                        assert!((b.value - single.value).norm() < 1e-10, "q = {q} {chi:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn euler_gamma_constant() {
        assert!((euler_gamma() - 0.57721).abs() < 1e-5);
        let est = gamma_limit_estimate(1_000_000);
        assert!((est - EULER_GAMMA - 0.5e-6).abs() < 1e-10);
    }

    #[test]
    fn lemma41_examples() {
        let r3 = lemma41_residual(2f64.ln(), 1e-3).unwrap();
        let r6 = lemma41_residual(2f64.ln(), 1e-6).unwrap();
        assert!(r3 <= 1e-2 && r6 <= 1e-5);
        assert!(r6 < r3);
        assert!(lemma41_residual(0.0, 1e-3).is_err());
    }
}
