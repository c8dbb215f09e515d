//! Mertens constants for a residue class: `L(q,a)`, `g(q,a)`, `G(q,a)` and
//! the degenerate large-modulus values `g*(q,a)`, `G*(q,a)`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{is_prime_u64, prime_divisors, CompensatedSum};
use crate::characters::{characters_of, DirichletCharacter, UnitGroup};
use crate::error::{Error, Result};
use crate::sieve::{ApTarget, PrimeTable};
use crate::special::{log_l_one_all, BranchedLogValue, EULER_GAMMA};

pub const DEFAULT_CUTOFF: u64 = 10_000_000;
/// Imaginary part allowed in the character sum for `log L(q,a)`. Branch
/// faults show up as multiples of `2 pi / phi(q)`, far above this.
pub const BRANCH_TOLERANCE: f64 = 1e-8;
const MAX_NU: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CorrectionMode {
    /// Pairs `(p, nu)` with `p^nu = a (mod q)`, `nu >= 2`.
    ExponentSum,
    /// Pairs with `p = a (mod q)`, `nu >= 2`.
    ResidueSum,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Correction {
    pub value: f64,
    pub tail_bound: f64,
}

/// Both prime-power corrections for every residue class mod `q`, from one
/// pass over the primes up to the cutoff.
#[derive(Debug, Clone)]
pub struct CorrectionTable {
    q: u64,
    cutoff: u64,
    exponent: Vec<f64>,
    residue: Vec<f64>,
}

impl CorrectionTable {
    pub fn new(table: &PrimeTable, q: u64, cutoff: u64) -> Result<Self> {
        if cutoff < q {
            return Err(Error::CutoffBelowModulus { cutoff, q });
        }
        if cutoff > table.limit() {
            return Err(Error::BeyondTable { value: cutoff as f64, limit: table.limit() });
        }
        let n = q as usize;
        let mut exponent = vec![CompensatedSum::new(); n];
        let mut residue = vec![CompensatedSum::new(); n];
        for p in table.primes_up_to(cutoff) {
            let r = p % q;
            if q > 1 && q % p == 0 {
                continue;
            }
            let inv = 1.0 / p as f64;
            let mut pw = inv * inv;
            let mut res = r * r % q;
            let mut nu = 2u32;
            while nu <= MAX_NU {
                let term = pw / nu as f64;
                if term < 1e-22 {
                    break;
                }
                exponent[res as usize] += term;
                residue[r as usize] += term;
                pw *= inv;
                res = res * r % q;
                nu += 1;
            }
        }
        Ok(Self {
            q,
            cutoff,
            exponent: exponent.iter().map(|s| s.value()).collect(),
            residue: residue.iter().map(|s| s.value()).collect(),
        })
    }

    /// `sum_{n > P} n^-2 <= 1/P` covers every omitted prime power.
    pub fn tail_bound(&self) -> f64 {
        1.0 / self.cutoff as f64
    }

    pub fn get(&self, a: u64, mode: CorrectionMode) -> Correction {
        let idx = (a % self.q) as usize;
        let value = match mode {
            CorrectionMode::ExponentSum => self.exponent[idx],
            CorrectionMode::ResidueSum => self.residue[idx],
        };
        Correction { value, tail_bound: self.tail_bound() }
    }
}

pub fn prime_power_correction(table: &PrimeTable, ap: ApTarget, cutoff: u64, mode: CorrectionMode) -> Result<Correction> {
    Ok(CorrectionTable::new(table, ap.q(), cutoff)?.get(ap.a(), mode))
}

#[derive(Debug, Clone, Serialize)]
pub struct ApConstants {
    pub target: ApTarget,
    pub script_l: f64,
    pub g: f64,
    pub big_g: f64,
    /// `exp(-gamma/phi + g + residue sum)`, the other form of `G`.
    pub big_g_alt: f64,
    pub g_star: f64,
    pub big_g_star: f64,
    pub exponent_correction: f64,
    pub residue_correction: f64,
    pub correction_cutoff: u64,
    pub tail_bound: f64,
}

/// Everything shared by the residue classes of one modulus: the character
/// group, branch-tracked `log L(1, chi)` values and the correction sums.
pub struct ModulusConstants {
    q: u64,
    phi: u64,
    group: Arc<UnitGroup>,
    chars: Vec<DirichletCharacter>,
    logs: Vec<Option<BranchedLogValue>>,
    corrections: CorrectionTable,
}

impl ModulusConstants {
    pub fn new(table: &PrimeTable, q: u64, cutoff: u64) -> Result<Self> {
        let corrections = CorrectionTable::new(table, q, cutoff)?;
        let group = UnitGroup::new(q);
        let logs = log_l_one_all(&group)?;
        Ok(Self {
            q,
            phi: group.phi(),
            chars: characters_of(&group),
            group,
            logs,
            corrections,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn log_l_values(&self) -> &[Option<BranchedLogValue>] {
        &self.logs
    }

    pub fn corrections(&self) -> &CorrectionTable {
        &self.corrections
    }

    /// `log L(q,a) = (1/phi) [log(phi/q) + sum_{chi != chi0} conj(chi(a)) log L(1, chi)]`.
    pub fn log_script_l(&self, a: u64) -> Result<f64> {
        let ap = ApTarget::reduced(self.q, a)?;
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        re += (self.phi as f64 / self.q as f64).ln();
        for (chi, log) in self.chars.iter().zip(&self.logs) {
            let Some(log) = log else { continue };
            let term: Complex64 = chi.eval(ap.a()).conj() * log.value;
            re += term.re;
            im += term.im;
        }
        let residue = im.value().abs();
        if residue > BRANCH_TOLERANCE {
            return Err(Error::BranchResidue { residue, tolerance: BRANCH_TOLERANCE });
        }
        Ok(re.value() / self.phi as f64)
    }

    pub fn script_l(&self, a: u64) -> Result<f64> {
        Ok(self.log_script_l(a)?.exp())
    }

    pub fn constants(&self, a: u64) -> Result<ApConstants> {
        let target = ApTarget::reduced(self.q, a)?;
        let phi = self.phi as f64;
        let log_l = self.log_script_l(target.a())?;
        let exp_c = self.corrections.get(target.a(), CorrectionMode::ExponentSum);
        let res_c = self.corrections.get(target.a(), CorrectionMode::ResidueSum);
        let g = EULER_GAMMA / phi + log_l - exp_c.value;
        let big_g_alt = (-EULER_GAMMA / phi + g + res_c.value).exp();
        let big_g = log_l.exp() * (res_c.value - exp_c.value).exp();
        let tail = exp_c.tail_bound;
        if (big_g - big_g_alt).abs() > 2.0 * tail + 1e-8 {
            return Err(Error::Consistency(format!(
                "two forms of G({}, {}) disagree: {big_g} vs {big_g_alt}",
                self.q,
                target.a()
            )));
        }
        Ok(ApConstants {
            target,
            script_l: log_l.exp(),
            g,
            big_g,
            big_g_alt,
            g_star: g_star(target),
            big_g_star: big_g_star(target),
            exponent_correction: exp_c.value,
            residue_correction: res_c.value,
            correction_cutoff: self.corrections.cutoff,
            tail_bound: tail,
        })
    }

    pub fn all_constants(&self) -> Result<Vec<ApConstants>> {
        ApTarget::all_for(self.q).into_iter().map(|t| self.constants(t.a())).collect()
    }
}

pub fn script_l(table: &PrimeTable, ap: ApTarget) -> Result<f64> {
    // the correction sums are not needed; a cutoff of q keeps them cheap
    ModulusConstants::new(table, ap.q(), ap.q().max(2).min(table.limit()))?.script_l(ap.a())
}

pub fn ap_constants(table: &PrimeTable, ap: ApTarget, cutoff: u64) -> Result<ApConstants> {
    ModulusConstants::new(table, ap.q(), cutoff)?.constants(ap.a())
}

pub fn g_constant(table: &PrimeTable, ap: ApTarget, cutoff: u64) -> Result<f64> {
    Ok(ap_constants(table, ap, cutoff)?.g)
}

pub fn big_g_constant(table: &PrimeTable, ap: ApTarget, cutoff: u64) -> Result<f64> {
    Ok(ap_constants(table, ap, cutoff)?.big_g)
}

fn star_applies(ap: ApTarget) -> bool {
    ap.q() >= 2 && is_prime_u64(ap.a())
}

pub fn g_star(ap: ApTarget) -> f64 {
    if star_applies(ap) {
        1.0 / ap.a() as f64
    } else {
        0.0
    }
}

pub fn big_g_star(ap: ApTarget) -> f64 {
    if star_applies(ap) {
        1.0 / (1.0 - 1.0 / ap.a() as f64)
    } else {
        1.0
    }
}

/// Mertens's constant `g = g(1, 1)` at the given cutoff.
pub fn mertens_constant(table: &PrimeTable, cutoff: u64) -> Result<f64> {
    Ok(ModulusConstants::new(table, 1, cutoff)?.constants(1)?.g)
}

/// `|sum_a g(q, a) - (g - sum_{p | q} 1/p)|`.
pub fn sum_identity_residual(table: &PrimeTable, q: u64, cutoff: u64) -> Result<f64> {
    let lhs: CompensatedSum = ModulusConstants::new(table, q, cutoff)?
        .all_constants()?
        .into_iter()
        .map(|c| c.g)
        .collect();
    let mut rhs = CompensatedSum::new();
    rhs += mertens_constant(table, cutoff)?;
    for p in prime_divisors(q) {
        rhs += -1.0 / p as f64;
    }
    Ok((lhs.value() - rhs.value()).abs())
}

/// `|g(q,a) - g*(q,a)| * phi(q) / log q`, the normalized deviation from the
/// large-modulus value; `None` for `q = 1`.
pub fn g_star_deviation(c: &ApConstants, phi: u64) -> Option<f64> {
    let q = c.target.q();
    (q >= 2).then(|| (c.g - c.g_star).abs() * phi as f64 / (q as f64).ln())
}
