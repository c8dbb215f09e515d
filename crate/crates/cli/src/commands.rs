use std::f64::consts::LN_2;

use mertens_core::ap_constants::{ap_constants, mertens_constant, ApConstants, ModulusConstants};
use mertens_core::arith::{gcd, totient};
use mertens_core::chebotarev::{
    class_number_crosscheck, class_scan, estimate_from, g_quadratic_exact, partition_residual_from,
    quadratic_fields, slopes_from, GaloisSetting,
};
use mertens_core::characters::characters_mod;
use mertens_core::mertens::{abel_identity_residual, error_integral, proposition_33_report, row_from_snapshot, scan, theorem51_probe};
use mertens_core::pliable::{envelope, main_term, phi_count, PliableQuery};
use mertens_core::sieve::{build_table_cached, li, pi};
use mertens_core::special::{gamma_limit_estimate, lemma41_residual, EULER_GAMMA};
use mertens_core::{ApTarget, Error, PrimeTable, Result};
use num_complex::Complex64;

use crate::args::{Command, RunConfig};
use crate::report::Report;

/// Reference value of the classical constant used by the self-test.
const MERTENS_REFERENCE: f64 = 0.261_497_212_847_642_8;

const SELFTEST_LIMIT: u64 = 1_000_000;

fn table_for(cfg: &RunConfig, need: u64) -> Result<PrimeTable> {
    if need > cfg.sieve_limit {
        return Err(Error::BeyondTable { value: need as f64, limit: cfg.sieve_limit });
    }
    // round up to a power of ten so cached tables get reused
    let mut size = 1000u64;
    while size < need {
        size = size.saturating_mul(10);
    }
    build_table_cached(size.min(cfg.sieve_limit), &cfg.cache_dir)
}

fn target(q: u64, a: u64) -> Result<ApTarget> {
    if q == 0 {
        return Err(Error::InvalidTarget { q, a, reason: "modulus must be positive" });
    }
    if gcd(q, a) != 1 {
        return Err(Error::InvalidTarget { q, a, reason: "gcd(q, a) must be 1" });
    }
    ApTarget::reduced(q, a)
}

fn base_meta(report: &mut Report, cfg: &RunConfig, table: &PrimeTable) {
    report
        .meta("sieve_limit", cfg.sieve_limit)
        .meta("table_limit", table.limit())
        .meta("correction_cutoff", cfg.correction_cutoff);
    for (k, v) in &cfg.tolerances {
        report.meta(&format!("tol.{k}"), v);
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> std::result::Result<Report, Failure> {
    Ok(match cmd {
        Command::Constants { q, a } => constants(cfg, *q, *a)?,
        Command::Mertens { q, a, x_grid, tail } => mertens(cfg, target(*q, *a)?, x_grid, *tail)?,
        Command::Integral { q, a, big_x } => integral(cfg, target(*q, *a)?, *big_x)?,
        Command::Product { q, a, x_grid } => product(cfg, target(*q, *a)?, x_grid)?,
        Command::Pliable { x, y, q, a, envelope_a } => pliable(cfg, *x, *y, target(*q, *a)?, *envelope_a)?,
        Command::Chebotarev { setting, class, x } => chebotarev(cfg, setting.parse()?, *class, *x)?,
        Command::Selftest => selftest(cfg)?,
    })
}

const CONSTANT_COLUMNS: &[&str] =
    &["q", "a", "script_l", "g", "G", "G_alt", "g_star", "G_star", "tail_bound", "residual"];

fn push_constants(report: &mut Report, c: &ApConstants) {
    report.push(
        "ap-constants",
        vec![
            ("q", c.target.q().into()),
            ("a", c.target.a().into()),
            ("script_l", c.script_l.into()),
            ("g", c.g.into()),
            ("G", c.big_g.into()),
            ("G_alt", c.big_g_alt.into()),
            ("g_star", c.g_star.into()),
            ("G_star", c.big_g_star.into()),
            ("tail_bound", c.tail_bound.into()),
        ],
    );
}

fn constants(cfg: &RunConfig, q: u64, a: Option<u64>) -> Result<Report> {
    let ap = a.map(|a| target(q, a)).transpose()?;
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let table = table_for(cfg, cfg.correction_cutoff)?;
    let mut report = Report::new("constants", CONSTANT_COLUMNS);
    base_meta(&mut report, cfg, &table);
    let m = ModulusConstants::new(&table, q, cfg.correction_cutoff)?;
    match ap {
        Some(ap) => push_constants(&mut report, &m.constants(ap.a())?),
        None => {
            let all = m.all_constants()?;
            for c in &all {
                push_constants(&mut report, c);
            }
            if q > 1 {
                let g = mertens_constant(&table, cfg.correction_cutoff)?;
                let ram: f64 = mertens_core::arith::prime_divisors(q).iter().map(|&p| 1.0 / p as f64).sum();
                let lhs: f64 = all.iter().map(|c| c.g).sum();
                let residual = (lhs - (g - ram)).abs();
                let tol = cfg.tolerance("sum-identity", 1e-6);
                report.meta("tol.sum-identity", tol);
                report.push(
                    "sum-over-classes-identity",
                    vec![("q", q.into()), ("g", lhs.into()), ("residual", residual.into())],
                );
                if residual > tol {
                    return Err(Error::Consistency(format!(
                        "sum of g(q, a) over classes misses g - sum 1/p by {residual:e}"
                    )));
                }
            }
        }
    }
    Ok(report)
}

fn mertens(cfg: &RunConfig, ap: ApTarget, grid: &[u64], tail: Option<u64>) -> Result<Report> {
    let top = grid.iter().copied().chain(tail).max().unwrap_or(2);
    let table = table_for(cfg, top.max(cfg.correction_cutoff))?;
    let c = ap_constants(&table, ap, cfg.correction_cutoff)?;
    let mut report = Report::new(
        "mertens",
        &["x", "q", "a", "sum", "predicted", "residual", "tail_bound", "envelope", "uniformity_a"],
    );
    base_meta(&mut report, cfg, &table);
    report.meta("g", c.g).meta("G", c.big_g);
    report.meta("envelope", "log(x)/sqrt(x), conditional error size, informational only");
    let snaps = scan(&table, ap, grid)?;
    for snap in &snaps {
        let x = snap.x as f64;
        let row = row_from_snapshot(x, ap, snap, &c);
        let env = x.ln() / x.sqrt();
        let unif = (ap.q() as f64).ln() / x.ln().ln();
        let common = |v: Vec<(&'static str, crate::report::Value)>| {
            let mut cells = vec![("x", snap.x.into()), ("q", ap.q().into()), ("a", ap.a().into())];
            cells.extend(v);
            cells.push(("envelope", env.into()));
            cells.push(("uniformity_a", unif.into()));
            cells
        };
        report.push(
            "reciprocal-sum",
            common(vec![
                ("sum", row.sum_recip.into()),
                ("predicted", row.predicted_sum.into()),
                ("residual", row.residual_sum.into()),
            ]),
        );
        report.push(
            "log-product",
            common(vec![
                ("sum", row.product_log.into()),
                ("predicted", row.predicted_product_log.into()),
                ("residual", row.residual_product.into()),
                ("tail_bound", row.tail_bound.into()),
            ]),
        );
        if let Some(t) = tail {
            if snap.x <= t && snap.x >= 2 {
                let p = proposition_33_report(&table, x, t as f64, ap, Some(c.g))?;
                report.push(
                    "finite-tail-closure",
                    common(vec![
                        ("sum", p.sum_recip.into()),
                        ("predicted", (p.sum_recip - p.closure_residual).into()),
                        ("residual", p.closure_residual.into()),
                    ]),
                );
                let r = p.reference_residual.unwrap();
                report.push(
                    "finite-tail-vs-constant",
                    common(vec![
                        ("sum", p.sum_recip.into()),
                        ("predicted", (p.sum_recip - r).into()),
                        ("residual", r.into()),
                    ]),
                );
            }
        }
    }
    Ok(report)
}

fn integral(cfg: &RunConfig, ap: ApTarget, big_x: u64) -> Result<Report> {
    let table = table_for(cfg, big_x.max(cfg.correction_cutoff))?;
    let c = ap_constants(&table, ap, cfg.correction_cutoff)?;
    let value = error_integral(&table, big_x as f64, ap)?;
    let predicted = c.g + LN_2.ln() / totient(ap.q()) as f64;
    let mut report = Report::new("integral", &["x", "q", "a", "value", "predicted", "residual", "tail_bound"]);
    base_meta(&mut report, cfg, &table);
    report.push(
        "truncated-error-integral",
        vec![
            ("x", big_x.into()),
            ("q", ap.q().into()),
            ("a", ap.a().into()),
            ("value", value.into()),
            ("predicted", predicted.into()),
            ("residual", (value - predicted).into()),
            ("tail_bound", c.tail_bound.into()),
        ],
    );
    Ok(report)
}

fn product(cfg: &RunConfig, ap: ApTarget, grid: &[u64]) -> Result<Report> {
    let top = grid.last().copied().unwrap_or(2);
    let table = table_for(cfg, top.max(cfg.correction_cutoff))?;
    let c = ap_constants(&table, ap, cfg.correction_cutoff)?;
    let mut report = Report::new(
        "product",
        &[
            "x", "q", "a", "product", "predicted", "ratio", "tail_bound", "G_star", "lower_bound_holds", "upper_c",
            "sum", "g_star", "sum_constant",
        ],
    );
    base_meta(&mut report, cfg, &table);
    for snap in scan(&table, ap, grid)? {
        let x = snap.x as f64;
        let row = row_from_snapshot(x, ap, &snap, &c);
        let probe = theorem51_probe(&table, x, ap)?;
        report.push(
            "prime-product",
            vec![
                ("x", snap.x.into()),
                ("q", ap.q().into()),
                ("a", ap.a().into()),
                ("product", row.product_log.exp().into()),
                ("predicted", row.predicted_product_log.exp().into()),
                ("ratio", row.product_ratio().into()),
                ("tail_bound", row.tail_bound.into()),
                ("G_star", probe.big_g_star.into()),
                ("lower_bound_holds", probe.holds_lower.into()),
                ("upper_c", probe.upper_c.into()),
                ("sum", probe.sum_recip.into()),
                ("g_star", probe.g_star.into()),
                ("sum_constant", probe.sum_constant.into()),
            ],
        );
    }
    Ok(report)
}

fn pliable(cfg: &RunConfig, x: u64, y: f64, ap: ApTarget, a_exp: f64) -> Result<Report> {
    let query = PliableQuery::new(x, y, ap)?;
    let table = table_for(cfg, x.max(cfg.correction_cutoff).max(y as u64))?;
    let c = ap_constants(&table, ap, cfg.correction_cutoff)?;
    let exact = phi_count(&table, &query)?;
    let main = main_term(&query, &c, &table)?;
    let mut report = Report::new("pliable", &["x", "y", "q", "a", "exact", "main_term", "ratio", "envelope"]);
    base_meta(&mut report, cfg, &table);
    report.meta("envelope_a", a_exp).meta("counts_one", mertens_core::pliable::COUNT_ONE);
    report.push(
        "pliable-count",
        vec![
            ("x", x.into()),
            ("y", y.into()),
            ("q", ap.q().into()),
            ("a", ap.a().into()),
            ("exact", exact.into()),
            ("main_term", main.into()),
            ("ratio", (exact as f64 / main).into()),
            ("envelope", envelope(x as f64, a_exp).into()),
        ],
    );
    Ok(report)
}

fn decade_grid(x: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = std::iter::successors(Some(10u64), |v| v.checked_mul(10))
        .take_while(|&v| v < x)
        .collect();
    grid.push(x);
    let keep = grid.len().min(5);
    grid.split_off(grid.len() - keep)
}

fn chebotarev(cfg: &RunConfig, setting: GaloisSetting, class: Option<u64>, x: Option<u64>) -> Result<Report> {
    let x = x.unwrap_or(cfg.sieve_limit);
    if x < 10 {
        return Err(Error::InvalidArgument("--x must be at least 10".into()));
    }
    let exact_available = !matches!(setting, GaloisSetting::CubicS3);
    let need = if exact_available { x.max(cfg.correction_cutoff) } else { x };
    let table = table_for(cfg, need)?;
    let classes = match class {
        Some(id) => vec![setting.class(id)?],
        None => setting.classes(),
    };
    let all_classes = setting.classes();
    let order = setting.group_order() as f64;
    let mut report = Report::new(
        "chebotarev",
        &["setting", "class", "label", "x", "value", "reference", "residual", "note"],
    );
    base_meta(&mut report, cfg, &table);
    let decades = decade_grid(x);
    report.meta("slope_grid", decades.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(";"));
    let mut grid = decades.clone();
    grid.push(x / 10);
    grid.sort_unstable();
    grid.dedup();
    let snaps = class_scan(&table, &setting, &grid)?;
    let last = snaps.last().unwrap();
    let decade_snaps: Vec<_> = snaps.iter().filter(|s| decades.contains(&s.x)).cloned().collect();
    let slopes = if decades.len() >= 2 { Some(slopes_from(&decade_snaps)?) } else { None };
    let pi_x = pi(&table, x as f64)? as f64;
    let li_x = li(x as f64)?;
    let name = setting.to_string();
    for info in &classes {
        let pos = all_classes.iter().position(|c| c.id == info.id).unwrap();
        let density = info.size as f64 / order;
        let base = |v: Vec<(&'static str, crate::report::Value)>| {
            let mut cells = vec![
                ("setting", name.as_str().into()),
                ("class", info.id.into()),
                ("label", info.label.as_str().into()),
                ("x", x.into()),
            ];
            cells.extend(v);
            cells
        };
        let count = last.counts[pos] as f64;
        report.push(
            "class-count",
            base(vec![
                ("value", last.counts[pos].into()),
                ("reference", (density * li_x).into()),
                ("residual", (count - density * li_x).into()),
            ]),
        );
        report.push(
            "class-density",
            base(vec![
                ("value", (count / pi_x).into()),
                ("reference", density.into()),
                ("residual", (count / pi_x / density - 1.0).into()),
                ("note", "relative".into()),
            ]),
        );
        if let Some(s) = &slopes {
            report.push(
                "mertens-slope",
                base(vec![
                    ("value", s[pos].into()),
                    ("reference", density.into()),
                    ("residual", (s[pos] / density - 1.0).into()),
                    ("note", "relative; least squares against log log x".into()),
                ]),
            );
        }
        let est = estimate_from(&setting, info.id, &snaps)?;
        let exact = match setting {
            GaloisSetting::Quadratic(d) => Some(g_quadratic_exact(&table, d, info.id, cfg.correction_cutoff)?),
            _ => None,
        };
        let (g_ref, big_g_ref) = match (setting, &exact) {
            (_, Some(e)) => (Some(e.g), Some(e.big_g)),
            (GaloisSetting::Cyclotomic(q), None) => {
                let a = if q == 1 { 1 } else { info.id };
                let c = ap_constants(&table, ApTarget::new(q, a)?, cfg.correction_cutoff)?;
                (Some(c.g), Some(c.big_g))
            }
            _ => (None, None),
        };
        let conf = est.confidence.map(|c| format!("drift over last decade {}", crate::report::format_float(c, 3)));
        report.push(
            "constant-estimate",
            base(vec![
                ("value", est.g.into()),
                ("reference", g_ref.into()),
                ("residual", g_ref.map(|g| est.g - g).into()),
                ("note", conf.clone().into()),
            ]),
        );
        report.push(
            "product-constant-estimate",
            base(vec![
                ("value", est.big_g.into()),
                ("reference", big_g_ref.into()),
                ("residual", big_g_ref.map(|g| est.big_g - g).into()),
                ("note", if exact_available { conf.into() } else { "estimate only; no exact value".into() }),
            ]),
        );
        if let Some(e) = &exact {
            report.push(
                "constant-exact",
                base(vec![
                    ("value", e.g.into()),
                    ("reference", e.big_g.into()),
                    ("residual", e.tail_bound.into()),
                    ("note", "value g; reference G; residual is the 1/P tail bound".into()),
                ]),
            );
        }
    }
    report.push(
        "class-partition-residual",
        vec![
            ("setting", name.as_str().into()),
            ("x", x.into()),
            ("value", partition_residual_from(last).into()),
        ],
    );
    if let GaloisSetting::Quadratic(d) = setting {
        if quadratic_fields().iter().any(|f| f.d == d) {
            let c = class_number_crosscheck(d)?;
            report.push(
                "class-number-formula",
                vec![
                    ("setting", name.as_str().into()),
                    ("value", c.l_value.into()),
                    ("reference", c.formula_value.into()),
                    ("residual", c.relative_residual.into()),
                    ("note", format!("h={} w={}", c.field.h, c.field.w).into()),
                ],
            );
        }
    }
    Ok(report)
}

struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
}

fn selftest(cfg: &RunConfig) -> std::result::Result<Report, Failure> {
    let table = build_table_cached(SELFTEST_LIMIT, &cfg.cache_dir)?;
    let cutoff = SELFTEST_LIMIT;
    let mut checks = Vec::new();
    let mut add = |name, value: f64, default| {
        checks.push(Check { name, value, tolerance: cfg.tolerance(name, default) });
    };

    add("prime-count-1e6", (pi(&table, 1e6)? as f64 - 78_498.0).abs(), 0.0);
    let mut orth: f64 = 0.0;
    for q in 1..=30u64 {
        let chars = characters_mod(q);
        for m in 1..=q {
            for n in 1..=q {
                let s: Complex64 = chars.iter().map(|c| c.eval(m).conj() * c.eval(n)).sum();
                let want = if gcd(q, m) == 1 && m == n { totient(q) as f64 } else { 0.0 };
                orth = orth.max((s - want).norm());
            }
        }
    }
    add("character-orthogonality", orth, 1e-12);
    add("euler-gamma-limit", (gamma_limit_estimate(1_000_000) - EULER_GAMMA).abs(), 1e-7 + 5e-7);
    let g = mertens_constant(&table, cutoff)?;
    add("mertens-constant", (g - MERTENS_REFERENCE).abs(), 2.0 / cutoff as f64);
    let mut ident: f64 = 0.0;
    for q in 2..=12 {
        ident = ident.max(mertens_core::ap_constants::sum_identity_residual(&table, q, cutoff)?);
    }
    add("sum-over-classes-identity", ident, 1e-6);
    let mut quad: f64 = 0.0;
    for (d, q) in [(-4i64, 4u64), (-3, 3)] {
        let e = g_quadratic_exact(&table, d, 0, cutoff)?;
        let c = ap_constants(&table, ApTarget::new(q, 1)?, cutoff)?;
        quad = quad.max((e.g - c.g).abs());
    }
    add("quadratic-progression-coincidence", quad, 1e-8);
    let mut cn: f64 = 0.0;
    for d in [-3, -4, -7, -8, 5, 8] {
        cn = cn.max(class_number_crosscheck(d)?.relative_residual);
    }
    add("class-number-formula", cn, 1e-8);
    let mut abel: f64 = 0.0;
    for (q, a) in [(1, 1), (3, 2), (10, 7), (29, 1)] {
        abel = abel.max(abel_identity_residual(&table, 1e6, ApTarget::new(q, a)?)?);
    }
    add("partial-summation", abel, 1e-10);
    add("truncation-integral", lemma41_residual(LN_2, 1e-3)?, 1e-2);

    let mut report = Report::new("selftest", &["value", "tolerance", "pass"]);
    base_meta(&mut report, cfg, &table);
    let mut failed = Vec::new();
    for c in &checks {
        let pass = c.value <= c.tolerance;
        if !pass {
            failed.push(c.name);
        }
        report.push(c.name, vec![("value", c.value.into()), ("tolerance", c.tolerance.into()), ("pass", pass.into())]);
    }
    if failed.is_empty() {
        Ok(report)
    } else {
        let error = Error::Consistency(format!("self-test failed: {}", failed.join(", ")));
        Err(Failure { error, report: Some(report) })
    }
}

/// A failed command, with whatever report was produced before the failure.
#[derive(Debug)]
pub struct Failure {
    pub error: Error,
    pub report: Option<Report>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Self { error, report: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decades() {
        assert_eq!(decade_grid(100_000_000), vec![10_000, 100_000, 1_000_000, 10_000_000, 100_000_000]);
        assert_eq!(decade_grid(5000), vec![10, 100, 1000, 5000]);
        assert_eq!(decade_grid(10), vec![10]);
    }
}
