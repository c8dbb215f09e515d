use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mertens", version, about = "Mertens constants for primes in progressions and Chebotarev classes")]
pub struct Cli {
    /// Largest integer the prime table may cover.
    #[arg(long, global = true, default_value = "1e8", value_parser = parse_count)]
    pub limit: u64,

    /// Directory for the sieve cache (default: $MERTENS_CACHE_DIR or the user cache dir).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Prime cutoff P for the prime-power correction sums (default min(1e7, limit)).
    #[arg(long, global = true, value_parser = parse_count)]
    pub correction_cutoff: Option<u64>,

    /// Omit the timestamped metadata line from CSV output.
    #[arg(long, global = true)]
    pub no_meta: bool,

    /// Tolerance override, NAME=VALUE (repeatable).
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    pub tolerances: Vec<(String, f64)>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// L, g, G, g*, G* for one residue class or all classes of a modulus.
    Constants {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: Option<u64>,
    },
    /// Reciprocal sums and products over an x-grid against their main terms.
    Mertens {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long = "x-grid", value_parser = parse_grid)]
        x_grid: Grid,
        /// Also decompose each sum using data up to this bound.
        #[arg(long, value_parser = parse_count)]
        tail: Option<u64>,
    },
    /// Truncated integral of t^-2 E(t; q, a) against g(q, a) + log log 2 / phi(q).
    Integral {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long = "X", value_parser = parse_count)]
        big_x: u64,
    },
    /// Products over an x-grid with the large-modulus bounds.
    Product {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long = "x-grid", value_parser = parse_grid)]
        x_grid: Grid,
    },
    /// Exact count of y-pliable n <= x in a progression against the main term.
    Pliable {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        /// Exponent A in the envelope (log log x)^(A+3) / log x.
        #[arg(long, default_value_t = mertens_core::pliable::DEFAULT_ENVELOPE_A)]
        envelope_a: f64,
    },
    /// Frobenius class statistics: cyclo:q, quad:D or cubic-s3.
    Chebotarev {
        setting: String,
        #[arg(long)]
        class: Option<u64>,
        /// Upper end of the data (default: the sieve limit).
        #[arg(long, value_parser = parse_count)]
        x: Option<u64>,
    },
    /// Fast internal consistency checks at small scale.
    Selftest,
}

pub type Grid = Vec<u64>;

/// Nonnegative integer, accepting `1e8` style.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !(v >= 0.0) || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("'{s}' is not a nonnegative integer"));
    }
    Ok(v as u64)
}

/// `start:end:10x` (multiplicative), or a comma list of values.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, end, step] => {
            let start = parse_count(start)?;
            let end = parse_count(end)?;
            let factor = step
                .strip_suffix('x')
                .ok_or_else(|| format!("step '{step}' must look like 10x"))
                .and_then(parse_count)?;
            if factor < 2 || start == 0 || start > end {
                return Err(format!("bad grid '{s}'"));
            }
            let mut out = vec![];
            let mut x = start;
            while x <= end {
                out.push(x);
                x = match x.checked_mul(factor) {
                    Some(v) => v,
                    None => break,
                };
            }
            out
        }
        [list] => list.split(',').map(parse_count).collect::<Result<_, _>>()?,
        _ => return Err(format!("bad grid '{s}'")),
    };
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("grid '{s}' must be increasing"));
    }
    Ok(grid)
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let v: f64 = v.parse().map_err(|_| format!("bad tolerance '{v}'"))?;
    if !(v >= 0.0) {
        return Err(format!("tolerance must be nonnegative: '{s}'"));
    }
    Ok((k.to_string(), v))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sieve_limit: u64,
    pub cache_dir: PathBuf,
    pub format: Format,
    pub correction_cutoff: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub meta: bool,
}

pub const MIN_SIEVE_LIMIT: u64 = 1000;
pub const DEFAULT_CORRECTION_CUTOFF: u64 = mertens_core::ap_constants::DEFAULT_CUTOFF;

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, String> {
        if cli.limit < MIN_SIEVE_LIMIT {
            return Err(format!("--limit must be at least {MIN_SIEVE_LIMIT}"));
        }
        let correction_cutoff = cli.correction_cutoff.unwrap_or(DEFAULT_CORRECTION_CUTOFF.min(cli.limit));
        if correction_cutoff > cli.limit {
            return Err(format!("--correction-cutoff {correction_cutoff} exceeds --limit {}", cli.limit));
        }
        if correction_cutoff < 2 {
            return Err("--correction-cutoff must be at least 2".into());
        }
        Ok(Self {
            sieve_limit: cli.limit,
            cache_dir: cli.cache_dir.clone().unwrap_or_else(mertens_core::sieve::default_cache_dir),
            format: cli.format,
            correction_cutoff,
            tolerances: cli.tolerances.iter().cloned().collect(),
            meta: !cli.no_meta,
        })
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e8"), Ok(100_000_000));
        assert_eq!(parse_count("12345"), Ok(12345));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1e4:1e8:10x").unwrap(), vec![10_000, 100_000, 1_000_000, 10_000_000, 100_000_000]);
        assert_eq!(parse_grid("1e12").unwrap(), vec![1_000_000_000_000]);
        assert_eq!(parse_grid("10,100").unwrap(), vec![10, 100]);
        assert_eq!(parse_grid("2:20:3x").unwrap(), vec![2, 6, 18]);
        assert!(parse_grid("1e4:1e8:10").is_err());
        assert!(parse_grid("100,10").is_err());
    }
}
