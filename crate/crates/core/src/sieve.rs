//! Segmented, odd-only bit-packed sieve and the prime counting functions
//! built on top of it.
//!
//! Bit `i` of the table stands for the odd number `2i + 1`. Segments are
//! sieved independently (in parallel) against the base primes up to the
//! square root of the limit, so a finished [`PrimeTable`] is immutable and
//! can be shared freely between threads.

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::quad;

pub const MIN_LIMIT: u64 = 2;
pub const MAX_LIMIT: u64 = 1 << 40;
/// 256 KiB, about one L2 cache.
pub const DEFAULT_SEGMENT_BYTES: usize = 256 * 1024;

const CACHE_MAGIC: &[u8; 5] = b"MFSV1";
pub const CACHE_DIR_ENV: &str = "MERTENS_CACHE_DIR";

/// Residue class `a mod q` with `1 <= a <= q` and `gcd(q, a) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ApTarget {
    q: u64,
    a: u64,
}

impl ApTarget {
    pub fn new(q: u64, a: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidTarget { q, a, reason: "modulus must be positive" });
        }
        if a == 0 || a > q {
            return Err(Error::InvalidTarget { q, a, reason: "residue must satisfy 1 <= a <= q" });
        }
        if gcd(q, a) != 1 {
            return Err(Error::InvalidTarget { q, a, reason: "gcd(q, a) != 1" });
        }
        Ok(Self { q, a })
    }

    /// Like [`ApTarget::new`] but accepts any positive representative of the class.
    pub fn reduced(q: u64, a: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidTarget { q, a, reason: "modulus must be positive" });
        }
        let r = a % q;
        Self::new(q, if r == 0 { q } else { r })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        n % self.q == self.a % self.q
    }

    /// All reduced residues mod `q`, in increasing order.
    pub fn all_for(q: u64) -> Vec<ApTarget> {
        (1..=q).filter_map(|a| ApTarget::new(q, a).ok()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    segment_bytes: usize,
    words: Vec<u64>,
    /// Odd primes strictly before each segment.
    seg_prefix: Vec<u64>,
}

pub fn build_table(limit: u64) -> Result<PrimeTable> {
    PrimeTable::new(limit)
}

fn odd_bits(limit: u64) -> u64 {
    (limit + 1) / 2
}

fn small_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_segment_bytes(limit, DEFAULT_SEGMENT_BYTES)
    }

    pub fn with_segment_bytes(limit: u64, segment_bytes: usize) -> Result<Self> {
        if !(MIN_LIMIT..=MAX_LIMIT).contains(&limit) {
            return Err(Error::LimitOutOfRange(limit));
        }
        if segment_bytes == 0 || segment_bytes % 8 != 0 {
            return Err(Error::InvalidArgument(format!(
                "segment size {segment_bytes} must be a positive multiple of 8 bytes"
            )));
        }
        let nbits = odd_bits(limit);
        let nwords = nbits.div_ceil(64) as usize;
        let seg_words = segment_bytes / 8;
        let base: Vec<u64> = small_primes(isqrt(limit)).into_iter().skip(1).collect();
        let mut words = vec![u64::MAX; nwords];
        words
            .par_chunks_mut(seg_words)
            .enumerate()
            .for_each(|(s, chunk)| sieve_segment(chunk, (s * seg_words) as u64 * 64, &base));
        words[0] &= !1; // 1 is not prime
        let tail = nbits % 64;
        if tail != 0 {
            words[nwords - 1] &= (1u64 << tail) - 1;
        }
        let mut table = Self {
            limit,
            segment_bytes,
            words,
            seg_prefix: Vec::new(),
        };
        table.rebuild_prefix();
        Ok(table)
    }

    fn rebuild_prefix(&mut self) {
        let counts: Vec<u64> = self
            .words
            .chunks(self.segment_words())
            .map(|c| c.iter().map(|w| w.count_ones() as u64).sum())
            .collect();
        let mut acc = 0;
        self.seg_prefix = counts
            .into_iter()
            .map(|c| {
                let before = acc;
                acc += c;
                before
            })
            .collect();
    }

    fn segment_words(&self) -> usize {
        self.segment_bytes / 8
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn segment_bytes(&self) -> usize {
        self.segment_bytes
    }

    pub fn segment_count(&self) -> usize {
        self.seg_prefix.len()
    }

    /// Primality of `n`. Panics if `n` exceeds the table limit.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "{n} exceeds table limit {}", self.limit);
        if n == 2 {
            return true;
        }
        if n % 2 == 0 {
            return false;
        }
        let i = n / 2;
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// pi(t) for integer `t <= limit`.
    pub fn count_up_to(&self, t: u64) -> u64 {
        assert!(t <= self.limit, "{t} exceeds table limit {}", self.limit);
        if t < 2 {
            return 0;
        }
        // odd numbers <= t occupy bits 0..=(t-1)/2
        let last = (t - 1) / 2;
        let word = (last / 64) as usize;
        let seg = word / self.segment_words();
        let mut count = self.seg_prefix[seg];
        for w in &self.words[seg * self.segment_words()..word] {
            count += w.count_ones() as u64;
        }
        let bit = last % 64;
        let mask = if bit == 63 { u64::MAX } else { (1u64 << (bit + 1)) - 1 };
        count += (self.words[word] & mask).count_ones() as u64;
        count + 1
    }

    pub fn primes(&self) -> PrimeIter<'_> {
        self.primes_up_to(self.limit)
    }

    /// Primes `p <= t` in increasing order. `t` is clamped to the limit.
    pub fn primes_up_to(&self, t: u64) -> PrimeIter<'_> {
        let t = t.min(self.limit);
        PrimeIter {
            words: &self.words,
            bound: t,
            word_idx: 0,
            current: if t >= 3 { self.words[0] } else { 0 },
            two_pending: t >= 2,
        }
    }

    /// Per-segment CRC32 of the little-endian payload.
    pub fn segment_checksums(&self) -> Vec<u32> {
        self.words
            .chunks(self.segment_words())
            .map(|c| {
                let mut h = crc32fast::Hasher::new();
                for w in c {
                    h.update(&w.to_le_bytes());
                }
                h.finalize()
            })
            .collect()
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension("tmp");
        {
            let mut out = BufWriter::new(fs::File::create(&tmp)?);
            out.write_all(CACHE_MAGIC)?;
            out.write_all(&self.limit.to_le_bytes())?;
            out.write_all(&(self.segment_bytes as u64).to_le_bytes())?;
            out.write_all(&(self.segment_count() as u64).to_le_bytes())?;
            for crc in self.segment_checksums() {
                out.write_all(&crc.to_le_bytes())?;
            }
            for w in &self.words {
                out.write_all(&w.to_le_bytes())?;
            }
            out.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        let corrupt = |reason: &str| Error::CorruptCache {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        };
        let mut input = BufReader::new(fs::File::open(path)?);
        let mut magic = [0u8; 5];
        input.read_exact(&mut magic).map_err(|_| corrupt("truncated header"))?;
        if &magic != CACHE_MAGIC {
            return Err(corrupt("bad magic"));
        }
        let read_u64 = |input: &mut BufReader<fs::File>| -> Result<u64> {
            let mut b = [0u8; 8];
            input.read_exact(&mut b).map_err(|_| corrupt("truncated header"))?;
            Ok(u64::from_le_bytes(b))
        };
        let limit = read_u64(&mut input)?;
        let segment_bytes = read_u64(&mut input)? as usize;
        let segments = read_u64(&mut input)? as usize;
        if !(MIN_LIMIT..=MAX_LIMIT).contains(&limit) || segment_bytes == 0 || segment_bytes % 8 != 0 {
            return Err(corrupt("header out of range"));
        }
        let nwords = odd_bits(limit).div_ceil(64) as usize;
        if segments != nwords.div_ceil(segment_bytes / 8) {
            return Err(corrupt("segment count does not match limit"));
        }
        let mut crcs = vec![0u32; segments];
        for crc in crcs.iter_mut() {
            let mut b = [0u8; 4];
            input.read_exact(&mut b).map_err(|_| corrupt("truncated checksum block"))?;
            *crc = u32::from_le_bytes(b);
        }
        let mut bytes = vec![0u8; nwords * 8];
        input.read_exact(&mut bytes).map_err(|_| corrupt("truncated payload"))?;
        if input.read(&mut [0u8; 1])? != 0 {
            return Err(corrupt("trailing bytes"));
        }
        let words = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        let mut table = Self {
            limit,
            segment_bytes,
            words,
            seg_prefix: Vec::new(),
        };
        if table.segment_checksums() != crcs {
            return Err(corrupt("segment checksum mismatch"));
        }
        table.rebuild_prefix();
        Ok(table)
    }
}

fn sieve_segment(chunk: &mut [u64], first_bit: u64, base: &[u64]) {
    let last_bit = first_bit + chunk.len() as u64 * 64 - 1;
    let high = 2 * last_bit + 1;
    for &p in base {
        if p * p > high {
            break;
        }
        let start = if (p * p - 1) / 2 >= first_bit {
            (p * p - 1) / 2
        } else {
            // first odd multiple of p at or above 2*first_bit + 1
            let low = 2 * first_bit + 1;
            let mut m = low.div_ceil(p) * p;
            if m % 2 == 0 {
                m += p;
            }
            (m - 1) / 2
        };
        let mut i = start;
        while i <= last_bit {
            let local = i - first_bit;
            chunk[(local / 64) as usize] &= !(1u64 << (local % 64));
            i += p;
        }
    }
}

pub struct PrimeIter<'a> {
    words: &'a [u64],
    bound: u64,
    word_idx: usize,
    current: u64,
    two_pending: bool,
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.two_pending {
            self.two_pending = false;
            return Some(2);
        }
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as u64;
                self.current &= self.current - 1;
                let n = 2 * (self.word_idx as u64 * 64 + bit) + 1;
                if n > self.bound {
                    self.current = 0;
                    self.word_idx = self.words.len();
                    return None;
                }
                return Some(n);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() || (self.word_idx as u64 * 64) * 2 + 1 > self.bound {
                self.word_idx = self.words.len();
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

/// Default cache directory: `$MERTENS_CACHE_DIR`, else `$XDG_CACHE_HOME/mertens`,
/// else `$HOME/.cache/mertens`, else the system temp dir.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_DIR_ENV) {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(dir).join("mertens");
    }
    if let Some(home) = std::env::var_os("HOME") {
        return PathBuf::from(home).join(".cache").join("mertens");
    }
    std::env::temp_dir().join("mertens")
}

pub fn cache_path(dir: &Path, limit: u64, segment_bytes: usize) -> PathBuf {
    dir.join(format!("sieve-{limit}-{segment_bytes}.mfsv"))
}

/// Load the table from `dir` if a valid cache exists, otherwise sieve and
/// try to store it. A corrupt cache file is reported, not silently replaced.
pub fn build_table_cached(limit: u64, dir: &Path) -> Result<PrimeTable> {
    let path = cache_path(dir, limit, DEFAULT_SEGMENT_BYTES);
    if path.exists() {
        let table = PrimeTable::read_cache(&path)?;
        if table.limit() != limit {
            return Err(Error::CorruptCache {
                path,
                reason: format!("cached limit {} differs from requested {limit}", table.limit()),
            });
        }
        return Ok(table);
    }
    let table = PrimeTable::new(limit)?;
    // a read-only cache dir is not fatal
    let _ = table.write_cache(&path);
    Ok(table)
}

fn floor_arg(table: &PrimeTable, t: f64) -> Result<u64> {
    if !(t >= 2.0) {
        return Err(Error::BelowTwo(t));
    }
    if t.floor() > table.limit() as f64 {
        return Err(Error::BeyondTable { value: t, limit: table.limit() });
    }
    Ok(t.floor() as u64)
}

pub fn pi(table: &PrimeTable, t: f64) -> Result<u64> {
    Ok(table.count_up_to(floor_arg(table, t)?))
}

/// Number of primes `p <= t` with `p = a (mod q)`.
pub fn pi_ap(table: &PrimeTable, t: f64, ap: ApTarget) -> Result<u64> {
    let n = floor_arg(table, t)?;
    if ap.q() == 1 {
        return Ok(table.count_up_to(n));
    }
    Ok(table.primes_up_to(n).filter(|&p| ap.contains(p)).count() as u64)
}

/// Logarithmic integral from 2 to `t`.
pub fn li(t: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(Error::BelowTwo(t));
    }
    if t == 2.0 {
        return Ok(0.0);
    }
    let scale = (t / t.ln()).max(1.0);
    let r = quad::integrate(|u: f64| 1.0 / u.ln(), 2.0, t, 1e-12 * scale, 1e-14, 100_000);
    Ok(r.value)
}

pub fn phi_of(ap: ApTarget) -> u64 {
    crate::arith::totient(ap.q())
}

/// E(t; q, a) = pi(t; q, a) - li(t) / phi(q).
pub fn error_term(table: &PrimeTable, t: f64, ap: ApTarget) -> Result<f64> {
    let count = pi_ap(table, t, ap)?;
    Ok(count as f64 - li(t)? / phi_of(ap) as f64)
}

/// Number of primes `p <= t` dividing `q`.
pub fn omega_q(table: &PrimeTable, t: f64, q: u64) -> Result<u64> {
    let n = floor_arg(table, t)?;
    Ok(crate::arith::prime_divisors(q).into_iter().filter(|&p| p <= n).count() as u64)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CountingSnapshot {
    pub t: f64,
    pub pi: u64,
    pub pi_ap: u64,
    pub li: f64,
    pub error: f64,
}

pub fn counting_snapshot(table: &PrimeTable, t: f64, ap: ApTarget) -> Result<CountingSnapshot> {
    let pi_all = pi(table, t)?;
    let pi_ap = pi_ap(table, t, ap)?;
    let li = li(t)?;
    Ok(CountingSnapshot {
        t,
        pi: pi_all,
        pi_ap,
        li,
        error: pi_ap as f64 - li / phi_of(ap) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_table() {
        let t = build_table(10).unwrap();
        assert_eq!(t.primes().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        assert_eq!(t.count_up_to(10), 4);
        let t = build_table(2).unwrap();
        assert_eq!(t.primes().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn limit_bounds() {
        assert!(matches!(build_table(1), Err(Error::LimitOutOfRange(1))));
        assert!(matches!(build_table(MAX_LIMIT + 1), Err(Error::LimitOutOfRange(_))));
    }

    #[test]
    fn membership_matches_trial_division_with_tiny_segments() {
        let t = PrimeTable::with_segment_bytes(100_000, 64).unwrap();
        for n in 0..=100_000 {
            assert_eq!(t.is_prime(n), trial(n), "n = {n}");
        }
        let mut running = 0;
        for n in 0..=5_000 {
            if trial(n) {
                running += 1;
            }
            assert_eq!(t.count_up_to(n), running);
        }
    }

    #[test]
    fn iteration_agrees_with_counting_across_bounds() {
        let t = PrimeTable::with_segment_bytes(50_000, 8).unwrap();
        for bound in [2u64, 3, 4, 127, 128, 129, 130, 4096, 49_999, 50_000] {
            assert_eq!(t.primes_up_to(bound).count() as u64, t.count_up_to(bound), "bound {bound}");
            assert!(t.primes_up_to(bound).all(|p| p <= bound));
        }
    }

    #[test]
    fn pi_ap_examples() {
        let t = build_table(1000).unwrap();
        assert_eq!(pi_ap(&t, 10.0, ApTarget::new(4, 1).unwrap()).unwrap(), 1);
        assert_eq!(pi_ap(&t, 10.0, ApTarget::new(1, 1).unwrap()).unwrap(), 4);
        assert_eq!(pi_ap(&t, 2.0, ApTarget::new(3, 1).unwrap()).unwrap(), 0);
        assert_eq!(pi_ap(&t, 10.9, ApTarget::new(4, 1).unwrap()).unwrap(), 1);
        assert!(matches!(pi_ap(&t, 1001.0, ApTarget::new(1, 1).unwrap()), Err(Error::BeyondTable { .. })));
        assert!(matches!(pi_ap(&t, 1.5, ApTarget::new(1, 1).unwrap()), Err(Error::BelowTwo(_))));
    }

    #[test]
    fn omega_examples() {
        let t = build_table(1000).unwrap();
        assert_eq!(omega_q(&t, 10.0, 12).unwrap(), 2);
        assert_eq!(omega_q(&t, 2.0, 15).unwrap(), 0);
        assert_eq!(omega_q(&t, 100.0, 30).unwrap(), 3);
    }

    #[test]
    fn target_validation() {
        assert!(ApTarget::new(4, 2).is_err());
        assert!(ApTarget::new(4, 5).is_err());
        assert!(ApTarget::new(0, 1).is_err());
        assert_eq!(ApTarget::reduced(4, 7).unwrap(), ApTarget::new(4, 3).unwrap());
        assert_eq!(ApTarget::reduced(1, 5).unwrap(), ApTarget::new(1, 1).unwrap());
        assert_eq!(ApTarget::all_for(12).iter().map(|t| t.a()).collect::<Vec<_>>(), vec![1, 5, 7, 11]);
    }

    #[test]
    fn li_small_values() {
        assert_eq!(li(2.0).unwrap(), 0.0);
        assert!(matches!(li(1.9), Err(Error::BelowTwo(_))));
        // li(10) - li(2) via mpmath: 5.120435724669805...
        assert!((li(10.0).unwrap() - 5.120_435_724_669_805).abs() < 1e-11);
    }

    #[test]
    fn error_term_small() {
        let t = build_table(100).unwrap();
        let e = error_term(&t, 10.0, ApTarget::new(4, 1).unwrap()).unwrap();
        assert!((e - (1.0 - 5.120_435_724_669_805 / 2.0)).abs() < 1e-11);
        assert_eq!(error_term(&t, 2.0, ApTarget::new(1, 1).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let t = PrimeTable::with_segment_bytes(200_000, 1024).unwrap();
        let path = dir.path().join("t.mfsv");
        t.write_cache(&path).unwrap();
        let back = PrimeTable::read_cache(&path).unwrap();
        assert_eq!(back.segment_checksums(), t.segment_checksums());
        assert_eq!(back.count_up_to(200_000), t.count_up_to(200_000));

        let mut bytes = fs::read(&path).unwrap();
        let n = bytes.len();
        bytes[n - 100] ^= 0x10;
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(PrimeTable::read_cache(&path), Err(Error::CorruptCache { .. })));

        fs::write(&path, b"MFSV2garbage").unwrap();
        assert!(matches!(PrimeTable::read_cache(&path), Err(Error::CorruptCache { .. })));
    }

    #[test]
    fn cached_builder_reuses_file() {
        let dir = tempfile::tempdir().unwrap();
        let a = build_table_cached(30_000, dir.path()).unwrap();
        assert!(cache_path(dir.path(), 30_000, DEFAULT_SEGMENT_BYTES).exists());
        let b = build_table_cached(30_000, dir.path()).unwrap();
        assert_eq!(a.segment_checksums(), b.segment_checksums());
    }
}
