//! Dirichlet characters mod q.
//!
//! `(Z/qZ)*` is split over the prime powers of `q` (CRT). An odd prime power
//! contributes one cyclic factor generated by its smallest primitive root;
//! `2^k` contributes `<-1>` for `k >= 2` and `<5>` for `k >= 3`. A character is
//! an exponent vector on those factors, and its values are kept as exact
//! angles `k / m` (turns) with `m` the group exponent.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{divisors, factorize, gcd, lcm, pow_mod, prime_divisors, totient};

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Component {
    prime: u64,
    power: u64,
}

/// Cyclic decomposition of the unit group mod q with a full discrete-log table.
pub struct UnitGroup {
    q: u64,
    phi: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
    exponent: u64,
    /// `m / order_i`, so that `angle = sum e_i * dlog_i * weight_i (mod m)`.
    weights: Vec<u64>,
    /// Flattened `q x rank` table; `NO_LOG` marks residues sharing a factor with q.
    dlog: Vec<u32>,
    roots: Vec<Complex64>,
}

impl fmt::Debug for UnitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnitGroup")
            .field("q", &self.q)
            .field("generators", &self.generators)
            .field("orders", &self.orders)
            .finish()
    }
}

fn multiplicative_order(g: u64, n: u64, group_order: u64) -> u64 {
    let mut order = group_order;
    for p in prime_divisors(group_order) {
        while order % p == 0 && pow_mod(g, order / p, n) == 1 {
            order /= p;
        }
    }
    order
}

fn smallest_primitive_root(pk: u64) -> u64 {
    let phi = totient(pk);
    (2..pk)
        .find(|&g| gcd(g, pk) == 1 && multiplicative_order(g, pk, phi) == phi)
        .expect("odd prime powers are cyclic")
}

/// Chinese-remainder lift of `r mod m` that is `1` modulo `q / m`.
fn crt_lift(r: u64, m: u64, q: u64) -> u64 {
    let rest = q / m;
    if rest == 1 {
        return r % m;
    }
    // n = 1 + rest * t with n = r (mod m)
    let inv = mod_inverse(rest % m, m).expect("coprime components");
    let t = ((r + m - 1) % m) as u128 * inv as u128 % m as u128;
    (1 + rest as u128 * t) as u64 % q
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn decompose_units(q: u64) -> Arc<UnitGroup> {
    assert!(q >= 1, "modulus must be positive");
    UnitGroup::new(q)
}

impl UnitGroup {
    pub fn new(q: u64) -> Arc<Self> {
        assert!(q >= 1, "modulus must be positive");
        assert!(q <= u32::MAX as u64, "modulus too large for the dlog table");
        let comps: Vec<Component> = factorize(q)
            .into_iter()
            .map(|(p, k)| Component { prime: p, power: p.pow(k) })
            .collect();

        // (component index, local generator, order) per cyclic factor
        let mut factors: Vec<(usize, u64, u64)> = Vec::new();
        for (ci, c) in comps.iter().enumerate() {
            if c.prime == 2 {
                if c.power >= 4 {
                    factors.push((ci, c.power - 1, 2));
                }
                if c.power >= 8 {
                    factors.push((ci, 5, c.power / 4));
                }
            } else {
                factors.push((ci, smallest_primitive_root(c.power), totient(c.power)));
            }
        }
        let rank = factors.len();
        let orders: Vec<u64> = factors.iter().map(|f| f.2).collect();
        let generators: Vec<u64> = factors
            .iter()
            .map(|&(ci, g, _)| crt_lift(g, comps[ci].power, q))
            .collect();
        let exponent = orders.iter().fold(1, |acc, &o| lcm(acc, o));
        let weights = orders.iter().map(|o| exponent / o).collect();

        // local dlog tables, one per component, each entry a slice of exponents
        let mut local: Vec<Vec<Vec<u32>>> = Vec::with_capacity(comps.len());
        for (ci, c) in comps.iter().enumerate() {
            let mine: Vec<usize> = (0..rank).filter(|&f| factors[f].0 == ci).collect();
            let mut table = vec![Vec::new(); c.power as usize];
            match mine.len() {
                0 => table[1] = Vec::new(),
                1 => {
                    let (_, g, ord) = factors[mine[0]];
                    let mut x = 1u64;
                    for e in 0..ord {
                        table[x as usize] = vec![e as u32];
                        x = x * g % c.power;
                    }
                }
                _ => {
                    // 2^k, k >= 3: n = (-1)^s 5^t
                    let mut x = 1u64;
                    for t in 0..c.power / 4 {
                        table[x as usize] = vec![0, t as u32];
                        table[(c.power - x) as usize] = vec![1, t as u32];
                        x = x * 5 % c.power;
                    }
                }
            }
            local.push(table);
        }

        let mut dlog = vec![NO_LOG; q as usize * rank.max(1)];
        for n in 0..q {
            if gcd(n, q) != 1 {
                continue;
            }
            let row = &mut dlog[n as usize * rank.max(1)..];
            let mut f = 0;
            for (ci, c) in comps.iter().enumerate() {
                for &e in &local[ci][(n % c.power) as usize] {
                    row[f] = e;
                    f += 1;
                }
            }
            if rank == 0 {
                row[0] = 0;
            }
        }

        let roots = (0..exponent).map(|k| root_of_unity(k, exponent)).collect();
        Arc::new(Self {
            q,
            phi: totient(q),
            generators,
            orders,
            exponent,
            weights,
            dlog,
            roots,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Exponent vector of `n`, or `None` if `gcd(n, q) > 1`.
    pub fn dlog(&self, n: u64) -> Option<Vec<u64>> {
        let r = (n % self.q) as usize;
        let width = self.rank().max(1);
        let row = &self.dlog[r * width..r * width + width];
        if row[0] == NO_LOG {
            return None;
        }
        Some(row[..self.rank()].iter().map(|&e| e as u64).collect())
    }

    #[inline]
    fn dlog_row(&self, n: u64) -> Option<&[u32]> {
        let r = (n % self.q) as usize;
        let width = self.rank().max(1);
        let row = &self.dlog[r * width..r * width + width];
        (row[0] != NO_LOG).then(|| &row[..self.rank()])
    }

    #[inline]
    pub(crate) fn root(&self, k: u64) -> Complex64 {
        self.roots[k as usize]
    }
}

/// `exp(2 pi i k / m)` with exact values on the quarter turns.
pub fn root_of_unity(k: u64, m: u64) -> Complex64 {
    let k = k % m;
    if (4 * k) % m == 0 {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    // reduce to the nearest half turn for accuracy
    let x = if 2 * k > m { k as f64 / m as f64 - 1.0 } else { k as f64 / m as f64 };
    let (s, c) = (std::f64::consts::TAU * x).sin_cos();
    Complex64::new(c, s)
}

/// Exact angle `num / den` of a root of unity, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    pub num: u64,
    pub den: u64,
}

impl Angle {
    pub fn new(num: u64, den: u64) -> Self {
        let num = num % den;
        let g = gcd(num, den).max(1);
        Self { num: num / g, den: den / g }
    }

    pub fn to_complex(self) -> Complex64 {
        root_of_unity(self.num, self.den)
    }
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exps: Vec<u64>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}{:?}", self.group.q, self.exps)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.q == other.group.q && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn new(group: Arc<UnitGroup>, exps: Vec<u64>) -> Self {
        assert_eq!(exps.len(), group.rank(), "one exponent per cyclic factor");
        let exps = exps.iter().zip(group.orders()).map(|(e, o)| e % o).collect();
        Self { group, exps }
    }

    pub fn principal(group: Arc<UnitGroup>) -> Self {
        let r = group.rank();
        Self::new(group, vec![0; r])
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.q
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// True when every value is real (`chi = conj(chi)`).
    pub fn is_real(&self) -> bool {
        self.exps.iter().zip(self.group.orders()).all(|(e, o)| (2 * e) % o == 0)
    }

    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(self.group.orders())
            .fold(1, |acc, (&e, &o)| lcm(acc, o / gcd(e, o)))
    }

    /// Angle index `k` in `[0, m)` so that `chi(n) = exp(2 pi i k / m)`.
    #[inline]
    pub fn angle_index(&self, n: u64) -> Option<u64> {
        let row = self.group.dlog_row(n)?;
        let m = self.group.exponent;
        let mut k = 0u128;
        for ((&d, &e), &w) in row.iter().zip(&self.exps).zip(&self.group.weights) {
            k += d as u128 * e as u128 * w as u128;
        }
        Some((k % m as u128) as u64)
    }

    pub fn angle(&self, n: u64) -> Option<Angle> {
        self.angle_index(n).map(|k| Angle::new(k, self.group.exponent))
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        match self.angle_index(n) {
            Some(k) => self.group.root(k),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .exps
            .iter()
            .zip(self.group.orders())
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        Self { group: self.group.clone(), exps }
    }

    /// Pointwise product of two characters to the same modulus.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus(), other.modulus(), "characters to different moduli");
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(self.group.orders())
            .map(|((a, b), o)| (a + b) % o)
            .collect();
        Self { group: self.group.clone(), exps }
    }

    /// Conductor `f` and the primitive character mod `f` inducing `self`.
    pub fn conductor_and_primitive(&self) -> (u64, DirichletCharacter) {
        let q = self.modulus();
        let f = divisors(q)
            .into_iter()
            .find(|&f| {
                (1..q)
                    .step_by(f as usize)
                    .filter(|&n| gcd(n, q) == 1)
                    .all(|n| self.angle_index(n) == Some(0))
            })
            .expect("f = q always qualifies");
        if f == q {
            return (q, self.clone());
        }
        let small = UnitGroup::new(f);
        let m = self.group.exponent;
        let exps = small
            .generators()
            .iter()
            .zip(small.orders())
            .map(|(&g, &ord)| {
                let lift = (0..)
                    .map(|t| g + t * f)
                    .find(|&n| gcd(n, q) == 1)
                    .expect("a lift coprime to q exists");
                let k = self.angle_index(lift).expect("lift is a unit");
                // chi(g) = exp(2 pi i k / m) = exp(2 pi i e / ord)
                debug_assert_eq!((k as u128 * ord as u128) % m as u128, 0);
                (k as u128 * ord as u128 / m as u128) as u64
            })
            .collect();
        (f, DirichletCharacter::new(small, exps))
    }
}

/// All `phi(q)` characters mod `q`, principal first.
pub fn characters_mod(q: u64) -> Vec<DirichletCharacter> {
    characters_of(&decompose_units(q))
}

/// Mixed-radix enumeration with the first factor varying fastest; the
/// position of a character equals `sum e_i * stride_i`.
pub fn characters_of(group: &Arc<UnitGroup>) -> Vec<DirichletCharacter> {
    let orders = group.orders().to_vec();
    let total: u64 = orders.iter().product();
    (0..total)
        .map(|mut idx| {
            let exps = orders
                .iter()
                .map(|&o| {
                    let e = idx % o;
                    idx /= o;
                    e
                })
                .collect();
            DirichletCharacter::new(group.clone(), exps)
        })
        .collect()
}

/// Position of a character in [`characters_of`] order.
pub fn character_index(chi: &DirichletCharacter) -> usize {
    let mut idx = 0u64;
    let mut stride = 1u64;
    for (&e, &o) in chi.exponents().iter().zip(chi.group().orders()) {
        idx += e * stride;
        stride *= o;
    }
    idx as usize
}
