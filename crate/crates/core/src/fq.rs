//! The constant field F_q for an odd prime power q.
//!
//! Elements are stored in an additive encoding: the coefficients of the
//! element's representative over the prime field, read as base-p digits.
//! For a prime q this is just the integer `0..q`. Multiplication goes
//! through log/antilog tables built from a primitive element `g`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size; tables are O(q).
pub const MAX_Q: u64 = 1 << 16;

/// An element of F_q in additive encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(pub(crate) u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Raw additive encoding, in `0..q`.
    pub fn encoding(self) -> u32 {
        self.0
    }
}

struct Tables {
    q: u32,
    p: u32,
    e: u32,
    /// Defining polynomial of F_q over F_p, little-endian, monic; empty when e = 1.
    modulus: Vec<u32>,
    /// exp[i] = g^i, stored for i in 0..2(q-1) so sums of logs need no reduction.
    exp: Vec<u32>,
    /// log[a] for a != 0.
    log: Vec<u32>,
    neg: Vec<u32>,
}

/// Shared handle to the tables of F_q. Cloning is cheap.
#[derive(Clone)]
pub struct Fq(Arc<Tables>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.0.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.q == other.0.q && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Fq {}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl Fq {
    /// Builds F_q. Fails unless q is an odd prime power no larger than [`MAX_Q`].
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = match prime_power(q) {
            Some((p, e)) if p != 2 && q <= MAX_Q => (p as u32, e),
            _ => return Err(Error::UnsupportedFieldSize(q)),
        };
        let q = q as u32;
        let (modulus, exp_one) = if e == 1 {
            (Vec::new(), prime_field_powers(p))
        } else {
            extension_powers(p, e)
        };
        let order = (q - 1) as usize;
        let mut log = vec![0u32; q as usize];
        for (i, &a) in exp_one.iter().enumerate() {
            log[a as usize] = i as u32;
        }
        let mut exp = exp_one.clone();
        exp.extend_from_slice(&exp_one);
        debug_assert_eq!(exp.len(), 2 * order);
        let mut neg = vec![0u32; q as usize];
        for a in 0..q {
            neg[a as usize] = digits_map(a, p, e, |d| (p - d) % p);
        }
        Ok(Fq(Arc::new(Tables {
            q,
            p,
            e,
            modulus,
            exp,
            log,
            neg,
        })))
    }

    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn extension_degree(&self) -> u32 {
        self.0.e
    }

    /// Defining polynomial of F_q over the prime field (empty for prime q).
    pub fn defining_polynomial(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        Scalar::ONE
    }

    /// The fixed primitive element `g` used by the `g^j` text form.
    pub fn generator(&self) -> Scalar {
        Scalar(self.0.exp[1 % (self.0.q as usize - 1)])
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given additive encoding; `None` if out of range.
    pub fn from_encoding(&self, enc: u32) -> Option<Scalar> {
        (enc < self.0.q).then_some(Scalar(enc))
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.0.q).map(Scalar)
    }

    pub fn units(&self) -> impl Iterator<Item = Scalar> {
        (1..self.0.q).map(Scalar)
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        let t = &*self.0;
        if t.e == 1 {
            let s = a.0 + b.0;
            Scalar(if s >= t.p { s - t.p } else { s })
        } else {
            Scalar(digits_zip(a.0, b.0, t.p, t.e, |x, y| (x + y) % t.p))
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if a.0 == 0 || b.0 == 0 {
            return Scalar::ZERO;
        }
        let t = &*self.0;
        Scalar(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        if a.0 == 0 {
            return None;
        }
        let t = &*self.0;
        let l = t.log[a.0 as usize];
        Some(Scalar(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize]))
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Scalar, n: u64) -> Scalar {
        if n == 0 {
            return Scalar::ONE;
        }
        if a.0 == 0 {
            return Scalar::ZERO;
        }
        let t = &*self.0;
        let order = (t.q - 1) as u64;
        let l = (t.log[a.0 as usize] as u64 * (n % order)) % order;
        Scalar(t.exp[l as usize])
    }

    /// Discrete log to base `g`; `None` for zero.
    pub fn log(&self, a: Scalar) -> Option<u32> {
        (a.0 != 0).then(|| self.0.log[a.0 as usize])
    }

    /// `g^j`.
    pub fn exp(&self, j: u64) -> Scalar {
        let order = (self.0.q - 1) as u64;
        Scalar(self.0.exp[(j % order) as usize])
    }

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, a: Scalar) -> i8 {
        match self.log(a) {
            None => 0,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    pub fn is_square(&self, a: Scalar) -> bool {
        self.quadratic_character(a) >= 0
    }

    /// Fixed nonsquare used to canonicalise discriminants: the generator.
    pub fn canonical_nonsquare(&self) -> Scalar {
        self.generator()
    }

    /// Text form: the integer encoding over a prime field, `g^j` otherwise.
    pub fn format(&self, a: Scalar) -> String {
        if self.0.e == 1 || a.0 == 0 {
            a.0.to_string()
        } else {
            format!("g^{}", self.0.log[a.0 as usize])
        }
    }

    /// Parses an integer (reduced into the prime field for prime q, taken as an
    /// additive encoding otherwise) or `g^j`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("g^").or_else(|| s.strip_prefix("g**")) {
            let j: u64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator exponent in {s:?}")))?;
            return Ok(self.exp(j));
        }
        if s == "g" {
            return Ok(self.generator());
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b.trim()),
            None => (false, s),
        };
        let n: u64 = body
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        let v = if self.0.e == 1 {
            Scalar((n % self.0.p as u64) as u32)
        } else {
            self.from_encoding(n as u32)
                .filter(|_| n < self.0.q as u64)
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "scalar encoding {n} out of range for q = {}",
                        self.0.q
                    ))
                })?
        };
        Ok(if neg { self.neg(v) } else { v })
    }
}

fn prime_field_powers(p: u32) -> Vec<u32> {
    let order = p - 1;
    let factors = small_prime_factors(order as u64);
    let g = (2..p.max(3))
        .find(|&g| {
            factors
                .iter()
                .all(|&r| mod_pow(g as u64, (order as u64) / r, p as u64) != 1)
        })
        .unwrap_or(1);
    let mut out = Vec::with_capacity(order as usize);
    let mut cur = 1u64;
    for _ in 0..order {
        out.push(cur as u32);
        cur = cur * g as u64 % p as u64;
    }
    out
}

/// Finds the lexicographically first primitive polynomial of degree e over
/// F_p and returns it together with the powers of its root.
fn extension_powers(p: u32, e: u32) -> (Vec<u32>, Vec<u32>) {
    let q = p.pow(e);
    let order = (q - 1) as usize;
    // candidate lower coefficients as an integer in base p
    for cand in 1..q {
        let mut m: Vec<u32> = (0..e).map(|i| (cand / p.pow(i)) % p).collect();
        if m[0] == 0 {
            continue;
        }
        m.push(1);
        let mut cur = vec![0u32; e as usize];
        cur[0] = 1;
        let mut powers = Vec::with_capacity(order);
        let mut primitive = true;
        for i in 0..order {
            let enc = encode(&cur, p);
            if i > 0 && enc == 1 {
                primitive = false;
                break;
            }
            powers.push(enc);
            // multiply by X modulo m
            let lead = cur[e as usize - 1];
            for k in (1..e as usize).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            if lead != 0 {
                for k in 0..e as usize {
                    cur[k] = (cur[k] + (p - lead) * m[k] % p) % p;
                }
            }
        }
        if primitive && encode(&cur, p) == 1 {
            return (m, powers);
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn digits_map(a: u32, p: u32, e: u32, f: impl Fn(u32) -> u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    let mut a = a;
    for _ in 0..e {
        out += f(a % p) * scale;
        a /= p;
        scale *= p;
    }
    out
}

fn digits_zip(a: u32, b: u32, p: u32, e: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..e {
        out += f(a % p, b % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

pub(crate) fn small_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_composite() {
        for q in [0, 1, 2, 4, 6, 8, 12, 15, 1024] {
            assert!(Fq::new(q).is_err(), "q = {q}");
        }
        assert!(Fq::new(MAX_Q + 1).is_err());
    }

    #[test]
    fn field_axioms_small() {
        for q in [3u64, 5, 7, 9, 25, 27] {
            let f = Fq::new(q).unwrap();
            let g = f.generator();
            let mut seen = std::collections::HashSet::new();
            for j in 0..q - 1 {
                assert!(seen.insert(f.exp(j)));
            }
            assert_eq!(seen.len() as u64, q - 1, "g generates F_{q}^*");
            assert_eq!(f.pow(g, q - 1), f.one());
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if let Some(ai) = f.inv(a) {
                    assert_eq!(f.mul(a, ai), f.one());
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements().step_by(2) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn squares_have_size_half_plus_one() {
        for q in [3u64, 5, 9, 11, 25] {
            let f = Fq::new(q).unwrap();
            let squares: std::collections::HashSet<_> = f.elements().map(|a| f.mul(a, a)).collect();
            assert_eq!(squares.len() as u64, q.div_ceil(2));
            assert!(!f.is_square(f.canonical_nonsquare()));
        }
    }

    #[test]
    fn text_roundtrip() {
        let f = Fq::new(9).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
        let f3 = Fq::new(3).unwrap();
        assert_eq!(f3.parse("-1").unwrap(), Scalar(2));
        assert_eq!(f3.parse("5").unwrap(), Scalar(2));
        assert!(f3.parse("x").is_err());
    }
}
