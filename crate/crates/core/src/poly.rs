//! Polynomials in A = F_q[T].

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fq::{Fq, Scalar};

/// An element of A = F_q[T], little-endian, without trailing zeros.
///
/// The zero polynomial has degree `None` (the -inf convention), `|0| = 0`
/// and `sgn 0 = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![Scalar::ONE],
        }
    }

    /// The variable T.
    pub fn t() -> Self {
        Poly {
            coeffs: vec![Scalar::ZERO, Scalar::ONE],
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut coeffs = vec![Scalar::ZERO; k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Little-endian coefficients given as prime-field integers.
    pub fn from_ints(fq: &Fq, ints: &[i64]) -> Self {
        Poly::from_coeffs(ints.iter().map(|&n| fq.from_int(n)).collect())
    }

    /// The polynomial whose coefficient encodings are the base-q digits of
    /// `index`, padded to `len` coefficients.
    pub fn from_index(fq: &Fq, mut index: u64, len: usize) -> Self {
        let q = fq.q();
        let mut coeffs = Vec::with_capacity(len);
        for _ in 0..len {
            coeffs.push(Scalar((index % q) as u32));
            index /= q;
        }
        Poly::from_coeffs(coeffs)
    }

    /// Inverse of [`Poly::from_index`] on the low `len` coefficients.
    pub fn index(&self, fq: &Fq) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * fq.q() + c.0 as u64)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).copied().unwrap_or(Scalar::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Scalar::ONE
    }

    /// Degree, with `None` standing for deg 0 = -inf.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer, -1 for the zero polynomial.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn sgn(&self) -> Scalar {
        self.coeffs.last().copied().unwrap_or(Scalar::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.sgn() == Scalar::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// |a| = q^deg a, and |0| = 0.
    pub fn norm(&self, fq: &Fq) -> BigUint {
        match self.deg() {
            None => BigUint::zero(),
            Some(d) => BigUint::from(fq.q()).pow(d as u32),
        }
    }

    /// |a| as a machine integer; panics on overflow.
    pub fn norm_u64(&self, fq: &Fq) -> u64 {
        match self.deg() {
            None => 0,
            Some(d) => fq.q().checked_pow(d as u32).expect("norm overflows u64"),
        }
    }

    pub fn add(&self, other: &Poly, fq: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| fq.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self, fq: &Fq) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly, fq: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| fq.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: Scalar, fq: &Fq) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|&a| fq.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly, fq: &Fq) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn square(&self, fq: &Fq) -> Poly {
        self.mul(self, fq)
    }

    pub fn pow(&self, mut e: u64, fq: &Fq) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, fq);
            }
            e >>= 1;
            if e > 0 {
                base = base.square(fq);
            }
        }
        acc
    }

    /// Euclidean division: `self = quot * b + rem` with `deg rem < deg b`.
    pub fn divrem(&self, b: &Poly, fq: &Fq) -> Result<(Poly, Poly)> {
        let db = b.deg().ok_or(Error::DivisionByZero)?;
        let lead_inv = fq.inv(b.sgn()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Scalar::ZERO; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let f = fq.mul(c, lead_inv);
            quot[k - db] = f;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[k - db + j] = fq.sub(rem[k - db + j], fq.mul(f, bj));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Remainder modulo a nonzero polynomial.
    pub fn rem(&self, b: &Poly, fq: &Fq) -> Poly {
        if self.coeffs.len() < b.coeffs.len() {
            return self.clone();
        }
        self.divrem(b, fq).expect("nonzero modulus").1
    }

    /// Exact quotient; errors on a nonzero remainder.
    pub fn div_exact(&self, b: &Poly, fq: &Fq) -> Result<Poly> {
        let (q, r) = self.divrem(b, fq)?;
        if !r.is_zero() {
            return Err(Error::Inconsistent(format!(
                "{} does not divide {}",
                b.to_text(fq),
                self.to_text(fq)
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, a: &Poly, fq: &Fq) -> bool {
        !self.is_zero() && a.rem(self, fq).is_zero()
    }

    /// Splits off the leading coefficient: `self = sgn * monic`.
    pub fn make_monic(&self, fq: &Fq) -> (Scalar, Poly) {
        let s = self.sgn();
        match fq.inv(s) {
            None => (Scalar::ZERO, Poly::zero()),
            Some(si) => (s, self.scale(si, fq)),
        }
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, other: &Poly, fq: &Fq) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, fq);
            a = b;
            b = r;
        }
        a.make_monic(fq).1
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn ext_gcd(&self, other: &Poly, fq: &Fq) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1, fq).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1, fq), fq);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qt.mul(&t1, fq), fq);
            t0 = std::mem::replace(&mut t1, t);
        }
        match fq.inv(r0.sgn()) {
            None => (r0, s0, t0),
            Some(li) => (r0.scale(li, fq), s0.scale(li, fq), t0.scale(li, fq)),
        }
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly, fq: &Fq) -> Option<Poly> {
        let (g, s, _) = self.rem(m, fq).ext_gcd(m, fq);
        g.is_one().then(|| s.rem(m, fq))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly, fq: &Fq) -> Poly {
        self.mul(other, fq).rem(m, fq)
    }

    /// `self^e mod m` for an arbitrary-precision exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly, fq: &Fq) -> Poly {
        let mut acc = Poly::one().rem(m, fq);
        let base = self.rem(m, fq);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m, fq);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m, fq);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, e: u64, m: &Poly, fq: &Fq) -> Poly {
        self.pow_mod(&BigUint::from(e), m, fq)
    }

    pub fn derivative(&self, fq: &Fq) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| fq.mul(fq.from_int(i as i64), c))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn eval(&self, t: Scalar, fq: &Fq) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::ZERO, |acc, &c| fq.add(fq.mul(acc, t), c))
    }

    /// Canonical order: by degree, then coefficient encodings from the top down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// All monic polynomials of the given degree, in canonical order.
    pub fn monics_of_degree(fq: &Fq, deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let count = fq.q().pow(deg as u32);
        (0..count).map(move |i| {
            let mut p = Poly::from_index(fq, i, deg);
            p.coeffs.resize(deg + 1, Scalar::ZERO);
            p.coeffs[deg] = Scalar::ONE;
            p
        })
    }

    /// All polynomials (zero included) of degree below `bound`, in canonical order.
    pub fn all_below_degree(fq: &Fq, bound: usize) -> impl Iterator<Item = Poly> + '_ {
        let count = fq.q().pow(bound as u32);
        (0..count).map(move |i| Poly::from_index(fq, i, bound))
    }

    /// Sparse text form, e.g. `T^2+2*T+1`, or `g^3*T^2+g^0` over extension fields.
    pub fn to_text(&self, fq: &Fq) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let prime = fq.extension_degree() == 1;
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{k}"),
            };
            let coef = fq.format(c);
            let term = if k == 0 {
                coef
            } else if prime && c == Scalar::ONE {
                var
            } else {
                format!("{coef}*{var}")
            };
            terms.push(term);
        }
        terms.join("+")
    }

    /// Compact little-endian form `[c0,c1,...]`.
    pub fn to_compact(&self, fq: &Fq) -> String {
        let inner: Vec<String> = self.coeffs.iter().map(|&c| fq.format(c)).collect();
        format!("[{}]", inner.join(","))
    }

    /// Parses the sparse form (`2*T^3+T+1`, `2T^2`, `T^2-1`, `g^2*T+g^0`) or the
    /// compact form `[c0,c1,...]`.
    pub fn parse(s: &str, fq: &Fq) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if let Some(body) = s.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated compact form {s:?}")))?;
            if body.is_empty() {
                return Ok(Poly::zero());
            }
            let coeffs = body
                .split(',')
                .map(|c| fq.parse(c))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Poly::from_coeffs(coeffs));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            // '-' right after '^' belongs to an exponent and is rejected later
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                } else if prev.is_some() {
                    return Err(Error::Parse(format!("dangling sign in {s:?}")));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in {s:?}")));
        }
        terms.push((negative, cur));

        let mut acc = Poly::zero();
        for (neg, term) in terms {
            let (coef, power) = parse_term(&term, fq)?;
            let c = if neg { fq.neg(coef) } else { coef };
            acc = acc.add(&Poly::monomial(c, power), fq);
        }
        Ok(acc)
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The canonical order.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

fn parse_term(term: &str, fq: &Fq) -> Result<(Scalar, usize)> {
    let bad = || Error::Parse(format!("bad term {term:?}"));
    match term.find(['T', 't']) {
        None => Ok((fq.parse(term)?, 0)),
        Some(pos) => {
            let head = term[..pos].trim_end_matches('*');
            let tail = &term[pos + 1..];
            let coef = if head.is_empty() {
                Scalar::ONE
            } else {
                fq.parse(head)?
            };
            let power = if tail.is_empty() {
                1
            } else {
                let e = tail
                    .strip_prefix('^')
                    .or_else(|| tail.strip_prefix("**"))
                    .ok_or_else(bad)?;
                e.parse::<usize>().map_err(|_| bad())?
            };
            Ok((coef, power))
        }
    }
}

/// `q^k` as an arbitrary-precision integer.
pub fn q_pow(fq: &Fq, k: usize) -> BigUint {
    BigUint::from(fq.q()).pow(k as u32)
}

/// Product of a list of polynomials.
pub fn product<'a>(items: impl IntoIterator<Item = &'a Poly>, fq: &Fq) -> Poly {
    items.into_iter().fold(Poly::one(), |acc, p| acc.mul(p, fq))
}
