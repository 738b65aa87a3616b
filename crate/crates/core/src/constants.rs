//! The local factor at infinity, the local sums c(a; v, r), κ, and the constant C(a).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{factor, necklace_count};
use crate::fq::Fq;
use crate::poly::Poly;
use crate::quadratic::legendre;
use crate::rational::{
    cmp_unreduced, mul_small, q_power, rat, sub_unreduced, to_f64, ExactRational, HalfPowerRational,
};

/// Largest residue ring enumerated by the brute-force c(a; v, r).
pub const MAX_BRUTE_RESIDUES: u64 = 1 << 20;
/// Largest number of (r, v) pairs visited by the double-sum route.
pub const MAX_DOUBLESUM_PAIRS: u64 = 1 << 27;
/// Largest estimated bit size of the Euler-route numerator.
pub const MAX_EULER_BITS: f64 = (1u64 << 25) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(x: usize) -> Self {
        if x.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// C_∞: 1/(q^{1/2}(q−1)) for odd x, 1/((q+1)(q−1)) for even x.
pub fn c_infinity(q: u64, parity: Parity) -> HalfPowerRational {
    let q = q as i64;
    match parity {
        Parity::Odd => HalfPowerRational::new(q as u64, rat(1, q - 1), -1),
        Parity::Even => HalfPowerRational::rational(rat(1, (q + 1) * (q - 1))),
    }
}

/// κ(v) = Π_{ℓ^k ‖ v, k odd} |ℓ|, i.e. |n| for v = m²n with n squarefree.
pub fn kappa(v: &Poly, fq: &Fq) -> Result<BigUint> {
    if v.is_zero() {
        return Err(Error::ZeroInput("v"));
    }
    Ok(factor(v, fq)?
        .factors
        .iter()
        .filter(|(_, k)| k % 2 == 1)
        .map(|(l, _)| l.norm(fq))
        .product())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CMode {
    Brute,
    Closed,
}

fn overflow() -> Error {
    Error::SizeGuard("c(a; v, r) overflows i128".into())
}

/// c(a; ℓ^k, r) from the prime-power table. The rows for ℓ | a and ℓ | r coincide.
fn local_value(norm: i128, k: u32, divides_a_or_r: bool) -> Option<i128> {
    let base = norm.checked_pow(k - 1)?;
    Some(match (k.is_multiple_of(2), divides_a_or_r) {
        (true, true) => base * (norm - 1),
        (false, true) => 0,
        (true, false) => base * (norm - 2),
        (false, false) => -base,
    })
}

/// c(a; v, r) = Σ_{σ ∈ (A/v)^*, gcd(σr² − a², v) = 1} χ_σ(v), where χ_σ(v) is the
/// quadratic residue symbol of σ extended over the factorization of v.
pub fn c_avr(a: &Poly, v: &Poly, r: &Poly, mode: CMode, fq: &Fq) -> Result<i128> {
    if v.is_zero() {
        return Err(Error::ZeroInput("v"));
    }
    if r.is_zero() {
        return Err(Error::ZeroInput("r"));
    }
    if !r.gcd(a, fq).is_one() {
        return Err(Error::NotCoprime(format!(
            "r = {} and a = {}",
            r.to_text(fq),
            a.to_text(fq)
        )));
    }
    let vf = factor(v, fq)?.factors;
    match mode {
        CMode::Closed => vf.iter().try_fold(1i128, |acc, (l, k)| {
            let norm = l.norm_u64(fq) as i128;
            let val =
                local_value(norm, *k, l.divides(a, fq) || l.divides(r, fq)).ok_or_else(overflow)?;
            acc.checked_mul(val).ok_or_else(overflow)
        }),
        CMode::Brute => c_avr_brute(a, v, &vf, r, fq),
    }
}

fn c_avr_brute(a: &Poly, v: &Poly, vf: &[(Poly, u32)], r: &Poly, fq: &Fq) -> Result<i128> {
    let n = v.deg().expect("nonzero");
    let count = fq
        .q()
        .checked_pow(n as u32)
        .filter(|&c| c <= MAX_BRUTE_RESIDUES)
        .ok_or_else(|| Error::SizeGuard(format!("|v| = {}^{n} residues", fq.q())))?;
    let r2 = r.square(fq);
    let a2 = a.square(fq);
    let total = (0..count)
        .into_par_iter()
        .map(|idx| {
            let sigma = Poly::from_index(fq, idx, n);
            if !sigma.gcd(v, fq).is_one() || !sigma.mul(&r2, fq).sub(&a2, fq).gcd(v, fq).is_one() {
                return 0i64;
            }
            vf.iter()
                .map(|(l, k)| legendre(&sigma, l, fq).pow(*k) as i64)
                .product()
        })
        .sum::<i64>();
    Ok(total as i128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantRoute {
    Euler,
    Doublesum,
}

impl FromStr for ConstantRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(ConstantRoute::Euler),
            "doublesum" => Ok(ConstantRoute::Doublesum),
            _ => Err(Error::Parse(format!("unknown route {s:?}"))),
        }
    }
}

impl fmt::Display for ConstantRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantRoute::Euler => "euler",
            ConstantRoute::Doublesum => "doublesum",
        })
    }
}

/// Truncation knobs: deg r ≤ u, deg v ≤ v in the double sum, deg ℓ ≤ max_prime_deg
/// in the Euler product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationParams {
    pub u: usize,
    pub v: usize,
    pub max_prime_deg: usize,
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams {
            u: 6,
            v: 8,
            max_prime_deg: 12,
        }
    }
}

impl TruncationParams {
    pub fn validate(&self) -> Result<()> {
        if self.u == 0 || self.v == 0 || self.max_prime_deg == 0 {
            return Err(Error::Config(format!(
                "truncation parameters must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// A truncated value of C(a) with a bound on |C(a) − value|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantValue {
    pub route: ConstantRoute,
    pub value: ExactRational,
    pub tail_bound: ExactRational,
}

impl ConstantValue {
    /// |self − other| ≤ both tails combined.
    pub fn agrees_with(&self, other: &ConstantValue) -> bool {
        within(
            &self.value,
            &other.value,
            &(&self.tail_bound + &other.tail_bound),
        )
    }
}

/// |a − b| ≤ tol without reducing the difference.
pub fn within(a: &ExactRational, b: &ExactRational, tol: &ExactRational) -> bool {
    let d = sub_unreduced(a, b);
    let d = BigRational::new_raw(d.numer().abs(), d.denom().abs());
    cmp_unreduced(&d, tol) != std::cmp::Ordering::Greater
}

pub fn constant_c(
    a: &Poly,
    params: &TruncationParams,
    route: ConstantRoute,
    fq: &Fq,
) -> Result<ConstantValue> {
    params.validate()?;
    match route {
        ConstantRoute::Euler => constant_c_euler(a, params.max_prime_deg, fq),
        ConstantRoute::Doublesum => constant_c_doublesum(a, params.u, params.v, fq),
    }
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A rational kept as exponents of rational primes, so it is reduced by construction.
#[derive(Default)]
struct PrimeExponents(BTreeMap<u64, i64>);

impl PrimeExponents {
    fn add(&mut self, n: u64, times: i64) {
        if times == 0 {
            return;
        }
        for (p, e) in factor_u64(n) {
            *self.0.entry(p).or_insert(0) += e as i64 * times;
        }
    }

    fn into_rational(self) -> ExactRational {
        let (mut num, mut den) = (Vec::new(), Vec::new());
        for (p, e) in self.0 {
            let pw = BigUint::from(p).pow(e.unsigned_abs() as u32);
            match e.signum() {
                1 => num.push(pw),
                -1 => den.push(pw),
                _ => {}
            }
        }
        BigRational::new_raw(
            BigInt::from(product_tree(num)),
            BigInt::from(product_tree(den)),
        )
    }
}

fn product_tree(mut xs: Vec<BigUint>) -> BigUint {
    if xs.is_empty() {
        return BigUint::one();
    }
    while xs.len() > 1 {
        xs = xs
            .par_chunks(2)
            .map(|c| {
                if c.len() == 2 {
                    &c[0] * &c[1]
                } else {
                    c[0].clone()
                }
            })
            .collect();
    }
    xs.pop().expect("nonempty")
}

/// f64 upper bound as an exact rational, with a relative safety margin.
fn upper(x: f64) -> ExactRational {
    BigRational::from_float(x * (1.0 + 1e-9) + 1e-30).expect("finite")
}

fn euler_fits(q: u64, m: usize) -> (bool, f64) {
    let bits: f64 = (1..=m)
        .map(|k| {
            necklace_count(q, k).to_f64().unwrap_or(f64::INFINITY)
                * 6.0
                * k as f64
                * (q as f64).log2()
        })
        .sum();
    (
        bits <= MAX_EULER_BITS && (m as f64) * (q as f64).log2() <= 31.0,
        bits,
    )
}

/// The largest Euler cutoff ≤ 12 within the size guard (at least 1).
pub fn default_max_prime_deg(q: u64) -> usize {
    (1..=12).rev().find(|&m| euler_fits(q, m).0).unwrap_or(1)
}

/// C(a) as Π_{deg ℓ ≤ M} of (1 − |ℓ|^{−2})^{−1} for ℓ | a and
/// |ℓ|(|ℓ|² − |ℓ| − 1)/((|ℓ|² − 1)(|ℓ| − 1)) otherwise.
pub fn constant_c_euler(a: &Poly, max_prime_deg: usize, fq: &Fq) -> Result<ConstantValue> {
    let q = fq.q();
    let m = max_prime_deg;
    if m == 0 {
        return Err(Error::Config("max_prime_deg must be positive".into()));
    }
    let (fits, bits) = euler_fits(q, m);
    if !fits {
        return Err(Error::SizeGuard(format!(
            "Euler product to degree {m} over q = {q} (about {bits:.0} bits)"
        )));
    }
    // number of prime divisors of a by degree
    let mut dividing = vec![0u64; m + 1];
    let mut dividing_beyond = 0u64;
    if !a.is_zero() {
        for (l, _) in factor(a, fq)?.factors {
            match l.deg().expect("prime") {
                k if k <= m => dividing[k] += 1,
                _ => dividing_beyond += 1,
            }
        }
    }
    let mut pe = PrimeExponents::default();
    for k in 1..=m {
        let big_q = q.pow(k as u32);
        let n_k = necklace_count(q, k).to_u64().expect("guarded") as i64;
        let d = if a.is_zero() { n_k } else { dividing[k] as i64 };
        let rest = n_k - d;
        pe.add(big_q, 2 * d + rest);
        pe.add(big_q - 1, -d - 2 * rest);
        pe.add(big_q + 1, -d - rest);
        pe.add(big_q * big_q - big_q - 1, rest);
    }
    let value = pe.into_rational();

    let qr = |k: i64| q_power(q, k);
    let one = ExactRational::one();
    let m1 = m as i64 + 1;
    let relative = if a.is_zero() {
        // tail Π (1 − |ℓ|^{−2})^{−1} − 1 ≤ y/(1 − y)
        let y = qr(-m1) / ((&one - qr(-1)) * (&one - qr(-2)));
        &y / (&one - &y)
    } else {
        let below = qr(-2 * m1) / ((&one - qr(-2)) * (&one - qr(-2)) * (&one - qr(-1)));
        let nd = BigRational::from_integer(BigInt::from(dividing_beyond)) / (qr(2 * m1) - &one);
        let above = if dividing_beyond == 0 {
            ExactRational::zero()
        } else {
            &nd / (&one - &nd)
        };
        below.max(above)
    };
    let tail_bound = upper(to_f64(&value)) * relative;
    Ok(ConstantValue {
        route: ConstantRoute::Euler,
        value,
        tail_bound,
    })
}

struct Local {
    id: usize,
    norm: i128,
    k: u32,
    divides_a: bool,
}

struct Factored {
    deg: usize,
    primes: Vec<Local>,
}

/// Σ_{deg r ≤ u, gcd(r, a) = 1} Σ_{deg v ≤ v} c(a; v, r)/(|rv| φ(vr²)), with the
/// closed-form c and a tail bound from |c(a; v, r)| ≤ |v|/κ(v).
pub fn constant_c_doublesum(
    a: &Poly,
    max_r_deg: usize,
    max_v_deg: usize,
    fq: &Fq,
) -> Result<ConstantValue> {
    let q = fq.q();
    let (u, w) = (max_r_deg, max_v_deg);
    let count = |d: usize| (0..=d).map(|k| (q as f64).powi(k as i32)).sum::<f64>();
    let pairs = count(u) * count(w);
    let log_q = (q as f64).log2();
    if pairs > MAX_DOUBLESUM_PAIRS as f64
        || (3 * u + 2 * w) as f64 * log_q + pairs.log2() > 120.0
        || (u + w) as f64 * log_q > 62.0
    {
        return Err(Error::SizeGuard(format!(
            "double sum with deg r ≤ {u}, deg v ≤ {w} over q = {q}"
        )));
    }
    let mut ids: HashMap<Poly, usize> = HashMap::new();
    let mut prepare = |p: &Poly| -> Result<Factored> {
        let fac = factor(p, fq)?;
        let primes = fac
            .factors
            .into_iter()
            .map(|(l, k)| {
                let next = ids.len();
                let id = *ids.entry(l.clone()).or_insert(next);
                Local {
                    id,
                    norm: l.norm_u64(fq) as i128,
                    k,
                    divides_a: l.divides(a, fq),
                }
            })
            .collect();
        Ok(Factored {
            deg: p.deg().expect("nonzero"),
            primes,
        })
    };
    let mut vs = Vec::new();
    for d in 0..=w {
        for v in Poly::monics_of_degree(fq, d) {
            vs.push(prepare(&v)?);
        }
    }
    let mut rs = Vec::new();
    for d in 0..=u {
        for r in Poly::monics_of_degree(fq, d) {
            if r.gcd(a, fq).is_one() {
                rs.push(prepare(&r)?);
            }
        }
    }
    let top = 3 * u + 2 * w;
    let qpow: Vec<i128> = (0..=top as u32).map(|j| (q as i128).pow(j)).collect();

    // numerators over the common denominator q^{3u+2w}, keyed by Π_{ℓ | vr} (|ℓ| − 1)
    let sums: HashMap<u64, i128> = rs
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<u64, i128>, r| {
            'v: for v in &vs {
                let mut c = 1i128;
                let mut key = 1i128;
                let mut num = 1i128;
                for l in &v.primes {
                    let in_r = r.primes.iter().any(|m| m.id == l.id);
                    let val = local_value(l.norm, l.k, l.divides_a || in_r).expect("guarded");
                    if val == 0 {
                        continue 'v;
                    }
                    c *= val;
                    key *= l.norm - 1;
                    num *= l.norm;
                }
                for m in &r.primes {
                    if !v.primes.iter().any(|l| l.id == m.id) {
                        key *= m.norm - 1;
                        num *= m.norm;
                    }
                }
                let term = c * num * qpow[top - 3 * r.deg - 2 * v.deg];
                *acc.entry(key as u64).or_insert(0) += term;
            }
            acc
        })
        .reduce(HashMap::new, |mut x, y| {
            for (k, s) in y {
                *x.entry(k).or_insert(0) += s;
            }
            x
        });
    let mut keys: Vec<_> = sums.into_iter().collect();
    keys.sort_unstable();
    let common = BigInt::from(q).pow(top as u32);
    let value = keys
        .into_iter()
        .fold(ExactRational::zero(), |acc, (key, s)| {
            acc + BigRational::new(BigInt::from(s), &common * BigInt::from(key))
        });
    let tail_bound = doublesum_tail(q, u, w);
    Ok(ConstantValue {
        route: ConstantRoute::Doublesum,
        value,
        tail_bound,
    })
}

/// Σ_{deg n = d} h(n) for d ≤ top, for the multiplicative h with h(ℓ^j) = local(k, j)
/// on primes of degree k.
fn degree_series(q: u64, top: usize, local: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut series = vec![0.0; top + 1];
    series[0] = 1.0;
    for k in 1..=top {
        let n = necklace_count(q, k).to_f64().unwrap_or(f64::INFINITY);
        let jmax = top / k;
        let e: Vec<f64> = (0..=jmax)
            .map(|j| if j == 0 { 0.0 } else { local(k, j) })
            .collect();
        // (1 + e)^n in the variable X^k, by the binomial series
        let mut power = vec![0.0; jmax + 1];
        power[0] = 1.0;
        let mut term = power.clone();
        for i in 1..=jmax {
            let coef = n - (i - 1) as f64;
            if coef <= 0.0 {
                break;
            }
            let mut next = vec![0.0; jmax + 1];
            for d in 1..=jmax {
                next[d] = (1..=d).map(|j| term[d - j] * e[j]).sum::<f64>() * coef / i as f64;
            }
            term = next;
            for d in 0..=jmax {
                power[d] += term[d];
            }
        }
        let mut next = vec![0.0; top + 1];
        for d in 0..=top {
            next[d] = (0..=d / k).map(|j| series[d - j * k] * power[j]).sum();
        }
        series = next;
    }
    series
}

/// Σ_{deg v = d} 1/(κ(v) φ(v)) for d ≤ top.
pub(crate) fn kappa_phi_series(q: u64, top: usize) -> Vec<f64> {
    let qf = q as f64;
    degree_series(q, top, |k, j| {
        let big_q = qf.powi(k as i32);
        let odd = qf.powi(-((k * j) as i32)) / (big_q - 1.0);
        if j % 2 == 0 {
            odd * big_q
        } else {
            odd
        }
    })
}

/// Σ_{deg r = d} 1/(|r| φ(r²)) for d ≤ top.
pub(crate) fn r_series(q: u64, top: usize) -> Vec<f64> {
    let qf = q as f64;
    degree_series(q, top, |k, j| {
        let big_q = qf.powi(k as i32);
        qf.powi(-((3 * k * j) as i32)) * big_q / (big_q - 1.0)
    })
}

/// G_all·F_{>w} + G_{>u}·F_all, where F and G sum 1/(κ(v)φ(v)) and 1/(|r|φ(r²)).
/// The series are exact through degree `top`; beyond it the per-degree sums are at
/// most (q/(q−1))^{d+1} q^{−d/2} and (q(q−1))^{−d}.
fn doublesum_tail(q: u64, u: usize, w: usize) -> ExactRational {
    let qf = q as f64;
    let s = qf.sqrt() / (qf - 1.0);
    let rho = 1.0 / (qf * (qf - 1.0));
    let f_rest = |t: usize| qf / (qf - 1.0) * s.powi(t as i32 + 1) / (1.0 - s);
    let g_rest = |t: usize| rho.powi(t as i32 + 1) / (1.0 - rho);
    let mut top = u.max(w) + 1;
    while top < 600 && f_rest(top) > 1e-22 {
        top += 1;
    }
    let f = kappa_phi_series(q, top);
    let g = r_series(q, top);
    let f_all: f64 = f.iter().sum::<f64>() + f_rest(top);
    let f_gt: f64 = f[w + 1..].iter().sum::<f64>() + f_rest(top);
    let g_all: f64 = g.iter().sum::<f64>() + g_rest(top);
    let g_gt: f64 = g[u + 1..].iter().sum::<f64>() + g_rest(top);
    upper(g_all * f_gt + g_gt * f_all)
}

/// C_∞ · C(a) · q^{x/2}/x for a given value of C(a).
pub fn main_term(x: usize, c_a: &ExactRational, q: u64) -> HalfPowerRational {
    let c_inf = c_infinity(q, Parity::of(x));
    let r = mul_small(
        c_a,
        &(c_inf.rational / BigRational::from_integer(BigInt::from(x))),
    );
    HalfPowerRational::new(q, r, c_inf.half_power + x as i64)
}

/// The main term with C(a) from the Euler route, and that route's value.
pub fn main_term_for(
    x: usize,
    a: &Poly,
    max_prime_deg: usize,
    fq: &Fq,
) -> Result<(HalfPowerRational, ConstantValue)> {
    if x == 0 {
        return Err(Error::Config("x must be positive".into()));
    }
    let c = constant_c_euler(a, max_prime_deg, fq)?;
    Ok((main_term(x, &c.value, fq.q()), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::euler_phi;
    use crate::rational::from_biguint;
    use proptest::prelude::*;

    fn f3() -> Fq {
        Fq::new(3).unwrap()
    }

    fn p(s: &str, fq: &Fq) -> Poly {
        Poly::parse(s, fq).unwrap()
    }

    #[test]
    fn c_infinity_values() {
        assert_eq!(
            c_infinity(9, Parity::Odd),
            HalfPowerRational::rational(rat(1, 24))
        );
        assert_eq!(
            c_infinity(3, Parity::Even),
            HalfPowerRational::rational(rat(1, 8))
        );
        assert_eq!(
            c_infinity(3, Parity::Odd),
            HalfPowerRational {
                rational: rat(1, 2),
                half_power: -1
            }
        );
    }

    #[test]
    fn kappa_values() {
        let fq = f3();
        assert_eq!(kappa(&p("T", &fq), &fq).unwrap(), BigUint::from(3u32));
        assert_eq!(kappa(&p("T^2", &fq), &fq).unwrap(), BigUint::from(1u32));
        let v = p("T^3", &fq).mul(&p("T+1", &fq).square(&fq), &fq);
        assert_eq!(kappa(&v, &fq).unwrap(), BigUint::from(3u32));
        assert_eq!(kappa(&Poly::zero(), &fq), Err(Error::ZeroInput("v")));
    }

    #[test]
    fn c_avr_examples() {
        let fq = f3();
        let (one, t) = (Poly::one(), p("T", &fq));
        for mode in [CMode::Brute, CMode::Closed] {
            assert_eq!(c_avr(&one, &t, &one, mode, &fq).unwrap(), -1);
            assert_eq!(c_avr(&t, &t, &one, mode, &fq).unwrap(), 0);
            assert_eq!(c_avr(&one, &p("T^2", &fq), &t, mode, &fq).unwrap(), 6);
            assert!(matches!(
                c_avr(&t, &t, &t, mode, &fq),
                Err(Error::NotCoprime(_))
            ));
        }
    }

    #[test]
    fn modes_agree_and_bound_holds() {
        let fq = f3();
        let rs: Vec<Poly> = ["1", "T", "T+1", "T^2"].iter().map(|s| p(s, &fq)).collect();
        for a in ["1", "T", "T+1"].map(|s| p(s, &fq)) {
            for r in rs.iter().filter(|r| r.gcd(&a, &fq).is_one()) {
                for d in 0..=3 {
                    for v in Poly::monics_of_degree(&fq, d) {
                        let brute = c_avr(&a, &v, r, CMode::Brute, &fq).unwrap();
                        let closed = c_avr(&a, &v, r, CMode::Closed, &fq).unwrap();
                        assert_eq!(
                            brute,
                            closed,
                            "a={} v={} r={}",
                            a.to_text(&fq),
                            v.to_text(&fq),
                            r.to_text(&fq)
                        );
                        let bound = v.norm(&fq) / kappa(&v, &fq).unwrap();
                        assert!(BigUint::from(brute.unsigned_abs()) <= bound);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn multiplicative_in_v(i in 1u64..81, j in 1u64..27, k in 0usize..3) {
            let fq = f3();
            let v1 = Poly::from_index(&fq, i, 4).make_monic(&fq).1;
            let v2 = Poly::from_index(&fq, j, 3).make_monic(&fq).1;
            prop_assume!(v1.gcd(&v2, &fq).is_one());
            let a = p(["1", "T", "T^2+1"][k], &fq);
            let r = p("T+2", &fq);
            prop_assume!(r.gcd(&a, &fq).is_one());
            let c = |v: &Poly| c_avr(&a, v, &r, CMode::Brute, &fq).unwrap();
            prop_assert_eq!(c(&v1.mul(&v2, &fq)), c(&v1) * c(&v2));
        }
    }

    #[test]
    fn euler_single_degree() {
        let fq = f3();
        let c = constant_c_euler(&Poly::one(), 1, &fq).unwrap();
        assert_eq!(c.value, rat(15, 16) * rat(15, 16) * rat(15, 16));
        // a = T: one of the three degree-1 factors becomes 9/8
        let c = constant_c_euler(&p("T", &fq), 1, &fq).unwrap();
        assert_eq!(c.value, rat(9, 8) * rat(15, 16) * rat(15, 16));
    }

    #[test]
    fn euler_matches_naive_product() {
        let fq = f3();
        for a in ["0", "1", "T^2+1", "T^3+2*T+1"] {
            let a = p(a, &fq);
            let mut naive = ExactRational::one();
            for l in crate::factor::primes_up_to(&fq, 3) {
                let n = from_biguint(&l.norm(&fq));
                let one = ExactRational::one();
                naive *= if l.divides(&a, &fq) {
                    &n * &n / (&n * &n - &one)
                } else {
                    &n * (&n * &n - &n - &one) / ((&n * &n - &one) * (&n - &one))
                };
            }
            assert_eq!(constant_c_euler(&a, 3, &fq).unwrap().value, naive);
        }
    }

    #[test]
    fn euler_tail_contains_zeta_value() {
        for q in [3u64, 5, 9] {
            let fq = Fq::new(q).unwrap();
            let exact = rat(q as i64, q as i64 - 1);
            for m in 1..=5 {
                let c = constant_c_euler(&Poly::zero(), m, &fq).unwrap();
                assert!(c.value < exact);
                assert!(within(&c.value, &exact, &c.tail_bound), "q={q} m={m}");
            }
        }
    }

    fn doublesum_oracle(a: &Poly, u: usize, w: usize, fq: &Fq) -> ExactRational {
        let mut total = ExactRational::zero();
        for dr in 0..=u {
            for r in Poly::monics_of_degree(fq, dr).filter(|r| r.gcd(a, fq).is_one()) {
                for dv in 0..=w {
                    for v in Poly::monics_of_degree(fq, dv) {
                        let c = c_avr(a, &v, &r, CMode::Brute, fq).unwrap();
                        let vr2 = v.mul(&r.square(fq), fq);
                        let den = r.norm(fq) * v.norm(fq) * euler_phi(&vr2, fq).unwrap();
                        total += BigRational::new(BigInt::from(c), BigInt::from(den));
                    }
                }
            }
        }
        total
    }

    #[test]
    fn doublesum_matches_brute_force_sum() {
        let fq = f3();
        for a in ["0", "1", "T", "T^2+1"] {
            let a = p(a, &fq);
            let fast = constant_c_doublesum(&a, 2, 3, &fq).unwrap();
            assert_eq!(
                fast.value,
                doublesum_oracle(&a, 2, 3, &fq),
                "a={}",
                a.to_text(&fq)
            );
        }
    }

    #[test]
    fn tail_series_match_direct_sums() {
        let fq = f3();
        let f = kappa_phi_series(3, 5);
        let g = r_series(3, 5);
        for d in 0..=5 {
            let mut fd = ExactRational::zero();
            let mut gd = ExactRational::zero();
            for v in Poly::monics_of_degree(&fq, d) {
                let kp = from_biguint(&(kappa(&v, &fq).unwrap() * euler_phi(&v, &fq).unwrap()));
                fd += kp.recip();
                let rp = from_biguint(&(v.norm(&fq) * euler_phi(&v.square(&fq), &fq).unwrap()));
                gd += rp.recip();
            }
            assert!((to_f64(&fd) - f[d]).abs() < 1e-14 * f[d].max(1.0), "d={d}");
            assert!((to_f64(&gd) - g[d]).abs() < 1e-14 * g[d].max(1.0), "d={d}");
        }
    }

    #[test]
    fn routes_agree_small() {
        let fq = f3();
        for a in ["0", "1", "T"] {
            let a = p(a, &fq);
            let e = constant_c_euler(&a, 8, &fq).unwrap();
            let d = constant_c_doublesum(&a, 3, 5, &fq).unwrap();
            assert!(e.agrees_with(&d), "a={}", a.to_text(&fq));
        }
        // a = 0 reduces to Σ_m 1/|m|², whose truncation is exact
        let d = constant_c_doublesum(&Poly::zero(), 1, 4, &fq).unwrap();
        assert_eq!(d.value, rat(1, 1) + rat(1, 3) + rat(1, 9));
    }

    #[test]
    fn main_term_composition() {
        let fq = f3();
        assert_eq!(
            main_term(2, &rat(3, 2), 3),
            HalfPowerRational::rational(rat(9, 32))
        );
        // odd x: the half powers cancel
        let m3 = main_term(3, &rat(3, 2), 3);
        assert_eq!(
            m3,
            HalfPowerRational::rational(rat(1, 2) * rat(3, 2) * rat(3, 1) / rat(3, 1))
        );
        let (m, c) = main_term_for(2, &Poly::zero(), 6, &fq).unwrap();
        assert_eq!(m.rational, c.value * rat(3, 16));
        assert!(matches!(
            main_term_for(0, &Poly::one(), 6, &fq),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn size_guards() {
        let fq = Fq::new(5).unwrap();
        assert!(matches!(
            constant_c_euler(&Poly::one(), 12, &fq),
            Err(Error::SizeGuard(_))
        ));
        assert!(matches!(
            constant_c_doublesum(&Poly::one(), 6, 8, &fq),
            Err(Error::SizeGuard(_))
        ));
        assert_eq!(default_max_prime_deg(3), 12);
        assert_eq!(default_max_prime_deg(5), 8);
    }
}
