//! Irreducibility, prime enumeration and factorization in A = F_q[T].

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::fq::{small_prime_factors, Fq, Scalar};
use crate::poly::Poly;

/// A factorization `unit * prod prime^exp`, primes monic and in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, fq: &Fq) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit), |acc, (p, e)| {
                acc.mul(&p.pow(*e as u64, fq), fq)
            })
    }

    pub fn primes(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(p, _)| p)
    }
}

/// Rabin's test: `T^{q^n} = T mod f` and `gcd(T^{q^{n/r}} - T, f) = 1` for every
/// prime r dividing n = deg f.
pub fn is_irreducible(f: &Poly, fq: &Fq) -> bool {
    let n = match f.deg() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    if f.coeff(0).is_zero() {
        return false;
    }
    let t = Poly::t();
    // powers[k] = T^{q^k} mod f
    let mut powers = vec![t.rem(f, fq)];
    for k in 1..=n {
        let next = powers[k - 1].pow_mod_u64(fq.q(), f, fq);
        powers.push(next);
    }
    if powers[n] != t.rem(f, fq) {
        return false;
    }
    small_prime_factors(n as u64)
        .into_iter()
        .all(|r| powers[n / r as usize].sub(&t, fq).gcd(f, fq).is_one())
}

/// All monic irreducibles of degree `x`, in canonical order.
pub fn enumerate_primes(fq: &Fq, x: usize) -> Vec<Poly> {
    let count = fq.q().pow(x as u32);
    (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let mut c = Poly::from_index(fq, i, x).coeffs().to_vec();
            c.resize(x + 1, Scalar::ZERO);
            c[x] = Scalar::ONE;
            let p = Poly::from_coeffs(c);
            is_irreducible(&p, fq).then_some(p)
        })
        .collect()
}

/// All monic irreducibles of degree at most `x`, in canonical order.
pub fn primes_up_to(fq: &Fq, x: usize) -> Vec<Poly> {
    (1..=x).flat_map(|d| enumerate_primes(fq, d)).collect()
}

/// Lazily filled table of monic primes by degree, shareable across threads.
#[derive(Debug)]
pub struct PrimeTable {
    fq: Fq,
    by_degree: RwLock<Vec<Option<Arc<Vec<Poly>>>>>,
}

impl PrimeTable {
    pub fn new(fq: &Fq) -> Self {
        PrimeTable {
            fq: fq.clone(),
            by_degree: RwLock::new(Vec::new()),
        }
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    /// Monic primes of degree k, in canonical order.
    pub fn degree(&self, k: usize) -> Arc<Vec<Poly>> {
        if let Some(Some(v)) = self.by_degree.read().expect("lock").get(k) {
            return v.clone();
        }
        let list = Arc::new(enumerate_primes(&self.fq, k));
        let mut w = self.by_degree.write().expect("lock");
        if w.len() <= k {
            w.resize(k + 1, None);
        }
        w[k].get_or_insert(list).clone()
    }
}

/// Number of monic irreducibles of degree n: (1/n) sum_{d | n} mu(d) q^{n/d}.
pub fn necklace_count(q: u64, n: usize) -> BigUint {
    assert!(n >= 1);
    let q = BigUint::from(q);
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        match mobius(d as u64) {
            1 => plus += q.pow((n / d) as u32),
            -1 => minus += q.pow((n / d) as u32),
            _ => {}
        }
    }
    (plus - minus) / BigUint::from(n)
}

pub fn mobius(n: u64) -> i8 {
    let ps = small_prime_factors(n);
    if ps.iter().any(|&p| n.is_multiple_of(p * p)) {
        0
    } else if ps.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// p-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &Poly, fq: &Fq) -> Poly {
    let p = fq.characteristic() as usize;
    let inv_frob = fq.q() / fq.characteristic();
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| fq.pow(c, inv_frob))
        .collect();
    Poly::from_coeffs(coeffs)
}

/// Squarefree decomposition of a monic polynomial: pairs (squarefree part, multiplicity)
/// whose product of powers is `f`. Parts are pairwise coprime within one call level
/// but equal multiplicities may repeat.
pub fn squarefree_decomposition(f: &Poly, fq: &Fq) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative(fq);
    if df.is_zero() {
        let p = fq.characteristic() as u32;
        for (g, e) in squarefree_decomposition(&pth_root(f, fq), fq) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = f.gcd(&df, fq);
    let mut w = f.div_exact(&c, fq).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, fq);
        let fac = w.div_exact(&y, fq).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        c = c.div_exact(&y, fq).expect("gcd divides");
        w = y;
    }
    if !c.is_one() {
        let p = fq.characteristic() as u32;
        for (g, e) in squarefree_decomposition(&pth_root(&c, fq), fq) {
            out.push((g, e * p));
        }
    }
    out
}

/// Distinct-degree split of a monic squarefree polynomial into (product, degree).
fn distinct_degree(f: &Poly, fq: &Fq) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = Poly::t().rem(&rest, fq);
    let mut d = 0;
    while rest.deg().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod_u64(fq.q(), &rest, fq);
        let g = h.sub(&Poly::t(), fq).gcd(&rest, fq);
        if !g.is_one() {
            rest = rest.div_exact(&g, fq).expect("gcd divides");
            h = h.rem(&rest, fq);
            out.push((g, d));
        }
    }
    if let Some(k) = rest.deg().filter(|&k| k > 0) {
        out.push((rest, k));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree d. Candidates h
/// are tried in index order, so the result is deterministic.
fn equal_degree(g: &Poly, d: usize, fq: &Fq, out: &mut Vec<Poly>) {
    let n = g.deg().unwrap_or(0);
    if n == d {
        out.push(g.clone());
        return;
    }
    let e = (BigUint::from(fq.q()).pow(d as u32) - 1u32) / 2u32;
    let bound = fq.q().checked_pow(n as u32).unwrap_or(u64::MAX);
    for idx in fq.q()..bound {
        let h = Poly::from_index(fq, idx, n);
        let s = h.pow_mod(&e, g, fq).sub(&Poly::one(), fq).gcd(g, fq);
        let k = s.deg().unwrap_or(0);
        if k > 0 && k < n {
            let other = g.div_exact(&s, fq).expect("gcd divides");
            equal_degree(&s, d, fq, out);
            equal_degree(&other, d, fq, out);
            return;
        }
    }
    unreachable!("no splitting polynomial found");
}

/// Factors a nonzero polynomial into a unit and monic prime powers.
pub fn factor(a: &Poly, fq: &Fq) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::ZeroInput("factor"));
    }
    let (unit, monic) = a.make_monic(fq);
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic, fq) {
        for (prod, d) in distinct_degree(&part, fq) {
            let mut primes = Vec::new();
            equal_degree(&prod, d, fq, &mut primes);
            factors.extend(primes.into_iter().map(|p| (p, mult)));
        }
    }
    factors.sort_by(|x, y| x.0.canonical_cmp(&y.0));
    let mut merged: Vec<(Poly, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors {
        match merged.last_mut() {
            Some((last, le)) if *last == p => *le += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(Factorization {
        unit,
        factors: merged,
    })
}

/// Euler's function on A: |a| prod_{l | a} (1 - 1/|l|).
pub fn euler_phi(a: &Poly, fq: &Fq) -> Result<BigUint> {
    let fac = factor(a, fq)?;
    Ok(phi_from_factors(&fac.factors, fq))
}

pub(crate) fn phi_from_factors(factors: &[(Poly, u32)], fq: &Fq) -> BigUint {
    factors.iter().fold(BigUint::one(), |acc, (p, e)| {
        let n = p.norm(fq);
        acc * n.pow(e - 1) * (n - 1u32)
    })
}

/// Number of monic irreducibles of degree x congruent to `a` mod `m`.
pub fn count_primes_in_ap(fq: &Fq, x: usize, m: &Poly, a: &Poly) -> Result<u64> {
    if m.is_zero() {
        return Err(Error::ZeroInput("modulus"));
    }
    if !a.gcd(m, fq).is_one() {
        return Err(Error::NotCoprime(format!(
            "{} and {}",
            m.to_text(fq),
            a.to_text(fq)
        )));
    }
    let target = a.rem(m, fq);
    Ok(enumerate_primes(fq, x)
        .iter()
        .filter(|p| p.rem(m, fq) == target)
        .count() as u64)
}
