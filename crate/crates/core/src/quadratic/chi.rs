//! The quadratic character χ_d on monic polynomials.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::Result;
use crate::factor::factor;
use crate::fq::Fq;
use crate::poly::Poly;
use crate::quadratic::discriminant::require_imaginary;

/// Legendre symbol (d / ℓ) for a monic prime ℓ, by the Euler criterion
/// d^{(|ℓ|−1)/2} mod ℓ. Zero when ℓ | d.
pub fn legendre(d: &Poly, l: &Poly, fq: &Fq) -> i8 {
    if l.deg() == Some(1) {
        // ℓ = T − r: reduce by evaluation at r
        let r = fq.neg(l.coeff(0));
        return fq.quadratic_character(d.eval(r, fq));
    }
    let r = d.rem(l, fq);
    if r.is_zero() {
        return 0;
    }
    let e = (l.norm(fq) - 1u32) / 2u32;
    let v = r.pow_mod(&e, l, fq);
    if v.is_one() {
        1
    } else {
        debug_assert_eq!(v, Poly::constant(fq.from_int(-1)));
        -1
    }
}

/// χ_d(n) for an imaginary discriminant d, multiplicative over the factorization
/// of n. Only the monic part of n matters.
pub fn chi(d: &Poly, n: &Poly, fq: &Fq) -> Result<i8> {
    require_imaginary(d, fq)?;
    let fac = factor(n, fq)?;
    Ok(fac
        .factors
        .iter()
        .map(|(l, e)| legendre(d, l, fq).pow(*e))
        .product())
}

/// χ_d with a per-prime cache.
#[derive(Debug)]
pub struct QuadChar {
    d: Poly,
    fq: Fq,
    cache: RwLock<HashMap<Poly, i8>>,
}

impl QuadChar {
    pub fn new(d: &Poly, fq: &Fq) -> Result<Self> {
        require_imaginary(d, fq)?;
        Ok(QuadChar {
            d: d.clone(),
            fq: fq.clone(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn discriminant(&self) -> &Poly {
        &self.d
    }

    pub fn at_prime(&self, l: &Poly) -> i8 {
        if let Some(&v) = self.cache.read().expect("lock").get(l) {
            return v;
        }
        let v = legendre(&self.d, l, &self.fq);
        self.cache.write().expect("lock").insert(l.clone(), v);
        v
    }

    pub fn eval(&self, n: &Poly) -> Result<i8> {
        let fac = factor(n, &self.fq)?;
        Ok(fac
            .factors
            .iter()
            .map(|(l, e)| self.at_prime(l).pow(*e))
            .product())
    }
}
