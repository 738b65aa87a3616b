//! Residue fields F_p = A/pA via Zech logarithm tables.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::fq::{mod_pow, small_prime_factors, Fq, Scalar};
use crate::poly::Poly;

/// Largest residue field the tables are built for.
pub const MAX_RESIDUE_SIZE: u64 = 1 << 22;

/// An element of F_p stored as its discrete log to the field's generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElem(u32);

impl ResidueElem {
    pub const ZERO: ResidueElem = ResidueElem(u32::MAX);
    pub const ONE: ResidueElem = ResidueElem(0);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// Discrete log to the field generator; `None` for zero.
    pub fn log(self) -> Option<u32> {
        (!self.is_zero()).then_some(self.0)
    }
}

struct Inner {
    fq: Fq,
    modulus: Poly,
    x: usize,
    /// q^x - 1.
    order: u32,
    /// exp[i] = base-q index of g^i.
    exp: Vec<u32>,
    /// log[index] for nonzero indices.
    log: Vec<u32>,
    /// zech[n] = log(1 + g^n), u32::MAX when 1 + g^n = 0.
    zech: Vec<u32>,
    generator: Poly,
}

/// The field A/pA for a monic irreducible p. Cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct ResidueField(Arc<Inner>);

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueField({})", self.0.modulus.to_text(&self.0.fq))
    }
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.fq == other.0.fq && self.0.modulus == other.0.modulus)
    }
}

impl Eq for ResidueField {}

impl ResidueField {
    pub fn new(fq: &Fq, p: &Poly) -> Result<Self> {
        if !p.is_monic() || !is_irreducible(p, fq) {
            return Err(Error::NotIrreducible(p.to_text(fq)));
        }
        let x = p.deg().expect("nonzero");
        let size = fq
            .q()
            .checked_pow(x as u32)
            .filter(|&s| s <= MAX_RESIDUE_SIZE)
            .ok_or_else(|| {
                Error::SizeGuard(format!("|p| = {}^{x} exceeds {MAX_RESIDUE_SIZE}", fq.q()))
            })?;
        let order = (size - 1) as u32;
        let generator = find_generator(fq, p, order as u64);

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = Poly::one();
        for i in 0..order {
            let idx = cur.index(fq) as u32;
            exp.push(idx);
            log[idx as usize] = i;
            cur = cur.mul_mod(&generator, p, fq);
        }
        debug_assert!(cur.is_one());

        let q = fq.q() as u32;
        let zech = exp
            .iter()
            .map(|&idx| {
                let low = fq.add(Scalar(idx % q), Scalar::ONE).0;
                let sum = idx - idx % q + low;
                log[sum as usize]
            })
            .collect();

        Ok(ResidueField(Arc::new(Inner {
            fq: fq.clone(),
            modulus: p.clone(),
            x,
            order,
            exp,
            log,
            zech,
            generator,
        })))
    }

    pub fn fq(&self) -> &Fq {
        &self.0.fq
    }

    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    /// x = deg p.
    pub fn degree(&self) -> usize {
        self.0.x
    }

    /// |p| = q^x.
    pub fn size(&self) -> u64 {
        self.0.order as u64 + 1
    }

    /// |p| - 1, the order of the unit group.
    pub fn order(&self) -> u64 {
        self.0.order as u64
    }

    /// The primitive element used for logs, as a polynomial of degree < x.
    pub fn generator_poly(&self) -> &Poly {
        &self.0.generator
    }

    pub fn generator(&self) -> ResidueElem {
        ResidueElem(1 % self.0.order)
    }

    pub fn same_field(&self, other: &ResidueField) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn exp(&self, k: u64) -> ResidueElem {
        ResidueElem((k % self.0.order as u64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> {
        std::iter::once(ResidueElem::ZERO).chain(self.units())
    }

    pub fn units(&self) -> impl Iterator<Item = ResidueElem> {
        (0..self.0.order).map(ResidueElem)
    }

    /// The reduction â of a polynomial.
    pub fn reduce(&self, a: &Poly) -> ResidueElem {
        let r = a.rem(&self.0.modulus, &self.0.fq);
        if r.is_zero() {
            return ResidueElem::ZERO;
        }
        ResidueElem(self.0.log[r.index(&self.0.fq) as usize])
    }

    pub fn from_scalar(&self, c: Scalar) -> ResidueElem {
        if c.is_zero() {
            ResidueElem::ZERO
        } else {
            ResidueElem(self.0.log[c.0 as usize])
        }
    }

    /// The scalar in F_q equal to `a`, if `a` lies in the constant subfield.
    pub fn to_scalar(&self, a: ResidueElem) -> Option<Scalar> {
        if a.is_zero() {
            return Some(Scalar::ZERO);
        }
        let idx = self.0.exp[a.0 as usize];
        (idx < self.0.fq.q() as u32).then_some(Scalar(idx))
    }

    /// Representative of degree < x.
    pub fn to_poly(&self, a: ResidueElem) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly::from_index(&self.0.fq, self.0.exp[a.0 as usize] as u64, self.0.x)
    }

    /// Coordinates over F_q in the basis 1, T̂, ..., T̂^{x-1}.
    pub fn coords(&self, a: ResidueElem) -> Vec<Scalar> {
        let q = self.0.fq.q() as u32;
        let mut idx = if a.is_zero() {
            0
        } else {
            self.0.exp[a.0 as usize]
        };
        (0..self.0.x)
            .map(|_| {
                let c = Scalar(idx % q);
                idx /= q;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, c: &[Scalar]) -> ResidueElem {
        self.reduce(&Poly::from_coeffs(c.to_vec()))
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem::ZERO
    }

    pub fn one(&self) -> ResidueElem {
        ResidueElem::ONE
    }

    pub fn mul(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if a.is_zero() || b.is_zero() {
            return ResidueElem::ZERO;
        }
        let s = a.0 as u64 + b.0 as u64;
        ResidueElem((s % self.0.order as u64) as u32)
    }

    pub fn add(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.0.order;
        let diff = (b.0 + n - a.0) % n;
        let z = self.0.zech[diff as usize];
        if z == u32::MAX {
            ResidueElem::ZERO
        } else {
            ResidueElem(((a.0 as u64 + z as u64) % n as u64) as u32)
        }
    }

    pub fn neg(&self, a: ResidueElem) -> ResidueElem {
        if a.is_zero() {
            return a;
        }
        let n = self.0.order;
        ResidueElem(((a.0 as u64 + n as u64 / 2) % n as u64) as u32)
    }

    pub fn sub(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: ResidueElem) -> Option<ResidueElem> {
        let n = self.0.order;
        a.log().map(|l| ResidueElem((n - l) % n))
    }

    pub fn div(&self, a: ResidueElem, b: ResidueElem) -> Option<ResidueElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: ResidueElem, e: u64) -> ResidueElem {
        if e == 0 {
            return ResidueElem::ONE;
        }
        match a.log() {
            None => ResidueElem::ZERO,
            Some(l) => {
                let n = self.0.order as u128;
                ResidueElem((l as u128 * (e as u128 % n) % n) as u32)
            }
        }
    }

    pub fn pow_big(&self, a: ResidueElem, e: &BigUint) -> ResidueElem {
        let n = BigUint::from(self.0.order);
        if e == &BigUint::ZERO {
            return ResidueElem::ONE;
        }
        let reduced = (e % &n).to_u64().expect("reduced exponent fits");
        if a.is_zero() {
            ResidueElem::ZERO
        } else if reduced == 0 {
            ResidueElem::ONE
        } else {
            self.pow(a, reduced)
        }
    }

    /// a^{q^k}.
    pub fn frobenius(&self, a: ResidueElem, k: usize) -> ResidueElem {
        match a.log() {
            None => a,
            Some(l) => {
                let n = self.0.order as u64;
                let qk = mod_pow(self.0.fq.q(), k as u64, n);
                ResidueElem((l as u128 * qk as u128 % n as u128) as u32)
            }
        }
    }

    /// Text form of the representative of degree < x.
    pub fn format(&self, a: ResidueElem) -> String {
        self.to_poly(a).to_text(&self.0.fq)
    }

    pub fn parse(&self, s: &str) -> Result<ResidueElem> {
        Ok(self.reduce(&Poly::parse(s, &self.0.fq)?))
    }
}

fn find_generator(fq: &Fq, p: &Poly, order: u64) -> Poly {
    let x = p.deg().expect("nonzero");
    let primes = small_prime_factors(order);
    let size = order + 1;
    (1..size)
        .map(|i| Poly::from_index(fq, i, x))
        .find(|g| {
            primes
                .iter()
                .all(|&r| !g.pow_mod_u64(order / r, p, fq).is_one())
        })
        .expect("unit group is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64, p: &str) -> ResidueField {
        let fq = Fq::new(q).unwrap();
        let p = Poly::parse(p, &fq).unwrap();
        ResidueField::new(&fq, &p).unwrap()
    }

    #[test]
    fn rejects_reducible_modulus() {
        let fq = Fq::new(3).unwrap();
        let p = Poly::parse("T^2+2*T", &fq).unwrap();
        assert!(matches!(
            ResidueField::new(&fq, &p),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn table_arithmetic_matches_polynomials() {
        for (q, x) in [(3, 2), (5, 2), (9, 2), (3, 3)] {
            let fq = Fq::new(q).unwrap();
            let p = crate::factor::enumerate_primes(&fq, x).pop().unwrap();
            let f = ResidueField::new(&fq, &p).unwrap();
            let fq = f.fq().clone();
            let m = f.modulus().clone();
            for a in f.elements() {
                for b in f.elements() {
                    let pa = f.to_poly(a);
                    let pb = f.to_poly(b);
                    assert_eq!(f.to_poly(f.add(a, b)), pa.add(&pb, &fq));
                    assert_eq!(f.to_poly(f.mul(a, b)), pa.mul_mod(&pb, &m, &fq));
                    assert_eq!(f.to_poly(f.sub(a, b)), pa.sub(&pb, &fq));
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_field() {
        for p in ["T", "T+1", "T+2", "T^2+1", "T^2+T+2", "T^2+2*T+2"] {
            let f = field(3, p);
            let x = f.degree();
            for a in f.elements() {
                assert_eq!(f.frobenius(a, x), a);
                assert_eq!(f.pow(a, f.size()), a);
            }
        }
    }

    #[test]
    fn hat_t_squared_is_minus_one() {
        let f = field(3, "T^2+1");
        let t = f.reduce(&Poly::t());
        assert_eq!(f.mul(t, t), f.neg(f.one()));
        assert_eq!(f.frobenius(t, 1), f.neg(t));
    }

    #[test]
    fn constant_subfield() {
        let f = field(5, "T^2+2");
        let fq = f.fq().clone();
        for c in fq.elements() {
            let e = f.from_scalar(c);
            assert_eq!(f.to_scalar(e), Some(c));
            assert_eq!(f.frobenius(e, 1), e);
        }
        assert_eq!(f.to_scalar(f.reduce(&Poly::t())), None);
    }
}
