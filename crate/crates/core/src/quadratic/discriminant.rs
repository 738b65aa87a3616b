//! Discriminants d = f²D and the imaginary criterion.

use crate::error::{Error, Result};
use crate::factor::{factor, Factorization};
use crate::fq::{Fq, Scalar};
use crate::poly::Poly;

/// d = f² D with f monic and D squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantDecomp {
    pub d: Poly,
    pub f: Poly,
    pub fundamental: Poly,
    pub factorization: Factorization,
}

impl DiscriminantDecomp {
    pub fn new(d: &Poly, fq: &Fq) -> Result<Self> {
        let factorization = factor(d, fq)?;
        let mut f = Poly::one();
        let mut fundamental = Poly::constant(factorization.unit);
        for (l, e) in &factorization.factors {
            f = f.mul(&l.pow((e / 2) as u64, fq), fq);
            if e % 2 == 1 {
                fundamental = fundamental.mul(l, fq);
            }
        }
        Ok(DiscriminantDecomp {
            d: d.clone(),
            f,
            fundamental,
            factorization,
        })
    }

    /// Imaginary iff deg D is odd, or deg D is even and sgn D is a nonsquare.
    pub fn is_imaginary(&self, fq: &Fq) -> bool {
        let deg = self.fundamental.deg().expect("nonzero");
        deg % 2 == 1 || !fq.is_square(self.fundamental.sgn())
    }

    /// D is a nonsquare constant: the constant-field extension case.
    pub fn has_constant_fundamental(&self) -> bool {
        self.fundamental.is_constant()
    }

    /// Monic primes dividing f, with their exponents in f.
    pub fn f_primes(&self) -> Vec<(Poly, u32)> {
        self.factorization
            .factors
            .iter()
            .filter(|(_, e)| *e >= 2)
            .map(|(l, e)| (l.clone(), e / 2))
            .collect()
    }
}

/// Evaluated on the squarefree part, which has the same degree parity and sign as d.
pub fn is_imaginary_discriminant(d: &Poly, fq: &Fq) -> Result<bool> {
    let deg = d.deg().ok_or(Error::ZeroInput("discriminant"))?;
    Ok(deg % 2 == 1 || !fq.is_square(d.sgn()))
}

pub(crate) fn require_imaginary(d: &Poly, fq: &Fq) -> Result<()> {
    if is_imaginary_discriminant(d, fq)? {
        Ok(())
    } else {
        Err(Error::NotImaginary(d.to_text(fq)))
    }
}

/// Square root in F_q, if one exists.
pub fn sqrt_scalar(fq: &Fq, c: Scalar) -> Option<Scalar> {
    match fq.log(c) {
        None => Some(Scalar::ZERO),
        Some(l) if l % 2 == 0 => Some(fq.exp(l as u64 / 2)),
        Some(_) => None,
    }
}

/// d divided by a square constant so that sgn d ∈ {1, canonical nonsquare}.
pub fn canonical_discriminant(d: &Poly, fq: &Fq) -> Poly {
    let s = d.sgn();
    if s.is_zero() {
        return d.clone();
    }
    let target = if fq.is_square(s) {
        Scalar::ONE
    } else {
        fq.canonical_nonsquare()
    };
    let c2 = fq.div(s, target).expect("nonzero");
    d.scale(fq.inv(c2).expect("nonzero"), fq)
}
