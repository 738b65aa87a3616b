//! The twisted polynomial ring F_p{τ} with τα = α^q τ.

use crate::error::Result;
use crate::residue::{ResidueElem, ResidueField};

/// A twisted polynomial Σ c_i τ^i over a fixed residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPoly {
    field: ResidueField,
    coeffs: Vec<ResidueElem>,
}

impl TwistedPoly {
    pub fn new(field: &ResidueField, mut coeffs: Vec<ResidueElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TwistedPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &ResidueField) -> Self {
        TwistedPoly::new(field, Vec::new())
    }

    pub fn scalar(field: &ResidueField, a: ResidueElem) -> Self {
        TwistedPoly::new(field, vec![a])
    }

    pub fn one(field: &ResidueField) -> Self {
        TwistedPoly::scalar(field, ResidueElem::ONE)
    }

    /// a τ^k.
    pub fn monomial(field: &ResidueField, a: ResidueElem, k: usize) -> Self {
        let mut coeffs = vec![ResidueElem::ZERO; k + 1];
        coeffs[k] = a;
        TwistedPoly::new(field, coeffs)
    }

    pub fn tau(field: &ResidueField) -> Self {
        TwistedPoly::monomial(field, ResidueElem::ONE, 1)
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn coeffs(&self) -> &[ResidueElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ResidueElem {
        self.coeffs.get(k).copied().unwrap_or(ResidueElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// τ-degree; `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &TwistedPoly) -> Result<TwistedPoly> {
        self.field.same_field(&other.field)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(TwistedPoly::new(f, coeffs))
    }

    pub fn neg(&self) -> TwistedPoly {
        let f = &self.field;
        TwistedPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &TwistedPoly) -> Result<TwistedPoly> {
        self.add(&other.neg())
    }

    /// Left multiplication by a scalar: a·f.
    pub fn scale_left(&self, a: ResidueElem) -> TwistedPoly {
        let f = &self.field;
        TwistedPoly::new(f, self.coeffs.iter().map(|&c| f.mul(a, c)).collect())
    }

    /// Right multiplication by τ^k, a plain shift.
    pub fn shift(&self, k: usize) -> TwistedPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![ResidueElem::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        TwistedPoly::new(&self.field, coeffs)
    }

    /// Product in F_p{τ}: (ατ^i)(βτ^j) = α β^{q^i} τ^{i+j}.
    pub fn tw_mul(&self, other: &TwistedPoly) -> Result<TwistedPoly> {
        self.field.same_field(&other.field)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(TwistedPoly::zero(f));
        }
        let mut out = vec![ResidueElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = f.mul(a, f.frobenius(b, i));
                out[i + j] = f.add(out[i + j], term);
            }
        }
        Ok(TwistedPoly::new(f, out))
    }

    /// self^n by repeated squaring.
    pub fn pow(&self, mut n: u64) -> TwistedPoly {
        let mut base = self.clone();
        let mut acc = TwistedPoly::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.tw_mul(&base).expect("same field");
            }
            n >>= 1;
            if n > 0 {
                base = base.tw_mul(&base).expect("same field");
            }
        }
        acc
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coef = format!("({})", self.field.format(c));
            terms.push(match k {
                0 => coef,
                1 => format!("{coef}*tau"),
                _ => format!("{coef}*tau^{k}"),
            });
        }
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fq::Fq;
    use crate::poly::Poly;
    use proptest::prelude::*;

    fn field(p: &str) -> ResidueField {
        let fq = Fq::new(3).unwrap();
        ResidueField::new(&fq, &Poly::parse(p, &fq).unwrap()).unwrap()
    }

    #[test]
    fn tau_twists_hat_t() {
        let f = field("T^2+1");
        let t = f.reduce(&Poly::t());
        let lhs = TwistedPoly::tau(&f)
            .tw_mul(&TwistedPoly::scalar(&f, t))
            .unwrap();
        let two_t = f.reduce(&Poly::parse("2*T", f.fq()).unwrap());
        assert_eq!(lhs, TwistedPoly::monomial(&f, two_t, 1));
    }

    #[test]
    fn tau_squared_and_scalars() {
        let f = field("T^2+1");
        let tau = TwistedPoly::tau(&f);
        assert_eq!(
            tau.tw_mul(&tau).unwrap(),
            TwistedPoly::monomial(&f, ResidueElem::ONE, 2)
        );
        for a in f.elements() {
            for b in f.elements() {
                let ab = TwistedPoly::scalar(&f, a)
                    .tw_mul(&TwistedPoly::scalar(&f, b))
                    .unwrap();
                assert_eq!(ab, TwistedPoly::scalar(&f, f.mul(a, b)));
            }
        }
    }

    #[test]
    fn mismatched_fields() {
        let f = field("T^2+1");
        let g = field("T^2+T+2");
        assert_eq!(
            TwistedPoly::tau(&f).tw_mul(&TwistedPoly::tau(&g)),
            Err(Error::FieldMismatch)
        );
    }

    fn arb_tw(f: ResidueField) -> impl Strategy<Value = TwistedPoly> {
        let n = f.size() as u32;
        prop::collection::vec(0..n, 0..5).prop_map(move |v| {
            let coeffs = v
                .into_iter()
                .map(|i| {
                    if i == 0 {
                        ResidueElem::ZERO
                    } else {
                        f.exp(i as u64)
                    }
                })
                .collect();
            TwistedPoly::new(&f, coeffs)
        })
    }

    proptest! {
        #[test]
        fn associative_and_distributive(
            a in arb_tw(field("T^3+2*T+1")),
            b in arb_tw(field("T^3+2*T+1")),
            c in arb_tw(field("T^3+2*T+1")),
        ) {
            let ab_c = a.tw_mul(&b).unwrap().tw_mul(&c).unwrap();
            let a_bc = a.tw_mul(&b.tw_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let lhs = a.tw_mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.tw_mul(&b).unwrap().add(&a.tw_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            if let (Some(da), Some(db)) = (a.deg(), b.deg()) {
                prop_assert_eq!(a.tw_mul(&b).unwrap().deg(), Some(da + db));
            }
        }
    }
}
