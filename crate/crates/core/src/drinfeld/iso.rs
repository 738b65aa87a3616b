//! Isomorphism classes of rank-2 Drinfeld modules over F_p.
//!
//! φ(γ, δ) ≅ φ(μ^{q−1}γ, μ^{q²−1}δ) for μ ∈ F_p^*. In log coordinates
//! (i, j) = (log γ, log δ) the action of μ = g^k is (i, j) ↦ (i + (q−1)k, j + (q²−1)k),
//! which gives O(1) canonical representatives.

use std::collections::HashMap;

use num_integer::Integer;

use crate::drinfeld::module::{CharPolyFrob, FiniteDrinfeldModule};
use crate::error::{Error, Result};
use crate::fq::Scalar;
use crate::residue::{ResidueElem, ResidueField};

/// Largest residue field for which all classes are enumerated.
pub const MAX_ENUMERATION_SIZE: u64 = 1 << 16;

/// g^{(|p|−1)/(q−1)}, an element of F_q^*; equals 1 iff g is a (q−1)-th power.
pub fn power_residue_symbol(field: &ResidueField, g: ResidueElem) -> Result<Scalar> {
    if g.is_zero() {
        return Err(Error::ZeroInput("power residue symbol"));
    }
    let e = field.order() / (field.fq().q() - 1);
    let v = field.pow(g, e);
    Ok(field.to_scalar(v).expect("norm-type power lies in F_q"))
}

/// Whether some μ ∈ F_p^* carries one module to the other.
pub fn iso_equivalent(m1: &FiniteDrinfeldModule, m2: &FiniteDrinfeldModule) -> Result<bool> {
    let f = m1.field();
    f.same_field(m2.field())?;
    match (m1.gamma().is_zero(), m2.gamma().is_zero()) {
        (false, false) => iso_test_via_residues(m1, m2),
        (true, true) => {
            let g2 = gamma_zero_modulus(f);
            let (j1, j2) = (log(m1.delta()), log(m2.delta()));
            Ok(j1 % g2 == j2 % g2)
        }
        _ => Ok(false),
    }
}

/// With (a, b) = (γ₁, δ₁) and (c, d) = (γ₂, δ₂), all nonzero: c/a is a (q−1)-th
/// power and (c/a)^{q+1} = d/b.
pub fn iso_test_via_residues(m1: &FiniteDrinfeldModule, m2: &FiniteDrinfeldModule) -> Result<bool> {
    let f = m1.field();
    f.same_field(m2.field())?;
    let (a, b, c, d) = (m1.gamma(), m1.delta(), m2.gamma(), m2.delta());
    if [a, b, c, d].iter().any(|e| e.is_zero()) {
        return Err(Error::ZeroInput(
            "residue isomorphism test needs nonzero gamma and delta",
        ));
    }
    let ratio = f.div(c, a).expect("nonzero");
    if power_residue_symbol(f, ratio)? != Scalar::ONE {
        return Ok(false);
    }
    let q = f.fq().q();
    Ok(f.pow(ratio, q + 1) == f.div(d, b).expect("nonzero"))
}

/// Searches μ over F_p^*; the oracle for the tests above.
pub fn iso_by_search(m1: &FiniteDrinfeldModule, m2: &FiniteDrinfeldModule) -> Result<bool> {
    let f = m1.field();
    f.same_field(m2.field())?;
    let q = f.fq().q();
    Ok(f.units().any(|mu| {
        f.mul(f.pow(mu, q - 1), m2.gamma()) == m1.gamma()
            && f.mul(f.pow(mu, q * q - 1), m2.delta()) == m1.delta()
    }))
}

fn log(e: ResidueElem) -> u64 {
    e.log().expect("nonzero") as u64
}

/// gcd(q²−1, |p|−1): the number of classes with γ = 0.
fn gamma_zero_modulus(field: &ResidueField) -> u64 {
    let q = field.fq().q();
    (q * q - 1).gcd(&field.order())
}

/// A class of modules with its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub index: u64,
    pub gamma: ResidueElem,
    pub delta: ResidueElem,
    pub size: u64,
}

impl IsoClass {
    pub fn module(&self, field: &ResidueField) -> FiniteDrinfeldModule {
        FiniteDrinfeldModule::new(field, self.gamma, self.delta).expect("delta nonzero")
    }
}

/// Number of isomorphism classes: (q−1)(|p|−1) with γ ≠ 0 plus gcd(q²−1, |p|−1) with γ = 0.
pub fn class_count(field: &ResidueField) -> u64 {
    (field.fq().q() - 1) * field.order() + gamma_zero_modulus(field)
}

/// The class of φ(γ, δ), in O(1).
pub fn class_of(field: &ResidueField, gamma: ResidueElem, delta: ResidueElem) -> Result<IsoClass> {
    let n = field.order();
    let q = field.fq().q();
    let j = delta.log().ok_or(Error::ZeroInput("delta"))? as u64;
    match gamma.log() {
        Some(i) => {
            let i = i as u64;
            let stride = n / (q - 1);
            let i0 = i % (q - 1);
            let t = (i - i0) / (q - 1);
            let k0 = (stride - t % stride) % stride;
            let j0 = ((j as u128 + (q as u128 * q as u128 - 1) * k0 as u128) % n as u128) as u64;
            Ok(IsoClass {
                index: i0 * n + j0,
                gamma: field.exp(i0),
                delta: field.exp(j0),
                size: stride,
            })
        }
        None => {
            let g2 = gamma_zero_modulus(field);
            let j0 = j % g2;
            Ok(IsoClass {
                index: (q - 1) * n + j0,
                gamma: ResidueElem::ZERO,
                delta: field.exp(j0),
                size: n / g2,
            })
        }
    }
}

/// All classes in index order.
pub fn iso_classes(field: &ResidueField) -> Result<Vec<IsoClass>> {
    guard(field)?;
    let n = field.order();
    let q = field.fq().q();
    let stride = n / (q - 1);
    let mut out = Vec::with_capacity(class_count(field) as usize);
    for i0 in 0..q - 1 {
        for j in 0..n {
            out.push(IsoClass {
                index: i0 * n + j,
                gamma: field.exp(i0),
                delta: field.exp(j),
                size: stride,
            });
        }
    }
    out.extend(gamma_zero_classes(field));
    Ok(out)
}

fn guard(field: &ResidueField) -> Result<()> {
    if field.size() > MAX_ENUMERATION_SIZE {
        return Err(Error::SizeGuard(format!(
            "class enumeration over |p| = {} exceeds {MAX_ENUMERATION_SIZE}",
            field.size()
        )));
    }
    Ok(())
}

/// The gcd(q²−1, |p|−1) classes with γ = 0, which need no enumeration guard.
pub fn gamma_zero_classes(field: &ResidueField) -> Vec<IsoClass> {
    let n = field.order();
    let q = field.fq().q();
    let g2 = gamma_zero_modulus(field);
    (0..g2)
        .map(|j| IsoClass {
            index: (q - 1) * n + j,
            gamma: ResidueElem::ZERO,
            delta: field.exp(j),
            size: n / g2,
        })
        .collect()
}

/// Every class with its representative, size and Frobenius charpoly.
pub fn enumerate_iso_classes(field: &ResidueField) -> Result<Vec<(IsoClass, CharPolyFrob)>> {
    use rayon::prelude::*;
    iso_classes(field)?
        .into_par_iter()
        .map(|c| {
            let cp = c.module(field).frobenius_charpoly()?;
            Ok((c, cp))
        })
        .collect()
}

/// Number of classes per charpoly.
pub fn classes_by_charpoly(field: &ResidueField) -> Result<HashMap<CharPolyFrob, u64>> {
    let mut out = HashMap::new();
    for (_, cp) in enumerate_iso_classes(field)? {
        *out.entry(cp).or_insert(0) += 1;
    }
    Ok(out)
}
