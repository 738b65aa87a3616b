//! Dirichlet characters modulo a prime p with exact cyclotomic values.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::residue::ResidueField;

/// Largest |p| − 1 for which character tables are built.
pub const MAX_CHARACTER_ORDER: u64 = 4096;

/// Largest degree of n accepted by the orthogonality check.
pub const MAX_ORTHOGONALITY_DEGREE: usize = 12;

/// Σ c_j ζ_N^j as an element of the group ring Z[C_N]; compare through [`CyclotomicInt::canonical`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicInt {
    coeffs: Vec<i128>,
}

impl CyclotomicInt {
    pub fn zero(n: usize) -> Self {
        CyclotomicInt { coeffs: vec![0; n] }
    }

    pub fn integer(n: usize, c: i128) -> Self {
        let mut z = CyclotomicInt::zero(n);
        z.coeffs[0] = c;
        z
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Adds c ζ^j.
    pub fn add_term(&mut self, j: u64, c: i128) {
        let n = self.coeffs.len() as u64;
        self.coeffs[(j % n) as usize] += c;
    }

    pub fn add(&self, other: &CyclotomicInt) -> CyclotomicInt {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicInt { coeffs }
    }

    pub fn sub(&self, other: &CyclotomicInt) -> CyclotomicInt {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CyclotomicInt { coeffs }
    }

    pub fn mul(&self, other: &CyclotomicInt) -> CyclotomicInt {
        let n = self.coeffs.len();
        let mut out = vec![0i128; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[(i + j) % n] += a * b;
            }
        }
        CyclotomicInt { coeffs: out }
    }

    /// Complex conjugate: ζ^j ↦ ζ^{−j}.
    pub fn conj(&self) -> CyclotomicInt {
        let n = self.coeffs.len();
        let coeffs = (0..n).map(|j| self.coeffs[(n - j) % n]).collect();
        CyclotomicInt { coeffs }
    }

    /// Reduction modulo the N-th cyclotomic polynomial: the unique representative
    /// of degree < φ(N), trailing zeros trimmed.
    pub fn canonical(&self) -> Vec<i128> {
        let phi = cyclotomic_polynomial(self.coeffs.len());
        let mut r = self.coeffs.clone();
        let d = phi.len() - 1;
        for k in (d..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            for (i, &p) in phi.iter().enumerate() {
                r[k - d + i] -= c * p;
            }
        }
        r.truncate(d);
        while r.last() == Some(&0) {
            r.pop();
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().is_empty()
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<i128> {
        match self.canonical().as_slice() {
            [] => Some(0),
            [c] => Some(*c),
            _ => None,
        }
    }

    /// Complex value with ζ = e^{2πi/N}.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.coeffs.len() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (j, &c)| {
                let t = 2.0 * PI * j as f64 / n;
                (re + c as f64 * t.cos(), im + c as f64 * t.sin())
            })
    }
}

/// Φ_n over Z, little-endian.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i128> {
    // X^n − 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i128; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = exact_div(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn exact_div(a: &[i128], b: &[i128]) -> Vec<i128> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i128; a.len() - db];
    for k in (db..a.len()).rev() {
        let c = r[k] / b[db];
        q[k - db] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k - db + i] -= c * bi;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// χ(gen^j) = ζ^{kj} for the residue field's generator and ζ = e^{2πi/(|p|−1)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharModP {
    field: ResidueField,
    k: u64,
}

impl DirichletCharModP {
    pub fn new(field: &ResidueField, k: u64) -> Result<Self> {
        if field.order() > MAX_CHARACTER_ORDER {
            return Err(Error::SizeGuard(format!(
                "character group of order {} exceeds {MAX_CHARACTER_ORDER}",
                field.order()
            )));
        }
        Ok(DirichletCharModP {
            field: field.clone(),
            k: k % field.order(),
        })
    }

    /// All |p| − 1 characters, principal first.
    pub fn all(field: &ResidueField) -> Result<Vec<Self>> {
        (0..field.order())
            .map(|k| DirichletCharModP::new(field, k))
            .collect()
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    pub fn is_principal(&self) -> bool {
        self.k == 0
    }

    /// j with χ(n) = ζ^j, or `None` when p | n.
    pub fn value_exponent(&self, n: &Poly) -> Option<u64> {
        let l = self.field.reduce(n).log()? as u128;
        let order = self.field.order() as u128;
        Some((self.k as u128 * l % order) as u64)
    }

    pub fn value(&self, n: &Poly) -> CyclotomicInt {
        let mut v = CyclotomicInt::zero(self.field.order() as usize);
        if let Some(j) = self.value_exponent(n) {
            v.add_term(j, 1);
        }
        v
    }
}

/// Σ χ(f) over monic f with z′ ≤ deg f ≤ z.
pub fn char_sum(chi: &DirichletCharModP, z_low: usize, z: usize) -> Result<CyclotomicInt> {
    if chi.is_principal() {
        return Err(Error::Config(
            "character sum bound needs a nonprincipal character".into(),
        ));
    }
    let x = chi.field.degree();
    if z > x {
        return Err(Error::Config(format!("z = {z} exceeds deg p = {x}")));
    }
    let fq = chi.field.fq();
    let mut s = CyclotomicInt::zero(chi.field.order() as usize);
    for k in z_low..=z {
        for f in Poly::monics_of_degree(fq, k) {
            if let Some(j) = chi.value_exponent(&f) {
                s.add_term(j, 1);
            }
        }
    }
    Ok(s)
}

/// Outcome of checking |S|² ≤ q^z 4^x.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSumBound {
    pub sum: CyclotomicInt,
    pub modulus_squared: f64,
    pub bound: u128,
    pub holds: bool,
}

/// Decides |S|² ≤ q^z 4^x. |S|² = S·S̄ is computed exactly; the comparison is settled
/// by a floating evaluation with a rigorous error margin, and by exact equality when
/// the two sides are within that margin.
pub fn char_sum_bound(chi: &DirichletCharModP, z_low: usize, z: usize) -> Result<CharSumBound> {
    let sum = char_sum(chi, z_low, z)?;
    let q = chi.field.fq().q() as u128;
    let x = chi.field.degree() as u32;
    let bound = q.pow(z as u32) * 4u128.pow(x);
    let sq = sum.mul(&sum.conj());
    let (re, _) = sq.to_complex();
    let mass: f64 = sq.coeffs().iter().map(|c| c.unsigned_abs() as f64).sum();
    let margin = mass * 1e-12 + 1e-9;
    let holds = if re < bound as f64 - margin {
        true
    } else if re > bound as f64 + margin {
        false
    } else if sq
        .sub(&CyclotomicInt::integer(sq.order(), bound as i128))
        .is_zero()
    {
        true
    } else {
        return Err(Error::Inconsistent(
            "character-sum bound comparison is undecidable in f64".into(),
        ));
    };
    Ok(CharSumBound {
        sum,
        modulus_squared: re,
        bound,
        holds,
    })
}

/// Both sides of Σ_χ |Σ_n a_n χ(n)|² = φ(p) Σ_{f mod p, f ≠ 0} |Σ_{n ≡ f} a_n|².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub lhs: i128,
    pub rhs: i128,
}

impl OrthogonalityReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Computes the left side over all characters in cyclotomic arithmetic and the right
/// side over unit residue classes. Terms with p | n vanish on both sides.
pub fn orthogonality_check(
    field: &ResidueField,
    coefficients: &BTreeMap<Poly, i64>,
) -> Result<OrthogonalityReport> {
    if let Some(n) = coefficients
        .keys()
        .find(|n| n.deg().unwrap_or(0) > MAX_ORTHOGONALITY_DEGREE)
    {
        return Err(Error::SizeGuard(format!(
            "deg {} exceeds {MAX_ORTHOGONALITY_DEGREE}",
            n.deg().unwrap_or(0)
        )));
    }
    let chars = DirichletCharModP::all(field)?;
    let n = field.order() as usize;
    let mut lhs = CyclotomicInt::zero(n);
    for chi in &chars {
        let mut s = CyclotomicInt::zero(n);
        for (m, &a) in coefficients {
            if let Some(j) = chi.value_exponent(m) {
                s.add_term(j, a as i128);
            }
        }
        lhs = lhs.add(&s.mul(&s.conj()));
    }
    let lhs = lhs
        .as_integer()
        .ok_or_else(|| Error::Inconsistent("sum of |S|² is not a rational integer".into()))?;
    let mut by_class: BTreeMap<u32, i128> = BTreeMap::new();
    for (m, &a) in coefficients {
        if let Some(l) = field.reduce(m).log() {
            *by_class.entry(l).or_default() += a as i128;
        }
    }
    let rhs = n as i128 * by_class.values().map(|s| s * s).sum::<i128>();
    Ok(OrthogonalityReport { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;

    fn field(p: &str) -> ResidueField {
        let fq = Fq::new(3).unwrap();
        ResidueField::new(&fq, &Poly::parse(p, &fq).unwrap()).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        // 1 + ζ + ... + ζ^{n-1} = 0
        let mut s = CyclotomicInt::zero(12);
        for j in 0..12 {
            s.add_term(j, 1);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn quadratic_character_mod_t() {
        let f = field("T");
        let chi = DirichletCharModP::new(&f, 1).unwrap();
        assert!(char_sum(&chi, 1, 1).unwrap().is_zero());
        assert!(char_sum(&chi, 1, 0).unwrap().is_zero());
        assert!(char_sum(&DirichletCharModP::new(&f, 0).unwrap(), 0, 1).is_err());
    }

    #[test]
    fn bound_holds_mod_t2_plus_1() {
        let f = field("T^2+1");
        for chi in DirichletCharModP::all(&f).unwrap().into_iter().skip(1) {
            for z in 0..=2 {
                for zl in 0..=z {
                    let b = char_sum_bound(&chi, zl, z).unwrap();
                    assert!(b.holds, "k = {}, z' = {zl}, z = {z}", chi.exponent());
                    let (re, im) = b.sum.to_complex();
                    assert!((re * re + im * im - b.modulus_squared).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn orthogonality_examples() {
        let f = field("T^2+1");
        let fq = f.fq().clone();
        let empty = BTreeMap::new();
        assert_eq!(
            orthogonality_check(&f, &empty).unwrap(),
            OrthogonalityReport { lhs: 0, rhs: 0 }
        );
        let single: BTreeMap<Poly, i64> = [(Poly::parse("T+1", &fq).unwrap(), 1)].into();
        assert_eq!(
            orthogonality_check(&f, &single).unwrap(),
            OrthogonalityReport { lhs: 8, rhs: 8 }
        );
        let two: BTreeMap<Poly, i64> = [(Poly::one(), 1), (Poly::t(), 1)].into();
        assert_eq!(
            orthogonality_check(&f, &two).unwrap(),
            OrthogonalityReport { lhs: 16, rhs: 16 }
        );
        // a multiple of p contributes to neither side
        let with_p: BTreeMap<Poly, i64> =
            [(Poly::one(), 2), (Poly::parse("T^2+1", &fq).unwrap(), 5)].into();
        assert!(orthogonality_check(&f, &with_p).unwrap().holds());
    }
}
