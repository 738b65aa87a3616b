//! Class numbers h(d) and the mass H_p, with a shared cache.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factor::{is_irreducible, PrimeTable};
use crate::fq::{Fq, Scalar};
use crate::poly::Poly;
use crate::quadratic::chi::legendre;
use crate::quadratic::discriminant::{
    canonical_discriminant, require_imaginary, DiscriminantDecomp,
};
use crate::quadratic::lvalue::{l_function, LFunction};
use crate::rational::{q_power, ExactRational};

/// Class-number engine for one constant field: prime tables plus a concurrent cache
/// keyed by canonical discriminant.
#[derive(Debug)]
pub struct ClassNumbers {
    primes: PrimeTable,
    cache: RwLock<HashMap<Poly, BigUint>>,
}

impl ClassNumbers {
    pub fn new(fq: &Fq) -> Self {
        ClassNumbers {
            primes: PrimeTable::new(fq),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn fq(&self) -> &Fq {
        self.primes.fq()
    }

    pub fn primes(&self) -> &PrimeTable {
        &self.primes
    }

    pub fn l_function(&self, d: &Poly) -> Result<LFunction> {
        l_function(d, &self.primes)
    }

    pub fn l_value_at_one(&self, d: &Poly) -> Result<ExactRational> {
        Ok(self.l_function(d)?.at_one(self.fq().q()))
    }

    /// The analytic formula applied to d itself:
    /// q^{(deg d − 1)/2} L(1, χ_d) for odd degree, 2 q^{deg d/2}/(q+1) L(1, χ_d) for even.
    pub fn class_number_analytic(&self, d: &Poly) -> Result<ExactRational> {
        let q = self.fq().q();
        let l = self.l_value_at_one(d)?;
        let n = d.deg().expect("nonzero") as i64;
        Ok(if n % 2 == 1 {
            l * q_power(q, (n - 1) / 2)
        } else {
            l * q_power(q, n / 2) * BigRational::new(BigInt::from(2), BigInt::from(q + 1))
        })
    }

    /// h(f²D) = h(D) |f| / [A[√D]^* : A[√d]^*] Π_{ℓ | f} (1 − χ_D(ℓ)/|ℓ|), where the unit
    /// index is q+1 for constant D and nonconstant f, and 1 otherwise.
    pub fn class_number_ratio(&self, d: &Poly) -> Result<ExactRational> {
        let fq = self.fq().clone();
        require_imaginary(d, &fq)?;
        let dec = DiscriminantDecomp::new(d, &fq)?;
        let q = fq.q();
        let constant = dec.has_constant_fundamental();
        let h_fund = if constant {
            BigRational::one()
        } else {
            self.class_number_analytic(&dec.fundamental)?
        };
        let mut r = h_fund * BigRational::from_integer(big(dec.f.norm(&fq)));
        if constant && !dec.f.is_constant() {
            r /= BigRational::from_integer(BigInt::from(q + 1));
        }
        for (l, _) in dec.f_primes() {
            let norm = BigRational::from_integer(big(l.norm(&fq)));
            let chi = BigRational::from_integer(BigInt::from(legendre(&dec.fundamental, &l, &fq)));
            r *= BigRational::one() - chi / norm;
        }
        Ok(r)
    }

    /// h(d) for an imaginary discriminant: the analytic formula, or the ratio formula
    /// when the fundamental part is constant. Cached by canonical d.
    pub fn class_number(&self, d: &Poly) -> Result<BigUint> {
        let fq = self.fq().clone();
        require_imaginary(d, &fq)?;
        let key = canonical_discriminant(d, &fq);
        if let Some(h) = self.cache.read().expect("lock").get(&key) {
            return Ok(h.clone());
        }
        let dec = DiscriminantDecomp::new(&key, &fq)?;
        let value = if dec.has_constant_fundamental() {
            self.class_number_ratio(&key)?
        } else {
            self.class_number_analytic(&key)?
        };
        let h = positive_integer(&value).ok_or_else(|| {
            Error::Inconsistent(format!(
                "h({}) = {value} is not a positive integer",
                key.to_text(&fq)
            ))
        })?;
        self.cache.write().expect("lock").insert(key, h.clone());
        Ok(h)
    }

    /// H_p = Σ_{f monic, f² | d} h(d/f²) with d = a² − 4up.
    pub fn hurwitz_mass(&self, a: &Poly, u: Scalar, p: &Poly) -> Result<BigUint> {
        let fq = self.fq().clone();
        let d = mass_discriminant(a, u, p, &fq)?;
        let dec = DiscriminantDecomp::new(&d, &fq)?;
        let mut total = BigUint::zero();
        for f in square_divisors(&dec, &fq) {
            let reduced = d.div_exact(&f.square(&fq), &fq)?;
            total += self.class_number(&reduced)?;
        }
        Ok(total)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("lock").len()
    }

    /// Loads `canonical-d<TAB>h` records; returns the number read.
    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        let text = fs::read_to_string(path)?;
        let fq = self.fq().clone();
        let mut w = self.cache.write().expect("lock");
        let mut n = 0;
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (d, h) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("cache line {}: missing tab", lineno + 1)))?;
            let d = canonical_discriminant(&Poly::parse(d, &fq)?, &fq);
            let h: BigUint = h
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("cache line {}: bad h", lineno + 1)))?;
            w.insert(d, h);
            n += 1;
        }
        Ok(n)
    }

    /// Writes the cache sorted by canonical order, one record per line.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let fq = self.fq().clone();
        let r = self.cache.read().expect("lock");
        let mut entries: Vec<_> = r.iter().collect();
        entries.sort_by(|a, b| {
            a.0.canonical_cmp(b.0)
                .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
        });
        let mut out = fs::File::create(path)?;
        for (d, h) in entries {
            writeln!(out, "{}\t{}", d.to_text(&fq), h)?;
        }
        Ok(())
    }
}

fn big(n: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n)
}

fn positive_integer(r: &ExactRational) -> Option<BigUint> {
    (r.is_integer() && r.is_positive()).then(|| r.numer().to_biguint().expect("positive"))
}

/// d = a² − 4up after checking the hypotheses of the mass formula.
pub fn mass_discriminant(a: &Poly, u: Scalar, p: &Poly, fq: &Fq) -> Result<Poly> {
    if !p.is_monic() || !is_irreducible(p, fq) {
        return Err(Error::NotIrreducible(p.to_text(fq)));
    }
    let x = p.deg().expect("nonzero");
    check_trace(a, u, x, fq)?;
    let four_u = fq.mul(fq.from_int(4), u);
    Ok(a.square(fq).sub(&p.scale(four_u, fq), fq))
}

/// deg a < x/2, u ≠ 0, and −4u a nonsquare when x is even.
pub fn check_trace(a: &Poly, u: Scalar, x: usize, fq: &Fq) -> Result<()> {
    if u.is_zero() {
        return Err(Error::ZeroInput("u"));
    }
    if let Some(da) = a.deg() {
        if 2 * da >= x {
            return Err(Error::TraceDegree { deg_a: da, x });
        }
    }
    if x.is_multiple_of(2) && fq.is_square(fq.mul(fq.from_int(-4), u)) {
        return Err(Error::InadmissibleUnit(fq.format(u)));
    }
    Ok(())
}

/// All monic f with f² | d.
pub fn square_divisors(dec: &DiscriminantDecomp, fq: &Fq) -> Vec<Poly> {
    let mut out = vec![Poly::one()];
    for (l, e) in dec.f_primes() {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for f in &out {
            let mut cur = f.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = cur.mul(&l, fq);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out
}

/// h(d) with a throwaway engine.
pub fn class_number(d: &Poly, fq: &Fq) -> Result<BigUint> {
    ClassNumbers::new(fq).class_number(d)
}

/// H_p with a throwaway engine.
pub fn hurwitz_mass(a: &Poly, u: Scalar, p: &Poly, fq: &Fq) -> Result<BigUint> {
    ClassNumbers::new(fq).hurwitz_mass(a, u, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn f3() -> Fq {
        Fq::new(3).unwrap()
    }

    #[test]
    fn examples() {
        let fq = f3();
        let p = |s: &str| Poly::parse(s, &fq).unwrap();
        assert_eq!(class_number(&p("T"), &fq).unwrap(), BigUint::from(1u32));
        assert_eq!(class_number(&p("T^3"), &fq).unwrap(), BigUint::from(3u32));
        assert_eq!(class_number(&p("2*T^2"), &fq).unwrap(), BigUint::from(1u32));
        let cn = ClassNumbers::new(&fq);
        assert_eq!(cn.class_number_ratio(&p("T^3")).unwrap(), rat(3, 1));
        assert_eq!(cn.class_number_analytic(&p("T^3")).unwrap(), rat(3, 1));
        // with the exact L-value the analytic formula also gives 1 for 2T²
        assert_eq!(cn.class_number_analytic(&p("2*T^2")).unwrap(), rat(1, 1));
        // but not for a constant discriminant
        assert_eq!(cn.class_number_analytic(&p("2")).unwrap(), rat(1, 4));
        assert!(matches!(
            class_number(&p("T^2+T"), &fq),
            Err(Error::NotImaginary(_))
        ));
    }

    #[test]
    fn mass_examples() {
        let fq = f3();
        let p = |s: &str| Poly::parse(s, &fq).unwrap();
        let one = Scalar::ONE;
        assert_eq!(
            mass_discriminant(&Poly::one(), one, &p("T"), &fq).unwrap(),
            p("2*T+1")
        );
        assert_eq!(
            hurwitz_mass(&Poly::one(), one, &p("T"), &fq).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(
            mass_discriminant(&Poly::one(), one, &p("T^2+1"), &fq).unwrap(),
            p("2*T^2")
        );
        assert_eq!(
            hurwitz_mass(&Poly::one(), one, &p("T^2+1"), &fq).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            hurwitz_mass(&Poly::t(), one, &p("T^2+1"), &fq),
            Err(Error::TraceDegree { deg_a: 1, x: 2 })
        );
        assert!(matches!(
            hurwitz_mass(&Poly::one(), fq.from_int(2), &p("T^2+1"), &fq),
            Err(Error::InadmissibleUnit(_))
        ));
        assert!(matches!(
            hurwitz_mass(&Poly::one(), one, &p("T^2+2*T"), &fq),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn integrality_and_ratio_consistency() {
        let fq = f3();
        let cn = ClassNumbers::new(&fq);
        for d in Poly::all_below_degree(&fq, 6) {
            if d.is_zero() || !crate::quadratic::is_imaginary_discriminant(&d, &fq).unwrap() {
                continue;
            }
            let h = cn.class_number(&d).unwrap();
            assert!(h >= BigUint::one());
            let dec = DiscriminantDecomp::new(&d, &fq).unwrap();
            if !dec.has_constant_fundamental() {
                assert_eq!(
                    cn.class_number_analytic(&d).unwrap(),
                    cn.class_number_ratio(&d).unwrap(),
                    "{}",
                    d.to_text(&fq)
                );
            }
        }
    }

    #[test]
    fn cache_roundtrip() {
        let fq = f3();
        let cn = ClassNumbers::new(&fq);
        for s in ["T", "2*T^2", "T^3+2*T+1", "2*T^4+T"] {
            cn.class_number(&Poly::parse(s, &fq).unwrap()).unwrap();
        }
        let dir = std::env::temp_dir().join(format!("frobtrace-cache-{}", std::process::id()));
        cn.save_cache(&dir).unwrap();
        let text = std::fs::read_to_string(&dir).unwrap();
        assert!(text.lines().all(|l| l.split('\t').count() == 2));
        let other = ClassNumbers::new(&fq);
        assert_eq!(other.load_cache(&dir).unwrap(), cn.cache_len());
        std::fs::remove_file(&dir).unwrap();
    }
}
