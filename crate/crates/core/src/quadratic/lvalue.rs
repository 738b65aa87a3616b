//! Exact L-functions L(X, χ_d) = Σ_{n monic} χ_d(n) X^{deg n} and their values at X = 1/q.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::factor::PrimeTable;
use crate::fq::Fq;
use crate::poly::Poly;
use crate::quadratic::chi::{legendre, QuadChar};
use crate::quadratic::discriminant::{require_imaginary, DiscriminantDecomp};
use crate::rational::ExactRational;

/// L(X, χ_d) = numerator(X), divided by (1 + qX) when the fundamental part is constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LFunction {
    pub numerator: Vec<i128>,
    pub constant_field: bool,
}

impl LFunction {
    /// Value at X = 1/q.
    pub fn at_one(&self, q: u64) -> ExactRational {
        let k = self.numerator.len().saturating_sub(1) as u32;
        let qb = BigInt::from(q);
        let num: BigInt = self
            .numerator
            .iter()
            .enumerate()
            .map(|(i, &c)| BigInt::from(c) * qb.pow(k - i as u32))
            .sum();
        let mut den = qb.pow(k);
        if self.constant_field {
            den *= 2;
        }
        BigRational::new(num, den)
    }

    /// Power-series coefficients up to X^n.
    pub fn series(&self, n: usize, q: u64) -> Vec<i128> {
        let mut out: Vec<i128> = (0..=n)
            .map(|k| self.numerator.get(k).copied().unwrap_or(0))
            .collect();
        if self.constant_field {
            // divide by 1 + qX
            for k in 1..=n {
                out[k] -= q as i128 * out[k - 1];
            }
        }
        out
    }
}

fn overflow() -> Error {
    Error::SizeGuard("L-polynomial coefficient overflows i128".into())
}

fn poly_mul(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let t = x.checked_mul(y).ok_or_else(overflow)?;
            out[i + j] = out[i + j].checked_add(t).ok_or_else(overflow)?;
        }
    }
    Ok(out)
}

/// Π_ℓ (1 − χ(ℓ) X^{deg ℓ})^{−1} mod X^{k+1}, over primes of degree ≤ k.
fn euler_series(d: &Poly, k: usize, primes: &PrimeTable) -> Result<Vec<i128>> {
    let fq = primes.fq();
    let mut s = vec![0i128; k + 1];
    s[0] = 1;
    for deg in 1..=k {
        for l in primes.degree(deg).iter() {
            let eps = legendre(d, l, fq) as i128;
            if eps == 0 {
                continue;
            }
            for j in deg..=k {
                s[j] = s[j].checked_add(eps * s[j - deg]).ok_or_else(overflow)?;
            }
        }
    }
    Ok(s)
}

/// Completes p_0..p_g to the full palindromic-type polynomial of degree 2g with
/// p_{2g−k} = q^{g−k} p_k, checking the computed p_{g+1}.
fn reflect(partial: &[i128], g: usize, q: u64) -> Result<Vec<i128>> {
    let mut full = vec![0i128; 2 * g + 1];
    full[..=g].copy_from_slice(&partial[..=g]);
    for k in 0..g {
        let scale = (q as i128)
            .checked_pow((g - k) as u32)
            .ok_or_else(overflow)?;
        full[2 * g - k] = partial[k].checked_mul(scale).ok_or_else(overflow)?;
    }
    let expected = full.get(g + 1).copied().unwrap_or(0);
    if partial[g + 1] != expected {
        return Err(Error::Inconsistent(format!(
            "functional equation check failed: coefficient {} is {} but reflection gives {}",
            g + 1,
            partial[g + 1],
            expected
        )));
    }
    Ok(full)
}

/// L(X, χ_D) for squarefree nonconstant D via the Euler product through degree g+1
/// and the functional equation.
fn fundamental_l_polynomial(d: &Poly, primes: &PrimeTable) -> Result<Vec<i128>> {
    let q = primes.fq().q();
    let n = d.deg().expect("nonzero");
    if n % 2 == 1 {
        let g = (n - 1) / 2;
        let s = euler_series(d, g + 1, primes)?;
        reflect(&s, g, q)
    } else {
        let g = (n - 2) / 2;
        let s = euler_series(d, g + 1, primes)?;
        // L = (1 + X) P
        let mut p = s.clone();
        for k in 1..p.len() {
            p[k] = p[k].checked_sub(p[k - 1]).ok_or_else(overflow)?;
        }
        let full = reflect(&p, g, q)?;
        poly_mul(&full, &[1, 1])
    }
}

/// L(X, χ_d) = L(X, χ_D) Π_{ℓ | f} (1 − χ_D(ℓ) X^{deg ℓ}).
pub fn l_function(d: &Poly, primes: &PrimeTable) -> Result<LFunction> {
    let fq = primes.fq();
    require_imaginary(d, fq)?;
    let dec = DiscriminantDecomp::new(d, fq)?;
    let constant_field = dec.has_constant_fundamental();
    let mut numerator = if constant_field {
        vec![1]
    } else {
        fundamental_l_polynomial(&dec.fundamental, primes)?
    };
    for (l, _) in dec.f_primes() {
        let k = l.deg().expect("prime");
        let mut factor = vec![0i128; k + 1];
        factor[0] = 1;
        factor[k] = -(legendre(&dec.fundamental, &l, fq) as i128);
        numerator = poly_mul(&numerator, &factor)?;
    }
    while numerator.len() > 1 && numerator.last() == Some(&0) {
        numerator.pop();
    }
    Ok(LFunction {
        numerator,
        constant_field,
    })
}

/// L(1, χ_d) exactly.
pub fn l_value_at_one(d: &Poly, fq: &Fq) -> Result<ExactRational> {
    Ok(l_function(d, &PrimeTable::new(fq))?.at_one(fq.q()))
}

/// c(k) = Σ_{n monic, deg n = k} χ_d(n) for k = 0..=upto, by direct summation.
pub fn l_coefficients_direct(d: &Poly, upto: usize, fq: &Fq) -> Result<Vec<i128>> {
    let chi = QuadChar::new(d, fq)?;
    (0..=upto)
        .map(|k| {
            Poly::monics_of_degree(fq, k).try_fold(0i128, |acc, n| Ok(acc + chi.eval(&n)? as i128))
        })
        .collect()
}

/// L(1, χ_d) by direct summation of c(k) q^{−k} for k < deg d, after checking that
/// c(deg d) and c(deg d + 1) vanish. Only valid for nonconstant fundamental part.
pub fn l_value_direct(d: &Poly, fq: &Fq) -> Result<ExactRational> {
    require_imaginary(d, fq)?;
    let dec = DiscriminantDecomp::new(d, fq)?;
    if dec.has_constant_fundamental() {
        return Err(Error::Config(
            "direct summation does not terminate for a constant fundamental part".into(),
        ));
    }
    let n = d.deg().expect("nonzero");
    let c = l_coefficients_direct(d, n + 1, fq)?;
    if c[n] != 0 || c[n + 1] != 0 {
        return Err(Error::Inconsistent(format!(
            "c({n}) = {}, c({}) = {}",
            c[n],
            n + 1,
            c[n + 1]
        )));
    }
    let mut numerator = c[..n].to_vec();
    if numerator.is_empty() {
        numerator.push(0);
    }
    Ok(LFunction {
        numerator,
        constant_field: false,
    }
    .at_one(fq.q()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn imaginary(fq: &Fq, max_deg: usize) -> Vec<Poly> {
        Poly::all_below_degree(fq, max_deg + 1)
            .filter(|d| !d.is_zero() && crate::quadratic::is_imaginary_discriminant(d, fq).unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        let fq = Fq::new(3).unwrap();
        let p = |s: &str| Poly::parse(s, &fq).unwrap();
        assert_eq!(l_value_at_one(&p("T"), &fq).unwrap(), rat(1, 1));
        assert_eq!(l_value_at_one(&p("2*T^2"), &fq).unwrap(), rat(2, 3));
        assert_eq!(l_value_at_one(&p("T^3"), &fq).unwrap(), rat(1, 1));
        assert!(matches!(
            l_value_at_one(&p("T^2"), &fq),
            Err(Error::NotImaginary(_))
        ));
        // the degree-1 partial sum of 2T² is 1 − 2/3; the series continues past deg d
        let c = l_coefficients_direct(&p("2*T^2"), 4, &fq).unwrap();
        assert_eq!(c[..2], [1, -2]);
        assert_eq!(
            c,
            l_function(&p("2*T^2"), &PrimeTable::new(&fq))
                .unwrap()
                .series(4, 3)
        );
    }

    #[test]
    fn fast_route_matches_direct_summation() {
        for (q, top) in [(3u64, 5usize), (5, 3)] {
            let fq = Fq::new(q).unwrap();
            let primes = PrimeTable::new(&fq);
            for d in imaginary(&fq, top) {
                let lf = l_function(&d, &primes).unwrap();
                let n = d.deg().unwrap();
                if lf.constant_field {
                    let direct = l_coefficients_direct(&d, n + 2, &fq).unwrap();
                    assert_eq!(direct, lf.series(n + 2, q), "{}", d.to_text(&fq));
                } else {
                    assert_eq!(
                        lf.at_one(q),
                        l_value_direct(&d, &fq).unwrap(),
                        "{}",
                        d.to_text(&fq)
                    );
                    assert!(lf.numerator.len() <= n.max(1));
                }
            }
        }
    }

    #[test]
    fn coefficients_vanish_from_deg_d() {
        let fq = Fq::new(3).unwrap();
        for d in imaginary(&fq, 5) {
            let n = d.deg().unwrap();
            let dec = DiscriminantDecomp::new(&d, &fq).unwrap();
            let c = l_coefficients_direct(&d, n + 1, &fq).unwrap();
            if dec.has_constant_fundamental() {
                // L = num/(1 + qX) has infinitely many nonzero coefficients
                assert_ne!(c[n + 1], 0);
            } else {
                assert!(c[n..].iter().all(|&x| x == 0), "{}", d.to_text(&fq));
            }
        }
    }
}
