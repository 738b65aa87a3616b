//! Exact rationals and the half-power-of-q carrier.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Exact big-integer ratio.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_biguint(n: &BigUint) -> ExactRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()))
}

/// q^k for a possibly negative k.
pub fn q_power(q: u64, k: i64) -> ExactRational {
    let base = BigInt::from(q).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// Compares two rationals by cross-multiplication without reducing either.
pub fn cmp_unreduced(a: &ExactRational, b: &ExactRational) -> Ordering {
    let (an, ad) = normalized_sign(a);
    let (bn, bd) = normalized_sign(b);
    (an * bd).cmp(&(bn * ad))
}

fn normalized_sign(a: &ExactRational) -> (BigInt, BigInt) {
    if a.denom().is_negative() {
        (-a.numer().clone(), -a.denom().clone())
    } else {
        (a.numer().clone(), a.denom().clone())
    }
}

/// a − b without a gcd reduction of the result.
pub fn sub_unreduced(a: &ExactRational, b: &ExactRational) -> ExactRational {
    BigRational::new_raw(
        a.numer() * b.denom() - b.numer() * a.denom(),
        a.denom() * b.denom(),
    )
}

/// a · b without a gcd reduction of the result.
pub fn mul_unreduced(a: &ExactRational, b: &ExactRational) -> ExactRational {
    BigRational::new_raw(a.numer() * b.numer(), a.denom() * b.denom())
}

/// r · s for reduced r and s, cancelling through remainders against s so that no gcd
/// ever runs on two large operands. Reduced if both inputs are.
pub fn mul_small(r: &ExactRational, s: &ExactRational) -> ExactRational {
    if r.is_zero() || s.is_zero() {
        return ExactRational::zero();
    }
    let (a, b) = (r.numer(), r.denom());
    let (c, d) = (s.numer(), s.denom());
    let g1 = small_gcd(a, d);
    let g2 = small_gcd(b, c);
    let num = (a / &g1) * (c / &g2);
    let den = (b / &g2) * (d / &g1);
    if den.is_negative() {
        BigRational::new_raw(-num, -den)
    } else {
        BigRational::new_raw(num, den)
    }
}

fn small_gcd(big: &BigInt, small: &BigInt) -> BigInt {
    (big % small).gcd(small).abs()
}

pub fn abs_unreduced(a: &ExactRational) -> ExactRational {
    BigRational::new_raw(a.numer().abs(), a.denom().abs())
}

/// Nearest f64, exact to about 53 bits even for megabit operands.
pub fn to_f64(a: &ExactRational) -> f64 {
    let (n, d) = normalized_sign(a);
    if n.is_zero() {
        return 0.0;
    }
    let shift = n.bits() as i64 - d.bits() as i64 - 80;
    let (n, d) = if shift > 0 {
        (n, d << shift as usize)
    } else {
        (n << (-shift) as usize, d)
    };
    let q = n / d;
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Decimal rendering with `digits` significant digits after the point.
pub fn decimal(a: &ExactRational, digits: usize) -> String {
    let (n, d) = normalized_sign(a);
    let neg = n.is_negative();
    let n = n.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled: BigInt = (n * &scale * 2 + &d) / (d * 2);
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if neg && !(int.is_zero() && frac.is_zero()) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// The value r · q^{h/2}, normalized so that h ∈ {−1, 0}, and h = 0 whenever q is a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPowerRational {
    pub rational: ExactRational,
    pub half_power: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfPowerJson {
    pub num: String,
    pub den: String,
    pub half_power: i64,
    pub decimal: String,
}

impl HalfPowerRational {
    pub fn new(q: u64, rational: ExactRational, half_power: i64) -> Self {
        let mut r = rational;
        let mut h = half_power;
        // fold q^{floor} into the rational part
        let whole = h.div_euclid(2);
        h = h.rem_euclid(2);
        if h == 1 {
            h = -1;
            r = mul_small(&r, &q_power(q, whole + 1));
        } else {
            r = mul_small(&r, &q_power(q, whole));
        }
        if h == -1 {
            if let Some(s) = exact_sqrt(q) {
                r = mul_small(&r, &BigRational::new(BigInt::one(), BigInt::from(s)));
                h = 0;
            }
        }
        HalfPowerRational {
            rational: r,
            half_power: h,
        }
    }

    pub fn rational(r: ExactRational) -> Self {
        HalfPowerRational {
            rational: r,
            half_power: 0,
        }
    }

    pub fn mul(&self, other: &HalfPowerRational, q: u64) -> Self {
        HalfPowerRational::new(
            q,
            &self.rational * &other.rational,
            self.half_power + other.half_power,
        )
    }

    pub fn to_f64(&self, q: u64) -> f64 {
        to_f64(&self.rational) * (q as f64).powf(self.half_power as f64 / 2.0)
    }

    pub fn is_rational(&self) -> bool {
        self.half_power == 0
    }

    pub fn to_json(&self, q: u64, digits: usize) -> HalfPowerJson {
        HalfPowerJson {
            num: self.rational.numer().to_string(),
            den: self.rational.denom().to_string(),
            half_power: self.half_power,
            decimal: format!("{:.*}", digits, self.to_f64(q)),
        }
    }

    /// self / other as an f64.
    pub fn ratio_f64(&self, other: &HalfPowerRational, q: u64) -> f64 {
        let (a, b) = (&self.rational, &other.rational);
        let r = to_f64(&BigRational::new_raw(
            a.numer() * b.denom(),
            a.denom() * b.numer(),
        ));
        r * (q as f64).powf((self.half_power - other.half_power) as f64 / 2.0)
    }
}

fn exact_sqrt(q: u64) -> Option<u64> {
    let s = (q as f64).sqrt().round() as u64;
    (s * s == q).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_power_normalization() {
        let c = HalfPowerRational::new(3, rat(1, 2), -1);
        assert_eq!(
            c,
            HalfPowerRational {
                rational: rat(1, 2),
                half_power: -1
            }
        );
        let c = HalfPowerRational::new(3, rat(1, 1), 3);
        assert_eq!(
            c,
            HalfPowerRational {
                rational: rat(9, 1),
                half_power: -1
            }
        );
        let c = HalfPowerRational::new(9, rat(1, 8), -1);
        assert_eq!(
            c,
            HalfPowerRational {
                rational: rat(1, 24),
                half_power: 0
            }
        );
        let c = HalfPowerRational::new(5, rat(1, 1), 4);
        assert_eq!(c, HalfPowerRational::rational(rat(25, 1)));
    }

    #[test]
    fn decimal_and_float() {
        assert_eq!(decimal(&rat(2, 3), 4), "0.6667");
        assert_eq!(decimal(&rat(-3, 2), 2), "-1.50");
        assert_eq!(decimal(&rat(7, 1), 0), "7");
        let big = BigRational::new_raw(
            BigInt::from(3u32).pow(5000) + 1,
            BigInt::from(3u32).pow(5000) * 2,
        );
        assert!((to_f64(&big) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unreduced_helpers() {
        let a = BigRational::new_raw(BigInt::from(4), BigInt::from(8));
        let b = rat(1, 3);
        assert_eq!(cmp_unreduced(&a, &b), Ordering::Greater);
        assert_eq!(sub_unreduced(&a, &b), rat(1, 6));
        assert_eq!(mul_unreduced(&a, &b), rat(1, 6));
        assert_eq!(abs_unreduced(&rat(-1, 2)), rat(1, 2));
        assert_eq!(mul_small(&rat(4, 9), &rat(-3, 8)), rat(-1, 6));
        assert_eq!(mul_small(&rat(4, 9), &rat(0, 1)), rat(0, 1));
        let big = BigRational::new(
            BigInt::from(3u32).pow(4000) + 2,
            BigInt::from(2u32).pow(3000),
        );
        assert_eq!(mul_small(&big, &rat(6, 5)), &big * rat(6, 5));
    }
}
