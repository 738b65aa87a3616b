//! The averaging harness: empirical S over a box, the class-number route, the
//! full-box identity and the comparison with the main term.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{c_infinity, default_max_prime_deg, main_term_for, Parity};
use crate::drinfeld::iso::MAX_ENUMERATION_SIZE;
use crate::drinfeld::{
    enumerate_iso_classes, gamma_zero_classes, CharPolyFrob, FiniteDrinfeldModule,
};
use crate::error::{Error, Result};
use crate::factor::enumerate_primes;
use crate::fq::{Fq, Scalar};
use crate::poly::Poly;
use crate::quadratic::classnum::{check_trace, mass_discriminant, square_divisors};
use crate::quadratic::{ClassNumbers, DiscriminantDecomp};
use crate::rational::{from_biguint, to_f64, ExactRational, HalfPowerJson, HalfPowerRational};
use crate::residue::{ResidueElem, ResidueField};

pub const SCHEMA_VERSION: u32 = 1;
/// Largest number of residue pairs (summed over primes) the empirical route visits.
pub const MAX_EMPIRICAL_PAIRS: u64 = 1 << 22;

/// Box(𝒜, ℬ) = {(g, Δ): deg g < 𝒜, deg Δ < ℬ, Δ ≠ 0}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoxSpec {
    pub deg_g: usize,
    pub deg_delta: usize,
}

impl BoxSpec {
    pub fn new(deg_g: usize, deg_delta: usize) -> Result<Self> {
        if deg_g == 0 || deg_delta == 0 {
            return Err(Error::Config(format!(
                "box degrees must be positive, got ({deg_g}, {deg_delta})"
            )));
        }
        Ok(BoxSpec { deg_g, deg_delta })
    }

    /// The box covering every residue pair mod a prime of degree x exactly once.
    pub fn full(x: usize) -> Self {
        BoxSpec {
            deg_g: x,
            deg_delta: x,
        }
    }

    /// #Box = q^𝒜 (q^ℬ − 1).
    pub fn size(&self, q: u64) -> BigUint {
        let q = BigUint::from(q);
        q.pow(self.deg_g as u32) * (q.pow(self.deg_delta as u32) - 1u32)
    }
}

fn check_degree(a: &Poly, u: Scalar, x: usize) -> Result<()> {
    if x == 0 {
        return Err(Error::Config("x must be positive".into()));
    }
    if u.is_zero() {
        return Err(Error::ZeroInput("u"));
    }
    match a.deg() {
        Some(da) if 2 * da >= x => Err(Error::TraceDegree { deg_a: da, x }),
        _ => Ok(()),
    }
}

fn ratio(n: BigUint, d: BigUint) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// #{(g, Δ) ∈ Box: p ∤ Δ, the reduction mod p has Frobenius charpoly (a, u)}.
/// A residue of degree < x is hit q^{𝒜−x} times when 𝒜 ≥ x and at most once otherwise.
pub fn prime_count(field: &ResidueField, bx: &BoxSpec, a: &Poly, u: Scalar) -> Result<BigUint> {
    let fq = field.fq();
    let x = field.degree();
    let (lg, ld) = (bx.deg_g.min(x), bx.deg_delta.min(x));
    let target = CharPolyFrob { a: a.clone(), u };
    let gs: Vec<ResidueElem> = Poly::all_below_degree(fq, lg)
        .map(|g| field.reduce(&g))
        .collect();
    let ds: Vec<ResidueElem> = Poly::all_below_degree(fq, ld)
        .filter(|d| !d.is_zero())
        .map(|d| field.reduce(&d))
        .collect();
    let hits = gs
        .par_iter()
        .map(|&g| {
            ds.iter().try_fold(0u64, |n, &d| -> Result<u64> {
                let cp = FiniteDrinfeldModule::new(field, g, d)?.frobenius_charpoly()?;
                Ok(n + (cp == target) as u64)
            })
        })
        .try_reduce(|| 0, |x, y| Ok(x + y))?;
    let q = BigUint::from(fq.q());
    Ok(q.pow((bx.deg_g - lg + bx.deg_delta - ld) as u32) * hits)
}

/// Per-prime counts for the empirical route, in prime order.
pub fn empirical_counts(
    x: usize,
    bx: &BoxSpec,
    a: &Poly,
    u: Scalar,
    fq: &Fq,
) -> Result<Vec<(Poly, BigUint)>> {
    check_degree(a, u, x)?;
    let primes = enumerate_primes(fq, x);
    let q = fq.q() as f64;
    let pairs = primes.len() as f64
        * q.powi(bx.deg_g.min(x) as i32)
        * (q.powi(bx.deg_delta.min(x) as i32) - 1.0);
    if pairs > MAX_EMPIRICAL_PAIRS as f64 {
        return Err(Error::SizeGuard(format!(
            "empirical route would visit {pairs:.0} residue pairs"
        )));
    }
    primes
        .into_iter()
        .map(|p| {
            let field = ResidueField::new(fq, &p)?;
            let n = prime_count(&field, bx, a, u)?;
            Ok((p, n))
        })
        .collect()
}

/// S(x, 𝒜, ℬ, a, u) = (1/#Box) Σ_{(g, Δ) ∈ Box} #{p ∈ 𝒫: P_p(X, g, Δ) = X² − aX + up}.
pub fn empirical_s(x: usize, bx: &BoxSpec, a: &Poly, u: Scalar, fq: &Fq) -> Result<ExactRational> {
    let total: BigUint = empirical_counts(x, bx, a, u, fq)?
        .into_iter()
        .map(|(_, n)| n)
        .sum();
    Ok(ratio(total, bx.size(fq.q())))
}

/// The class-number route with its per-prime masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassNumberSlice {
    pub s: ExactRational,
    pub masses: Vec<(Poly, BigUint)>,
}

/// (1/((q−1) q^x)) Σ_{p ∈ 𝒫} H_p(a, u).
pub fn classnumber_s(
    x: usize,
    a: &Poly,
    u: Scalar,
    engine: &ClassNumbers,
) -> Result<ClassNumberSlice> {
    let fq = engine.fq().clone();
    check_degree(a, u, x)?;
    check_trace(a, u, x, &fq)?;
    let primes = enumerate_primes(&fq, x);
    let masses: Vec<BigUint> = primes
        .par_iter()
        .map(|p| engine.hurwitz_mass(a, u, p))
        .collect::<Result<_>>()?;
    let total: BigUint = masses.iter().sum();
    let q = BigUint::from(fq.q());
    let s = ratio(total, (&q - 1u32) * q.pow(x as u32));
    Ok(ClassNumberSlice {
        s,
        masses: primes.into_iter().zip(masses).collect(),
    })
}

/// κ_x C_∞ q^{−x/2} Σ_p Σ_{f² | d} w_f L(1, χ_{d/f²})/|f|, with κ_x = 2 for even x
/// and w_f = q + 1 when d/f² is constant. Equals the class-number route exactly.
pub fn l_form_s(x: usize, a: &Poly, u: Scalar, engine: &ClassNumbers) -> Result<ExactRational> {
    let fq = engine.fq().clone();
    let q = fq.q();
    check_degree(a, u, x)?;
    let primes = enumerate_primes(&fq, x);
    let terms: Vec<ExactRational> = primes
        .par_iter()
        .map(|p| {
            let d = mass_discriminant(a, u, p, &fq)?;
            let dec = DiscriminantDecomp::new(&d, &fq)?;
            let mut acc = ExactRational::zero();
            for f in square_divisors(&dec, &fq) {
                let reduced = d.div_exact(&f.square(&fq), &fq)?;
                let mut term = engine.l_value_at_one(&reduced)? / from_biguint(&f.norm(&fq));
                if reduced.is_constant() {
                    term *= BigRational::from_integer(BigInt::from(q + 1));
                }
                acc += term;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let total: ExactRational = terms.into_iter().sum();
    let kappa_x = if x.is_multiple_of(2) { 2 } else { 1 };
    let c_inf = c_infinity(q, Parity::of(x));
    let value = HalfPowerRational::new(
        q,
        c_inf.rational * total * BigRational::from_integer(BigInt::from(kappa_x)),
        c_inf.half_power - x as i64,
    );
    if !value.is_rational() {
        return Err(Error::Inconsistent("L-value form is not rational".into()));
    }
    Ok(value.rational)
}

/// Σ of class sizes over classes with Frobenius charpoly (a, u).
pub fn weighted_class_count(field: &ResidueField, a: &Poly, u: Scalar) -> Result<BigUint> {
    let target = CharPolyFrob { a: a.clone(), u };
    Ok(enumerate_iso_classes(field)?
        .into_iter()
        .filter(|(_, cp)| *cp == target)
        .map(|(c, _)| BigUint::from(c.size))
        .sum())
}

/// H_p − I_p: classes with a γ = 0 representative and charpoly (a, u).
pub fn gamma_zero_count(field: &ResidueField, a: &Poly, u: Scalar) -> Result<u64> {
    let target = CharPolyFrob { a: a.clone(), u };
    gamma_zero_classes(field)
        .into_iter()
        .try_fold(0u64, |n, c| -> Result<u64> {
            Ok(n + (c.module(field).frobenius_charpoly()? == target) as u64)
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRow {
    pub p: Poly,
    pub count: BigUint,
    pub weighted: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.count == r.weighted)
    }
}

/// For 𝒜 = ℬ = x: the full-box count at each p equals the class-size-weighted number
/// of classes with charpoly (a, u).
pub fn exact_identity_check(
    x: usize,
    bx: &BoxSpec,
    a: &Poly,
    u: Scalar,
    fq: &Fq,
) -> Result<IdentityReport> {
    if *bx != BoxSpec::full(x) {
        return Err(Error::Config(format!(
            "the full-box identity needs deg g, deg Δ bounds equal to x = {x}, got ({}, {})",
            bx.deg_g, bx.deg_delta
        )));
    }
    let rows = empirical_counts(x, bx, a, u, fq)?
        .into_iter()
        .map(|(p, count)| {
            let field = ResidueField::new(fq, &p)?;
            let weighted = weighted_class_count(&field, a, u)?;
            Ok(IdentityRow { p, count, weighted })
        })
        .collect::<Result<_>>()?;
    Ok(IdentityReport { rows })
}

/// Which of the three routes to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Routes {
    pub empirical: bool,
    pub classnumber: bool,
    pub main: bool,
}

impl Default for Routes {
    fn default() -> Self {
        Routes {
            empirical: true,
            classnumber: true,
            main: true,
        }
    }
}

impl FromStr for Routes {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut r = Routes {
            empirical: false,
            classnumber: false,
            main: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "empirical" => r.empirical = true,
                "classnumber" => r.classnumber = true,
                "main" => r.main = true,
                _ => return Err(Error::Parse(format!("unknown route {part:?}"))),
            }
        }
        Ok(r)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub fq: Fq,
    pub x: usize,
    pub a: Poly,
    pub u: Scalar,
    pub box_spec: BoxSpec,
    pub routes: Routes,
    pub max_prime_deg: usize,
}

impl ExperimentConfig {
    /// Full box, all routes, the largest Euler cutoff the size guard allows.
    pub fn new(fq: &Fq, x: usize, a: Poly, u: Scalar) -> Self {
        ExperimentConfig {
            fq: fq.clone(),
            x,
            a,
            u,
            box_spec: BoxSpec::full(x),
            routes: Routes::default(),
            max_prime_deg: default_max_prime_deg(fq.q()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Parameters {
    pub q: u64,
    pub x: usize,
    pub a: String,
    pub u: String,
    pub deg_g: usize,
    pub deg_delta: usize,
    pub max_prime_deg: usize,
}

/// The theorem's hypotheses: q ≥ 17, deg a < x/2, 𝒜, ℬ > (log 4/log q) x + log x and
/// 𝒜 + ℬ > (1/2 + log 16/log q) x + log x. Informational only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypotheses {
    pub q_at_least_17: bool,
    pub deg_a_below_half_x: bool,
    pub box_each: bool,
    pub box_sum: bool,
    pub label: String,
}

impl Hypotheses {
    pub fn evaluate(q: u64, x: usize, a: &Poly, bx: &BoxSpec) -> Self {
        let (lq, xf) = ((q as f64).ln(), x as f64);
        let lx = xf.ln();
        let each = (4f64.ln() / lq) * xf + lx;
        let sum = (0.5 + 16f64.ln() / lq) * xf + lx;
        let q_at_least_17 = q >= 17;
        let deg_a_below_half_x = a.deg().is_none_or(|d| 2 * d < x);
        let box_each = bx.deg_g as f64 > each && bx.deg_delta as f64 > each;
        let box_sum = (bx.deg_g + bx.deg_delta) as f64 > sum;
        let within = q_at_least_17 && deg_a_below_half_x && box_each && box_sum;
        let label = if within {
            "within theorem hypotheses"
        } else {
            "outside theorem hypotheses"
        };
        Hypotheses {
            q_at_least_17,
            deg_a_below_half_x,
            box_each,
            box_sum,
            label: label.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantSummary {
    pub route: String,
    pub value: HalfPowerJson,
    pub tail_bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Ratios {
    pub classnumber_over_main: Option<f64>,
    pub empirical_over_classnumber: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Checks {
    pub l_form_matches: Option<bool>,
    pub empirical_equals_classnumber: Option<bool>,
    pub full_box_identity: Option<bool>,
    pub gamma_zero_bound: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeRow {
    pub p: String,
    pub mass: Option<String>,
    pub gamma_zero_classes: Option<u64>,
    pub empirical_count: Option<String>,
}

/// Exact values behind the rendered report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactValues {
    pub empirical: Option<ExactRational>,
    pub classnumber: Option<ExactRational>,
    pub main: Option<HalfPowerRational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub parameters: Parameters,
    pub hypotheses: Hypotheses,
    pub empirical_s: Option<HalfPowerJson>,
    pub empirical_skipped: Option<String>,
    pub classnumber_s: Option<HalfPowerJson>,
    pub main_term: Option<HalfPowerJson>,
    pub constant: Option<ConstantSummary>,
    pub ratios: Ratios,
    pub error_term: Option<f64>,
    pub checks: Checks,
    pub primes: Vec<PrimeRow>,
    #[serde(skip)]
    pub exact: ExactValues,
}

const DIGITS: usize = 12;

fn render(r: &ExactRational, q: u64) -> HalfPowerJson {
    HalfPowerRational::rational(r.clone()).to_json(q, DIGITS)
}

/// Runs the selected routes. Deterministic: the report depends only on `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig, engine: &ClassNumbers) -> Result<ExperimentReport> {
    let fq = &cfg.fq;
    let q = fq.q();
    if engine.fq().q() != q {
        return Err(Error::Config(
            "class-number engine is over a different field".into(),
        ));
    }
    let (x, a, u, bx) = (cfg.x, &cfg.a, cfg.u, &cfg.box_spec);
    check_degree(a, u, x)?;
    BoxSpec::new(bx.deg_g, bx.deg_delta)?;
    let primes = enumerate_primes(fq, x);
    let mut rows: Vec<PrimeRow> = primes
        .iter()
        .map(|p| PrimeRow {
            p: p.to_text(fq),
            mass: None,
            gamma_zero_classes: None,
            empirical_count: None,
        })
        .collect();
    let mut exact = ExactValues::default();
    let mut checks = Checks::default();
    let mut empirical_skipped = None;
    let enumerable = primes
        .first()
        .is_some_and(|p| ResidueField::new(fq, p).is_ok_and(|f| f.size() <= MAX_ENUMERATION_SIZE));

    if cfg.routes.empirical {
        match empirical_counts(x, bx, a, u, fq) {
            Ok(counts) => {
                let total: BigUint = counts.iter().map(|(_, n)| n).sum();
                exact.empirical = Some(ratio(total, bx.size(q)));
                for (row, (_, n)) in rows.iter_mut().zip(&counts) {
                    row.empirical_count = Some(n.to_string());
                }
                if *bx == BoxSpec::full(x) && enumerable {
                    let mut holds = true;
                    for (p, n) in &counts {
                        let field = ResidueField::new(fq, p)?;
                        holds &= weighted_class_count(&field, a, u)? == *n;
                    }
                    checks.full_box_identity = Some(holds);
                }
            }
            Err(Error::SizeGuard(msg)) => empirical_skipped = Some(msg),
            Err(e) => return Err(e),
        }
    }

    if cfg.routes.classnumber {
        let slice = classnumber_s(x, a, u, engine)?;
        let l_form = l_form_s(x, a, u, engine)?;
        checks.l_form_matches = Some(l_form == slice.s);
        let gamma_zero: Option<Vec<u64>> = if enumerable {
            Some(
                primes
                    .par_iter()
                    .map(|p| gamma_zero_count(&ResidueField::new(fq, p)?, a, u))
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        let bound = q * q - 1;
        let mut bound_holds = true;
        for (i, (row, (_, h))) in rows.iter_mut().zip(&slice.masses).enumerate() {
            row.mass = Some(h.to_string());
            if let Some(g) = &gamma_zero {
                row.gamma_zero_classes = Some(g[i]);
                bound_holds &= g[i] <= bound && BigUint::from(g[i]) <= *h;
            }
        }
        if gamma_zero.is_some() {
            checks.gamma_zero_bound = Some(bound_holds);
        }
        exact.classnumber = Some(slice.s);
    }

    let mut constant = None;
    if cfg.routes.main {
        let (m, c) = main_term_for(x, a, cfg.max_prime_deg, fq)?;
        constant = Some(ConstantSummary {
            route: c.route.to_string(),
            value: render(&c.value, q),
            tail_bound: to_f64(&c.tail_bound),
        });
        exact.main = Some(m);
    }

    if let (Some(e), Some(c)) = (&exact.empirical, &exact.classnumber) {
        checks.empirical_equals_classnumber = Some(e == c);
    }
    let mut ratios = Ratios::default();
    let mut error_term = None;
    if let (Some(c), Some(m)) = (&exact.classnumber, &exact.main) {
        ratios.classnumber_over_main = Some(HalfPowerRational::rational(c.clone()).ratio_f64(m, q));
        error_term = Some(to_f64(c) - m.to_f64(q));
    }
    if let (Some(e), Some(c)) = (&exact.empirical, &exact.classnumber) {
        if !c.is_zero() {
            ratios.empirical_over_classnumber = Some(to_f64(&(e / c)));
        }
    }

    Ok(ExperimentReport {
        schema: SCHEMA_VERSION,
        parameters: Parameters {
            q,
            x,
            a: a.to_text(fq),
            u: fq.format(u),
            deg_g: bx.deg_g,
            deg_delta: bx.deg_delta,
            max_prime_deg: cfg.max_prime_deg,
        },
        hypotheses: Hypotheses::evaluate(q, x, a, bx),
        empirical_s: exact.empirical.as_ref().map(|r| render(r, q)),
        empirical_skipped,
        classnumber_s: exact.classnumber.as_ref().map(|r| render(r, q)),
        main_term: exact.main.as_ref().map(|m| m.to_json(q, DIGITS)),
        constant,
        ratios,
        error_term,
        checks,
        primes: rows,
        exact,
    })
}

/// CSV rows `x,route,num,den,half_power,decimal` for a series of reports.
pub fn reports_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::from("x,route,num,den,half_power,decimal\n");
    for r in reports {
        for (route, v) in [
            ("empirical", &r.empirical_s),
            ("classnumber", &r.classnumber_s),
            ("main", &r.main_term),
        ] {
            if let Some(v) = v {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.parameters.x, route, v.num, v.den, v.half_power, v.decimal
                ));
            }
        }
    }
    out
}

/// Per-u slices of the class-number route, for every admissible u.
pub fn per_unit_slices(
    x: usize,
    a: &Poly,
    engine: &ClassNumbers,
) -> Result<Vec<(Scalar, ExactRational)>> {
    let fq = engine.fq().clone();
    fq.units()
        .filter(|&u| check_trace(a, u, x, &fq).is_ok())
        .map(|u| Ok((u, classnumber_s(x, a, u, engine)?.s)))
        .collect()
}

/// Total count of primes p of degree x and classes over F_p with trace a, over all u.
pub fn aggregate_over_units(x: usize, a: &Poly, fq: &Fq) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for p in enumerate_primes(fq, x) {
        let field = ResidueField::new(fq, &p)?;
        total += enumerate_iso_classes(&field)?
            .into_iter()
            .filter(|(_, cp)| cp.a == *a)
            .count();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn f3() -> Fq {
        Fq::new(3).unwrap()
    }

    fn p(s: &str, fq: &Fq) -> Poly {
        Poly::parse(s, fq).unwrap()
    }

    fn admissible(fq: &Fq, x: usize) -> Vec<(Poly, Scalar)> {
        let bound = x.div_ceil(2); // deg a < x/2
        let mut out = Vec::new();
        for a in Poly::all_below_degree(fq, bound) {
            for u in fq.units() {
                if check_trace(&a, u, x, fq).is_ok() {
                    out.push((a.clone(), u));
                }
            }
        }
        out
    }

    #[test]
    fn box_size() {
        assert_eq!(BoxSpec::full(1).size(3), BigUint::from(6u32));
        assert_eq!(BoxSpec::new(2, 1).unwrap().size(3), BigUint::from(18u32));
        assert!(BoxSpec::new(0, 1).is_err());
    }

    #[test]
    fn empirical_matches_literal_box_enumeration() {
        let fq = f3();
        for (x, bx) in [
            (1, BoxSpec::new(1, 1).unwrap()),
            (1, BoxSpec::new(2, 3).unwrap()),
            (2, BoxSpec::new(1, 3).unwrap()),
        ] {
            for (a, u) in admissible(&fq, x) {
                let fast = empirical_s(x, &bx, &a, u, &fq).unwrap();
                // every (g, Δ) reduced mod every p
                let mut hits = 0u64;
                let target = CharPolyFrob { a: a.clone(), u };
                for pr in enumerate_primes(&fq, x) {
                    let field = ResidueField::new(&fq, &pr).unwrap();
                    for g in Poly::all_below_degree(&fq, bx.deg_g) {
                        for d in Poly::all_below_degree(&fq, bx.deg_delta).filter(|d| !d.is_zero())
                        {
                            let (gr, dr) = (field.reduce(&g), field.reduce(&d));
                            if dr.is_zero() {
                                continue;
                            }
                            let cp = FiniteDrinfeldModule::new(&field, gr, dr)
                                .unwrap()
                                .frobenius_charpoly()
                                .unwrap();
                            hits += (cp == target) as u64;
                        }
                    }
                }
                assert_eq!(fast, ratio(BigUint::from(hits), bx.size(3)), "x={x} {bx:?}");
            }
        }
    }

    #[test]
    fn classnumber_examples() {
        let fq = f3();
        let engine = ClassNumbers::new(&fq);
        let s = classnumber_s(1, &Poly::zero(), Scalar::ONE, &engine).unwrap();
        assert_eq!(s.s, rat(1, 2));
        let s = classnumber_s(2, &Poly::one(), Scalar::ONE, &engine).unwrap();
        let at = s
            .masses
            .iter()
            .find(|(pr, _)| *pr == p("T^2+1", &fq))
            .unwrap();
        assert_eq!(at.1, BigUint::from(2u32));
        assert!(matches!(
            classnumber_s(2, &Poly::one(), fq.from_int(2), &engine),
            Err(Error::InadmissibleUnit(_))
        ));
        assert!(matches!(
            empirical_s(2, &BoxSpec::full(2), &p("T", &fq), Scalar::ONE, &fq),
            Err(Error::TraceDegree { .. })
        ));
    }

    #[test]
    fn l_form_matches_classnumber_route() {
        for q in [3u64, 5] {
            let fq = Fq::new(q).unwrap();
            let engine = ClassNumbers::new(&fq);
            for x in 1..=4 {
                for (a, u) in admissible(&fq, x) {
                    let s = classnumber_s(x, &a, u, &engine).unwrap().s;
                    assert_eq!(
                        l_form_s(x, &a, u, &engine).unwrap(),
                        s,
                        "q={q} x={x} a={}",
                        a.to_text(&fq)
                    );
                }
            }
        }
    }

    #[test]
    fn full_box_identity() {
        let fq = f3();
        for x in [1, 2] {
            for (a, u) in admissible(&fq, x) {
                let rep = exact_identity_check(x, &BoxSpec::full(x), &a, u, &fq).unwrap();
                assert!(rep.holds(), "x={x} a={}", a.to_text(&fq));
            }
        }
        let err = exact_identity_check(
            1,
            &BoxSpec::new(2, 1).unwrap(),
            &Poly::zero(),
            Scalar::ONE,
            &fq,
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn odd_x_full_box_equals_classnumber_route() {
        let fq = f3();
        let engine = ClassNumbers::new(&fq);
        for x in [1, 3] {
            for (a, u) in admissible(&fq, x) {
                let e = empirical_s(x, &BoxSpec::full(x), &a, u, &fq).unwrap();
                assert_eq!(e, classnumber_s(x, &a, u, &engine).unwrap().s);
            }
        }
    }

    #[test]
    fn per_unit_uniformity() {
        let fq = f3();
        let engine = ClassNumbers::new(&fq);
        let slices = per_unit_slices(1, &Poly::zero(), &engine).unwrap();
        assert_eq!(slices.len(), 2);
        assert!(slices.iter().all(|(_, s)| *s == slices[0].1));
        // the slices partition all classes with trace 0
        let sum: BigUint = fq
            .units()
            .map(|u| {
                classnumber_s(1, &Poly::zero(), u, &engine)
                    .unwrap()
                    .masses
                    .into_iter()
                    .map(|(_, h)| h)
                    .sum::<BigUint>()
            })
            .sum();
        assert_eq!(sum, aggregate_over_units(1, &Poly::zero(), &fq).unwrap());
    }

    #[test]
    fn report_is_deterministic_and_thread_independent() {
        let fq = f3();
        let cfg = ExperimentConfig {
            max_prime_deg: 6,
            ..ExperimentConfig::new(&fq, 3, Poly::zero(), Scalar::ONE)
        };
        let a =
            serde_json::to_string(&run_experiment(&cfg, &ClassNumbers::new(&fq)).unwrap()).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| {
            serde_json::to_string(&run_experiment(&cfg, &ClassNumbers::new(&fq)).unwrap()).unwrap()
        });
        assert_eq!(a, b);
        let r = run_experiment(&cfg, &ClassNumbers::new(&fq)).unwrap();
        assert_eq!(r.checks.full_box_identity, Some(true));
        assert_eq!(r.checks.empirical_equals_classnumber, Some(true));
        assert_eq!(r.checks.l_form_matches, Some(true));
        assert_eq!(r.checks.gamma_zero_bound, Some(true));
        assert_eq!(r.hypotheses.label, "outside theorem hypotheses");
        assert!(reports_csv(&[r]).lines().count() == 4);
    }

    #[test]
    fn hypothesis_flags() {
        let h = Hypotheses::evaluate(17, 10, &Poly::one(), &BoxSpec::new(10, 10).unwrap());
        assert_eq!(h.label, "within theorem hypotheses");
        let h = Hypotheses::evaluate(3, 10, &Poly::one(), &BoxSpec::new(10, 10).unwrap());
        assert_eq!(h.label, "outside theorem hypotheses");
    }

    #[test]
    fn routes_parse() {
        assert_eq!(
            "empirical,main".parse::<Routes>().unwrap(),
            Routes {
                empirical: true,
                classnumber: false,
                main: true
            }
        );
        assert!("bogus".parse::<Routes>().is_err());
    }
}
