//! The acceptance suite as library checks, shared by `frobtrace verify` and the
//! integration tests.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::{
    c_avr, constant_c_doublesum, constant_c_euler, kappa, CMode, TruncationParams,
};
use crate::drinfeld::{classes_by_charpoly, CharPolyFrob, FiniteDrinfeldModule};
use crate::error::{Error, Result};
use crate::experiment::{exact_identity_check, run_experiment, BoxSpec, ExperimentConfig, Routes};
use crate::factor::{count_primes_in_ap, enumerate_primes, euler_phi};
use crate::fq::Fq;
use crate::poly::Poly;
use crate::quadratic::classnum::check_trace;
use crate::quadratic::dirichlet::{char_sum_bound, orthogonality_check, DirichletCharModP};
use crate::quadratic::{is_imaginary_discriminant, ClassNumbers, DiscriminantDecomp};
use crate::rational::{abs_unreduced, cmp_unreduced, q_power, rat, sub_unreduced, to_f64};
use crate::residue::ResidueField;

/// Seed for every random draw in the suite.
pub const SEED: u64 = 0x5eed_f40b;

pub const RANDOM_MODULES: usize = 1000;
pub const RANDOM_SEQUENCES: usize = 100;
pub const TREND_Q: u64 = 5;
pub const TREND_MAX_X: usize = 8;
pub const TREND_RATIO_RANGE: (f64, f64) = (0.2, 5.0);
pub const TREND_FROM_X: usize = 4;

/// Identifier, title and runtime budget of each criterion.
pub const CRITERIA: [(u8, &str, u64); 9] = [
    (1, "mass equals brute-force isomorphism-class count", 30),
    (2, "Frobenius identity and exhaustive charpoly oracle", 10),
    (
        3,
        "class numbers integral, analytic and ratio formulas agree",
        60,
    ),
    (
        4,
        "c(a; v, r) closed form equals brute force and obeys |c| <= |v|/kappa(v)",
        10,
    ),
    (
        5,
        "C(0) near q/(q-1); Euler and double-sum routes agree within tails",
        60,
    ),
    (6, "full-box counts equal class-size-weighted sums", 60),
    (7, "character-sum bound and orthogonality, exactly", 30),
    (
        8,
        "prime counts in progressions within the explicit error",
        30,
    ),
    (9, "trend of classnumber S over the main term, q = 5", 300),
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub correct: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn passed(&self) -> bool {
        self.correct && self.within_budget()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {}: {} [{:.2}s / {}s] {}",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

/// Runs criterion `id` (1..=9). Errors count as failures.
pub fn run(id: u8) -> Result<Outcome> {
    let &(_, title, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::Config(format!("no criterion {id}")))?;
    let start = Instant::now();
    let res = match id {
        1 => mass_equality(),
        2 => frobenius_identity(),
        3 => class_numbers(),
        4 => local_constants(),
        5 => constant_routes(),
        6 => full_box(),
        7 => character_sums(),
        8 => primes_in_progressions(),
        _ => trend(),
    };
    let (correct, detail) = match res {
        Ok(c) => (c.passed, c.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    Ok(Outcome {
        id,
        title,
        correct,
        detail,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget),
    })
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|c| run(c.0).expect("known id"))
        .collect()
}

struct Check {
    passed: bool,
    detail: String,
}

impl Check {
    fn tally(checked: usize, failures: &[String]) -> Check {
        let mut detail = format!("{checked} checked, {} failed", failures.len());
        if let Some(first) = failures.first() {
            detail.push_str(&format!("; first: {first}"));
        }
        Check {
            passed: failures.is_empty() && checked > 0,
            detail,
        }
    }
}

/// All a with deg a < x/2.
fn traces(fq: &Fq, x: usize) -> impl Iterator<Item = Poly> + '_ {
    Poly::all_below_degree(fq, x.div_ceil(2))
}

fn mass_equality() -> Result<Check> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for q in [3, 5] {
        let fq = Fq::new(q)?;
        let engine = ClassNumbers::new(&fq);
        for x in 1..=2 {
            for p in enumerate_primes(&fq, x) {
                let field = ResidueField::new(&fq, &p)?;
                let brute = classes_by_charpoly(&field)?;
                for a in traces(&fq, x) {
                    for u in fq.units() {
                        if check_trace(&a, u, x, &fq).is_err() {
                            continue;
                        }
                        let count = brute
                            .get(&CharPolyFrob { a: a.clone(), u })
                            .copied()
                            .unwrap_or(0);
                        let mass = engine.hurwitz_mass(&a, u, &p)?;
                        checked += 1;
                        if BigUint::from(count) != mass {
                            failures.push(format!(
                                "q={q} p={} a={} u={}: {count} vs {mass}",
                                p.to_text(&fq),
                                a.to_text(&fq),
                                fq.format(u)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(Check::tally(checked, &failures))
}

fn frobenius_identity() -> Result<Check> {
    let fq = Fq::new(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let primes: Vec<Vec<Poly>> = (1..=3).map(|x| enumerate_primes(&fq, x)).collect();
    let mut failures = Vec::new();
    for _ in 0..RANDOM_MODULES {
        let ps = &primes[rng.gen_range(0..3)];
        let field = ResidueField::new(&fq, &ps[rng.gen_range(0..ps.len())])?;
        let elements: Vec<_> = field.elements().collect();
        let gamma = elements[rng.gen_range(0..elements.len())];
        let delta = field.exp(rng.gen_range(0..field.order()));
        let m = FiniteDrinfeldModule::new(&field, gamma, delta)?;
        if !m.satisfies_frobenius_identity(&m.frobenius_charpoly()?) {
            failures.push(format!(
                "p={} γ={} δ={}",
                field.modulus().to_text(&fq),
                field.format(gamma),
                field.format(delta)
            ));
        }
    }
    let mut exhaustive = 0;
    for x in 1..=2 {
        for p in &primes[x - 1] {
            let field = ResidueField::new(&fq, p)?;
            for gamma in field.elements() {
                for delta in field.units() {
                    let m = FiniteDrinfeldModule::new(&field, gamma, delta)?;
                    exhaustive += 1;
                    if m.frobenius_charpoly()? != m.frobenius_charpoly_exhaustive()? {
                        failures.push(format!(
                            "oracle: p={} γ={} δ={}",
                            p.to_text(&fq),
                            field.format(gamma),
                            field.format(delta)
                        ));
                    }
                }
            }
        }
    }
    let mut c = Check::tally(RANDOM_MODULES + exhaustive, &failures);
    c.detail = format!(
        "{RANDOM_MODULES} random + {exhaustive} exhaustive; {}",
        c.detail
    );
    Ok(c)
}

fn class_numbers() -> Result<Check> {
    let fq = Fq::new(3)?;
    let engine = ClassNumbers::new(&fq);
    let mut failures = Vec::new();
    let (mut checked, mut compared) = (0, 0);
    for d in Poly::all_below_degree(&fq, 7) {
        if d.is_zero() || !is_imaginary_discriminant(&d, &fq)? {
            continue;
        }
        checked += 1;
        if let Err(e) = engine.class_number(&d) {
            failures.push(format!("h({}): {e}", d.to_text(&fq)));
            continue;
        }
        if !DiscriminantDecomp::new(&d, &fq)?.has_constant_fundamental() {
            compared += 1;
            let (analytic, ratio) = (
                engine.class_number_analytic(&d)?,
                engine.class_number_ratio(&d)?,
            );
            if analytic != ratio {
                failures.push(format!("{}: {analytic} vs {ratio}", d.to_text(&fq)));
            }
        }
    }
    let mut c = Check::tally(checked, &failures);
    c.detail = format!("{compared} formula comparisons; {}", c.detail);
    Ok(c)
}

fn local_constants() -> Result<Check> {
    let fq = Fq::new(3)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for a in ["1", "T", "T+1"] {
        let a = Poly::parse(a, &fq)?;
        for r in (0..=2)
            .flat_map(|d| Poly::monics_of_degree(&fq, d))
            .filter(|r| r.gcd(&a, &fq).is_one())
        {
            for v in (0..=3).flat_map(|d| Poly::monics_of_degree(&fq, d)) {
                checked += 1;
                let brute = c_avr(&a, &v, &r, CMode::Brute, &fq)?;
                let closed = c_avr(&a, &v, &r, CMode::Closed, &fq)?;
                let bounded = BigUint::from(closed.unsigned_abs()) * kappa(&v, &fq)? <= v.norm(&fq);
                if brute != closed || !bounded {
                    failures.push(format!(
                        "a={} v={} r={}: brute {brute}, closed {closed}",
                        a.to_text(&fq),
                        v.to_text(&fq),
                        r.to_text(&fq)
                    ));
                }
            }
        }
    }
    Ok(Check::tally(checked, &failures))
}

fn constant_routes() -> Result<Check> {
    let fq = Fq::new(3)?;
    let params = TruncationParams::default();
    let mut failures = Vec::new();
    let zeta = rat(3, 2);
    let c0 = constant_c_euler(&Poly::zero(), params.max_prime_deg, &fq)?;
    let gap = abs_unreduced(&sub_unreduced(&c0.value, &zeta));
    if cmp_unreduced(&gap, &q_power(3, -10)) != Ordering::Less {
        failures.push(format!("|C(0) − 3/2| = {:e}", to_f64(&gap)));
    }
    for a in ["0", "1", "T"] {
        let a = Poly::parse(a, &fq)?;
        let e = if a.is_zero() {
            c0.clone()
        } else {
            constant_c_euler(&a, params.max_prime_deg, &fq)?
        };
        let d = constant_c_doublesum(&a, params.u, params.v, &fq)?;
        if !e.agrees_with(&d) {
            failures.push(format!("a={}: routes differ beyond tails", a.to_text(&fq)));
        }
    }
    let mut c = Check::tally(4, &failures);
    c.detail = format!(
        "|C(0) − 3/2| = {:.3e} < 3^-10 = {:.3e}; {}",
        to_f64(&gap),
        3f64.powi(-10),
        c.detail
    );
    Ok(c)
}

fn full_box() -> Result<Check> {
    let fq = Fq::new(3)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for x in 1..=2 {
        for a in traces(&fq, x) {
            for u in fq.units() {
                if check_trace(&a, u, x, &fq).is_err() {
                    continue;
                }
                let report = exact_identity_check(x, &BoxSpec::full(x), &a, u, &fq)?;
                checked += report.rows.len();
                if !report.holds() {
                    failures.push(format!("x={x} a={} u={}", a.to_text(&fq), fq.format(u)));
                }
            }
        }
    }
    Ok(Check::tally(checked, &failures))
}

fn character_sums() -> Result<Check> {
    let fq = Fq::new(3)?;
    let mut failures = Vec::new();
    let mut bounds = 0;
    let primes: Vec<Poly> = (1..=2).flat_map(|x| enumerate_primes(&fq, x)).collect();
    for p in &primes {
        let field = ResidueField::new(&fq, p)?;
        let x = field.degree();
        for chi in DirichletCharModP::all(&field)?
            .into_iter()
            .filter(|c| !c.is_principal())
        {
            for z in 0..=x.min(2) {
                for zl in 0..=z {
                    bounds += 1;
                    let b = char_sum_bound(&chi, zl, z)?;
                    if !b.holds {
                        failures.push(format!(
                            "p={} k={} z'={zl} z={z}: {}",
                            p.to_text(&fq),
                            chi.exponent(),
                            b.modulus_squared
                        ));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let candidates: Vec<Poly> = (0..=4)
        .flat_map(|d| Poly::monics_of_degree(&fq, d))
        .collect();
    for i in 0..RANDOM_SEQUENCES {
        let field = ResidueField::new(&fq, &primes[rng.gen_range(0..primes.len())])?;
        let terms = rng.gen_range(1..=24);
        let coefficients: BTreeMap<Poly, i64> = (0..terms)
            .map(|_| {
                (
                    candidates[rng.gen_range(0..candidates.len())].clone(),
                    rng.gen_range(-9..=9),
                )
            })
            .collect();
        let r = orthogonality_check(&field, &coefficients)?;
        if !r.holds() {
            failures.push(format!("sequence {i}: {} vs {}", r.lhs, r.rhs));
        }
    }
    let mut c = Check::tally(bounds + RANDOM_SEQUENCES, &failures);
    c.detail = format!(
        "{bounds} bounds + {RANDOM_SEQUENCES} orthogonality sequences; {}",
        c.detail
    );
    Ok(c)
}

/// |count − q^x/(xφ(m))| ≤ 4 (deg m)² q^{x/2}/x, squared and cleared of denominators.
fn primes_in_progressions() -> Result<Check> {
    let fq = Fq::new(3)?;
    let q = BigInt::from(3);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut worst = 0f64;
    for x in 1..=6usize {
        for dm in 1..=2usize {
            for m in Poly::monics_of_degree(&fq, dm) {
                let phi = BigInt::from(euler_phi(&m, &fq)?);
                for a in Poly::all_below_degree(&fq, dm)
                    .filter(|a| !a.is_zero() && a.gcd(&m, &fq).is_one())
                {
                    checked += 1;
                    let count = BigInt::from(count_primes_in_ap(&fq, x, &m, &a)?);
                    let qx = q.pow(x as u32);
                    let dev = BigInt::from(x) * &phi * count - &qx;
                    let scale = BigInt::from(4 * dm * dm) * &phi;
                    let lhs = &dev * &dev;
                    let rhs = &scale * &scale * &qx;
                    if let (Some(l), Some(r)) = (lhs.to_f64(), rhs.to_f64()) {
                        if !r.is_zero() {
                            worst = worst.max((l / r).sqrt());
                        }
                    }
                    if lhs > rhs {
                        failures.push(format!("x={x} m={} a={}", m.to_text(&fq), a.to_text(&fq)));
                    }
                }
            }
        }
    }
    let mut c = Check::tally(checked, &failures);
    c.detail = format!("largest deviation/bound {worst:.3}; {}", c.detail);
    Ok(c)
}

/// One row of the trend table.
#[derive(Clone, Debug, PartialEq)]
pub struct TrendRow {
    pub x: usize,
    pub ratio: Option<f64>,
}

/// classnumber S / main term for q = 5, a = 0, u = 1 and x = 1..=8; `None` where u is
/// inadmissible for the parity of x.
pub fn trend_table() -> Result<Vec<TrendRow>> {
    let fq = Fq::new(TREND_Q)?;
    let engine = ClassNumbers::new(&fq);
    (1..=TREND_MAX_X)
        .map(|x| {
            if check_trace(&Poly::zero(), fq.one(), x, &fq).is_err() {
                return Ok(TrendRow { x, ratio: None });
            }
            let mut cfg = ExperimentConfig::new(&fq, x, Poly::zero(), fq.one());
            cfg.routes = Routes {
                empirical: false,
                classnumber: true,
                main: true,
            };
            let report = run_experiment(&cfg, &engine)?;
            Ok(TrendRow {
                x,
                ratio: report.ratios.classnumber_over_main,
            })
        })
        .collect()
}

fn trend() -> Result<Check> {
    let rows = trend_table()?;
    let (lo, hi) = TREND_RATIO_RANGE;
    let sane = rows
        .iter()
        .filter(|r| r.x >= TREND_FROM_X)
        .filter_map(|r| r.ratio)
        .collect::<Vec<_>>();
    let passed = !sane.is_empty() && sane.iter().all(|r| (lo..=hi).contains(r));
    let detail = rows
        .iter()
        .map(|r| match r.ratio {
            Some(v) => format!("x={} {v:.4}", r.x),
            None => format!("x={} inadmissible", r.x),
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Check { passed, detail })
}
