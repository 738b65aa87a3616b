//! One experiment: empirical S over a box, the class-number route, and the main term.

use frobtrace::experiment::{run_experiment, BoxSpec, ExperimentConfig};
use frobtrace::quadratic::ClassNumbers;
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    let engine = ClassNumbers::new(&fq);
    let mut cfg = ExperimentConfig::new(&fq, 3, Poly::parse("1", &fq)?, fq.parse("2")?);
    cfg.box_spec = BoxSpec::new(2, 3)?;
    cfg.max_prime_deg = 8;
    let r = run_experiment(&cfg, &engine)?;
    let show = |v: &Option<frobtrace::rational::HalfPowerJson>| {
        v.as_ref().map_or("-".to_string(), |j| j.decimal.clone())
    };
    println!("{}", r.hypotheses.label);
    println!("empirical S   {}", show(&r.empirical_s));
    println!("classnumber S {}", show(&r.classnumber_s));
    println!("main term     {}", show(&r.main_term));
    println!("ratios {:?}", r.ratios);
    println!("checks {:?}", r.checks);
    for row in r.primes.iter().take(5) {
        println!(
            "  p = {:<12} H_p = {:?} box count = {:?}",
            row.p, row.mass, row.empirical_count
        );
    }
    Ok(())
}
