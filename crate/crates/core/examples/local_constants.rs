//! The local sums c(a; v, r), their closed form, and κ(v).

use frobtrace::constants::{c_avr, c_infinity, kappa, CMode, Parity};
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    let a = Poly::parse("T+1", &fq)?;
    for (v, r) in [
        ("T", "1"),
        ("T^2", "1"),
        ("T^2", "T"),
        ("T^2+2*T", "1"),
        ("T^3+2*T+1", "T"),
        ("T^2+2*T+1", "1"),
    ] {
        let (v, r) = (Poly::parse(v, &fq)?, Poly::parse(r, &fq)?);
        let closed = c_avr(&a, &v, &r, CMode::Closed, &fq)?;
        let brute = c_avr(&a, &v, &r, CMode::Brute, &fq)?;
        println!(
            "v = {:<12} r = {:<3} c = {closed:>4} (brute {brute:>4})  |v|/κ(v) = {}/{}",
            v.to_text(&fq),
            r.to_text(&fq),
            v.norm(&fq),
            kappa(&v, &fq)?
        );
    }
    for parity in [Parity::Even, Parity::Odd] {
        let c = c_infinity(3, parity);
        println!(
            "C_∞ for {parity:?} x: {} · 3^({}/2)",
            c.rational, c.half_power
        );
    }
    Ok(())
}
