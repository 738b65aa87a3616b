//! Factorization in F_q[T], prime counts and primes in progressions.

use frobtrace::factor::{count_primes_in_ap, enumerate_primes, euler_phi, factor, necklace_count};
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    let f = Poly::parse("2*T^5+T^4+T^2+2", &fq)?;
    let fac = factor(&f, &fq)?;
    let parts: Vec<String> = fac
        .factors
        .iter()
        .map(|(p, e)| format!("({})^{e}", p.to_text(&fq)))
        .collect();
    println!(
        "{} = {} * {}",
        f.to_text(&fq),
        fq.format(fac.unit),
        parts.join(" ")
    );
    println!("phi = {}", euler_phi(&f, &fq)?);

    for x in 1..=6 {
        println!(
            "deg {x}: {} primes (necklace count {})",
            enumerate_primes(&fq, x).len(),
            necklace_count(3, x)
        );
    }
    let m = Poly::parse("T^2+1", &fq)?;
    for a in ["1", "T", "T+1"] {
        let a = Poly::parse(a, &fq)?;
        println!(
            "primes of degree 6 = {} mod {}: {}",
            a.to_text(&fq),
            m.to_text(&fq),
            count_primes_in_ap(&fq, 6, &m, &a)?
        );
    }
    Ok(())
}
