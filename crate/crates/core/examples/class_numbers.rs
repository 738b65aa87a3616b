//! L-functions, class numbers and the mass H_p.

use frobtrace::quadratic::ClassNumbers;
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    let engine = ClassNumbers::new(&fq);
    for d in ["T", "T^3+T+1", "2*T^2", "T^5+2*T+1", "2*T^4+T+1", "T^3+T^2"] {
        let d = Poly::parse(d, &fq)?;
        let l = engine.l_function(&d)?;
        println!(
            "d = {:<12} L numerator {:?}{}  L(1) = {}  h = {}",
            d.to_text(&fq),
            l.numerator,
            if l.constant_field { " / (1 + qX)" } else { "" },
            l.at_one(3),
            engine.class_number(&d)?
        );
    }
    let p = Poly::parse("T^3+2*T+1", &fq)?;
    for a in ["0", "1", "2"] {
        for u in ["1", "2"] {
            let h = engine.hurwitz_mass(&Poly::parse(a, &fq)?, fq.parse(u)?, &p)?;
            println!("H_p(a = {a}, u = {u}) = {h}");
        }
    }
    Ok(())
}
