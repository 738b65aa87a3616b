//! C(a) by the Euler product and by the double sum, each with a tail bound.

use frobtrace::constants::{constant_c_doublesum, constant_c_euler};
use frobtrace::rational::{decimal, to_f64};
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    for a in ["0", "1", "T", "T^2+1"] {
        let a = Poly::parse(a, &fq)?;
        let e = constant_c_euler(&a, 10, &fq)?;
        let d = constant_c_doublesum(&a, 4, 6, &fq)?;
        println!(
            "a = {:<6} euler {} ± {:.1e}   doublesum {} ± {:.1e}   agree: {}",
            a.to_text(&fq),
            decimal(&e.value, 10),
            to_f64(&e.tail_bound),
            decimal(&d.value, 10),
            to_f64(&d.tail_bound),
            e.agrees_with(&d)
        );
    }
    Ok(())
}
