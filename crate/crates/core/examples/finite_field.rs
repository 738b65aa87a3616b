//! Arithmetic in F_q and in a residue field A/p.

use frobtrace::residue::ResidueField;
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(9)?;
    let g = fq.generator();
    println!(
        "F_9 has characteristic {} and generator {}",
        fq.characteristic(),
        fq.format(g)
    );
    println!(
        "g^4 = {}, 1/g = {}",
        fq.format(fq.pow(g, 4)),
        fq.format(fq.inv(g).expect("unit"))
    );
    println!("g is a square: {}", fq.is_square(g));

    let f3 = Fq::new(3)?;
    let p = Poly::parse("T^3+2*T+1", &f3)?;
    let field = ResidueField::new(&f3, &p)?;
    let t = field.reduce(&Poly::t());
    println!("|A/p| = {}, T has discrete log {:?}", field.size(), t.log());
    println!(
        "T^13 = {}, Frobenius of T = {}",
        field.format(field.pow(t, 13)),
        field.format(field.frobenius(t, 1))
    );
    Ok(())
}
