//! The skew ring F_p{τ}: τα = α^q τ.

use frobtrace::drinfeld::TwistedPoly;
use frobtrace::residue::ResidueField;
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    let field = ResidueField::new(&fq, &Poly::parse("T^2+1", &fq)?)?;
    let t = field.reduce(&Poly::t());
    let tau = TwistedPoly::tau(&field);
    let alpha = TwistedPoly::scalar(&field, t);
    println!("τ·T = {}", tau.tw_mul(&alpha)?.format());
    println!("T·τ = {}", alpha.tw_mul(&tau)?.format());
    let f = TwistedPoly::new(&field, vec![t, field.one(), t]);
    println!("f = {}, f² = {}", f.format(), f.tw_mul(&f)?.format());
    println!(
        "τ^2 commutes with F_9: {}",
        tau.pow(2).tw_mul(&alpha)? == alpha.tw_mul(&tau.pow(2))?
    );
    Ok(())
}
