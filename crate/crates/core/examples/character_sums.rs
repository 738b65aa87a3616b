//! Dirichlet characters mod p in exact cyclotomic arithmetic.

use std::collections::BTreeMap;

use frobtrace::quadratic::dirichlet::{char_sum_bound, orthogonality_check, DirichletCharModP};
use frobtrace::residue::ResidueField;
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    let field = ResidueField::new(&fq, &Poly::parse("T^2+T+2", &fq)?)?;
    for chi in DirichletCharModP::all(&field)?.into_iter().skip(1).take(4) {
        let b = char_sum_bound(&chi, 0, 2)?;
        println!(
            "χ_{}: Σ χ(f) over deg ≤ 2 = {:?}, |S|² = {:.3} ≤ {}: {}",
            chi.exponent(),
            b.sum.canonical(),
            b.modulus_squared,
            b.bound,
            b.holds
        );
    }
    let coefficients: BTreeMap<Poly, i64> = [("1", 3), ("T", -1), ("T+2", 4), ("T^3+1", 2)]
        .iter()
        .map(|(n, c)| (Poly::parse(n, &fq).unwrap(), *c))
        .collect();
    let r = orthogonality_check(&field, &coefficients)?;
    println!("orthogonality: {} = {}", r.lhs, r.rhs);
    Ok(())
}
