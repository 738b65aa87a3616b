//! Frobenius characteristic polynomial of φ_T = T + γτ + δτ² over A/p.

use frobtrace::drinfeld::FiniteDrinfeldModule;
use frobtrace::residue::ResidueField;
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    let field = ResidueField::new(&fq, &Poly::parse("T^3+2*T+1", &fq)?)?;
    for (g, d) in [("0", "1"), ("1", "T"), ("T^2", "T+2"), ("2*T+1", "2")] {
        let m = FiniteDrinfeldModule::new(&field, field.parse(g)?, field.parse(d)?)?;
        let cp = m.frobenius_charpoly()?;
        println!(
            "γ = {g:>6}, δ = {d:>4}: {}  identity holds: {}  exhaustive agrees: {}",
            cp.display(&fq),
            m.satisfies_frobenius_identity(&cp),
            m.frobenius_charpoly_exhaustive()? == cp
        );
    }
    Ok(())
}
