//! Isomorphism classes over A/p grouped by charpoly, against the class-number mass H_p.

use frobtrace::drinfeld::{classes_by_charpoly, iso_classes};
use frobtrace::quadratic::ClassNumbers;
use frobtrace::residue::ResidueField;
use frobtrace::{Fq, Poly, Result};

fn main() -> Result<()> {
    let fq = Fq::new(3)?;
    let p = Poly::parse("T^2+1", &fq)?;
    let field = ResidueField::new(&fq, &p)?;
    let classes = iso_classes(&field)?;
    let pairs: u64 = classes.iter().map(|c| c.size).sum();
    println!("{} classes covering {pairs} pairs (γ, δ)", classes.len());

    let engine = ClassNumbers::new(&fq);
    let mut rows: Vec<_> = classes_by_charpoly(&field)?.into_iter().collect();
    rows.sort_by_key(|(cp, _)| (cp.a.index(&fq), cp.u.encoding()));
    let mut outside = 0;
    for (cp, n) in rows {
        match engine.hurwitz_mass(&cp.a, cp.u, &p) {
            Ok(h) => println!("{}: {n} classes, H_p = {h}", cp.display(&fq)),
            Err(_) => outside += n,
        }
    }
    println!("{outside} classes have deg a = deg p / 2, outside the mass formula");
    Ok(())
}
