//! Cross-module identities outside the acceptance ranges.

use num_bigint::BigUint;

use frobtrace::drinfeld::{classes_by_charpoly, CharPolyFrob};
use frobtrace::experiment::{classnumber_s, empirical_s, BoxSpec};
use frobtrace::factor::enumerate_primes;
use frobtrace::quadratic::classnum::check_trace;
use frobtrace::quadratic::ClassNumbers;
use frobtrace::residue::ResidueField;
use frobtrace::{Fq, Poly};

fn mass_matches_class_count(q: u64, x: usize) {
    let fq = Fq::new(q).unwrap();
    let engine = ClassNumbers::new(&fq);
    for p in enumerate_primes(&fq, x) {
        let field = ResidueField::new(&fq, &p).unwrap();
        let counts = classes_by_charpoly(&field).unwrap();
        for a in Poly::all_below_degree(&fq, x.div_ceil(2)) {
            for u in fq.units().filter(|&u| check_trace(&a, u, x, &fq).is_ok()) {
                let n = counts
                    .get(&CharPolyFrob { a: a.clone(), u })
                    .copied()
                    .unwrap_or(0);
                assert_eq!(
                    BigUint::from(n),
                    engine.hurwitz_mass(&a, u, &p).unwrap(),
                    "q={q} p={} a={} u={}",
                    p.to_text(&fq),
                    a.to_text(&fq),
                    fq.format(u)
                );
            }
        }
    }
}

#[test]
fn mass_formula_degree_three() {
    mass_matches_class_count(3, 3);
}

#[test]
fn mass_formula_extension_field() {
    mass_matches_class_count(9, 1);
    mass_matches_class_count(9, 2);
}

#[test]
fn mass_formula_q7() {
    mass_matches_class_count(7, 2);
}

#[test]
fn empirical_equals_classnumber_route_at_full_odd_box() {
    for (q, x) in [(5u64, 1usize), (3, 3), (9, 1)] {
        let fq = Fq::new(q).unwrap();
        let engine = ClassNumbers::new(&fq);
        for a in Poly::all_below_degree(&fq, x.div_ceil(2)) {
            for u in fq.units() {
                let e = empirical_s(x, &BoxSpec::full(x), &a, u, &fq).unwrap();
                let c = classnumber_s(x, &a, u, &engine).unwrap().s;
                assert_eq!(e, c, "q={q} x={x} a={} u={}", a.to_text(&fq), fq.format(u));
            }
        }
    }
}
