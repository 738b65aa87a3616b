//! Rank-2 Drinfeld modules over F_p and their Frobenius characteristic polynomials.

use std::fmt;

use crate::drinfeld::twisted::TwistedPoly;
use crate::error::{Error, Result};
use crate::fq::{Fq, Scalar};
use crate::poly::Poly;
use crate::residue::{ResidueElem, ResidueField};

/// φ with φ_T = T̂ + γτ + δτ², δ ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDrinfeldModule {
    field: ResidueField,
    gamma: ResidueElem,
    delta: ResidueElem,
}

/// The pair (a, u) of the Frobenius characteristic polynomial X² − aX + up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPolyFrob {
    pub a: Poly,
    pub u: Scalar,
}

impl CharPolyFrob {
    pub fn display(&self, fq: &Fq) -> CharPolyDisplay<'_> {
        CharPolyDisplay {
            cp: self,
            fq: fq.clone(),
        }
    }
}

pub struct CharPolyDisplay<'a> {
    cp: &'a CharPolyFrob,
    fq: Fq,
}

impl fmt::Display for CharPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a = {}, u = {})",
            self.cp.a.to_text(&self.fq),
            self.fq.format(self.cp.u)
        )
    }
}

impl FiniteDrinfeldModule {
    pub fn new(field: &ResidueField, gamma: ResidueElem, delta: ResidueElem) -> Result<Self> {
        if delta.is_zero() {
            return Err(Error::ZeroInput("delta"));
        }
        Ok(FiniteDrinfeldModule {
            field: field.clone(),
            gamma,
            delta,
        })
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn gamma(&self) -> ResidueElem {
        self.gamma
    }

    pub fn delta(&self) -> ResidueElem {
        self.delta
    }

    pub fn phi_t(&self) -> TwistedPoly {
        let t = self.field.reduce(&Poly::t());
        TwistedPoly::new(&self.field, vec![t, self.gamma, self.delta])
    }

    /// φ_n by Horner evaluation in F_p{τ}.
    pub fn phi_image(&self, n: &Poly) -> TwistedPoly {
        let phi_t = self.phi_t();
        let f = &self.field;
        n.coeffs()
            .iter()
            .rev()
            .fold(TwistedPoly::zero(f), |acc, &c| {
                acc.tw_mul(&phi_t)
                    .expect("same field")
                    .add(&TwistedPoly::scalar(f, f.from_scalar(c)))
                    .expect("same field")
            })
    }

    /// Solves φ_a τ^x − u φ_p = τ^{2x} for deg a ≤ ⌊x/2⌋ and u ∈ F_q as a linear
    /// system over F_q in the coordinates of F_p.
    pub fn frobenius_charpoly(&self) -> Result<CharPolyFrob> {
        let f = &self.field;
        let fq = f.fq();
        let x = f.degree();
        let m = x / 2;
        let p = f.modulus();

        let phi_t = self.phi_t();
        let mut powers = vec![TwistedPoly::one(f)];
        for i in 0..x {
            let next = phi_t.tw_mul(&powers[i])?;
            powers.push(next);
        }
        let phi_p = p
            .coeffs()
            .iter()
            .enumerate()
            .try_fold(TwistedPoly::zero(f), |acc, (i, &c)| {
                acc.add(&powers[i].scale_left(f.from_scalar(c)))
            })?;

        // columns: a_0..a_m, u, rhs
        let unknowns = m + 2;
        let columns: Vec<TwistedPoly> = (0..=m)
            .map(|i| powers[i].shift(x))
            .chain(std::iter::once(phi_p.neg()))
            .collect();
        let rhs = TwistedPoly::monomial(f, ResidueElem::ONE, 2 * x);
        let mut rows = Vec::with_capacity((2 * x + 1) * x);
        let coords: Vec<Vec<Vec<Scalar>>> = columns
            .iter()
            .chain(std::iter::once(&rhs))
            .map(|c| (0..=2 * x).map(|k| f.coords(c.coeff(k))).collect())
            .collect();
        for k in 0..=2 * x {
            for j in 0..x {
                rows.push(
                    (0..=unknowns)
                        .map(|col| coords[col][k][j])
                        .collect::<Vec<_>>(),
                );
            }
        }
        let sol = solve_unique(fq, rows, unknowns)?;
        let a = Poly::from_coeffs(sol[..=m].to_vec());
        let u = sol[m + 1];
        if u.is_zero() {
            return Err(Error::Inconsistent("Frobenius solve returned u = 0".into()));
        }
        Ok(CharPolyFrob { a, u })
    }

    /// Recomputes τ^{2x} − φ_a τ^x + u φ_p with twisted arithmetic and checks it vanishes.
    pub fn satisfies_frobenius_identity(&self, cp: &CharPolyFrob) -> bool {
        let f = &self.field;
        let x = f.degree() as u64;
        let tau_x = TwistedPoly::tau(f).pow(x);
        let tau_2x = tau_x.tw_mul(&tau_x).expect("same field");
        let phi_a = self.phi_image(&cp.a);
        let phi_p = self.phi_image(f.modulus());
        let lhs = tau_2x
            .sub(&phi_a.tw_mul(&tau_x).expect("same field"))
            .and_then(|s| s.add(&phi_p.scale_left(f.from_scalar(cp.u))))
            .expect("same field");
        lhs.is_zero()
    }

    /// Searches all (a, u) with deg a ≤ ⌊x/2⌋ and u ≠ 0; errors unless exactly one passes.
    pub fn frobenius_charpoly_exhaustive(&self) -> Result<CharPolyFrob> {
        let f = &self.field;
        let fq = f.fq();
        let m = f.degree() / 2;
        let mut found = None;
        for a in Poly::all_below_degree(fq, m + 1) {
            for u in fq.units() {
                let cp = CharPolyFrob { a: a.clone(), u };
                if self.satisfies_frobenius_identity(&cp) {
                    if found.is_some() {
                        return Err(Error::Inconsistent(
                            "Frobenius identity has two solutions".into(),
                        ));
                    }
                    found = Some(cp);
                }
            }
        }
        found.ok_or_else(|| Error::Inconsistent("Frobenius identity has no solution".into()))
    }
}

/// Gaussian elimination over F_q on an augmented matrix with `n` unknowns.
/// Requires full column rank and a consistent right-hand side.
pub(crate) fn solve_unique(fq: &Fq, mut rows: Vec<Vec<Scalar>>, n: usize) -> Result<Vec<Scalar>> {
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(Error::Inconsistent(format!(
                "singular system at column {col}"
            )));
        };
        rows.swap(pivot_row, r);
        let inv = fq.inv(rows[pivot_row][col]).expect("nonzero pivot");
        let pivot: Vec<Scalar> = rows[pivot_row].iter().map(|&c| fq.mul(c, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (c, &p) in row.iter_mut().zip(&pivot) {
                *c = fq.sub(*c, fq.mul(factor, p));
            }
        }
        rows[pivot_row] = pivot;
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return Err(Error::Inconsistent("inconsistent system".into()));
    }
    Ok((0..n).map(|i| rows[i][n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::enumerate_primes;

    fn field(q: u64, p: &str) -> ResidueField {
        let fq = Fq::new(q).unwrap();
        ResidueField::new(&fq, &Poly::parse(p, &fq).unwrap()).unwrap()
    }

    fn module(f: &ResidueField, g: &str, d: &str) -> FiniteDrinfeldModule {
        FiniteDrinfeldModule::new(f, f.parse(g).unwrap(), f.parse(d).unwrap()).unwrap()
    }

    #[test]
    fn rank_two_required() {
        let f = field(3, "T");
        assert_eq!(
            FiniteDrinfeldModule::new(&f, ResidueElem::ONE, ResidueElem::ZERO),
            Err(Error::ZeroInput("delta"))
        );
    }

    #[test]
    fn phi_image_basics() {
        let f = field(3, "T^2+1");
        let m = module(&f, "T", "1");
        let fq = f.fq().clone();
        assert_eq!(
            m.phi_image(&Poly::constant(fq.from_int(2))),
            TwistedPoly::scalar(&f, f.parse("2").unwrap())
        );
        assert_eq!(m.phi_image(&Poly::t()), m.phi_t());
        let t2 = m.phi_image(&Poly::parse("T^2", &fq).unwrap());
        assert_eq!(t2, m.phi_t().tw_mul(&m.phi_t()).unwrap());
        assert_eq!(t2.deg(), Some(4));
    }

    #[test]
    fn charpoly_over_degree_one() {
        let f = field(3, "T");
        let fq = f.fq().clone();
        let cp = module(&f, "0", "1").frobenius_charpoly().unwrap();
        assert_eq!(
            cp,
            CharPolyFrob {
                a: Poly::zero(),
                u: fq.from_int(2)
            }
        );
        let cp = module(&f, "1", "1").frobenius_charpoly().unwrap();
        assert_eq!(
            cp,
            CharPolyFrob {
                a: Poly::constant(fq.from_int(2)),
                u: fq.from_int(2)
            }
        );
    }

    #[test]
    fn solver_matches_exhaustive_search() {
        for (q, x) in [(3, 1), (3, 2), (5, 1), (5, 2)] {
            let fq = Fq::new(q).unwrap();
            for p in enumerate_primes(&fq, x) {
                let f = ResidueField::new(&fq, &p).unwrap();
                for g in f.elements() {
                    for d in f.units() {
                        let m = FiniteDrinfeldModule::new(&f, g, d).unwrap();
                        let cp = m.frobenius_charpoly().unwrap();
                        assert!(m.satisfies_frobenius_identity(&cp));
                        assert!(2 * cp.a.deg_i64() <= x as i64);
                        if q == 3 {
                            assert_eq!(m.frobenius_charpoly_exhaustive().unwrap(), cp);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gaussian_elimination_flags_singular() {
        let fq = Fq::new(3).unwrap();
        let z = Scalar::ZERO;
        let o = Scalar::ONE;
        assert!(solve_unique(&fq, vec![vec![o, o, o], vec![o, o, z]], 2).is_err());
        assert_eq!(
            solve_unique(&fq, vec![vec![o, z, o], vec![z, o, z]], 2).unwrap(),
            vec![o, z]
        );
    }
}
