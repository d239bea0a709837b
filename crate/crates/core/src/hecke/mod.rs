//! Affine Hecke algebras with parameters, extended by a twisted group algebra.

mod algebra;
mod arrangement;
mod coxeter;

pub use algebra::{HeckeAlgebra, HeckeElement, OmegaGroup, ParameterFunction};
pub use arrangement::{chamber_walls, coxeter_type, from_arrangement, ArrangementAlgebra};
pub use coxeter::{CoxElem, CoxeterPresentation};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, rational_pow, Q};

/// Finite sum `Σ c_e q^e` with rational exponents and coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Q, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        LaurentPoly::monomial(c, Q::zero())
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Q::one())
    }

    /// `c · q^e`.
    pub fn monomial(c: Q, e: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    /// `q^e`.
    pub fn q_pow(e: Q) -> Self {
        LaurentPoly::monomial(Q::one(), e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, &Q)> {
        self.terms.iter()
    }

    /// The exponent if `self` is a single monomial with coefficient 1.
    pub fn as_power(&self) -> Option<Q> {
        match self.terms.iter().next() {
            Some((e, c)) if self.terms.len() == 1 && c.is_one() => Some(*e),
            _ => None,
        }
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn add_term(&mut self, e: Q, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: Q) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (*e, *x * c)).collect() }
    }

    /// Value at `q = value`; fails if some `value^e` is irrational.
    pub fn specialize(&self, value: Q) -> Result<Q> {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let p = rational_pow(value, *e)
                .ok_or_else(|| Error::Hecke(format!("{}^{} is not rational", fmt_q(&value), fmt_q(e))))?;
            acc += *c * p;
        }
        Ok(acc)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, *c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-Q::one())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(*e1 + *e2, *c1 * *c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                if e.is_zero() {
                    fmt_q(c)
                } else {
                    let base = if *e == q(1) { "q".to_string() } else { format!("q^{}", fmt_q(e)) };
                    if c.is_one() {
                        base
                    } else {
                        format!("{}*{}", fmt_q(c), base)
                    }
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn arithmetic_and_specialization() {
        let qq = LaurentPoly::q_pow(q(1));
        let qm1 = &qq - &LaurentPoly::one();
        let prod = &qm1 * &qm1;
        assert_eq!(prod.specialize(q(4)).unwrap(), q(9));
        assert!((&qm1 - &qm1).is_zero());
        let half = LaurentPoly::q_pow(qr(1, 2));
        assert_eq!(half.specialize(q(9)).unwrap(), q(3));
        assert!(half.specialize(q(2)).is_err());
        assert_eq!(format!("{}", qm1), "q + -1");
        assert_eq!(LaurentPoly::q_pow(q(-1)).specialize(q(2)).unwrap(), qr(1, 2));
    }
}
