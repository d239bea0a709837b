//! `C[Ω, μ] ⋉ H(W_aff, q)` with basis `T_ω T_w`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{CoxElem, CoxeterPresentation, LaurentPoly};
use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// A finite group acting on the generators by permutations, with a
/// 2-cocycle `μ` (rational values).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaGroup {
    /// `perms[k][i]` = image of generator `i` under element `k`; element 0 is the identity.
    pub perms: Vec<Vec<usize>>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    pub mu: Vec<Vec<Q>>,
}

impl OmegaGroup {
    pub fn trivial(rank: usize) -> Self {
        OmegaGroup { perms: vec![(0..rank).collect()], table: vec![vec![0]], inverse: vec![0], mu: vec![vec![q(1)]] }
    }

    /// Builds the group from its elements as permutations; `mu` defaults to trivial.
    pub fn new(cox: &CoxeterPresentation, perms: Vec<Vec<usize>>, mu: Option<Vec<Vec<Q>>>) -> Result<Self> {
        let n = cox.rank();
        let id: Vec<usize> = (0..n).collect();
        if perms.first() != Some(&id) {
            return Err(Error::Hecke("first Ω element must be the identity".into()));
        }
        for p in &perms {
            let mut sorted = p.clone();
            sorted.sort();
            if sorted != id {
                return Err(Error::Hecke("Ω elements must permute the generators".into()));
            }
            for i in 0..n {
                for j in 0..n {
                    if cox.m(p[i], p[j]) != cox.m(i, j) {
                        return Err(Error::Hecke("Ω element does not preserve the Coxeter matrix".into()));
                    }
                }
            }
        }
        if (1..perms.len()).any(|a| perms[..a].contains(&perms[a])) {
            return Err(Error::Hecke("Ω elements must be distinct permutations".into()));
        }
        let find = |p: &Vec<usize>| perms.iter().position(|x| x == p);
        let k = perms.len();
        let mut table = vec![vec![0; k]; k];
        let mut inverse = vec![0; k];
        for a in 0..k {
            for b in 0..k {
                // (a b)(i) = a(b(i))
                let comp: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
                table[a][b] = find(&comp).ok_or_else(|| Error::Hecke("Ω is not closed".into()))?;
                if table[a][b] == 0 {
                    inverse[a] = b;
                }
            }
        }
        let mu = mu.unwrap_or_else(|| vec![vec![q(1); k]; k]);
        if mu.len() != k || mu.iter().any(|r| r.len() != k || r.iter().any(|x| x.is_zero())) {
            return Err(Error::Hecke("μ must be a nonvanishing k×k table".into()));
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let lhs = mu[a][b] * mu[table[a][b]][c];
                    let rhs = mu[b][c] * mu[a][table[b][c]];
                    if lhs != rhs {
                        return Err(Error::Hecke("μ fails the cocycle identity".into()));
                    }
                }
            }
        }
        Ok(OmegaGroup { perms, table, inverse, mu })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// `s ↦ q_s`, constant on conjugacy classes of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterFunction {
    pub values: Vec<LaurentPoly>,
}

impl ParameterFunction {
    /// Equal parameters `q^1` on every generator.
    pub fn equal(rank: usize) -> Self {
        ParameterFunction { values: vec![LaurentPoly::q_pow(q(1)); rank] }
    }

    /// `q_s = q^{m_s}`.
    pub fn from_exponents(exps: &[Q]) -> Self {
        ParameterFunction { values: exps.iter().map(|&e| LaurentPoly::q_pow(e)).collect() }
    }

    pub fn validate(&self, cox: &CoxeterPresentation, omega: &OmegaGroup) -> Result<()> {
        if self.values.len() != cox.rank() {
            return Err(Error::Hecke("one parameter per generator is required".into()));
        }
        let class = cox.conjugacy_classes_of_generators();
        for i in 0..cox.rank() {
            for j in 0..cox.rank() {
                if class[i] == class[j] && self.values[i] != self.values[j] {
                    return Err(Error::Hecke(format!("conjugate generators s{i}, s{j} have different parameters")));
                }
            }
            for p in &omega.perms {
                if self.values[p[i]] != self.values[i] {
                    return Err(Error::Hecke(format!("Ω moves s{i} to s{} with a different parameter", p[i])));
                }
            }
        }
        Ok(())
    }
}

/// Basis key `(ω, w)` for `T_ω T_w`.
pub type BasisKey = (usize, CoxElem);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeckeElement {
    pub terms: BTreeMap<BasisKey, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        HeckeElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: BasisKey, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&key) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), &(x * c));
        }
        out
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.has_integer_coefficients())
    }
}

#[derive(Debug, Clone)]
pub struct HeckeAlgebra {
    pub cox: CoxeterPresentation,
    pub omega: OmegaGroup,
    pub params: ParameterFunction,
}

impl HeckeAlgebra {
    pub fn new(cox: CoxeterPresentation, omega: OmegaGroup, params: ParameterFunction) -> Result<Self> {
        params.validate(&cox, &omega)?;
        Ok(HeckeAlgebra { cox, omega, params })
    }

    pub fn unit(&self) -> HeckeElement {
        self.basis(0, &[])
    }

    /// `T_ω T_w` for the group element of `word`.
    pub fn basis(&self, omega: usize, word: &[usize]) -> HeckeElement {
        let mut e = HeckeElement::zero();
        e.add_term((omega, self.cox.from_word(word)), &LaurentPoly::one());
        e
    }

    pub fn generator(&self, s: usize) -> HeckeElement {
        self.basis(0, &[s])
    }

    /// `ω(w)`: letters of a reduced word permuted.
    fn act(&self, omega: usize, w: &CoxElem) -> CoxElem {
        if omega == 0 {
            return w.clone();
        }
        let p = &self.omega.perms[omega];
        let word: Vec<usize> = self.cox.normal_form(w).into_iter().map(|s| p[s]).collect();
        self.cox.from_word(&word)
    }

    /// `T_x · T_w` in the Iwahori–Hecke part, with `x` fixed and `w` given by a reduced word.
    fn mul_coxeter(&self, x: &CoxElem, w_word: &[usize]) -> BTreeMap<CoxElem, LaurentPoly> {
        let mut cur: BTreeMap<CoxElem, LaurentPoly> = BTreeMap::new();
        cur.insert(x.clone(), LaurentPoly::one());
        for &s in w_word {
            let qs = &self.params.values[s];
            let qs_minus_1 = qs - &LaurentPoly::one();
            let mut next: BTreeMap<CoxElem, LaurentPoly> = BTreeMap::new();
            let mut push = |k: CoxElem, c: LaurentPoly| {
                if c.is_zero() {
                    return;
                }
                let v = match next.remove(&k) {
                    Some(old) => &old + &c,
                    None => c,
                };
                if !v.is_zero() {
                    next.insert(k, v);
                }
            };
            for (y, c) in cur {
                let ys = self.cox.mul_gen(&y, s);
                if self.cox.is_right_descent(&y, s) {
                    push(y, &c * &qs_minus_1);
                    push(ys, &c * qs);
                } else {
                    push(ys, c);
                }
            }
            cur = next;
        }
        cur
    }

    pub fn multiply(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for ((o1, w1), c1) in &a.terms {
            for ((o2, w2), c2) in &b.terms {
                // T_{ω1} T_{w1} T_{ω2} T_{w2} = μ(ω1,ω2) T_{ω1ω2} T_{ω2^{-1}(w1)} T_{w2}
                let o = self.omega.mul(*o1, *o2);
                let mu = self.omega.mu[*o1][*o2];
                let moved = self.act(self.omega.inv(*o2), w1);
                let coeff = (c1 * c2).scale(mu);
                let word = self.cox.normal_form(w2);
                for (w, c) in self.mul_coxeter(&moved, &word) {
                    out.add_term((o, w), &(&c * &coeff));
                }
            }
        }
        out
    }

    /// `T_ω T_w ↦ T_{ω^{-1}} T_{ω(w^{-1})}`, the basis map of `x ↦ x^{-1}`.
    pub fn anti_involution(&self, a: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for ((o, w), c) in &a.terms {
            let winv = self.cox.inverse(w);
            out.add_term((self.omega.inv(*o), self.act(*o, &winv)), c);
        }
        out
    }

    /// Coefficients at `q = value`.
    pub fn specialize(&self, a: &HeckeElement, value: Q) -> Result<BTreeMap<BasisKey, Q>> {
        let mut out = BTreeMap::new();
        for (k, c) in &a.terms {
            let v = c.specialize(value)?;
            if !v.is_zero() {
                out.insert(k.clone(), v);
            }
        }
        Ok(out)
    }

    /// Structure constants of the twisted group algebra of `Ω ⋉ W`:
    /// `(ω1, w1)(ω2, w2) = μ(ω1, ω2) (ω1ω2, ω2^{-1}(w1) w2)`.
    pub fn group_product(&self, k1: &BasisKey, k2: &BasisKey) -> (BasisKey, Q) {
        let o = self.omega.mul(k1.0, k2.0);
        let moved = self.act(self.omega.inv(k2.0), &k1.1);
        ((o, self.cox.mul(&moved, &k2.1)), self.omega.mu[k1.0][k2.0])
    }

    /// Word form of a key for display.
    pub fn describe_key(&self, k: &BasisKey) -> String {
        let word = self.cox.normal_form(&k.1);
        let w = if word.is_empty() {
            "e".to_string()
        } else {
            word.iter().map(|s| format!("s{s}")).collect::<Vec<_>>().join(" ")
        };
        if k.0 == 0 {
            format!("T[{w}]")
        } else {
            format!("T[w{}]T[{w}]", k.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn affine_a1() -> HeckeAlgebra {
        let cox = CoxeterPresentation::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let omega = OmegaGroup::trivial(2);
        HeckeAlgebra::new(cox, omega, ParameterFunction::equal(2)).unwrap()
    }

    #[test]
    fn quadratic_relation() {
        let h = affine_a1();
        let t0 = h.generator(0);
        let sq = h.multiply(&t0, &t0);
        let qq = LaurentPoly::q_pow(q(1));
        let expected = t0.scale(&(&qq - &LaurentPoly::one())).add(&h.unit().scale(&qq));
        assert_eq!(sq, expected);
        let at4 = h.specialize(&sq, q(4)).unwrap();
        assert_eq!(at4.get(&(0, h.cox.from_word(&[0]))), Some(&q(3)));
        assert_eq!(at4.get(&(0, h.cox.identity())), Some(&q(4)));
        let at1 = h.specialize(&sq, q(1)).unwrap();
        assert_eq!(at1.len(), 1);
    }

    #[test]
    fn lengths_add_and_unit() {
        let h = affine_a1();
        assert_eq!(h.multiply(&h.generator(0), &h.generator(1)), h.basis(0, &[0, 1]));
        let x = h.generator(0).add(&h.unit());
        assert_eq!(h.multiply(&x, &h.unit()), x);
        assert_eq!(h.anti_involution(&h.basis(0, &[0, 1])), h.basis(0, &[1, 0]));
    }

    #[test]
    fn omega_swap_on_affine_a1() {
        let cox = CoxeterPresentation::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let omega = OmegaGroup::new(&cox, vec![vec![0, 1], vec![1, 0]], None).unwrap();
        let h = HeckeAlgebra::new(cox, omega, ParameterFunction::equal(2)).unwrap();
        let w = h.basis(1, &[]);
        // T_ω T_{s0} = T_{s1} T_ω
        let lhs = h.multiply(&w, &h.generator(0));
        let rhs = h.multiply(&h.generator(1), &w);
        assert_eq!(lhs, rhs);
        assert_eq!(h.multiply(&w, &w), h.unit());
    }

    #[test]
    fn parameter_symmetry_enforced() {
        let cox = CoxeterPresentation::new(vec![vec![1, 3], vec![3, 1]]).unwrap();
        let bad = ParameterFunction::from_exponents(&[q(1), qr(1, 2)]);
        assert!(HeckeAlgebra::new(cox.clone(), OmegaGroup::trivial(2), bad).is_err());
        let inf = CoxeterPresentation::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let unequal = ParameterFunction::from_exponents(&[q(1), q(3)]);
        assert!(HeckeAlgebra::new(inf.clone(), OmegaGroup::trivial(2), unequal.clone()).is_ok());
        let swap = OmegaGroup::new(&inf, vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert!(HeckeAlgebra::new(inf, swap, unequal).is_err());
    }
}
