//! Coxeter groups realized on a crystallographic root lattice.

use crate::error::{Error, Result};

/// Group element as the integer matrix of its action on simple-root coordinates
/// (row-major, `n × n`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxElem(pub Vec<i64>);

/// Generators `s_0..s_{n-1}` with Coxeter matrix entries; `0` encodes `∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterPresentation {
    m: Vec<Vec<u32>>,
    /// `cartan[i][j]` = coefficient of `α_i` subtracted in `s_i(α_j)`.
    cartan: Vec<Vec<i64>>,
    gens: Vec<CoxElem>,
}

fn bond(m: u32) -> Result<(i64, i64)> {
    Ok(match m {
        2 => (0, 0),
        3 => (-1, -1),
        4 => (-1, -2),
        6 => (-1, -3),
        0 => (-2, -2),
        other => return Err(Error::Hecke(format!("Coxeter entry {other} has no crystallographic realization"))),
    })
}

impl CoxeterPresentation {
    pub fn new(m: Vec<Vec<u32>>) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(Error::Hecke("Coxeter matrix must be square".into()));
        }
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            if m[i][i] != 1 {
                return Err(Error::Hecke(format!("m(s{i}, s{i}) must be 1")));
            }
            cartan[i][i] = 2;
            for j in i + 1..n {
                if m[i][j] != m[j][i] {
                    return Err(Error::Hecke("Coxeter matrix must be symmetric".into()));
                }
                if m[i][j] == 1 {
                    return Err(Error::Hecke("distinct generators cannot have m = 1".into()));
                }
                let (a, b) = bond(m[i][j])?;
                cartan[i][j] = a;
                cartan[j][i] = b;
            }
        }
        let gens = (0..n)
            .map(|i| {
                let mut mat = vec![0i64; n * n];
                for j in 0..n {
                    // column j = s_i(α_j) = α_j − cartan[i][j] α_i
                    mat[j * n + j] += 1;
                    mat[i * n + j] -= cartan[i][j];
                }
                CoxElem(mat)
            })
            .collect();
        Ok(CoxeterPresentation { m, cartan, gens })
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.m
    }

    pub fn m(&self, i: usize, j: usize) -> u32 {
        self.m[i][j]
    }

    pub fn identity(&self) -> CoxElem {
        let n = self.rank();
        let mut v = vec![0; n * n];
        for i in 0..n {
            v[i * n + i] = 1;
        }
        CoxElem(v)
    }

    pub fn generator(&self, i: usize) -> &CoxElem {
        &self.gens[i]
    }

    pub fn mul(&self, a: &CoxElem, b: &CoxElem) -> CoxElem {
        let n = self.rank();
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a.0[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += x * b.0[k * n + j];
                }
            }
        }
        CoxElem(out)
    }

    /// `w s_i`, computed by column operations.
    pub fn mul_gen(&self, w: &CoxElem, i: usize) -> CoxElem {
        self.mul(w, &self.gens[i])
    }

    /// `s_i w`.
    pub fn gen_mul(&self, i: usize, w: &CoxElem) -> CoxElem {
        self.mul(&self.gens[i], w)
    }

    /// `ℓ(w s_i) < ℓ(w)` iff `w(α_i)` is a negative root.
    pub fn is_right_descent(&self, w: &CoxElem, i: usize) -> bool {
        let n = self.rank();
        (0..n).any(|r| w.0[r * n + i] < 0)
    }

    pub fn from_word(&self, word: &[usize]) -> CoxElem {
        word.iter().fold(self.identity(), |acc, &s| self.mul_gen(&acc, s))
    }

    /// Reduced word obtained by repeatedly removing the smallest right descent.
    pub fn normal_form(&self, w: &CoxElem) -> Vec<usize> {
        let mut cur = w.clone();
        let mut rev = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| self.is_right_descent(&cur, i)) {
            cur = self.mul_gen(&cur, i);
            rev.push(i);
        }
        rev.reverse();
        rev
    }

    pub fn length(&self, w: &CoxElem) -> usize {
        self.normal_form(w).len()
    }

    pub fn inverse(&self, w: &CoxElem) -> CoxElem {
        let word = self.normal_form(w);
        let rev: Vec<usize> = word.into_iter().rev().collect();
        self.from_word(&rev)
    }

    /// Generators conjugate in the group: connected through odd entries.
    pub fn conjugacy_classes_of_generators(&self) -> Vec<usize> {
        let n = self.rank();
        let mut class: Vec<usize> = (0..n).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for j in 0..n {
                    if i != j && self.m[i][j] != 0 && self.m[i][j] % 2 == 1 && class[i] != class[j] {
                        let c = class[i].min(class[j]);
                        class[i] = c;
                        class[j] = c;
                        changed = true;
                    }
                }
            }
        }
        class
    }

    /// Cartan integers used for the realization.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2_affine() -> CoxeterPresentation {
        CoxeterPresentation::new(vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]]).unwrap()
    }

    #[test]
    fn generators_are_involutions() {
        let c = a2_affine();
        for i in 0..3 {
            assert_eq!(c.mul_gen(c.generator(i), i), c.identity());
        }
    }

    #[test]
    fn braid_relations_hold() {
        let c = a2_affine();
        assert_eq!(c.from_word(&[0, 1, 0]), c.from_word(&[1, 0, 1]));
        let c2 = CoxeterPresentation::new(vec![vec![1, 4, 2], vec![4, 1, 4], vec![2, 4, 1]]).unwrap();
        assert_eq!(c2.from_word(&[0, 1, 0, 1]), c2.from_word(&[1, 0, 1, 0]));
        assert_eq!(c2.from_word(&[0, 2]), c2.from_word(&[2, 0]));
    }

    #[test]
    fn lengths_and_normal_forms() {
        let c = a2_affine();
        let w = c.from_word(&[0, 1, 2, 0]);
        assert_eq!(c.length(&w), 4);
        assert_eq!(c.length(&c.from_word(&[0, 1, 1, 2])), 2);
        let nf = c.normal_form(&w);
        assert_eq!(c.from_word(&nf), w);
        let inf = CoxeterPresentation::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(inf.length(&inf.from_word(&[0, 1, 0, 1, 0, 1])), 6);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(CoxeterPresentation::new(vec![vec![1, 5], vec![5, 1]]).is_err());
        assert!(CoxeterPresentation::new(vec![vec![1, 3], vec![2, 1]]).is_err());
    }
}
