//! Integer lattices: Hermite normal form and saturation of `Z^n` by rational vectors.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::{inverse, q, transpose, QMat, QVec, Q};

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns the nonzero rows of the echelon basis: pivots are positive and
/// entries above each pivot are reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let f = Integer::div_floor(&m[i][c], &m[r][c]);
                    for j in 0..cols {
                        m[i][j] -= f * m[r][j];
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let f = Integer::div_floor(&m[i][c], &m[r][c]);
            if f != 0 {
                for j in 0..cols {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|&x| x != 0));
    m
}

/// A full-rank lattice `L ⊆ Q^n`, stored by a basis (the rows of `basis`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalLattice {
    pub basis: Vec<QVec>,
}

impl RationalLattice {
    pub fn standard(n: usize) -> Self {
        RationalLattice { basis: (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect() }
    }

    /// The lattice generated by `Z^n` together with `extra`.
    pub fn saturate(n: usize, extra: &[QVec]) -> Self {
        let den = extra.iter().flatten().fold(1i64, |acc, x| acc.lcm(x.denom()));
        let mut gens: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { den } else { 0 }).collect()).collect();
        for v in extra {
            gens.push(v.iter().map(|x| (x * q(den)).to_integer()).collect());
        }
        let h = hermite_rows(&gens);
        RationalLattice { basis: h.into_iter().map(|r| r.into_iter().map(|x| Q::new(x, den)).collect()).collect() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis as columns of a matrix `B`, so that `B c` is the vector with coordinates `c`.
    pub fn column_matrix(&self) -> QMat {
        transpose(&self.basis)
    }

    /// Coordinates of `v` in this basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<i64>> {
        let inv = inverse(&self.column_matrix())?;
        let c: QVec = inv.iter().map(|row| crate::rational::dot(row, v)).collect();
        crate::rational::qvec_to_int(&c)
    }

    /// The dual lattice `{x : <x, L> ⊆ Z}` with the dual basis.
    pub fn dual(&self) -> RationalLattice {
        let b = self.column_matrix();
        let inv = inverse(&b).expect("lattice basis must be invertible");
        // rows of B^{-1} are the dual basis vectors
        RationalLattice { basis: inv }
    }

    /// Index `[self : Z^n]` when `self ⊇ Z^n`, as the inverse of the covolume.
    pub fn index_over_standard(&self) -> Q {
        let d = determinant(&self.basis);
        if d.is_zero() {
            return q(0);
        }
        d.recip().abs()
    }
}

pub fn determinant(m: &QMat) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut det = q(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return q(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            let f = a[i][c] * inv;
            if !f.is_zero() {
                for j in c..n {
                    let t = a[c][j];
                    a[i][j] -= f * t;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn hnf_of_small_lattice() {
        let h = hermite_rows(&[vec![2, 0], vec![0, 2], vec![1, 1]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn saturation_by_half() {
        let l = RationalLattice::saturate(1, &[vec![qr(1, 2)]]);
        assert_eq!(l.basis, vec![vec![qr(1, 2)]]);
        assert_eq!(l.dual().basis, vec![vec![q(2)]]);
        assert_eq!(l.index_over_standard(), q(2));
    }

    #[test]
    fn saturation_keeps_standard_when_integral() {
        let l = RationalLattice::saturate(2, &[vec![q(1), q(-1)]]);
        assert_eq!(l, RationalLattice::standard(2));
    }

    #[test]
    fn d3_style_saturation() {
        let gens =
            vec![vec![qr(1, 2), qr(1, 2), q(0)], vec![qr(1, 2), qr(-1, 2), q(0)], vec![q(0), qr(1, 2), qr(1, 2)]];
        let l = RationalLattice::saturate(3, &gens);
        assert_eq!(l.index_over_standard(), q(4));
        assert_eq!(l.coordinates(&[qr(1, 2), qr(1, 2), q(0)]).is_some(), true);
        assert!(l.coordinates(&[qr(1, 2), q(0), q(0)]).is_none());
    }
}
