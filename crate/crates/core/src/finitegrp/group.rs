//! Enumerated matrix groups `GL_n(F_q)`, `SL_n(F_q)` for `n ≤ 3`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::field::Field;
use crate::error::{Error, Result};

pub const DEFAULT_GROUP_BOUND: u128 = 1_000_000;

/// Row-major `n × n` matrix padded to 3×3.
pub type Mat = [u8; 9];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    GL,
    SL,
}

#[derive(Debug, Clone)]
pub struct Subgroup {
    pub name: String,
    /// Element indices, ascending.
    pub members: Vec<usize>,
    pub mask: Vec<bool>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }
}

#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    pub family: Family,
    pub n: usize,
    pub field: Field,
    elements: Vec<Mat>,
    index: HashMap<Mat, usize>,
    identity: usize,
    subgroups: BTreeMap<String, Subgroup>,
}

/// `|GL_n(F_q)|`, or `|SL_n(F_q)|`.
pub fn group_order(family: Family, n: usize, q: u128) -> u128 {
    let qn = q.pow(n as u32);
    let gl: u128 = (0..n).map(|i| qn - q.pow(i as u32)).product();
    match family {
        Family::GL => gl,
        Family::SL => gl / (q - 1),
    }
}

pub fn build_group(family: Family, n: usize, q: usize) -> Result<FiniteMatrixGroup> {
    build_group_bounded(family, n, q, DEFAULT_GROUP_BOUND)
}

pub fn build_group_bounded(family: Family, n: usize, q: usize, bound: u128) -> Result<FiniteMatrixGroup> {
    if !(1..=3).contains(&n) {
        return Err(Error::Group(format!("degree {n} is outside 1..=3")));
    }
    let field = Field::new(q)?;
    let order = group_order(family, n, q as u128);
    if order > bound {
        return Err(Error::SizeBound { order, bound });
    }
    let total = q.pow((n * n) as u32);
    let elements: Vec<Mat> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut m = [0u8; 9];
            let mut c = code;
            for r in 0..n {
                for col in 0..n {
                    m[r * 3 + col] = (c % q) as u8;
                    c /= q;
                }
            }
            let d = det(&field, n, &m);
            let keep = match family {
                Family::GL => d != 0,
                Family::SL => d == 1,
            };
            keep.then_some(m)
        })
        .collect();
    if elements.len() as u128 != order {
        return Err(Error::Group(format!("enumerated {} elements, expected {order}", elements.len())));
    }
    let index: HashMap<Mat, usize> = elements.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut id = [0u8; 9];
    for i in 0..n {
        id[i * 3 + i] = 1;
    }
    let identity = index[&id];
    let mut g = FiniteMatrixGroup { family, n, field, elements, index, identity, subgroups: BTreeMap::new() };
    g.mark_standard_subgroups();
    Ok(g)
}

pub fn det(f: &Field, n: usize, m: &Mat) -> u8 {
    let e = |r: usize, c: usize| m[r * 3 + c];
    match n {
        1 => e(0, 0),
        2 => f.sub(f.mul(e(0, 0), e(1, 1)), f.mul(e(0, 1), e(1, 0))),
        3 => {
            let minor =
                |a: usize, b: usize, c: usize, d: usize| f.sub(f.mul(e(1, a), e(2, b)), f.mul(e(1, c), e(2, d)));
            let t0 = f.mul(e(0, 0), minor(1, 2, 2, 1));
            let t1 = f.mul(e(0, 1), minor(0, 2, 2, 0));
            let t2 = f.mul(e(0, 2), minor(0, 1, 1, 0));
            f.add(f.sub(t0, t1), t2)
        }
        _ => unreachable!(),
    }
}

impl FiniteMatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    pub fn element(&self, i: usize) -> &Mat {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn entry(&self, i: usize, r: usize, c: usize) -> u8 {
        self.elements[i][r * 3 + c]
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        let f = &self.field;
        let mut out = [0u8; 9];
        for r in 0..self.n {
            for c in 0..self.n {
                let mut acc = 0u8;
                for k in 0..self.n {
                    acc = f.add(acc, f.mul(a[r * 3 + k], b[k * 3 + c]));
                }
                out[r * 3 + c] = acc;
            }
        }
        out
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let m = self.mat_mul(&self.elements[i], &self.elements[j]);
        self.index[&m]
    }

    pub fn inv(&self, i: usize) -> usize {
        let f = &self.field;
        let m = &self.elements[i];
        let n = self.n;
        // Gauss-Jordan on [m | I]
        let mut a = [[0u8; 6]; 3];
        for r in 0..n {
            for c in 0..n {
                a[r][c] = m[r * 3 + c];
            }
            a[r][n + r] = 1;
        }
        for c in 0..n {
            let p = (c..n).find(|&r| a[r][c] != 0).expect("invertible");
            a.swap(c, p);
            let s = f.inv(a[c][c]);
            for x in a[c].iter_mut().take(2 * n) {
                *x = f.mul(*x, s);
            }
            for r in 0..n {
                if r != c && a[r][c] != 0 {
                    let t = a[r][c];
                    for k in 0..2 * n {
                        a[r][k] = f.sub(a[r][k], f.mul(t, a[c][k]));
                    }
                }
            }
        }
        let mut out = [0u8; 9];
        for r in 0..n {
            for c in 0..n {
                out[r * 3 + c] = a[r][n + c];
            }
        }
        self.index[&out]
    }

    pub fn det_of(&self, i: usize) -> u8 {
        det(&self.field, self.n, &self.elements[i])
    }

    pub fn is_diagonal(&self, i: usize) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || self.entry(i, r, c) == 0))
    }

    pub fn is_upper_triangular(&self, i: usize) -> bool {
        (0..self.n).all(|r| (0..r).all(|c| self.entry(i, r, c) == 0))
    }

    pub fn is_lower_triangular(&self, i: usize) -> bool {
        (0..self.n).all(|r| (r + 1..self.n).all(|c| self.entry(i, r, c) == 0))
    }

    /// Monomial with entries in `{0, ±1}`.
    pub fn is_signed_permutation(&self, i: usize) -> bool {
        let f = &self.field;
        (0..self.n).all(|r| {
            let nz: Vec<u8> = (0..self.n).map(|c| self.entry(i, r, c)).filter(|&x| x != 0).collect();
            nz.len() == 1 && (nz[0] == 1 || nz[0] == f.neg(1))
        })
    }

    pub fn add_subgroup<F: Fn(&Self, usize) -> bool + Sync>(&mut self, name: &str, pred: F) -> Result<()> {
        let mask: Vec<bool> = (0..self.order()).into_par_iter().map(|i| pred(self, i)).collect();
        let members: Vec<usize> = (0..self.order()).filter(|&i| mask[i]).collect();
        let sub = Subgroup { name: name.to_string(), members, mask };
        self.check_closed(&sub)?;
        self.subgroups.insert(name.to_string(), sub);
        Ok(())
    }

    fn check_closed(&self, s: &Subgroup) -> Result<()> {
        if !s.contains(self.identity) {
            return Err(Error::Group(format!("{} does not contain the identity", s.name)));
        }
        // exhaustive for small subgroups, a spot check against the first members otherwise
        let take = if s.order() <= 3000 { s.order() } else { 64 };
        let gens: Vec<usize> = s.members.iter().copied().take(take).collect();
        let closed =
            s.members.par_iter().all(|&a| s.contains(self.inv(a)) && gens.iter().all(|&b| s.contains(self.mul(a, b))));
        if closed {
            Ok(())
        } else {
            Err(Error::Group(format!("{} is not closed under multiplication", s.name)))
        }
    }

    fn mark_standard_subgroups(&mut self) {
        let n = self.n;
        let all: Vec<usize> = (0..self.order()).collect();
        let full = Subgroup { name: "G".into(), members: all, mask: vec![true; self.order()] };
        self.subgroups.insert("G".into(), full);
        let preds: Vec<(&str, Box<dyn Fn(&Self, usize) -> bool + Sync>)> = vec![
            ("T", Box::new(|g: &Self, i| g.is_diagonal(i))),
            ("B", Box::new(|g: &Self, i| g.is_upper_triangular(i))),
            ("B-", Box::new(|g: &Self, i| g.is_lower_triangular(i))),
            ("U", Box::new(|g: &Self, i| g.is_upper_triangular(i) && (0..g.n).all(|r| g.entry(i, r, r) == 1))),
        ];
        for (name, p) in preds {
            self.add_subgroup(name, p).expect("standard subgroup");
        }
        if n == 3 {
            self.add_subgroup("P(2,1)", |g, i| g.entry(i, 2, 0) == 0 && g.entry(i, 2, 1) == 0)
                .expect("standard parabolic");
            self.add_subgroup("P(1,2)", |g, i| g.entry(i, 1, 0) == 0 && g.entry(i, 2, 0) == 0)
                .expect("standard parabolic");
        }
    }

    pub fn subgroup(&self, name: &str) -> Result<&Subgroup> {
        self.subgroups.get(name).ok_or_else(|| Error::Group(format!("no subgroup named {name:?}")))
    }

    pub fn subgroup_names(&self) -> impl Iterator<Item = &str> {
        self.subgroups.keys().map(|s| s.as_str())
    }

    /// Elements of `P g Q`, each with one decomposition `(p, q)`.
    pub fn double_coset_orbit(&self, p: &Subgroup, g: usize, q: &Subgroup) -> HashMap<usize, (usize, usize)> {
        let left: Vec<(usize, usize)> = p.members.iter().map(|&a| (self.mul(a, g), a)).collect();
        let parts: Vec<Vec<(usize, usize, usize)>> =
            q.members.par_iter().map(|&b| left.iter().map(|&(ag, a)| (self.mul(ag, b), a, b)).collect()).collect();
        let mut out = HashMap::new();
        for part in parts {
            for (x, a, b) in part {
                out.entry(x).or_insert((a, b));
            }
        }
        out
    }

    /// Representatives and sizes of `P\G/Q`; a signed permutation matrix
    /// is preferred as representative when the coset contains one.
    pub fn double_cosets(&self, p: &Subgroup, q: &Subgroup) -> Vec<DoubleCoset> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let orbit = self.double_coset_orbit(p, g, q);
            let mut members: Vec<usize> = orbit.keys().copied().collect();
            members.sort_unstable();
            for &x in &members {
                seen[x] = true;
            }
            let rep = members.iter().copied().find(|&x| self.is_signed_permutation(x)).unwrap_or(g);
            out.push(DoubleCoset { rep, size: members.len() });
        }
        out
    }

    /// Right coset representatives of `P\G` (smallest index in each coset).
    pub fn right_coset_reps(&self, p: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &a in &p.members {
                seen[self.mul(a, g)] = true;
            }
        }
        reps
    }

    /// Subgroup of members of `a` also in `b`.
    pub fn intersect(&self, name: &str, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mask: Vec<bool> = a.mask.iter().zip(&b.mask).map(|(x, y)| *x && *y).collect();
        let members = (0..self.order()).filter(|&i| mask[i]).collect();
        Subgroup { name: name.into(), members, mask }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleCoset {
    pub rep: usize,
    pub size: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_formula() {
        assert_eq!(build_group(Family::GL, 2, 3).unwrap().order(), 48);
        assert_eq!(build_group(Family::SL, 2, 3).unwrap().order(), 24);
        assert_eq!(build_group(Family::GL, 2, 4).unwrap().order(), 180);
        assert_eq!(build_group(Family::SL, 3, 2).unwrap().order(), 168);
        assert_eq!(group_order(Family::GL, 3, 4), 181_440);
    }

    #[test]
    fn size_bound_enforced() {
        let e = build_group_bounded(Family::GL, 2, 9, 1000).unwrap_err();
        assert_eq!(e, Error::SizeBound { order: 5760, bound: 1000 });
        assert!(matches!(build_group(Family::GL, 3, 7), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn closure_and_inverses() {
        let g = build_group(Family::SL, 2, 5).unwrap();
        for i in (0..g.order()).step_by(7) {
            assert_eq!(g.mul(i, g.inv(i)), g.identity());
            assert_eq!(g.det_of(i), 1);
        }
    }

    #[test]
    fn bruhat_and_small_double_cosets() {
        let g = build_group(Family::GL, 2, 3).unwrap();
        let b = g.subgroup("B").unwrap();
        let t = g.subgroup("T").unwrap();
        let all = g.subgroup("G").unwrap();
        let bb = g.double_cosets(b, b);
        assert_eq!(bb.len(), 2);
        assert_eq!(bb.iter().map(|d| d.size).sum::<usize>(), 48);
        assert_eq!(g.double_cosets(all, all).len(), 1);
        // torus orbits on the projective line: {0}, {∞} and the q − 1 others
        let tb = g.double_cosets(t, b);
        assert_eq!(tb.len(), 3);
        assert_eq!(tb.iter().map(|d| d.size).sum::<usize>(), 48);
        assert_eq!(g.right_coset_reps(b).len(), 4);
    }

    #[test]
    fn gl3_parabolics() {
        let g = build_group(Family::GL, 3, 2).unwrap();
        assert_eq!(g.order(), 168);
        let b = g.subgroup("B").unwrap();
        assert_eq!(b.order(), 8);
        assert_eq!(g.double_cosets(b, b).len(), 6);
        let p = g.subgroup("P(2,1)").unwrap();
        assert_eq!(g.right_coset_reps(p).len(), 7);
    }
}
