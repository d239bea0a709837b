//! Finite root systems with rational roots and coroots.
//!
//! A [`RootSystem`] is the combinatorial core shared by integral root data,
//! normalized systems with rational gradients, and reductive-quotient
//! subsystems. Roots live in `X^*(T) ⊗ Q`, coroots in `X_*(T) ⊗ Q`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::rational::{dot, is_zero_vec, lex_sign, scale, solve, sub, transpose, QVec, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    roots: Vec<QVec>,
    coroots: Vec<QVec>,
    index: HashMap<QVec, usize>,
}

impl RootSystem {
    /// Builds a root system from paired lists. Only shape is checked here;
    /// see [`RootSystem::check_axioms`].
    pub fn new(roots: Vec<QVec>, coroots: Vec<QVec>) -> Self {
        assert_eq!(roots.len(), coroots.len(), "roots and coroots must pair up");
        let index = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        RootSystem { roots, coroots, index }
    }

    pub fn empty() -> Self {
        RootSystem::new(Vec::new(), Vec::new())
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root(&self, i: usize) -> &QVec {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &QVec {
        &self.coroots[i]
    }

    pub fn roots(&self) -> &[QVec] {
        &self.roots
    }

    pub fn coroots(&self) -> &[QVec] {
        &self.coroots
    }

    pub fn index_of(&self, v: &[Q]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// `<root_i, coroot_j>`.
    pub fn pairing(&self, i: usize, j: usize) -> Q {
        dot(&self.roots[i], &self.coroots[j])
    }

    /// Root index of `s_{root_j}(root_i)`.
    pub fn reflect(&self, i: usize, j: usize) -> Option<usize> {
        let c = self.pairing(i, j);
        let v = sub(&self.roots[i], &scale(c, &self.roots[j]));
        self.index_of(&v)
    }

    pub fn negative(&self, i: usize) -> Option<usize> {
        let v: QVec = self.roots[i].iter().map(|x| -x).collect();
        self.index_of(&v)
    }

    /// The system with roots and coroots exchanged.
    pub fn dual(&self) -> RootSystem {
        RootSystem::new(self.coroots.clone(), self.roots.clone())
    }

    /// Subsystem on the given indices (in the given order).
    pub fn restrict(&self, idx: &[usize]) -> RootSystem {
        RootSystem::new(
            idx.iter().map(|&i| self.roots[i].clone()).collect(),
            idx.iter().map(|&i| self.coroots[i].clone()).collect(),
        )
    }

    /// Checks the root-system axioms; returns a description of the first failure.
    pub fn check_axioms(&self) -> Result<(), String> {
        for (i, r) in self.roots.iter().enumerate() {
            if is_zero_vec(r) || is_zero_vec(&self.coroots[i]) {
                return Err(format!("root {i} or its coroot is zero"));
            }
            let p = self.pairing(i, i);
            if p != Q::from_integer(2) {
                return Err(format!("pairing of root {i} with its coroot is {p}, expected 2"));
            }
        }
        if self.index.len() != self.roots.len() {
            return Err("duplicate roots".into());
        }
        let coindex: HashMap<&QVec, usize> = self.coroots.iter().enumerate().map(|(i, c)| (c, i)).collect();
        if coindex.len() != self.coroots.len() {
            return Err("duplicate coroots".into());
        }
        for i in 0..self.len() {
            let Some(n) = self.negative(i) else {
                return Err(format!("negative of root {i} is missing"));
            };
            let neg_co: QVec = self.coroots[i].iter().map(|x| -x).collect();
            if self.coroots[n] != neg_co {
                return Err(format!("coroot of -root {i} is not the negated coroot"));
            }
        }
        for j in 0..self.len() {
            for i in 0..self.len() {
                let Some(k) = self.reflect(i, j) else {
                    return Err(format!("root set not stable under reflection in root {j}"));
                };
                // dual reflection must send coroot_i to coroot_k
                let c = dot(&self.roots[j], &self.coroots[i]);
                let w = sub(&self.coroots[i], &scale(c, &self.coroots[j]));
                if w != self.coroots[k] {
                    return Err(format!("coroot set not compatible with reflection in root {j}"));
                }
                let cij = self.pairing(i, j);
                if !cij.is_integer() {
                    return Err(format!("non-integral Cartan integer <{i},{j}>"));
                }
            }
        }
        Ok(())
    }

    pub fn is_positive(&self, i: usize) -> bool {
        lex_sign(&self.roots[i]) > 0
    }

    pub fn positive_roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_positive(i)).collect()
    }

    /// Simple roots of the lexicographic positive system, in index order.
    pub fn simple_roots(&self) -> Vec<usize> {
        let pos = self.positive_roots();
        pos.iter()
            .copied()
            .filter(|&b| {
                !pos.iter().any(|&g| {
                    let d = sub(&self.roots[b], &self.roots[g]);
                    self.index_of(&d).is_some_and(|k| self.is_positive(k))
                })
            })
            .collect()
    }

    /// Integer coordinates of each root in terms of `simple`.
    pub fn simple_coordinates(&self, simple: &[usize]) -> Vec<Vec<i64>> {
        if simple.is_empty() {
            return vec![Vec::new(); self.len()];
        }
        let basis: Vec<QVec> = simple.iter().map(|&s| self.roots[s].clone()).collect();
        let a = transpose(&basis);
        self.roots
            .iter()
            .map(|r| {
                let c = solve(&a, r).expect("root outside the span of the simple roots");
                c.iter()
                    .map(|x| {
                        assert!(x.is_integer(), "non-integral simple coordinate");
                        x.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// True if some root is a positive non-unit multiple of another.
    pub fn is_reduced(&self) -> bool {
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && proportional_positive(&self.roots[i], &self.roots[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Root indices grouped into irreducible components, each sorted,
    /// ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for i in 0..n {
            for j in i + 1..n {
                if !self.pairing(i, j).is_zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }

    /// Cartan type label of the subsystem on `idx` (assumed irreducible or empty).
    pub fn cartan_type(&self, idx: &[usize]) -> String {
        if idx.is_empty() {
            return "T".into();
        }
        let sub = self.restrict(idx);
        let simple = sub.simple_roots();
        let cartan: Vec<Vec<i64>> =
            simple.iter().map(|&a| simple.iter().map(|&b| sub.pairing(a, b).to_integer()).collect()).collect();
        classify_cartan(&cartan, !sub.is_reduced())
    }

    /// Is `idx` closed under negation and under sums that are roots?
    pub fn is_closed_subset(&self, idx: &[usize]) -> bool {
        let set: std::collections::HashSet<usize> = idx.iter().copied().collect();
        for &i in idx {
            match self.negative(i) {
                Some(n) if set.contains(&n) => {}
                _ => return false,
            }
            for &j in idx {
                let s: QVec = self.roots[i].iter().zip(&self.roots[j]).map(|(a, b)| a + b).collect();
                if let Some(k) = self.index_of(&s) {
                    if !set.contains(&k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Reflection `s_i` acting on an arbitrary character-side vector.
    pub fn reflect_vector(&self, i: usize, v: &[Q]) -> QVec {
        let c = dot(v, &self.coroots[i]);
        sub(v, &scale(c, &self.roots[i]))
    }

    /// Reflection `s_i` acting on a cocharacter-side vector.
    pub fn reflect_covector(&self, i: usize, v: &[Q]) -> QVec {
        let c = dot(&self.roots[i], v);
        sub(v, &scale(c, &self.coroots[i]))
    }

    /// Moves the simple system `start` (a list of root indices forming a simple
    /// system) to the lexicographic simple system by reflections.
    ///
    /// Returns the sequence of roots reflected in (in application order) and the
    /// final list, position-aligned with `start`.
    pub fn walk_to_positive(&self, start: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut cur = start.to_vec();
        let mut steps = Vec::new();
        while let Some(pos) = cur.iter().position(|&i| !self.is_positive(i)) {
            let sigma = cur[pos];
            steps.push(sigma);
            cur = cur.iter().map(|&i| self.reflect(i, sigma).expect("root system closed under reflection")).collect();
        }
        (steps, cur)
    }
}

fn proportional_positive(a: &[Q], b: &[Q]) -> bool {
    // a = c b with c > 0, c != 1
    let Some(k) = b.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let c = a[k] / b[k];
    if c <= Q::zero() || c == Q::from_integer(1) {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| *x == c * y)
}

/// Dynkin classification from a Cartan matrix `A_ij = <δ_i, δ_j^∨>`.
pub fn classify_cartan(cartan: &[Vec<i64>], nonreduced: bool) -> String {
    let n = cartan.len();
    if n == 0 {
        return "T".into();
    }
    if nonreduced {
        return format!("BC{n}");
    }
    if n == 1 {
        return "A1".into();
    }
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && cartan[i][j] != 0).collect()).collect();
    let bond = |i: usize, j: usize| cartan[i][j] * cartan[j][i];
    let mut multi = Vec::new();
    for i in 0..n {
        for &j in &nbrs[i] {
            if i < j && bond(i, j) > 1 {
                multi.push((i, j, bond(i, j)));
            }
        }
    }
    if let Some(&(_, _, 3)) = multi.first() {
        return if n == 2 { "G2".into() } else { "?".into() };
    }
    if let Some(&(i, j, 2)) = multi.first() {
        if n == 2 {
            return "B2".into();
        }
        if n == 4 && nbrs[i].len() == 2 && nbrs[j].len() == 2 {
            return "F4".into();
        }
        let (leaf, other) = if nbrs[i].len() == 1 { (i, j) } else { (j, i) };
        // <δ_other, δ_leaf^∨> = -2 exactly when the leaf is short
        return if cartan[other][leaf].abs() == 2 { format!("B{n}") } else { format!("C{n}") };
    }
    let branch: Vec<usize> = (0..n).filter(|&i| nbrs[i].len() == 3).collect();
    if branch.is_empty() {
        return format!("A{n}");
    }
    if branch.len() > 1 {
        return "?".into();
    }
    let b = branch[0];
    let mut arms: Vec<usize> = nbrs[b]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (b, start, 1);
            loop {
                let next: Vec<usize> = nbrs[cur].iter().copied().filter(|&x| x != prev).collect();
                if next.len() != 1 {
                    break len;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
        })
        .collect();
    arms.sort();
    match (arms[0], arms[1], arms[2]) {
        (1, 1, _) => format!("D{n}"),
        (1, 2, 2) => "E6".into(),
        (1, 2, 3) => "E7".into(),
        (1, 2, 4) => "E8".into(),
        _ => "?".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::to_qvec;

    fn a2() -> RootSystem {
        let r = [[1, -1, 0], [0, 1, -1], [1, 0, -1]];
        let mut roots = Vec::new();
        for v in r {
            roots.push(to_qvec(&v));
            roots.push(to_qvec(&v.map(|x| -x)));
        }
        RootSystem::new(roots.clone(), roots)
    }

    #[test]
    fn a2_axioms_and_simple_roots() {
        let s = a2();
        s.check_axioms().unwrap();
        assert_eq!(s.simple_roots().len(), 2);
        assert_eq!(s.cartan_type(&(0..6).collect::<Vec<_>>()), "A2");
        assert_eq!(s.components().len(), 1);
    }

    #[test]
    fn classify_standard_matrices() {
        assert_eq!(classify_cartan(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]], false), "C3");
        assert_eq!(classify_cartan(&[vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]], false), "B3");
        assert_eq!(classify_cartan(&[vec![2, -1], vec![-3, 2]], false), "G2");
        assert_eq!(
            classify_cartan(&[vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]], false),
            "D4"
        );
    }
}
