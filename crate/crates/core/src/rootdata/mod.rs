//! Integral root data with Frobenius actions.

mod iso;
mod system;
mod weyl;

pub use iso::{isomorphic_up_to_duals, DualIsoReport, LeviPair, OrbitMatch};
pub use system::{classify_cartan, RootSystem};
pub use weyl::{descend, reflection_matrix, weyl_group, weyl_word, WeylGroup, DEFAULT_WEYL_BOUND};

use crate::error::{Error, Result};
use crate::rational::{to_qvec, QVec};

/// Character lattice `Z^rank` with roots, cocharacter lattice `Z^rank` with
/// coroots; `coroots[i]` is the coroot of `roots[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
}

/// Checks every root-datum invariant and returns the datum.
pub fn validate_root_datum(rank: usize, roots: Vec<Vec<i64>>, coroots: Vec<Vec<i64>>) -> Result<RootDatum> {
    if rank == 0 {
        return Err(Error::InvalidDatum("rank must be positive".into()));
    }
    if roots.len() != coroots.len() {
        return Err(Error::InvalidDatum(format!("{} roots but {} coroots", roots.len(), coroots.len())));
    }
    for (i, v) in roots.iter().chain(&coroots).enumerate() {
        if v.len() != rank {
            return Err(Error::InvalidDatum(format!("vector {i} has length {}, expected {rank}", v.len())));
        }
    }
    let d = RootDatum { rank, roots, coroots };
    d.system().check_axioms().map_err(Error::InvalidDatum)?;
    Ok(d)
}

impl RootDatum {
    pub fn new(rank: usize, roots: Vec<Vec<i64>>, coroots: Vec<Vec<i64>>) -> Result<Self> {
        validate_root_datum(rank, roots, coroots)
    }

    /// Torus of the given rank (no roots).
    pub fn torus(rank: usize) -> Self {
        RootDatum { rank, roots: Vec::new(), coroots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn system(&self) -> RootSystem {
        RootSystem::new(
            self.roots.iter().map(|r| to_qvec(r)).collect(),
            self.coroots.iter().map(|r| to_qvec(r)).collect(),
        )
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == v)
    }

    /// `SL_2`: α = (2), α∨ = (1).
    pub fn sl2() -> Self {
        RootDatum::new(1, vec![vec![2], vec![-2]], vec![vec![1], vec![-1]]).unwrap()
    }

    /// `GL_n` with roots `e_i − e_j`, ordered by `(i, j)` lexicographically.
    pub fn gl(n: usize) -> Self {
        let mut roots = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v[j] = -1;
                    roots.push(v);
                }
            }
        }
        RootDatum::new(n, roots.clone(), roots).unwrap()
    }

    /// Simply connected `SL_n`: cocharacters have the simple coroots as basis,
    /// so a root's coordinates are its Cartan-matrix pairings.
    pub fn sl(n: usize) -> Self {
        let r = n - 1;
        let cartan = |k: usize, l: usize| -> i64 {
            if k == l {
                2
            } else if k.abs_diff(l) == 1 {
                -1
            } else {
                0
            }
        };
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
                // e_lo − e_hi = α_lo + .. + α_{hi-1}
                let mut root = vec![0; r];
                let mut coroot = vec![0; r];
                for k in lo..hi {
                    coroot[k] = sign;
                    for (l, x) in root.iter_mut().enumerate() {
                        *x += sign * cartan(k, l);
                    }
                }
                roots.push(root);
                coroots.push(coroot);
            }
        }
        RootDatum::new(r, roots, coroots).unwrap()
    }

    /// Product of two data on the direct sum of lattices.
    pub fn product(&self, other: &RootDatum) -> RootDatum {
        let pad = |v: &Vec<i64>, left: bool| -> Vec<i64> {
            let mut out = vec![0; self.rank + other.rank];
            if left {
                out[..self.rank].copy_from_slice(v);
            } else {
                out[self.rank..].copy_from_slice(v);
            }
            out
        };
        let roots = self.roots.iter().map(|v| pad(v, true)).chain(other.roots.iter().map(|v| pad(v, false)));
        let coroots = self.coroots.iter().map(|v| pad(v, true)).chain(other.coroots.iter().map(|v| pad(v, false)));
        RootDatum { rank: self.rank + other.rank, roots: roots.collect(), coroots: coroots.collect() }
    }
}

/// Swaps character and cocharacter sides.
pub fn dual_datum(d: &RootDatum) -> RootDatum {
    RootDatum { rank: d.rank, roots: d.coroots.clone(), coroots: d.roots.clone() }
}

/// A finite-order automorphism of the character lattice generating the
/// Galois action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusAction {
    pub matrix: Vec<Vec<i64>>,
    pub order: usize,
}

fn mat_mul_int(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn identity_int(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

impl FrobeniusAction {
    pub fn identity(rank: usize) -> Self {
        FrobeniusAction { matrix: identity_int(rank), order: 1 }
    }

    /// Permutation of coordinates `e_i ↦ e_{perm[i]}`.
    pub fn from_coordinate_permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = vec![vec![0; n]; n];
        for (i, &p) in perm.iter().enumerate() {
            m[p][i] = 1;
        }
        let mut f = FrobeniusAction { matrix: m, order: 1 };
        f.order = f.compute_order().unwrap_or(1);
        f
    }

    /// Builds an action from its matrix, computing the order.
    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let mut f = FrobeniusAction { matrix, order: 1 };
        f.order = f.compute_order().ok_or_else(|| Error::InvalidFrobenius("matrix has no finite order ≤ 24".into()))?;
        Ok(f)
    }

    fn compute_order(&self) -> Option<usize> {
        let n = self.matrix.len();
        let id = identity_int(n);
        let mut p = self.matrix.clone();
        for k in 1..=24 {
            if p == id {
                return Some(k);
            }
            p = mat_mul_int(&p, &self.matrix);
        }
        None
    }

    pub fn power(&self, k: usize) -> Vec<Vec<i64>> {
        let mut p = identity_int(self.matrix.len());
        for _ in 0..k {
            p = mat_mul_int(&p, &self.matrix);
        }
        p
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Action on cocharacters, `M^{-T}`.
    pub fn apply_cochar(&self, v: &[i64]) -> Vec<i64> {
        let inv = self.power(self.order - 1);
        let n = inv.len();
        (0..n).map(|i| (0..n).map(|k| inv[k][i] * v[k]).sum()).collect()
    }

    /// Rational version of [`FrobeniusAction::apply`].
    pub fn apply_q(&self, v: &[crate::rational::Q]) -> QVec {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| crate::rational::q(*a) * b).sum()).collect()
    }

    /// Rational version of [`FrobeniusAction::apply_cochar`].
    pub fn apply_cochar_q(&self, v: &[crate::rational::Q]) -> QVec {
        let inv = self.power(self.order - 1);
        let n = inv.len();
        (0..n).map(|i| (0..n).map(|k| crate::rational::q(inv[k][i]) * v[k]).sum()).collect()
    }

    /// Checks shape, order and compatibility with `d`; returns the root permutation.
    pub fn validate(&self, d: &RootDatum) -> Result<Vec<usize>> {
        let n = d.rank();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidFrobenius(format!("matrix must be {n}x{n}")));
        }
        if self.order == 0 || self.power(self.order) != identity_int(n) {
            return Err(Error::InvalidFrobenius(format!("matrix^{} is not the identity", self.order)));
        }
        let mut perm = Vec::with_capacity(d.num_roots());
        for (i, r) in d.roots().iter().enumerate() {
            let image = self.apply(r);
            let Some(j) = d.root_index(&image) else {
                return Err(Error::InvalidFrobenius(format!("image of root {i} is not a root")));
            };
            if self.apply_cochar(&d.coroots()[i]) != d.coroots()[j] {
                return Err(Error::InvalidFrobenius(format!("coroot action incompatible at root {i}")));
            }
            perm.push(j);
        }
        Ok(perm)
    }

    /// Root permutation; panics if the action is invalid for `d`.
    pub fn root_permutation(&self, d: &RootDatum) -> Vec<usize> {
        self.validate(d).expect("Frobenius action must be valid for the datum")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// Irreducible components as sorted root-index lists.
    pub components: Vec<Vec<usize>>,
    /// Frobenius orbits as lists of component indices.
    pub orbits: Vec<Vec<usize>>,
    /// Cartan type label per orbit.
    pub labels: Vec<String>,
}

impl OrbitDecomposition {
    /// Root indices of orbit `k`, sorted.
    pub fn orbit_roots(&self, k: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.orbits[k].iter().flat_map(|&c| self.components[c].iter().copied()).collect();
        v.sort();
        v
    }
}

pub fn decompose_orbits(d: &RootDatum, f: &FrobeniusAction) -> Result<OrbitDecomposition> {
    let perm = f.validate(d)?;
    Ok(decompose_system(&d.system(), &perm))
}

/// Orbit decomposition of a rational root system under a root permutation.
pub fn decompose_system(sys: &RootSystem, perm: &[usize]) -> OrbitDecomposition {
    let components = sys.components();
    let comp_of: Vec<usize> = {
        let mut c = vec![0; sys.len()];
        for (k, comp) in components.iter().enumerate() {
            for &i in comp {
                c[i] = k;
            }
        }
        c
    };
    let comp_image: Vec<usize> = components.iter().map(|c| comp_of[perm[c[0]]]).collect();
    let mut seen = vec![false; components.len()];
    let mut orbits = Vec::new();
    for start in 0..components.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            orbit.push(c);
            c = comp_image[c];
        }
        orbits.push(orbit);
    }
    let labels = orbits
        .iter()
        .map(|orbit| {
            let base = sys.cartan_type(&components[orbit[0]]);
            let twist = twist_order(sys, perm, &components[orbit[0]], orbit.len());
            let one = if twist > 1 { format!("{twist}{base}") } else { base };
            vec![one; orbit.len()].join("x")
        })
        .collect();
    OrbitDecomposition { components, orbits, labels }
}

/// Order of the diagram automorphism induced by `perm^k` on the component.
fn twist_order(sys: &RootSystem, perm: &[usize], comp: &[usize], k: usize) -> usize {
    let simple: Vec<usize> = sys.simple_roots().into_iter().filter(|i| comp.contains(i)).collect();
    let image: Vec<usize> = simple.iter().map(|&i| (0..k).fold(i, |x, _| perm[x])).collect();
    let (_, fin) = sys.walk_to_positive(&image);
    // σ: position a ↦ position of fin[a] in `simple`
    let sigma: Vec<usize> =
        fin.iter().map(|x| simple.iter().position(|y| y == x).expect("walk ends at the simple system")).collect();
    let mut order = 1;
    let mut p: Vec<usize> = sigma.clone();
    while p.iter().enumerate().any(|(a, &b)| a != b) {
        p = p.iter().map(|&x| sigma[x]).collect();
        order += 1;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_data_validate() {
        assert!(validate_root_datum(1, vec![vec![2], vec![-2]], vec![vec![1], vec![-1]]).is_ok());
        assert!(validate_root_datum(2, vec![vec![1, -1], vec![-1, 1]], vec![vec![1, -1], vec![-1, 1]]).is_ok());
        let err = validate_root_datum(1, vec![vec![1], vec![-1]], vec![vec![1], vec![-1]]).unwrap_err();
        assert!(err.to_string().contains("pairing"), "{err}");
        let err = validate_root_datum(1, vec![vec![2]], vec![vec![1]]).unwrap_err();
        assert!(err.to_string().contains("negative"), "{err}");
    }

    #[test]
    fn standard_families_are_valid() {
        for n in 2..=4 {
            assert_eq!(RootDatum::gl(n).num_roots(), n * (n - 1));
            assert_eq!(RootDatum::sl(n).num_roots(), n * (n - 1));
        }
        assert_eq!(RootDatum::sl(2), RootDatum::sl2());
    }

    #[test]
    fn dual_of_sl2_is_pgl2_shaped() {
        let d = dual_datum(&RootDatum::sl2());
        assert_eq!(d.roots()[0], vec![1]);
        assert_eq!(d.coroots()[0], vec![2]);
        assert!(validate_root_datum(1, d.roots().to_vec(), d.coroots().to_vec()).is_ok());
        let g = RootDatum::gl(2);
        assert_eq!(dual_datum(&g), g);
    }

    #[test]
    fn orbit_labels() {
        let d = RootDatum::sl2().product(&RootDatum::sl2());
        let swap = FrobeniusAction::from_coordinate_permutation(&[1, 0]);
        let o = decompose_orbits(&d, &swap).unwrap();
        assert_eq!(o.components.len(), 2);
        assert_eq!(o.orbits.len(), 1);
        assert_eq!(o.labels, vec!["A1xA1"]);

        let sl3 = RootDatum::sl(3);
        let flip = FrobeniusAction::from_coordinate_permutation(&[1, 0]);
        let o = decompose_orbits(&sl3, &flip).unwrap();
        assert_eq!((o.components.len(), o.orbits.len()), (1, 1));
        assert_eq!(o.labels, vec!["2A2"]);

        let t = RootDatum::torus(2);
        let o = decompose_orbits(&t, &FrobeniusAction::identity(2)).unwrap();
        assert!(o.components.is_empty() && o.orbits.is_empty());
    }

    #[test]
    fn frobenius_must_permute_roots() {
        let d = RootDatum::gl(2);
        let bad = FrobeniusAction { matrix: vec![vec![2, 0], vec![0, 1]], order: 1 };
        assert!(bad.validate(&d).is_err());
    }
}
