//! Enumeration of finite Weyl groups as lattice automorphisms.

use std::collections::HashMap;

use super::{RootDatum, RootSystem};
use crate::error::{Error, Result};
use crate::rational::{identity, mat_mul, mat_vec, q, QMat};

pub const DEFAULT_WEYL_BOUND: usize = 100_000;

/// Elements are matrices acting on the character side (column vectors), each
/// with a shortest word in the simple reflections.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub simple: Vec<usize>,
    pub elements: Vec<QMat>,
    pub words: Vec<Vec<usize>>,
    index: HashMap<QMat, usize>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, m: &QMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Breadth-first enumeration from the identity; words are shortest.
    pub fn enumerate(sys: &RootSystem, rank: usize, bound: usize) -> Result<Self> {
        let simple = sys.simple_roots();
        let gens: Vec<QMat> = simple.iter().map(|&s| reflection_matrix(sys, s, rank)).collect();
        let mut elements = vec![identity(rank)];
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut index = HashMap::new();
        index.insert(identity(rank), 0);
        let mut head = 0;
        while head < elements.len() {
            for (g, m) in gens.iter().enumerate() {
                let next = mat_mul(&elements[head], m);
                if index.contains_key(&next) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(Error::SizeBound { order: elements.len() as u128 + 1, bound: bound as u128 });
                }
                let mut w = words[head].clone();
                w.push(g);
                index.insert(next.clone(), elements.len());
                elements.push(next);
                words.push(w);
            }
            head += 1;
        }
        Ok(WeylGroup { simple, elements, words, index })
    }

    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| self.elements.iter().all(|b| self.index.contains_key(&mat_mul(a, b))))
    }
}

/// Matrix of `s_i : v ↦ v − <v, α_i∨> α_i`.
pub fn reflection_matrix(sys: &RootSystem, i: usize, rank: usize) -> QMat {
    let a = sys.root(i);
    let c = sys.coroot(i);
    (0..rank).map(|r| (0..rank).map(|col| if r == col { q(1) } else { q(0) } - a[r] * c[col]).collect()).collect()
}

/// Strips simple reflections off `g` (acting on characters) from the right
/// while some simple root is sent to a negative root.
///
/// Returns `(word, rest)` with `g = rest · s_{word[0]} ··· s_{word[k-1]}`
/// and `rest` mapping the simple system to itself as a set. `None` if `g`
/// does not permute the roots.
pub fn descend(sys: &RootSystem, g: &QMat) -> Option<(Vec<usize>, QMat)> {
    let rank = g.len();
    let simple = sys.simple_roots();
    let mut cur = g.clone();
    let mut stripped = Vec::new();
    for _ in 0..=sys.len() {
        let mut found = None;
        for (k, &s) in simple.iter().enumerate() {
            let img = mat_vec(&cur, sys.root(s));
            let idx = sys.index_of(&img)?;
            if !sys.is_positive(idx) {
                found = Some(k);
                break;
            }
        }
        let Some(k) = found else {
            stripped.reverse();
            return Some((stripped, cur));
        };
        cur = mat_mul(&cur, &reflection_matrix(sys, simple[k], rank));
        stripped.push(k);
    }
    None
}

/// Shortest word (in positions of `sys.simple_roots()`) of a Weyl element
/// given by its action on characters, if `g` acts on the roots as one.
pub fn weyl_word(sys: &RootSystem, g: &QMat) -> Option<Vec<usize>> {
    let (word, rest) = descend(sys, g)?;
    let fixes = (0..sys.len()).all(|i| mat_vec(&rest, sys.root(i)) == *sys.root(i));
    fixes.then_some(word)
}

pub fn weyl_group(d: &RootDatum, bound: usize) -> Result<WeylGroup> {
    WeylGroup::enumerate(&d.system(), d.rank(), bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_type_a() {
        assert_eq!(weyl_group(&RootDatum::sl2(), DEFAULT_WEYL_BOUND).unwrap().order(), 2);
        let w = weyl_group(&RootDatum::sl(3), DEFAULT_WEYL_BOUND).unwrap();
        assert_eq!(w.order(), 6);
        assert!(w.is_closed());
        assert_eq!(weyl_group(&RootDatum::gl(4), DEFAULT_WEYL_BOUND).unwrap().order(), 24);
        assert_eq!(weyl_group(&RootDatum::torus(3), DEFAULT_WEYL_BOUND).unwrap().order(), 1);
    }

    #[test]
    fn words_round_trip() {
        let d = RootDatum::sl(3);
        let sys = d.system();
        let w = weyl_group(&d, DEFAULT_WEYL_BOUND).unwrap();
        for (m, word) in w.elements.iter().zip(&w.words) {
            let got = weyl_word(&sys, m).unwrap();
            assert_eq!(got.len(), word.len());
            let simple = sys.simple_roots();
            let prod = got.iter().fold(identity(2), |acc, &k| mat_mul(&acc, &reflection_matrix(&sys, simple[k], 2)));
            assert_eq!(&prod, m);
        }
    }

    #[test]
    fn bound_is_enforced() {
        let e = weyl_group(&RootDatum::gl(4), 10).unwrap_err();
        assert!(matches!(e, Error::SizeBound { .. }));
    }
}
