//! Comparison of (root system, Levi, Frobenius) triples orbit by orbit,
//! allowing each orbit to be replaced by its dual.

use std::collections::HashSet;

use super::{decompose_system, FrobeniusAction, RootDatum, RootSystem};
use crate::error::{Error, Result};
use crate::rational::{add, scale, QVec, Q};

/// A root system with a Levi subset and a Frobenius permutation of its roots.
#[derive(Debug, Clone)]
pub struct LeviPair {
    pub system: RootSystem,
    pub levi: Vec<usize>,
    pub frobenius: Vec<usize>,
}

impl LeviPair {
    pub fn new(system: RootSystem, levi: Vec<usize>, frobenius: Vec<usize>) -> Result<Self> {
        if frobenius.len() != system.len() {
            return Err(Error::InvalidFrobenius("permutation length differs from root count".into()));
        }
        let mut seen = vec![false; system.len()];
        for &j in &frobenius {
            if j >= system.len() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidFrobenius("not a permutation of the roots".into()));
            }
        }
        if levi.iter().any(|&i| i >= system.len()) || !system.is_closed_subset(&levi) {
            return Err(Error::InvalidDatum("Levi subset is not root-closed".into()));
        }
        let set: HashSet<usize> = levi.iter().copied().collect();
        if levi.iter().any(|&i| !set.contains(&frobenius[i])) {
            return Err(Error::InvalidFrobenius("Levi subset is not Frobenius-stable".into()));
        }
        Ok(LeviPair { system, levi, frobenius })
    }

    pub fn from_datum(d: &RootDatum, levi: Vec<usize>, f: &FrobeniusAction) -> Result<Self> {
        let perm = f.validate(d)?;
        LeviPair::new(d.system(), levi, perm)
    }

    /// The pair with an identity Frobenius.
    pub fn split(system: RootSystem, levi: Vec<usize>) -> Result<Self> {
        let n = system.len();
        LeviPair::new(system, levi, (0..n).collect())
    }
}

/// Witness for one matched orbit: root-index maps from the left orbit to the
/// right orbit, for the direct alternative and the dual alternative when each
/// exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMatch {
    pub left_roots: Vec<usize>,
    pub right_roots: Vec<usize>,
    pub label: String,
    pub direct: Option<Vec<(usize, usize)>>,
    pub dual: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualIsoReport {
    pub isomorphic: bool,
    pub matches: Vec<OrbitMatch>,
    pub explanation: String,
}

/// One side of a search: vectors and covectors of an orbit, in a common index space.
struct Side<'a> {
    vectors: &'a [QVec],
    covectors: &'a [QVec],
    perm: &'a [usize],
    levi: &'a HashSet<usize>,
    idx: &'a [usize],
}

pub fn isomorphic_up_to_duals(p1: &LeviPair, p2: &LeviPair) -> DualIsoReport {
    let d1 = decompose_system(&p1.system, &p1.frobenius);
    let d2 = decompose_system(&p2.system, &p2.frobenius);
    if d1.orbits.len() != d2.orbits.len() {
        return DualIsoReport {
            isomorphic: false,
            matches: Vec::new(),
            explanation: format!("orbit counts differ: {} versus {}", d1.orbits.len(), d2.orbits.len()),
        };
    }
    let l1: HashSet<usize> = p1.levi.iter().copied().collect();
    let l2: HashSet<usize> = p2.levi.iter().copied().collect();
    let o1: Vec<Vec<usize>> = (0..d1.orbits.len()).map(|k| d1.orbit_roots(k)).collect();
    let o2: Vec<Vec<usize>> = (0..d2.orbits.len()).map(|k| d2.orbit_roots(k)).collect();
    let n = o1.len();

    // candidate table: cand[i][j] = (direct, dual)
    type Maps = (Option<Vec<(usize, usize)>>, Option<Vec<(usize, usize)>>);
    let mut cand: Vec<Vec<Maps>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            let right = Side {
                vectors: p2.system.roots(),
                covectors: p2.system.coroots(),
                perm: &p2.frobenius,
                levi: &l2,
                idx: &o2[j],
            };
            let direct = find_iso(
                &Side {
                    vectors: p1.system.roots(),
                    covectors: p1.system.coroots(),
                    perm: &p1.frobenius,
                    levi: &l1,
                    idx: &o1[i],
                },
                &right,
            );
            let dual = find_iso(
                &Side {
                    vectors: p1.system.coroots(),
                    covectors: p1.system.roots(),
                    perm: &p1.frobenius,
                    levi: &l1,
                    idx: &o1[i],
                },
                &right,
            );
            cand[i].push((direct, dual));
        }
    }

    fn assign(
        i: usize,
        cand: &[Vec<(Option<Vec<(usize, usize)>>, Option<Vec<(usize, usize)>>)>],
        used: &mut Vec<bool>,
        out: &mut Vec<usize>,
    ) -> bool {
        if i == cand.len() {
            return true;
        }
        for j in 0..cand.len() {
            let (a, b) = &cand[i][j];
            if used[j] || (a.is_none() && b.is_none()) {
                continue;
            }
            used[j] = true;
            out.push(j);
            if assign(i + 1, cand, used, out) {
                return true;
            }
            out.pop();
            used[j] = false;
        }
        false
    }

    let mut used = vec![false; n];
    let mut chosen = Vec::new();
    if !assign(0, &cand, &mut used, &mut chosen) {
        let unmatched: Vec<String> = (0..n)
            .filter(|&i| cand[i].iter().all(|(a, b)| a.is_none() && b.is_none()))
            .map(|i| d1.labels[i].clone())
            .collect();
        return DualIsoReport {
            isomorphic: false,
            matches: Vec::new(),
            explanation: if unmatched.is_empty() {
                "no perfect matching of orbits".into()
            } else {
                format!("no equivariant isomorphism for orbits {}", unmatched.join(", "))
            },
        };
    }
    let matches = chosen
        .iter()
        .enumerate()
        .map(|(i, &j)| OrbitMatch {
            left_roots: o1[i].clone(),
            right_roots: o2[j].clone(),
            label: d1.labels[i].clone(),
            direct: cand[i][j].0.clone(),
            dual: cand[i][j].1.clone(),
        })
        .collect();
    DualIsoReport { isomorphic: true, matches, explanation: format!("{n} orbits matched") }
}

/// Searches for a bijection `left.idx → right.idx` preserving Cartan integers,
/// extending linearly from a simple system, commuting with Frobenius and
/// preserving Levi membership.
fn find_iso(left: &Side, right: &Side) -> Option<Vec<(usize, usize)>> {
    if left.idx.len() != right.idx.len() {
        return None;
    }
    if left.idx.iter().filter(|i| left.levi.contains(i)).count()
        != right.idx.iter().filter(|i| right.levi.contains(i)).count()
    {
        return None;
    }
    let lsys = RootSystem::new(
        left.idx.iter().map(|&i| left.vectors[i].clone()).collect(),
        left.idx.iter().map(|&i| left.covectors[i].clone()).collect(),
    );
    let rsys = RootSystem::new(
        right.idx.iter().map(|&i| right.vectors[i].clone()).collect(),
        right.idx.iter().map(|&i| right.covectors[i].clone()).collect(),
    );
    let simple = lsys.simple_roots();
    let coords = lsys.simple_coordinates(&simple);
    let cart = |s: &RootSystem, a: usize, b: usize| -> Q { s.pairing(a, b) };
    // local index maps
    let lpos = |g: usize| left.idx.iter().position(|&x| x == g).unwrap();
    let lperm: Vec<usize> = left.idx.iter().map(|&g| lpos(left.perm[g])).collect();
    let rpos = |g: usize| right.idx.iter().position(|&x| x == g).unwrap();
    let rperm: Vec<usize> = right.idx.iter().map(|&g| rpos(right.perm[g])).collect();
    let llevi: Vec<bool> = left.idx.iter().map(|g| left.levi.contains(g)).collect();
    let rlevi: Vec<bool> = right.idx.iter().map(|g| right.levi.contains(g)).collect();

    let m = rsys.len();
    let mut image: Vec<usize> = Vec::with_capacity(simple.len());
    let mut result = None;

    fn rec(
        k: usize,
        simple: &[usize],
        image: &mut Vec<usize>,
        lsys: &RootSystem,
        rsys: &RootSystem,
        m: usize,
        cart: &dyn Fn(&RootSystem, usize, usize) -> Q,
        finish: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == simple.len() {
            return finish(image);
        }
        for c in 0..m {
            if image.contains(&c) {
                continue;
            }
            let ok = (0..k).all(|a| {
                cart(rsys, image[a], c) == cart(lsys, simple[a], simple[k])
                    && cart(rsys, c, image[a]) == cart(lsys, simple[k], simple[a])
            }) && cart(rsys, c, c) == cart(lsys, simple[k], simple[k]);
            if !ok {
                continue;
            }
            image.push(c);
            if rec(k + 1, simple, image, lsys, rsys, m, cart, finish) {
                return true;
            }
            image.pop();
        }
        false
    }

    let mut finish = |img: &[usize]| -> bool {
        let n = lsys.len();
        let mut map = vec![usize::MAX; n];
        for r in 0..n {
            let mut v: QVec = vec![Q::from_integer(0); rsys.root(0).len()];
            for (a, &c) in coords[r].iter().enumerate() {
                if c != 0 {
                    v = add(&v, &scale(Q::from_integer(c), rsys.root(img[a])));
                }
            }
            match rsys.index_of(&v) {
                Some(t) => map[r] = t,
                None => return false,
            }
        }
        let distinct: HashSet<usize> = map.iter().copied().collect();
        if distinct.len() != n {
            return false;
        }
        for a in 0..n {
            if map[lperm[a]] != rperm[map[a]] || llevi[a] != rlevi[map[a]] {
                return false;
            }
            for b in 0..n {
                if lsys.pairing(a, b) != rsys.pairing(map[a], map[b]) {
                    return false;
                }
            }
        }
        result = Some((0..n).map(|a| (left.idx[a], right.idx[map[a]])).collect::<Vec<_>>());
        true
    };
    rec(0, &simple, &mut image, &lsys, &rsys, m, &cart, &mut finish);
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::dual_datum;

    fn pair(d: &RootDatum, levi: Vec<usize>) -> LeviPair {
        LeviPair::from_datum(d, levi, &FrobeniusAction::identity(d.rank())).unwrap()
    }

    #[test]
    fn sl2_against_pgl2_has_dual_witness() {
        let sl2 = RootDatum::sl2();
        let pgl2 = dual_datum(&sl2);
        let r = isomorphic_up_to_duals(&pair(&sl2, vec![]), &pair(&pgl2, vec![]));
        assert!(r.isomorphic);
        assert_eq!(r.matches.len(), 1);
        assert!(r.matches[0].dual.is_some());
    }

    #[test]
    fn sl3_levi_flip() {
        let sl3 = RootDatum::sl(3);
        let a1 = sl3.root_index(&[2, -1]).unwrap();
        let a2 = sl3.root_index(&[-1, 2]).unwrap();
        let l1 = vec![a1, sl3.root_index(&[-2, 1]).unwrap()];
        let l2 = vec![a2, sl3.root_index(&[1, -2]).unwrap()];
        let r = isomorphic_up_to_duals(&pair(&sl3, l1.clone()), &pair(&sl3, l2));
        assert!(r.isomorphic, "{}", r.explanation);
        let r = isomorphic_up_to_duals(&pair(&sl3, l1), &pair(&sl3, vec![]));
        assert!(!r.isomorphic);
    }

    #[test]
    fn orbit_count_mismatch_is_reported() {
        let a = pair(&RootDatum::sl2(), vec![]);
        let b = pair(&RootDatum::sl2().product(&RootDatum::sl2()), vec![]);
        let r = isomorphic_up_to_duals(&a, &b);
        assert!(!r.isomorphic);
        assert!(r.explanation.contains("orbit counts"));
    }

    #[test]
    fn frobenius_equivariance_matters() {
        let d = RootDatum::sl2().product(&RootDatum::sl2());
        let swap = FrobeniusAction::from_coordinate_permutation(&[1, 0]);
        let twisted = LeviPair::from_datum(&d, vec![], &swap).unwrap();
        let split = pair(&d, vec![]);
        assert!(!isomorphic_up_to_duals(&twisted, &split).isomorphic);
        assert!(isomorphic_up_to_duals(&twisted, &twisted).isomorphic);
    }
}
