//! The Levi slice `x_0 + X_*(A_M) ⊗ Q` of an apartment and its wall arrangement.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::{AffineRootSystem, LevelSet};
use crate::error::{Error, Result};
use crate::rational::{add, dot, fmt_q, fmt_qvec, kernel, primitive_integer, q, scale, sub, transpose, QMat, QVec, Q};
use crate::rootdata::FrobeniusAction;

/// Affine subspace `base + span(direction)` of the ambient apartment.
#[derive(Debug, Clone, PartialEq)]
pub struct ApartmentSubspace {
    pub base: QVec,
    /// Primitive integer basis vectors in cocharacter coordinates.
    pub direction: Vec<QVec>,
}

impl ApartmentSubspace {
    /// Direction = vectors orthogonal to every Levi root and fixed by the
    /// Frobenius action on cocharacters.
    pub fn for_levi(s: &AffineRootSystem, levi: &[usize], frobenius: Option<&FrobeniusAction>, base: QVec) -> Self {
        let n = s.rank();
        let mut rows: QMat = levi.iter().map(|&i| s.gradients().root(i).clone()).collect();
        if let Some(f) = frobenius {
            // M^{-T} v = v  <=>  M^T v = v
            for r in 0..n {
                rows.push((0..n).map(|c| q(f.matrix[c][r]) - if r == c { q(1) } else { q(0) }).collect());
            }
        }
        let direction =
            kernel(&rows, n).into_iter().map(|v| primitive_integer(&v).into_iter().map(q).collect()).collect();
        ApartmentSubspace { base, direction }
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// Ambient point with subspace coordinates `c`.
    pub fn point(&self, c: &[Q]) -> QVec {
        self.direction.iter().zip(c).fold(self.base.clone(), |acc, (b, &x)| add(&acc, &scale(x, b)))
    }

    /// Subspace coordinates of an ambient point lying on the subspace.
    pub fn coordinates(&self, x: &[Q]) -> Option<QVec> {
        if self.direction.is_empty() {
            return (sub(x, &self.base).iter().all(|v| v.is_zero())).then(Vec::new);
        }
        let a = transpose(&self.direction);
        let c = crate::rational::solve(&a, &sub(x, &self.base))?;
        (self.point(&c) == x).then_some(c)
    }

    pub fn is_frobenius_stable(&self, f: &FrobeniusAction) -> bool {
        self.direction.iter().all(|v| f.apply_cochar_q(v) == *v)
    }
}

/// The hyperplanes `{c : <gradient, c> + k = 0}` for `k` in each level set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WallFamily {
    pub gradient: QVec,
    pub levels: Vec<LevelSet>,
}

/// A single hyperplane `<gradient, c> + constant = 0` in subspace coordinates,
/// normalized so that `gradient` is a primitive integer vector with positive
/// leading entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub gradient: QVec,
    pub constant: Q,
}

impl Wall {
    pub fn eval(&self, c: &[Q]) -> Q {
        dot(&self.gradient, c) + self.constant
    }

    pub fn describe(&self) -> String {
        let sign = if self.constant.is_negative() { '-' } else { '+' };
        format!("{}·c {sign} {} = 0", fmt_qvec(&self.gradient), fmt_q(&self.constant.abs()))
    }
}

impl WallFamily {
    pub fn contains_wall(&self, w: &Wall) -> bool {
        w.gradient == self.gradient && self.levels.iter().any(|l| l.contains(w.constant))
    }

    pub fn is_wall_point(&self, c: &[Q]) -> bool {
        let v = dot(&self.gradient, c);
        self.levels.iter().any(|l| l.contains(-v))
    }
}

/// Rescales `(g, Γ)` to the primitive positive form, returning `None` for constant functionals.
pub(crate) fn normalize_family(g: &[Q], levels: LevelSet) -> Option<(QVec, LevelSet)> {
    if g.iter().all(|x| x.is_zero()) {
        return None;
    }
    let prim: QVec = primitive_integer(g).into_iter().map(q).collect();
    let k = g.iter().position(|x| !x.is_zero()).unwrap();
    let mut lambda = prim[k] / g[k];
    let mut prim = prim;
    if prim[k].is_negative() {
        prim = prim.iter().map(|x| -x).collect();
        lambda = -lambda;
    }
    Some((prim, levels.scale(lambda)))
}

/// Merges families with equal gradients, dropping level sets contained in others.
pub(crate) fn merge_families(raw: Vec<(QVec, LevelSet)>) -> Vec<WallFamily> {
    let mut by_grad: BTreeMap<QVec, Vec<LevelSet>> = BTreeMap::new();
    for (g, l) in raw {
        by_grad.entry(g).or_default().push(l);
    }
    by_grad
        .into_iter()
        .map(|(gradient, mut ls)| {
            ls.sort();
            ls.dedup();
            let keep: Vec<LevelSet> = ls
                .iter()
                .enumerate()
                .filter(|(i, l)| {
                    !ls.iter().enumerate().any(|(j, m)| j != *i && l.is_subset(m) && (!m.is_subset(l) || j < *i))
                })
                .map(|(_, l)| *l)
                .collect();
            WallFamily { gradient, levels: keep }
        })
        .collect()
}

/// Non-constant restrictions of affine roots to the subspace, merged into wall families.
pub fn restrict_to_levi(s: &AffineRootSystem, levi: &[usize], sub: &ApartmentSubspace) -> Vec<WallFamily> {
    let raw = (0..s.gradients().len())
        .filter(|i| !levi.contains(i))
        .filter_map(|i| {
            let alpha = s.gradients().root(i);
            let g: QVec = sub.direction.iter().map(|b| dot(alpha, b)).collect();
            let levels = s.level(i).shift(dot(alpha, &sub.base));
            normalize_family(&g, levels)
        })
        .collect();
    merge_families(raw)
}

/// Walls taking strictly opposite signs at `x` and `y`, sorted.
pub fn separation_set(families: &[WallFamily], x: &[Q], y: &[Q]) -> Result<Vec<Wall>> {
    for (name, p) in [("x", x), ("y", y)] {
        if let Some(f) = families.iter().find(|f| f.is_wall_point(p)) {
            return Err(Error::NotGeneric(format!(
                "{name} = {} lies on a wall with gradient {}",
                fmt_qvec(p),
                fmt_qvec(&f.gradient)
            )));
        }
    }
    let mut out = BTreeSet::new();
    for f in families {
        let (vx, vy) = (dot(&f.gradient, x), dot(&f.gradient, y));
        let (lo, hi) = if vx < vy { (-vy, -vx) } else { (-vx, -vy) };
        for l in &f.levels {
            for k in l.values_strictly_between(lo, hi) {
                out.insert(Wall { gradient: f.gradient.clone(), constant: k });
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The point where the open segment `(x, y)` meets `wall`.
pub fn midpoint_on_wall(x: &[Q], y: &[Q], wall: &Wall) -> Result<QVec> {
    let fx = wall.eval(x);
    let fy = wall.eval(y);
    if fx == fy {
        return Err(Error::NotGeneric(format!("segment is parallel to {}", wall.describe())));
    }
    let t = -fx / (fy - fx);
    if t <= q(0) || t >= q(1) {
        return Err(Error::NotGeneric(format!("segment does not cross {} in its interior", wall.describe())));
    }
    Ok(add(x, &scale(t, &sub(y, x))))
}

/// The unique wall separating `x` and `y`, with the crossing point.
pub fn single_crossing(families: &[WallFamily], x: &[Q], y: &[Q]) -> Result<(Wall, QVec)> {
    let h = separation_set(families, x, y)?;
    if h.len() != 1 {
        return Err(Error::NotGeneric(format!("{} walls separate the points, expected one", h.len())));
    }
    let w = h.into_iter().next().unwrap();
    let p = midpoint_on_wall(x, y, &w)?;
    Ok((w, p))
}
