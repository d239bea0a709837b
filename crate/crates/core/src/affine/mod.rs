//! Affine root systems given by gradient roots and level progressions.

mod apartment;
mod extended;

pub use apartment::{
    midpoint_on_wall, restrict_to_levi, separation_set, single_crossing, ApartmentSubspace, Wall, WallFamily,
};
pub use extended::{split_at_special_point, AffineMap, ExtendedAffineElement};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, q, scale, sub, QVec, Q};
use crate::rootdata::{RootDatum, RootSystem};

/// The progression `offset + period·Z`, with `period > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelSet {
    pub offset: Q,
    pub period: Q,
}

impl LevelSet {
    /// Canonical form with `0 <= offset < period`.
    pub fn new(offset: Q, period: Q) -> Self {
        assert!(period.is_positive(), "level period must be positive");
        let k = (offset / period).floor();
        LevelSet { offset: offset - k * period, period }
    }

    pub fn integers() -> Self {
        LevelSet::new(q(0), q(1))
    }

    pub fn contains(&self, k: Q) -> bool {
        ((k - self.offset) / self.period).is_integer()
    }

    pub fn negate(&self) -> Self {
        LevelSet::new(-self.offset, self.period)
    }

    pub fn scale(&self, c: Q) -> Self {
        assert!(!c.is_zero());
        LevelSet::new(self.offset * c, self.period * c.abs())
    }

    pub fn shift(&self, c: Q) -> Self {
        LevelSet::new(self.offset + c, self.period)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &LevelSet) -> bool {
        (self.period / other.period).is_integer() && other.contains(self.offset)
    }

    /// Members in the closed interval `[lo, hi]`, ascending.
    pub fn values_in(&self, lo: Q, hi: Q) -> Vec<Q> {
        let mut out = Vec::new();
        let mut k = ((lo - self.offset) / self.period).ceil();
        loop {
            let v = self.offset + k * self.period;
            if v > hi {
                break;
            }
            out.push(v);
            k += q(1);
        }
        out
    }

    /// Members in the open interval `(lo, hi)`.
    pub fn values_strictly_between(&self, lo: Q, hi: Q) -> Vec<Q> {
        self.values_in(lo, hi).into_iter().filter(|&v| v != lo && v != hi).collect()
    }
}

/// Affine functions `x ↦ <α, x> + k` with `α` a gradient root and `k ∈ Γ_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineRootSystem {
    rank: usize,
    gradients: RootSystem,
    levels: Vec<LevelSet>,
}

impl AffineRootSystem {
    /// Validates level data: `Γ_{-α} = -Γ_α` and closure under affine reflections.
    pub fn new(rank: usize, gradients: RootSystem, levels: Vec<LevelSet>) -> Result<Self> {
        if levels.len() != gradients.len() {
            return Err(Error::Affine("one level set per gradient root is required".into()));
        }
        if gradients.roots().iter().chain(gradients.coroots()).any(|v| v.len() != rank) {
            return Err(Error::Affine("gradient vectors must have the ambient rank".into()));
        }
        let s = AffineRootSystem { rank, gradients, levels };
        s.check_closure()?;
        Ok(s)
    }

    pub fn from_split(d: &RootDatum) -> Self {
        AffineRootSystem { rank: d.rank(), gradients: d.system(), levels: vec![LevelSet::integers(); d.num_roots()] }
    }

    pub fn empty(rank: usize) -> Self {
        AffineRootSystem { rank, gradients: RootSystem::empty(), levels: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gradients(&self) -> &RootSystem {
        &self.gradients
    }

    pub fn levels(&self) -> &[LevelSet] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> LevelSet {
        self.levels[i]
    }

    pub fn is_empty(&self) -> bool {
        self.gradients.is_empty()
    }

    /// Subsystem on the listed gradient indices, in the given order.
    pub fn restrict(&self, idx: &[usize]) -> AffineRootSystem {
        AffineRootSystem {
            rank: self.rank,
            gradients: self.gradients.restrict(idx),
            levels: idx.iter().map(|&i| self.levels[i]).collect(),
        }
    }

    /// Closure under `s_a` for all affine roots, checked on generators of the
    /// level progressions: `s_{α+k}(β+l) = s_α β + (l − <β,α∨> k)`.
    fn check_closure(&self) -> Result<()> {
        let g = &self.gradients;
        for i in 0..g.len() {
            let n = g.negative(i).ok_or_else(|| Error::Affine(format!("gradient {i} has no negative")))?;
            if self.levels[n] != self.levels[i].negate() {
                return Err(Error::Affine(format!("levels of gradient {i} and its negative disagree")));
            }
        }
        for i in 0..g.len() {
            for j in 0..g.len() {
                let c = g.pairing(j, i);
                let Some(t) = g.reflect(j, i) else {
                    return Err(Error::Affine("gradients not closed under reflections".into()));
                };
                let (gi, gj, gt) = (self.levels[i], self.levels[j], self.levels[t]);
                let ok = gt.contains(gj.offset - c * gi.offset)
                    && (gj.period / gt.period).is_integer()
                    && (c * gi.period / gt.period).is_integer();
                if !ok {
                    return Err(Error::Affine(format!(
                        "affine reflection in gradient {i} does not preserve the levels of gradient {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `<α_i, x>`.
    pub fn gradient_value(&self, i: usize, x: &[Q]) -> Q {
        dot(self.gradients.root(i), x)
    }

    /// Whether some affine root with gradient `i` vanishes at `x`.
    pub fn vanishes(&self, i: usize, x: &[Q]) -> bool {
        self.levels[i].contains(-self.gradient_value(i, x))
    }

    /// The affine root with gradient `i` vanishing at `x`, as its level.
    pub fn vanishing_level(&self, i: usize, x: &[Q]) -> Option<Q> {
        let k = -self.gradient_value(i, x);
        self.levels[i].contains(k).then_some(k)
    }

    /// Reflection of a point in the hyperplane `α_i + k = 0`.
    pub fn reflect_point(&self, i: usize, k: Q, x: &[Q]) -> QVec {
        let v = self.gradient_value(i, x) + k;
        sub(x, &scale(v, self.gradients.coroot(i)))
    }
}

/// Gradients of the affine roots vanishing at `x`.
pub fn reductive_quotient_roots(s: &AffineRootSystem, x: &[Q]) -> Vec<usize> {
    (0..s.gradients.len()).filter(|&i| s.vanishes(i, x)).collect()
}

pub fn is_special_point(s: &AffineRootSystem, x: &[Q]) -> bool {
    (0..s.gradients.len()).all(|i| s.vanishes(i, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn split_sl2_quotients() {
        let s = AffineRootSystem::from_split(&RootDatum::sl2());
        assert_eq!(reductive_quotient_roots(&s, &[q(0)]), vec![0, 1]);
        assert!(reductive_quotient_roots(&s, &[qr(1, 4)]).is_empty());
        assert_eq!(reductive_quotient_roots(&s, &[qr(1, 2)]), vec![0, 1]);
        assert!(is_special_point(&s, &[q(0)]));
        assert!(!is_special_point(&s, &[qr(1, 4)]));
        assert!(is_special_point(&AffineRootSystem::empty(2), &[qr(1, 3), q(5)]));
    }

    #[test]
    fn split_levels_are_integers() {
        let s = AffineRootSystem::from_split(&RootDatum::sl(3));
        assert_eq!(s.gradients().len(), 6);
        assert!(s.levels().iter().all(|l| *l == LevelSet::integers()));
        assert!(AffineRootSystem::from_split(&RootDatum::torus(2)).is_empty());
    }

    #[test]
    fn level_set_arithmetic() {
        let l = LevelSet::new(qr(7, 2), q(1));
        assert_eq!(l.offset, qr(1, 2));
        assert!(l.contains(qr(-3, 2)));
        assert_eq!(l.values_in(q(0), q(2)), vec![qr(1, 2), qr(3, 2)]);
        assert!(LevelSet::new(q(0), q(2)).is_subset(&LevelSet::integers()));
        assert!(!LevelSet::integers().is_subset(&LevelSet::new(q(0), q(2))));
    }

    #[test]
    fn inconsistent_levels_rejected() {
        let d = RootDatum::sl2();
        let bad = vec![LevelSet::integers(), LevelSet::new(q(0), q(2))];
        assert!(AffineRootSystem::new(1, d.system(), bad).is_err());
        let half = vec![LevelSet::new(q(0), qr(1, 2)); 2];
        assert!(AffineRootSystem::new(1, d.system(), half).is_ok());
    }
}
