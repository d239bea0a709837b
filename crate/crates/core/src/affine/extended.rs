//! Affine transformations of the apartment and their decomposition at a special point.

use super::{is_special_point, AffineRootSystem};
use crate::error::{Error, Result};
use crate::rational::{add, fmt_qvec, identity, inverse, mat_mul, mat_vec, q, sub, transpose, QMat, QVec, Q};
use crate::rootdata::weyl_word;

/// `x ↦ linear·x + translation` on cocharacter coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: QMat,
    pub translation: QVec,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap { linear: identity(n), translation: vec![q(0); n] }
    }

    pub fn translation(t: QVec) -> Self {
        AffineMap { linear: identity(t.len()), translation: t }
    }

    pub fn apply(&self, x: &[Q]) -> QVec {
        add(&mat_vec(&self.linear, x), &self.translation)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap { linear: mat_mul(&self.linear, &other.linear), translation: self.apply(&other.translation) }
    }

    /// Reflection in the zero set of the affine root `α_i + k`.
    pub fn reflection(s: &AffineRootSystem, i: usize, k: Q) -> AffineMap {
        let n = s.rank();
        let a = s.gradients().root(i);
        let c = s.gradients().coroot(i);
        let linear =
            (0..n).map(|r| (0..n).map(|col| if r == col { q(1) } else { q(0) } - c[r] * a[col]).collect()).collect();
        let translation = c.iter().map(|x| -k * x).collect();
        AffineMap { linear, translation }
    }

    /// Whether the map permutes the affine roots: each `a ∘ w^{-1}` is again an affine root.
    pub fn normalizes(&self, s: &AffineRootSystem) -> Result<Vec<usize>> {
        let inv = inverse(&self.linear).ok_or_else(|| Error::Affine("transformation is not invertible".into()))?;
        let inv_t = transpose(&inv);
        let back = mat_vec(&inv, &self.translation);
        let g = s.gradients();
        let mut perm = Vec::with_capacity(g.len());
        for i in 0..g.len() {
            // (α + k) ∘ w^{-1} = L^{-T}α + (k − <α, L^{-1} t>)
            let img = mat_vec(&inv_t, g.root(i));
            let j = g
                .index_of(&img)
                .ok_or_else(|| Error::Affine(format!("gradient {} is not sent to a gradient", fmt_qvec(g.root(i)))))?;
            let shift = -crate::rational::dot(g.root(i), &back);
            let (gi, gj) = (s.level(i), s.level(j));
            if gi.period != gj.period || !gj.contains(gi.offset + shift) {
                return Err(Error::Affine(format!(
                    "levels of gradient {} are not carried to levels of {}",
                    fmt_qvec(g.root(i)),
                    fmt_qvec(g.root(j))
                )));
            }
            perm.push(j);
        }
        Ok(perm)
    }
}

/// `w = t_τ ∘ p` where `p` fixes the special point and has derivative `derivative`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedAffineElement {
    pub derivative: QMat,
    /// Word in the simple reflections of the gradient system when the
    /// derivative acts on the roots as a Weyl element.
    pub word: Option<Vec<usize>>,
    pub translation: QVec,
}

impl ExtendedAffineElement {
    /// Rebuilds the affine map about `x_s`.
    pub fn recompose(&self, x_s: &[Q]) -> AffineMap {
        let lin = mat_vec(&self.derivative, x_s);
        let translation = add(&sub(x_s, &lin), &self.translation);
        AffineMap { linear: self.derivative.clone(), translation }
    }
}

pub fn split_at_special_point(s: &AffineRootSystem, x_s: &[Q], w: &AffineMap) -> Result<ExtendedAffineElement> {
    if !is_special_point(s, x_s) {
        return Err(Error::Affine(format!("{} is not a special point", fmt_qvec(x_s))));
    }
    w.normalizes(s)?;
    let char_action = transpose(&inverse(&w.linear).expect("checked invertible"));
    let word = weyl_word(s.gradients(), &char_action);
    Ok(ExtendedAffineElement { derivative: w.linear.clone(), word, translation: sub(&w.apply(x_s), x_s) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;

    fn sl2() -> AffineRootSystem {
        AffineRootSystem::from_split(&RootDatum::sl2())
    }

    #[test]
    fn translation_by_coroot() {
        let s = sl2();
        let e = split_at_special_point(&s, &[q(0)], &AffineMap::translation(vec![q(1)])).unwrap();
        assert_eq!(e.derivative, identity(1));
        assert_eq!(e.word, Some(vec![]));
        assert_eq!(e.translation, vec![q(1)]);
    }

    #[test]
    fn reflection_in_wall_at_half() {
        let s = sl2();
        // -α + 1 vanishes at x = 1/2
        let r = AffineMap::reflection(&s, 1, q(1));
        assert_eq!(r.apply(&[q(0)]), vec![q(1)]);
        let e = split_at_special_point(&s, &[q(0)], &r).unwrap();
        assert_eq!(e.derivative, vec![vec![q(-1)]]);
        assert_eq!(e.word, Some(vec![0]));
        assert_eq!(e.translation, vec![q(1)]);
        assert_eq!(e.recompose(&[q(0)]), r);
    }

    #[test]
    fn identity_and_errors() {
        let s = sl2();
        let e = split_at_special_point(&s, &[q(0)], &AffineMap::identity(1)).unwrap();
        assert_eq!(e.translation, vec![q(0)]);
        let shift = AffineMap::translation(vec![crate::rational::qr(1, 4)]);
        assert!(split_at_special_point(&s, &[q(0)], &shift).is_err());
        let quarter = vec![crate::rational::qr(1, 4)];
        assert!(split_at_special_point(&s, &quarter, &AffineMap::identity(1)).is_err());
    }
}
