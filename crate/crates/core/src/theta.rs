//! θ-orthogonal subsystems, their normalization, and the root datum of `G_θ`
//! with its twisted Frobenius action.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::affine::{
    restrict_to_levi, split_at_special_point, AffineMap, AffineRootSystem, ApartmentSubspace, ExtendedAffineElement,
    LevelSet, WallFamily,
};
use crate::error::{Error, Result};
use crate::lattice::RationalLattice;
use crate::rational::{
    dot, fmt_q, fmt_qvec, frac, int_to_qmat, inverse, mat_mul, mat_vec, q, qmat_to_int, qvec_to_int, rank, scale,
    solve, sub, transpose, QMat, QVec, Q,
};
use crate::rootdata::{descend, validate_root_datum, FrobeniusAction, RootDatum, RootSystem};

/// Dual parameter `s ∈ X^*(T) ⊗ Q/Z` of a depth-zero character, stored with
/// entries in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaDatum {
    pub s: QVec,
    pub frobenius: FrobeniusAction,
}

impl ThetaDatum {
    pub fn new(s: QVec, frobenius: FrobeniusAction) -> Result<Self> {
        if frobenius.matrix.len() != s.len() {
            return Err(Error::Theta("s and the Frobenius matrix have different sizes".into()));
        }
        let s: QVec = s.into_iter().map(frac).collect();
        let moved = frobenius.apply_q(&s);
        if let Some(i) = (0..s.len()).find(|&i| !(moved[i] - s[i]).is_integer()) {
            return Err(Error::Theta(format!(
                "s = {} is not Frobenius-stable modulo 1 (coordinate {i})",
                fmt_qvec(&s)
            )));
        }
        Ok(ThetaDatum { s, frobenius })
    }

    pub fn trivial(rank: usize) -> Self {
        ThetaDatum { s: vec![q(0); rank], frobenius: FrobeniusAction::identity(rank) }
    }

    pub fn is_orthogonal(&self, coroot: &[Q]) -> bool {
        dot(&self.s, coroot).is_integer()
    }
}

/// `Φ_θ = {α : <s, α∨> ∈ Z}`.
pub fn theta_root_subsystem(d: &RootDatum, t: &ThetaDatum) -> Vec<usize> {
    let sys = d.system();
    (0..sys.len()).filter(|&i| t.is_orthogonal(sys.coroot(i))).collect()
}

pub fn theta_affine_subsystem(s: &AffineRootSystem, phi_theta: &[usize]) -> AffineRootSystem {
    s.restrict(phi_theta)
}

/// Smallest positive element of a progression.
fn least_positive(l: LevelSet) -> Q {
    if l.offset.is_zero() {
        l.period
    } else {
        l.offset
    }
}

/// `r_a` for the affine root with gradient `i` vanishing at `x_s`.
pub fn scale_factor(s: &AffineRootSystem, i: usize, x_s: &[Q]) -> Result<Q> {
    let g = s.gradients();
    let k0 = s
        .vanishing_level(i, x_s)
        .ok_or_else(|| Error::Normalization(format!("no affine root with gradient {i} vanishes at x_s")))?;
    let alpha = g.root(i);
    // a + r: same gradient
    let mut best = s.level(i).period;
    // 2(a + r) = 2α + 2k0 + 2r
    if let Some(j) = g.index_of(&scale(q(2), alpha)) {
        let lj = s.level(j);
        let cand = least_positive(LevelSet::new((lj.offset - q(2) * k0) / q(2), lj.period / q(2)));
        best = best.min(cand);
    }
    // (a + r)/2 = α/2 + (k0 + r)/2
    if let Some(j) = g.index_of(&scale(Q::new(1, 2), alpha)) {
        let lj = s.level(j);
        let cand = least_positive(LevelSet::new(q(2) * lj.offset - k0, q(2) * lj.period));
        best = best.min(cand);
    }
    if !best.is_positive() {
        return Err(Error::Normalization(format!("no positive r_a for gradient {i}")));
    }
    Ok(best)
}

/// The normalized root system of a θ-affine subsystem at a special point.
#[derive(Debug, Clone)]
pub struct NormalizedSystem {
    pub base: AffineRootSystem,
    pub x_s: QVec,
    /// `r_a` for each base gradient (all vanish at the special point).
    pub scale: Vec<Q>,
    /// `Φ_aff^norm`: gradients `α/r_a`, coroots `r_a α∨`, levels `−<α/r_a, x_s> + Z`.
    pub normalized: AffineRootSystem,
    /// Base gradient index ↦ normalized gradient index.
    pub norm_of: Vec<usize>,
}

impl NormalizedSystem {
    pub fn gradients(&self) -> &RootSystem {
        self.normalized.gradients()
    }

    /// Two-sided scalar-multiple agreement between the base affine roots and
    /// `Φ_aff^norm`, over affine roots with `|level| ≤ window`.
    pub fn scalar_agreement(&self, window: i64) -> bool {
        let (lo, hi) = (q(-window), q(window));
        let has_multiple = |from: &AffineRootSystem, to: &AffineRootSystem| -> bool {
            (0..from.gradients().len()).all(|i| {
                let alpha = from.gradients().root(i);
                from.level(i).values_in(lo, hi).into_iter().all(|k| {
                    (0..to.gradients().len()).any(|j| {
                        let beta = to.gradients().root(j);
                        let Some(c) = proportionality(alpha, beta) else {
                            return false;
                        };
                        to.level(j).contains(k * c)
                    })
                })
            })
        };
        has_multiple(&self.base, &self.normalized) && has_multiple(&self.normalized, &self.base)
    }

    /// Permutation of normalized gradients induced by a Frobenius action.
    pub fn frobenius_permutation(&self, f: &FrobeniusAction) -> Result<Vec<usize>> {
        permutation_of(self.gradients(), f)
    }
}

/// Root permutation induced by `f` on a rational system in the original coordinates.
pub fn permutation_of(sys: &RootSystem, f: &FrobeniusAction) -> Result<Vec<usize>> {
    (0..sys.len())
        .map(|i| {
            sys.index_of(&f.apply_q(sys.root(i)))
                .ok_or_else(|| Error::InvalidFrobenius(format!("image of {} is not a root", fmt_qvec(sys.root(i)))))
        })
        .collect()
}

/// `c` with `b = c a`, if the vectors are proportional.
fn proportionality(a: &[Q], b: &[Q]) -> Option<Q> {
    let k = a.iter().position(|x| !x.is_zero())?;
    let c = b[k] / a[k];
    (a.iter().zip(b).all(|(x, y)| c * x == *y)).then_some(c)
}

pub fn normalize(s_theta: &AffineRootSystem, x_s: &[Q]) -> Result<NormalizedSystem> {
    if !crate::affine::is_special_point(s_theta, x_s) {
        return Err(Error::Normalization(format!("{} is not a special point", fmt_qvec(x_s))));
    }
    let g = s_theta.gradients();
    let scales: Vec<Q> = (0..g.len()).map(|i| scale_factor(s_theta, i, x_s)).collect::<Result<_>>()?;
    let mut roots: Vec<QVec> = Vec::new();
    let mut coroots: Vec<QVec> = Vec::new();
    let mut index: HashMap<QVec, usize> = HashMap::new();
    let mut norm_of = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let r = scales[i];
        let root = scale(r.recip(), g.root(i));
        let coroot = scale(r, g.coroot(i));
        match index.get(&root) {
            Some(&j) => {
                if coroots[j] != coroot {
                    return Err(Error::Normalization(format!(
                        "normalized root {} receives two different coroots",
                        fmt_qvec(&root)
                    )));
                }
                norm_of.push(j);
            }
            None => {
                index.insert(root.clone(), roots.len());
                norm_of.push(roots.len());
                roots.push(root);
                coroots.push(coroot);
            }
        }
    }
    let levels = roots.iter().map(|b| LevelSet::new(-dot(b, x_s), q(1))).collect();
    let sys = RootSystem::new(roots, coroots);
    sys.check_axioms().map_err(Error::Normalization)?;
    if !sys.is_reduced() {
        return Err(Error::Normalization("normalized system is not reduced".into()));
    }
    let normalized = AffineRootSystem::new(s_theta.rank(), sys, levels)?;
    Ok(NormalizedSystem { base: s_theta.clone(), x_s: x_s.to_vec(), scale: scales, normalized, norm_of })
}

/// Chooses a special point: the origin when it is special, otherwise the
/// point in the span of the coroots whose simple-root values are
/// lexicographically smallest in `[0, 2P)`, `P` the largest level period.
pub fn choose_special_point(s: &AffineRootSystem) -> Result<QVec> {
    let n = s.rank();
    let origin = vec![q(0); n];
    if crate::affine::is_special_point(s, &origin) {
        return Ok(origin);
    }
    let g = s.gradients();
    let simple = g.simple_roots();
    let max_period = s.levels().iter().map(|l| l.period).max().unwrap_or(q(1));
    let bound = q(2) * max_period;
    // candidate values of <δ_i, x> are elements of -Γ_{δ_i} in [0, 2P)
    let options: Vec<Vec<Q>> = simple
        .iter()
        .map(|&d| s.level(d).negate().values_in(q(0), bound).into_iter().filter(|v| *v < bound).collect())
        .collect();
    let cartan: QMat = simple.iter().map(|&a| simple.iter().map(|&b| g.pairing(a, b)).collect()).collect();
    let mut best: Option<(QVec, QVec)> = None;
    let mut idx = vec![0usize; simple.len()];
    if options.iter().any(|o| o.is_empty()) {
        return Err(Error::Normalization("no special point in the search window".into()));
    }
    loop {
        let v: QVec = idx.iter().zip(&options).map(|(&k, o)| o[k]).collect();
        // x = Σ y_j δ_j∨ with Σ_j y_j <δ_i, δ_j∨> = v_i
        let y = solve(&cartan, &v).expect("Cartan matrix is invertible");
        let x = simple
            .iter()
            .zip(&y)
            .fold(vec![q(0); n], |acc, (&d, &c)| crate::rational::add(&acc, &scale(c, g.coroot(d))));
        if crate::affine::is_special_point(s, &x) && best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, x));
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best
                    .map(|(_, x)| x)
                    .ok_or_else(|| Error::Normalization("no special point in the search window".into()));
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The root datum of `G_θ` with its Frobenius action and pinning basis.
#[derive(Debug, Clone)]
pub struct ThetaGroupDatum {
    pub datum: RootDatum,
    pub frobenius: FrobeniusAction,
    /// Basis of `X_*(T)_θ` as rows, in original cocharacter coordinates.
    pub cocharacter_basis: Vec<QVec>,
    /// Basis of `X^*(T)_θ` as rows, in original character coordinates.
    pub character_basis: Vec<QVec>,
    /// Simple roots `Δ` (indices shared with the normalized system).
    pub delta: Vec<usize>,
    /// `w_γ` split at the special point.
    pub w_gamma: ExtendedAffineElement,
    /// Word for `D(w_γ)` in the simple reflections of `Δ`.
    pub w_gamma_word: Vec<usize>,
    /// `[X_*(T)_θ : X_*(T)]`.
    pub index: Q,
}

pub fn build_theta_datum(d: &RootDatum, n: &NormalizedSystem, f: &FrobeniusAction) -> Result<ThetaGroupDatum> {
    let rank_n = d.rank();
    f.validate(d)?;
    let sys = n.gradients();
    // Frobenius-stability of the adjoined coweights
    for i in 0..sys.len() {
        let img = f.apply_cochar_q(sys.coroot(i));
        if !sys.coroots().contains(&img) {
            return Err(Error::Theta(format!(
                "coweight {} is not sent into the adjoined set by Frobenius",
                fmt_qvec(sys.coroot(i))
            )));
        }
    }
    let lattice = RationalLattice::saturate(rank_n, sys.coroots());
    let dual = lattice.dual();
    let bcol = lattice.column_matrix();
    let mut roots = Vec::with_capacity(sys.len());
    let mut coroots = Vec::with_capacity(sys.len());
    for i in 0..sys.len() {
        let beta = sys.root(i);
        if qvec_to_int(beta).is_none() {
            return Err(Error::Theta(format!("normalized root {} is not a character of T", fmt_qvec(beta))));
        }
        let coords: QVec = lattice.basis.iter().map(|b| dot(beta, b)).collect();
        let root = qvec_to_int(&coords)
            .ok_or_else(|| Error::Theta(format!("normalized root {} is not integral on X_*(T)_θ", fmt_qvec(beta))))?;
        let co = lattice
            .coordinates(sys.coroot(i))
            .ok_or_else(|| Error::Theta("coroot outside the saturated lattice".into()))?;
        roots.push(root);
        coroots.push(co);
    }
    let datum = validate_root_datum(rank_n, roots, coroots)?;

    // D(w_γ)^{-1} ∘ γ on characters, in original coordinates
    let gamma = int_to_qmat(&f.matrix);
    let (word, rest) =
        descend(sys, &gamma).ok_or_else(|| Error::Theta("Frobenius does not permute the normalized roots".into()))?;
    let delta = sys.simple_roots();
    let moved: Vec<usize> =
        delta.iter().map(|&a| sys.index_of(&mat_vec(&rest, sys.root(a))).expect("rest permutes roots")).collect();
    let mut sorted = moved.clone();
    sorted.sort();
    let mut dsorted = delta.clone();
    dsorted.sort();
    if sorted != dsorted {
        return Err(Error::Theta("twisted Frobenius does not preserve Δ".into()));
    }
    // new character coordinates a ↦ v = B^{-T} a; matrix B^T · rest · B^{-T}
    let binv_t = transpose(&inverse(&bcol).expect("lattice basis invertible"));
    let new_matrix = mat_mul(&mat_mul(&transpose(&bcol), &rest), &binv_t);
    let new_matrix =
        qmat_to_int(&new_matrix).ok_or_else(|| Error::Theta("twisted Frobenius is not integral on X^*(T)_θ".into()))?;
    let frobenius = FrobeniusAction::from_matrix(new_matrix)?;
    frobenius.validate(&datum)?;

    // w_γ: derivative D(w) acting on cocharacters, sending x_s to γ(x_s)
    let w_char = mat_mul(&gamma, &inverse(&rest).expect("invertible"));
    let w_cochar = transpose(&inverse(&w_char).expect("invertible"));
    let gx = f.apply_cochar_q(&n.x_s);
    let fixed = mat_vec(&w_cochar, &n.x_s);
    let w_map = AffineMap { linear: w_cochar, translation: sub(&gx, &fixed) };
    let w_gamma = split_at_special_point(&n.normalized, &n.x_s, &w_map)
        .map_err(|e| Error::Theta(format!("w_γ is not in the extended affine Weyl group: {e}")))?;
    let index = lattice.index_over_standard();
    Ok(ThetaGroupDatum {
        datum,
        frobenius,
        cocharacter_basis: lattice.basis.clone(),
        character_basis: dual.basis,
        delta,
        w_gamma,
        w_gamma_word: word,
        index,
    })
}

impl ThetaGroupDatum {
    /// Whether the Frobenius action on the new datum permutes `Δ`.
    pub fn frobenius_preserves_delta(&self) -> bool {
        let perm = self.frobenius.root_permutation(&self.datum);
        self.delta.iter().all(|i| self.delta.contains(&perm[*i]))
    }
}

/// Roots of `G_θ` in the rational span of the Levi roots of `M`.
pub fn build_theta_levi(n: &NormalizedSystem, d: &RootDatum, levi: &[usize]) -> Vec<usize> {
    let span: Vec<QVec> = levi.iter().map(|&i| crate::rational::to_qvec(&d.roots()[i])).collect();
    let r = rank(&span);
    let sys = n.gradients();
    (0..sys.len())
        .filter(|&i| {
            let mut v = span.clone();
            v.push(sys.root(i).clone());
            rank(&v) == r
        })
        .collect()
}

/// `𝔥_θ` with the certificate that each θ-wall family is covered by walls of `𝔥`.
#[derive(Debug, Clone)]
pub struct ThetaWalls {
    pub families: Vec<WallFamily>,
    /// For each θ family, the index of the `𝔥` family with the same gradient.
    pub covering: Vec<usize>,
}

/// Checks `𝔥_θ ⊆ 𝔥` family by family over one common period of the levels.
pub fn theta_walls(g_walls: &[WallFamily], theta_families: Vec<WallFamily>) -> Result<ThetaWalls> {
    let mut covering = Vec::with_capacity(theta_families.len());
    for tf in &theta_families {
        let Some(gi) = g_walls.iter().position(|g| g.gradient == tf.gradient) else {
            return Err(Error::Certificate(format!(
                "θ-wall direction {} does not occur among the walls of G",
                fmt_qvec(&tf.gradient)
            )));
        };
        let gf = &g_walls[gi];
        let period = tf.levels.iter().chain(&gf.levels).fold(Q::one(), |acc, l| rational_lcm(acc, l.period));
        for l in &tf.levels {
            for k in l.values_in(q(0), period) {
                if k == period {
                    continue;
                }
                if !gf.levels.iter().any(|m| m.contains(k)) {
                    return Err(Error::Certificate(format!(
                        "θ-wall {}·c + {} = 0 is not a wall of G",
                        fmt_qvec(&tf.gradient),
                        fmt_q(&k)
                    )));
                }
            }
        }
        covering.push(gi);
    }
    Ok(ThetaWalls { families: theta_families, covering })
}

fn rational_lcm(a: Q, b: Q) -> Q {
    use num_integer::Integer;
    let num = (a.numer() * b.denom()).lcm(&(b.numer() * a.denom()));
    Q::new(num, a.denom() * b.denom())
}

/// The wall families of `G_θ` on the Levi slice.
pub fn theta_families(n: &NormalizedSystem, theta_levi: &[usize], sub: &ApartmentSubspace) -> Vec<WallFamily> {
    restrict_to_levi(&n.normalized, theta_levi, sub)
}
