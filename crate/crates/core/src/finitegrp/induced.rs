//! Modules induced from one-dimensional characters of triangular subgroups,
//! their intertwining operators and q-parameters.

use std::collections::HashMap;

use num_traits::{One, Signed};
use rayon::prelude::*;

use super::cyclotomic::{self, Cyc, CycMat, CyclotomicField, ExtRank, QuadraticExt};
use super::group::{DoubleCoset, FiniteMatrixGroup, Subgroup};
use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// `θ(diag(t_1, …, t_n)) = ζ^{Σ a_i log t_i}` with `ζ` a primitive `(q−1)`-th
/// root of unity; inflated to triangular subgroups through the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusCharacter {
    pub exponents: Vec<i64>,
}

impl TorusCharacter {
    pub fn trivial(n: usize) -> Self {
        TorusCharacter { exponents: vec![0; n] }
    }

    pub fn new(exponents: Vec<i64>) -> Self {
        TorusCharacter { exponents }
    }

    /// Every character of the diagonal torus of `GL_n(F_q)`.
    pub fn all(n: usize, q: usize) -> Vec<TorusCharacter> {
        let m = (q - 1) as i64;
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|v: Vec<i64>| (0..m).map(move |a| [v.clone(), vec![a]].concat())).collect();
        }
        out.into_iter().map(TorusCharacter::new).collect()
    }

    fn is_trivial_mod(&self, m: i64) -> bool {
        self.exponents.iter().all(|a| a.rem_euclid(m) == 0)
    }
}

/// Exponent of `θ(x)` for `x` triangular, modulo `q − 1`.
fn char_exp(g: &FiniteMatrixGroup, theta: &TorusCharacter, x: usize) -> i64 {
    let m = (g.q() - 1) as i64;
    if m == 1 {
        return 0;
    }
    (0..g.n).map(|r| theta.exponents[r] * g.field.log(g.entry(x, r, r)) as i64).sum::<i64>().rem_euclid(m)
}

fn check_inducing(g: &FiniteMatrixGroup, p: &Subgroup, theta: &TorusCharacter) -> Result<()> {
    if theta.exponents.len() != g.n {
        return Err(Error::Group(format!("character has {} exponents for degree {}", theta.exponents.len(), g.n)));
    }
    let m = (g.q() - 1) as i64;
    let triangular =
        p.members.iter().all(|&x| g.is_upper_triangular(x)) || p.members.iter().all(|&x| g.is_lower_triangular(x));
    if !triangular && !theta.is_trivial_mod(m) {
        return Err(Error::Group(format!(
            "a nontrivial torus character only inflates to triangular subgroups, not {}",
            p.name
        )));
    }
    Ok(())
}

/// Does the double coset `P w P` carry a nonzero θ-intertwiner?
fn supports_intertwiner(g: &FiniteMatrixGroup, p: &Subgroup, theta: &TorusCharacter, w: usize) -> bool {
    let wi = g.inv(w);
    p.members.par_iter().all(|&b| {
        let c = g.mul(g.mul(wi, b), w);
        !p.contains(c) || char_exp(g, theta, b) == char_exp(g, theta, c)
    })
}

#[derive(Debug, Clone)]
pub struct InducedModule {
    pub subgroup: String,
    pub character: TorusCharacter,
    /// Representatives `g_i` of `P\G`; basis vector `f_i` is supported on `P g_i`.
    pub reps: Vec<usize>,
    coset_of: Vec<u32>,
    pub field: CyclotomicField,
}

impl InducedModule {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Matrix of right translation by `h`.
    pub fn action(&self, g: &FiniteMatrixGroup, h: usize) -> CycMat {
        let k = &self.field;
        let n = self.dim();
        let mut out = vec![vec![k.zero(); n]; n];
        for (i, &gi) in self.reps.iter().enumerate() {
            let x = g.mul(gi, h);
            let j = self.coset_of[x] as usize;
            let b = g.mul(x, g.inv(self.reps[j]));
            out[i][j] = k.zeta_pow(char_exp(g, &self.character, b));
        }
        out
    }
}

pub fn induced_module(g: &FiniteMatrixGroup, p: &Subgroup, theta: &TorusCharacter) -> Result<InducedModule> {
    check_inducing(g, p, theta)?;
    let reps = g.right_coset_reps(p);
    let mut coset_of = vec![0u32; g.order()];
    for (i, &r) in reps.iter().enumerate() {
        for &b in &p.members {
            coset_of[g.mul(b, r)] = i as u32;
        }
    }
    Ok(InducedModule {
        subgroup: p.name.clone(),
        character: theta.clone(),
        reps,
        coset_of,
        field: CyclotomicField::new(g.q() - 1),
    })
}

/// `Ind_B^G θ` for the upper-triangular Borel.
pub fn principal_series(g: &FiniteMatrixGroup, theta: &TorusCharacter) -> Result<InducedModule> {
    induced_module(g, g.subgroup("B")?, theta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QParameterResult {
    pub end_dim: usize,
    /// `[G : P]`.
    pub index: usize,
    /// Constituent dimensions, ascending, when the length is two.
    pub dims: Option<(u64, u64)>,
    pub q_value: Q,
    /// `(a, b)` with `T² = aT + b`.
    pub relation: Option<(Cyc, Cyc)>,
    pub conductor: usize,
}

impl QParameterResult {
    /// The relation coefficients when both are rational.
    pub fn relation_rational(&self) -> Option<(Q, Q)> {
        let (a, b) = self.relation.as_ref()?;
        let k = CyclotomicField::new(self.conductor);
        Some((k.as_rational(a)?, k.as_rational(b)?))
    }
}

pub fn q_parameter(g: &FiniteMatrixGroup, p: &Subgroup, theta: &TorusCharacter) -> Result<QParameterResult> {
    check_inducing(g, p, theta)?;
    let cosets = g.double_cosets(p, p);
    let supporting: Vec<DoubleCoset> =
        cosets.iter().copied().filter(|d| supports_intertwiner(g, p, theta, d.rep)).collect();
    let module = induced_module(g, p, theta)?;
    let n = module.dim();
    let k = module.field.clone();
    let base = QParameterResult {
        end_dim: supporting.len(),
        index: n,
        dims: None,
        q_value: Q::one(),
        relation: None,
        conductor: k.conductor(),
    };
    match supporting.len() {
        1 => return Ok(base),
        2 => {}
        d => {
            return Err(Error::Group(format!(
                "endomorphism algebra has dimension {d}; only length-two situations are handled"
            )))
        }
    }
    let w = supporting.iter().find(|d| !p.contains(d.rep)).expect("one supporting coset is P itself").rep;
    let orbit = g.double_coset_orbit(p, w, p);
    let phi: HashMap<usize, i64> =
        orbit.iter().map(|(&x, &(b1, b2))| (x, char_exp(g, theta, b1) + char_exp(g, theta, b2))).collect();
    let a_mat: CycMat = module
        .reps
        .iter()
        .map(|&gi| {
            module
                .reps
                .iter()
                .map(|&gj| match phi.get(&g.mul(gi, g.inv(gj))) {
                    Some(&e) => k.zeta_pow(e),
                    None => k.zero(),
                })
                .collect()
        })
        .collect();
    let probes: Vec<usize> = (0..6).map(|t| t * g.order() / 6).chain([w]).collect();
    for h in probes {
        let r = module.action(g, h);
        if cyclotomic::mat_mul(&k, &a_mat, &r) != cyclotomic::mat_mul(&k, &r, &a_mat) {
            return Err(Error::Group("intertwiner does not commute with the group action".into()));
        }
    }
    let (a, b) = solve_quadratic(&k, &a_mat)?;
    if k.is_zero(&b) {
        return Err(Error::Group("intertwining operator is not invertible".into()));
    }
    let by_relation = dims_by_relation(&k, &a_mat, &a, &b)?;
    let by_eigen = dims_by_eigenspaces(&k, &a_mat, &a, &b)?;
    if by_relation != by_eigen {
        return Err(Error::Group(format!(
            "constituent dimensions disagree: relation route {by_relation:?}, eigenspace route {by_eigen:?}"
        )));
    }
    let (d1, d2) = by_relation;
    if (d1 + d2) as usize != n {
        return Err(Error::Group(format!("constituent dimensions {d1} + {d2} do not sum to {n}")));
    }
    Ok(QParameterResult { dims: Some((d1, d2)), q_value: Q::new(d2 as i64, d1 as i64), relation: Some((a, b)), ..base })
}

/// `(a, b)` with `A² = aA + bI`, read off one off-diagonal entry and checked.
fn solve_quadratic(k: &CyclotomicField, a_mat: &CycMat) -> Result<(Cyc, Cyc)> {
    let n = a_mat.len();
    let sq = cyclotomic::mat_mul(k, a_mat, a_mat);
    let (i, j) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| i != j && !k.is_zero(&a_mat[i][j]))
        .ok_or_else(|| Error::Group("intertwiner has no off-diagonal support".into()))?;
    let a = k.div(&sq[i][j], &a_mat[i][j])?;
    let b = k.sub(&sq[0][0], &k.mul(&a, &a_mat[0][0]));
    for r in 0..n {
        for c in 0..n {
            let mut rhs = k.mul(&a, &a_mat[r][c]);
            if r == c {
                rhs = k.add(&rhs, &b);
            }
            if rhs != sq[r][c] {
                return Err(Error::Group("intertwiner satisfies no quadratic relation".into()));
            }
        }
    }
    Ok((a, b))
}

/// From `tr A = d₁λ₁ + d₂λ₂`: `(d₁ − d₂)² = (2 tr A − N a)² / (a² + 4b)`.
fn dims_by_relation(k: &CyclotomicField, a_mat: &CycMat, a: &Cyc, b: &Cyc) -> Result<(u64, u64)> {
    let n = a_mat.len() as i64;
    let tr = (0..a_mat.len()).fold(k.zero(), |acc, i| k.add(&acc, &a_mat[i][i]));
    let disc = k.add(&k.mul(a, a), &k.scale(q(4), b));
    if k.is_zero(&disc) {
        return Err(Error::Group("intertwiner has a repeated eigenvalue".into()));
    }
    let num = k.sub(&k.scale(q(2), &tr), &k.scale(q(n), a));
    let sq = k
        .as_rational(&k.div(&k.mul(&num, &num), &disc)?)
        .ok_or_else(|| Error::Group("multiplicity difference is not rational".into()))?;
    if sq.is_negative() || !sq.is_integer() {
        return Err(Error::Group("multiplicity difference is not an integer".into()));
    }
    let s2 = sq.to_integer();
    let s = (s2 as f64).sqrt().round() as i64;
    let s = (s - 1..=s + 1)
        .find(|x| *x >= 0 && x * x == s2)
        .ok_or_else(|| Error::Group("multiplicity difference is not an integer".into()))?;
    if (n - s) % 2 != 0 || s > n {
        return Err(Error::Group("multiplicities have the wrong parity".into()));
    }
    Ok((((n - s) / 2) as u64, ((n + s) / 2) as u64))
}

/// `N − rank(A − λI)` for both roots of `x² − ax − b`.
fn dims_by_eigenspaces(k: &CyclotomicField, a_mat: &CycMat, a: &Cyc, b: &Cyc) -> Result<(u64, u64)> {
    let n = a_mat.len();
    let ext = QuadraticExt { base: k, a: a.clone(), b: b.clone() };
    let (d1, d2) = match ext.rank_minus_lambda(a_mat) {
        // Galois-conjugate eigenvalues have equal multiplicity
        ExtRank::Rank(r) => (n - r, n - r),
        ExtRank::Split(l1) => {
            let l2 = k.sub(a, &l1);
            let shifted = |l: &Cyc| -> CycMat {
                a_mat
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter().enumerate().map(|(j, x)| if i == j { k.sub(x, l) } else { x.clone() }).collect()
                    })
                    .collect()
            };
            (n - cyclotomic::rank(k, &shifted(&l1)), n - cyclotomic::rank(k, &shifted(&l2)))
        }
    };
    if d1 + d2 != n {
        return Err(Error::Group(format!("eigenspaces of dimensions {d1}, {d2} do not span {n}")));
    }
    Ok((d1.min(d2) as u64, d1.max(d2) as u64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub big: QParameterResult,
    pub small: QParameterResult,
    pub equal: bool,
}

/// Compares q-parameters of `Ind_P^G θ` and `Ind_{P∩H}^H θ` for `H ⊴ G`
/// with abelian quotient and `G = P H`.
pub fn check_transfer(
    big: &FiniteMatrixGroup,
    small: &FiniteMatrixGroup,
    p_big: &Subgroup,
    theta: &TorusCharacter,
) -> Result<TransferReport> {
    if big.n != small.n || big.q() != small.q() {
        return Err(Error::Group("groups act on different spaces".into()));
    }
    let embed: Vec<usize> = (0..small.order())
        .map(|i| {
            big.index_of(small.element(i))
                .ok_or_else(|| Error::Group("the small group is not contained in the big one".into()))
        })
        .collect::<Result<_>>()?;
    let mut mask = vec![false; big.order()];
    for &x in &embed {
        mask[x] = true;
    }
    let normal_sub = Subgroup { name: "H".into(), members: (0..big.order()).filter(|&i| mask[i]).collect(), mask };
    let gens = generating_set(big, &(0..big.order()).collect::<Vec<_>>());
    let normal = gens.par_iter().all(|&x| {
        let xi = big.inv(x);
        embed.iter().all(|&s| normal_sub.contains(big.mul(big.mul(x, s), xi)))
    });
    if !normal {
        return Err(Error::Group("subgroup is not normal".into()));
    }
    let reps = big.right_coset_reps(&normal_sub);
    for &x in &reps {
        for &y in &reps {
            let c = big.mul(big.mul(x, y), big.inv(big.mul(y, x)));
            if !normal_sub.contains(c) {
                return Err(Error::Group("quotient is not abelian".into()));
            }
        }
    }
    let inter = big.intersect("P∩H", p_big, &normal_sub);
    if p_big.order() * normal_sub.order() != big.order() * inter.order() {
        return Err(Error::Group("the inducing subgroup and the normal subgroup do not generate".into()));
    }
    let mut small_mask = vec![false; small.order()];
    for (i, &x) in embed.iter().enumerate() {
        small_mask[i] = p_big.contains(x);
    }
    let p_small = Subgroup {
        name: format!("{}∩H", p_big.name),
        members: (0..small.order()).filter(|&i| small_mask[i]).collect(),
        mask: small_mask,
    };
    let big_res = q_parameter(big, p_big, theta)?;
    let small_res = q_parameter(small, &p_small, theta)?;
    let equal = big_res.q_value == small_res.q_value;
    Ok(TransferReport { big: big_res, small: small_res, equal })
}

/// Greedy generating set of the subgroup with the given members.
pub fn generating_set(g: &FiniteMatrixGroup, members: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.order()];
    inside[g.identity()] = true;
    let mut span = vec![g.identity()];
    let mut gens = Vec::new();
    for &x in members {
        if inside[x] {
            continue;
        }
        gens.push(x);
        let mut frontier = span.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &y in &frontier {
                for &s in &gens {
                    let z = g.mul(y, s);
                    if !inside[z] {
                        inside[z] = true;
                        next.push(z);
                    }
                }
            }
            span.extend(&next);
            frontier = next;
        }
    }
    gens
}
