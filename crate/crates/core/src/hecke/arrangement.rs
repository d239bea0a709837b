//! Coxeter presentations read off a wall arrangement: the walls of the
//! chamber containing a base point and their pairwise dihedral orders.

use num_traits::{Signed, Zero};

use super::{CoxeterPresentation, OmegaGroup};
use crate::affine::{Wall, WallFamily};
use crate::error::{Error, Result};
use crate::rational::{dot, fmt_qvec, rank, solve, QVec, Q};

#[derive(Debug, Clone)]
pub struct ArrangementAlgebra {
    pub cox: CoxeterPresentation,
    /// Simple walls, position-aligned with the generators.
    pub walls: Vec<Wall>,
    pub omega: OmegaGroup,
    pub type_label: String,
}

/// A chamber constraint `h·t + c > 0` in coordinates along the gradient span.
struct Constraint {
    h: QVec,
    c: Q,
    wall: Wall,
}

pub fn from_arrangement(
    families: &[WallFamily],
    x0: &[Q],
    omega_perms: Option<Vec<Vec<usize>>>,
    mu: Option<Vec<Vec<Q>>>,
) -> Result<ArrangementAlgebra> {
    let walls = chamber_walls(families, x0)?;
    let n = walls.len();
    let mut m = vec![vec![1u32; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = dihedral_order(families, &walls[i], &walls[j], x0)?;
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    let cox = CoxeterPresentation::new(m)
        .map_err(|e| Error::Hecke(format!("arrangement is not a discrete reflection arrangement: {e}")))?;
    let omega = match omega_perms {
        Some(p) => OmegaGroup::new(&cox, p, mu)?,
        None => OmegaGroup::trivial(n),
    };
    let type_label = coxeter_type(cox.matrix());
    Ok(ArrangementAlgebra { cox, walls, omega, type_label })
}

/// Walls supporting a facet of the chamber containing `x0`, sorted.
pub fn chamber_walls(families: &[WallFamily], x0: &[Q]) -> Result<Vec<Wall>> {
    if let Some(f) = families.iter().find(|f| f.is_wall_point(x0)) {
        return Err(Error::NotGeneric(format!(
            "base point {} lies on a wall with gradient {}",
            fmt_qvec(x0),
            fmt_qvec(&f.gradient)
        )));
    }
    let grads: Vec<QVec> = families.iter().map(|f| f.gradient.clone()).collect();
    let k = rank(&grads);
    // independent gradients as directions of the essential part
    let mut span: Vec<QVec> = Vec::new();
    for g in &grads {
        let mut t = span.clone();
        t.push(g.clone());
        if rank(&t) > span.len() {
            span = t;
        }
    }
    let mut cons = Vec::new();
    for f in families {
        let f0 = dot(&f.gradient, x0);
        let h: QVec = span.iter().map(|v| dot(&f.gradient, v)).collect();
        let above = f.levels.iter().filter_map(|l| l.values_in(-f0, -f0 + l.period).first().copied()).min();
        let below = f.levels.iter().filter_map(|l| l.values_in(-f0 - l.period, -f0).last().copied()).max();
        for level in above.into_iter().chain(below) {
            push_constraint(&mut cons, &h, f0 + level, &f.gradient, level);
        }
    }
    let mut walls: Vec<Wall> = chamber_facets(&cons, k).into_iter().map(|i| cons[i].wall.clone()).collect();
    walls.sort();
    walls.dedup();
    Ok(walls)
}

fn push_constraint(cons: &mut Vec<Constraint>, h: &[Q], value_at_x0: Q, gradient: &[Q], level: Q) {
    // keep the side containing x0: sign(value) · (g·y + level) > 0
    let sign = if value_at_x0.is_positive() { Q::from_integer(1) } else { Q::from_integer(-1) };
    cons.push(Constraint {
        h: h.iter().map(|x| *x * sign).collect(),
        c: value_at_x0 * sign,
        wall: Wall { gradient: gradient.to_vec(), constant: level },
    });
}

/// Indices of constraints that support a facet of the chamber.
fn chamber_facets(cons: &[Constraint], k: usize) -> Vec<usize> {
    if k == 0 {
        return Vec::new();
    }
    // vertices in t-coordinates (t = 0 is x0)
    let mut vertices: Vec<QVec> = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if cons.len() < k {
        return Vec::new();
    }
    loop {
        let a: Vec<QVec> = idx.iter().map(|&i| cons[i].h.clone()).collect();
        if rank(&a) == k {
            let b: QVec = idx.iter().map(|&i| -cons[i].c).collect();
            if let Some(t) = solve(&a, &b) {
                let feasible = cons.iter().all(|c| !(dot(&c.h, &t) + c.c).is_negative());
                if feasible && !vertices.contains(&t) {
                    vertices.push(t);
                }
            }
        }
        // next combination
        let mut p = k;
        loop {
            if p == 0 {
                return (0..cons.len())
                    .filter(|&i| {
                        let on: Vec<&QVec> =
                            vertices.iter().filter(|v| (dot(&cons[i].h, v) + cons[i].c).is_zero()).collect();
                        if on.is_empty() {
                            return false;
                        }
                        let diffs: Vec<QVec> = on
                            .iter()
                            .skip(1)
                            .map(|v| v.iter().zip(on[0].iter()).map(|(a, b)| a - b).collect())
                            .collect();
                        (if diffs.is_empty() { 0 } else { rank(&diffs) }) == k - 1
                    })
                    .collect();
            }
            p -= 1;
            if idx[p] < cons.len() - (k - p) {
                idx[p] += 1;
                for r in p + 1..k {
                    idx[r] = idx[r - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Number of walls through `H1 ∩ H2`, or `0` (for `∞`) when parallel.
fn dihedral_order(families: &[WallFamily], h1: &Wall, h2: &Wall, x0: &[Q]) -> Result<u32> {
    if rank(&[h1.gradient.clone(), h2.gradient.clone()]) < 2 {
        return Ok(0);
    }
    let a = vec![h1.gradient.clone(), h2.gradient.clone()];
    let p = solve(&a, &[-h1.constant, -h2.constant]).expect("independent gradients");
    let mut count = 0u32;
    for f in families {
        let mut t = a.clone();
        t.push(f.gradient.clone());
        if rank(&t) > 2 {
            continue;
        }
        let v = dot(&f.gradient, &p);
        if f.levels.iter().any(|l| l.contains(-v)) {
            count += 1;
        }
    }
    if !matches!(count, 2 | 3 | 4 | 6) {
        return Err(Error::Hecke(format!(
            "walls {} and {} meet with {count} walls through the intersection near {}; the reflection group is not discrete crystallographic",
            h1.describe(),
            h2.describe(),
            fmt_qvec(x0)
        )));
    }
    Ok(count)
}

/// Type label of a Coxeter matrix, components joined by `x`.
pub fn coxeter_type(m: &[Vec<u32>]) -> String {
    let n = m.len();
    if n == 0 {
        return "trivial".into();
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = comps.len();
        let mut members = Vec::new();
        while let Some(x) = stack.pop() {
            members.push(x);
            for y in 0..n {
                if y != x && m[x][y] != 2 && comp[y] == usize::MAX {
                    comp[y] = comps.len();
                    stack.push(y);
                }
            }
        }
        members.sort();
        comps.push(members);
    }
    comps.iter().map(|c| component_type(m, c)).collect::<Vec<_>>().join("x")
}

fn component_type(m: &[Vec<u32>], c: &[usize]) -> String {
    let n = c.len();
    let e = |a: usize, b: usize| m[c[a]][c[b]];
    if n == 1 {
        return "A1".into();
    }
    if n == 2 {
        return match e(0, 1) {
            0 => "~A1".into(),
            3 => "A2".into(),
            4 => "B2".into(),
            6 => "G2".into(),
            k => format!("I2({k})"),
        };
    }
    let nbrs: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| b != a && e(a, b) != 2).collect()).collect();
    let edges: Vec<(usize, usize, u32)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| e(a, b) != 2)
        .map(|(a, b)| (a, b, e(a, b)))
        .collect();
    if edges.iter().any(|x| x.2 == 0) {
        return "?".into();
    }
    let fours: Vec<&(usize, usize, u32)> = edges.iter().filter(|x| x.2 == 4).collect();
    let sixes = edges.iter().filter(|x| x.2 == 6).count();
    let max_deg = nbrs.iter().map(|v| v.len()).max().unwrap_or(0);
    if edges.len() == n && max_deg == 2 && fours.is_empty() && sixes == 0 {
        return format!("~A{}", n - 1);
    }
    if edges.len() != n - 1 {
        return "?".into();
    }
    let leaf = |a: usize| nbrs[a].len() == 1;
    if sixes == 1 {
        return if n == 3 { "~G2".into() } else { "?".into() };
    }
    match fours.len() {
        0 => {
            let branch: Vec<usize> = (0..n).filter(|&a| nbrs[a].len() >= 3).collect();
            if branch.is_empty() {
                return format!("A{n}");
            }
            if branch.len() == 1 && nbrs[branch[0]].len() == 4 {
                return if n == 5 { "~D4".into() } else { "?".into() };
            }
            if branch.len() == 2 {
                return format!("~D{}", n - 1);
            }
            let arms = arm_lengths(&nbrs, branch[0]);
            match (arms[0], arms[1], arms[2]) {
                (1, 1, _) => format!("D{n}"),
                (1, 2, 2) => "E6".into(),
                (1, 2, 3) => "E7".into(),
                (1, 2, 4) => "E8".into(),
                (2, 2, 2) => "~E6".into(),
                (1, 3, 3) => "~E7".into(),
                (1, 2, 5) => "~E8".into(),
                _ => "?".into(),
            }
        }
        1 => {
            let (a, b, _) = *fours[0];
            let branch: Vec<usize> = (0..n).filter(|&x| nbrs[x].len() >= 3).collect();
            if !branch.is_empty() {
                return format!("~B{}", n - 1);
            }
            if leaf(a) || leaf(b) {
                return format!("B{n}");
            }
            if n == 4 {
                return "F4".into();
            }
            if n == 5 {
                return "~F4".into();
            }
            "?".into()
        }
        2 => {
            let ends = fours.iter().all(|&&(a, b, _)| leaf(a) || leaf(b));
            if ends && max_deg <= 2 {
                format!("~C{}", n - 1)
            } else {
                "?".into()
            }
        }
        _ => "?".into(),
    }
}

fn arm_lengths(nbrs: &[Vec<usize>], b: usize) -> Vec<usize> {
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
    arms
}
