//! Exact rational scalars, vectors and small dense linear algebra.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = Ratio<i64>;

/// Rational column vector.
pub type QVec = Vec<Q>;

/// Dense rational matrix, row-major.
pub type QMat = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn to_qvec(v: &[i64]) -> QVec {
    v.iter().map(|&x| q(x)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: Q, a: &[Q]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

pub fn is_integer(x: Q) -> bool {
    x.is_integer()
}

/// Lexicographic sign of a vector: the sign of its first nonzero entry.
pub fn lex_sign(a: &[Q]) -> i32 {
    for x in a {
        if x.is_positive() {
            return 1;
        }
        if x.is_negative() {
            return -1;
        }
    }
    0
}

pub fn identity(n: usize) -> QMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &QMat, v: &[Q]) -> QVec {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose(a: &QMat) -> QMat {
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

pub fn int_to_qmat(a: &[Vec<i64>]) -> QMat {
    a.iter().map(|r| to_qvec(r)).collect()
}

/// Converts a rational matrix to an integer one if every entry is integral.
pub fn qmat_to_int(a: &QMat) -> Option<Vec<Vec<i64>>> {
    a.iter().map(|r| r.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()).collect()
}

pub fn qvec_to_int(a: &[Q]) -> Option<Vec<i64>> {
    a.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let t = m[r][j];
                    m[i][j] -= f * t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[QVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// Inverse of a square rational matrix.
pub fn inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut aug: QMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a x = b` for one solution, if any.
pub fn solve(a: &QMat, b: &[Q]) -> Option<QVec> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: QMat = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row = r.clone();
            row.push(bi);
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = aug[i][cols];
    }
    Some(x)
}

/// Basis of the right kernel `{x : a x = 0}`.
pub fn kernel(a: &QMat, cols: usize) -> Vec<QVec> {
    if a.is_empty() {
        return (0..cols).map(|i| (0..cols).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    }
    let mut m = a.clone();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -m[i][f];
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * q(l)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return ints;
    }
    ints.into_iter().map(|x| x / g).collect()
}

/// Exact rational power `base^exp` when it exists in Q.
pub fn rational_pow(base: Q, exp: Q) -> Option<Q> {
    if base.is_zero() {
        return (exp.is_positive()).then(Q::zero);
    }
    let n = *exp.numer();
    let d = *exp.denom();
    let root = |x: i64| -> Option<i64> {
        if x < 0 {
            return None;
        }
        let r = (x as f64).powf(1.0 / d as f64).round() as i64;
        (r.saturating_sub(1)..=r + 1).find(|&c| c >= 0 && c.checked_pow(d as u32) == Some(x))
    };
    let b = Q::new(root(*base.numer())?, root(*base.denom())?);
    let e = n.unsigned_abs() as i32;
    let p = num_traits::pow::pow(b, e as usize);
    Some(if n < 0 { p.recip() } else { p })
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_qvec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(", "))
}

/// Parses `"3"`, `"-1/2"` style rationals.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Q::new(n, d))
        }
        None => s.parse::<i64>().ok().map(q),
    }
}

pub fn abs(x: Q) -> Q {
    x.abs()
}
