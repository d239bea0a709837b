//! Exact arithmetic in `Q(ζ_m)` as residues modulo the cyclotomic polynomial,
//! and in quadratic extensions of it.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, solve, Q};

/// Element of `Q(ζ_m)`, coefficients in the power basis `1, ζ, …, ζ^{d-1}`.
pub type Cyc = Vec<Q>;

#[derive(Debug, Clone, PartialEq)]
pub struct CyclotomicField {
    m: usize,
    /// Monic `Φ_m`, lowest coefficient first.
    phi: Vec<i64>,
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut quot = vec![0i64; a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = r[i + db];
        quot[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    quot
}

/// Integer coefficients of `Φ_m`.
pub fn cyclotomic_polynomial(m: usize) -> Vec<i64> {
    let mut p = vec![0i64; m + 1];
    p[0] = -1;
    p[m] = 1;
    for d in 1..m {
        if m % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

impl CyclotomicField {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        CyclotomicField { m, phi: cyclotomic_polynomial(m) }
    }

    pub fn conductor(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn zero(&self) -> Cyc {
        vec![Q::zero(); self.degree()]
    }

    pub fn from_q(&self, x: Q) -> Cyc {
        let mut v = self.zero();
        v[0] = x;
        v
    }

    pub fn one(&self) -> Cyc {
        self.from_q(Q::one())
    }

    fn reduce(&self, mut coeffs: Vec<Q>) -> Cyc {
        let d = self.degree();
        for deg in (d..coeffs.len()).rev() {
            let c = coeffs[deg];
            if c.is_zero() {
                continue;
            }
            coeffs[deg] = Q::zero();
            for (i, &pi) in self.phi.iter().enumerate().take(d) {
                coeffs[deg - d + i] -= c * q(pi);
            }
        }
        coeffs.resize(d, Q::zero());
        coeffs
    }

    /// `ζ^e` for any integer `e`.
    pub fn zeta_pow(&self, e: i64) -> Cyc {
        let e = e.rem_euclid(self.m as i64) as usize;
        let mut v = vec![Q::zero(); e.max(self.degree() - 1) + 1];
        v[e] = Q::one();
        self.reduce(v)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(&self, c: Q, a: &Cyc) -> Cyc {
        a.iter().map(|x| c * x).collect()
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let d = self.degree();
        let mut out = vec![Q::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    pub fn is_zero(&self, a: &Cyc) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    /// The rational value of `a`, if it lies in `Q`.
    pub fn as_rational(&self, a: &Cyc) -> Option<Q> {
        a[1..].iter().all(|x| x.is_zero()).then(|| a[0])
    }

    /// Inverse by solving the linear system of multiplication by `a`.
    pub fn inv(&self, a: &Cyc) -> Result<Cyc> {
        let d = self.degree();
        // column j = a · ζ^j
        let cols: Vec<Cyc> = (0..d).map(|j| self.mul(a, &self.zeta_pow(j as i64))).collect();
        let mat: Vec<Vec<Q>> = (0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect();
        solve(&mat, &self.one())
            .filter(|x| self.mul(a, x) == self.one())
            .ok_or_else(|| Error::Group("division by zero in cyclotomic field".into()))
    }

    pub fn div(&self, a: &Cyc, b: &Cyc) -> Result<Cyc> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn fmt(&self, a: &Cyc) -> String {
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let cs = crate::rational::fmt_q(c);
                match i {
                    0 => cs,
                    1 => format!("{cs}*z{}", self.m),
                    _ => format!("{cs}*z{}^{i}", self.m),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub type CycMat = Vec<Vec<Cyc>>;

pub fn mat_mul(k: &CyclotomicField, a: &CycMat, b: &CycMat) -> CycMat {
    let n = a.len();
    let p = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![k.zero(); p]; n];
    for i in 0..n {
        for (l, x) in a[i].iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for j in 0..p {
                if !k.is_zero(&b[l][j]) {
                    let t = k.mul(x, &b[l][j]);
                    out[i][j] = k.add(&out[i][j], &t);
                }
            }
        }
    }
    out
}

/// Outcome of a rank computation over `K[x]/(x² − a x − b)`.
pub enum ExtRank {
    Rank(usize),
    /// The polynomial has this root in `K`, so the quotient is not a field.
    Split(Cyc),
}

/// `K[λ]/(λ² − aλ − b)`; elements are pairs `u + vλ`.
pub struct QuadraticExt<'a> {
    pub base: &'a CyclotomicField,
    pub a: Cyc,
    pub b: Cyc,
}

type Ext = (Cyc, Cyc);

impl QuadraticExt<'_> {
    fn mul(&self, x: &Ext, y: &Ext) -> Ext {
        let k = self.base;
        // (u1 + v1 λ)(u2 + v2 λ) with λ² = aλ + b
        let vv = k.mul(&x.1, &y.1);
        let u = k.add(&k.mul(&x.0, &y.0), &k.mul(&vv, &self.b));
        let v = k.add(&k.add(&k.mul(&x.0, &y.1), &k.mul(&x.1, &y.0)), &k.mul(&vv, &self.a));
        (u, v)
    }

    fn sub(&self, x: &Ext, y: &Ext) -> Ext {
        (self.base.sub(&x.0, &y.0), self.base.sub(&x.1, &y.1))
    }

    fn is_zero(&self, x: &Ext) -> bool {
        self.base.is_zero(&x.0) && self.base.is_zero(&x.1)
    }

    /// Inverse, or a root of the defining polynomial in `K` when `x` is a zero divisor.
    fn inv(&self, x: &Ext) -> std::result::Result<Ext, Cyc> {
        let k = self.base;
        let (u, v) = x;
        // N(u + vλ) = u² + a u v − b v²
        let norm = k.sub(&k.add(&k.mul(u, u), &k.mul(&self.a, &k.mul(u, v))), &k.mul(&self.b, &k.mul(v, v)));
        if k.is_zero(&norm) {
            // v ≠ 0 here, and −u/v is a root
            let r = k.neg(&k.div(u, v).expect("nonzero"));
            return Err(r);
        }
        let ninv = k.inv(&norm).expect("nonzero norm");
        let conj_u = k.add(u, &k.mul(&self.a, v));
        Ok((k.mul(&conj_u, &ninv), k.mul(&k.neg(v), &ninv)))
    }

    /// Rank of `A − λ I` over the extension.
    pub fn rank_minus_lambda(&self, a: &CycMat) -> ExtRank {
        let k = self.base;
        let n = a.len();
        let mut m: Vec<Vec<Ext>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = if i == j { k.neg(&k.one()) } else { k.zero() };
                        (a[i][j].clone(), v)
                    })
                    .collect()
            })
            .collect();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| !self.is_zero(&m[i][c])) else {
                continue;
            };
            m.swap(r, p);
            let inv = match self.inv(&m[r][c]) {
                Ok(x) => x,
                Err(root) => return ExtRank::Split(root),
            };
            for i in r + 1..n {
                if self.is_zero(&m[i][c]) {
                    continue;
                }
                let f = self.mul(&m[i][c], &inv);
                for j in c..n {
                    let t = self.mul(&f, &m[r][j]);
                    m[i][j] = self.sub(&m[i][j], &t);
                }
            }
            r += 1;
        }
        ExtRank::Rank(r)
    }
}

/// Rank over `K`.
pub fn rank(k: &CyclotomicField, a: &CycMat) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !k.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = k.inv(&m[r][c]).expect("nonzero pivot");
        for i in r + 1..rows {
            if k.is_zero(&m[i][c]) {
                continue;
            }
            let f = k.mul(&m[i][c], &inv);
            for j in c..cols {
                let t = k.mul(&f, &m[r][j]);
                m[i][j] = k.sub(&m[i][j], &t);
            }
        }
        r += 1;
    }
    r
}
