//! Finite fields of order at most 9 as lookup tables.

use crate::error::{Error, Result};

/// `GF(q)`; elements are `0..q`, read as base-`p` digit vectors of a
/// polynomial residue.
#[derive(Debug, Clone)]
pub struct Field {
    q: usize,
    p: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// `log[x]` for nonzero `x` with respect to `generator`.
    log: Vec<u32>,
    exp: Vec<u8>,
}

fn factor_prime_power(q: usize) -> Option<(usize, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl Field {
    pub fn new(q: usize) -> Result<Self> {
        let (p, k) = factor_prime_power(q)
            .filter(|_| q <= 9)
            .ok_or_else(|| Error::Group(format!("{q} is not a prime power at most 9")))?;
        let k = k as usize;
        // monic modulus x^k + c_{k-1} x^{k-1} + ... + c_0, low coefficients listed
        let modulus: Vec<usize> = match (p, k) {
            (_, 1) => vec![0],
            (2, 2) => vec![1, 1],
            (2, 3) => vec![1, 1, 0],
            (3, 2) => vec![1, 0],
            _ => unreachable!(),
        };
        let digits = |x: usize| -> Vec<usize> { (0..k).map(|i| (x / p.pow(i as u32)) % p).collect() };
        let pack = |d: &[usize]| -> usize { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = pack(&s) as u8;
                let mut prod = vec![0usize; 2 * k];
                for i in 0..k {
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                for deg in (k..2 * k).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        prod[deg] = 0;
                        for (i, &m) in modulus.iter().enumerate() {
                            prod[deg - k + i] = (prod[deg - k + i] + p * p - c * m % p) % p;
                        }
                    }
                }
                if k == 1 {
                    mul[a * q + b] = ((a * b) % p) as u8;
                } else {
                    mul[a * q + b] = pack(&prod[..k]) as u8;
                }
            }
        }
        let neg: Vec<u8> = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
        let inv: Vec<u8> =
            (0..q).map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8 }).collect();
        let order = |g: usize| -> usize {
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = mul[x * q + g] as usize;
                n += 1;
            }
            n
        };
        let generator = (1..q).find(|&g| order(g) == q - 1).expect("multiplicative group is cyclic");
        let mut exp = vec![0u8; q - 1];
        let mut log = vec![0u32; q];
        let mut x = 1usize;
        for (e, slot) in exp.iter_mut().enumerate() {
            *slot = x as u8;
            log[x] = e as u32;
            x = mul[x * q + generator] as usize;
        }
        Ok(Field { q, p, add, mul, neg, inv, log, exp })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// Discrete logarithm of a nonzero element.
    pub fn log(&self, a: u8) -> u32 {
        debug_assert!(a != 0);
        self.log[a as usize]
    }

    pub fn exp(&self, e: u32) -> u8 {
        self.exp[e as usize % (self.q - 1)]
    }
}
