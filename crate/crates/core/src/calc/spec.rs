//! JSON block specifications of depth-zero data.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::affine::{AffineRootSystem, LevelSet};
use crate::error::{Error, Result};
use crate::rational::{parse_q, rank, to_qvec, QVec, Q};
use crate::rootdata::{FrobeniusAction, RootDatum, RootSystem};
use crate::theta::ThetaDatum;

pub const SPEC_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    schema_version: u32,
    #[serde(default)]
    name: Option<String>,
    root_datum: RawDatum,
    #[serde(default)]
    levels: Option<Vec<RawLevel>>,
    #[serde(default)]
    frobenius: Option<RawFrobenius>,
    #[serde(default)]
    levi: Vec<usize>,
    theta: Vec<String>,
    x0: Vec<String>,
    #[serde(default)]
    options: RawOptions,
    #[serde(default)]
    cuspidal: Option<String>,
    #[serde(default)]
    omega: Option<RawOmega>,
    #[serde(default)]
    certificate_probe: Option<RawProbe>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevel {
    offset: String,
    period: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrobenius {
    matrix: Vec<Vec<i64>>,
    #[serde(default)]
    order: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(default)]
    q: Option<u64>,
    #[serde(default)]
    table: Option<PathBuf>,
    #[serde(default)]
    check_oracle: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOmega {
    permutations: Vec<Vec<usize>>,
    #[serde(default)]
    mu: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProbe {
    shift_theta_levels: String,
}

/// A validated depth-zero datum `(G, M, x_0, θ)` with run options.
#[derive(Debug, Clone)]
pub struct BlockSpec {
    pub name: String,
    pub datum: RootDatum,
    pub affine: AffineRootSystem,
    pub frobenius: FrobeniusAction,
    /// Root indices of the Levi `M`.
    pub levi: Vec<usize>,
    pub theta: ThetaDatum,
    pub x0: QVec,
    pub q: Option<u64>,
    pub table: Option<PathBuf>,
    pub check_oracle: bool,
    pub cuspidal: String,
    pub omega: Option<(Vec<Vec<usize>>, Option<Vec<Vec<Q>>>)>,
    /// Diagnostic: shift applied to θ-wall levels before certification.
    pub probe_shift: Option<Q>,
}

fn rational(field: &str, s: &str) -> Result<Q> {
    parse_q(s).ok_or_else(|| Error::Spec(format!("{field}: {s:?} is not a rational number")))
}

fn rationals(field: &str, v: &[String]) -> Result<QVec> {
    v.iter().map(|s| rational(field, s)).collect()
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q ≥ 2 has a divisor");
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    r == 1
}

pub fn load_spec(path: &Path) -> Result<BlockSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut spec = parse_spec(&text)?;
    if spec.name.is_empty() {
        spec.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    if let Some(t) = &spec.table {
        if t.is_relative() {
            if let Some(dir) = path.parent() {
                spec.table = Some(dir.join(t));
            }
        }
    }
    Ok(spec)
}

pub fn parse_spec(text: &str) -> Result<BlockSpec> {
    let raw: RawSpec = serde_json::from_str(text)
        .map_err(|e| Error::Spec(format!("parse error at line {}, column {}: {e}", e.line(), e.column())))?;
    if raw.schema_version != SPEC_SCHEMA_VERSION {
        return Err(Error::Spec(format!(
            "schema_version {} is not supported (expected {SPEC_SCHEMA_VERSION})",
            raw.schema_version
        )));
    }
    let n = raw.root_datum.rank;
    let datum = RootDatum::new(n, raw.root_datum.roots, raw.root_datum.coroots)?;
    let frobenius = match raw.frobenius {
        Some(f) => {
            let action = FrobeniusAction::from_matrix(f.matrix)?;
            if let Some(o) = f.order {
                if o != action.order {
                    return Err(Error::InvalidFrobenius(format!(
                        "declared order {o} differs from the computed order {}",
                        action.order
                    )));
                }
            }
            action
        }
        None => FrobeniusAction::identity(n),
    };
    let perm = frobenius.validate(&datum)?;
    let affine = match raw.levels {
        None => AffineRootSystem::from_split(&datum),
        Some(levels) => {
            if levels.len() != datum.num_roots() {
                return Err(Error::Spec(format!(
                    "levels has {} entries for {} roots",
                    levels.len(),
                    datum.num_roots()
                )));
            }
            let sets = levels
                .iter()
                .map(|l| {
                    let period = rational("levels.period", &l.period)?;
                    if period <= Q::from_integer(0) {
                        return Err(Error::Spec("levels.period must be positive".into()));
                    }
                    Ok(LevelSet::new(rational("levels.offset", &l.offset)?, period))
                })
                .collect::<Result<Vec<_>>>()?;
            AffineRootSystem::new(n, datum.system(), sets)?
        }
    };
    for (i, &j) in perm.iter().enumerate() {
        if affine.level(i) != affine.level(j) {
            return Err(Error::InvalidFrobenius(format!(
                "Frobenius sends root {i} to root {j} with a different level set"
            )));
        }
    }
    let levi = raw.levi;
    check_levi(&datum.system(), &levi, &perm)?;
    if raw.theta.len() != n || raw.x0.len() != n {
        return Err(Error::Spec(format!("theta and x0 must have {n} entries")));
    }
    let theta = ThetaDatum::new(rationals("theta", &raw.theta)?, frobenius.clone())?;
    let x0 = rationals("x0", &raw.x0)?;
    if frobenius.apply_cochar_q(&x0) != x0 {
        return Err(Error::Spec("x0 is not fixed by the Frobenius action".into()));
    }
    if let Some(q) = raw.options.q {
        if !is_prime_power(q) {
            return Err(Error::Spec(format!("q = {q} is not a prime power")));
        }
    }
    let omega = match raw.omega {
        None => None,
        Some(o) => {
            let mu = match o.mu {
                None => None,
                Some(rows) => Some(rows.iter().map(|r| rationals("omega.mu", r)).collect::<Result<Vec<_>>>()?),
            };
            Some((o.permutations, mu))
        }
    };
    let probe_shift = match raw.certificate_probe {
        None => None,
        Some(p) => Some(rational("certificate_probe.shift_theta_levels", &p.shift_theta_levels)?),
    };
    Ok(BlockSpec {
        name: raw.name.unwrap_or_default(),
        datum,
        affine,
        frobenius,
        levi,
        theta,
        x0,
        q: raw.options.q,
        table: raw.options.table,
        check_oracle: raw.options.check_oracle,
        cuspidal: raw.cuspidal.unwrap_or_else(|| "trivial".into()),
        omega,
        probe_shift,
    })
}

/// A Levi subsystem is the set of roots in a rational span, here also Frobenius-stable.
fn check_levi(sys: &RootSystem, levi: &[usize], perm: &[usize]) -> Result<()> {
    if let Some(&i) = levi.iter().find(|&&i| i >= sys.len()) {
        return Err(Error::Spec(format!("levi index {i} is out of range")));
    }
    let span: Vec<QVec> = levi.iter().map(|&i| sys.root(i).clone()).collect();
    let r = rank(&span);
    let in_span: Vec<usize> = (0..sys.len())
        .filter(|&j| {
            let mut v = span.clone();
            v.push(sys.root(j).clone());
            rank(&v) == r
        })
        .collect();
    let mut sorted = levi.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted != in_span {
        return Err(Error::Spec("levi roots are not all roots in their rational span".into()));
    }
    if levi.iter().any(|&i| !levi.contains(&perm[i])) {
        return Err(Error::Spec("levi is not stable under the Frobenius action".into()));
    }
    Ok(())
}

/// Root indices of `d` given as integer vectors.
pub fn root_indices(d: &RootDatum, roots: &[Vec<i64>]) -> Option<Vec<usize>> {
    let sys = d.system();
    roots.iter().map(|r| sys.index_of(&to_qvec(r))).collect()
}
