//! From a block specification to a report: θ-analysis, walls on the Levi
//! slice, per-wall reductive quotients and parameter resolution.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::report::{
    ApartmentSummary, CertificateSummary, DatumSummary, FamilySummary, HeckeSummary, NormSummary, OmegaSummary,
    OracleCheck, ParamReport, QuotientReport, Report, SystemSummary, WallClassReport, WallReport,
    REPORT_SCHEMA_VERSION,
};
use super::spec::BlockSpec;
use super::table::{ParameterTable, TableKey};
use crate::affine::{
    reductive_quotient_roots, restrict_to_levi, AffineRootSystem, ApartmentSubspace, Wall, WallFamily,
};
use crate::error::{Error, Result};
use crate::finitegrp::{build_group, check_transfer, q_parameter, Family, FiniteMatrixGroup, TorusCharacter};
use crate::hecke::{chamber_walls, from_arrangement, ArrangementAlgebra, ParameterFunction};
use crate::rational::{dot, fmt_q, fmt_qvec, q, rational_pow, QVec, Q};
use crate::rootdata::{decompose_system, validate_root_datum, LeviPair, RootSystem};
use crate::theta::{
    build_theta_datum, build_theta_levi, choose_special_point, normalize, permutation_of, theta_affine_subsystem,
    theta_families, theta_root_subsystem, theta_walls, NormalizedSystem, ThetaGroupDatum, ThetaWalls,
};

/// Largest field size the oracle is run over.
pub const ORACLE_MAX_Q: u64 = 9;

/// Intermediate objects of the analysis, kept for inspection by callers.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub spec: BlockSpec,
    /// Frobenius permutation of the roots of `G`.
    pub perm_g: Vec<usize>,
    /// `Φ_θ` as root indices of `G`.
    pub phi_theta: Vec<usize>,
    pub norm: NormalizedSystem,
    /// Frobenius permutation of the normalized roots.
    pub perm_n: Vec<usize>,
    pub theta_datum: ThetaGroupDatum,
    /// Roots of `M_θ` as normalized root indices.
    pub theta_levi: Vec<usize>,
    pub slice: ApartmentSubspace,
    pub g_families: Vec<WallFamily>,
    pub certificate: ThetaWalls,
}

pub(crate) fn restrict_perm(idx: &[usize], perm: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| idx.iter().position(|&j| j == perm[i]).expect("subset is permutation-stable")).collect()
}

/// Orbit labels of a Frobenius-stable subsystem joined by ` + `; `T` when empty.
pub fn subsystem_label(sys: &RootSystem, idx: &[usize], perm: &[usize]) -> String {
    if idx.is_empty() {
        return "T".into();
    }
    let mut labels = decompose_system(&sys.restrict(idx), &restrict_perm(idx, perm)).labels;
    labels.sort();
    labels.join(" + ")
}

fn proportional(h: &[Q], g: &[Q]) -> Option<Q> {
    let k = h.iter().position(|x| !x.is_zero())?;
    let c = g[k] / h[k];
    (h.iter().zip(g).all(|(x, y)| c * x == *y)).then_some(c)
}

/// Roots whose affine roots vanish on all of `w`, and the subset that vanish on the whole slice.
pub fn quotient_at_wall(s: &AffineRootSystem, slice: &ApartmentSubspace, w: &Wall) -> (Vec<usize>, Vec<usize>) {
    let mut all = Vec::new();
    let mut levi = Vec::new();
    for i in 0..s.gradients().len() {
        let alpha = s.gradients().root(i);
        let g: QVec = slice.direction.iter().map(|b| dot(alpha, b)).collect();
        let a0 = dot(alpha, &slice.base);
        if g.iter().all(|x| x.is_zero()) {
            if s.level(i).contains(-a0) {
                all.push(i);
                levi.push(i);
            }
        } else if let Some(mu) = proportional(&w.gradient, &g) {
            if s.level(i).contains(mu * w.constant - a0) {
                all.push(i);
            }
        }
    }
    (all, levi)
}

pub fn analyze(spec: &BlockSpec) -> Result<Analysis> {
    let d = &spec.datum;
    let f = &spec.frobenius;
    let perm_g = f.validate(d)?;
    let phi_theta = theta_root_subsystem(d, &spec.theta);
    let s_theta = theta_affine_subsystem(&spec.affine, &phi_theta);
    let x_s = choose_special_point(&s_theta)?;
    let norm = normalize(&s_theta, &x_s)?;
    let perm_n = permutation_of(norm.gradients(), f)?;
    let theta_datum = build_theta_datum(d, &norm, f)?;
    let theta_levi = build_theta_levi(&norm, d, &spec.levi);
    let slice = ApartmentSubspace::for_levi(&spec.affine, &spec.levi, Some(f), spec.x0.clone());
    let g_families = restrict_to_levi(&spec.affine, &spec.levi, &slice);
    let origin = vec![q(0); slice.dim()];
    if let Some(fam) = g_families.iter().find(|fam| fam.is_wall_point(&origin)) {
        return Err(Error::NotGeneric(format!(
            "x0 = {} lies on a wall with gradient {}",
            fmt_qvec(&spec.x0),
            fmt_qvec(&fam.gradient)
        )));
    }
    let mut th = theta_families(&norm, &theta_levi, &slice);
    if let Some(shift) = spec.probe_shift {
        for fam in &mut th {
            for l in &mut fam.levels {
                *l = l.shift(shift);
            }
        }
    }
    let certificate = theta_walls(&g_families, th)?;
    Ok(Analysis {
        spec: spec.clone(),
        perm_g,
        phi_theta,
        norm,
        perm_n,
        theta_datum,
        theta_levi,
        slice,
        g_families,
        certificate,
    })
}

impl Analysis {
    /// Ambient point with slice coordinates `c`.
    pub fn point(&self, c: &[Q]) -> QVec {
        self.slice.point(c)
    }

    /// `(quotient pair of G_θ, θ-part of the quotient pair of G)` at an ambient point.
    pub fn quotient_pairs(&self, x: &[Q]) -> Result<(LeviPair, LeviPair)> {
        let sys = self.spec.datum.system();
        let g_roots: Vec<usize> =
            reductive_quotient_roots(&self.spec.affine, x).into_iter().filter(|i| self.phi_theta.contains(i)).collect();
        let g_levi: Vec<usize> = (0..g_roots.len()).filter(|&k| self.spec.levi.contains(&g_roots[k])).collect();
        let right = LeviPair::new(sys.restrict(&g_roots), g_levi, restrict_perm(&g_roots, &self.perm_g))?;
        let t_roots = reductive_quotient_roots(&self.norm.normalized, x);
        let t_levi: Vec<usize> = (0..t_roots.len()).filter(|&k| self.theta_levi.contains(&t_roots[k])).collect();
        let left =
            LeviPair::new(self.norm.gradients().restrict(&t_roots), t_levi, restrict_perm(&t_roots, &self.perm_n))?;
        Ok((left, right))
    }

    /// Chamber walls at `x0` for `G` and for `G_θ`, merged and sorted.
    pub fn walls(&self) -> Result<Vec<Wall>> {
        let origin = vec![q(0); self.slice.dim()];
        let mut walls = chamber_walls(&self.g_families, &origin)?;
        walls.extend(chamber_walls(&self.certificate.families, &origin)?);
        walls.sort();
        walls.dedup();
        Ok(walls)
    }

    pub fn is_theta_wall(&self, w: &Wall) -> bool {
        self.certificate.families.iter().any(|f| f.contains_wall(w))
    }
}

/// A single orbit of `A1` components with no Levi roots: returns the orbit size and a root.
fn principal_series_orbit(sys: &RootSystem, idx: &[usize], levi: &[usize], perm: &[usize]) -> Option<(usize, usize)> {
    if idx.is_empty() || !levi.is_empty() {
        return None;
    }
    let dec = decompose_system(&sys.restrict(idx), &restrict_perm(idx, perm));
    if dec.orbits.len() != 1 || dec.components.iter().any(|c| c.len() != 2) {
        return None;
    }
    Some((dec.components.len(), idx[dec.components[0][0]]))
}

fn symbolic(m: Q) -> String {
    if m.is_zero() {
        "1".into()
    } else if m.is_one() {
        "q".into()
    } else {
        format!("q^{}", fmt_q(&m))
    }
}

fn specialize(q_val: Option<u64>, m: Q) -> Option<String> {
    let base = Q::from_integer(q_val? as i64);
    rational_pow(base, m).map(|v| fmt_q(&v))
}

#[derive(Debug, Clone)]
struct Resolution {
    exponent: Option<Q>,
    source: &'static str,
    provenance: Option<String>,
}

impl Resolution {
    fn to_report(&self, q_val: Option<u64>) -> ParamReport {
        ParamReport {
            exponent: self.exponent.map(|m| fmt_q(&m)),
            symbolic: self.exponent.map(symbolic),
            value: self.exponent.and_then(|m| specialize(q_val, m)),
            source: self.source.into(),
            provenance: self.provenance.clone(),
        }
    }

    fn status(&self) -> &'static str {
        match (self.exponent, self.source) {
            (Some(_), _) => "resolved",
            (None, "table-miss") => "table-miss",
            _ => "not-decidable",
        }
    }
}

/// An oracle instance: `SL_2(F_Q)` with the torus character `t ↦ t^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct OracleCase {
    field: u64,
    e: i64,
}

#[derive(Default)]
struct Oracle {
    sl: HashMap<u64, FiniteMatrixGroup>,
    gl: HashMap<u64, FiniteMatrixGroup>,
    q_values: BTreeMap<OracleCase, Q>,
}

impl Oracle {
    fn group(cache: &mut HashMap<u64, FiniteMatrixGroup>, family: Family, field: u64) -> Result<&FiniteMatrixGroup> {
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(field) {
            e.insert(build_group(family, 2, field as usize)?);
        }
        Ok(&cache[&field])
    }

    fn q_value(&mut self, case: OracleCase) -> Result<Q> {
        if let Some(v) = self.q_values.get(&case) {
            return Ok(*v);
        }
        let g = Self::group(&mut self.sl, Family::SL, case.field)?;
        let r = q_parameter(g, g.subgroup("B")?, &TorusCharacter::new(vec![case.e, 0]))?;
        self.q_values.insert(case, r.q_value);
        Ok(r.q_value)
    }

    fn transfer(&mut self, case: OracleCase) -> Result<(Q, Q, bool)> {
        Self::group(&mut self.gl, Family::GL, case.field)?;
        Self::group(&mut self.sl, Family::SL, case.field)?;
        let (big, small) = (&self.gl[&case.field], &self.sl[&case.field]);
        let r = check_transfer(big, small, big.subgroup("B")?, &TorusCharacter::new(vec![case.e, 0]))?;
        Ok((r.big.q_value, r.small.q_value, r.equal))
    }
}

/// Oracle instance for an orbit of `d` root subgroups, when the residue field is small enough.
fn oracle_case(spec: &BlockSpec, d: usize, pairing: Q) -> Option<OracleCase> {
    let field = spec.q?.checked_pow(d as u32)?;
    if field > ORACLE_MAX_Q {
        return None;
    }
    let e = pairing * Q::from_integer(field as i64 - 1);
    e.is_integer().then(|| OracleCase { field, e: e.to_integer().rem_euclid(field as i64 - 1) })
}

fn family_summary(f: &WallFamily) -> FamilySummary {
    FamilySummary {
        gradient: fmt_qvec(&f.gradient),
        levels: f.levels.iter().map(|l| format!("{} + {}Z", fmt_q(&l.offset), fmt_q(&l.period))).collect(),
    }
}

fn int_rows(v: &[Vec<i64>]) -> Vec<Vec<i64>> {
    v.to_vec()
}

pub fn run_pipeline(spec: &BlockSpec, table: &ParameterTable) -> Result<Report> {
    let a = analyze(spec)?;
    let d = &spec.datum;
    let sys = d.system();
    let origin = vec![q(0); a.slice.dim()];

    let (omega_perms, mu) = match &spec.omega {
        Some((p, m)) => (Some(p.clone()), m.clone()),
        None => (None, None),
    };
    let alg: ArrangementAlgebra = from_arrangement(&a.certificate.families, &origin, omega_perms, mu)?;
    let walls = a.walls()?;

    let mut oracle = Oracle::default();
    let mut oracle_runs: Vec<(usize, OracleCase, Q)> = Vec::new();
    let mut reports: Vec<WallReport> = Vec::new();
    let mut class_keys: Vec<(bool, String, String, String)> = Vec::new();
    let mut resolutions: Vec<Resolution> = Vec::new();

    for (wi, w) in walls.iter().enumerate() {
        let (g_roots, g_levi) = quotient_at_wall(&spec.affine, &a.slice, w);
        let (t_roots, t_levi) = quotient_at_wall(&a.norm.normalized, &a.slice, w);
        let g_side = QuotientReport {
            group_type: subsystem_label(&sys, &g_roots, &a.perm_g),
            levi_type: subsystem_label(&sys, &g_levi, &a.perm_g),
            root_count: g_roots.len(),
        };
        let theta_side = QuotientReport {
            group_type: subsystem_label(a.norm.gradients(), &t_roots, &a.perm_n),
            levi_type: subsystem_label(a.norm.gradients(), &t_levi, &a.perm_n),
            root_count: t_roots.len(),
        };
        let member = a.is_theta_wall(w);

        let theta_res = member.then(|| {
            if let Some((dt, _)) = principal_series_orbit(a.norm.gradients(), &t_roots, &t_levi, &a.perm_n) {
                Resolution { exponent: Some(Q::from_integer(dt as i64)), source: "theta-symbolic", provenance: None }
            } else {
                let key = TableKey {
                    group_type: theta_side.group_type.clone(),
                    levi_type: theta_side.levi_type.clone(),
                    cuspidal: spec.cuspidal.clone(),
                };
                match table.get(&key) {
                    Some(e) => Resolution {
                        exponent: Some(e.exponent),
                        source: "table",
                        provenance: Some(e.provenance.clone()),
                    },
                    None => Resolution { exponent: None, source: "table-miss", provenance: None },
                }
            }
        });

        let g_res = match principal_series_orbit(&sys, &g_roots, &g_levi, &a.perm_g) {
            Some((dg, alpha)) => {
                let pairing = dot(&spec.theta.s, sys.coroot(alpha));
                let sym = if pairing.is_integer() { Q::from_integer(dg as i64) } else { q(0) };
                match oracle_case(spec, dg, pairing) {
                    Some(case) => {
                        let v = oracle.q_value(case)?;
                        oracle_runs.push((wi, case, sym));
                        let full = Q::from_integer(case.field as i64);
                        let exponent = if v.is_one() {
                            Some(q(0))
                        } else if v == full {
                            Some(Q::from_integer(dg as i64))
                        } else {
                            None
                        };
                        Resolution { exponent, source: "oracle", provenance: Some(format!("SL2(F_{})", case.field)) }
                    }
                    None => Resolution { exponent: Some(sym), source: "symbolic", provenance: None },
                }
            }
            None => match &theta_res {
                Some(r) => r.clone(),
                None => Resolution { exponent: None, source: "not-decidable", provenance: None },
            },
        };

        let relevant = g_res.exponent.map(|m| !m.is_zero());
        reports.push(WallReport {
            index: wi,
            gradient: fmt_qvec(&w.gradient),
            constant: fmt_q(&w.constant),
            equation: w.describe(),
            class: 0,
            theta_member: member,
            g_side: g_side.clone(),
            theta_side: theta_side.clone(),
            q_s: g_res.to_report(spec.q),
            q_theta_s: theta_res.as_ref().map(|r| r.to_report(spec.q)),
            relevant,
            status: g_res.status().into(),
            hecke_generator: alg.walls.iter().position(|x| x == w),
        });
        class_keys.push((member, theta_side.group_type, theta_side.levi_type, g_side.group_type));
        resolutions.push(g_res);
    }

    // classes in order of first appearance
    let mut classes: Vec<WallClassReport> = Vec::new();
    let mut seen: Vec<&(bool, String, String, String)> = Vec::new();
    for (wi, key) in class_keys.iter().enumerate() {
        let c = match seen.iter().position(|k| *k == key) {
            Some(c) => c,
            None => {
                seen.push(key);
                classes.push(WallClassReport {
                    group_type: key.1.clone(),
                    levi_type: key.2.clone(),
                    cuspidal: spec.cuspidal.clone(),
                    g_group_type: key.3.clone(),
                    theta_member: key.0,
                    walls: Vec::new(),
                    q_s: reports[wi].q_s.clone(),
                    relevant: reports[wi].relevant,
                    status: reports[wi].status.clone(),
                    generators: Vec::new(),
                });
                classes.len() - 1
            }
        };
        reports[wi].class = c;
        classes[c].walls.push(wi);
        if let Some(g) = reports[wi].hecke_generator {
            classes[c].generators.push(g);
        }
        if reports[wi].q_s.exponent != classes[c].q_s.exponent {
            classes[c].status = "inconsistent".into();
        }
    }

    let generators: Vec<usize> =
        alg.walls.iter().map(|w| walls.iter().position(|x| x == w).expect("θ chamber walls are listed")).collect();
    let exps: Vec<Option<Q>> = generators.iter().map(|&i| resolutions[i].exponent).collect();
    let parameter_check = if exps.iter().all(Option::is_some) {
        let pf = ParameterFunction::from_exponents(&exps.iter().map(|e| e.unwrap()).collect::<Vec<_>>());
        match pf.validate(&alg.cox, &alg.omega) {
            Ok(()) => "ok".to_string(),
            Err(e) => e.to_string(),
        }
    } else {
        "incomplete".to_string()
    };

    let mut oracle_checks = Vec::new();
    if spec.check_oracle {
        let mut transferred: Vec<OracleCase> = Vec::new();
        for &(wi, case, sym) in &oracle_runs {
            let v = oracle.q_value(case)?;
            let expected =
                rational_pow(Q::from_integer(spec.q.expect("oracle needs q") as i64), sym).expect("integral exponent");
            oracle_checks.push(OracleCheck {
                wall: wi,
                kind: "q_parameter".into(),
                group: format!("SL2(F_{})", case.field),
                character: vec![case.e, 0],
                oracle_q_value: fmt_q(&v),
                expected: fmt_q(&expected),
                agree: v == expected,
            });
            if !transferred.contains(&case) {
                transferred.push(case);
                let (big, small, equal) = oracle.transfer(case)?;
                oracle_checks.push(OracleCheck {
                    wall: wi,
                    kind: "transfer".into(),
                    group: format!("GL2(F_{0})/SL2(F_{0})", case.field),
                    character: vec![case.e, 0],
                    oracle_q_value: fmt_q(&big),
                    expected: fmt_q(&small),
                    agree: equal,
                });
            }
        }
    }

    let relevance_matches_theta = reports.iter().all(|w| w.relevant.is_none_or(|r| r == w.theta_member));

    let gt = &a.theta_datum;
    let n = &a.norm;
    let phi_sys = sys.restrict(&a.phi_theta);
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        name: spec.name.clone(),
        q: spec.q,
        cuspidal: spec.cuspidal.clone(),
        phi_theta: SystemSummary {
            count: a.phi_theta.len(),
            roots: phi_sys.roots().iter().map(|r| fmt_qvec(r)).collect(),
            type_label: subsystem_label(&sys, &a.phi_theta, &a.perm_g),
        },
        phi_norm: NormSummary {
            special_point: fmt_qvec(&n.x_s),
            scale_factors: n.scale.iter().map(fmt_q).collect(),
            roots: n.gradients().roots().iter().map(|r| fmt_qvec(r)).collect(),
            coroots: n.gradients().coroots().iter().map(|r| fmt_qvec(r)).collect(),
            type_label: subsystem_label(n.gradients(), &(0..n.gradients().len()).collect::<Vec<_>>(), &a.perm_n),
            reduced: n.gradients().is_reduced(),
        },
        g_theta_datum: DatumSummary {
            rank: gt.datum.rank(),
            roots: int_rows(gt.datum.roots()),
            coroots: int_rows(gt.datum.coroots()),
            frobenius: gt.frobenius.matrix.clone(),
            frobenius_order: gt.frobenius.order,
            delta: gt.delta.clone(),
            w_gamma_word: gt.w_gamma_word.clone(),
            lattice_index: fmt_q(&gt.index),
            valid: validate_root_datum(gt.datum.rank(), gt.datum.roots().to_vec(), gt.datum.coroots().to_vec()).is_ok(),
            frobenius_preserves_delta: gt.frobenius_preserves_delta(),
        },
        apartment: ApartmentSummary {
            x0: fmt_qvec(&spec.x0),
            direction: a.slice.direction.iter().map(|v| fmt_qvec(v)).collect(),
            dim: a.slice.dim(),
        },
        certificate: CertificateSummary {
            h_theta_subset_h: true,
            g_families: a.g_families.iter().map(family_summary).collect(),
            theta_families: a.certificate.families.iter().map(family_summary).collect(),
            covered_by: a.certificate.covering.clone(),
        },
        walls: reports,
        wall_classes: classes,
        hecke: HeckeSummary {
            rank: alg.cox.rank(),
            type_label: alg.type_label.clone(),
            coxeter_matrix: alg.cox.matrix().to_vec(),
            generators,
            parameters: exps.iter().map(|e| e.map(symbolic)).collect(),
            parameter_check,
            omega: OmegaSummary {
                order: alg.omega.order(),
                permutations: alg.omega.perms.clone(),
                mu: alg.omega.mu.iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
            },
        },
        oracle_checks,
        relevance_matches_theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calc::spec::parse_spec;

    fn sl2(s: &str, q: u64) -> BlockSpec {
        parse_spec(&format!(
            r#"{{"schema_version": 1, "root_datum": {{"rank": 1, "roots": [[2], [-2]], "coroots": [[1], [-1]]}},
                "theta": ["{s}"], "x0": ["1/5"], "options": {{"q": {q}, "check_oracle": true}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn sl2_iwahori() {
        let r = run_pipeline(&sl2("0", 3), &ParameterTable::default()).unwrap();
        assert_eq!(r.walls.len(), 2);
        assert_eq!(r.wall_classes.len(), 1);
        assert_eq!(r.hecke.type_label, "~A1");
        for w in &r.walls {
            assert_eq!(w.q_s.value.as_deref(), Some("3"));
            assert_eq!(w.relevant, Some(true));
            assert!(w.theta_member);
        }
        assert_eq!(r.hecke.parameter_check, "ok");
        assert!(r.oracle_checks.iter().all(|c| c.agree));
        assert!(r.relevance_matches_theta);
    }

    #[test]
    fn sl2_quadratic() {
        let r = run_pipeline(&sl2("1/2", 3), &ParameterTable::default()).unwrap();
        assert_eq!(r.phi_theta.count, 0);
        assert_eq!(r.hecke.rank, 0);
        assert!(r.certificate.theta_families.is_empty());
        for w in &r.walls {
            assert_eq!(w.q_s.value.as_deref(), Some("1"));
            assert_eq!(w.relevant, Some(false));
        }
        assert!(r.relevance_matches_theta);
    }
}
