//! Report data and its text / machine-readable serializations.

use std::fmt::Write as _;

use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub name: String,
    pub q: Option<u64>,
    pub cuspidal: String,
    pub phi_theta: SystemSummary,
    pub phi_norm: NormSummary,
    pub g_theta_datum: DatumSummary,
    pub apartment: ApartmentSummary,
    pub certificate: CertificateSummary,
    pub walls: Vec<WallReport>,
    pub wall_classes: Vec<WallClassReport>,
    pub hecke: HeckeSummary,
    pub oracle_checks: Vec<OracleCheck>,
    /// Wherever relevance is decided, it coincides with θ-membership.
    pub relevance_matches_theta: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SystemSummary {
    pub count: usize,
    pub roots: Vec<String>,
    pub type_label: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct NormSummary {
    pub special_point: String,
    pub scale_factors: Vec<String>,
    pub roots: Vec<String>,
    pub coroots: Vec<String>,
    pub type_label: String,
    pub reduced: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DatumSummary {
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub frobenius: Vec<Vec<i64>>,
    pub frobenius_order: usize,
    pub delta: Vec<usize>,
    pub w_gamma_word: Vec<usize>,
    pub lattice_index: String,
    pub valid: bool,
    pub frobenius_preserves_delta: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ApartmentSummary {
    pub x0: String,
    pub direction: Vec<String>,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FamilySummary {
    pub gradient: String,
    pub levels: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CertificateSummary {
    pub h_theta_subset_h: bool,
    pub g_families: Vec<FamilySummary>,
    pub theta_families: Vec<FamilySummary>,
    /// For each θ family, the index of the covering family of `G`.
    pub covered_by: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct QuotientReport {
    pub group_type: String,
    pub levi_type: String,
    pub root_count: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ParamReport {
    pub exponent: Option<String>,
    pub symbolic: Option<String>,
    pub value: Option<String>,
    /// `oracle`, `symbolic`, `theta-symbolic`, `table`, `table-miss` or `not-decidable`.
    pub source: String,
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct WallReport {
    pub index: usize,
    pub gradient: String,
    pub constant: String,
    pub equation: String,
    pub class: usize,
    pub theta_member: bool,
    pub g_side: QuotientReport,
    pub theta_side: QuotientReport,
    pub q_s: ParamReport,
    pub q_theta_s: Option<ParamReport>,
    pub relevant: Option<bool>,
    /// `resolved`, `table-miss` or `not-decidable`.
    pub status: String,
    pub hecke_generator: Option<usize>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct WallClassReport {
    pub group_type: String,
    pub levi_type: String,
    pub cuspidal: String,
    pub g_group_type: String,
    pub theta_member: bool,
    pub walls: Vec<usize>,
    pub q_s: ParamReport,
    pub relevant: Option<bool>,
    pub status: String,
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OmegaSummary {
    pub order: usize,
    pub permutations: Vec<Vec<usize>>,
    pub mu: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HeckeSummary {
    pub rank: usize,
    pub type_label: String,
    /// Entry `0` stands for `∞`.
    pub coxeter_matrix: Vec<Vec<u32>>,
    pub generators: Vec<usize>,
    pub parameters: Vec<Option<String>>,
    pub parameter_check: String,
    pub omega: OmegaSummary,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OracleCheck {
    pub wall: usize,
    pub kind: String,
    pub group: String,
    pub character: Vec<i64>,
    pub oracle_q_value: String,
    pub expected: String,
    pub agree: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitMode {
    Text,
    Machine,
}

/// Deterministic rendering; machine mode is JSON with sorted keys.
pub fn emit_report(r: &Report, mode: EmitMode) -> String {
    match mode {
        EmitMode::Machine => {
            // serde_json::Value maps are ordered by key
            let v = serde_json::to_value(r).expect("report serializes");
            let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
            s.push('\n');
            s
        }
        EmitMode::Text => render_text(r),
    }
}

fn opt(s: &Option<String>) -> &str {
    s.as_deref().unwrap_or("-")
}

fn render_text(r: &Report) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "depth-zero block report: {}", r.name);
    if let Some(q) = r.q {
        let _ = writeln!(o, "q = {q}, cuspidal = {}", r.cuspidal);
    }
    let _ = writeln!(o, "Phi_theta: {} roots, type {}", r.phi_theta.count, r.phi_theta.type_label);
    let _ = writeln!(
        o,
        "Phi_norm: type {} at special point {}, r_a = [{}]",
        r.phi_norm.type_label,
        r.phi_norm.special_point,
        r.phi_norm.scale_factors.join(", ")
    );
    let g = &r.g_theta_datum;
    let _ = writeln!(
        o,
        "G_theta datum: rank {}, {} roots, index {}, valid {}, Frobenius preserves Delta {}",
        g.rank,
        g.roots.len(),
        g.lattice_index,
        g.valid,
        g.frobenius_preserves_delta
    );
    let _ = writeln!(o, "apartment: x0 = {}, dim {}", r.apartment.x0, r.apartment.dim);
    let _ = writeln!(
        o,
        "certificate h_theta in h: {} ({} theta families, {} G families)",
        r.certificate.h_theta_subset_h,
        r.certificate.theta_families.len(),
        r.certificate.g_families.len()
    );
    let _ = writeln!(o, "walls:");
    for w in &r.walls {
        let _ = writeln!(
            o,
            "  [{}] {}  class {}  theta {}  G-quotient {} / {}  theta-quotient {} / {}  q_s {} ({})  relevant {}  {}",
            w.index,
            w.equation,
            w.class,
            w.theta_member,
            w.g_side.group_type,
            w.g_side.levi_type,
            w.theta_side.group_type,
            w.theta_side.levi_type,
            opt(&w.q_s.symbolic),
            w.q_s.source,
            w.relevant.map_or("undecided".to_string(), |b| b.to_string()),
            w.status
        );
    }
    let h = &r.hecke;
    let _ = writeln!(o, "Hecke algebra: type {}, rank {}, |Omega| = {}", h.type_label, h.rank, h.omega.order);
    for row in &h.coxeter_matrix {
        let cells: Vec<String> = row.iter().map(|&m| if m == 0 { "inf".into() } else { m.to_string() }).collect();
        let _ = writeln!(o, "  {}", cells.join(" "));
    }
    let params: Vec<String> = h.parameters.iter().map(|p| p.clone().unwrap_or_else(|| "?".into())).collect();
    let _ = writeln!(o, "parameters: [{}] ({})", params.join(", "), h.parameter_check);
    for c in &r.oracle_checks {
        let _ = writeln!(
            o,
            "oracle: wall {} {} {} character {:?}: q = {} expected {} agree {}",
            c.wall, c.kind, c.group, c.character, c.oracle_q_value, c.expected, c.agree
        );
    }
    let _ = writeln!(o, "relevance matches theta-membership: {}", r.relevance_matches_theta);
    o
}
