//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use depthzero::affine::Wall;
use depthzero::calc::{analyze, default_table, emit_report, run_pipeline, EmitMode};
use depthzero::finitegrp::{build_group, check_transfer, q_parameter, Family, TorusCharacter};
use depthzero::hecke::{CoxElem, CoxeterPresentation, HeckeAlgebra, OmegaGroup, ParameterFunction};
use depthzero::rational::{dot, inverse, q, qr, scale, Q};
use depthzero::rootdata::{isomorphic_up_to_duals, validate_root_datum};
use depthzero::theta::{theta_root_subsystem, ThetaDatum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn single_core<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool").install(f)
}

fn criterion_1() -> Outcome {
    let limit = Duration::from_secs(10);
    let mut slowest = Duration::ZERO;
    for qq in [2usize, 3, 5, 7] {
        let start = Instant::now();
        let r = single_core(|| {
            let g = build_group(Family::GL, 2, qq)?;
            q_parameter(&g, g.subgroup("B")?, &TorusCharacter::trivial(2))
        })
        .map_err(|e| format!("q = {qq}: {e}"))?;
        let t = start.elapsed();
        slowest = slowest.max(t);
        let qi = qq as i64;
        check(
            r.relation_rational() == Some((q(qi - 1), q(qi))),
            format!("q = {qq}: relation {:?}", r.relation_rational()),
        )?;
        check(r.dims == Some((1, qq as u64)), format!("q = {qq}: dims {:?}", r.dims))?;
        check(t < limit, format!("q = {qq}: {t:?} exceeds {limit:?}"))?;
    }
    Ok(format!("GL2(F_q), q in {{2,3,5,7}}: T^2 = (q-1)T + q, dims {{1, q}}; slowest {slowest:.2?}"))
}

fn criterion_2() -> Outcome {
    let g = build_group(Family::GL, 2, 5).map_err(|e| e.to_string())?;
    let b = g.subgroup("B").map_err(|e| e.to_string())?;
    for th in TorusCharacter::all(2, 5) {
        if th.exponents[0] == th.exponents[1] {
            continue;
        }
        let r = q_parameter(&g, b, &th).map_err(|e| e.to_string())?;
        check(
            r.end_dim == 1 && r.q_value == q(1),
            format!("{:?}: end_dim {} q {}", th.exponents, r.end_dim, r.q_value),
        )?;
    }
    let rep = run_pipeline(&common::load("gl2_regular"), &default_table()).map_err(|e| e.to_string())?;
    check(rep.phi_theta.count == 0, "pipeline Φ_θ is not empty")?;
    check(rep.certificate.theta_families.is_empty(), "pipeline emits θ-walls")?;
    check(rep.hecke.rank == 0, "pipeline Hecke rank is not 0")?;
    Ok("GL2(F_5), θ1 ≠ θ2 (all 20 characters): end_dim 1, q = 1; pipeline Φ_θ = ∅, no θ-walls".into())
}

fn criterion_3() -> Outcome {
    for qq in [3usize, 5, 7] {
        let g = build_group(Family::SL, 2, qq).map_err(|e| e.to_string())?;
        let half = (qq as i64 - 1) / 2;
        let r = q_parameter(&g, g.subgroup("B").map_err(|e| e.to_string())?, &TorusCharacter::new(vec![half, 0]))
            .map_err(|e| e.to_string())?;
        let d = (qq as u64 + 1) / 2;
        check(r.dims == Some((d, d)) && r.q_value == q(1), format!("q = {qq}: dims {:?}, q {}", r.dims, r.q_value))?;
        let mut spec = common::load("sl2_quadratic");
        spec.q = Some(qq as u64);
        let phi = theta_root_subsystem(&spec.datum, &spec.theta);
        check(phi.is_empty(), format!("q = {qq}: Φ_θ = {phi:?}"))?;
        let rep = run_pipeline(&spec, &default_table()).map_err(|e| e.to_string())?;
        check(
            rep.walls.iter().all(|w| w.relevant == Some(false) && !w.theta_member),
            format!("q = {qq}: a wall is relevant or θ-member"),
        )?;
        check(rep.relevance_matches_theta, "relevance differs from θ-membership")?;
    }
    let t = ThetaDatum::new(vec![qr(1, 2)], depthzero::rootdata::FrobeniusAction::identity(1)).unwrap();
    check(theta_root_subsystem(&depthzero::rootdata::RootDatum::sl2(), &t).is_empty(), "SL2 s = 1/2")?;
    Ok("SL2(F_q), q in {3,5,7}, quadratic θ: dims ((q+1)/2, (q+1)/2), q = 1; Φ_θ = ∅, no wall relevant".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for qq in [3usize, 5] {
        let big = build_group(Family::GL, 2, qq).map_err(|e| e.to_string())?;
        let small = build_group(Family::SL, 2, qq).map_err(|e| e.to_string())?;
        let b = big.subgroup("B").map_err(|e| e.to_string())?;
        for th in TorusCharacter::all(2, qq) {
            let r = check_transfer(&big, &small, b, &th).map_err(|e| format!("q = {qq} {:?}: {e}", th.exponents))?;
            check(r.equal, format!("q = {qq} {:?}: {} vs {}", th.exponents, r.big.q_value, r.small.q_value))?;
            count += 1;
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(60), format!("sweep took {t:?}"))?;
    Ok(format!("GL2/SL2 transfer equal for all {count} torus characters, q in {{3,5}}; {t:.2?}"))
}

fn criterion_5() -> Outcome {
    let mut split = 0;
    for name in common::valid_fixtures() {
        let spec = common::load(&name);
        if !common::is_split(&spec) {
            continue;
        }
        let a = analyze(&spec).map_err(|e| format!("{name}: {e}"))?;
        check(a.norm.scale.iter().all(|r| *r == q(1)), format!("{name}: r_a = {:?}", a.norm.scale))?;
        split += 1;
    }
    let a = analyze(&common::load("ramified_a1")).map_err(|e| e.to_string())?;
    check(a.norm.scale.iter().all(|r| *r == qr(1, 2)), format!("ramified A1: r_a = {:?}", a.norm.scale))?;
    check(a.norm.gradients().is_reduced(), "ramified A1: Φ^norm not reduced")?;
    check(a.norm.scalar_agreement(6), "ramified A1: scalar-multiple agreement fails")?;
    Ok(format!("r_a = 1 on {split} split fixtures; ramified A1: r_a = 1/2, reduced, agreement on |level| ≤ 6"))
}

/// `B` unimodular with new roots `B α` and new coroots `c` with `B^T c = α∨`.
fn lattice_isomorphic(a: &depthzero::calc::Analysis) -> bool {
    let gt = &a.theta_datum;
    let b = &gt.cocharacter_basis;
    if gt.index != q(1) || inverse(b).is_none() {
        return false;
    }
    let sys = a.norm.gradients();
    (0..sys.len()).all(|i| {
        let new_root: Vec<Q> = b.iter().map(|v| dot(sys.root(i), v)).collect();
        let new_co: Vec<Q> = gt.datum.coroots()[i].iter().map(|&x| q(x)).collect();
        let back = b
            .iter()
            .zip(&new_co)
            .fold(vec![q(0); b.len()], |acc, (v, &c)| acc.iter().zip(scale(c, v)).map(|(x, y)| x + y).collect());
        new_root.iter().map(|x| x.to_integer()).collect::<Vec<_>>() == gt.datum.roots()[i] && back == *sys.coroot(i)
    })
}

fn criterion_6() -> Outcome {
    let names = common::valid_fixtures();
    let mut iso_checked = 0;
    for name in &names {
        let spec = common::load(name);
        let a = analyze(&spec).map_err(|e| format!("{name}: {e}"))?;
        let gt = &a.theta_datum;
        validate_root_datum(gt.datum.rank(), gt.datum.roots().to_vec(), gt.datum.coroots().to_vec())
            .map_err(|e| format!("{name}: {e}"))?;
        check(gt.frobenius_preserves_delta(), format!("{name}: Frobenius does not preserve Δ"))?;
        if common::is_split(&spec) && spec.theta.s.iter().all(|x| *x == q(0)) {
            check(lattice_isomorphic(&a), format!("{name}: not lattice-isomorphic to the input"))?;
            iso_checked += 1;
        }
    }
    Ok(format!(
        "{} fixtures valid with Δ preserved; {iso_checked} split s = 0 fixtures lattice-isomorphic",
        names.len()
    ))
}

/// Foot of the perpendicular from the origin onto a wall, in slice coordinates.
fn foot(w: &Wall) -> Vec<Q> {
    let n2 = dot(&w.gradient, &w.gradient);
    scale(-w.constant / n2, &w.gradient)
}

fn criterion_7() -> Outcome {
    let mut points = 0;
    let names = common::valid_fixtures();
    for name in &names {
        let spec = common::load(name);
        let a = analyze(&spec).map_err(|e| format!("{name}: {e}"))?;
        let dim = a.slice.dim();
        let walls = a.walls().map_err(|e| format!("{name}: {e}"))?;
        let mut sample: Vec<Vec<Q>> = vec![vec![q(0); dim]];
        let feet: Vec<Vec<Q>> = walls.iter().map(foot).collect();
        for (i, f) in feet.iter().enumerate() {
            sample.push(f.clone());
            // alcove interior: between the base point and the wall
            sample.push(scale(qr(1, 2), f));
            for g in &feet[i + 1..] {
                sample.push(f.iter().zip(g).map(|(x, y)| (x + y) / q(2)).collect());
            }
        }
        for c in &sample {
            let x = a.point(c);
            let (left, right) = a.quotient_pairs(&x).map_err(|e| format!("{name}: {e}"))?;
            let r = isomorphic_up_to_duals(&left, &right);
            check(r.isomorphic, format!("{name} at {x:?}: {}", r.explanation))?;
            points += 1;
        }
    }
    Ok(format!("quotient pairs isomorphic up to duals at {points} points on {} fixtures", names.len()))
}

type Key = (usize, CoxElem);

fn random_word(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let len = rng.gen_range(0..=6);
    (0..len).map(|_| rng.gen_range(0..n)).collect()
}

fn random_basis(rng: &mut ChaCha8Rng, h: &HeckeAlgebra) -> (usize, Vec<usize>) {
    (rng.gen_range(0..h.omega.order()), random_word(rng, h.cox.rank()))
}

/// Group product of `Ω ⋉ W` computed on words: `(ω1, u)(ω2, v) = μ (ω1ω2, ω2^{-1}(u) v)`.
fn word_group_product(h: &HeckeAlgebra, a: &(usize, Vec<usize>), b: &(usize, Vec<usize>)) -> (Key, Q) {
    let inv = h.omega.inv(b.0);
    let mut word: Vec<usize> = a.1.iter().map(|&s| h.omega.perms[inv][s]).collect();
    word.extend(&b.1);
    ((h.omega.mul(a.0, b.0), h.cox.from_word(&word)), h.omega.mu[a.0][b.0])
}

fn braid(i: usize, j: usize, m: u32) -> Vec<usize> {
    (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect()
}

fn hecke_laws(label: &str, h: &HeckeAlgebra, rng: &mut ChaCha8Rng, rounds: usize) -> Result<usize, String> {
    let mut checks = 0;
    let n = h.cox.rank();
    for _ in 0..rounds {
        let (a, b, c) = (random_basis(rng, h), random_basis(rng, h), random_basis(rng, h));
        let (ea, eb, ec) = (h.basis(a.0, &a.1), h.basis(b.0, &b.1), h.basis(c.0, &c.1));
        let ab = h.multiply(&ea, &eb);
        check(
            h.multiply(&ab, &ec) == h.multiply(&ea, &h.multiply(&eb, &ec)),
            format!("{label}: associativity fails on {a:?} {b:?} {c:?}"),
        )?;
        // q = 1 gives the twisted group algebra
        let at1 = h.specialize(&ab, q(1)).map_err(|e| e.to_string())?;
        let (key, mu) = word_group_product(h, &a, &b);
        let mut expected = BTreeMap::new();
        expected.insert(key, mu);
        check(at1 == expected, format!("{label}: q = 1 product differs on {a:?} {b:?}"))?;
        // braid relation inside a random context
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let m = h.cox.m(i, j);
        if i != j && m != 0 {
            let lhs = h.multiply(&h.multiply(&ea, &h.basis(0, &braid(i, j, m))), &eb);
            let rhs = h.multiply(&h.multiply(&ea, &h.basis(0, &braid(j, i, m))), &eb);
            check(lhs == rhs, format!("{label}: braid relation ({i}, {j}) fails"))?;
            let direct =
                (0..m as usize).fold(h.unit(), |acc, k| h.multiply(&acc, &h.generator(if k % 2 == 0 { i } else { j })));
            check(direct == h.basis(0, &braid(i, j, m)), format!("{label}: generator product ({i}, {j})"))?;
        }
        checks += 3;
    }
    Ok(checks)
}

fn algebra(m: Vec<Vec<u32>>, perms: Vec<Vec<usize>>, mu: Option<Vec<Vec<Q>>>, exps: &[Q]) -> HeckeAlgebra {
    let cox = CoxeterPresentation::new(m).unwrap();
    let omega = OmegaGroup::new(&cox, perms, mu).unwrap();
    HeckeAlgebra::new(cox, omega, ParameterFunction::from_exponents(exps)).unwrap()
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let a1 = algebra(
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![0, 1], vec![1, 0]],
        Some(vec![vec![q(1), q(1)], vec![q(1), q(-1)]]),
        &[q(1), q(1)],
    );
    let a2 = algebra(
        vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]],
        vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        None,
        &[q(1), q(1), q(1)],
    );
    let c2 = algebra(
        vec![vec![1, 4, 2], vec![4, 1, 4], vec![2, 4, 1]],
        vec![vec![0, 1, 2], vec![2, 1, 0]],
        None,
        &[q(1), q(2), q(1)],
    );
    let mut total = 0;
    for (label, h) in [("~A1", &a1), ("~A2", &a2), ("~C2", &c2)] {
        total += hecke_laws(label, h, &mut rng, 1200)?;
    }
    let t = start.elapsed();
    check(total >= 10_000, format!("only {total} checks"))?;
    check(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!(
        "{total} associativity / braid / q = 1 checks on ~A1 (Ω = Z/2, μ = -1), ~A2 (Ω = Z/3), ~C2 (Ω = Z/2); {t:.2?}"
    ))
}

fn dzcalc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dzcalc")).args(args).output().expect("dzcalc runs")
}

fn criterion_9() -> Outcome {
    let names = common::valid_fixtures();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut violations = 0;
    for name in &names {
        let path = common::fixture(name);
        let p = path.to_str().unwrap();
        let first = dzcalc(&["--spec", p, "--emit", "machine"]);
        let second = dzcalc(&["--spec", p, "--emit", "machine"]);
        check(first.status.code() == Some(0), format!("{name}: exit {:?}", first.status.code()))?;
        check(first.stdout == second.stdout, format!("{name}: reports differ"))?;
        let spec = common::load(name);
        let in_process = emit_report(&run_pipeline(&spec, &default_table()).unwrap(), EmitMode::Machine);
        check(in_process.as_bytes() == first.stdout, format!("{name}: CLI and library reports differ"))?;
        let v: serde_json::Value = serde_json::from_slice(&first.stdout).map_err(|e| e.to_string())?;
        check(
            v["certificate"]["h_theta_subset_h"] == serde_json::Value::Bool(true),
            format!("{name}: no certificate"),
        )?;
        // synthetic violation: θ-wall levels moved off the walls of G
        if v["certificate"]["theta_families"].as_array().is_some_and(|a| !a.is_empty()) {
            let mut raw: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
            raw["certificate_probe"] = serde_json::json!({"shift_theta_levels": "1/3"});
            let probe = dir.path().join(format!("{name}_probe.json"));
            std::fs::write(&probe, raw.to_string()).unwrap();
            let out = dzcalc(&["--spec", probe.to_str().unwrap()]);
            check(out.status.code() == Some(2), format!("{name}: shifted probe exit {:?}", out.status.code()))?;
            violations += 1;
        }
    }
    let shipped = dzcalc(&["--spec", common::fixture("certificate_probe").to_str().unwrap()]);
    check(shipped.status.code() == Some(2), "shipped probe fixture does not exit 2")?;
    Ok(format!(
        "{} fixtures byte-identical across runs with certificate; {} synthetic violations exit 2",
        names.len(),
        violations + 1
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Iwahori parameter reproduction", criterion_1),
        ("non-orthogonal character", criterion_2),
        ("quadratic-character SL2", criterion_3),
        ("transfer sweep", criterion_4),
        ("normalization", criterion_5),
        ("G_theta datum validity", criterion_6),
        ("reductive-quotient comparison", criterion_7),
        ("Hecke algebra laws", criterion_8),
        ("determinism and certificates", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
