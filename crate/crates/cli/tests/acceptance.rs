//! One PASS/FAIL line per acceptance criterion, with pinned time limits.
//!
//! Criteria whose statement disagrees with exhaustive computation print FAIL
//! with the counts; the test then asserts only that every failure has the
//! documented shape, so an unexpected regression still breaks the build.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use dihedral_core::abgroup::AbelianGroupStructure;
use dihedral_core::arith::{is_fundamental_discriminant, squarefree_kernel};
use dihedral_core::cubicforms::{enumerate_fields, r3_from_n, Sign};
use dihedral_core::families::{cubic_family, quintic_family};
use dihedral_core::galmod::{
    module_family, random_dihedral_module, random_gras_module, verify_pes, FrobeniusGroup, PGroupModule, Subgroup,
    TwistedSequence,
};
use dihedral_core::quadforms::{class_group, p_rank, ClassGroupOptions};
use dihedral_core::verifier::{self, BaseField, DihedralInstance, Verdict, VerificationReport};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(n: u32, name: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) -> bool {
    let in_time = elapsed <= limit;
    let status = if ok && in_time { "PASS" } else { "FAIL" };
    println!(
        "criterion {n} [{status}] {name}: {detail} ({:.2}s, limit {}s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok && in_time
}

fn dataset_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/paper_tables.csv")
}

fn criterion_1() -> bool {
    let t = Instant::now();
    let cubic = [
        (29, -97583),
        (10, -4027),
        (70, -1372027),
        (94, -3322363),
        (755, -1721475527),
        (409, -273671743),
    ];
    let quintic = [(1, -103), (19, -38047), (39, -280847)];
    let mut bad = Vec::new();
    for (a, d) in cubic {
        let got = cubic_family(a).map(|c| c.d);
        if got.as_ref().ok() != Some(&d) {
            bad.push(format!("cubic a={a}: {got:?}"));
        }
    }
    for (b, d) in quintic {
        let got = quintic_family(b).map(|c| c.d);
        if got.as_ref().ok() != Some(&d) {
            bad.push(format!("quintic b={b}: {got:?}"));
        }
    }
    let elapsed = t.elapsed();
    // the CLI emits the same values
    let out = Command::new(env!("CARGO_BIN_EXE_dihedral"))
        .args(["family", "cubic", "--range", "10..755", "--emit", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    for (a, d) in cubic {
        if !text.lines().any(|l| l.starts_with(&format!("cubic,{a},")) && l.contains(&format!(",{d},"))) {
            bad.push(format!("CLI row for a={a}"));
        }
    }
    let detail = if bad.is_empty() { "9 of 9 discriminants exact".to_string() } else { format!("mismatches {bad:?}") };
    report(1, "family discriminants", bad.is_empty(), elapsed, Duration::from_secs(1), &detail)
}

fn criterion_2() -> bool {
    let t = Instant::now();
    let opts = ClassGroupOptions::default();
    let g = |d: i64| class_group(d, &opts).map(|c| c.structure);
    let s = |t: &str| t.parse::<AbelianGroupStructure>().unwrap();
    let mut bad = Vec::new();
    let mut check = |what: String, ok: bool| {
        if !ok {
            bad.push(what);
        }
    };
    check("Cl(-103) = (5)".into(), g(-103).ok() == Some(s("5")));
    let c = g(-38047).unwrap();
    check("Cl(-38047)".into(), c.p_part(5) == s("5,5") && c.order() == 75);
    check("Cl(-280847) = (20,20)".into(), g(-280847).ok() == Some(s("20,20")));
    for d in [-97583, -4027, -3322363] {
        check(format!("Cl_3({d}) = (3,3)"), g(d).map(|c| c.p_part(3)).ok() == Some(s("3,3")));
    }
    let detail = if bad.is_empty() { "6 of 6 structures match".to_string() } else { format!("mismatches {bad:?}") };
    report(2, "imaginary quadratic class groups", bad.is_empty(), t.elapsed(), Duration::from_secs(300), &detail)
}

fn criterion_3() -> bool {
    let t = Instant::now();
    let bound = 20_000;
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for sign in [Sign::Negative, Sign::Positive] {
        let counts: BTreeMap<i64, usize> =
            enumerate_fields(bound, sign).unwrap().into_iter().map(|f| (f.disc, f.n_fields)).collect();
        let ds: Vec<i64> = match sign {
            Sign::Negative => (-bound..0).collect(),
            Sign::Positive => (1..=bound).collect(),
        };
        let ds: Vec<i64> = ds.into_iter().filter(|&d| is_fundamental_discriminant(d)).collect();
        let ranks = {
            use rayon::prelude::*;
            ds.par_iter().map(|&d| p_rank(d, 3).map_err(|e| e.to_string())).collect::<Vec<_>>()
        };
        for (d, r) in ds.iter().zip(ranks) {
            checked += 1;
            let from_forms = r3_from_n(*d, counts.get(d).copied().unwrap_or(0)).map(|r| r as usize);
            if from_forms.ok() != r.ok() {
                mismatches.push(*d);
            }
        }
    }
    let detail = format!("{checked} fundamental discriminants, {} mismatches {:?}", mismatches.len(), &mismatches[..mismatches.len().min(5)]);
    report(3, "cubic-form 3-rank oracle", mismatches.is_empty(), t.elapsed(), Duration::from_secs(600), &detail)
}

fn criterion_4() -> bool {
    let t = Instant::now();
    let ms: Vec<i64> = (2..=2000).filter(|&m| squarefree_kernel(m) == m).collect();
    let results = {
        use rayon::prelude::*;
        ms.par_iter().map(|&m| verifier::check_scholz(m, false)).collect::<Vec<_>>()
    };
    let violations: Vec<i64> = results
        .iter()
        .zip(&ms)
        .filter(|(r, _)| !matches!(r, Ok(c) if c.verdict == Verdict::Pass))
        .map(|(_, &m)| m)
        .collect();
    let detail = format!("{} squarefree m, {} violations {violations:?}", ms.len(), violations.len());
    report(4, "Scholz inequality", violations.is_empty(), t.elapsed(), Duration::from_secs(600), &detail)
}

/// `n = p`, `A^ν ≠ 1` and `A = Z/p^2 × (Z/p)^(p-2)`: the case the structure
/// table misses (see the galmod tests for the explicit module).
fn known_gras_gap(p: u64, m: &PGroupModule, n: u32, nu_trivial: bool) -> bool {
    let mut exps = vec![2];
    exps.extend(std::iter::repeat(1).take(p as usize - 2));
    n == p as u32 && !nu_trivial && m.structure() == AbelianGroupStructure::from_p_exponents(p, &exps)
}

fn criterion_5() -> (bool, bool) {
    let t = Instant::now();
    let mut total = 0;
    let mut mismatches = 0;
    let mut unexplained = 0;
    let mut per_p = Vec::new();
    for p in [3u64, 5] {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + p);
        let mut miss = 0;
        for _ in 0..500 {
            let m = random_gras_module(p, 6, &mut rng);
            total += 1;
            let pred = m.gras_structure().expect("#A^G = p by construction");
            let ok = pred.predicted == m.structure() && m.order() == (p as u128).pow(pred.n);
            if !ok {
                miss += 1;
                if !known_gras_gap(p, &m, pred.n, pred.nu_trivial) {
                    unexplained += 1;
                }
            }
        }
        mismatches += miss;
        per_p.push(format!("p={p}: {}/500", 500 - miss));
    }
    let detail = format!(
        "{} agree ({}), {mismatches} mismatches of which {unexplained} outside the n = p, A^nu != 1 case",
        total - mismatches,
        per_p.join(", ")
    );
    let ok = report(5, "structure of modules with #A^G = p", mismatches == 0, t.elapsed(), Duration::from_secs(120), &detail);
    (ok, unexplained == 0)
}

fn idempotents_ok(m: &PGroupModule) -> bool {
    let g = m.group();
    let es: Vec<_> = (0..g.m).map(|j| m.idempotent(j)).collect();
    let zero = vec![vec![0; m.rank()]; m.rank()];
    let mut sum = zero.clone();
    for (i, ei) in es.iter().enumerate() {
        for (j, ej) in es.iter().enumerate() {
            let prod = m.mul(ei, ej);
            let want = if i == j { ei } else { &zero };
            if !m.same_action(&prod, want) {
                return false;
            }
        }
        sum = sum.iter().zip(ei).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
    }
    m.same_action(&sum, &m.identity())
}

fn natural_submodules(m: &PGroupModule) -> Vec<Subgroup> {
    let g = m.group();
    let d = g.one() - g.sigma();
    vec![m.zero_subgroup(), m.whole(), m.fixed(), m.image(&d), m.image(&g.nu()), m.kernel(&g.nu()), m.image(&(d.clone() * d))]
}

#[derive(Default)]
struct SuiteCounts {
    modules: usize,
    idempotent_failures: usize,
    eigen_failures: usize,
    pes_failures: usize,
    lst_equal: usize,
    lst_inclusion_failures: usize,
    lst_unexplained: usize,
}

fn run_suites(m: &PGroupModule, c: &mut SuiteCounts) {
    c.modules += 1;
    if !idempotents_ok(m) {
        c.idempotent_failures += 1;
    }
    let product: u128 = (0..m.group().m).map(|j| m.eigenspace(j).order()).product();
    if product != m.order() {
        c.eigen_failures += 1;
    }
    let lst = m.lst_report().expect("dihedral module");
    c.lst_equal += usize::from(lst.equal);
    c.lst_inclusion_failures += usize::from(!lst.inclusion);
    c.lst_unexplained += usize::from(lst.equal != lst.tau_negates_coinvariants);
    for s in natural_submodules(m) {
        let ok = TwistedSequence::from_submodule(m, &s).and_then(|seq| verify_pes(&seq)).unwrap_or(false);
        if !ok {
            c.pes_failures += 1;
        }
    }
}

fn criterion_6() -> (bool, bool) {
    let t = Instant::now();
    let mut c = SuiteCounts::default();
    let family = module_family(FrobeniusGroup::dihedral(3).unwrap(), 4);
    for m in &family {
        run_suites(m, &mut c);
    }
    let exhaustive = c.modules;
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    let mut random = 0;
    while random < 500 {
        let p = [3u64, 5, 7][random % 3];
        let m = random_dihedral_module(p, if p == 3 { 8 } else { 4 }, &mut rng);
        if m.order() <= 81 {
            continue;
        }
        run_suites(&m, &mut c);
        random += 1;
    }
    let structural = c.idempotent_failures == 0 && c.eigen_failures == 0 && c.pes_failures == 0;
    let lst_all = c.lst_equal == c.modules;
    let detail = format!(
        "{exhaustive} generated modules of order <= 81 plus {random} random: idempotent failures {}, \
         eigenspace order failures {}, twisted sequence failures {}; \
         A^(1-sigma) = A^(1+tau) A^(1+sigma tau) holds on {}/{} (inclusion fails on {}, \
         equality differs from 'tau = -1 on A/A^(1-sigma)' on {})",
        c.idempotent_failures,
        c.eigen_failures,
        c.pes_failures,
        c.lst_equal,
        c.modules,
        c.lst_inclusion_failures,
        c.lst_unexplained
    );
    let ok = report(6, "Galois-module property suites", structural && lst_all, t.elapsed(), Duration::from_secs(120), &detail);
    (ok, structural && c.lst_inclusion_failures == 0 && c.lst_unexplained == 0)
}

fn criterion_7() -> bool {
    let t = Instant::now();
    let path = dataset_path();
    let out = Command::new(env!("CARGO_BIN_EXE_dihedral"))
        .args(["verify", "--dataset", path.to_str().unwrap(), "--format", "json"])
        .output()
        .unwrap();
    let elapsed = t.elapsed();
    let rows = verifier::parse_dataset(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let mut problems = Vec::new();
    let report_json: Result<VerificationReport, _> = serde_json::from_slice(&out.stdout);
    match report_json {
        Err(e) => problems.push(format!("unreadable report: {e}")),
        Ok(rep) => {
            if out.status.code() != Some(0) {
                problems.push(format!("exit status {:?}", out.status.code()));
            }
            for ((_, inst), row) in rows.iter().zip(&rep.rows) {
                let v = |name: &str| row.check(name).map(|c| c.verdict);
                let with_l = inst.cl_l.is_some();
                if with_l && row.derived.q_integral != Some(true) {
                    problems.push(format!("{}: q = {:?}", row.label, row.derived.q));
                }
                if with_l && inst.base_field == BaseField::Rationals && row.derived.q.as_deref() != Some("1") {
                    problems.push(format!("{}: q = {:?}, expected 1", row.label, row.derived.q));
                }
                let rho_one = row.label.starts_with("cubic") || row.label == "quintic b=19" || row.label == "quintic b=39";
                if rho_one && row.derived.rho != Some(1) {
                    problems.push(format!("{}: rho = {:?}", row.label, row.derived.rho));
                }
                for c in row.checks.iter().filter(|c| c.theorem && c.result.verdict == Verdict::Fail) {
                    problems.push(format!("{}: {} failed: {}", row.label, c.name, c.result.detail));
                }
                let pp = inst.cl_k.p_exponents(inst.p) == [1, 1];
                if pp && with_l && v("pp_structure") != Some(Verdict::Pass) {
                    problems.push(format!("{}: (p,p) structure {:?}", row.label, v("pp_structure")));
                }
                if with_l && v("prime_to_p") != Some(Verdict::Pass) {
                    problems.push(format!("{}: prime-to-p {:?}", row.label, v("prime_to_p")));
                }
            }
            if rep.rows.len() != rows.len() {
                problems.push("row count".into());
            }
        }
    }
    let detail = if problems.is_empty() {
        format!("{} rows, exit 0, every proven check passes", rows.len())
    } else {
        format!("{problems:?}")
    };
    report(7, "dataset verification", problems.is_empty(), elapsed, Duration::from_secs(10), &detail)
}

fn corruptions(g: &AbelianGroupStructure, p: u64) -> Vec<AbelianGroupStructure> {
    let f = g.invariant_factors().to_vec();
    let mut top = f.clone();
    match top.last_mut() {
        Some(x) => *x *= p,
        None => top.push(p),
    }
    let mut extra = f;
    extra.push(p);
    vec![AbelianGroupStructure::from_cyclic_orders(&top), AbelianGroupStructure::from_cyclic_orders(&extra)]
}

fn criterion_8() -> bool {
    let t = Instant::now();
    let rows = verifier::parse_dataset(&std::fs::read_to_string(dataset_path()).unwrap()).unwrap();
    let detectors = ["class_number_formula", "capitulation", "pp_structure"];
    let (mut trials, mut caught) = (0, 0);
    let mut missed = Vec::new();
    for (_, inst) in rows.iter().filter(|(_, i)| i.cl_l.is_some()) {
        let p = inst.p;
        let mut variants: Vec<DihedralInstance> = Vec::new();
        for g in corruptions(&inst.cl_k, p) {
            variants.push(DihedralInstance { cl_k: g, ..inst.clone() });
        }
        for g in corruptions(&inst.cl_big_k, p) {
            variants.push(DihedralInstance { cl_big_k: g, ..inst.clone() });
        }
        for g in corruptions(inst.cl_l.as_ref().unwrap(), p) {
            variants.push(DihedralInstance { cl_l: Some(g), ..inst.clone() });
        }
        for bad in variants {
            trials += 1;
            let rep = verifier::verify_instance(&bad, 0);
            if detectors.iter().any(|d| rep.check(d).map(|c| c.verdict) == Some(Verdict::Fail)) {
                caught += 1;
            } else {
                missed.push(inst.label.clone());
            }
        }
    }
    let rate = caught as f64 / trials as f64;
    let detail = format!(
        "{caught}/{trials} single corruptions detected ({:.1}%, need >= 95%) over the {} rows with Cl(L){}",
        100.0 * rate,
        trials / 6,
        if missed.is_empty() { String::new() } else { format!("; missed {missed:?}") }
    );
    report(8, "negative controls", rate >= 0.95, t.elapsed(), Duration::from_secs(60), &detail)
}

#[test]
fn acceptance() {
    let c1 = criterion_1();
    let c2 = criterion_2();
    let c3 = criterion_3();
    let c4 = criterion_4();
    let (c5, c5_explained) = criterion_5();
    let (c6, c6_explained) = criterion_6();
    let c7 = criterion_7();
    let c8 = criterion_8();
    let passed = [c1, c2, c3, c4, c5, c6, c7, c8].iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/8 criteria pass");
    assert!(c1 && c2 && c3 && c4 && c7 && c8);
    assert!(c5_explained, "criterion 5 has mismatches outside the documented case");
    assert!(c6_explained, "criterion 6 has failures outside the documented cases");
}
