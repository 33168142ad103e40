//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use latglue::discriminant::{discr, isotropic_elements, GluingKernel};
use latglue::exact::{determinant, smith_normal_form};
use latglue::extensions::{overlattice, roots};
use latglue::lattice::parse_lattice_expr;
use latglue::totality::{case_analysis, critical_point_count, Verdict};
use latglue::wronskian::{
    critical_polynomial, diagonal_image_bidegree, mobius_realifiable, real_root_count,
    total_critical_multiplicity, Poly, RationalMap,
};
use latglue::Limits;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn latglue(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_latglue")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn verify_json(claim: &str) -> (i32, Value) {
    let (code, out) = latglue(&["verify", claim, "--format", "json"]);
    (code, serde_json::from_str(&out).unwrap_or(Value::Null))
}

/// `computed` of every step whose description starts with `[anchor]` and contains `needle`.
fn computed(report: &Value, anchor: &str, needle: &str) -> Vec<String> {
    let tag = format!("[{anchor}]");
    report["steps"]
        .as_array()
        .map(|steps| {
            steps
                .iter()
                .filter(|s| {
                    let d = s["desc"].as_str().unwrap_or("");
                    d.starts_with(&tag) && d.contains(needle)
                })
                .map(|s| s["computed"].as_str().unwrap_or("").to_string())
                .collect()
        })
        .unwrap_or_default()
}

fn all_steps_ok(report: &Value) -> bool {
    report["status"] == "verified" && report["steps"].as_array().is_some_and(|s| s.iter().all(|x| x["ok"] == true))
}

fn criterion_1() -> Result<(), String> {
    let (code, r) = verify_json("lemma31");
    let checks = [
        (computed(&r, "lemma31.a", "orbits of order-3") == ["1"], "one order-3 orbit"),
        (computed(&r, "lemma31.a", "orbits of order-9") == ["0"], "no order-9 orbit"),
        (computed(&r, "lemma31.b", "determinant") == ["3"], "det 3"),
        (computed(&r, "lemma31.b", "signature") == ["(0,0,6)"], "signature (0,0,6)"),
        (computed(&r, "lemma31.b", "<2/3>") == ["true"], "discriminant <2/3>"),
        (computed(&r, "lemma31.c", "extension vs roots") == ["72"], "72 roots"),
        (computed(&r, "lemma31.c", "roots of 3A2") == ["18"], "18 roots"),
        (computed(&r, "lemma31.d", "") == ["0"], "no quasi-primitive extension"),
        (all_steps_ok(&r), "all steps ok"),
        (code == 0, "exit 0"),
    ];
    first_failure(&checks)
}

fn criterion_2() -> Result<(), String> {
    let (code, r) = verify_json("lemma32");
    let checks = [
        (computed(&r, "lemma32.a", "") == ["1"], "one order-3 orbit"),
        (computed(&r, "lemma32.b", "orbits") == ["1"], "one order-9 orbit"),
        (computed(&r, "lemma32.d", "") == ["[6,4]"], "l3 = 6 and 4"),
        (computed(&r, "lemma32.e", "ordered independent pairs") == computed(&r, "lemma32.e", "union"), "every pair has union 8, overlap 4"),
        (computed(&r, "lemma32.f", "order-27") == ["0"], "no order-27 kernel"),
        (computed(&r, "lemma32.g", "admissible") == ["[(2,2),(3,3),(4,1)]"], "patterns"),
        (computed(&r, "lemma32.g", "quasi-primitive") == ["false", "false"], "(3,3) and (4,1) rejected"),
        (computed(&r, "lemma32.g", "support size") == ["3", "3"], "support-3 differences"),
        (computed(&r, "lemma32.c", "is quasi-primitive") == ["true", "true"], "both survivors quasi-primitive"),
        (all_steps_ok(&r), "all steps ok"),
        (code == 0, "exit 0"),
    ];
    first_failure(&checks)
}

fn criterion_3() -> Result<(), String> {
    let (code, r) = verify_json("prop33");
    let checks = [
        (computed(&r, "prop33.a", "signature") == ["(3,0,19)"], "L signature (3,19)"),
        (computed(&r, "prop33.b", "rank of any orthogonal complement") == ["4"], "T rank 4"),
        (computed(&r, "prop33.b", "signature of T") == ["(2,0,2)"], "T signature (2,2)"),
        (computed(&r, "prop33.d", "l3(discr T)") == ["[4,4]"], "l3 forced to 4"),
        (computed(&r, "prop33.e", "8A2+<-4>").first().is_some_and(|g| g.ends_with("-4]]")), "8A2+<-4>"),
        (computed(&r, "prop33.e", "signature of 8A2+<-4>") == ["(0,0,17)"], "negative definite"),
        (computed(&r, "prop33.g", "forces") == ["inconsistent"], "signature contradiction"),
        (r["certificates"].get("scope").is_some(), "scope note"),
        (all_steps_ok(&r), "all steps ok"),
        (code == 0, "exit 0"),
    ];
    first_failure(&checks)
}

fn criterion_4() -> Result<(), String> {
    let (code, r) = verify_json("theorem");
    let components: Vec<&str> = r["certificates"]["components"]
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default();
    first_failure(&[
        (components == ["lemma31", "lemma32", "prop33"], "components"),
        (r["status"] == "verified", "status verified"),
        (code == 0, "exit 0"),
    ])
}

fn criterion_5() -> Result<(), String> {
    let (code, out) = latglue(&["cases", "--degree", "4", "--genus", "1"]);
    let lines: Vec<&str> = out.lines().collect();
    let cli_ok = code == 0
        && lines.len() == 3
        && lines[0].starts_with("(1,1) real-structure")
        && lines[1].starts_with("(2,2) excluded-by-count")
        && lines[2].starts_with("(4,4) reduces-to-cusp-curve, k = 8");
    let mut deg3 = true;
    let mut deg2 = true;
    for g in 0..=100u64 {
        let c3 = case_analysis(3, g).map_err(|e| e.to_string())?;
        let birational = c3.iter().find(|c| c.bidegree == (3, 3)).expect("(3,3) branch");
        if g >= 1 {
            deg3 &= birational.verdict == Verdict::ExcludedByCount && 2 * 3 - 2 + 3 * g > 4;
        }
        let c2 = case_analysis(2, g).map_err(|e| e.to_string())?;
        let b2 = c2.iter().find(|c| c.bidegree == (2, 2)).expect("(2,2) branch");
        let k = 2 * 2 - 2 + 2 * g;
        deg2 &= (b2.verdict == Verdict::ExcludedByCount) == (g + k > 1)
            && b2.witness.first().is_some_and(|w| w.lhs == (g + k) as i64 && w.rhs == 1);
    }
    first_failure(&[(cli_ok, "degree 4, genus 1 split"), (deg3, "degree 3 birational branch"), (deg2, "degree 2 bound g + k <= 1")])
}

fn criterion_6() -> Result<(), String> {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut discr_ok = true;
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let l = common::random_even_lattice(&mut rng, n);
        let d = discr(&l).map_err(|e| e.to_string())?;
        discr_ok &= d.form.order() == l.determinant().abs();
    }
    let mut snf_ok = true;
    for _ in 0..200 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m = common::random_int_matrix(&mut rng, r, c, 6);
        let s = smith_normal_form(&m);
        let f = s.invariant_factors();
        snf_ok &= s.left.mul(&m).mul(&s.right) == s.diagonal
            && determinant(&s.left).map(|d| d.abs() == BigInt::from(1)).unwrap_or(false)
            && determinant(&s.right).map(|d| d.abs() == BigInt::from(1)).unwrap_or(false)
            && f.windows(2).all(|w| w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && (&w[1] % &w[0]).is_zero())
            && (0..r).all(|i| (0..c).all(|j| i == j || s.diagonal.get(i, j).is_zero()));
        if r == c {
            let det = determinant(&m).map_err(|e| e.to_string())?;
            let prod: BigInt = f.iter().product();
            snf_ok &= prod == det.abs();
        }
    }
    let mut roots_ok = true;
    for (name, count) in [("A2", 6), ("D4", 24), ("E6", 72), ("E7", 126), ("E8", 240)] {
        let l = parse_lattice_expr(name).map_err(|e| e.to_string())?;
        let fast = roots(&l, &limits).map_err(|e| e.to_string())?.len();
        roots_ok &= fast == count && common::box_root_count(&l, &common::highest_root_box(name)) == count;
    }
    let base = parse_lattice_expr("3A2").map_err(|e| e.to_string())?;
    let form = discr(&base).map_err(|e| e.to_string())?.form;
    let iso = isotropic_elements(&form, &limits).map_err(|e| e.to_string())?;
    let mut kernels = vec![GluingKernel::trivial(form.clone())];
    let mut seen = std::collections::BTreeSet::new();
    for x in iso.iter().filter(|x| !x.is_zero()) {
        for y in iso.iter() {
            for gens in [vec![x.clone()], vec![x.clone(), y.clone()]] {
                if let Ok(k) = GluingKernel::new(form.clone(), gens) {
                    if seen.insert(k.elements()) {
                        kernels.push(k);
                    }
                }
            }
        }
    }
    let mut law_ok = kernels.len() == 5;
    for k in &kernels {
        let ext = overlattice(&base, k, &limits).map_err(|e| e.to_string())?;
        let expected = base.determinant().abs() / BigInt::from(k.order() * k.order());
        law_ok &= ext.determinant_law && ext.result.determinant().abs() == expected;
    }
    first_failure(&[
        (discr_ok, "|discr| = |det| on 500 lattices"),
        (snf_ok, "SNF identities"),
        (roots_ok, "root counts vs box oracle"),
        (law_ok, "determinant law over all isotropic kernels of 3A2"),
    ])
}

fn criterion_7() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut realifiable_ok = true;
    let mut positives = 0;
    for _ in 0..200 {
        let f = common::random_gaussian_map(&mut rng, 4);
        let phi = mobius_realifiable(&f).map_err(|e| e.to_string())?;
        let delta = diagonal_image_bidegree(&f).map_err(|e| e.to_string())?.delta;
        positives += usize::from(phi.is_some());
        realifiable_ok &= phi.is_some() == (delta == 1);
    }
    let mut sturm_ok = true;
    for p in common::sturm_corpus(&mut rng, 400) {
        sturm_ok &= real_root_count(&p).map_err(|e| e.to_string())? == common::discriminant_sign_real_roots(&p);
    }
    let mut count_ok = true;
    for d in 1..=6usize {
        for _ in 0..100 {
            let p = common::random_real_poly(&mut rng, d);
            let q = common::random_real_poly(&mut rng, d - 1);
            let f = RationalMap::new(Poly::from_real(&p), Poly::from_real(&q)).map_err(|e| e.to_string())?;
            if f.is_constant() {
                continue;
            }
            let crit = critical_polynomial(&f).map_err(|e| e.to_string())?;
            count_ok &= crit.degree() == Some(critical_point_count(0, f.degree() as u64) as usize)
                && total_critical_multiplicity(&f).map_err(|e| e.to_string())? == 2 * f.degree() - 2;
        }
    }
    first_failure(&[
        (realifiable_ok && positives > 0 && positives < 200, "realifiable iff delta = 1"),
        (sturm_ok, "Sturm vs discriminant signs"),
        (count_ok, "2d - 2 critical points"),
    ])
}

fn first_failure(checks: &[(bool, &str)]) -> Result<(), String> {
    match checks.iter().find(|(ok, _)| !ok) {
        Some((_, what)) => Err(what.to_string()),
        None => Ok(()),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Result<(), String>, Duration); 7] = [
        ("1 lemma31: E6 is the only extension of 3A2, not quasi-primitive", criterion_1, Duration::from_secs(5)),
        ("2 lemma32: two quasi-primitive extensions of 8A2", criterion_2, Duration::from_secs(600)),
        ("3 prop33: signature contradiction", criterion_3, Duration::from_secs(30)),
        ("4 theorem: components lemma31, lemma32, prop33", criterion_4, Duration::from_secs(600)),
        ("5 case splits for degrees 2, 3, 4 and genus <= 100", criterion_5, Duration::from_secs(1)),
        ("6 lattice property suite", criterion_6, Duration::from_secs(120)),
        ("7 Wronskian suite", criterion_7, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(()) if elapsed <= budget => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {:.0?} budget)", budget),
            Err(what) => format!("FAIL ({what})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {name}: {verdict} [{:.2}s]", elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
