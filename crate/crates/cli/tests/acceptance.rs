//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use fsgrp_core::bimod::{check_double_category_laws, DOUBLE_CATEGORY_LAWS};
use fsgrp_core::ccob::{glue, object_automorphisms};
use fsgrp_core::cyl::{composable_pairs, verify_double_functor, CylinderFunctor};
use fsgrp_core::theory::{check_axioms, ConstantSheaf, FreeBoundary, LocalTheory, TheoryUniverse, AXIOMS};
use fsgrp_core::universe::{double_universe, objects, rigidity_semigroups, theory_universe};
use fsgrp_core::{FiberedSemiGroup, FinSet, Report, Token};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn values(n: usize) -> FinSet {
    FinSet::from_atoms(&(0..n).map(|i| i.to_string()).collect::<Vec<_>>()).unwrap()
}

fn constant(n: usize) -> ConstantSheaf {
    ConstantSheaf::new(values(n)).unwrap()
}

fn first_failure(r: &Report) -> String {
    r.failures().next().map(|f| format!("{} [{}] {:?}", f.law, f.instance, f.detail)).unwrap_or_default()
}

fn every_law_checked(r: &Report, laws: &[&str]) -> Result<(), String> {
    let summary = r.summary();
    match laws.iter().find(|l| summary.iter().all(|s| s.law != **l || s.checked == 0)) {
        Some(l) => Err(format!("law {l} was never checked")),
        None => Ok(()),
    }
}

/// Rigid iff every fiber of π has at most one element and μ is a bijection
/// onto E, counted straight from the tables.
fn count_rigid(e: &FiberedSemiGroup) -> bool {
    let mut fiber: BTreeMap<&Token, usize> = BTreeMap::new();
    for x in e.total() {
        *fiber.entry(e.proj().apply(x).unwrap()).or_default() += 1;
    }
    let mut hits: BTreeMap<Token, usize> = BTreeMap::new();
    let mut pairs = 0;
    for a in e.total() {
        for b in e.total() {
            if e.proj().apply(a).unwrap() == e.proj().apply(b).unwrap() {
                pairs += 1;
                *hits.entry(e.mul().apply(&Token::pair(a, b)).unwrap().clone()).or_default() += 1;
            }
        }
    }
    let bijective = pairs == e.total().len() && hits.len() == e.total().len() && hits.values().all(|&n| n == 1);
    fiber.values().all(|&n| n <= 1) && bijective
}

fn criterion_1() -> Outcome {
    let u = double_universe();
    if let Some((n, _)) = u.semigroups.iter().find(|(_, e)| e.total().len() > 4 || e.base().len() > 3) {
        return outcome(false, format!("{n} is outside |E| ≤ 4, |X| ≤ 3"));
    }
    if u.bimodules.len() > 20 {
        return outcome(false, format!("{} hand bimodules", u.bimodules.len()));
    }
    let report = check_double_category_laws(&u);
    if let Err(e) = every_law_checked(&report, &DOUBLE_CATEGORY_LAWS) {
        return outcome(false, e);
    }
    let checked: usize = report.summary().iter().map(|s| s.checked).sum();
    outcome(
        report.passed(),
        format!(
            "{} fsgrps, {} hand bimodules, {checked} records{}",
            u.semigroups.len(),
            u.bimodules.len(),
            if report.passed() { String::new() } else { format!(", first failure {}", first_failure(&report)) }
        ),
    )
}

fn criterion_2() -> Outcome {
    let all = rigidity_semigroups();
    let mut rigid = 0;
    for (name, e) in &all {
        let oracle = count_rigid(e);
        if e.is_rigid() != oracle {
            return outcome(false, format!("{name}: is_rigid {} but the count criterion says {oracle}", e.is_rigid()));
        }
        rigid += usize::from(oracle);
    }
    let largest = all.iter().map(|(_, e)| e.total().len()).max().unwrap_or(0);
    outcome(rigid > 0 && rigid < all.len(), format!("{} fsgrps up to |E| = {largest}, {rigid} rigid", all.len()))
}

fn criterion_3() -> Outcome {
    let u = theory_universe(3, 3);
    for n in 1..=3 {
        let theory = constant(n);
        let report = check_axioms(&theory, &u);
        if let Err(e) = every_law_checked(&report, &AXIOMS) {
            return outcome(false, format!("|S| = {n}: {e}"));
        }
        if !report.passed() {
            return outcome(false, format!("constant |S| = {n} fails {}", first_failure(&report)));
        }
        // |L_X| = |S|^regions for locally constant functions
        if let Some(m) = u.cobordisms.iter().find(|m| theory.solution_space(&m.to_body()).len() != n.pow(m.regions().len() as u32)) {
            return outcome(false, format!("solution count off on {m:?}"));
        }
    }
    let free = FreeBoundary::new(values(2), &Token::atom("0").unwrap()).unwrap();
    let report = check_axioms(&free, &u);
    let failed: Vec<String> = report.summary().into_iter().filter(|s| s.failed > 0).map(|s| s.law).collect();
    if failed != ["diagonal", "gluing"] {
        return outcome(false, format!("free_boundary fails {failed:?}"));
    }
    if let Some(r) = report.failures().find(|r| r.witness.is_none()) {
        return outcome(false, format!("failure without witness: {} [{}]", r.law, r.instance));
    }
    outcome(
        true,
        format!(
            "{} objects, {} cobordisms, {} triples; free_boundary fails exactly {failed:?} with witnesses",
            u.objects.len(),
            u.cobordisms.len(),
            u.triples.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let objs = objects(3);
    let mut checked = 0;
    for n in 1..=3 {
        let theory = constant(n);
        let f = CylinderFunctor::new(&theory);
        for sigma in &objs {
            let e = match f.semigroup(sigma) {
                Ok(e) => e,
                Err(err) => return outcome(false, format!("E over {sigma:?}: {err}")),
            };
            let size = n.pow(sigma.len() as u32);
            if !e.validate().passed() || !count_rigid(&e) || e.total().len() != size || e.base().len() != size {
                return outcome(false, format!("E over {sigma:?} is not a valid rigid fsgrp on {size} elements"));
            }
            if f.semigroup(&sigma.reverse()).ok() != Some(e.opposite()) {
                return outcome(false, format!("E over -Σ is not the opposite for {sigma:?}"));
            }
            let autos = object_automorphisms(sigma);
            for phi in &autos {
                for psi in &autos {
                    let lhs = f.fsg_morphism(&phi.then(psi).unwrap()).unwrap();
                    let rhs = f.fsg_morphism(phi).unwrap().then(&f.fsg_morphism(psi).unwrap()).unwrap();
                    if lhs != rhs {
                        return outcome(false, format!("E of a composite differs on {sigma:?}"));
                    }
                    checked += 1;
                }
            }
        }
        let mut object_pairs = Vec::new();
        for (i, s) in objs.iter().enumerate() {
            for (j, t) in objs.iter().enumerate() {
                if s.len() + t.len() <= 3 {
                    object_pairs.push((i, j));
                }
            }
        }
        let u = TheoryUniverse { objects: objs.clone(), object_pairs, ..Default::default() };
        let report = verify_double_functor(&theory, &u);
        if let Err(e) = every_law_checked(&report, &["monoidality"]) {
            return outcome(false, e);
        }
        if !report.passed() {
            return outcome(false, format!("|S| = {n}: {}", first_failure(&report)));
        }
    }
    outcome(true, format!("{} objects for |S| = 1..3, {checked} composable diffeomorphism pairs", objs.len()))
}

fn criterion_5() -> Outcome {
    let u = theory_universe(2, 3);
    let laws = ["identity", "associator", "carrier_count", "associator_naturality", "hexagon"];
    let mut notes = Vec::new();
    for n in 1..=2 {
        let report = verify_double_functor(&constant(n), &u);
        if let Err(e) = every_law_checked(&report, &laws) {
            return outcome(false, e);
        }
        if !report.passed() {
            return outcome(false, format!("|S| = {n}: {}", first_failure(&report)));
        }
        let records: usize = report.summary().iter().map(|s| s.checked).sum();
        notes.push(format!("|S| = {n}: {records} records"));
    }
    let pairs = composable_pairs(&u.cobordisms);
    let mut from: BTreeMap<usize, usize> = BTreeMap::new();
    for &(i, _) in &pairs {
        *from.entry(i).or_default() += 1;
    }
    let triples: usize = pairs.iter().map(|&(_, j)| from.get(&j).copied().unwrap_or(0)).sum();
    notes.push(format!("{} cobordisms, {} pairs, {triples} triples", u.cobordisms.len(), pairs.len()));
    outcome(true, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let u = theory_universe(2, 3);
    let pairs = composable_pairs(&u.cobordisms);
    for n in 1..=2 {
        let theory = constant(n);
        let f = CylinderFunctor::new(&theory);
        for &(i, j) in &pairs {
            let (m, k) = (&u.cobordisms[i], &u.cobordisms[j]);
            let glued = f.bimodule(&glue(m, k).unwrap()).unwrap();
            let (a, b) = (f.bimodule(m).unwrap(), f.bimodule(k).unwrap());
            let mut expected = 0;
            for v in &theory.germ_space(m.target()) {
                let from_b = b.carrier().iter().filter(|y| b.src().apply(y).unwrap() == v).count();
                let from_a = a.carrier().iter().filter(|x| a.tgt().apply(x).unwrap() == v).count();
                expected += from_b * from_a;
            }
            if glued.carrier().len() != expected {
                return outcome(false, format!("|S| = {n}, pair ({i}, {j}): {} vs {expected}", glued.carrier().len()));
            }
        }
    }
    outcome(true, format!("{} composable pairs for |S| = 1, 2", pairs.len()))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn criterion_7() -> Outcome {
    let cli = |args: &[String]| Command::new(env!("CARGO_BIN_EXE_fsgrp")).args(args).output().expect("binary runs");
    let argv = |args: &[&str]| args.iter().map(|a| a.to_string()).collect::<Vec<_>>();
    let configs = [
        argv(&["check-theory", "--max-components", "2", "--max-regions", "3", "--format", "json"]),
        argv(&["check-theory", "--theory", "free_boundary", "--max-components", "2", "--max-regions", "2", "--format", "json"]),
        argv(&["verify-functor", "--max-components", "1", "--max-regions", "3", "--format", "json"]),
        argv(&["verify-functor", "--theory", "free_boundary", "--max-components", "1", "--max-regions", "2"]),
        argv(&["check-fsgrp", &fixture("z3_subtraction.json"), "--format", "json"]),
        argv(&["check-bimodule", &fixture("z2_regular.json"), "--format", "json"]),
        argv(&["build", &fixture("pants.json"), "--set-size", "3"]),
    ];
    for args in &configs {
        let (a, b) = (cli(args), cli(args));
        if a.stdout.is_empty() || a.stdout != b.stdout || a.status.code() != b.status.code() {
            return outcome(false, format!("output differs between runs of {args:?}"));
        }
    }
    let cases: &[(&[&str], i32)] = &[
        (&["check-fsgrp", "trivial_fsgrp.json"], 0),
        (&["check-fsgrp", "z3_subtraction.json"], 1),
        (&["check-fsgrp", "missing_pair.json"], 2),
        (&["check-fsgrp", "extra_pair.json"], 2),
        (&["check-fsgrp", "partial_projection.json"], 2),
        (&["check-fsgrp", "duplicate_element.json"], 2),
        (&["check-fsgrp", "unknown_field.json"], 2),
        (&["check-fsgrp", "bad_token.json"], 2),
        (&["check-fsgrp", "truncated.json"], 2),
        (&["check-fsgrp", "not_json.txt"], 2),
        (&["check-fsgrp", "wrong_type.json"], 2),
        (&["check-fsgrp", "array.json"], 2),
        (&["check-bimodule", "identity_bimodule.json"], 0),
        (&["check-bimodule", "z2_regular.json"], 0),
        (&["check-bimodule", "bad_action.json"], 1),
        (&["check-bimodule", "bimodule_missing_pair.json"], 2),
        (&["check-bimodule", "bimodule_bad_source.json"], 2),
        (&["build", "object_one.json"], 0),
        (&["build", "object_empty.json"], 0),
        (&["build", "cylinder.json"], 0),
        (&["build", "pants.json"], 0),
        (&["build", "object_bad_sign.json"], 2),
        (&["build", "cobordism_bad_incidence.json"], 2),
        (&["build", "neither.json"], 2),
        (&["build", "--theory", "free_boundary", "pants.json"], 1),
        (&["check-theory", "--max-components", "1", "--max-regions", "2", "--theory", "theory_constant.json"], 0),
        (&["check-theory", "--max-components", "1", "--max-regions", "2", "--theory", "theory_free_boundary.json"], 1),
        (&["check-theory", "--theory", "theory_unknown.json"], 2),
        (&["check-theory", "--theory", "theory_empty.json"], 2),
        (&["check-theory", "--theory", "theory_bad_fill.json"], 2),
        (&["check-theory", "--theory", "harmonic"], 2),
        (&["check-theory", "--set-size", "0"], 2),
        (&["verify-functor", "--max-components", "0", "--max-regions", "0"], 0),
        (&["verify-functor", "--theory", "free_boundary", "--max-components", "1", "--max-regions", "1"], 1),
        (&["frobnicate"], 2),
    ];
    let in_fixtures = |a: &str| if a.ends_with(".json") || a.ends_with(".txt") { fixture(a) } else { a.to_string() };
    for (args, expected) in cases {
        let args: Vec<String> = args.iter().map(|a| in_fixtures(a)).collect();
        let out = cli(&args);
        if out.status.code() != Some(*expected) {
            return outcome(false, format!("{args:?} exited {:?}, expected {expected}", out.status.code()));
        }
    }
    outcome(true, format!("{} configs byte-identical, {} fixture exit codes", configs.len(), cases.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 7] = [
        ("double-category laws", 60, criterion_1),
        ("rigidity characterization", 10, criterion_2),
        ("theory audit", 120, criterion_3),
        ("cylinder construction", 60, criterion_4),
        ("double functor laws", 120, criterion_5),
        ("carrier oracle", 30, criterion_6),
        ("CLI contract", 60, criterion_7),
    ];
    let mut all = true;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = took < Duration::from_secs(*budget);
        let passed = o.passed && in_time;
        all &= passed;
        println!(
            "criterion {}: {} {name}: {} ({:.1} s, target < {budget} s{})",
            k + 1,
            if passed { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64(),
            if in_time { "" } else { ", over time" }
        );
    }
    if !all {
        std::process::exit(1);
    }
}
