//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use censtab_core::kan::{fi_subset_colimit_oracle, kan_value_colimit, subset_comparison};
use censtab_core::plactic::{rsk_normal_form, words};
use censtab_core::presentation::{free_module, ModulePresentation};
use censtab_core::presented::PresentedCategory;
use censtab_core::relations::{check_condition_i, check_condition_ii, counterexample_category, RelationsAnalyzer};
use censtab_core::stability::{check_central_stability, check_d_step, check_reducing_idempotent, degree_verdict, empirical_prd, CheckOptions};
use censtab_core::{Category, CategorySpec, Degree, Payload};
use censtab_linalg::{hermite_normal_form, invariant_factors, smith_normal_form, Int, Matrix, PresentedModule, RingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fi, random_suite, z2_example};

const SUITE_SEED: u64 = 20_240_601;
const RINGS: [RingSpec; 3] = [RingSpec::PrimeField(2), RingSpec::PrimeField(3), RingSpec::Integers];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn err(e: censtab_core::Error) -> String {
    e.to_string()
}

fn fi_quadraticity() -> Outcome {
    let start = Instant::now();
    let cat = Arc::new(Category::new(CategorySpec::Fi).unwrap());
    let ci = check_condition_i(&cat, 5, 6).map_err(err)?;
    ensure(ci.passed, || format!("condition (i) fails: {:?}", ci.failures.first()))?;
    let mut quads = 0;
    for n in 1..=6 {
        for m in 0..n {
            let v = check_condition_ii(&cat, 2, m, n).map_err(err)?;
            ensure(v.passed, || format!("condition (ii) fails at ({m},{n}): {:?}", v.witness))?;
            quads += v.quadruples_checked;
        }
    }
    let analyzer = RelationsAnalyzer::new(cat);
    let mut checks = 0;
    for ring in RINGS {
        for m in 0..=2 {
            for n in (m + 2)..=(m + 4) {
                let v = analyzer.check_degree_generation(ring, 2, m, n).map_err(err)?;
                ensure(v.passed, || format!("degree-2 generation fails over {ring} at ({m},{n})"))?;
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{} triples, {quads} quadruples, {checks} generation checks", ci.triples_checked))
}

fn counterexample() -> Outcome {
    let cat = Arc::new(Category::new(counterexample_category()).unwrap());
    let v = check_condition_ii(&cat, 2, 0, 3).map_err(err)?;
    let w = v.witness.ok_or("condition (ii) unexpectedly passes")?;
    let names = [w.alpha1.name, w.alpha2.name, w.beta1.name, w.beta2.name];
    ensure(names == ["b1''·b1'", "b2''·b2'", "b1", "b2"], || format!("unexpected witness {names:?}"))?;
    let analyzer = RelationsAnalyzer::new(cat);
    for ring in RINGS {
        let g = analyzer.check_degree_generation(ring, 2, 0, 3).map_err(err)?;
        ensure(g.passed, || format!("degree-2 generation fails over {ring}"))?;
    }
    Ok(format!("generation passes, condition (ii) fails with α₁ = {}, α₂ = {}", names[0], names[1]))
}

fn plactic() -> Outcome {
    for alphabet in [vec![1u8, 2], vec![1, 2, 3]] {
        let analyzer = RelationsAnalyzer::new(Arc::new(Category::new(CategorySpec::Plactic { alphabet: alphabet.clone() }).unwrap()));
        for ring in RINGS {
            for m in 0..=1 {
                let v = analyzer.check_degree_generation(ring, 2, m, m + 3).map_err(err)?;
                ensure(!v.passed, || format!("Ω = {alphabet:?}: degree 2 unexpectedly suffices at ({m},{})", m + 3))?;
                for n in (m + 3)..=(m + 4) {
                    let v = analyzer.check_degree_generation(ring, 3, m, n).map_err(err)?;
                    ensure(v.passed, || format!("Ω = {alphabet:?}: degree 3 fails over {ring} at ({m},{n})"))?;
                }
            }
        }
        // Congruence closure on the Knuth relations against Schensted insertion.
        let presented = Category::new(CategorySpec::Presented(PresentedCategory::plactic(&alphabet, 4))).unwrap();
        for len in 0..=4 {
            let mut by_rsk: HashMap<Vec<u8>, Payload> = HashMap::new();
            let mut by_closure: HashMap<Payload, Vec<u8>> = HashMap::new();
            for w in words(&alphabet, len) {
                let names: Vec<String> = w.iter().enumerate().map(|(i, x)| format!("{x}@{}", len - 1 - i)).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let class = if len == 0 { presented.identity(0).payload } else { presented.word_morphism(&refs).map_err(err)?.payload };
                let nf = rsk_normal_form(&w);
                let a = by_rsk.entry(nf.clone()).or_insert_with(|| class.clone()).clone();
                let b = by_closure.entry(class.clone()).or_insert_with(|| nf.clone()).clone();
                ensure(a == class && b == nf, || format!("normal forms disagree on {w:?}"))?;
            }
            ensure(presented.hom_size(0, len).map_err(err)? == by_rsk.len(), || format!("class count differs at length {len}"))?;
        }
    }
    Ok("d = 2 fails and d = 3 passes for |Ω| = 2, 3; RSK matches congruence closure".into())
}

fn morita(suite: &[ModulePresentation]) -> Outcome {
    let mut degrees = 0;
    for (i, p) in suite.iter().enumerate() {
        let r = check_central_stability(p, p.max_degree(), 6, CheckOptions::default()).map_err(err)?;
        ensure(r.passed(), || format!("presentation {i} at N = {}: first failure {:?}", p.max_degree(), r.first_failure()))?;
        degrees += r.degrees.len();
    }
    Ok(format!("{} presentations, {degrees} degrees iso", suite.len()))
}

fn prd_threshold() -> Outcome {
    let cat = fi();
    let mut cases: Vec<(String, ModulePresentation, Degree)> =
        (0..=3).map(|k| (format!("M({k})"), free_module(cat.clone(), RingSpec::Integers, k), k)).collect();
    cases.push(("ℤ/2".into(), z2_example(cat), 1));
    for (name, p, want) in &cases {
        let r = empirical_prd(p, 4, 6).map_err(err)?;
        ensure(r.prd == Some(*want), || format!("{name}: prd {:?}, expected {want}", r.prd))?;
        for a in &r.attempts[..*want] {
            ensure(a.failure.is_some(), || format!("{name}: N = {} fails without a witness degree", a.big_n))?;
        }
    }
    Ok("prd(M(k)) = k for k ≤ 3, prd(ℤ/2) = 1, witnesses below".into())
}

fn d_step(suite: &[ModulePresentation]) -> Outcome {
    for (i, p) in suite.iter().enumerate() {
        let prd = empirical_prd(p, 4, 6).map_err(err)?.prd.ok_or_else(|| format!("presentation {i}: no prd ≤ 4"))?;
        let r = check_d_step(p, 2, prd + 1, 6, CheckOptions::default()).map_err(err)?;
        ensure(r.passed(), || format!("presentation {i} at N = {}: {:?}", prd + 1, r.first_failure()))?;
        for big_n in 1..=4 {
            let w = check_d_step(p, 2, big_n, big_n, CheckOptions::default()).map_err(err)?;
            ensure(w.passed(), || format!("presentation {i}: window [{}, {big_n}] not iso", big_n - 1))?;
        }
    }
    Ok(format!("{} presentations pass at N = prd + 1; windows are iso", suite.len()))
}

fn reducing_idempotent(suite: &[ModulePresentation]) -> Outcome {
    let mut cases = vec![z2_example(fi())];
    cases.extend(suite.iter().take(10).cloned());
    for (i, p) in cases.iter().enumerate() {
        for n in [4, 5] {
            let r = check_reducing_idempotent(p, 0, 3, n, 2).map_err(err)?;
            ensure(r.verdict.is_iso(), || format!("case {i}, n = {n}: {:?}", r.verdict))?;
        }
    }
    Ok(format!("{} presentations, n = 4, 5", cases.len()))
}

fn cross_construction(suite: &[ModulePresentation]) -> Outcome {
    let cross = CheckOptions { cross_check: true };
    let mut instances = 0;
    let mut agree = |p: &ModulePresentation, lo: Degree, hi: Degree, n: Degree| -> Result<(), String> {
        let v = degree_verdict(p, lo, hi, n, cross).map_err(err)?;
        instances += 1;
        ensure(v.tensor_agrees == Some(true), || format!("tensor and colimit differ at window [{lo},{hi}], n = {n}"))
    };
    for p in suite {
        let big_n = p.max_degree();
        let prd = empirical_prd(p, 4, 6).map_err(err)?.prd.unwrap_or(big_n);
        for n in 0..=6 {
            agree(p, 0, big_n, n)?;
            if n >= prd {
                agree(p, prd, prd + 1, n)?;
            }
        }
    }
    let cat = fi();
    let mut small: Vec<ModulePresentation> = (0..=3).map(|k| free_module(cat.clone(), RingSpec::Integers, k)).collect();
    small.push(z2_example(cat));
    for p in &small {
        for big_n in 0..=3 {
            for n in 0..=6 {
                agree(p, 0, big_n, n)?;
            }
        }
    }
    let mut idem = vec![z2_example(fi())];
    idem.extend(suite.iter().take(10).cloned());
    for p in &idem {
        for n in [4, 5] {
            agree(p, 0, 3, n)?;
            agree(p, 1, 3, n)?;
        }
    }
    Ok(format!("{instances} instances agree via the comparison map"))
}

fn subset_oracle(suite: &[ModulePresentation]) -> Outcome {
    let mut instances = 0;
    for (i, p) in suite.iter().enumerate() {
        for big_n in 0..=2 {
            for n in 0..=5 {
                let oracle = fi_subset_colimit_oracle(p, big_n, n).map_err(err)?;
                let (colimit, _) = kan_value_colimit(p, 0, big_n, n).map_err(err)?;
                let v = subset_comparison(p, &oracle, &colimit).map_err(err)?.is_isomorphism().map_err(|e| e.to_string())?;
                ensure(v.is_iso(), || format!("presentation {i}, N = {big_n}, n = {n}: {v:?}"))?;
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances agree"))
}

fn det_pm_one(m: &Matrix) -> bool {
    m.determinant().map(|d| d.is_pm_one()).unwrap_or(false)
}

fn exact_linalg() -> Outcome {
    let z = RingSpec::Integers;
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for t in 0..200 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = Matrix::from_rows(z, &rows).unwrap();
        let s = smith_normal_form(&m).map_err(|e| e.to_string())?;
        let prod = s.u.mul(&m).and_then(|x| x.mul(&s.v)).map_err(|e| e.to_string())?;
        ensure(prod == s.d, || format!("matrix {t}: U·M·V ≠ D"))?;
        ensure(det_pm_one(&s.u) && det_pm_one(&s.v), || format!("matrix {t}: transforms not unimodular"))?;
        let diag = s.diagonal();
        ensure(diag.iter().all(|x| !x.is_negative() && !x.is_zero()), || format!("matrix {t}: bad diagonal {diag:?}"))?;
        ensure(diag.windows(2).all(|w| w[1].is_divisible_by(&w[0])), || format!("matrix {t}: divisibility chain broken"))?;
        let off = (0..r).any(|i| (0..c).any(|j| i != j && !s.d.get(i, j).is_zero()));
        ensure(!off, || format!("matrix {t}: D not diagonal"))?;
        // The row lattice is preserved: each of M, H lies in the row lattice of the other.
        let h = hermite_normal_form(&m).map_err(|e| e.to_string())?;
        let stacked = |a: &Matrix, b: &Matrix| {
            let mut rows = a.to_rows();
            rows.extend(b.to_rows());
            Matrix::from_rows(z, &rows).unwrap()
        };
        let strip = |x: Matrix| -> Vec<Vec<Int>> { x.to_rows().into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect() };
        let hh = strip(hermite_normal_form(&h).map_err(|e| e.to_string())?);
        ensure(strip(h.clone()) == hh, || format!("matrix {t}: HNF not idempotent"))?;
        let joint = strip(hermite_normal_form(&stacked(&m, &h)).map_err(|e| e.to_string())?);
        ensure(joint == hh, || format!("matrix {t}: HNF changes the row lattice"))?;
    }
    let group = |rels: &[Vec<i64>], rank: usize| -> Vec<Int> {
        let rels = rels.iter().map(|r| censtab_linalg::SparseVec::from_dense(z, &r.iter().map(|&x| Int::from(x)).collect::<Vec<_>>())).collect();
        invariant_factors(&PresentedModule::unlabeled(z, rank, rels).unwrap())
    };
    let a = group(&[vec![2, 0], vec![0, 4]], 2);
    let b = group(&[vec![8]], 1);
    ensure(a != b, || "ℤ/2 ⊕ ℤ/4 and ℤ/8 have the same invariants".into())?;
    ensure(a == vec![Int::from(2), Int::from(4)] && b == vec![Int::from(8)], || format!("{a:?} vs {b:?}"))?;
    Ok("200 random matrices; ℤ/2 ⊕ ℤ/4 ≠ ℤ/8".into())
}

fn category_laws() -> Outcome {
    let cases: Vec<(CategorySpec, Degree)> = vec![
        (CategorySpec::Fi, 5),
        (CategorySpec::FiA { a: 2 }, 5),
        (CategorySpec::OiA { a: 2 }, 5),
        (CategorySpec::FsOp, 5),
        (CategorySpec::Vi { q: 2 }, 3),
        (CategorySpec::Plactic { alphabet: vec![1, 2] }, 5),
        (CategorySpec::Counterexample, 3),
    ];
    let mut triples = 0u64;
    for (spec, top) in cases {
        let cat = Category::new(spec).unwrap();
        let id = cat.id();
        let size = |a, b| cat.hom_size(a, b).map_err(err);
        for m in 0..=top {
            for n in m..=top {
                let hom = cat.hom(m, n).map_err(err)?;
                for f in hom.morphisms() {
                    let l = cat.compose(&cat.identity(n), f).map_err(err)?;
                    let r = cat.compose(f, &cat.identity(m)).map_err(err)?;
                    ensure(&l == f && &r == f, || format!("{id}: identity law fails for {}", cat.describe(f)))?;
                }
                for p in n..=top {
                    for q in p..=top {
                        let (gf, hg) = (cat.composition_table(m, n, p).map_err(err)?, cat.composition_table(n, p, q).map_err(err)?);
                        let (h_gf, hg_f) = (cat.composition_table(m, p, q).map_err(err)?, cat.composition_table(m, n, q).map_err(err)?);
                        for h in 0..size(p, q)? {
                            for g in 0..size(n, p)? {
                                for f in 0..size(m, n)? {
                                    triples += 1;
                                    ensure(h_gf.get(h, gf.get(g, f)) == hg_f.get(hg.get(h, g), f), || {
                                        format!("{id}: associativity fails on hom({p},{q}) × hom({n},{p}) × hom({m},{n})")
                                    })?;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{triples} composable triples"))
}

fn main() {
    let suite = random_suite(SUITE_SEED, 50);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("FI quadraticity", Box::new(fi_quadraticity)),
        ("counterexample category", Box::new(counterexample)),
        ("plactic relations in degree 3", Box::new(plactic)),
        ("central stability at the presentation degree", Box::new(|| morita(&suite))),
        ("presentation degree threshold", Box::new(prd_threshold)),
        ("d-step central stability", Box::new(|| d_step(&suite))),
        ("reducing idempotent", Box::new(|| reducing_idempotent(&suite))),
        ("tensor and colimit agree", Box::new(|| cross_construction(&suite))),
        ("FI subset colimit oracle", Box::new(|| subset_oracle(&suite))),
        ("exact linear algebra", Box::new(exact_linalg)),
        ("category laws", Box::new(category_laws)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
