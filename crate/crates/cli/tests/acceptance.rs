//! Acceptance suite. One line per criterion, `[PASS]` or `[FAIL]`, each
//! checked against its wall-clock limit; exits non-zero if any criterion
//! fails.
//!
//! Run with `cargo test -p unitals-cli --test acceptance`.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitals::configurations::x_parallel_through;
use unitals::format::unital_to_text;
use unitals::{
    check_condition_ii, check_condition_iii, check_two_transitive, classical_unital, classify, find_onan,
    hermitian_form, is_x_parallel, translation_matrices, translations_with_center, verify_design, x_parallel_blocks,
    xi_subgroup, ClassifyOptions, Elem, Enumeration, HermitianUnital, Matrix3, Mode, PointPermutation, Unital,
    Verdict, Violation, ViolationKind,
};
use unitals_cli::{run, EXIT_ERROR, EXIT_FAIL, EXIT_OK};

/// Seed for the sampled sweep and the random relabeling.
const SEED: u64 = 20_240_611;
const SAMPLES: u64 = 1_000_000;

type Outcome = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn block_set(u: &Unital) -> BTreeSet<Vec<usize>> {
    u.blocks().iter().cloned().collect()
}

fn fano() -> Unital {
    let blocks = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
    Unital::linear_space(7, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut seen = Vec::new();
    for (q, v, b) in [(2, 9, 12), (3, 28, 63), (4, 65, 208), (5, 126, 525)] {
        let u = classical_unital(q).map_err(|e| e.to_string())?;
        ensure((u.num_points(), u.num_blocks()) == (v, b), || {
            format!("q={q}: got ({}, {}), want ({v}, {b})", u.num_points(), u.num_blocks())
        })?;
        let report = verify_design(u.blocks(), q);
        ensure(report.pass(), || format!("q={q}: design check failed\n{report}"))?;
        seen.push(format!("q={q} ({v},{b})"));
    }
    Ok(seen.join(", "))
}

fn criterion_2() -> Outcome {
    for q in [2, 3, 4] {
        let u = classical_unital(q).map_err(|e| e.to_string())?;
        if let Some(w) = find_onan(&u) {
            return Err(format!("q={q}: unexpected O'Nan configuration {w}"));
        }
    }
    let f = fano();
    let w = find_onan(&f).ok_or("Fano plane: no witness found")?;
    ensure(w.validate(&f), || format!("Fano witness does not replay: {w}"))?;
    // independent replay: four blocks, no three concurrent, six distinct meets
    let meets: BTreeSet<usize> = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let a: BTreeSet<usize> = f.block(w.blocks[i]).iter().copied().collect();
            let b: BTreeSet<usize> = f.block(w.blocks[j]).iter().copied().collect();
            let common: Vec<usize> = a.intersection(&b).copied().collect();
            (common.len() == 1).then(|| common[0])
        })
        .collect();
    ensure(meets.len() == 6, || format!("Fano witness has {} distinct meets", meets.len()))?;
    Ok(format!("none for q=2,3,4; Fano witness {w}"))
}

fn criterion_3() -> Outcome {
    for q in [2, 3] {
        let u = classical_unital(q).map_err(|e| e.to_string())?;
        for c in 0..u.num_points() {
            let group = translations_with_center(&u, c);
            ensure(group.len() == q, || format!("q={q} c={c}: |T| = {}", group.len()))?;
            for t in group.iter().filter(|t| !t.is_identity()) {
                let fixed: Vec<usize> = (0..u.num_points()).filter(|&p| t.apply(p) == p).collect();
                ensure(fixed == [c], || format!("q={q} c={c}: {} fixes {fixed:?}", t.cycle_notation()))?;
            }
        }
        let h = HermitianUnital::new(q).map_err(|e| e.to_string())?;
        let from_matrices: BTreeSet<PointPermutation> = translation_matrices(h.field())
            .iter()
            .map(|m| h.permutation_of(m).ok_or("translation matrix leaves the curve"))
            .collect::<Result<_, _>>()?;
        let searched: BTreeSet<PointPermutation> =
            translations_with_center(h.unital(), h.distinguished_point()).into_iter().collect();
        ensure(from_matrices == searched, || format!("q={q}: matrix translations differ from the searched group"))?;
    }
    Ok("|T_[c]| = q at every center for q=2,3; semiregular; matches matrices".to_string())
}

fn on_curve(h: &HermitianUnital, m: &Matrix3) -> bool {
    let f = h.field();
    h.points().iter().all(|p| {
        let image = m.apply(f, p.coords());
        image.iter().any(|e| !e.is_zero()) && hermitian_form(f, image, image) == Elem::ZERO
    })
}

fn criterion_4() -> Outcome {
    for q in [2, 3, 4] {
        let h = HermitianUnital::new(q).map_err(|e| e.to_string())?;
        let xi: BTreeSet<[[Elem; 3]; 3]> = xi_subgroup(h.field()).into_iter().map(|m| m.0).collect();
        ensure(xi.len() == q * q * q, || format!("q={q}: |Xi| = {}", xi.len()))?;
        ensure(xi.iter().all(|&m| on_curve(&h, &Matrix3(m))), || format!("q={q}: Xi leaves the curve"))?;
        let t: Vec<Matrix3> = translation_matrices(h.field());
        let distinct: BTreeSet<[[Elem; 3]; 3]> = t.iter().map(|m| m.0).collect();
        ensure(distinct.len() == q, || format!("q={q}: |T| = {}", distinct.len()))?;
        let u = h.unital();
        let c = h.distinguished_point();
        for m in &t {
            ensure(on_curve(&h, m), || format!("q={q}: translation leaves the curve"))?;
            let perm = h.permutation_of(m).ok_or("translation is not a permutation")?;
            for &b in u.blocks_through(c) {
                let image = perm.apply_set(u.block(b));
                ensure(image == u.block(b), || format!("q={q}: block {b} through the center moves"))?;
            }
        }
    }
    Ok("|Xi| = q^3, |T| = q for q=2,3,4".to_string())
}

fn criterion_5() -> Outcome {
    for q in [2, 3] {
        ensure(check_two_transitive(q).map_err(|e| e.to_string())?, || format!("q={q}: not 2-transitive"))?;
    }
    Ok("2-transitive for q=2,3".to_string())
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    for q in [2, 3] {
        let u = classical_unital(q).map_err(|e| e.to_string())?;
        let ii = check_condition_ii(&u, Mode::Exhaustive);
        ensure(ii.holds && ii.checked + ii.trivial > 0, || format!("q={q}:\n{ii}"))?;
        let started = Instant::now();
        let iii = check_condition_iii(&u, Mode::Exhaustive, Enumeration::Full).map_err(|e| e.to_string())?;
        let took = started.elapsed();
        ensure(iii.holds && iii.checked > 0, || format!("q={q}:\n{iii}"))?;
        if q == 3 {
            ensure(took < Duration::from_secs(600), || format!("exhaustive III at q=3 took {took:?}"))?;
        }
        notes.push(format!("q={q} II {} III {}", ii.checked + ii.trivial, iii.checked));
    }
    let u = classical_unital(4).map_err(|e| e.to_string())?;
    let mode = Mode::Sampled { samples: SAMPLES, seed: SEED };
    let ii = check_condition_ii(&u, mode);
    ensure(ii.holds, || format!("q=4 sampled:\n{ii}"))?;
    let iii = check_condition_iii(&u, mode, Enumeration::Full).map_err(|e| e.to_string())?;
    ensure(iii.holds && iii.coverage == mode, || format!("q=4 sampled:\n{iii}"))?;
    notes.push(format!("q=4 {mode} III {}", iii.checked));
    Ok(notes.join(", "))
}

fn witness_is_isomorphism(u: &Unital, target: &Unital, p: &PointPermutation) -> bool {
    let mapped: BTreeSet<Vec<usize>> = u.blocks().iter().map(|b| p.apply_set(b)).collect();
    mapped == block_set(target)
}

fn criterion_7() -> Outcome {
    let mut cases: Vec<(String, Unital)> = Vec::new();
    for q in [2, 3] {
        cases.push((format!("q={q}"), classical_unital(q).map_err(|e| e.to_string())?));
    }
    let base = classical_unital(2).map_err(|e| e.to_string())?;
    let mut images: Vec<usize> = (0..base.num_points()).collect();
    images.shuffle(&mut ChaCha8Rng::seed_from_u64(SEED));
    let perm = PointPermutation::from_images(images).ok_or("bad shuffle")?;
    let relabeled = base.relabel(&perm).map_err(|e| e.to_string())?;
    ensure(relabeled != base, || "relabeling left the unital unchanged".to_string())?;
    cases.push((format!("relabeled q=2 seed={SEED}"), relabeled));
    for (name, u) in &cases {
        let verdict = classify(u, &ClassifyOptions::default());
        ensure(verdict.verdict == Verdict::Classical, || format!("{name}:\n{verdict}"))?;
        let target = classical_unital(u.order()).map_err(|e| e.to_string())?;
        let w = verdict.iso_witness.as_ref().ok_or_else(|| format!("{name}: no witness"))?;
        ensure(witness_is_isomorphism(u, &target, w), || format!("{name}: witness does not map blocks to blocks"))?;
    }
    Ok(cases.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(", ") + ": classical")
}

fn criterion_8() -> Outcome {
    let mut images = 0usize;
    let mut through = 0usize;
    for q in [2, 3] {
        let u = classical_unital(q).map_err(|e| e.to_string())?;
        ensure(find_onan(&u).is_none(), || format!("q={q}: not O'Nan-free"))?;
        for x in 0..u.num_points() {
            let group = translations_with_center(&u, x);
            for b in (0..u.num_blocks()).filter(|&b| !u.contains(b, x)) {
                // (a) every translation image of B is x-parallel to B
                for t in &group {
                    let image = u.find_block(&t.apply_set(u.block(b))).ok_or("translation image is not a block")?;
                    ensure(is_x_parallel(&u, image, b, x), || format!("q={q} x={x} B={b}: image {image} not parallel"))?;
                    images += 1;
                }
                // (b) at most one x-parallel block through each point, exactly one off x
                let parallels = x_parallel_blocks(&u, b, x).map_err(|e| e.to_string())?;
                for y in (0..u.num_points()).filter(|&y| y != x) {
                    let n = parallels.iter().filter(|&&c| u.contains(c, y)).count();
                    let m = x_parallel_through(&u, b, x, y).count();
                    ensure(n <= 1 && n == m, || format!("q={q} x={x} B={b} y={y}: {n} parallels through y"))?;
                    through += 1;
                }
            }
        }
    }
    Ok(format!("{images} translation images, {through} uniqueness checks"))
}

fn pairs(block: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (i, &a) in block.iter().enumerate() {
        for &b in &block[i + 1..] {
            out.insert((a.min(b), a.max(b)));
        }
    }
    out
}

fn missing_pairs(violations: &[Violation]) -> BTreeSet<(usize, usize)> {
    violations
        .iter()
        .filter_map(|v| match *v {
            Violation::PairMissing { x, y } => Some((x.min(y), x.max(y))),
            _ => None,
        })
        .collect()
}

fn cli_exit(dir: &Path, name: &str, blocks: &[Vec<usize>], args: &[&str]) -> i32 {
    let text = unital_to_text(&classical_unital(2).unwrap());
    let header: Vec<&str> = text.lines().take(3).collect();
    let body: Vec<String> =
        blocks.iter().map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).collect();
    let path = dir.join(name);
    std::fs::write(&path, format!("{}\nblocks {}\n{}\n", header.join("\n"), blocks.len(), body.join("\n"))).unwrap();
    let mut argv = vec!["unitals"];
    argv.extend_from_slice(args);
    argv.push(path.to_str().unwrap());
    run(argv).exit_code
}

fn criterion_9() -> Outcome {
    let u = classical_unital(2).map_err(|e| e.to_string())?;
    let original = u.blocks().to_vec();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let victim = 5;

    let mut deleted = original.clone();
    let gone = deleted.remove(victim);
    let report = verify_design(&deleted, 2);
    ensure(!report.pass() && report.has(ViolationKind::PairMissing), || format!("delete:\n{report}"))?;
    ensure(missing_pairs(&report.violations) == pairs(&gone), || format!("delete: wrong missing pairs\n{report}"))?;

    let mut duplicated = original.clone();
    duplicated.insert(victim, original[victim].clone());
    let report = verify_design(&duplicated, 2);
    ensure(!report.pass() && report.has(ViolationKind::PairDuplicated), || format!("duplicate:\n{report}"))?;
    let dup: BTreeSet<(usize, usize)> = report
        .violations
        .iter()
        .filter_map(|v| match *v {
            Violation::PairDuplicated { x, y, .. } => Some((x.min(y), x.max(y))),
            _ => None,
        })
        .collect();
    ensure(dup == pairs(&original[victim]), || format!("duplicate: wrong duplicated pairs\n{report}"))?;

    let mut truncated = original.clone();
    let dropped = truncated[victim].pop().unwrap();
    let report = verify_design(&truncated, 2);
    ensure(
        matches!(report.first(ViolationKind::BlockSize), Some(Violation::BlockSize { block, distinct: 2, expected: 3 }) if *block == victim),
        || format!("truncate: block-size witness\n{report}"),
    )?;
    let lost: BTreeSet<(usize, usize)> =
        truncated[victim].iter().map(|&p| (p.min(dropped), p.max(dropped))).collect();
    ensure(missing_pairs(&report.violations) == lost, || format!("truncate: wrong missing pairs\n{report}"))?;

    let mut codes = Vec::new();
    for (name, blocks) in [("deleted", &deleted), ("duplicated", &duplicated), ("truncated", &truncated)] {
        let verify = cli_exit(dir.path(), name, blocks, &["verify"]);
        let classify = cli_exit(dir.path(), name, blocks, &["classify"]);
        ensure(verify == EXIT_FAIL && classify == EXIT_ERROR, || {
            format!("{name}: verify exit {verify}, classify exit {classify}")
        })?;
        codes.push(format!("{name} verify={verify} classify={classify}"));
    }
    let clean = cli_exit(dir.path(), "clean", &original, &["verify"]);
    ensure(clean == EXIT_OK, || format!("unmutated file: verify exit {clean}"))?;
    Ok(codes.join(", "))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "construction counts", limit: secs(5), check: criterion_1 },
        Criterion { id: 2, name: "O'Nan-freeness", limit: secs(60), check: criterion_2 },
        Criterion { id: 3, name: "translation groups", limit: secs(60), check: criterion_3 },
        Criterion { id: 4, name: "matrix-group counts", limit: secs(10), check: criterion_4 },
        Criterion { id: 5, name: "double transitivity", limit: secs(60), check: criterion_5 },
        Criterion { id: 6, name: "Wilbrink conditions", limit: secs(600), check: criterion_6 },
        Criterion { id: 7, name: "classification round trip", limit: secs(120), check: criterion_7 },
        Criterion { id: 8, name: "proof-step properties", limit: secs(300), check: criterion_8 },
        Criterion { id: 9, name: "mutation negatives", limit: secs(60), check: criterion_9 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let started = Instant::now();
        let outcome = (c.check)();
        let took = started.elapsed();
        let (pass, detail) = match outcome {
            Ok(detail) if took <= c.limit => (true, detail),
            Ok(detail) => (false, format!("{detail}; exceeded limit")),
            Err(reason) => (false, reason),
        };
        failed += usize::from(!pass);
        println!(
            "[{}] {} {}: {} ({:.2}s, limit {}s)",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
