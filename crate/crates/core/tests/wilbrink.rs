mod common;

use common::{fano, random_permutation};
use unitals::wilbrink::ConditionIIIInstance;
use unitals::{
    check_condition_i, check_condition_ii, check_condition_iii, classical_unital, classify, is_x_parallel,
    translations_with_center, x_parallel_blocks, ClassifyOptions, Counterexample, Enumeration, Mode, Unital,
    Verdict,
};

#[test]
fn conditions_hold_on_small_classical_unitals() {
    for q in [2, 3] {
        let u = classical_unital(q).unwrap();
        assert!(check_condition_i(&u).holds);
        let ii = check_condition_ii(&u, Mode::Exhaustive);
        assert!(ii.holds && ii.counterexample.is_none());
        let iii = check_condition_iii(&u, Mode::Exhaustive, Enumeration::Full).unwrap();
        assert!(iii.holds);
    }
}

/// Proof step for (II): with w = (x ∨ y) ∩ L and τ ∈ T_[x] mapping w to y,
/// τ(L) passes through y and is x-parallel to L.
#[test]
fn condition_ii_via_translations() {
    for q in [2, 3] {
        let u = classical_unital(q).unwrap();
        for x in 0..u.num_points() {
            let group = translations_with_center(&u, x);
            for l in 0..u.num_blocks() {
                if u.contains(l, x) {
                    continue;
                }
                let parallels = x_parallel_blocks(&u, l, x).unwrap();
                for y in 0..u.num_points() {
                    if y == x {
                        continue;
                    }
                    let Some(w) = u.meet(u.join(x, y), l) else { continue };
                    let tau = group.iter().find(|t| t.apply(w) == y).expect("transitive on x ∨ y");
                    let image = u.find_block(&tau.apply_set(u.block(l))).unwrap();
                    assert!(u.contains(image, y));
                    assert!(parallels.contains(&image));
                }
            }
        }
    }
}

/// Proof step for (III): τ ∈ T_[x] mapping y₀ to z₀ carries yᵢ to zᵢ.
#[test]
fn condition_iii_via_translations() {
    let u = classical_unital(2).unwrap();
    for x in 0..u.num_points() {
        let group = translations_with_center(&u, x);
        let through = u.blocks_through(x);
        for &m0 in through {
            for &mi in through {
                if mi == m0 {
                    continue;
                }
                for &y0 in u.block(m0).iter().filter(|&&p| p != x) {
                    for &z0 in u.block(m0).iter().filter(|&&p| p != x) {
                        let tau = group.iter().find(|t| t.apply(y0) == z0).unwrap();
                        for &yi in u.block(mi).iter().filter(|&&p| p != x) {
                            let yb = u.join(y0, yi);
                            for &zi in u.block(mi).iter().filter(|&&p| p != x) {
                                if is_x_parallel(&u, u.join(z0, zi), yb, x) {
                                    assert_eq!(tau.apply(yi), zi);
                                    let image = u.find_block(&tau.apply_set(u.block(yb))).unwrap();
                                    assert_eq!(image, u.join(z0, zi));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn identity_premise_forces_identical_points() {
    let u = classical_unital(3).unwrap();
    let x = 4;
    let m = &u.blocks_through(x)[..2];
    let y0 = *u.block(m[0]).iter().find(|&&p| p != x).unwrap();
    for &yi in u.block(m[1]).iter().filter(|&&p| p != x) {
        let yb = u.join(y0, yi);
        let forced: Vec<usize> = u
            .block(m[1])
            .iter()
            .copied()
            .filter(|&zi| zi != x && is_x_parallel(&u, u.join(y0, zi), yb, x))
            .collect();
        assert_eq!(forced, vec![yi]);
    }
}

#[test]
fn forged_condition_iii_counterexample_does_not_replay() {
    let u = classical_unital(2).unwrap();
    let x = 0;
    let m: Vec<usize> = u.blocks_through(x)[..3].to_vec();
    let pick = |b: usize| *u.block(b).iter().find(|&&p| p != x).unwrap();
    let y = [pick(m[0]), pick(m[1]), pick(m[2])];
    let cex = Counterexample::III(ConditionIIIInstance { x, m: [m[0], m[1], m[2]], y, z: y });
    assert!(!cex.replay(&u));
}

#[test]
fn classify_small_classical_unitals() {
    for q in [2, 3] {
        let u = classical_unital(q).unwrap();
        let v = classify(&u, &ClassifyOptions::default());
        assert_eq!(v.verdict, Verdict::Classical, "{v}");
        assert!(v.translations_ok && v.onan_free && v.inconsistency.is_none());
        let witness = v.iso_witness.unwrap();
        assert_eq!(u.relabel(&witness).unwrap(), u);
    }
}

#[test]
fn classify_relabeled() {
    let u = classical_unital(2).unwrap();
    let r = u.relabel(&random_permutation(9, 42)).unwrap();
    let v = classify(&r, &ClassifyOptions::default());
    assert_eq!(v.verdict, Verdict::Classical);
    assert_eq!(r.relabel(v.iso_witness.as_ref().unwrap()).unwrap(), u);
}

#[test]
fn invalid_structures_never_reach_classify() {
    let mut blocks = classical_unital(2).unwrap().blocks().to_vec();
    blocks[0] = vec![0, 1, 4];
    assert!(Unital::from_blocks(2, blocks).is_err());
}

#[test]
fn classify_reports_failed_hypotheses() {
    let v = classify(&fano(), &ClassifyOptions::default());
    assert_eq!(v.verdict, Verdict::Undetermined);
    assert!(v.reasons.iter().any(|r| r.contains("O'Nan")));
    assert!(v.condition_i.counterexample.as_ref().unwrap().replay(&fano()));
}
