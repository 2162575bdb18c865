//! Wilbrink's conditions (I)–(III) as exhaustive or sampled quantifier sweeps,
//! and the classification verdict built on them.
//!
//! The checkers are purely combinatorial: they never assume the structure
//! admits translations, so they stay meaningful on arbitrary inputs.
//!
//! Condition (II) is read with the block in its premise equal to `L`: for a
//! block `L`, a point `x ∉ L` and a point `y ≠ x` such that `x ∨ y` meets `L`,
//! some block through `y` is `x`-parallel to `L`. When `y ∈ L` the block `L`
//! itself qualifies; those instances are counted as trivial.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::automorphisms::{
    admits_all_translations, find_isomorphism, is_isomorphism, translations_with_center, IsoOutcome,
    PointPermutation,
};
use crate::classical::classical_unital;
use crate::configurations::{find_onan, is_x_parallel, x_parallel_through, ONanWitness};
use crate::unital::{StructureKind, Unital};

/// Default number of sampled instances.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Largest order swept exhaustively by default.
pub const EXHAUSTIVE_MAX_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WilbrinkError {
    #[error("the unique-parallel shortcut is unsound here: the structure contains an O'Nan configuration ({0})")]
    Precedence(ONanWitness),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    I,
    II,
    III,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::I => "I",
            Condition::II => "II",
            Condition::III => "III",
        })
    }
}

/// How a sweep covers the instance space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

impl Mode {
    /// Exhaustive up to [`EXHAUSTIVE_MAX_ORDER`], sampled with the given seed beyond.
    pub fn default_for(q: usize, seed: u64) -> Mode {
        if q <= EXHAUSTIVE_MAX_ORDER {
            Mode::Exhaustive
        } else {
            Mode::Sampled { samples: DEFAULT_SAMPLES, seed }
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Sampled { samples, seed } => write!(f, "sampled n={samples} seed={seed}"),
        }
    }
}

/// How the `zᵢ` of condition (III) are found from the premise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Every point of `Mᵢ ∖ {x}` is tried.
    Full,
    /// `zᵢ` is read off the unique `x`-parallel block through `z₀`; only
    /// sound when there are no O'Nan configurations.
    UniqueParallel,
}

/// An instance of condition (III): `x`, blocks `M₀, M₁, M₂` through `x`, and
/// points `yᵢ, zᵢ ∈ Mᵢ ∖ {x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConditionIIIInstance {
    pub x: usize,
    pub m: [usize; 3],
    pub y: [usize; 3],
    pub z: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    I(ONanWitness),
    /// No block through `y` is `x`-parallel to `block`.
    II { block: usize, x: usize, y: usize },
    III(ConditionIIIInstance),
}

impl Counterexample {
    /// Replays the violation from incidences alone; `true` if it reproduces.
    pub fn replay(&self, u: &Unital) -> bool {
        match *self {
            Counterexample::I(w) => w.validate(u),
            Counterexample::II { block, x, y } => {
                x != y
                    && !u.contains(block, x)
                    && !u.contains(block, y)
                    && u.meet(u.join(x, y), block).is_some()
                    && x_parallel_through(u, block, x, y).next().is_none()
            }
            Counterexample::III(ConditionIIIInstance { x, m, y, z }) => {
                let distinct = m[0] != m[1] && m[0] != m[2] && m[1] != m[2];
                let on = (0..3).all(|i| {
                    u.contains(m[i], x) && u.contains(m[i], y[i]) && u.contains(m[i], z[i]) && y[i] != x && z[i] != x
                });
                if !distinct || !on {
                    return false;
                }
                let premise = (1..3).all(|i| {
                    let yb = u.join(y[0], y[i]);
                    !u.contains(yb, x) && is_x_parallel(u, u.join(z[0], z[i]), yb, x)
                });
                let y12 = u.join(y[1], y[2]);
                premise && !u.contains(y12, x) && !is_x_parallel(u, u.join(z[1], z[2]), y12, x)
            }
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::I(w) => write!(f, "{w}"),
            Counterexample::II { block, x, y } => write!(f, "L={block} x={x} y={y}"),
            Counterexample::III(c) => write!(
                f,
                "x={} M={} {} {} y={} {} {} z={} {} {}",
                c.x, c.m[0], c.m[1], c.m[2], c.y[0], c.y[1], c.y[2], c.z[0], c.z[1], c.z[2]
            ),
        }
    }
}

/// Outcome of one condition sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: Condition,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub coverage: Mode,
    /// Instances whose premise held and whose conclusion was tested.
    pub checked: u64,
    /// (II) instances with `y ∈ L`, satisfied by `L` itself.
    pub trivial: u64,
    /// (III) instances skipped because `x` lies on a joining block.
    pub vacuous: u64,
    pub enumeration: Option<Enumeration>,
}

impl ConditionReport {
    fn new(condition: Condition, coverage: Mode) -> ConditionReport {
        ConditionReport {
            condition,
            holds: true,
            counterexample: None,
            coverage,
            checked: 0,
            trivial: 0,
            vacuous: 0,
            enumeration: None,
        }
    }

    fn from_tally(condition: Condition, coverage: Mode, t: Tally) -> ConditionReport {
        ConditionReport {
            holds: t.counterexample.is_none(),
            counterexample: t.counterexample,
            checked: t.checked,
            trivial: t.trivial,
            vacuous: t.vacuous,
            ..ConditionReport::new(condition, coverage)
        }
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.condition;
        writeln!(f, "condition: {c}")?;
        match c {
            Condition::I => writeln!(f, "condition {c} statement: no O'Nan configurations")?,
            Condition::II => {
                writeln!(f, "condition {c} interpretation: premise block read as L; y on L counted as trivial")?
            }
            Condition::III => {}
        }
        writeln!(f, "condition {c} coverage: {}", self.coverage)?;
        if let Some(e) = self.enumeration {
            let e = match e {
                Enumeration::Full => "full",
                Enumeration::UniqueParallel => "unique-parallel",
            };
            writeln!(f, "condition {c} enumeration: {e}")?;
        }
        if c != Condition::I {
            writeln!(f, "condition {c} checked: {}", self.checked)?;
        }
        if c == Condition::II {
            writeln!(f, "condition {c} trivial: {}", self.trivial)?;
        }
        if c == Condition::III {
            writeln!(f, "condition {c} vacuous: {}", self.vacuous)?;
        }
        if let Some(cex) = &self.counterexample {
            writeln!(f, "condition {c} counterexample: {cex}")?;
        }
        write!(f, "condition {c} holds: {}", self.holds)
    }
}

#[derive(Debug, Default, Clone)]
struct Tally {
    checked: u64,
    trivial: u64,
    vacuous: u64,
    counterexample: Option<Counterexample>,
}

impl Tally {
    /// Merge keeping the counterexample of the earlier part.
    fn merge(mut self, later: Tally) -> Tally {
        self.checked += later.checked;
        self.trivial += later.trivial;
        self.vacuous += later.vacuous;
        if self.counterexample.is_none() {
            self.counterexample = later.counterexample;
        }
        self
    }
}

/// Sweeps `per_point` over all points in parallel and merges in point order.
fn sweep_points(u: &Unital, per_point: impl Fn(usize) -> Tally + Sync + Send) -> Tally {
    let parts: Vec<Tally> = (0..u.num_points()).into_par_iter().map(per_point).collect();
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

/// Condition (I): no O'Nan configurations. Always exhaustive.
pub fn check_condition_i(u: &Unital) -> ConditionReport {
    let witness = find_onan(u);
    ConditionReport {
        holds: witness.is_none(),
        counterexample: witness.map(Counterexample::I),
        ..ConditionReport::new(Condition::I, Mode::Exhaustive)
    }
}

/// One instance of (II) with `x ∉ L`, `y ∉ L ∪ {x}` and `x ∨ y` meeting `L`.
fn condition_ii_holds(u: &Unital, block: usize, x: usize, y: usize) -> bool {
    x_parallel_through(u, block, x, y).next().is_some()
}

/// Condition (II).
pub fn check_condition_ii(u: &Unital, mode: Mode) -> ConditionReport {
    let tally = match mode {
        Mode::Exhaustive => sweep_points(u, |x| {
            let mut t = Tally::default();
            for block in 0..u.num_blocks() {
                if u.contains(block, x) {
                    continue;
                }
                for y in 0..u.num_points() {
                    if y == x {
                        continue;
                    }
                    if u.contains(block, y) {
                        t.trivial += 1;
                        continue;
                    }
                    if u.meet(u.join(x, y), block).is_none() {
                        continue;
                    }
                    t.checked += 1;
                    if t.counterexample.is_none() && !condition_ii_holds(u, block, x, y) {
                        t.counterexample = Some(Counterexample::II { block, x, y });
                    }
                }
            }
            t
        }),
        Mode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = Tally::default();
            let off: Vec<Vec<usize>> = (0..u.num_points())
                .map(|x| (0..u.num_blocks()).filter(|&b| !u.contains(b, x)).collect())
                .collect();
            for _ in 0..samples {
                let x = rng.random_range(0..u.num_points());
                let Some(&block) = off[x].choose(&mut rng) else { continue };
                let &p = u.block(block).choose(&mut rng).expect("nonempty block");
                let joining = u.join(x, p);
                let &y = u.block(joining).choose(&mut rng).expect("nonempty block");
                if y == x {
                    continue;
                }
                if y == p {
                    t.trivial += 1;
                    continue;
                }
                t.checked += 1;
                if t.counterexample.is_none() && !condition_ii_holds(u, block, x, y) {
                    t.counterexample = Some(Counterexample::II { block, x, y });
                }
            }
            t
        }
    };
    ConditionReport::from_tally(Condition::II, mode, tally)
}

/// Points `z ∈ M ∖ {x}` with `z₀ ∨ z` `x`-parallel to `parallel_to`.
fn premise_candidates(
    u: &Unital,
    enumeration: Enumeration,
    x: usize,
    m: usize,
    z0: usize,
    parallel_to: usize,
    out: &mut Vec<usize>,
) {
    out.clear();
    match enumeration {
        Enumeration::Full => out.extend(
            u.block(m).iter().copied().filter(|&z| z != x && is_x_parallel(u, u.join(z0, z), parallel_to, x)),
        ),
        Enumeration::UniqueParallel => {
            // at most one such block through z0 when the structure is O'Nan-free
            if let Some(p) = x_parallel_through(u, parallel_to, x, z0).next() {
                if let Some(z) = u.meet(p, m).filter(|&z| z != x) {
                    out.push(z);
                }
            }
        }
    }
}

/// All premise-satisfying completions for fixed `(x, M, y, z₀)`, checked.
fn check_iii_instance(
    u: &Unital,
    enumeration: Enumeration,
    x: usize,
    m: [usize; 3],
    y: [usize; 3],
    z0: usize,
    t: &mut Tally,
    scratch: &mut [Vec<usize>; 2],
) {
    let y01 = u.join(y[0], y[1]);
    let y02 = u.join(y[0], y[2]);
    let y12 = u.join(y[1], y[2]);
    if u.contains(y01, x) || u.contains(y02, x) || u.contains(y12, x) {
        t.vacuous += 1;
        return;
    }
    let [c1, c2] = scratch;
    premise_candidates(u, enumeration, x, m[1], z0, y01, c1);
    premise_candidates(u, enumeration, x, m[2], z0, y02, c2);
    for &z1 in c1.iter() {
        for &z2 in c2.iter() {
            t.checked += 1;
            if t.counterexample.is_none() && !is_x_parallel(u, u.join(z1, z2), y12, x) {
                t.counterexample = Some(Counterexample::III(ConditionIIIInstance { x, m, y, z: [z0, z1, z2] }));
            }
        }
    }
}

/// Condition (III).
///
/// The exhaustive sweep runs over all `x`, all ordered triples of distinct
/// blocks through `x` with `M₁ < M₂` (the statement is symmetric in indices 1
/// and 2), and all `y₀, y₁, y₂, z₀`; the `zᵢ` satisfying the premise are then
/// enumerated according to `enumeration`. Requesting
/// [`Enumeration::UniqueParallel`] on a structure with an O'Nan configuration
/// is an error; [`check_condition_iii_auto`] falls back to the full sweep.
pub fn check_condition_iii(
    u: &Unital,
    mode: Mode,
    enumeration: Enumeration,
) -> Result<ConditionReport, WilbrinkError> {
    if enumeration == Enumeration::UniqueParallel {
        if let Some(w) = find_onan(u) {
            return Err(WilbrinkError::Precedence(w));
        }
    }
    let tally = match mode {
        Mode::Exhaustive => sweep_points(u, |x| {
            let mut t = Tally::default();
            let mut scratch = [Vec::new(), Vec::new()];
            let through = u.blocks_through(x);
            for &m0 in through {
                for &m1 in through {
                    for &m2 in through {
                        if m1 == m0 || m2 == m0 || m2 <= m1 {
                            continue;
                        }
                        let m = [m0, m1, m2];
                        let off = |b: usize| u.block(b).iter().copied().filter(move |&p| p != x);
                        for y0 in off(m0) {
                            for y1 in off(m1) {
                                for y2 in off(m2) {
                                    for z0 in off(m0) {
                                        check_iii_instance(u, enumeration, x, m, [y0, y1, y2], z0, &mut t, &mut scratch);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            t
        }),
        Mode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = Tally::default();
            let mut scratch = [Vec::new(), Vec::new()];
            for _ in 0..samples {
                let x = rng.random_range(0..u.num_points());
                let through = u.blocks_through(x);
                if through.len() < 3 {
                    continue;
                }
                let picked: Vec<usize> = through.choose_multiple(&mut rng, 3).copied().collect();
                let m = [picked[0], picked[1], picked[2]];
                let mut pick_off = |b: usize| loop {
                    let &p = u.block(b).choose(&mut rng).expect("nonempty block");
                    if p != x {
                        break p;
                    }
                };
                let y = [pick_off(m[0]), pick_off(m[1]), pick_off(m[2])];
                let z0 = pick_off(m[0]);
                check_iii_instance(u, enumeration, x, m, y, z0, &mut t, &mut scratch);
            }
            t
        }
    };
    let mut report = ConditionReport::from_tally(Condition::III, mode, tally);
    report.enumeration = Some(enumeration);
    Ok(report)
}

/// Condition (III) using the unique-parallel shortcut when the structure is
/// O'Nan-free and the full enumeration otherwise.
pub fn check_condition_iii_auto(u: &Unital, mode: Mode) -> ConditionReport {
    check_condition_iii(u, mode, Enumeration::UniqueParallel).unwrap_or_else(|_| {
        check_condition_iii(u, mode, Enumeration::Full).expect("full enumeration is always allowed")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Classical,
    NotClassical,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Classical => "classical",
            Verdict::NotClassical => "not-classical",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// Options for [`classify`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Sweep mode for (II) and (III); `None` picks [`Mode::default_for`].
    pub mode: Option<Mode>,
    pub seed: u64,
}

/// Result of checking the hypotheses "admits all translations" and "no O'Nan
/// configurations", and, when both hold, the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationVerdict {
    pub order: usize,
    pub translations_ok: bool,
    /// First center with `|T_[c]| ≠ q`, and the group size found there.
    pub translation_failure: Option<(usize, usize)>,
    pub onan_free: bool,
    pub condition_i: ConditionReport,
    pub condition_ii: Option<ConditionReport>,
    pub condition_iii: Option<ConditionReport>,
    /// Isomorphism onto the classical unital of the same order.
    pub iso_witness: Option<PointPermutation>,
    pub verdict: Verdict,
    /// Why the verdict is not `classical`, if it is not.
    pub reasons: Vec<String>,
    /// Set when the hypotheses hold but a consequence fails.
    pub inconsistency: Option<String>,
}

impl fmt::Display for ClassificationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "translations: {}", if self.translations_ok { "all" } else { "missing" })?;
        if let Some((c, n)) = self.translation_failure {
            writeln!(f, "translation failure: center {c} has {n} translations, expected {}", self.order)?;
        }
        writeln!(f, "onan-free: {}", self.onan_free)?;
        writeln!(f, "{}", self.condition_i)?;
        for report in [&self.condition_ii, &self.condition_iii].into_iter().flatten() {
            writeln!(f, "{report}")?;
        }
        match &self.iso_witness {
            Some(p) => writeln!(f, "isomorphism: {}", p.images().iter().map(usize::to_string).collect::<Vec<_>>().join(" "))?,
            None => writeln!(f, "isomorphism: none")?,
        }
        for r in &self.reasons {
            writeln!(f, "reason: {r}")?;
        }
        if let Some(msg) = &self.inconsistency {
            writeln!(f, "inconsistency: {msg}")?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

/// Classifies a unital: checks the translation and O'Nan hypotheses and,
/// when both hold, confirms conditions (II), (III) and searches for an
/// isomorphism onto the classical unital of the same order.
pub fn classify(u: &Unital, options: &ClassifyOptions) -> ClassificationVerdict {
    let q = u.order();
    let translation_failure = if u.kind() == StructureKind::Unital {
        (0..u.num_points()).find_map(|c| {
            let n = translations_with_center(u, c).len();
            (n != q).then_some((c, n))
        })
    } else {
        None
    };
    let translations_ok = u.kind() == StructureKind::Unital && translation_failure.is_none();
    debug_assert!(!translations_ok || admits_all_translations(u));
    let condition_i = check_condition_i(u);
    let onan_free = condition_i.holds;

    let mut verdict = ClassificationVerdict {
        order: q,
        translations_ok,
        translation_failure,
        onan_free,
        condition_i,
        condition_ii: None,
        condition_iii: None,
        iso_witness: None,
        verdict: Verdict::Undetermined,
        reasons: Vec::new(),
        inconsistency: None,
    };
    if u.kind() != StructureKind::Unital {
        verdict.reasons.push("structure is not a unital".to_string());
    }
    if u.kind() == StructureKind::Unital && !translations_ok {
        verdict.reasons.push("hypothesis failed: does not admit all translations".to_string());
    }
    if !onan_free {
        verdict.reasons.push("hypothesis failed: contains an O'Nan configuration".to_string());
    }
    if !verdict.reasons.is_empty() {
        return verdict;
    }

    let mode = options.mode.unwrap_or_else(|| Mode::default_for(q, options.seed));
    let ii = check_condition_ii(u, mode);
    let iii = check_condition_iii_auto(u, mode);
    let mut broken: Vec<String> = Vec::new();
    for r in [&ii, &iii] {
        if !r.holds {
            broken.push(format!("condition {} fails although both hypotheses hold", r.condition));
        }
    }
    verdict.condition_ii = Some(ii);
    verdict.condition_iii = Some(iii);

    let reference = match classical_unital(q) {
        Ok(r) => r,
        Err(e) => {
            verdict.reasons.push(format!("no classical unital to compare with: {e}"));
            verdict.inconsistency = (!broken.is_empty()).then(|| broken.join("; "));
            return verdict;
        }
    };
    match find_isomorphism(u, &reference) {
        IsoOutcome::Found(p) if is_isomorphism(u, &reference, &p) => {
            verdict.iso_witness = Some(p);
            verdict.verdict = Verdict::Classical;
        }
        IsoOutcome::Found(_) => broken.push("isomorphism search returned an invalid map".to_string()),
        IsoOutcome::NotIsomorphic => {
            verdict.verdict = Verdict::NotClassical;
            verdict.reasons.push("no isomorphism onto the classical unital".to_string());
            broken.push("hypotheses hold but the unital is not classical".to_string());
        }
        IsoOutcome::Mismatch(why) => {
            verdict.reasons.push(why);
        }
    }
    verdict.inconsistency = (!broken.is_empty()).then(|| broken.join("; "));
    verdict
}
