//! Witness search and realizability censuses.
//!
//! A class `h ∈ F_p^x` is realized when some ordinary curve over `F_q` has
//! `φ([A_p]) = h`. Curves are scanned in the fixed model order of
//! [`ModelSpace`]; the witness for a class is always the first hit in that
//! order, so serial and parallel scans agree.
//!
//! Because `β ≡ φ([A_p]) mod p` and `β^2 < 4q`, a class with no admissible
//! trace cannot be realized; [`SearchMode::Shortcut`] answers those without
//! scanning, [`SearchMode::Exhaustive`] scans anyway.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{ModelSpace, PointCounter, WeierstrassCurve, MAX_COUNT_ORDER};
use crate::forms::{missing_set, trace_bound, ClassGroup};
use crate::gf::FieldCtx;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("field of order {0} is too large for a census")]
    FieldTooLarge(u64),
    #[error("{0} is not a nonzero residue mod {1}")]
    ResidueOutOfRange(u64, u64),
    #[error("witness {index} failed revalidation for residue {residue}")]
    WitnessRejected { residue: u64, index: u64 },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Skip classes whose admissible trace set is empty.
    Shortcut,
    /// Scan the whole model space regardless.
    Exhaustive,
}

/// `{ β : β^2 < 4q, β ≡ h mod p }`, ascending.
pub fn admissible_traces(p: u64, q: u64, h: u64) -> Vec<i64> {
    let bound = trace_bound(q) as i64;
    let p = p as i64;
    let h = h as i64;
    (-bound..=bound)
        .filter(|b| (b - h).rem_euclid(p) == 0)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSummary {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub modulus: String,
}

impl FieldSummary {
    pub fn of(ctx: &FieldCtx) -> Self {
        FieldSummary {
            p: ctx.characteristic(),
            n: ctx.degree(),
            q: ctx.order(),
            modulus: ctx.modulus_string(),
        }
    }
}

/// A validated witness curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip)]
    pub curve: WeierstrassCurve,
    /// Position in the model enumeration.
    pub index: u64,
    pub a2: String,
    pub a4: String,
    pub a6: String,
    pub hasse: String,
    pub class_exp: u64,
    pub count: u64,
    pub beta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Witness),
    NotRealizable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub residue: u64,
    pub class_exp: u64,
    pub admissible_traces: Vec<i64>,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Complete,
    ProperSubset(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizabilityReport {
    pub field: FieldSummary,
    pub mode: SearchMode,
    pub entries: Vec<ClassEntry>,
    pub realizable: u64,
    pub absent: u64,
    pub verdict: Verdict,
    /// `F_p^x` minus the realizable-trace set, computed without curves.
    pub formula_missing: Vec<u64>,
    /// Whether the enumerated census and the trace formula agree.
    pub formula_agrees: bool,
    /// Nonsingular models actually examined.
    pub models_scanned: u64,
}

impl RealizabilityReport {
    pub fn missing(&self) -> Vec<u64> {
        match &self.verdict {
            Verdict::Complete => Vec::new(),
            Verdict::ProperSubset(m) => m.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    pub mode: SearchMode,
    /// Worker count; `0` lets the pool decide.
    pub threads: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            mode: SearchMode::Shortcut,
            threads: 0,
        }
    }
}

const CHUNK: u64 = 2048;
/// Chunks per wave. Fixed so that the amount of work done before stopping
/// does not depend on the worker count.
const WAVE: u64 = 32;

/// First model index per target residue within `range`, plus the number of
/// nonsingular models looked at.
fn scan_chunk(
    group: &ClassGroup<'_>,
    space: ModelSpace<'_>,
    range: std::ops::Range<u64>,
    targets: &BTreeSet<u64>,
) -> (BTreeMap<u64, u64>, u64) {
    let ctx = group.ctx();
    let mut found = BTreeMap::new();
    let mut scanned = 0;
    for index in range {
        let Some(curve) = space.get(index) else {
            continue;
        };
        scanned += 1;
        let hasse = curve.hasse_p(ctx);
        if hasse.is_zero() {
            continue;
        }
        let residue = group.phi_of(&hasse).expect("nonzero");
        if targets.contains(&residue) {
            found.entry(residue).or_insert(index);
            if found.len() == targets.len() {
                break;
            }
        }
    }
    (found, scanned)
}

/// Scans the model space in waves of chunks; the earliest index wins for each
/// residue, independent of scheduling.
fn scan(
    group: &ClassGroup<'_>,
    mut targets: BTreeSet<u64>,
    threads: usize,
) -> Result<(BTreeMap<u64, u64>, u64), SearchError> {
    let space = ModelSpace::new(group.ctx());
    let total = space.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SearchError::ThreadPool(e.to_string()))?;
    let mut found = BTreeMap::new();
    let mut scanned = 0;
    let mut start = 0;
    while start < total && !targets.is_empty() {
        let chunks: Vec<_> = (0..WAVE)
            .map(|i| start + i * CHUNK)
            .take_while(|&s| s < total)
            .map(|s| s..(s + CHUNK).min(total))
            .collect();
        start = chunks.last().map_or(total, |r| r.end);
        let results: Vec<_> = pool.install(|| {
            chunks
                .into_par_iter()
                .map(|r| scan_chunk(group, space, r, &targets))
                .collect()
        });
        for (hits, n) in results {
            scanned += n;
            for (residue, index) in hits {
                let slot = found.entry(residue).or_insert(index);
                *slot = (*slot).min(index);
            }
        }
        targets.retain(|r| !found.contains_key(r));
    }
    Ok((found, scanned))
}

fn check_residue(ctx: &FieldCtx, h: u64) -> Result<(), SearchError> {
    let p = ctx.characteristic();
    if h == 0 || h >= p {
        return Err(SearchError::ResidueOutOfRange(h, p));
    }
    Ok(())
}

/// Recounts points and recomputes `A_p` for a candidate witness.
fn validate(
    group: &ClassGroup<'_>,
    counter: &PointCounter<'_>,
    index: u64,
    residue: u64,
) -> Result<Witness, SearchError> {
    let ctx = group.ctx();
    let reject = || SearchError::WitnessRejected { residue, index };
    let curve = ModelSpace::new(ctx).get(index).ok_or_else(reject)?;
    let hasse = curve.hasse_p(ctx);
    let class = group.class_of(&hasse).map_err(|_| reject())?;
    let frob = counter.count(&curve);
    let p = ctx.characteristic() as i64;
    if group.phi_residue(&class) != residue
        || (frob.beta - residue as i64).rem_euclid(p) != 0
        || frob.count as i64 != ctx.order() as i64 + 1 - frob.beta
    {
        return Err(reject());
    }
    Ok(Witness {
        index,
        a2: curve.a2().to_string(),
        a4: curve.a4().to_string(),
        a6: curve.a6().to_string(),
        hasse: hasse.to_string(),
        class_exp: class.exp(),
        count: frob.count,
        beta: frob.beta,
        curve,
    })
}

fn guard(ctx: &FieldCtx) -> Result<(), SearchError> {
    if ctx.order() > MAX_COUNT_ORDER {
        return Err(SearchError::FieldTooLarge(ctx.order()));
    }
    Ok(())
}

/// First ordinary curve with `φ([A_p]) = h`, or `NotRealizable`.
pub fn find_curve_with_class(
    ctx: &FieldCtx,
    h: u64,
    mode: SearchMode,
) -> Result<SearchOutcome, SearchError> {
    guard(ctx)?;
    check_residue(ctx, h)?;
    let p = ctx.characteristic();
    if mode == SearchMode::Shortcut && admissible_traces(p, ctx.order(), h).is_empty() {
        return Ok(SearchOutcome::NotRealizable);
    }
    let group = ClassGroup::new(ctx);
    let (found, _) = scan(&group, BTreeSet::from([h]), 1)?;
    match found.get(&h) {
        Some(&index) => {
            let counter = PointCounter::new(ctx).map_err(|_| SearchError::FieldTooLarge(ctx.order()))?;
            Ok(SearchOutcome::Found(validate(&group, &counter, index, h)?))
        }
        None => Ok(SearchOutcome::NotRealizable),
    }
}

/// Runs the witness search for every class of `F_q` and compares the result
/// with the trace formula.
pub fn census(ctx: &FieldCtx, options: CensusOptions) -> Result<RealizabilityReport, SearchError> {
    guard(ctx)?;
    let p = ctx.characteristic();
    let q = ctx.order();
    let group = ClassGroup::new(ctx);
    let counter = PointCounter::new(ctx).map_err(|_| SearchError::FieldTooLarge(q))?;
    let traces: BTreeMap<u64, Vec<i64>> = (1..p).map(|h| (h, admissible_traces(p, q, h))).collect();
    let targets: BTreeSet<u64> = traces
        .iter()
        .filter(|(_, t)| options.mode == SearchMode::Exhaustive || !t.is_empty())
        .map(|(&h, _)| h)
        .collect();
    let (found, models_scanned) = scan(&group, targets, options.threads)?;

    let mut entries = Vec::with_capacity((p - 1) as usize);
    for (h, admissible) in traces {
        let witness = match found.get(&h) {
            Some(&index) => Some(validate(&group, &counter, index, h)?),
            None => None,
        };
        let class_exp = group.class_with_phi(h).expect("φ is onto F_p^x").exp();
        entries.push(ClassEntry {
            residue: h,
            class_exp,
            admissible_traces: admissible,
            witness,
        });
    }
    let missing: Vec<u64> = entries
        .iter()
        .filter(|e| e.witness.is_none())
        .map(|e| e.residue)
        .collect();
    let formula_missing: Vec<u64> = missing_set(p, q).into_iter().collect();
    let absent = missing.len() as u64;
    Ok(RealizabilityReport {
        field: FieldSummary::of(ctx),
        mode: options.mode,
        realizable: (p - 1) - absent,
        absent,
        formula_agrees: formula_missing == missing,
        verdict: if missing.is_empty() {
            Verdict::Complete
        } else {
            Verdict::ProperSubset(missing)
        },
        formula_missing,
        entries,
        models_scanned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_trace_examples() {
        assert!(admissible_traces(19, 19, 9).is_empty());
        assert_eq!(admissible_traces(19, 19, 2), vec![2]);
        assert_eq!(admissible_traces(19, 361, 9), vec![-29, -10, 9, 28]);
    }

    #[test]
    fn search_examples() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let SearchOutcome::Found(w) = find_curve_with_class(&f5, 1, SearchMode::Shortcut).unwrap()
        else {
            panic!("no witness for the trivial class over F_5");
        };
        // Independent check of the witness: 2a = 1 and β ≡ 1 (mod 5).
        let a4: u64 = w.a4.parse().unwrap();
        assert_eq!((2 * a4) % 5, 1);
        assert_eq!(w.beta.rem_euclid(5), 1);
        assert_eq!(w.class_exp, 0);

        let f19 = FieldCtx::new(19, 1).unwrap();
        for mode in [SearchMode::Shortcut, SearchMode::Exhaustive] {
            assert_eq!(
                find_curve_with_class(&f19, 9, mode).unwrap(),
                SearchOutcome::NotRealizable
            );
        }
        assert_eq!(
            find_curve_with_class(&f19, 0, SearchMode::Shortcut),
            Err(SearchError::ResidueOutOfRange(0, 19))
        );
        assert_eq!(
            find_curve_with_class(&f19, 19, SearchMode::Shortcut),
            Err(SearchError::ResidueOutOfRange(19, 19))
        );
    }

    #[test]
    fn census_small_fields() {
        let f13 = FieldCtx::new(13, 1).unwrap();
        let r = census(&f13, CensusOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Complete);
        assert!(r.formula_agrees);
        let f19 = FieldCtx::new(19, 1).unwrap();
        let r = census(&f19, CensusOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ProperSubset(vec![9, 10]));
        assert!(r.formula_agrees);
        assert_eq!(r.realizable, 16);
    }

    #[test]
    fn exhaustive_census_scans_everything_when_classes_are_missing() {
        let f19 = FieldCtx::new(19, 1).unwrap();
        let r = census(
            &f19,
            CensusOptions {
                mode: SearchMode::Exhaustive,
                threads: 2,
            },
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::ProperSubset(vec![9, 10]));
        // 19^2 models minus the singular ones.
        let singular = (0..19u64)
            .flat_map(|a| (0..19u64).map(move |b| (a, b)))
            .filter(|&(a, b)| (4 * a * a * a + 27 * b * b) % 19 == 0)
            .count() as u64;
        assert_eq!(r.models_scanned, 361 - singular);
    }

    #[test]
    fn census_rejects_huge_fields() {
        let ctx = FieldCtx::new(3, 13).unwrap();
        assert_eq!(
            census(&ctx, CensusOptions::default()),
            Err(SearchError::FieldTooLarge(1_594_323))
        );
    }
}
