//! Exhaustive property suites.
//!
//! Each suite sweeps whole fields (every element, every curve model, every
//! twist parameter) and compares two independent computations. A suite report
//! carries the number of cases examined and the failures found; the unit of a
//! "case" is fixed per suite and documented on [`Suite`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::curve::{HasseLevel, ModelSpace, PointCounter, TwistKind};
use crate::forms::{realizable_set, ClassGroup, PTorsionDescription};
use crate::gf::{FieldCtx, GfError};
use crate::search::{census, CensusOptions, SearchError, SearchMode, Verdict};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("suite {suite} is limited to q <= {limit}, got q = {q}")]
    TooLarge { suite: Suite, q: u64, limit: u64 },
    #[error("suite {suite} does not apply to p = {p}")]
    Unsupported { suite: Suite, p: u64 },
}

/// Property suites.
///
/// Case units: `classification` counts nonzero elements plus ordered pairs of
/// classes; `twists` counts (curve, D, kind) triples; `etale` counts ordinary
/// curves; every other suite counts nonsingular curve models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Classification,
    Bridge,
    Twists,
    ClosedForms,
    Norm,
    Etale,
    Census,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Classification,
        Suite::Bridge,
        Suite::Twists,
        Suite::ClosedForms,
        Suite::Norm,
        Suite::Etale,
        Suite::Census,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Classification => "classification",
            Suite::Bridge => "bridge",
            Suite::Twists => "twists",
            Suite::ClosedForms => "closed-forms",
            Suite::Norm => "norm",
            Suite::Etale => "etale",
            Suite::Census => "census",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// The property the suite checks.
    pub fn statement(self) -> &'static str {
        match self {
            Suite::Classification => {
                "F_q^x/F_q^x(p-1) has exactly p-1 classes and x -> x^((q-1)/(p-1)) \
                 induces a group isomorphism onto F_p^x"
            }
            Suite::Bridge => {
                "A_p != 0 iff p does not divide beta; for ordinary E, beta = phi([A_p]) mod p; \
                 beta^2 <= 4q, strictly for ordinary E"
            }
            Suite::Twists => {
                "the Hasse class of E^D is [h D^((p-1)/2)], [h D^((p-1)/4)], [h D^((p-1)/6)] \
                 for quadratic, quartic, sextic twists; twists keep j; square D keeps #E"
            }
            Suite::ClosedForms => {
                "on y^2 = x^3 + ax + b, A_p is 2a for p = 5, 3b for p = 7, 9ab for p = 11"
            }
            Suite::Norm => "A_q = A_p^((q-1)/(p-1)) lies in F_p and A_q = 1 - #E(F_q) mod p",
            Suite::Etale => {
                "y^(p-1) - A_p splits into irreducibles of one degree, the order of \
                 phi([A_p]) in F_p^x; the connected part is x^p - j = (x - j^(1/p))^p"
            }
            Suite::Census => {
                "the Hasse classes of ordinary curves are exactly \
                 { beta mod p : beta^2 < 4q, p does not divide beta }; the trivial class is \
                 always realized; a proper realizable set is not multiplicatively closed"
            }
        }
    }

    /// Fields `(p, n)` used when no range is given.
    pub fn default_fields(self) -> Vec<(u64, u32)> {
        match self {
            Suite::Classification => vec![
                (3, 1),
                (5, 1),
                (7, 1),
                (3, 2),
                (11, 1),
                (13, 1),
                (5, 2),
                (3, 3),
                (7, 2),
            ],
            Suite::Bridge => vec![
                (3, 1),
                (5, 1),
                (7, 1),
                (3, 2),
                (11, 1),
                (13, 1),
                (17, 1),
                (19, 1),
                (23, 1),
                (5, 2),
                (7, 2),
            ],
            Suite::Twists => vec![(5, 1), (13, 1)],
            Suite::ClosedForms => vec![(5, 1), (7, 1), (11, 1)],
            Suite::Norm => vec![(3, 2), (5, 2)],
            Suite::Etale => vec![(5, 1), (7, 1)],
            Suite::Census => vec![
                (3, 1),
                (5, 1),
                (7, 1),
                (11, 1),
                (13, 1),
                (17, 1),
                (19, 1),
                (23, 1),
            ],
        }
    }

    /// Largest field order the suite accepts.
    pub fn limit(self) -> u64 {
        match self {
            Suite::Classification => 1 << 16,
            Suite::Bridge => 400,
            Suite::Twists => 169,
            Suite::ClosedForms => 1 << 12,
            Suite::Norm => 49,
            Suite::Etale => 400,
            Suite::Census => 1 << 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub statement: String,
    /// Field orders swept.
    pub fields: Vec<u64>,
    pub cases: u64,
    pub failures: u64,
    /// The first few failures, for diagnosis.
    pub failure_samples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

const MAX_SAMPLES: usize = 8;

struct Tally {
    cases: u64,
    failures: u64,
    samples: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            samples: Vec::new(),
        }
    }

    fn case(&mut self) {
        self.cases += 1;
    }

    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if !ok {
            self.failures += 1;
            if self.samples.len() < MAX_SAMPLES {
                self.samples.push(describe());
            }
        }
    }
}

fn multiplicative_order_mod(r: u64, p: u64) -> u64 {
    let mut acc = r % p;
    let mut k = 1;
    while acc != 1 {
        acc = acc * r % p;
        k += 1;
    }
    k
}

fn classification(ctx: &FieldCtx, t: &mut Tally) {
    let p = ctx.characteristic();
    let q = ctx.order();
    let group = ClassGroup::new(ctx);
    let classes = group.enumerate();
    t.expect(classes.len() as u64 == p - 1, || {
        format!("F_{q}: {} classes, expected {}", classes.len(), p - 1)
    });
    let m = (q - 1) / (p - 1);
    for x in ctx.elements().skip(1) {
        t.case();
        let c = group.class_of(&x).expect("nonzero");
        let ratio = ctx.div(&x, c.rep()).expect("rep is nonzero");
        // x and rep differ by a (p-1)-th power iff ratio^m = 1.
        t.expect(ctx.pow(&ratio, m) == ctx.one(), || {
            format!("F_{q}: {x:?} not in class g^{}", c.exp())
        });
    }
    let images: BTreeSet<u64> = classes.iter().map(|c| group.phi_residue(c)).collect();
    t.expect(
        images.len() as u64 == p - 1 && !images.contains(&0),
        || format!("F_{q}: phi is not injective onto F_p^x: {images:?}"),
    );
    for a in &classes {
        for b in &classes {
            t.case();
            let lhs = group.phi(&group.mul(a, b));
            let rhs = ctx.mul(&group.phi(a), &group.phi(b));
            t.expect(lhs == rhs, || {
                format!("F_{q}: phi(g^{} g^{}) != phi * phi", a.exp(), b.exp())
            });
            t.expect(group.phi_residue(a) == group.phi(a).as_prime().unwrap_or(0) as u64, || {
                format!("F_{q}: phi table disagrees with the norm at g^{}", a.exp())
            });
        }
    }
}

fn bridge(ctx: &FieldCtx, t: &mut Tally) -> Result<(), VerifyError> {
    let p = ctx.characteristic() as i64;
    let q = ctx.order();
    let group = ClassGroup::new(ctx);
    let counter = PointCounter::new(ctx).map_err(|_| SearchError::FieldTooLarge(q))?;
    for (_, e) in ModelSpace::new(ctx).iter() {
        t.case();
        let frob = counter.count(&e);
        let hasse = e.hasse_p(ctx);
        t.expect(e.is_ordinary(ctx) == frob.ordinary, || {
            format!("F_{q}: {e:?} A_p = {hasse:?} but beta = {}", frob.beta)
        });
        let b2 = (frob.beta as i128).pow(2);
        let bound_ok = if frob.ordinary {
            b2 < 4 * q as i128
        } else {
            b2 <= 4 * q as i128
        };
        t.expect(bound_ok, || format!("F_{q}: {e:?} beta = {} out of bound", frob.beta));
        if !hasse.is_zero() {
            let phi = group.phi_of(&hasse).expect("nonzero") as i64;
            t.expect((frob.beta - phi).rem_euclid(p) == 0, || {
                format!("F_{q}: {e:?} beta = {} but phi([A_p]) = {phi}", frob.beta)
            });
        }
    }
    Ok(())
}

fn norm(ctx: &FieldCtx, t: &mut Tally) -> Result<(), VerifyError> {
    let p = ctx.characteristic();
    let q = ctx.order();
    let m = (q - 1) / (p - 1);
    let counter = PointCounter::new(ctx).map_err(|_| SearchError::FieldTooLarge(q))?;
    for (_, e) in ModelSpace::new(ctx).iter() {
        t.case();
        let a_p = e.hasse_p(ctx);
        let a_q = e.hasse_invariant(ctx, HasseLevel::Full);
        t.expect(a_q == ctx.pow(&a_p, m), || {
            format!("F_{q}: {e:?} A_q = {a_q:?}, A_p^m = {:?}", ctx.pow(&a_p, m))
        });
        let count = counter.count(&e).count;
        let expected = ctx.from_i64(1 - count as i64);
        t.expect(a_q.as_prime().is_some() && a_q == expected, || {
            format!("F_{q}: {e:?} A_q = {a_q:?} but 1 - #E = {expected:?}")
        });
    }
    Ok(())
}

fn closed_forms(ctx: &FieldCtx, t: &mut Tally) -> Result<(), VerifyError> {
    let p = ctx.characteristic();
    let q = ctx.order();
    if ![5, 7, 11].contains(&p) {
        return Err(VerifyError::Unsupported {
            suite: Suite::ClosedForms,
            p,
        });
    }
    for (_, e) in ModelSpace::new(ctx).iter() {
        t.case();
        let (a, b) = (e.a4(), e.a6());
        let expected = match p {
            5 => ctx.scale(a, 2),
            7 => ctx.scale(b, 3),
            _ => ctx.scale(&ctx.mul(a, b), 9),
        };
        let got = e.hasse_p(ctx);
        t.expect(got == expected, || {
            format!("F_{q}: {e:?} A_p = {got:?}, closed form {expected:?}")
        });
    }
    Ok(())
}

fn twists(ctx: &FieldCtx, t: &mut Tally) -> Result<(), VerifyError> {
    let p = ctx.characteristic();
    let q = ctx.order();
    let group = ClassGroup::new(ctx);
    let counter = PointCounter::new(ctx).map_err(|_| SearchError::FieldTooLarge(q))?;
    let j1728 = ctx.from_u64(1728);
    let j0 = ctx.zero();
    for (_, e) in ModelSpace::new(ctx).iter() {
        let hasse = e.hasse_p(ctx);
        let Ok(h) = group.class_of(&hasse) else {
            continue;
        };
        let j = e.j_invariant(ctx);
        let mut kinds = vec![TwistKind::Quadratic];
        if p % 4 == 1 && j == j1728 && e.a6().is_zero() {
            kinds.push(TwistKind::Quartic);
        }
        if p % 3 == 1 && j == j0 && e.a4().is_zero() {
            kinds.push(TwistKind::Sextic);
        }
        let frob = counter.count(&e);
        for d in ctx.elements().skip(1) {
            for &kind in &kinds {
                t.case();
                let twisted = match e.twist(ctx, &d, kind) {
                    Ok(c) => c,
                    Err(err) => {
                        t.expect(false, || format!("F_{q}: {e:?} {kind:?} by {d:?}: {err}"));
                        continue;
                    }
                };
                t.expect(twisted.j_invariant(ctx) == j, || {
                    format!("F_{q}: {kind:?} twist of {e:?} by {d:?} changed j")
                });
                let got = group.class_of(&twisted.hasse_p(ctx));
                let want = group.twist_action(&h, &d, kind);
                t.expect(got.is_ok() && got.clone().ok() == want.clone().ok(), || {
                    format!("F_{q}: {kind:?} twist of {e:?} by {d:?}: class {got:?}, law {want:?}")
                });
                if kind == TwistKind::Quadratic && ctx.quadratic_character(&d) == 1 {
                    let tf = counter.count(&twisted);
                    t.expect(tf == frob, || {
                        format!("F_{q}: square twist of {e:?} by {d:?} changed #E")
                    });
                }
            }
        }
    }
    Ok(())
}

fn etale(ctx: &FieldCtx, t: &mut Tally) {
    let p = ctx.characteristic();
    let q = ctx.order();
    let group = ClassGroup::new(ctx);
    let mut cache: HashMap<u64, Vec<usize>> = HashMap::new();
    for (_, e) in ModelSpace::new(ctx).iter() {
        let hasse = e.hasse_p(ctx);
        if hasse.is_zero() {
            t.expect(
                group.ptorsion_description(&e) == PTorsionDescription::SupersingularM2,
                || format!("F_{q}: supersingular {e:?} not labelled M2"),
            );
            continue;
        }
        t.case();
        let degrees = cache
            .entry(ctx.ordinal(&hasse))
            .or_insert_with(|| group.etale_degrees(&hasse))
            .clone();
        let phi = group.phi_of(&hasse).expect("nonzero");
        let order = multiplicative_order_mod(phi, p) as usize;
        t.expect(degrees.iter().sum::<usize>() == (p - 1) as usize, || {
            format!("F_{q}: degrees {degrees:?} for h = {hasse:?} do not sum to p-1")
        });
        t.expect(degrees.iter().all(|&d| d == order), || {
            format!("F_{q}: degrees {degrees:?} for h = {hasse:?}, expected all {order}")
        });
        let j = e.j_invariant(ctx);
        let l_root = ctx.pth_root(&j);
        t.expect(ctx.frobenius(&l_root) == j, || {
            format!("F_{q}: {l_root:?}^p != j for {e:?}")
        });
    }
    if q == 5 {
        let fixtures = [(2u64, vec![4usize]), (1, vec![1, 1, 1, 1])];
        for (h, want) in fixtures {
            let got = group.etale_degrees(&ctx.from_u64(h));
            t.expect(got == want, || format!("F_5: y^4 - {h} degrees {got:?}, expected {want:?}"));
        }
    }
}

fn census_suite(ctx: &FieldCtx, t: &mut Tally, threads: usize) -> Result<(), VerifyError> {
    let p = ctx.characteristic();
    let q = ctx.order();
    let group = ClassGroup::new(ctx);
    let formula = realizable_set(p, q);

    // Full sweep: every residue that occurs, without any shortcut.
    let mut realized = BTreeSet::new();
    for (_, e) in ModelSpace::new(ctx).iter() {
        t.case();
        let hasse = e.hasse_p(ctx);
        if !hasse.is_zero() {
            realized.insert(group.phi_of(&hasse).expect("nonzero"));
        }
    }
    t.expect(realized == formula, || {
        format!("F_{q}: realized {realized:?}, formula {formula:?}")
    });

    let report = census(
        ctx,
        CensusOptions {
            mode: SearchMode::Shortcut,
            threads,
        },
    )?;
    t.expect(report.formula_agrees, || {
        format!(
            "F_{q}: census verdict {:?}, formula missing {:?}",
            report.verdict, report.formula_missing
        )
    });
    for entry in &report.entries {
        t.expect(entry.witness.is_some() == realized.contains(&entry.residue), || {
            format!("F_{q}: census entry for {} disagrees with the sweep", entry.residue)
        });
    }
    // The trivial class is realized over every field.
    t.expect(report.entries[0].witness.is_some(), || {
        format!("F_{q}: no curve with trivial Hasse class")
    });
    if let Verdict::ProperSubset(_) = report.verdict {
        let closed = formula
            .iter()
            .all(|a| formula.iter().all(|b| formula.contains(&(a * b % p))));
        t.expect(!closed, || format!("F_{q}: realizable set {formula:?} is a subgroup"));
    }
    Ok(())
}

/// Runs one suite over the given fields; `threads` is passed to the census.
pub fn run_suite(
    suite: Suite,
    fields: &[(u64, u32)],
    threads: usize,
) -> Result<SuiteReport, VerifyError> {
    let mut tally = Tally::new();
    let mut orders = Vec::new();
    for &(p, n) in fields {
        let ctx = FieldCtx::new(p, n)?;
        if ctx.order() > suite.limit() {
            return Err(VerifyError::TooLarge {
                suite,
                q: ctx.order(),
                limit: suite.limit(),
            });
        }
        orders.push(ctx.order());
        match suite {
            Suite::Classification => classification(&ctx, &mut tally),
            Suite::Bridge => bridge(&ctx, &mut tally)?,
            Suite::Twists => twists(&ctx, &mut tally)?,
            Suite::ClosedForms => closed_forms(&ctx, &mut tally)?,
            Suite::Norm => norm(&ctx, &mut tally)?,
            Suite::Etale => etale(&ctx, &mut tally),
            Suite::Census => census_suite(&ctx, &mut tally, threads)?,
        }
    }
    Ok(SuiteReport {
        suite,
        statement: suite.statement().to_string(),
        fields: orders,
        cases: tally.cases,
        failures: tally.failures,
        failure_samples: tally.samples,
    })
}

/// Smallest `r` with `r * r` outside a realizable set, as a witness that the
/// set is not a subgroup.
pub fn non_closure_witness(p: u64, q: u64) -> Option<(u64, u64)> {
    let set = realizable_set(p, q);
    set.iter()
        .flat_map(|&a| set.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| !set.contains(&(a * b % p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nonsingular_short_models(p: u64) -> u64 {
        (0..p)
            .flat_map(|a| (0..p).map(move |b| (a, b)))
            .filter(|&(a, b)| (4 * a * a * a + 27 * b * b) % p != 0)
            .count() as u64
    }

    #[test]
    fn census_case_count_is_model_count() {
        let r = run_suite(Suite::Census, &[(13, 1)], 1).unwrap();
        assert!(r.passed(), "{:?}", r.failure_samples);
        assert_eq!(r.cases, nonsingular_short_models(13));
    }

    #[test]
    fn closed_forms_reject_other_primes() {
        assert!(matches!(
            run_suite(Suite::ClosedForms, &[(13, 1)], 1),
            Err(VerifyError::Unsupported { p: 13, .. })
        ));
    }

    #[test]
    fn limits_enforced() {
        assert!(matches!(
            run_suite(Suite::Norm, &[(11, 2)], 1),
            Err(VerifyError::TooLarge { q: 121, .. })
        ));
    }

    #[test]
    fn classification_case_count() {
        let r = run_suite(Suite::Classification, &[(3, 2)], 1).unwrap();
        assert!(r.passed());
        // 8 nonzero elements + 2 * 2 ordered class pairs
        assert_eq!(r.cases, 12);
    }

    #[test]
    fn non_closure_for_19() {
        assert_eq!(non_closure_witness(19, 19), Some((2, 5)));
        assert_eq!(non_closure_witness(13, 13), None);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
        assert_eq!(Suite::parse("nope"), None);
    }
}
