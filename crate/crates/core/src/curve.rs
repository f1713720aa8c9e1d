//! Elliptic curves `y^2 = x^3 + a2 x^2 + a4 x + a6` over `F_q`, `q` odd.
//!
//! For `p >= 5` the model is the short one (`a2 = 0`). In characteristic 3 the
//! `x^2` term is kept: every curve `y^2 = x^3 + a4 x + a6` there has `j = 0`
//! and is supersingular.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement};
use crate::poly::Polynomial;

/// Largest field order for which points are counted by brute force.
pub const MAX_COUNT_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("singular model: discriminant vanishes")]
    SingularModel,
    #[error("a2 must be zero in characteristic {0}")]
    NonzeroA2(u64),
    #[error("field of order {0} is too large for exhaustive point counting")]
    FieldTooLarge(u64),
    #[error("twist parameter must be nonzero")]
    ZeroTwistParameter,
    #[error("{kind:?} twist needs j = {needed}")]
    WrongJInvariant { kind: TwistKind, needed: u32 },
    #[error("{kind:?} twist needs p = 1 mod {modulus}, got p = {p}")]
    BadCongruence { kind: TwistKind, modulus: u64, p: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistKind {
    Quadratic,
    Quartic,
    Sextic,
}

impl TwistKind {
    /// Order of the automorphism used for the twist.
    pub fn order(self) -> u64 {
        match self {
            TwistKind::Quadratic => 2,
            TwistKind::Quartic => 4,
            TwistKind::Sextic => 6,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeierstrassCurve {
    a2: FieldElement,
    a4: FieldElement,
    a6: FieldElement,
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + ({})x^2 + ({})x + ({})",
            self.a2, self.a4, self.a6
        )
    }
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[{}; {}; {}]", self.a2, self.a4, self.a6)
    }
}

/// `#E(F_q)` and the trace of Frobenius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrobeniusData {
    pub count: u64,
    pub beta: i64,
    pub ordinary: bool,
}

/// Which Hasse invariant to extract: `A_p` or `A_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HasseLevel {
    Prime,
    Full,
}

fn discriminant_of(
    ctx: &FieldCtx,
    a2: &FieldElement,
    a4: &FieldElement,
    a6: &FieldElement,
) -> FieldElement {
    let b2 = ctx.scale(a2, 4);
    let b4 = ctx.scale(a4, 2);
    let b6 = ctx.scale(a6, 4);
    let b8 = ctx.sub(&ctx.scale(&ctx.mul(a2, a6), 4), &ctx.square(a4));
    // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
    let t1 = ctx.mul(&ctx.square(&b2), &b8);
    let t2 = ctx.scale(&ctx.mul(&ctx.square(&b4), &b4), 8);
    let t3 = ctx.scale(&ctx.square(&b6), 27);
    let t4 = ctx.scale(&ctx.mul(&ctx.mul(&b2, &b4), &b6), 9);
    ctx.sub(&ctx.sub(&ctx.sub(&t4, &t1), &t2), &t3)
}

impl WeierstrassCurve {
    pub fn new(
        ctx: &FieldCtx,
        a2: FieldElement,
        a4: FieldElement,
        a6: FieldElement,
    ) -> Result<Self, CurveError> {
        if ctx.characteristic() >= 5 && !a2.is_zero() {
            return Err(CurveError::NonzeroA2(ctx.characteristic()));
        }
        if discriminant_of(ctx, &a2, &a4, &a6).is_zero() {
            return Err(CurveError::SingularModel);
        }
        Ok(WeierstrassCurve { a2, a4, a6 })
    }

    /// `y^2 = x^3 + a4 x + a6`.
    pub fn short(ctx: &FieldCtx, a4: FieldElement, a6: FieldElement) -> Result<Self, CurveError> {
        Self::new(ctx, ctx.zero(), a4, a6)
    }

    /// Model from prime-subfield integers.
    pub fn from_ints(ctx: &FieldCtx, a2: u64, a4: u64, a6: u64) -> Result<Self, CurveError> {
        Self::new(ctx, ctx.from_u64(a2), ctx.from_u64(a4), ctx.from_u64(a6))
    }

    pub fn a2(&self) -> &FieldElement {
        &self.a2
    }

    pub fn a4(&self) -> &FieldElement {
        &self.a4
    }

    pub fn a6(&self) -> &FieldElement {
        &self.a6
    }

    pub fn discriminant(&self, ctx: &FieldCtx) -> FieldElement {
        discriminant_of(ctx, &self.a2, &self.a4, &self.a6)
    }

    /// `c4^3 / Δ` with `c4 = b2^2 - 24 b4`.
    pub fn j_invariant(&self, ctx: &FieldCtx) -> FieldElement {
        let b2 = ctx.scale(&self.a2, 4);
        let b4 = ctx.scale(&self.a4, 2);
        let c4 = ctx.sub(&ctx.square(&b2), &ctx.scale(&b4, 24));
        let c4_cubed = ctx.mul(&ctx.square(&c4), &c4);
        ctx.div(&c4_cubed, &self.discriminant(ctx))
            .expect("nonsingular model has nonzero discriminant")
    }

    /// The cubic `f` with `E: y^2 = f(x)`.
    pub fn rhs(&self, ctx: &FieldCtx) -> Polynomial {
        Polynomial::new(vec![
            self.a6.clone(),
            self.a4.clone(),
            self.a2.clone(),
            ctx.one(),
        ])
    }

    pub fn eval_rhs(&self, x: &FieldElement, ctx: &FieldCtx) -> FieldElement {
        // ((x + a2) x + a4) x + a6
        let t = ctx.add(x, &self.a2);
        let t = ctx.add(&ctx.mul(&t, x), &self.a4);
        ctx.add(&ctx.mul(&t, x), &self.a6)
    }

    /// `#E(F_q)` by summing the quadratic character of `f(x)` over `F_q`.
    pub fn point_count(&self, ctx: &FieldCtx) -> Result<FrobeniusData, CurveError> {
        if ctx.order() > MAX_COUNT_ORDER {
            return Err(CurveError::FieldTooLarge(ctx.order()));
        }
        let sum: i64 = ctx
            .elements()
            .map(|x| ctx.quadratic_character(&self.eval_rhs(&x, ctx)) as i64)
            .sum();
        Ok(frobenius_data(ctx, sum))
    }

    /// `A_p` (coefficient of `x^{p-1}` in `f^{(p-1)/2}`) or `A_q`.
    pub fn hasse_invariant(&self, ctx: &FieldCtx, level: HasseLevel) -> FieldElement {
        let m = match level {
            HasseLevel::Prime => ctx.characteristic(),
            HasseLevel::Full => ctx.order(),
        };
        let cap = (m - 1) as usize;
        self.rhs(ctx)
            .pow_truncated((m - 1) / 2, cap, ctx)
            .coeff(cap, ctx)
    }

    pub fn hasse_p(&self, ctx: &FieldCtx) -> FieldElement {
        self.hasse_invariant(ctx, HasseLevel::Prime)
    }

    /// Ordinary iff `A_p != 0`.
    pub fn is_ordinary(&self, ctx: &FieldCtx) -> bool {
        !self.hasse_p(ctx).is_zero()
    }

    /// Twist by `D` through the explicit coefficient maps.
    pub fn twist(
        &self,
        ctx: &FieldCtx,
        d: &FieldElement,
        kind: TwistKind,
    ) -> Result<WeierstrassCurve, CurveError> {
        if d.is_zero() {
            return Err(CurveError::ZeroTwistParameter);
        }
        let p = ctx.characteristic();
        let (a2, a4, a6) = match kind {
            TwistKind::Quadratic => {
                let d2 = ctx.square(d);
                let d3 = ctx.mul(&d2, d);
                (
                    ctx.mul(d, &self.a2),
                    ctx.mul(&d2, &self.a4),
                    ctx.mul(&d3, &self.a6),
                )
            }
            TwistKind::Quartic => {
                if self.j_invariant(ctx) != ctx.from_u64(1728) || !self.a6.is_zero() {
                    return Err(CurveError::WrongJInvariant { kind, needed: 1728 });
                }
                if p % 4 != 1 {
                    return Err(CurveError::BadCongruence { kind, modulus: 4, p });
                }
                (ctx.zero(), ctx.mul(d, &self.a4), ctx.zero())
            }
            TwistKind::Sextic => {
                if !self.j_invariant(ctx).is_zero() || !self.a4.is_zero() {
                    return Err(CurveError::WrongJInvariant { kind, needed: 0 });
                }
                if p % 3 != 1 {
                    return Err(CurveError::BadCongruence { kind, modulus: 3, p });
                }
                (ctx.zero(), ctx.zero(), ctx.mul(d, &self.a6))
            }
        };
        WeierstrassCurve::new(ctx, a2, a4, a6)
    }
}

fn frobenius_data(ctx: &FieldCtx, character_sum: i64) -> FrobeniusData {
    let q = ctx.order() as i64;
    let count = q + 1 + character_sum;
    let beta = q + 1 - count;
    // Equality |β| = 2√q happens for supersingular curves over square q.
    assert!(
        (beta as i128).pow(2) <= 4 * q as i128,
        "Hasse bound violated: beta = {beta}, q = {q}"
    );
    FrobeniusData {
        count: count as u64,
        beta,
        ordinary: beta.rem_euclid(ctx.characteristic() as i64) != 0,
    }
}

/// Point counting with a precomputed character table, for sweeps.
pub struct PointCounter<'a> {
    ctx: &'a FieldCtx,
    table: Vec<i8>,
}

impl<'a> PointCounter<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Result<Self, CurveError> {
        if ctx.order() > MAX_COUNT_ORDER {
            return Err(CurveError::FieldTooLarge(ctx.order()));
        }
        Ok(PointCounter {
            ctx,
            table: ctx.character_table(),
        })
    }

    pub fn count(&self, curve: &WeierstrassCurve) -> FrobeniusData {
        let ctx = self.ctx;
        let sum: i64 = ctx
            .elements()
            .map(|x| self.table[ctx.ordinal(&curve.eval_rhs(&x, ctx)) as usize] as i64)
            .sum();
        frobenius_data(ctx, sum)
    }
}

/// Enumerates Weierstrass models `(a2, a4, a6)` in lexicographic order.
///
/// `a2` ranges over `F_q` only in characteristic 3.
#[derive(Clone, Copy)]
pub struct ModelSpace<'a> {
    ctx: &'a FieldCtx,
}

impl<'a> ModelSpace<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        ModelSpace { ctx }
    }

    /// Number of coefficient triples, singular ones included.
    pub fn len(&self) -> u64 {
        let q = self.ctx.order();
        if self.ctx.characteristic() == 3 {
            q * q * q
        } else {
            q * q
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The model at a given index, or `None` if it is singular.
    pub fn get(&self, index: u64) -> Option<WeierstrassCurve> {
        let ctx = self.ctx;
        let q = ctx.order();
        let a6 = ctx.element_at(index % q);
        let a4 = ctx.element_at((index / q) % q);
        let a2 = ctx.element_at(index / (q * q));
        WeierstrassCurve::new(ctx, a2, a4, a6).ok()
    }

    /// All nonsingular models with their indices.
    pub fn iter(&self) -> impl Iterator<Item = (u64, WeierstrassCurve)> + 'a {
        let this = *self;
        (0..this.len()).filter_map(move |i| this.get(i).map(|c| (i, c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldCtx {
        FieldCtx::new(5, 1).unwrap()
    }

    /// Naive count over all (x, y) pairs.
    fn brute_count(ctx: &FieldCtx, e: &WeierstrassCurve) -> u64 {
        let mut n = 1;
        for x in ctx.elements() {
            let rhs = e.eval_rhs(&x, ctx);
            for y in ctx.elements() {
                if ctx.square(&y) == rhs {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn invariants_over_f5() {
        let ctx = f5();
        let e = WeierstrassCurve::from_ints(&ctx, 0, 1, 0).unwrap();
        assert_eq!(e.discriminant(&ctx), ctx.from_u64(1));
        assert_eq!(e.j_invariant(&ctx), ctx.from_u64(3));
        let e = WeierstrassCurve::from_ints(&ctx, 0, 0, 1).unwrap();
        assert_eq!(e.j_invariant(&ctx), ctx.zero());
        let e = WeierstrassCurve::from_ints(&ctx, 0, 1, 1).unwrap();
        assert_eq!(e.j_invariant(&ctx), ctx.from_u64(2));
    }

    #[test]
    fn model_errors() {
        let ctx = f5();
        assert_eq!(
            WeierstrassCurve::from_ints(&ctx, 0, 0, 0),
            Err(CurveError::SingularModel)
        );
        assert_eq!(
            WeierstrassCurve::from_ints(&ctx, 1, 1, 1),
            Err(CurveError::NonzeroA2(5))
        );
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert!(WeierstrassCurve::from_ints(&f3, 1, 0, 1).is_ok());
    }

    #[test]
    fn point_counts_over_f5() {
        let ctx = f5();
        let cases = [
            ((1, 0), 4, 2, true),
            ((0, 1), 6, 0, false),
            ((1, 1), 9, -3, true),
            ((2, 0), 2, 4, true),
        ];
        for ((a4, a6), count, beta, ordinary) in cases {
            let e = WeierstrassCurve::from_ints(&ctx, 0, a4, a6).unwrap();
            let data = e.point_count(&ctx).unwrap();
            assert_eq!(data, FrobeniusData { count, beta, ordinary });
            assert_eq!(brute_count(&ctx, &e), count);
        }
    }

    #[test]
    fn counter_agrees_with_brute_force() {
        for (p, n) in [(3, 1), (3, 2), (5, 1), (7, 1)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let counter = PointCounter::new(&ctx).unwrap();
            for (_, e) in ModelSpace::new(&ctx).iter() {
                assert_eq!(counter.count(&e).count, brute_count(&ctx, &e));
            }
        }
    }

    #[test]
    fn hasse_invariants_over_f5() {
        let ctx = f5();
        for a in 0..5 {
            for b in 0..5 {
                if let Ok(e) = WeierstrassCurve::from_ints(&ctx, 0, a, b) {
                    assert_eq!(e.hasse_p(&ctx), ctx.from_u64(2 * a));
                }
            }
        }
        let e = WeierstrassCurve::from_ints(&ctx, 0, 0, 1).unwrap();
        assert!(e.hasse_p(&ctx).is_zero());
        assert!(!e.is_ordinary(&ctx));
        let e = WeierstrassCurve::from_ints(&ctx, 0, 1, 1).unwrap();
        assert_eq!(e.hasse_p(&ctx), ctx.from_u64(2));
        let e = WeierstrassCurve::from_ints(&ctx, 0, 1, 0).unwrap();
        assert!(e.is_ordinary(&ctx));
    }

    #[test]
    fn char3_hasse_is_a2() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        for (_, e) in ModelSpace::new(&ctx).iter() {
            assert_eq!(e.hasse_p(&ctx), *e.a2());
        }
    }

    #[test]
    fn twists() {
        let ctx = f5();
        let e = WeierstrassCurve::from_ints(&ctx, 0, 1, 1).unwrap();
        let t = e.twist(&ctx, &ctx.from_u64(2), TwistKind::Quadratic).unwrap();
        assert_eq!(t, WeierstrassCurve::from_ints(&ctx, 0, 4, 3).unwrap());
        assert_eq!(t.hasse_p(&ctx), ctx.from_u64(3));
        assert_eq!(t.j_invariant(&ctx), e.j_invariant(&ctx));
        assert_eq!(e.twist(&ctx, &ctx.one(), TwistKind::Quadratic).unwrap(), e);
        assert_eq!(
            e.twist(&ctx, &ctx.zero(), TwistKind::Quadratic),
            Err(CurveError::ZeroTwistParameter)
        );
        let e1728 = WeierstrassCurve::from_ints(&ctx, 0, 1, 0).unwrap();
        assert_eq!(
            e1728.twist(&ctx, &ctx.from_u64(2), TwistKind::Sextic),
            Err(CurveError::WrongJInvariant {
                kind: TwistKind::Sextic,
                needed: 0
            })
        );
        let q = e1728.twist(&ctx, &ctx.from_u64(2), TwistKind::Quartic).unwrap();
        assert_eq!(q, WeierstrassCurve::from_ints(&ctx, 0, 2, 0).unwrap());
        let f7 = FieldCtx::new(7, 1).unwrap();
        let e = WeierstrassCurve::from_ints(&f7, 0, 1, 0).unwrap();
        assert_eq!(
            e.twist(&f7, &f7.from_u64(3), TwistKind::Quartic),
            Err(CurveError::BadCongruence {
                kind: TwistKind::Quartic,
                modulus: 4,
                p: 7
            })
        );
    }

    #[test]
    fn hasse_bound_is_attained_over_f9() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        let t = ctx.from_coeffs(&[0, 1]).unwrap();
        let e = WeierstrassCurve::new(&ctx, ctx.zero(), t, ctx.zero()).unwrap();
        let data = e.point_count(&ctx).unwrap();
        assert_eq!(data.count, 4);
        assert_eq!(data.beta, 6);
        assert!(!data.ordinary);
    }

    #[test]
    fn count_guard() {
        let ctx = FieldCtx::new(3, 13).unwrap();
        let e = WeierstrassCurve::from_ints(&ctx, 1, 0, 1).unwrap();
        assert_eq!(
            e.point_count(&ctx),
            Err(CurveError::FieldTooLarge(1_594_323))
        );
    }

    #[test]
    fn model_space_sizes() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(ModelSpace::new(&f3).len(), 27);
        let ctx = f5();
        let space = ModelSpace::new(&ctx);
        assert_eq!(space.len(), 25);
        let singular = (0..5u64)
            .flat_map(|a| (0..5u64).map(move |b| (a, b)))
            .filter(|&(a, b)| (4 * a * a * a + 27 * b * b) % 5 == 0)
            .count();
        assert_eq!(space.iter().count(), 25 - singular);
    }
}
