//! Twisted forms of `μ_p` over `F_q` and the curves that carry them.
//!
//! Twisted forms are classified by `F_q^x / F_q^{x(p-1)}`, a cyclic group of
//! order `p - 1`. A class is stored by the residue `e mod (p-1)` of the
//! discrete logarithm of any representative to the primitive element `g`, and
//! its canonical representative is `g^e`. The norm-type map
//! `φ: x -> x^{(q-1)/(p-1)}` identifies the class group with `F_p^x`.
//!
//! Classes reported for curves are always Hasse-invariant classes `[A_p]`; the
//! class of the p-Lie algebra of `ker(F)` is the inverse, see
//! [`FrobeniusKernelClass::kernel_class`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::curve::{TwistKind, WeierstrassCurve};
use crate::gf::{DlogTable, FieldCtx, FieldElement};
use crate::poly::Polynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormsError {
    #[error("zero has no unit class")]
    ZeroElement,
    #[error("twist parameter must be nonzero")]
    ZeroTwistParameter,
    #[error("{kind:?} twist needs p = 1 mod {modulus}, got p = {p}")]
    BadCongruence { kind: TwistKind, modulus: u64, p: u64 },
    #[error("{0} is not a nonzero residue mod {1}")]
    ResidueOutOfRange(u64, u64),
}

/// An element of `F_q^x / F_q^{x(p-1)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitClass {
    exp: u64,
    rep: FieldElement,
}

impl UnitClass {
    /// Discrete-log residue in `[0, p - 1)`.
    pub fn exp(&self) -> u64 {
        self.exp
    }

    /// Canonical representative `g^exp`.
    pub fn rep(&self) -> &FieldElement {
        &self.rep
    }

    pub fn is_trivial(&self) -> bool {
        self.exp == 0
    }
}

/// The class group of one field, with its discrete-log table.
pub struct ClassGroup<'a> {
    ctx: &'a FieldCtx,
    dlog: DlogTable,
    /// `p - 1`, the group order.
    index: u64,
    /// `(q - 1) / (p - 1)`, the exponent of `φ`.
    norm_exp: u64,
    /// `phi_table[e]` is the residue `φ(g^e)`.
    phi_table: Vec<u64>,
}

impl<'a> ClassGroup<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        let p = ctx.characteristic();
        let index = p - 1;
        let norm_exp = (ctx.order() - 1) / index;
        let g = ctx.primitive_element();
        let phi_g = ctx.pow(g, norm_exp);
        let mut phi_table = Vec::with_capacity(index as usize);
        let mut cur = ctx.one();
        for _ in 0..index {
            phi_table.push(cur.as_prime().expect("norm lies in F_p") as u64);
            cur = ctx.mul(&cur, &phi_g);
        }
        ClassGroup {
            ctx,
            dlog: DlogTable::new(ctx),
            index,
            norm_exp,
            phi_table,
        }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// Number of classes, `p - 1`.
    pub fn order(&self) -> u64 {
        self.index
    }

    /// The class with discrete-log residue `exp mod (p - 1)`.
    pub fn from_exp(&self, exp: u64) -> UnitClass {
        let exp = exp % self.index;
        UnitClass {
            exp,
            rep: self.ctx.pow(self.dlog.generator(), exp),
        }
    }

    pub fn class_of(&self, x: &FieldElement) -> Result<UnitClass, FormsError> {
        let e = self
            .dlog
            .log(self.ctx, x)
            .map_err(|_| FormsError::ZeroElement)?;
        Ok(self.from_exp(e))
    }

    /// All `p - 1` classes, ordered by exponent.
    pub fn enumerate(&self) -> Vec<UnitClass> {
        (0..self.index).map(|e| self.from_exp(e)).collect()
    }

    pub fn mul(&self, a: &UnitClass, b: &UnitClass) -> UnitClass {
        self.from_exp(a.exp + b.exp)
    }

    pub fn inverse(&self, a: &UnitClass) -> UnitClass {
        self.from_exp(self.index - a.exp)
    }

    /// `φ(c) = rep^{(q-1)/(p-1)}`, an element of `F_p^x` inside `F_q`.
    pub fn phi(&self, c: &UnitClass) -> FieldElement {
        self.ctx.pow(&c.rep, self.norm_exp)
    }

    /// `φ(c)` as an integer residue in `[1, p)`.
    pub fn phi_residue(&self, c: &UnitClass) -> u64 {
        self.phi_table[c.exp as usize]
    }

    /// `φ([x])` for nonzero `x`, straight from the norm.
    pub fn phi_of(&self, x: &FieldElement) -> Result<u64, FormsError> {
        if x.is_zero() {
            return Err(FormsError::ZeroElement);
        }
        Ok(self.ctx.pow(x, self.norm_exp).as_prime().expect("norm lies in F_p") as u64)
    }

    /// The class `c` with `φ(c) = h`.
    pub fn class_with_phi(&self, h: u64) -> Result<UnitClass, FormsError> {
        let p = self.ctx.characteristic();
        let e = self
            .phi_table
            .iter()
            .position(|&r| r == h)
            .ok_or(FormsError::ResidueOutOfRange(h, p))?;
        Ok(self.from_exp(e as u64))
    }

    /// Effect of a twist by `D` on the Hasse class.
    pub fn twist_action(
        &self,
        h: &UnitClass,
        d: &FieldElement,
        kind: TwistKind,
    ) -> Result<UnitClass, FormsError> {
        if d.is_zero() {
            return Err(FormsError::ZeroTwistParameter);
        }
        let p = self.ctx.characteristic();
        let modulus = match kind {
            TwistKind::Quadratic => 2,
            TwistKind::Quartic => 4,
            TwistKind::Sextic => 3,
        };
        if (p - 1) % kind.order() != 0 {
            return Err(FormsError::BadCongruence { kind, modulus, p });
        }
        let scaled = self
            .ctx
            .mul(&h.rep, &self.ctx.pow(d, (p - 1) / kind.order()));
        self.class_of(&scaled)
    }

    pub fn kernel_of_frobenius(&self, curve: &WeierstrassCurve) -> FrobeniusKernelClass {
        let hasse = curve.hasse_p(self.ctx);
        match self.class_of(&hasse) {
            Ok(c) => FrobeniusKernelClass::Ordinary(c),
            Err(_) => FrobeniusKernelClass::Supersingular,
        }
    }

    /// Degrees of the irreducible factors of `y^{p-1} - h`, with multiplicity.
    pub fn etale_degrees(&self, h: &FieldElement) -> Vec<usize> {
        let ctx = self.ctx;
        let degree = (ctx.characteristic() - 1) as usize;
        Polynomial::monomial(ctx.one(), degree, ctx)
            .sub(&Polynomial::constant(h.clone()), ctx)
            .factor(ctx)
            .expect("y^{p-1} - h is nonzero")
            .degrees()
    }

    pub fn ptorsion_description(&self, curve: &WeierstrassCurve) -> PTorsionDescription {
        let ctx = self.ctx;
        let hasse = curve.hasse_p(ctx);
        let Ok(hasse_class) = self.class_of(&hasse) else {
            return PTorsionDescription::SupersingularM2;
        };
        let etale_degrees = self.etale_degrees(&hasse);
        let j = curve.j_invariant(ctx);
        let l_root = ctx.pth_root(&j);
        PTorsionDescription::OrdinaryScheme {
            hasse_class,
            hasse,
            j,
            l_root,
            etale_degrees,
        }
    }
}

/// Kernel of Frobenius: a twisted form of `μ_p` or `α_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobeniusKernelClass {
    /// Carries the Hasse class `[A_p]`.
    Ordinary(UnitClass),
    /// `ker(F) ≅ α_p`.
    Supersingular,
}

impl FrobeniusKernelClass {
    /// Class of the p-Lie algebra of `ker(F)`: the inverse of `[A_p]`.
    pub fn kernel_class(&self, group: &ClassGroup<'_>) -> Option<UnitClass> {
        match self {
            FrobeniusKernelClass::Ordinary(c) => Some(group.inverse(c)),
            FrobeniusKernelClass::Supersingular => None,
        }
    }
}

/// The p-torsion group scheme `E[p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PTorsionDescription {
    /// Spectrum of `k ⊕ M ⊕ L`, `M = k[y]/(y^{p-1} - h)`, `L = M[x]/(x^p - j)`.
    /// Over a finite field `x^p - j = (x - l_root)^p`.
    OrdinaryScheme {
        hasse_class: UnitClass,
        hasse: FieldElement,
        j: FieldElement,
        l_root: FieldElement,
        /// Degrees of the irreducible factors of `y^{p-1} - h`.
        etale_degrees: Vec<usize>,
    },
    /// The self-dual non-split extension of `α_p` by itself.
    SupersingularM2,
}

/// Number of twisted forms of `μ_p` over `F_{p^n}`.
pub fn twisted_form_count(p: u64) -> u64 {
    // In characteristic 2 only μ_2 itself exists.
    p.saturating_sub(1).max(1)
}

fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Largest `|β|` with `β^2 < 4q`.
pub fn trace_bound(q: u64) -> u64 {
    isqrt(4 * q - 1)
}

/// `{ β mod p : β ≠ 0, p ∤ β, β^2 < 4q }`.
pub fn realizable_set(p: u64, q: u64) -> BTreeSet<u64> {
    if p == 2 {
        return BTreeSet::from([1]);
    }
    let bound = trace_bound(q) as i64;
    (-bound..=bound)
        .map(|b| b.rem_euclid(p as i64) as u64)
        .filter(|&r| r != 0)
        .collect()
}

/// `F_p^x` minus [`realizable_set`].
pub fn missing_set(p: u64, q: u64) -> BTreeSet<u64> {
    let have = realizable_set(p, q);
    (1..p).filter(|r| !have.contains(r)).collect()
}
