//! Dense univariate polynomials over `F_q`.
//!
//! Two consumers drive this module: Hasse-invariant extraction, which only
//! ever needs a few low coefficients of a power (`pow_truncated`), and the
//! factorization of `y^{p-1} - h` for the p-torsion description.

use std::fmt;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
}

/// Coefficients low to high, trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let one = c.as_prime() == Some(1);
            let coef = if c.as_prime().is_some() {
                c.to_string()
            } else {
                format!("({c})")
            };
            match (i, one) {
                (0, _) => f.write_str(&coef)?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{coef}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Complete factorization `leading * prod(factor^multiplicity)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub leading: FieldElement,
    /// Monic irreducible factors sorted by degree, then coefficients.
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    /// Factor degrees repeated by multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.degree().unwrap_or(0), *m as usize))
            .collect();
        out.sort_unstable();
        out
    }

    /// Multiplies everything back together.
    pub fn expand(&self, ctx: &FieldCtx) -> Polynomial {
        let mut acc = Polynomial::constant(self.leading.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f, ctx);
            }
        }
        acc
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(vec![c])
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::constant(ctx.one())
    }

    /// `c * x^d`.
    pub fn monomial(c: FieldElement, d: usize, ctx: &FieldCtx) -> Self {
        let mut coeffs = vec![ctx.zero(); d];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The variable `x`.
    pub fn x(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx.one(), 1, ctx)
    }

    /// Polynomial with prime-subfield coefficients given low to high.
    pub fn from_u64s(values: &[u64], ctx: &FieldCtx) -> Self {
        Self::new(values.iter().map(|&v| ctx.from_u64(v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize, ctx: &FieldCtx) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.as_prime() == Some(1))
    }

    pub fn add(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| ctx.add(&self.coeff(i, ctx), &other.coeff(i, ctx)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| ctx.sub(&self.coeff(i, ctx), &other.coeff(i, ctx)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &FieldElement, ctx: &FieldCtx) -> Self {
        Self::new(self.coeffs.iter().map(|a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self, ctx: &FieldCtx) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        self.mul_truncated(other, self.coeffs.len() + other.coeffs.len() - 2, ctx)
    }

    /// Product with every coefficient above `cap` dropped.
    pub fn mul_truncated(&self, other: &Self, cap: usize, ctx: &FieldCtx) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(cap + 1);
        let mut out = vec![ctx.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = ctx.add(&out[i + j], &ctx.mul(a, b));
            }
        }
        Self::new(out)
    }

    fn truncate(mut self, cap: usize) -> Self {
        self.coeffs.truncate(cap + 1);
        Self::new(self.coeffs)
    }

    /// `self^e` keeping only coefficients of degree `<= cap`.
    ///
    /// Coefficients up to `cap` of a product depend only on coefficients up
    /// to `cap` of the factors, so the retained part is exact.
    pub fn pow_truncated(&self, mut e: u64, cap: usize, ctx: &FieldCtx) -> Self {
        let mut acc = Self::one(ctx);
        let mut base = self.clone().truncate(cap);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_truncated(&base, cap, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_truncated(&base, cap, ctx);
            }
        }
        acc
    }

    pub fn pow(&self, mut e: u64, ctx: &FieldCtx) -> Self {
        let mut acc = Self::one(ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx);
            }
        }
        acc
    }

    pub fn eval(&self, x: &FieldElement, ctx: &FieldCtx) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(ctx.zero(), |acc, c| ctx.add(&ctx.mul(&acc, x), c))
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| ctx.scale(c, i as u64))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &Self, ctx: &FieldCtx) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = ctx
            .inv(divisor.leading().expect("nonzero"))
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![ctx.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = ctx.mul(&rem[k], &lead_inv);
            if c.is_zero() {
                continue;
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                let slot = &mut rem[k - dd + i];
                *slot = ctx.sub(slot, &ctx.mul(&c, b));
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self, ctx: &FieldCtx) -> Self {
        self.divrem(divisor, ctx).1
    }

    /// Exact division; debug-asserts a zero remainder.
    pub fn div_exact(&self, divisor: &Self, ctx: &FieldCtx) -> Self {
        let (q, r) = self.divrem(divisor, ctx);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Splits off the leading coefficient: `self = lead * monic`.
    pub fn monic_parts(&self, ctx: &FieldCtx) -> Option<(FieldElement, Self)> {
        let lead = self.leading()?.clone();
        let inv = ctx.inv(&lead).expect("leading coefficient is nonzero");
        Some((lead, self.scale(&inv, ctx)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, ctx);
            a = b;
            b = r;
        }
        match a.monic_parts(ctx) {
            Some((_, m)) => m,
            None => a,
        }
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, mut e: u64, modulus: &Self, ctx: &FieldCtx) -> Self {
        let mut acc = Self::one(ctx).rem(modulus, ctx);
        let mut base = self.rem(modulus, ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx).rem(modulus, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx).rem(modulus, ctx);
            }
        }
        acc
    }

    /// For a polynomial in `x^p`, the polynomial `g` with `g^p = self`.
    fn pth_root(&self, ctx: &FieldCtx) -> Self {
        let p = ctx.characteristic() as usize;
        Self::new(
            self.coeffs
                .iter()
                .step_by(p)
                .map(|c| ctx.pth_root(c))
                .collect(),
        )
    }

    /// Complete factorization into monic irreducibles.
    ///
    /// Square-free decomposition, then linear factors by evaluating at every
    /// field element, then distinct-degree splitting with `x^{q^d} - x`, and a
    /// deterministic equal-degree split when one degree class holds several
    /// factors.
    pub fn factor(&self, ctx: &FieldCtx) -> Result<Factorization, PolyError> {
        let (leading, monic) = self.monic_parts(ctx).ok_or(PolyError::ZeroPolynomial)?;
        let mut factors: Vec<(Polynomial, u32)> = Vec::new();
        for (part, mult) in square_free_decomposition(&monic, ctx) {
            for irr in split_square_free(part, ctx) {
                match factors.iter_mut().find(|(f, _)| *f == irr) {
                    Some((_, m)) => *m += mult,
                    None => factors.push((irr, mult)),
                }
            }
        }
        factors.sort_by(|(a, _), (b, _)| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs.cmp(&b.coeffs))
        });
        Ok(Factorization { leading, factors })
    }
}

/// Square-free factors with multiplicities, for monic `f`.
fn square_free_decomposition(f: &Polynomial, ctx: &FieldCtx) -> Vec<(Polynomial, u32)> {
    let p = ctx.characteristic() as u32;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let deriv = f.derivative(ctx);
    if deriv.is_zero() {
        // f is a p-th power.
        for (g, m) in square_free_decomposition(&f.pth_root(ctx), ctx) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&deriv, ctx);
    let mut w = f.div_exact(&c, ctx);
    let mut i = 1;
    while w.degree() != Some(0) {
        let y = w.gcd(&c, ctx);
        let fac = w.div_exact(&y, ctx);
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, ctx);
    }
    if c.degree().unwrap_or(0) > 0 {
        for (g, m) in square_free_decomposition(&c.pth_root(ctx), ctx) {
            out.push((g, m * p));
        }
    }
    out
}

/// Monic irreducible factors of a monic square-free polynomial.
fn split_square_free(mut f: Polynomial, ctx: &FieldCtx) -> Vec<Polynomial> {
    let mut out = Vec::new();
    let x = Polynomial::x(ctx);
    for r in ctx.elements() {
        if f.degree().unwrap_or(0) == 0 {
            break;
        }
        if f.eval(&r, ctx).is_zero() {
            let lin = Polynomial::new(vec![ctx.neg(&r), ctx.one()]);
            f = f.div_exact(&lin, ctx);
            out.push(lin);
        }
    }
    let q = ctx.order();
    // frob = x^{q^d} mod f
    let mut frob = x.powmod(q, &f, ctx);
    let mut d = 2;
    while f.degree().unwrap_or(0) >= 2 * d {
        frob = frob.powmod(q, &f, ctx);
        let g = f.gcd(&frob.sub(&x, ctx), ctx);
        if g.degree().unwrap_or(0) > 0 {
            f = f.div_exact(&g, ctx);
            frob = frob.rem(&f, ctx);
            out.extend(equal_degree_split(g, d, ctx));
        }
        d += 1;
    }
    if f.degree().unwrap_or(0) > 0 {
        out.push(f);
    }
    out
}

/// Monic polynomials in a fixed order: by degree, then lexicographically.
fn candidate_polys(ctx: &FieldCtx, max_degree: usize) -> impl Iterator<Item = Polynomial> + '_ {
    (1..=max_degree).flat_map(move |deg| {
        let q = ctx.order();
        let count = q.saturating_pow(deg as u32);
        (0..count).map(move |mut k| {
            let mut coeffs = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                coeffs.push(ctx.element_at(k % q));
                k /= q;
            }
            coeffs.push(ctx.one());
            Polynomial::new(coeffs)
        })
    })
}

/// Splits a product of distinct irreducibles of degree `d`.
///
/// Cantor-Zassenhaus splitting with test polynomials taken in a fixed order
/// instead of at random; for odd `q` some residue always separates two
/// distinct factors, so the scan terminates.
fn equal_degree_split(g: Polynomial, d: usize, ctx: &FieldCtx) -> Vec<Polynomial> {
    let deg = g.degree().unwrap_or(0);
    if deg <= d {
        return vec![g];
    }
    let one = Polynomial::one(ctx);
    let q = ctx.order();
    for a in candidate_polys(ctx, deg - 1) {
        // a^{(q^d - 1)/2} = prod_{i<d} (a^{(q-1)/2})^{q^i}
        let mut t = a.powmod((q - 1) / 2, &g, ctx);
        let mut acc = t.clone();
        for _ in 1..d {
            t = t.powmod(q, &g, ctx);
            acc = acc.mul(&t, ctx).rem(&g, ctx);
        }
        let h = g.gcd(&acc.sub(&one, ctx), ctx);
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < deg {
            let rest = g.div_exact(&h, ctx);
            let mut out = equal_degree_split(h, d, ctx);
            out.extend(equal_degree_split(rest, d, ctx));
            return out;
        }
    }
    unreachable!("some residue separates distinct irreducible factors")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldCtx {
        FieldCtx::new(5, 1).unwrap()
    }

    #[test]
    fn truncated_square_of_cubic() {
        let ctx = f5();
        let f = Polynomial::from_u64s(&[1, 1, 0, 1], &ctx);
        let sq = f.pow_truncated(2, 4, &ctx);
        assert_eq!(sq.degree(), Some(4));
        assert_eq!(sq.coeff(4, &ctx), ctx.from_u64(2));
        let full = f.pow(2, &ctx);
        assert_eq!(full, Polynomial::from_u64s(&[1, 2, 1, 2, 2, 0, 1], &ctx));
    }

    #[test]
    fn zeroth_power_is_one() {
        let ctx = f5();
        let f = Polynomial::from_u64s(&[3, 0, 4, 1], &ctx);
        assert_eq!(f.pow_truncated(0, 10, &ctx), Polynomial::one(&ctx));
        assert_eq!(f.pow_truncated(0, 0, &ctx), Polynomial::one(&ctx));
    }

    #[test]
    fn f7_cube_has_3b_at_x6() {
        let ctx = FieldCtx::new(7, 1).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                let f = Polynomial::from_u64s(&[b, a, 0, 1], &ctx);
                let c = f.pow_truncated(3, 6, &ctx).coeff(6, &ctx);
                assert_eq!(c, ctx.from_u64(3 * b), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn coeff_lookup() {
        let ctx = f5();
        let f = Polynomial::from_u64s(&[0, 2, 0, 1], &ctx);
        assert_eq!(f.coeff(1, &ctx), ctx.from_u64(2));
        assert_eq!(f.coeff(5, &ctx), ctx.zero());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            Polynomial::zero().factor(&f5()),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn fourth_roots_of_unity_split() {
        let ctx = f5();
        let f = Polynomial::from_u64s(&[4, 0, 0, 0, 1], &ctx);
        let fac = f.factor(&ctx).unwrap();
        let expected: Vec<(Polynomial, u32)> = [1u64, 2, 3, 4]
            .iter()
            .map(|&c| (Polynomial::from_u64s(&[c, 1], &ctx), 1))
            .collect();
        assert_eq!(fac.factors, expected);
    }

    #[test]
    fn y4_minus_2_is_irreducible() {
        let ctx = f5();
        let f = Polynomial::from_u64s(&[3, 0, 0, 0, 1], &ctx);
        let fac = f.factor(&ctx).unwrap();
        assert_eq!(fac.factors, vec![(f, 1)]);
    }

    #[test]
    fn frobenius_power_collapses() {
        let ctx = f5();
        let f = Polynomial::from_u64s(&[3, 0, 0, 0, 0, 1], &ctx);
        let fac = f.factor(&ctx).unwrap();
        assert_eq!(
            fac.factors,
            vec![(Polynomial::from_u64s(&[3, 1], &ctx), 5)]
        );
    }

    #[test]
    fn leading_coefficient_reported() {
        let ctx = f5();
        let f = Polynomial::from_u64s(&[2, 0, 3], &ctx);
        let fac = f.factor(&ctx).unwrap();
        assert_eq!(fac.leading, ctx.from_u64(3));
        assert_eq!(fac.expand(&ctx), f);
    }

    #[test]
    fn equal_degree_products_are_separated() {
        // (x^2 + 2)(x^2 + 3) over F_5: both quadratics irreducible.
        let ctx = f5();
        let a = Polynomial::from_u64s(&[2, 0, 1], &ctx);
        let b = Polynomial::from_u64s(&[3, 0, 1], &ctx);
        let fac = a.mul(&b, &ctx).factor(&ctx).unwrap();
        assert_eq!(fac.factors, vec![(a, 1), (b, 1)]);
    }

    #[test]
    fn factor_over_extension_field() {
        let ctx = FieldCtx::new(5, 2).unwrap();
        // y^4 - 2 splits into quadratics over F_25 (2 has order 4 in F_5^x,
        // so its fourth roots live in F_{5^4}).
        let f = Polynomial::from_u64s(&[3, 0, 0, 0, 1], &ctx);
        let fac = f.factor(&ctx).unwrap();
        assert_eq!(fac.degrees(), vec![2, 2]);
        assert_eq!(fac.expand(&ctx), f);
    }
}
