//! Arithmetic in the prime fields `F_p` and their extensions `F_{p^n}`.
//!
//! Elements are dense coefficient vectors `c_0 + c_1 t + ... + c_{n-1} t^{n-1}`
//! reduced modulo a fixed monic irreducible polynomial. The modulus is the
//! lexicographically smallest monic irreducible of degree `n`, comparing the
//! tuples `(c_0, ..., c_{n-1})`, so two contexts built from the same `(p, n)`
//! are identical. All arithmetic goes through a [`FieldCtx`]; elements carry
//! only the field order as an identity tag.

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported by the field context")]
    EvenCharacteristic,
    #[error("field order {p}^{n} exceeds 2^32")]
    DegreeTooLarge { p: u64, n: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    CtxMismatch,
    #[error("invalid field element `{0}`")]
    BadElement(String),
}

pub(crate) type Coeffs = SmallVec<[u32; 4]>;

/// An element of some `F_q`, tagged with `q`.
///
/// Derived ordering compares the coefficient tuple lexicographically starting
/// at the constant term, which is the enumeration order used everywhere.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    order: u64,
    coeffs: Coeffs,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// The field order `q` this element belongs to.
    pub fn field_order(&self) -> u64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Returns the residue if the element lies in the prime subfield.
    pub fn as_prime(&self) -> Option<u32> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Operation selector for [`FieldCtx::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow,
}

/// Second operand of [`FieldCtx::apply`].
#[derive(Debug, Clone)]
pub enum Operand {
    Element(FieldElement),
    Exponent(u64),
    None,
}

/// An immutable description of `F_{p^n}`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    n: usize,
    q: u64,
    /// Low coefficients `m_0..m_{n-1}` of the monic modulus; empty for `n = 1`.
    modulus: Vec<u32>,
    /// `(p - m_i) mod p`, used for reduction.
    neg_modulus: Vec<u64>,
    /// Distinct primes dividing `q - 1`.
    order_primes: Vec<u64>,
    primitive: FieldElement,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)?;
        if self.n > 1 {
            write!(f, " = F_{}[t]/({})", self.p, self.modulus_string())?;
        }
        Ok(())
    }
}

pub(crate) fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    if v % 2 == 0 {
        return v == 2;
    }
    let mut d = 3u64;
    while d * d <= v {
        if v % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Dense polynomials over `F_p` (low to high, entries reduced), used only to
/// pick and check the modulus.
mod prime_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let b = trim(b.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv(b[db], p);
        let mut r = trim(a.to_vec());
        while r.len() > db {
            let c = r[r.len() - 1] * lead_inv % p;
            let shift = r.len() - 1 - db;
            if c != 0 {
                for (i, &bc) in b.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + (p - c) * bc) % p;
                }
            }
            r.pop();
            r = trim(r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            e >>= 1;
            if e > 0 {
                base = mulmod(&base, &base, m, p);
            }
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let len = a.len().max(b.len());
        trim(
            (0..len)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }
}

/// Irreducibility of the monic polynomial `low + t^n` over `F_p`.
///
/// It has a factor of degree `d <= n/2` iff it shares a factor with
/// `t^{p^d} - t`, so this agrees with trial division by every monic
/// polynomial of degree `<= n/2`.
fn is_irreducible_over_prime(low: &[u32], p: u64) -> bool {
    let n = low.len();
    let f: Vec<u64> = low.iter().map(|&c| c as u64).chain([1]).collect();
    let t = [0u64, 1];
    let mut frob = t.to_vec();
    for _ in 1..=n / 2 {
        frob = prime_poly::powmod(&frob, p, &f, p);
        let g = prime_poly::gcd(&f, &prime_poly::sub(&frob, &t, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Builds `F_{p^n}`.
    pub fn new(p: u64, n: u32) -> Result<Self, GfError> {
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if p == 2 {
            return Err(GfError::EvenCharacteristic);
        }
        let q = match p.checked_pow(n) {
            Some(q) if q <= MAX_FIELD_ORDER => q,
            _ => return Err(GfError::DegreeTooLarge { p, n }),
        };
        let n = n as usize;
        let modulus = if n == 1 {
            Vec::new()
        } else {
            Self::smallest_irreducible(p, n)
        };
        let neg_modulus = modulus
            .iter()
            .map(|&m| (p - m as u64) % p)
            .collect();
        let mut ctx = FieldCtx {
            p: p as u32,
            n,
            q,
            modulus,
            neg_modulus,
            order_primes: prime_factors(q - 1),
            primitive: FieldElement {
                order: q,
                coeffs: SmallVec::new(),
            },
        };
        ctx.primitive = ctx.find_primitive();
        Ok(ctx)
    }

    fn smallest_irreducible(p: u64, n: usize) -> Vec<u32> {
        let total = p.pow(n as u32);
        // Skip c_0 = 0: those all have the root 0.
        (total / p..total)
            .map(|k| {
                // c_0 is the most significant digit of the lexicographic index.
                let mut low = vec![0u32; n];
                let mut rest = k;
                for i in (0..n).rev() {
                    low[i] = (rest % p) as u32;
                    rest /= p;
                }
                low
            })
            .find(|low| is_irreducible_over_prime(low, p))
            .expect("an irreducible polynomial of every degree exists")
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.n as u32
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Low coefficients of the monic modulus (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The modulus as text, e.g. `t^2 + 1`.
    pub fn modulus_string(&self) -> String {
        if self.n == 1 {
            return "t".to_string();
        }
        let mut parts = vec![format!("t^{}", self.n)];
        for i in (0..self.n).rev() {
            let c = self.modulus[i];
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        parts.join(" + ")
    }

    fn make(&self, coeffs: Coeffs) -> FieldElement {
        FieldElement {
            order: self.q,
            coeffs,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.make(SmallVec::from_elem(0, self.n))
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_u64(&self, v: u64) -> FieldElement {
        let mut c: Coeffs = SmallVec::from_elem(0, self.n);
        c[0] = (v % self.p as u64) as u32;
        self.make(c)
    }

    /// Image of a signed integer in the prime subfield.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        let p = self.p as i64;
        self.from_u64(v.rem_euclid(p) as u64)
    }

    /// Element from `c_0, c_1, ...`; missing high coefficients are zero and
    /// every entry is reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, GfError> {
        if coeffs.len() > self.n {
            return Err(GfError::BadElement(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.n
            )));
        }
        let mut c: Coeffs = SmallVec::from_elem(0, self.n);
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = (v % self.p as u64) as u32;
        }
        Ok(self.make(c))
    }

    /// Parses a decimal residue or a comma-separated coefficient list.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, GfError> {
        let parts: Result<Vec<u64>, _> = text
            .split(',')
            .map(|s| s.trim().parse::<u64>())
            .collect();
        match parts {
            Ok(v) if !v.is_empty() => self.from_coeffs(&v),
            _ => Err(GfError::BadElement(text.to_string())),
        }
    }

    /// The `k`-th element in lexicographic order of `(c_0, ..., c_{n-1})`.
    pub fn element_at(&self, k: u64) -> FieldElement {
        debug_assert!(k < self.q);
        let p = self.p as u64;
        let mut c: Coeffs = SmallVec::from_elem(0, self.n);
        let mut rest = k;
        for i in (0..self.n).rev() {
            c[i] = (rest % p) as u32;
            rest /= p;
        }
        self.make(c)
    }

    /// Inverse of [`FieldCtx::element_at`].
    pub fn ordinal(&self, x: &FieldElement) -> u64 {
        let p = self.p as u64;
        x.coeffs.iter().fold(0u64, |acc, &c| acc * p + c as u64)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |k| self.element_at(k))
    }

    #[inline]
    fn check(&self, x: &FieldElement) {
        debug_assert_eq!(x.order, self.q, "element from a different field");
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        let p = self.p as u64;
        let c = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| ((a as u64 + b as u64) % p) as u32)
            .collect();
        self.make(c)
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        let p = self.p as u64;
        let c = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| ((a as u64 + p - b as u64) % p) as u32)
            .collect();
        self.make(c)
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        self.check(x);
        let p = self.p as u64;
        let c = x
            .coeffs
            .iter()
            .map(|&a| ((p - a as u64) % p) as u32)
            .collect();
        self.make(c)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        let p = self.p as u64;
        if self.n == 1 {
            let v = (x.coeffs[0] as u64 * y.coeffs[0] as u64) % p;
            return self.make(SmallVec::from_elem(v as u32, 1));
        }
        let n = self.n;
        // For n >= 2 we have p < 2^16, so n products of size < p^2 fit in u64.
        let mut prod: SmallVec<[u64; 8]> = SmallVec::from_elem(0, 2 * n - 1);
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] += a as u64 * b as u64;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k] % p;
            if c != 0 {
                for (i, &m) in self.neg_modulus.iter().enumerate() {
                    let slot = &mut prod[k - n + i];
                    *slot = (*slot + c * m) % p;
                }
            }
        }
        self.make(prod[..n].iter().map(|&v| (v % p) as u32).collect())
    }

    /// Multiplication by a prime-subfield scalar.
    pub fn scale(&self, x: &FieldElement, s: u64) -> FieldElement {
        self.check(x);
        let p = self.p as u64;
        let s = s % p;
        self.make(
            x.coeffs
                .iter()
                .map(|&a| ((a as u64 * s) % p) as u32)
                .collect(),
        )
    }

    pub fn square(&self, x: &FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    /// Square-and-multiply; `pow(0, 0) = 1`.
    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, GfError> {
        if x.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(x, self.q - 2))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// Checked arithmetic entry point: validates that operands belong to
    /// this field before dispatching.
    pub fn apply(
        &self,
        op: ArithOp,
        x: &FieldElement,
        y: &Operand,
    ) -> Result<FieldElement, GfError> {
        self.validate(x)?;
        match (op, y) {
            (ArithOp::Inv, Operand::None) => self.inv(x),
            (ArithOp::Pow, Operand::Exponent(e)) => Ok(self.pow(x, *e)),
            (ArithOp::Add | ArithOp::Sub | ArithOp::Mul, Operand::Element(y)) => {
                self.validate(y)?;
                Ok(match op {
                    ArithOp::Add => self.add(x, y),
                    ArithOp::Sub => self.sub(x, y),
                    _ => self.mul(x, y),
                })
            }
            _ => Err(GfError::BadElement(format!("{op:?} with operand {y:?}"))),
        }
    }

    /// Checked power.
    pub fn try_pow(&self, x: &FieldElement, e: u64) -> Result<FieldElement, GfError> {
        self.validate(x)?;
        Ok(self.pow(x, e))
    }

    /// Fails with `CtxMismatch` unless `x` is a canonical element of this field.
    pub fn validate(&self, x: &FieldElement) -> Result<(), GfError> {
        if x.order != self.q
            || x.coeffs.len() != self.n
            || x.coeffs.iter().any(|&c| c >= self.p)
        {
            return Err(GfError::CtxMismatch);
        }
        Ok(())
    }

    /// `x^p`.
    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        self.pow(x, self.p as u64)
    }

    /// The unique `p`-th root, `x^{p^{n-1}}`.
    pub fn pth_root(&self, x: &FieldElement) -> FieldElement {
        self.pow(x, self.q / self.p as u64)
    }

    /// Field norm to `F_p`: `x^{1 + p + ... + p^{n-1}} = x^{(q-1)/(p-1)}`.
    /// The result has zero coefficients beyond the constant term.
    pub fn norm_to_prime(&self, x: &FieldElement) -> FieldElement {
        if x.is_zero() {
            return self.zero();
        }
        let m = (self.q - 1) / (self.p as u64 - 1);
        let r = self.pow(x, m);
        debug_assert!(r.as_prime().is_some());
        r
    }

    /// Euler's criterion: `0`, `+1` for nonzero squares, `-1` otherwise.
    pub fn quadratic_character(&self, x: &FieldElement) -> i8 {
        if x.is_zero() {
            return 0;
        }
        let r = self.pow(x, (self.q - 1) / 2);
        if r == self.one() {
            1
        } else {
            debug_assert_eq!(r, self.from_i64(-1));
            -1
        }
    }

    /// Quadratic character of every element, indexed by [`FieldCtx::ordinal`].
    pub fn character_table(&self) -> Vec<i8> {
        let mut table = vec![-1i8; self.q as usize];
        table[0] = 0;
        for x in self.elements().skip(1) {
            let sq = self.square(&x);
            table[self.ordinal(&sq) as usize] = 1;
        }
        table
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: &FieldElement) -> Result<u64, GfError> {
        if x.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let one = self.one();
        let mut ord = self.q - 1;
        for &r in &self.order_primes {
            while ord % r == 0 && self.pow(x, ord / r) == one {
                ord /= r;
            }
        }
        Ok(ord)
    }

    fn find_primitive(&self) -> FieldElement {
        let one = self.one();
        self.elements()
            .skip(1)
            .find(|x| {
                self.order_primes
                    .iter()
                    .all(|&r| self.pow(x, (self.q - 1) / r) != one)
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// Lexicographically smallest generator of `F_q^x`.
    pub fn primitive_element(&self) -> &FieldElement {
        &self.primitive
    }
}

/// Baby-step giant-step discrete logarithms to the primitive element.
pub struct DlogTable {
    generator: FieldElement,
    step: u64,
    baby: HashMap<u64, u64>,
    giant: FieldElement,
    group_order: u64,
}

impl DlogTable {
    pub fn new(ctx: &FieldCtx) -> Self {
        let group_order = ctx.order() - 1;
        let generator = ctx.primitive_element().clone();
        let mut step = (group_order as f64).sqrt().ceil() as u64;
        while step * step < group_order {
            step += 1;
        }
        let step = step.max(1);
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = ctx.one();
        for j in 0..step {
            baby.entry(ctx.ordinal(&cur)).or_insert(j);
            cur = ctx.mul(&cur, &generator);
        }
        let giant = ctx
            .inv(&ctx.pow(&generator, step))
            .expect("generator is nonzero");
        DlogTable {
            generator,
            step,
            baby,
            giant,
            group_order,
        }
    }

    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    /// The exponent `e` in `[0, q - 1)` with `g^e = x`.
    pub fn log(&self, ctx: &FieldCtx, x: &FieldElement) -> Result<u64, GfError> {
        if x.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let mut gamma = x.clone();
        for i in 0..self.step {
            if let Some(&j) = self.baby.get(&ctx.ordinal(&gamma)) {
                return Ok((i * self.step + j) % self.group_order);
            }
            gamma = ctx.mul(&gamma, &self.giant);
        }
        unreachable!("every nonzero element is a power of the generator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldCtx {
        FieldCtx::new(3, 2).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 1), Err(GfError::NotPrime(4)));
        assert_eq!(FieldCtx::new(2, 3), Err(GfError::EvenCharacteristic));
        assert_eq!(FieldCtx::new(3, 0), Err(GfError::ZeroDegree));
        assert_eq!(
            FieldCtx::new(3, 21),
            Err(GfError::DegreeTooLarge { p: 3, n: 21 })
        );
        assert!(FieldCtx::new(3, 20).is_ok());
    }

    #[test]
    fn prime_field_has_no_modulus() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert!(f5.modulus().is_empty());
        assert_eq!(f5.order(), 5);
    }

    #[test]
    fn f9_modulus_is_t2_plus_1() {
        let f = f9();
        assert_eq!(f.modulus(), &[1, 0]);
        assert_eq!(f.modulus_string(), "t^2 + 1");
    }

    /// Trial division against every monic polynomial of degree `<= n/2`.
    fn irreducible_by_trial_division(low: &[u32], p: u64) -> bool {
        let f: Vec<u64> = low.iter().map(|&c| c as u64).chain([1]).collect();
        let n = low.len();
        for d in 1..=n / 2 {
            for idx in 0..p.pow(d as u32) {
                let mut g = Vec::with_capacity(d + 1);
                let mut rest = idx;
                for _ in 0..d {
                    g.push(rest % p);
                    rest /= p;
                }
                g.push(1);
                if prime_poly::rem(&f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn gcd_test_matches_trial_division() {
        for (p, n) in [(3u64, 2usize), (3, 3), (3, 4), (3, 5), (3, 6), (5, 2), (5, 3), (5, 4), (7, 3)] {
            for idx in 0..p.pow(n as u32) {
                let mut low = vec![0u32; n];
                let mut rest = idx;
                for slot in low.iter_mut() {
                    *slot = (rest % p) as u32;
                    rest /= p;
                }
                assert_eq!(
                    is_irreducible_over_prime(&low, p),
                    irreducible_by_trial_division(&low, p),
                    "p={p} low={low:?}"
                );
            }
        }
    }

    #[test]
    fn large_extension_modulus_is_irreducible() {
        let ctx = FieldCtx::new(3, 20).unwrap();
        let g = ctx.primitive_element();
        assert_eq!(ctx.multiplicative_order(g), Ok(ctx.order() - 1));
        assert_eq!(ctx.pow(g, ctx.order()), *g);
    }

    #[test]
    fn moduli_match_brute_force_scan() {
        // Independent scan: a monic polynomial of degree 2 or 3 is irreducible
        // iff it has no root in F_p.
        for (p, n) in [(3u64, 2u32), (5, 2), (7, 2), (3, 3), (5, 3)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let n = n as usize;
            let mut expected = None;
            'outer: for k in 0..p.pow(n as u32) {
                let mut low = vec![0u64; n];
                let mut rest = k;
                for i in (0..n).rev() {
                    low[i] = rest % p;
                    rest /= p;
                }
                for r in 0..p {
                    let mut v = 1u64;
                    for i in (0..n).rev() {
                        v = (v * r + low[i]) % p;
                    }
                    if v == 0 {
                        continue 'outer;
                    }
                }
                expected = Some(low);
                break;
            }
            let got: Vec<u64> = ctx.modulus().iter().map(|&c| c as u64).collect();
            assert_eq!(Some(got), expected, "p={p} n={n}");
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f5.pow(&f5.from_u64(2), 3), f5.from_u64(3));
        let f = f9();
        let t1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.square(&t1), f.from_coeffs(&[0, 2]).unwrap());
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f7.inv(&f7.zero()), Err(GfError::DivisionByZero));
    }

    #[test]
    fn apply_rejects_foreign_elements() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let f7 = FieldCtx::new(7, 1).unwrap();
        let x = f5.from_u64(2);
        let y = f7.from_u64(2);
        assert_eq!(
            f5.apply(ArithOp::Add, &x, &Operand::Element(y)),
            Err(GfError::CtxMismatch)
        );
        assert_eq!(
            f5.apply(ArithOp::Pow, &x, &Operand::Exponent(3)),
            Ok(f5.from_u64(3))
        );
        assert_eq!(
            f5.apply(ArithOp::Inv, &x, &Operand::None),
            Ok(f5.from_u64(3))
        );
        assert_eq!(
            f5.apply(ArithOp::Inv, &f5.zero(), &Operand::None),
            Err(GfError::DivisionByZero)
        );
    }

    #[test]
    fn norm_examples() {
        let f = f9();
        let t1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.norm_to_prime(&t1), f.from_u64(2));
        assert_eq!(f.norm_to_prime(&f.zero()), f.zero());
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f5.norm_to_prime(&f5.from_u64(3)), f5.from_u64(3));
    }

    #[test]
    fn character_examples() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f5.quadratic_character(&f5.from_u64(2)), -1);
        assert_eq!(f5.quadratic_character(&f5.from_u64(4)), 1);
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f7.quadratic_character(&f7.zero()), 0);
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(
            FieldCtx::new(5, 1).unwrap().primitive_element().coeffs(),
            &[2]
        );
        assert_eq!(
            FieldCtx::new(7, 1).unwrap().primitive_element().coeffs(),
            &[3]
        );
        let f = f9();
        let t = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.multiplicative_order(&t), Ok(4));
        assert_eq!(f.primitive_element().coeffs(), &[1, 1]);
    }

    #[test]
    fn character_table_matches_euler() {
        for (p, n) in [(3, 2), (5, 2), (7, 1), (13, 1)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let table = ctx.character_table();
            for x in ctx.elements() {
                assert_eq!(
                    table[ctx.ordinal(&x) as usize],
                    ctx.quadratic_character(&x)
                );
            }
        }
    }

    #[test]
    fn dlog_matches_brute_force() {
        for (p, n) in [(3, 2), (5, 2), (7, 2), (13, 1), (3, 5)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let table = DlogTable::new(&ctx);
            let g = ctx.primitive_element();
            let mut cur = ctx.one();
            for e in 0..ctx.order() - 1 {
                assert_eq!(table.log(&ctx, &cur), Ok(e));
                cur = ctx.mul(&cur, g);
            }
        }
    }

    #[test]
    fn element_ordering_is_lexicographic() {
        let f = f9();
        let all: Vec<_> = f.elements().collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        for (k, x) in all.iter().enumerate() {
            assert_eq!(f.ordinal(x), k as u64);
        }
        assert_eq!(all[1].coeffs(), &[0, 1]);
    }
}
