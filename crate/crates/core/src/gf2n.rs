//! Arithmetic in the binary fields GF(2^n), 2 <= n <= 16.
//!
//! An element is an n-bit integer: bit i is the coefficient of x^i in the
//! polynomial representative. Addition is xor. Multiplication is a carry-less
//! product reduced modulo an irreducible degree-n polynomial. A [`FieldCtx`]
//! owns the modulus plus discrete-log tables and is passed explicitly to
//! every operation, so fields of different sizes (or the same size with
//! different moduli) can coexist in one process.

use thiserror::Error;

/// Smallest supported field exponent.
pub const MIN_N: u32 = 2;
/// Largest supported field exponent. Keeps q - 1 <= 65535, so point values
/// fit in u16 and exhaustive scans over the field stay cheap.
pub const MAX_N: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("field exponent n={0} outside the supported range 2..=16")]
    ExponentOutOfRange(u32),
    #[error("modulus {0:#x} does not have degree {1}")]
    ModulusWrongDegree(u32, u32),
    #[error("modulus {0:#x} is reducible")]
    ModulusReducible(u32),
    #[error("0 has no multiplicative inverse")]
    InverseOfZero,
    #[error("0 cannot be raised to a negative power")]
    NegativePowerOfZero,
}

/// An element of GF(2^n). Only meaningful together with the [`FieldCtx`] it
/// was produced by; mixing contexts is a caller bug.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub(crate) u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The n-bit integer whose bit i is the coefficient of x^i.
    pub fn value(self) -> u32 {
        u32::from(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldElement({:#x})", self.0)
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

/// Carry-less (xor) product of two polynomials over F_2.
fn clmul(a: u32, b: u32) -> u64 {
    let a = u64::from(a);
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Degree of a nonzero polynomial.
fn poly_degree(p: u64) -> u32 {
    debug_assert_ne!(p, 0);
    63 - p.leading_zeros()
}

/// Remainder of polynomial division over F_2 (m nonzero).
fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree 1..=n/2. Quadratic in q but
/// only ever run once per context on inputs with n <= 16.
fn is_irreducible(m: u32, n: u32) -> bool {
    if m & 1 == 0 {
        return false; // divisible by x
    }
    for d in 1..=(n / 2) {
        for div in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(u64::from(m), u64::from(div)) == 0 {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest irreducible polynomial of degree n.
pub fn default_modulus(n: u32) -> u32 {
    debug_assert!((MIN_N..=MAX_N).contains(&n));
    let mut m = (1u32 << n) + 1;
    while m < 1u32 << (n + 1) {
        if is_irreducible(m, n) {
            return m;
        }
        m += 2; // constant term must be 1, else x divides
    }
    unreachable!("an irreducible polynomial of degree {n} exists")
}

fn distinct_prime_factors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// A concrete GF(2^n): modulus, a fixed generator of the multiplicative
/// group, and log/exp tables for fast bulk arithmetic. The tables are an
/// internal acceleration; the public `mul`/`inv`/`pow` go through the
/// definitional carry-less route, and tests pin the two against each other.
pub struct FieldCtx {
    n: u32,
    q: u32,
    modulus: u32,
    generator: FieldElement,
    exp: Vec<u16>, // exp[i] = generator^i for i in 0..2(q-1), duplicated period
    log: Vec<u16>, // log[v] for v in 1..q
}

impl FieldCtx {
    /// Field with the lexicographically smallest irreducible modulus.
    pub fn new(n: u32) -> Result<FieldCtx, FieldError> {
        if !(MIN_N..=MAX_N).contains(&n) {
            return Err(FieldError::ExponentOutOfRange(n));
        }
        FieldCtx::with_modulus(n, default_modulus(n))
    }

    pub fn with_modulus(n: u32, modulus: u32) -> Result<FieldCtx, FieldError> {
        if !(MIN_N..=MAX_N).contains(&n) {
            return Err(FieldError::ExponentOutOfRange(n));
        }
        if modulus >> n != 1 {
            return Err(FieldError::ModulusWrongDegree(modulus, n));
        }
        if !is_irreducible(modulus, n) {
            return Err(FieldError::ModulusReducible(modulus));
        }
        let mut ctx = FieldCtx {
            n,
            q: 1u32 << n,
            modulus,
            generator: FieldElement::ONE,
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.generator = ctx.find_generator();
        ctx.build_tables();
        Ok(ctx)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Field size q = 2^n.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The fixed generator: the smallest element (by integer value) of
    /// multiplicative order q - 1.
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Wrap a raw value; panics if it is out of range for this field.
    pub fn elem(&self, v: u32) -> FieldElement {
        assert!(v < self.q, "value {v:#x} out of range for GF(2^{})", self.n);
        FieldElement(v as u16)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|v| FieldElement(v as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(|v| FieldElement(v as u16))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    /// Carry-less multiply, then reduce by the modulus.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_raw(a.value(), b.value()) as u16)
    }

    /// Multiplicative inverse via a^(q-2). Tests cross-check this against an
    /// extended-Euclid oracle.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::InverseOfZero);
        }
        Ok(FieldElement(
            self.pow_raw(a.value(), u64::from(self.q - 2)) as u16,
        ))
    }

    /// Square-and-multiply; negative exponents invert first.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            return Ok(FieldElement(self.pow_raw(a.value(), e as u64) as u16));
        }
        if a.is_zero() {
            return Err(FieldError::NegativePowerOfZero);
        }
        let inv = self.inv(a)?;
        Ok(FieldElement(
            self.pow_raw(inv.value(), e.unsigned_abs()) as u16
        ))
    }

    /// The field automorphism x -> x^2.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        poly_rem(clmul(a, b), u64::from(self.modulus)) as u32
    }

    fn pow_raw(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, a);
            }
            a = self.mul_raw(a, a);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> FieldElement {
        let ord = self.q - 1;
        let primes = distinct_prime_factors(ord);
        for cand in 2..self.q {
            if primes
                .iter()
                .all(|&p| self.pow_raw(cand, u64::from(ord / p)) != 1)
            {
                return FieldElement(cand as u16);
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self) {
        let ord = (self.q - 1) as usize;
        let mut exp = vec![0u16; 2 * ord];
        let mut log = vec![0u16; self.q as usize];
        let mut acc = 1u32;
        for i in 0..ord {
            exp[i] = acc as u16;
            exp[i + ord] = acc as u16;
            log[acc as usize] = i as u16;
            acc = self.mul_raw(acc, self.generator.value());
        }
        debug_assert_eq!(acc, 1, "generator order must be q-1");
        self.exp = exp;
        self.log = log;
    }

    // Table-driven fast paths for bulk loops. Indices into `exp` may range
    // over 0..2(q-1); the duplicated period removes the reduction mod q-1.

    #[inline]
    pub(crate) fn log_of(&self, v: u32) -> u32 {
        debug_assert_ne!(v, 0);
        u32::from(self.log[v as usize])
    }

    #[inline]
    pub(crate) fn exp_at(&self, i: u32) -> u32 {
        u32::from(self.exp[i as usize])
    }

    #[inline]
    pub(crate) fn mul_tab(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp_at(self.log_of(a) + self.log_of(b))
        }
    }

    /// Table inverse; only the tests call it, to pin the identity
    /// g^(q-1-i) = (g^i)^(-1) against the Fermat-power route.
    #[cfg(test)]
    pub(crate) fn inv_tab(&self, a: u32) -> u32 {
        self.exp_at(self.q - 1 - self.log_of(a))
    }
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx(n={}, modulus={:#x})", self.n, self.modulus)
    }
}
