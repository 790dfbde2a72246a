//! Exact arithmetic in prime fields F_q, their extensions F_{q^f}, and the
//! cyclotomic integers Z[zeta_p] carrying additive character values.
//!
//! Extensions are quotient rings F_q[w]/(m(w)) for a stored irreducible
//! modulus m. The modulus is chosen deterministically: candidates of degree
//! f are ordered lexicographically by their constant-first coefficient
//! tuple (c_0, ..., c_{f-1}) and the first irreducible wins. An alternative
//! index selects later irreducibles in the same order, which lets callers
//! witness that results do not depend on the representation.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Trial-division primality check; moduli here stay tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inv(a: u64, q: u64) -> Option<u64> {
    // extended Euclid on (a, q)
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (q as i64, (a % q) as i64);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(q as i64) as u64)
}

// ---------------------------------------------------------------------------
// FqElem
// ---------------------------------------------------------------------------

/// Element of the prime field F_q, stored as its canonical representative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    q: u64,
    value: u64,
}

impl FqElem {
    pub fn new(q: u64, value: i64) -> Self {
        assert!(is_prime(q), "modulus {q} is not prime");
        FqElem {
            q,
            value: value.rem_euclid(q as i64) as u64,
        }
    }

    pub fn zero(q: u64) -> Self {
        Self::new(q, 0)
    }

    pub fn one(q: u64) -> Self {
        Self::new(q, 1)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one(self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        mod_inv(self.value, self.q)
            .map(|v| FqElem { q: self.q, value: v })
            .ok_or(Error::DivisionByZero)
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        check_q(self.q, rhs.q)?;
        Ok(*self * rhs.inv()?)
    }

    /// Legendre symbol (value | q): 1, -1, or 0.
    pub fn legendre(&self) -> i32 {
        if self.value == 0 {
            return 0;
        }
        let e = self.pow((self.q - 1) / 2);
        if e.value == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self) -> bool {
        self.legendre() >= 0
    }

    /// Some square root, if one exists; found by scan (q is small here).
    pub fn sqrt(&self) -> Option<Self> {
        (0..self.q)
            .map(|v| FqElem { q: self.q, value: v })
            .find(|x| *x * *x == *self)
    }
}

fn check_q(a: u64, b: u64) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ModulusMismatch(a, b))
    }
}

impl std::ops::Add for FqElem {
    type Output = FqElem;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.q, rhs.q, "modulus mismatch");
        FqElem {
            q: self.q,
            value: (self.value + rhs.value) % self.q,
        }
    }
}

impl std::ops::Sub for FqElem {
    type Output = FqElem;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.q, rhs.q, "modulus mismatch");
        FqElem {
            q: self.q,
            value: (self.q + self.value - rhs.value) % self.q,
        }
    }
}

impl std::ops::Mul for FqElem {
    type Output = FqElem;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.q, rhs.q, "modulus mismatch");
        FqElem {
            q: self.q,
            value: (self.value * rhs.value) % self.q,
        }
    }
}

impl std::ops::Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> Self {
        FqElem {
            q: self.q,
            value: (self.q - self.value) % self.q,
        }
    }
}

impl Ring for FqElem {
    fn r_add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn r_sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn r_mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn r_neg(&self) -> Self {
        -*self
    }
    fn r_zero(&self) -> Self {
        FqElem::zero(self.q)
    }
    fn r_one(&self) -> Self {
        FqElem::one(self.q)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FqElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic; the CLI surface for prime-field operations.
pub fn fq_arith(a: FqElem, b: FqElem, op: FqOp) -> Result<FqElem> {
    check_q(a.q, b.q)?;
    Ok(match op {
        FqOp::Add => a + b,
        FqOp::Sub => a - b,
        FqOp::Mul => a * b,
        FqOp::Div => a.try_div(&b)?,
    })
}

// ---------------------------------------------------------------------------
// polynomial helpers over F_q on raw coefficient vectors (constant-first)
// ---------------------------------------------------------------------------

fn vtrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn vmul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    vtrim(&mut out);
    out
}

/// Remainder of a by b (b monic not required; leading coeff inverted).
fn vrem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    vtrim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], q).expect("leading coefficient not invertible");
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % q;
        for k in 0..=db {
            let idx = dr - db + k;
            r[idx] = (r[idx] + q * c - (c * b[k]) % q) % q;
        }
        vtrim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn vdivides(b: &[u64], a: &[u64], q: u64) -> bool {
    vrem(a, b, q).is_empty()
}

fn irreducible_raw(cand: &[u64], q: u64) -> bool {
    let f = cand.len() - 1;
    if f == 0 {
        return false;
    }
    if f == 1 {
        return true;
    }
    // a composite of degree f has a monic factor of degree <= f/2
    for d in 1..=(f / 2) {
        let count = q.pow(d as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push(c % q);
                c /= q;
            }
            div.push(1);
            if vdivides(&div, cand, q) {
                return false;
            }
        }
    }
    true
}

/// The `index`-th monic irreducible of degree f over F_q, in lexicographic
/// order of the constant-first coefficient tuple.
pub fn irreducible_modulus(q: u64, f: u32, index: u32) -> Vec<u64> {
    assert!(is_prime(q));
    assert!(f >= 1);
    if f == 1 {
        // degree-1 moduli: w - 0, w - 1, ... (all "irreducible")
        return vec![(index as u64) % q, 1];
    }
    let total = q.pow(f);
    let mut seen = 0;
    for code in 0..total {
        // digits most-significant-first give the constant-first tuple
        let mut coeffs = vec![0u64; f as usize];
        let mut c = code;
        for slot in (0..f as usize).rev() {
            coeffs[slot] = c % q;
            c /= q;
        }
        coeffs.push(1); // monic
        if irreducible_raw(&coeffs, q) {
            if seen == index {
                return coeffs;
            }
            seen += 1;
        }
    }
    panic!("fewer than {} monic irreducibles of degree {f} over F_{q}", index + 1);
}

// ---------------------------------------------------------------------------
// ExtField / FqExtElem
// ---------------------------------------------------------------------------

/// Descriptor of F_{q^f} = F_q[w]/(m(w)) with its stored modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtField {
    q: u64,
    f: u32,
    index: u32,
    modulus: Arc<Vec<u64>>,
}

impl ExtField {
    pub fn new(q: u64, f: u32) -> Self {
        Self::with_index(q, f, 0)
    }

    pub fn with_index(q: u64, f: u32, index: u32) -> Self {
        // degree 1 leaves nothing to choose; keep the descriptor canonical
        let index = if f == 1 { 0 } else { index };
        let modulus = Arc::new(irreducible_modulus(q, f, index));
        ExtField { q, f, index, modulus }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn modulus_index(&self) -> u32 {
        self.index
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn size(&self) -> u64 {
        self.q.pow(self.f)
    }

    pub fn zero(&self) -> FqExtElem {
        FqExtElem {
            field: self.clone(),
            coeffs: vec![0; self.f as usize],
        }
    }

    pub fn one(&self) -> FqExtElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FqExtElem {
        let mut coeffs = vec![0; self.f as usize];
        coeffs[0] = v.rem_euclid(self.q as i64) as u64;
        FqExtElem {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn from_prime(&self, a: FqElem) -> FqExtElem {
        assert_eq!(a.q(), self.q);
        self.from_int(a.value() as i64)
    }

    /// The class of the generator w.
    pub fn gen(&self) -> FqExtElem {
        if self.f == 1 {
            // w == -m(0) in a degree-1 quotient
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut coeffs = vec![0; self.f as usize];
        coeffs[1] = 1;
        FqExtElem {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn elem(&self, coeffs: &[i64]) -> FqExtElem {
        assert!(coeffs.len() <= self.f as usize);
        let mut c = vec![0u64; self.f as usize];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v.rem_euclid(self.q as i64) as u64;
        }
        FqExtElem {
            field: self.clone(),
            coeffs: c,
        }
    }

    /// All elements, ordered by constant-first coefficient tuple.
    pub fn elements(&self) -> Vec<FqExtElem> {
        let n = self.size();
        let mut out = Vec::with_capacity(n as usize);
        for code in 0..n {
            let mut coeffs = vec![0u64; self.f as usize];
            let mut c = code;
            for slot in (0..self.f as usize).rev() {
                coeffs[slot] = c % self.q;
                c /= self.q;
            }
            out.push(FqExtElem {
                field: self.clone(),
                coeffs,
            });
        }
        out
    }
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}(idx{})", self.q, self.f, self.index)
    }
}

/// Element of F_{q^f}, as a coefficient vector (lowest-degree-first) in the
/// power basis of the stored modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqExtElem {
    field: ExtField,
    coeffs: Vec<u64>,
}

impl FqExtElem {
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn assert_compat(&self, rhs: &Self) {
        assert_eq!(self.field, rhs.field, "extension field mismatch");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_compat(rhs);
        let q = self.field.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a + b) % q)
            .collect();
        FqExtElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.assert_compat(rhs);
        let q = self.field.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a + q - b) % q)
            .collect();
        FqExtElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let q = self.field.q;
        FqExtElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| (q - c) % q).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_compat(rhs);
        let q = self.field.q;
        let prod = vmul(&self.coeffs, &rhs.coeffs, q);
        let mut red = vrem(&prod, self.field.modulus(), q);
        red.resize(self.field.f as usize, 0);
        FqExtElem {
            field: self.field.clone(),
            coeffs: red,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // F_{q^f}^* has order q^f - 1
        Ok(self.pow(self.field.size() - 2))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn frobenius(&self) -> Self {
        self.pow(self.field.q)
    }

    /// Absolute trace down to the prime field.
    pub fn trace(&self) -> FqElem {
        let mut acc = self.clone();
        let mut frob = self.clone();
        for _ in 1..self.field.f {
            frob = frob.frobenius();
            acc = acc.add(&frob);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace left the prime field");
        FqElem::new(self.field.q, acc.coeffs[0] as i64)
    }

    /// The prime-field value, if the element lies in F_q.
    pub fn as_prime(&self) -> Option<FqElem> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(FqElem::new(self.field.q, self.coeffs[0] as i64))
        } else {
            None
        }
    }
}

impl Ring for FqExtElem {
    fn r_add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn r_sub(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn r_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn r_zero(&self) -> Self {
        self.field.zero()
    }
    fn r_one(&self) -> Self {
        self.field.one()
    }
}

impl fmt::Debug for FqExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FqExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.f == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}w")?,
                _ => write!(f, "{c}w^{i}")?,
            }
        }
        write!(f, ")")
    }
}

impl Serialize for FqExtElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

// ---------------------------------------------------------------------------
// CycInt
// ---------------------------------------------------------------------------

/// Element of Z[zeta_p], stored on the basis 1, zeta, ..., zeta^{p-2} of
/// Z[x]/(Phi_p(x)). Representation on this basis is unique, so equality is
/// literal and a value is rational iff all non-constant coordinates vanish.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<i64>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        assert!(is_prime(p));
        CycInt {
            p,
            coeffs: vec![0; (p - 1) as usize],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u64, v: i64) -> Self {
        let mut c = Self::zero(p);
        c.coeffs[0] = v;
        c
    }

    /// zeta_p^k, for any integer exponent.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as usize;
        let mut c = Self::zero(p);
        if k == (p - 1) as usize {
            // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
            for v in c.coeffs.iter_mut() {
                *v = -1;
            }
        } else {
            c.coeffs[k] = 1;
        }
        c
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The integer value, if the element lies in Z.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "cyclotomic order mismatch");
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "cyclotomic order mismatch");
        let p = self.p as usize;
        // convolve with exponents mod p, then eliminate zeta^{p-1}
        let mut full = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                full[(i + j) % p] += a * b;
            }
        }
        let top = full[p - 1];
        let coeffs = full[..p - 1].iter().map(|&c| c - top).collect();
        CycInt { p: self.p, coeffs }
    }
}

impl Ring for CycInt {
    fn r_add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn r_sub(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn r_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn r_zero(&self) -> Self {
        CycInt::zero(self.p)
    }
    fn r_one(&self) -> Self {
        CycInt::one(self.p)
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => {
                    if a == 1 {
                        write!(f, "z")?
                    } else {
                        write!(f, "{a}z")?
                    }
                }
                _ => {
                    if a == 1 {
                        write!(f, "z^{i}")?
                    } else {
                        write!(f, "{a}z^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// The additive character psi(a) = zeta_p^{Tr(a)} of F_{q^f}, with p = q.
pub fn char_psi(a: &FqExtElem) -> CycInt {
    let t = a.trace();
    CycInt::zeta_pow(a.q(), t.value() as i64)
}

/// psi on the prime field itself.
pub fn char_psi_prime(a: FqElem) -> CycInt {
    CycInt::zeta_pow(a.q(), a.value() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fq_arith_examples() {
        // (2,2,+) over F_3 -> 1
        let a = FqElem::new(3, 2);
        assert_eq!(fq_arith(a, a, FqOp::Add).unwrap(), FqElem::new(3, 1));
        // (a,1,*) -> a
        let one = FqElem::one(3);
        assert_eq!(fq_arith(a, one, FqOp::Mul).unwrap(), a);
        // (2,2,/) over F_5 -> 1
        let b = FqElem::new(5, 2);
        assert_eq!(fq_arith(b, b, FqOp::Div).unwrap(), FqElem::one(5));
    }

    #[test]
    fn fq_arith_errors() {
        let a = FqElem::new(3, 2);
        let z = FqElem::zero(3);
        assert_eq!(fq_arith(a, z, FqOp::Div), Err(Error::DivisionByZero));
        let b = FqElem::new(5, 2);
        assert_eq!(fq_arith(a, b, FqOp::Add), Err(Error::ModulusMismatch(3, 5)));
    }

    #[test]
    fn deterministic_moduli() {
        assert_eq!(irreducible_modulus(3, 2, 0), vec![1, 0, 1]); // w^2 + 1
        assert_eq!(irreducible_modulus(3, 2, 1), vec![2, 1, 1]); // w^2 + w + 2
        // w^2+1 splits over F_5 (2^2 = -1); lex-first irreducible is w^2+w+1
        assert_eq!(irreducible_modulus(5, 2, 0), vec![1, 1, 1]);
    }

    #[test]
    fn extension_arithmetic() {
        let k = ExtField::new(3, 2); // F_9 = F_3[w]/(w^2+1)
        let w = k.gen();
        assert_eq!(w.mul(&w), k.from_int(-1));
        let a = k.elem(&[1, 2]); // 1 + 2w
        let ai = a.inv().unwrap();
        assert_eq!(a.mul(&ai), k.one());
        // Frobenius fixes F_3
        assert_eq!(k.from_int(2).frobenius(), k.from_int(2));
    }

    #[test]
    fn trace_surjective_onto_prime_field() {
        let k = ExtField::new(3, 2);
        let mut seen = std::collections::HashSet::new();
        for e in k.elements() {
            seen.insert(e.trace().value());
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn char_psi_at_zero_is_one() {
        let k = ExtField::new(5, 1);
        assert_eq!(char_psi(&k.zero()), CycInt::one(5));
    }

    #[test]
    fn char_psi_zeta3_example() {
        // q = 3, a = 1 -> the class of x in Z[x]/(x^2+x+1)
        let k = ExtField::new(3, 1);
        let v = char_psi(&k.from_int(1));
        assert_eq!(v.coeffs(), &[0, 1]);
    }

    #[test]
    fn character_sum_vanishes() {
        for (q, f) in [(3u64, 1u32), (3, 2), (5, 1), (7, 1)] {
            let k = ExtField::new(q, f);
            let mut acc = CycInt::zero(q);
            for e in k.elements() {
                acc = acc.add(&char_psi(&e));
            }
            assert!(acc.is_zero(), "sum over F_{q}^{f} not zero: {acc}");
        }
    }

    #[test]
    fn cyc_mul_reduces() {
        // zeta^2 * zeta^2 = zeta^4 = zeta (p = 3)
        let z2 = CycInt::zeta_pow(3, 2);
        assert_eq!(z2.mul(&z2), CycInt::zeta_pow(3, 1));
        // zeta * zeta^2 = 1
        assert_eq!(CycInt::zeta_pow(3, 1).mul(&z2), CycInt::one(3));
    }
}
