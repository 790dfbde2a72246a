//! Minimal commutative-ring interface used by the generic matrix and
//! pfaffian code.
//!
//! Elements carry their own context (modulus, residue field, precision), so
//! `zero` and `one` are derived from an existing element rather than from a
//! type-level constant.

pub trait Ring: Clone {
    fn r_add(&self, rhs: &Self) -> Self;
    fn r_sub(&self, rhs: &Self) -> Self;
    fn r_mul(&self, rhs: &Self) -> Self;
    fn r_neg(&self) -> Self;
    /// Additive identity in the same context as `self`.
    fn r_zero(&self) -> Self;
    /// Multiplicative identity in the same context as `self`.
    fn r_one(&self) -> Self;
}
