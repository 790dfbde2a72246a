//! Truncated elements of tamely ramified extensions E of F_q((t)).
//!
//! An element is a coefficient window over the residue extension F_{q^f},
//! indexed by powers of the internal uniformizer s with s^e = t. The window
//! runs from the first stored exponent up to an exclusive precision bound;
//! `None` precision means the value is known exactly (all further
//! coefficients are true zeros). Valuations are reported normalized, in
//! (1/e)Z, so that ord t = 1.
//!
//! Zero detection is three-valued: a value is exactly zero, distinguishably
//! nonzero, or indistinguishable from zero at the stored precision. The
//! third state propagates as a precision error, never as a silent zero.

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fields::{ExtField, FqElem, FqExtElem};
use crate::ring::Ring;

/// Rational numbers for slopes, valuations and precisions.
pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Absolute precision bound, in ord-units (denominator divides e).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision(pub Rat);

impl Precision {
    pub fn new(k: Rat) -> Result<Self> {
        if k <= Rat::zero() {
            return Err(Error::InvalidArgument(format!("precision {k} must be positive")));
        }
        Ok(Precision(k))
    }
}

/// Descriptor of the hosting field: residue extension F_{q^f} and
/// ramification index e (with s^e = t). Tame: gcd(e, q) = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalField {
    residue: ExtField,
    e: u32,
}

impl LocalField {
    /// The base field F_q((t)).
    pub fn base(q: u64) -> Self {
        Self::new(q, 1, 1).expect("base field is always tame")
    }

    pub fn new(q: u64, f: u32, e: u32) -> Result<Self> {
        Self::with_modulus_index(q, f, e, 0)
    }

    pub fn with_modulus_index(q: u64, f: u32, e: u32, index: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArgument("ramification index must be >= 1".into()));
        }
        if (e as u64) % q == 0 {
            return Err(Error::WildRamification { e, p: q });
        }
        Ok(LocalField {
            residue: ExtField::with_index(q, f, index),
            e,
        })
    }

    pub fn q(&self) -> u64 {
        self.residue.q()
    }

    pub fn f(&self) -> u32 {
        self.residue.degree()
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn residue_field(&self) -> &ExtField {
        &self.residue
    }

    pub fn zero(&self) -> LaurentNumber {
        LaurentNumber {
            fld: self.clone(),
            lo: 0,
            coeffs: vec![],
            prec: None,
        }
    }

    pub fn one(&self) -> LaurentNumber {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> LaurentNumber {
        self.from_residue(self.residue.from_int(v))
    }

    pub fn from_prime(&self, a: FqElem) -> LaurentNumber {
        self.from_residue(self.residue.from_prime(a))
    }

    /// Exact constant from the residue field.
    pub fn from_residue(&self, c: FqExtElem) -> LaurentNumber {
        assert_eq!(c.field(), &self.residue);
        LaurentNumber {
            fld: self.clone(),
            lo: 0,
            coeffs: vec![c],
            prec: None,
        }
        .canonical()
    }

    /// t^k, exactly.
    pub fn t_pow(&self, k: i64) -> LaurentNumber {
        self.s_pow(k * self.e as i64)
    }

    /// s^k where s^e = t, exactly.
    pub fn s_pow(&self, k: i64) -> LaurentNumber {
        LaurentNumber {
            fld: self.clone(),
            lo: k,
            coeffs: vec![self.residue.one()],
            prec: None,
        }
    }

    /// Build from t-coefficients: sum of coeffs[i] * t^(start+i), with the
    /// value known modulo t^prec_t (`None` for exact).
    pub fn from_t_coeffs(&self, start: i64, coeffs: &[i64], prec_t: Option<i64>) -> LaurentNumber {
        let e = self.e as i64;
        let mut cs = Vec::new();
        for (i, &c) in coeffs.iter().enumerate() {
            let _ = i;
            cs.push(self.residue.from_int(c));
            // pad ramified gaps with zeros
            for _ in 1..e {
                cs.push(self.residue.zero());
            }
        }
        if !coeffs.is_empty() {
            cs.truncate((coeffs.len() as i64 * e - (e - 1)) as usize);
        }
        LaurentNumber {
            fld: self.clone(),
            lo: start * e,
            coeffs: cs,
            prec: prec_t.map(|k| k * e),
        }
        .canonical()
    }

    /// An unknown-tail zero: some value in s^k * O + (unknown), i.e. all
    /// stored coefficients vanish below the bound.
    pub fn zero_at_prec_s(&self, k: i64) -> LaurentNumber {
        LaurentNumber {
            fld: self.clone(),
            lo: k,
            coeffs: vec![],
            prec: Some(k),
        }
    }
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}((t^(1/{})))", self.q(), self.f(), self.e)
    }
}

/// Result of a valuation query on a truncated element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdValue {
    /// First nonzero coefficient sits at this normalized valuation.
    Finite(Rat),
    /// All stored coefficients vanish but the value is not known to be zero;
    /// the true ord is >= this bound ("indistinguishable from zero").
    AtLeast(Rat),
    /// The exact zero value.
    Infinite,
}

impl OrdValue {
    pub fn finite(self) -> Option<Rat> {
        match self {
            OrdValue::Finite(r) => Some(r),
            _ => None,
        }
    }
}

/// Truncated Laurent number. Canonical form: if any coefficients are
/// stored, the first one is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentNumber {
    fld: LocalField,
    /// s-exponent of the first stored coefficient.
    lo: i64,
    coeffs: Vec<FqExtElem>,
    /// Exclusive s-exponent bound; the value is known modulo s^prec.
    /// `None` means exact.
    prec: Option<i64>,
}

impl LaurentNumber {
    pub fn field(&self) -> &LocalField {
        &self.fld
    }

    fn canonical(mut self) -> Self {
        if let Some(p) = self.prec {
            let keep = (p - self.lo).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.lo += 1;
            } else {
                break;
            }
        }
        // trailing zeros are implied by the window (or exactness)
        while self.coeffs.last().map(|c| c.is_zero()) == Some(true) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            match self.prec {
                None => self.lo = 0,
                Some(p) => self.lo = p,
            }
        }
        self
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// Distinguishable from zero at the stored precision.
    pub fn is_nonzero(&self) -> bool {
        !self.coeffs.is_empty()
    }

    /// Normalized valuation in (1/e)Z, three-valued.
    pub fn ord(&self) -> OrdValue {
        let e = self.fld.e as i64;
        if let Some(c0) = self.coeffs.first() {
            debug_assert!(!c0.is_zero());
            OrdValue::Finite(rat(self.lo, e))
        } else {
            match self.prec {
                None => OrdValue::Infinite,
                Some(p) => OrdValue::AtLeast(rat(p, e)),
            }
        }
    }

    /// Angular component: leading coefficient relative to the uniformizer
    /// (t for e = 1, s otherwise); ac(0) = 0.
    pub fn ac(&self) -> Result<FqExtElem> {
        if let Some(c0) = self.coeffs.first() {
            Ok(c0.clone())
        } else if self.prec.is_none() {
            Ok(self.fld.residue.zero())
        } else {
            Err(Error::PrecisionExhausted(
                "ac of a value indistinguishable from zero".into(),
            ))
        }
    }

    /// res_i(x): the angular component if ord(x) = i, else 0.
    pub fn res_at(&self, i: Rat) -> Result<FqExtElem> {
        let e = self.fld.e as i64;
        let target = i * Rat::from_integer(e);
        if !target.is_integer() {
            // ord(x) can never equal i
            return Ok(self.fld.residue.zero());
        }
        let j = target.to_integer();
        match self.ord() {
            OrdValue::Infinite => Ok(self.fld.residue.zero()),
            OrdValue::Finite(v) => {
                if v == i {
                    self.ac()
                } else {
                    Ok(self.fld.residue.zero())
                }
            }
            OrdValue::AtLeast(b) => {
                if i < b {
                    // ord >= b > i, so res_i = 0 regardless of the tail
                    Ok(self.fld.residue.zero())
                } else {
                    Err(Error::IndexOutsideWindow(format!(
                        "res at ord {i} with window bound {b} (s-exp {j})"
                    )))
                }
            }
        }
    }

    /// Coefficient of s^k, when the window determines it.
    pub fn coeff_s(&self, k: i64) -> Result<FqExtElem> {
        if let Some(p) = self.prec {
            if k >= p {
                return Err(Error::IndexOutsideWindow(format!(
                    "coefficient s^{k} beyond precision s^{p}"
                )));
            }
        }
        if k < self.lo || k >= self.lo + self.coeffs.len() as i64 {
            Ok(self.fld.residue.zero())
        } else {
            Ok(self.coeffs[(k - self.lo) as usize].clone())
        }
    }

    /// Coefficient of t^0; the input of the standard additive character.
    pub fn t0_coeff(&self) -> Result<FqExtElem> {
        self.coeff_s(0)
    }

    /// Effective lower s-exponent for window bookkeeping: the first stored
    /// exponent, or the precision bound when nothing is stored.
    fn eff_lo(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            Some(self.lo)
        }
    }

    /// Precision in ord-units, if finite.
    pub fn precision(&self) -> Option<Rat> {
        self.prec.map(|p| rat(p, self.fld.e as i64))
    }

    /// Re-express in a larger field: the ramification must be a multiple of
    /// the current one and the residue degree must match or start at 1.
    pub fn promote(&self, to: &LocalField) -> Result<LaurentNumber> {
        if &self.fld == to {
            return Ok(self.clone());
        }
        if self.fld.q() != to.q() {
            return Err(Error::ModulusMismatch(self.fld.q(), to.q()));
        }
        if to.e % self.fld.e != 0 {
            return Err(Error::FieldMismatch(format!(
                "ramification {} does not divide {}",
                self.fld.e, to.e
            )));
        }
        let fac = (to.e / self.fld.e) as i64;
        let coeffs: Result<Vec<FqExtElem>> = self
            .coeffs
            .iter()
            .map(|c| {
                if self.fld.f() == to.f() && self.fld.residue == to.residue {
                    Ok(c.clone())
                } else if self.fld.f() == 1 {
                    Ok(to.residue.from_int(c.coeffs()[0] as i64))
                } else {
                    Err(Error::FieldMismatch(format!(
                        "cannot embed residue degree {} into {}",
                        self.fld.f(),
                        to.f()
                    )))
                }
            })
            .collect();
        let coeffs = coeffs?;
        let mut spread = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                for _ in 1..fac {
                    spread.push(to.residue.zero());
                }
            }
            spread.push(c.clone());
        }
        Ok(LaurentNumber {
            fld: to.clone(),
            lo: self.lo * fac,
            coeffs: spread,
            prec: self.prec.map(|p| p * fac),
        }
        .canonical())
    }

    fn join_field(&self, rhs: &Self) -> Result<LocalField> {
        if self.fld == rhs.fld {
            return Ok(self.fld.clone());
        }
        if self.fld.q() != rhs.fld.q() {
            return Err(Error::ModulusMismatch(self.fld.q(), rhs.fld.q()));
        }
        let e = num_integer::lcm(self.fld.e, rhs.fld.e);
        let f = if self.fld.f() == rhs.fld.f() {
            if self.fld.residue != rhs.fld.residue {
                return Err(Error::FieldMismatch("different extension moduli".into()));
            }
            self.fld.f()
        } else if self.fld.f() == 1 {
            rhs.fld.f()
        } else if rhs.fld.f() == 1 {
            self.fld.f()
        } else {
            return Err(Error::FieldMismatch(format!(
                "residue degrees {} and {}",
                self.fld.f(),
                rhs.fld.f()
            )));
        };
        let idx = if self.fld.f() >= rhs.fld.f() {
            self.fld.residue.modulus_index()
        } else {
            rhs.fld.residue.modulus_index()
        };
        LocalField::with_modulus_index(self.fld.q(), f, e, idx)
    }

    pub fn add(&self, rhs: &Self) -> Result<LaurentNumber> {
        let fld = self.join_field(rhs)?;
        let a = self.promote(&fld)?;
        let b = rhs.promote(&fld)?;
        let prec = match (a.prec, b.prec) {
            (None, None) => None,
            (Some(p), None) | (None, Some(p)) => Some(p),
            (Some(p), Some(r)) => Some(p.min(r)),
        };
        let lo = match (a.coeffs.is_empty(), b.coeffs.is_empty()) {
            (true, true) => {
                return Ok(LaurentNumber {
                    fld,
                    lo: 0,
                    coeffs: vec![],
                    prec,
                }
                .canonical())
            }
            (true, false) => b.lo,
            (false, true) => a.lo,
            (false, false) => a.lo.min(b.lo),
        };
        let hi = match prec {
            Some(p) => p,
            None => (a.lo + a.coeffs.len() as i64).max(b.lo + b.coeffs.len() as i64),
        };
        let mut coeffs = Vec::new();
        for k in lo..hi {
            let x = a.coeff_at_unchecked(k);
            let y = b.coeff_at_unchecked(k);
            coeffs.push(x.add(&y));
        }
        Ok(LaurentNumber { fld, lo, coeffs, prec }.canonical())
    }

    fn coeff_at_unchecked(&self, k: i64) -> FqExtElem {
        if k < self.lo || k >= self.lo + self.coeffs.len() as i64 {
            self.fld.residue.zero()
        } else {
            self.coeffs[(k - self.lo) as usize].clone()
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<LaurentNumber> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> LaurentNumber {
        LaurentNumber {
            fld: self.fld.clone(),
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<LaurentNumber> {
        let fld = self.join_field(rhs)?;
        let a = self.promote(&fld)?;
        let b = rhs.promote(&fld)?;
        if a.is_exact_zero() || b.is_exact_zero() {
            return Ok(fld.zero());
        }
        // product precision: each factor's uncertainty shifted by the other's
        // effective valuation
        let pa = a.prec.and_then(|p| b.eff_lo().map(|l| p + l));
        let pb = b.prec.and_then(|p| a.eff_lo().map(|l| p + l));
        let prec = match (a.prec, b.prec) {
            (None, None) => None,
            _ => {
                let cands: Vec<i64> = [pa, pb].into_iter().flatten().collect();
                if cands.is_empty() {
                    // both factors indistinguishable with exact partner: bound
                    // comes from the sum of the bounds
                    Some(a.eff_lo().unwrap_or(0) + b.eff_lo().unwrap_or(0))
                } else {
                    Some(cands.into_iter().min().unwrap())
                }
            }
        };
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            let bound = a.eff_lo().unwrap_or(0) + b.eff_lo().unwrap_or(0);
            return Ok(LaurentNumber {
                fld,
                lo: bound,
                coeffs: vec![],
                prec: prec.or(Some(bound)),
            }
            .canonical());
        }
        let lo = a.lo + b.lo;
        let hi = match prec {
            Some(p) => p,
            None => lo + (a.coeffs.len() + b.coeffs.len()) as i64 - 1,
        };
        let mut coeffs = vec![fld.residue.zero(); (hi - lo).max(0) as usize];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let k = (i + j) as i64;
                if k >= hi - lo {
                    break;
                }
                coeffs[k as usize] = coeffs[k as usize].add(&x.mul(y));
            }
        }
        Ok(LaurentNumber { fld, lo, coeffs, prec }.canonical())
    }

    pub fn pow(&self, n: u32) -> Result<LaurentNumber> {
        let mut acc = self.fld.one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Division. If the quotient is non-terminating and both operands are
    /// exact, a finite target precision is required (`div_at`).
    pub fn try_div(&self, rhs: &Self) -> Result<LaurentNumber> {
        let fld = self.join_field(rhs)?;
        let a = self.promote(&fld)?;
        let b = rhs.promote(&fld)?;
        if b.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        if b.coeffs.is_empty() {
            return Err(Error::DivisionByIndistinguishable);
        }
        if a.is_exact_zero() {
            return Ok(fld.zero());
        }
        // result precision window
        let m = b.lo;
        let rel_b = b.prec.map(|p| p - m); // relative precision of divisor
        let quota = match (a.prec, rel_b, a.eff_lo()) {
            (None, None, _) => None,
            (pa, rb, lo_a) => {
                let c1 = pa.map(|p| p - m);
                let c2 = match (rb, lo_a) {
                    (Some(r), Some(l)) => Some(l - m + r - m + m), // l + r - 2m + m = l + r - m
                    _ => None,
                };
                let cands: Vec<i64> = [c1, c2].into_iter().flatten().collect();
                cands.into_iter().min()
            }
        };
        match quota {
            Some(p) => a.div_core(&b, p),
            None => {
                // both exact: long division; succeed only if it terminates
                let bound = a.lo - b.lo + (a.coeffs.len() + b.coeffs.len()) as i64 + 8;
                let q = a.div_core(&b, bound)?;
                let mut coeffs = q.coeffs.clone();
                while coeffs.last().map(|c| c.is_zero()) == Some(true) {
                    coeffs.pop();
                }
                let cand = LaurentNumber {
                    fld: q.fld.clone(),
                    lo: q.lo,
                    coeffs,
                    prec: None,
                }
                .canonical();
                let back = cand.mul(&b)?;
                let diff = a.sub(&back)?;
                if diff.is_exact_zero() {
                    Ok(cand)
                } else {
                    Err(Error::NonTerminatingDivision)
                }
            }
        }
    }

    /// Division computed to the given absolute precision (in ord-units).
    pub fn div_at(&self, rhs: &Self, prec_ord: Rat) -> Result<LaurentNumber> {
        let fld = self.join_field(rhs)?;
        let a = self.promote(&fld)?;
        let b = rhs.promote(&fld)?;
        if b.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        if b.coeffs.is_empty() {
            return Err(Error::DivisionByIndistinguishable);
        }
        if a.is_exact_zero() {
            return Ok(fld.zero());
        }
        let target = prec_ord * Rat::from_integer(fld.e as i64);
        if !target.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "precision {prec_ord} not representable with e = {}",
                fld.e
            )));
        }
        let mut p = target.to_integer();
        if let Ok(natural) = a.try_div(&b) {
            if let Some(np) = natural.prec {
                p = p.min(np);
            } else {
                // exact quotient: truncate to the request
                return Ok(LaurentNumber {
                    prec: Some(p),
                    ..natural
                }
                .canonical());
            }
            return Ok(LaurentNumber {
                prec: Some(p),
                ..natural
            }
            .canonical());
        }
        a.div_core(&b, p)
    }

    /// Long division against a distinguishable divisor, up to the exclusive
    /// s-exponent bound `prec_s`.
    fn div_core(&self, b: &Self, prec_s: i64) -> Result<LaurentNumber> {
        let fld = self.fld.clone();
        let m = b.lo;
        let lead_inv = b.coeffs[0].inv()?;
        let lo = self.lo - m;
        let terms = (prec_s - lo).max(0) as usize;
        let mut out = Vec::with_capacity(terms);
        // rem tracks the running numerator coefficients, aligned at self.lo
        let width = terms + b.coeffs.len();
        let mut rem: Vec<FqExtElem> = (0..width)
            .map(|i| self.coeff_at_unchecked(self.lo + i as i64))
            .collect();
        for k in 0..terms {
            let c = rem[k].mul(&lead_inv);
            out.push(c.clone());
            if !c.is_zero() {
                for (j, bc) in b.coeffs.iter().enumerate() {
                    if k + j < width {
                        rem[k + j] = rem[k + j].sub(&c.mul(bc));
                    }
                }
            }
        }
        Ok(LaurentNumber {
            fld,
            lo,
            coeffs: out,
            prec: Some(prec_s),
        }
        .canonical())
    }

    /// Truncate to a (possibly smaller) precision, in ord-units.
    pub fn truncate(&self, prec_ord: Rat) -> LaurentNumber {
        let e = self.fld.e as i64;
        let target = prec_ord * Rat::from_integer(e);
        let p = target.floor().to_integer();
        let p = match self.prec {
            Some(old) => old.min(p),
            None => p,
        };
        LaurentNumber {
            fld: self.fld.clone(),
            lo: self.lo,
            coeffs: self.coeffs.clone(),
            prec: Some(p),
        }
        .canonical()
    }

    /// Shift by s^k (multiply by the exact monomial).
    pub fn s_shift(&self, k: i64) -> LaurentNumber {
        LaurentNumber {
            fld: self.fld.clone(),
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// Shift by t^k.
    pub fn t_shift(&self, k: i64) -> LaurentNumber {
        self.s_shift(k * self.fld.e as i64)
    }
}

impl Ring for LaurentNumber {
    fn r_add(&self, rhs: &Self) -> Self {
        self.add(rhs).expect("incompatible fields in ring op")
    }
    fn r_sub(&self, rhs: &Self) -> Self {
        self.sub(rhs).expect("incompatible fields in ring op")
    }
    fn r_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs).expect("incompatible fields in ring op")
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn r_zero(&self) -> Self {
        self.fld.zero()
    }
    fn r_one(&self) -> Self {
        self.fld.one()
    }
}

impl fmt::Debug for LaurentNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Text form `t^v * [c0, c1, ...] @K (e=.., f=..)`: v is the normalized
/// valuation of the first stored coefficient, coefficients step by 1/e, and
/// K is the precision bound in ord-units (`exact` when the value is exact).
impl fmt::Display for LaurentNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.fld.e as i64;
        let v = rat(self.lo, e);
        write!(f, "t^{} * [", fmt_rat(v))?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] @")?;
        match self.prec {
            None => write!(f, "exact")?,
            Some(p) => write!(f, "{}", fmt_rat(rat(p, e)))?,
        }
        write!(f, " (e={}, f={})", self.fld.e, self.fld.f())
    }
}

fn fmt_rat(r: Rat) -> String {
    if r.is_integer() {
        format!("{}", r.to_integer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// JSON form with the explicit window: coefficient arrays are
/// lowest-degree-first over the residue extension.
impl serde::Serialize for LaurentNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let e = self.fld.e as i64;
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("v", &fmt_rat(rat(self.lo, e)))?;
        m.serialize_entry("coeffs", &self.coeffs)?;
        m.serialize_entry(
            "prec",
            &self.prec.map(|p| fmt_rat(rat(p, e))),
        )?;
        m.serialize_entry("e", &self.fld.e)?;
        m.serialize_entry("f", &self.fld.f())?;
        m.serialize_entry("q", &self.fld.q())?;
        m.end()
    }
}
