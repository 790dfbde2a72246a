//! Polynomial algebra on both sides of the residue map: Newton polygons,
//! slope tests and r-reduction over the local field, and gcd/resultant/
//! factorization machinery over the residue field.
//!
//! Conventions: coefficients are stored constant-first. For a monic
//! polynomial P = lambda^N + alpha_1 lambda^{N-1} + ... + alpha_N, the
//! coefficient alpha_j of lambda^{N-j} is `coeff(N - j)`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fields::{ExtField, FqElem, FqExtElem};
use crate::laurent::{rat, LaurentNumber, LocalField, OrdValue, Rat};

// ---------------------------------------------------------------------------
// Slope constants
// ---------------------------------------------------------------------------

/// The constants r = L/N, g = gcd(L, N), l = L/g, n = N/g attached to a
/// slope and a degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlopeConstants {
    pub r: Rat,
    pub big_l: i64,
    pub big_n: i64,
    pub g: i64,
    pub n: i64,
    pub ell: i64,
}

impl SlopeConstants {
    pub fn new(r: Rat, big_n: i64) -> Result<Self> {
        if big_n < 1 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        if r.is_negative() {
            return Err(Error::InvalidArgument("slope must be >= 0".into()));
        }
        let l_rat = r * Rat::from_integer(big_n);
        if !l_rat.is_integer() {
            return Err(Error::SlopeIncompatible {
                n: *r.denom(),
                deg: big_n,
            });
        }
        let big_l = l_rat.to_integer();
        // gcd(0, N) = N, matching r = 0 => g = N, n = 1, l = 0
        let g = if big_l == 0 {
            big_n
        } else {
            num_integer::gcd(big_l, big_n)
        };
        Ok(SlopeConstants {
            r,
            big_l,
            big_n,
            g,
            n: big_n / g,
            ell: big_l / g,
        })
    }
}

// ---------------------------------------------------------------------------
// FqPoly: dense polynomials over the prime field
// ---------------------------------------------------------------------------

/// Polynomial over F_q, constant-first coefficients, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    q: u64,
    coeffs: Vec<FqElem>,
}

impl FqPoly {
    pub fn new(q: u64, coeffs: Vec<FqElem>) -> Self {
        let mut p = FqPoly { q, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(q: u64, coeffs: &[i64]) -> Self {
        Self::new(q, coeffs.iter().map(|&c| FqElem::new(q, c)).collect())
    }

    pub fn zero(q: u64) -> Self {
        FqPoly { q, coeffs: vec![] }
    }

    pub fn one(q: u64) -> Self {
        Self::from_ints(q, &[1])
    }

    /// lambda - a
    pub fn linear(a: FqElem) -> Self {
        Self::new(a.q(), vec![-a, FqElem::one(a.q())])
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()) == Some(true) {
            self.coeffs.pop();
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| FqElem::zero(self.q))
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn leading(&self) -> FqElem {
        self.coeffs
            .last()
            .copied()
            .unwrap_or_else(|| FqElem::zero(self.q))
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FqElem::one(self.q)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Self::new(self.q, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Self::new(self.q, coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.q);
        }
        let mut out = vec![FqElem::zero(self.q); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::new(self.q, out)
    }

    pub fn scale(&self, c: FqElem) -> Self {
        Self::new(self.q, self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn divrem(&self, rhs: &Self) -> Result<(Self, Self)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut rem = self.clone();
        let mut quo = vec![FqElem::zero(self.q); self.coeffs.len()];
        let dl = rhs.degree();
        let lead_inv = rhs.leading().inv()?;
        while !rem.is_zero() && rem.degree() >= dl {
            let k = rem.degree() - dl;
            let c = rem.leading() * lead_inv;
            quo[k] = c;
            let shifted: Vec<FqElem> = std::iter::repeat(FqElem::zero(self.q))
                .take(k)
                .chain(rhs.coeffs.iter().map(|&b| b * c))
                .collect();
            rem = rem.sub(&Self::new(self.q, shifted));
        }
        Ok((Self::new(self.q, quo), rem))
    }

    pub fn rem(&self, rhs: &Self) -> Result<Self> {
        Ok(self.divrem(rhs)?.1)
    }

    /// Monic gcd by Euclid.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.leading().inv().expect("nonzero");
            a.scale(inv)
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.q);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * FqElem::new(self.q, (i + 1) as i64))
            .collect();
        Self::new(self.q, coeffs)
    }

    /// gcd(P, P') = 1; never decided by root enumeration.
    pub fn is_separable(&self) -> bool {
        let g = self.gcd(&self.derivative());
        g.degree() == 0 && !g.is_zero()
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let mut acc = FqElem::zero(self.q);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluate after embedding the coefficients into an extension.
    pub fn eval_ext(&self, x: &FqExtElem) -> FqExtElem {
        let k = x.field();
        let mut acc = k.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&k.from_prime(*c));
        }
        acc
    }

    pub fn compose_neg(&self) -> Self {
        // P(-lambda)
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c } else { -c })
            .collect();
        Self::new(self.q, coeffs)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % 2 == 0 || c.is_zero())
    }

    /// P^{(2)} with P(lambda) = P^{(2)}(lambda^2).
    pub fn even_split(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::NotEven);
        }
        let coeffs = self.coeffs.iter().step_by(2).copied().collect();
        Ok(Self::new(self.q, coeffs))
    }

    /// Sylvester-matrix resultant, by elimination over the field.
    pub fn resultant(&self, rhs: &Self) -> FqElem {
        let n = self.degree();
        let m = rhs.degree();
        if self.is_zero() || rhs.is_zero() {
            return FqElem::zero(self.q);
        }
        if n == 0 {
            return self.coeff(0).pow(m as u64);
        }
        if m == 0 {
            return rhs.coeff(0).pow(n as u64);
        }
        let size = n + m;
        let mut mat = vec![vec![FqElem::zero(self.q); size]; size];
        for row in 0..m {
            for k in 0..=n {
                mat[row][row + k] = self.coeff(n - k);
            }
        }
        for row in 0..n {
            for k in 0..=m {
                mat[m + row][row + k] = rhs.coeff(m - k);
            }
        }
        // Gaussian elimination
        let mut det = FqElem::one(self.q);
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return FqElem::zero(self.q);
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let p = mat[col][col];
            det = det * p;
            let pinv = p.inv().expect("pivot nonzero");
            for r in col + 1..size {
                let factor = mat[r][col] * pinv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..size {
                    let sub = factor * mat[col][c];
                    mat[r][c] = mat[r][c] - sub;
                }
            }
        }
        det
    }

    /// disc(P) = (-1)^{N(N-1)/2} res(P, P') / lc(P).
    pub fn discriminant(&self) -> FqElem {
        let n = self.degree();
        let sign = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 {
            FqElem::one(self.q)
        } else {
            -FqElem::one(self.q)
        };
        let r = self.resultant(&self.derivative());
        sign * r * self.leading().inv().expect("nonzero leading")
    }

    /// Full factorization by exhaustive trial division over the monic
    /// irreducibles in lexicographic order; deterministic by construction.
    pub fn factor(&self) -> Vec<(FqPoly, usize)> {
        assert!(!self.is_zero());
        let mut rem = {
            let inv = self.leading().inv().expect("nonzero");
            self.scale(inv)
        };
        let mut out: Vec<(FqPoly, usize)> = Vec::new();
        let mut d = 1usize;
        while rem.degree() >= 1 {
            if d > rem.degree() {
                break;
            }
            if 2 * d > rem.degree() {
                // remainder itself is irreducible
                out.push((rem.clone(), 1));
                rem = Self::one(self.q);
                break;
            }
            let mut advanced = false;
            for cand in monic_irreducibles(self.q, d) {
                let mut mult = 0usize;
                loop {
                    let (quo, r) = rem.divrem(&cand).expect("nonzero divisor");
                    if r.is_zero() {
                        mult += 1;
                        rem = quo;
                    } else {
                        break;
                    }
                }
                if mult > 0 {
                    out.push((cand, mult));
                    advanced = true;
                }
                if rem.degree() < d {
                    break;
                }
            }
            let _ = advanced;
            d += 1;
        }
        if rem.degree() >= 1 {
            out.push((rem, 1));
        }
        out
    }

    /// Roots of the polynomial inside a given extension, by scan.
    pub fn roots_in(&self, k: &ExtField) -> Vec<FqExtElem> {
        k.elements()
            .into_iter()
            .filter(|x| self.eval_ext(x).is_zero())
            .collect()
    }
}

/// Constant-first coefficient array.
impl serde::Serialize for FqPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl std::fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::fmt::Display for FqPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => {
                    if c.value() == 1 {
                        write!(f, "x")?
                    } else {
                        write!(f, "{c}*x")?
                    }
                }
                _ => {
                    if c.value() == 1 {
                        write!(f, "x^{k}")?
                    } else {
                        write!(f, "{c}*x^{k}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Monic irreducibles of exact degree d, in lexicographic constant-first
/// order.
pub fn monic_irreducibles(q: u64, d: usize) -> Vec<FqPoly> {
    let mut out = Vec::new();
    let total = q.pow(d as u32);
    for code in 0..total {
        let mut coeffs = vec![0i64; d + 1];
        let mut c = code;
        for slot in (0..d).rev() {
            coeffs[slot] = (c % q) as i64;
            c /= q;
        }
        coeffs[d] = 1;
        let p = FqPoly::from_ints(q, &coeffs);
        if is_irreducible(&p) {
            out.push(p);
        }
    }
    out
}

pub fn is_irreducible(p: &FqPoly) -> bool {
    let d = p.degree();
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    for e in 1..=(d / 2) {
        let total = p.q().pow(e as u32);
        for code in 0..total {
            let mut coeffs = vec![0i64; e + 1];
            let mut c = code;
            for slot in (0..e).rev() {
                coeffs[slot] = (c % p.q()) as i64;
                c /= p.q();
            }
            coeffs[e] = 1;
            let cand = FqPoly::from_ints(p.q(), &coeffs);
            if p.rem(&cand).expect("nonzero").is_zero() {
                return false;
            }
        }
    }
    true
}

/// All monic polynomials of exact degree d, in lexicographic order.
pub fn monic_polys(q: u64, d: usize) -> Vec<FqPoly> {
    let total = q.pow(d as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut coeffs = vec![0i64; d + 1];
        let mut c = code;
        for slot in (0..d).rev() {
            coeffs[slot] = (c % q) as i64;
            c /= q;
        }
        coeffs[d] = 1;
        out.push(FqPoly::from_ints(q, &coeffs));
    }
    out
}

// ---------------------------------------------------------------------------
// LaurentPoly: monic polynomials over the local field
// ---------------------------------------------------------------------------

/// Dense polynomial over a local field, constant-first; monicity is checked
/// where the operation requires it.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly {
    fld: LocalField,
    coeffs: Vec<LaurentNumber>,
}

impl LaurentPoly {
    pub fn new(fld: LocalField, coeffs: Vec<LaurentNumber>) -> Self {
        LaurentPoly { fld, coeffs }
    }

    pub fn field(&self) -> &LocalField {
        &self.fld
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> LaurentNumber {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.fld.zero())
    }

    pub fn coeffs(&self) -> &[LaurentNumber] {
        &self.coeffs
    }

    /// The coefficient alpha_j of lambda^{N-j}.
    pub fn alpha(&self, j: usize) -> LaurentNumber {
        let n = self.degree();
        assert!(j <= n);
        self.coeff(n - j)
    }

    pub fn is_monic(&self) -> bool {
        match self.coeffs.last() {
            Some(c) => {
                c.is_nonzero()
                    && c.ord() == OrdValue::Finite(Rat::zero())
                    && c.ac().map(|a| a == self.fld.residue_field().one()) == Ok(true)
            }
            None => false,
        }
    }

    fn require_monic(&self) -> Result<()> {
        if self.is_monic() {
            Ok(())
        } else {
            Err(Error::NotMonic)
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let mut out = vec![self.fld.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(LaurentPoly::new(self.fld.clone(), out))
    }

    pub fn eval(&self, x: &LaurentNumber) -> Result<LaurentNumber> {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return LaurentPoly::new(self.fld.clone(), vec![]);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.fld.from_int((i + 1) as i64);
                c.mul(&k).expect("same field")
            })
            .collect();
        LaurentPoly::new(self.fld.clone(), coeffs)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % 2 == 0 || !c.is_nonzero())
    }

    /// P^{(2)} of half degree, when P is even.
    pub fn even_split(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::NotEven);
        }
        let coeffs = self.coeffs.iter().step_by(2).cloned().collect();
        Ok(LaurentPoly::new(self.fld.clone(), coeffs))
    }

    /// Lower Newton polygon: ascending (slope, length) segments for the
    /// nonzero part, plus the multiplicity of exactly-zero roots.
    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        self.require_monic()?;
        let n = self.degree();
        // zero roots split off first; the constant term must be exactly zero
        // or distinguishable
        let mut zero_roots = 0usize;
        while zero_roots < n && self.coeffs[zero_roots].is_exact_zero() {
            zero_roots += 1;
        }
        let c0 = &self.coeffs[zero_roots];
        if !c0.is_nonzero() && !c0.is_exact_zero() {
            return Err(Error::PrecisionExhausted(
                "constant term of the nonzero part indistinguishable from zero".into(),
            ));
        }
        let m = n - zero_roots;
        // points (j, ord alpha_j) for the nonzero part, j = 0..=m
        let mut known: Vec<(i64, Rat)> = Vec::new();
        let mut bounded: Vec<(i64, Rat)> = Vec::new();
        for j in 0..=m {
            let c = self.coeff(n - j); // alpha_j of the full polynomial
            match c.ord() {
                OrdValue::Finite(v) => known.push((j as i64, v)),
                OrdValue::AtLeast(b) => bounded.push((j as i64, b)),
                OrdValue::Infinite => {}
            }
        }
        // lower convex hull of the known points (monotone chain)
        known.sort_by_key(|&(j, _)| j);
        let mut hull: Vec<(i64, Rat)> = Vec::new();
        for p in known {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // drop b if it lies on or above segment a..p
                let lhs = (b.1 - a.1) * Rat::from_integer(p.0 - a.0);
                let rhs = (p.1 - a.1) * Rat::from_integer(b.0 - a.0);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        // hull must reach j = 0 and j = m (leading coeff is exact 1;
        // constant distinguishable)
        let hull_y = |j: i64| -> Rat {
            for w in hull.windows(2) {
                let (j0, v0) = w[0];
                let (j1, v1) = w[1];
                if j >= j0 && j <= j1 {
                    return v0 + (v1 - v0) * rat(j - j0, 1) / rat(j1 - j0, 1);
                }
            }
            hull.last().map(|&(_, v)| v).unwrap_or_else(Rat::zero)
        };
        for (j, b) in bounded {
            if b < hull_y(j) {
                return Err(Error::PrecisionExhausted(format!(
                    "hull-critical coefficient alpha_{j} known only to ord >= {b}"
                )));
            }
        }
        let mut segments = Vec::new();
        for w in hull.windows(2) {
            let (j0, v0) = w[0];
            let (j1, v1) = w[1];
            let slope = (v1 - v0) / rat(j1 - j0, 1);
            segments.push((slope, (j1 - j0) as usize));
        }
        Ok(NewtonPolygon { zero_roots, segments })
    }

    /// True iff every root has ord = r: the polygon is one segment of slope r.
    pub fn has_slope(&self, r: Rat) -> Result<bool> {
        let np = self.newton_polygon()?;
        Ok(np.zero_roots == 0 && np.segments.len() == 1 && np.segments[0].0 == r)
    }

    /// Coefficient bounds |alpha_j| <= q^{-rj}, three-valued.
    pub fn slope_bounds_hold(&self, r: Rat) -> Result<bool> {
        self.require_monic()?;
        let n = self.degree();
        for j in 1..=n {
            let need = r * rat(j as i64, 1);
            match self.alpha(j).ord() {
                OrdValue::Infinite => {}
                OrdValue::Finite(v) => {
                    if v < need {
                        return Ok(false);
                    }
                }
                OrdValue::AtLeast(b) => {
                    if b < need {
                        return Err(Error::PrecisionExhausted(format!(
                            "alpha_{j} known only to ord >= {b}, bound requires {need}"
                        )));
                    }
                }
            }
        }
        Ok(true)
    }

    /// The r-reduction R(lambda) = lambda^g + sum a_j lambda^{g-j} with
    /// a_j = res_{l j}(alpha_{n j}).
    pub fn r_reduction(&self, consts: &SlopeConstants) -> Result<FqPoly> {
        self.require_monic()?;
        let n = self.degree() as i64;
        if n != consts.big_n {
            return Err(Error::SlopeIncompatible {
                n: consts.n,
                deg: n,
            });
        }
        if !self.slope_bounds_hold(consts.r)? {
            let bad = (1..=self.degree())
                .find(|&j| {
                    matches!(self.alpha(j).ord(), OrdValue::Finite(v) if v < consts.r * rat(j as i64,1))
                })
                .unwrap_or(0);
            return Err(Error::CoefficientBound { j: bad });
        }
        let q = self.fld.q();
        let g = consts.g as usize;
        let mut coeffs = vec![FqElem::zero(q); g + 1];
        coeffs[g] = FqElem::one(q);
        for j in 1..=g {
            let idx = rat(consts.ell * j as i64, 1);
            let a = self.alpha(consts.n as usize * j).res_at(idx)?;
            let a = a.as_prime().ok_or_else(|| {
                Error::FieldMismatch("r-reduction coefficient outside the prime field".into())
            })?;
            coeffs[g - j] = a;
        }
        Ok(FqPoly::new(q, coeffs))
    }

    /// Lemma-style converse certificate: under the coefficient bounds, the
    /// reduction having a nonzero constant term and distinct roots forces
    /// slope r and pairwise root distance q^{-r}.
    pub fn check_converse(&self, r: Rat) -> Result<bool> {
        let consts = SlopeConstants::new(r, self.degree() as i64)?;
        let red = self.r_reduction(&consts)?;
        Ok(!red.coeff(0).is_zero() && red.is_separable())
    }

    /// The rescaled integral polynomial P~(lambda) = w^{-rN} P(lambda w^r),
    /// living over the e = n ramified extension.
    pub fn rescale_by_slope(&self, consts: &SlopeConstants) -> Result<LaurentPoly> {
        self.require_monic()?;
        let e_new = (self.fld.e() as i64 * consts.n) as u32;
        let fld = LocalField::with_modulus_index(
            self.fld.q(),
            self.fld.f(),
            e_new,
            self.fld.residue_field().modulus_index(),
        )?;
        let n = self.degree();
        let mut coeffs = Vec::with_capacity(n + 1);
        for (k, c) in self.coeffs.iter().enumerate() {
            let j = (n - k) as i64; // this is alpha_j
            let shifted = c.promote(&fld)?.s_shift(-consts.ell * j * self.fld.e() as i64);
            coeffs.push(shifted);
        }
        Ok(LaurentPoly::new(fld, coeffs))
    }

    /// Division-free resultant via the Sylvester matrix (subset-expansion
    /// determinant), so window tracking never needs a division.
    pub fn resultant(&self, rhs: &Self) -> Result<LaurentNumber> {
        let n = self.degree();
        let m = rhs.degree();
        if n == 0 {
            return self.coeff(0).pow(m as u32);
        }
        if m == 0 {
            return rhs.coeff(0).pow(n as u32);
        }
        let size = n + m;
        let zero = self.fld.zero();
        let mut mat = vec![vec![zero.clone(); size]; size];
        for row in 0..m {
            for k in 0..=n {
                mat[row][row + k] = self.coeff(n - k);
            }
        }
        for row in 0..n {
            for k in 0..=m {
                mat[m + row][row + k] = rhs.coeff(m - k);
            }
        }
        Ok(crate::matrix::det_rows(&mat, &zero))
    }

    pub fn discriminant(&self) -> Result<LaurentNumber> {
        let n = self.degree();
        let r = self.resultant(&self.derivative())?;
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            Ok(r.neg())
        } else {
            Ok(r)
        }
    }
}

impl std::fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            writeln!(f, "  lambda^{k}: {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Multiplicity of exactly-zero roots, split off before the hull.
    pub zero_roots: usize,
    /// Ascending (slope, length); lengths sum to degree - zero_roots.
    pub segments: Vec<(Rat, usize)>,
}

// ---------------------------------------------------------------------------
// t_r, lifts, and root construction
// ---------------------------------------------------------------------------

/// t_r(lambda) = ac(lambda^n / w^l), defined on elements of ord r.
pub fn t_r(lambda: &LaurentNumber, consts: &SlopeConstants) -> Result<FqExtElem> {
    match lambda.ord() {
        OrdValue::Finite(v) if v == consts.r => {}
        other => {
            return Err(Error::OrdMismatch {
                got: format!("{other:?}"),
                want: format!("{}", consts.r),
            })
        }
    }
    let num = lambda.pow(consts.n as u32)?;
    let den = lambda.field().t_pow(consts.ell);
    let quot = num.try_div(&den)?;
    quot.ac()
}

/// The canonical slope-r lift w^{lg} R.(lambda^n / w^l): monic of degree
/// ng over the base field, with coefficient-wise constant lifts.
pub fn r_lift(red: &FqPoly, consts: &SlopeConstants, fld: &LocalField) -> Result<LaurentPoly> {
    if !red.is_monic() {
        return Err(Error::NotMonic);
    }
    if red.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if !red.is_separable() {
        return Err(Error::NotSeparable);
    }
    let g = red.degree();
    if g as i64 != consts.g {
        return Err(Error::SlopeIncompatible {
            n: consts.n,
            deg: g as i64,
        });
    }
    let big_n = (consts.n * consts.g) as usize;
    let mut coeffs = vec![fld.zero(); big_n + 1];
    for j in 0..=g {
        // coefficient of lambda^{n(g-j)} is a_j * t^{l j}
        let a = red.coeff(g - j);
        let lift = fld.from_prime(a).t_shift(consts.ell * j as i64);
        coeffs[consts.n as usize * (g - j)] = lift;
    }
    coeffs[big_n] = fld.one();
    Ok(LaurentPoly::new(fld.clone(), coeffs))
}

/// A constructed root of the slope-r lift: lambda = s^l * eta in the field
/// F_{q^{f'}}((s)) with s^n = t, together with its multiplicity and the
/// residue root of R it lies over.
#[derive(Debug, Clone)]
pub struct SlopeRoot {
    pub lambda: LaurentNumber,
    pub multiplicity: usize,
    pub over: FqExtElem,
}

/// Construct the roots of r_lift(R) explicitly, grouped by the residue
/// roots of R. Fails with `WildRamification` when p divides n; the tame
/// hypothesis p > n is what licenses the n-to-1 fiber statement.
pub fn slope_roots(red: &FqPoly, consts: &SlopeConstants) -> Result<Vec<SlopeRoot>> {
    let q = red.q();
    if (consts.n as u64) % q == 0 {
        return Err(Error::WildRamification {
            e: consts.n as u32,
            p: q,
        });
    }
    let mut out = Vec::new();
    for (factor, mult) in red.factor() {
        if mult != 1 {
            return Err(Error::NotSeparable);
        }
        let gi = factor.degree() as u32;
        // find the smallest multiple of gi hosting all n-th roots of the
        // residue roots of this factor
        let mut hosted: Option<(ExtField, Vec<FqExtElem>)> = None;
        for k in 1..=(2 * consts.n as u32 * consts.n as u32) {
            let fprime = gi * k;
            let ext = ExtField::with_index(q, fprime, red_modulus_index(red));
            let roots = factor.roots_in(&ext);
            if roots.len() != gi as usize {
                continue;
            }
            let nth_ok = roots.iter().all(|z| {
                ext.elements()
                    .iter()
                    .filter(|eta| eta.pow(consts.n as u64) == *z)
                    .count()
                    == consts.n as usize
            });
            if nth_ok {
                hosted = Some((ext, roots));
                break;
            }
        }
        let (ext, roots) = hosted.ok_or_else(|| {
            Error::Unsupported(format!(
                "no small extension hosts the degree-{} roots with all {}-th roots",
                gi, consts.n
            ))
        })?;
        let lf = LocalField::with_modulus_index(
            q,
            ext.degree(),
            consts.n as u32,
            ext.modulus_index(),
        )?;
        for z in roots {
            for eta in ext.elements() {
                if eta.pow(consts.n as u64) == z {
                    let lambda = lf.from_residue(eta).mul(&lf.s_pow(consts.ell))?;
                    out.push(SlopeRoot {
                        lambda,
                        multiplicity: 1,
                        over: z.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn red_modulus_index(_red: &FqPoly) -> u32 {
    0
}

/// Root construction with an explicit modulus index, exercising the
/// representation-independence of anything computed from the roots.
pub fn slope_roots_with_index(
    red: &FqPoly,
    consts: &SlopeConstants,
    modulus_index: u32,
) -> Result<Vec<SlopeRoot>> {
    let q = red.q();
    if (consts.n as u64) % q == 0 {
        return Err(Error::WildRamification {
            e: consts.n as u32,
            p: q,
        });
    }
    let mut out = Vec::new();
    for (factor, mult) in red.factor() {
        if mult != 1 {
            return Err(Error::NotSeparable);
        }
        let gi = factor.degree() as u32;
        for k in 1..=(2 * consts.n as u32 * consts.n as u32) {
            let fprime = gi * k;
            let ext = ExtField::with_index(q, fprime, modulus_index);
            let roots = factor.roots_in(&ext);
            if roots.len() != gi as usize {
                continue;
            }
            let etas: Vec<(FqExtElem, FqExtElem)> = roots
                .iter()
                .flat_map(|z| {
                    ext.elements()
                        .into_iter()
                        .filter(|eta| eta.pow(consts.n as u64) == *z)
                        .map(|eta| (eta, z.clone()))
                        .collect::<Vec<_>>()
                })
                .collect();
            if etas.len() != roots.len() * consts.n as usize {
                continue;
            }
            let lf = LocalField::with_modulus_index(q, fprime, consts.n as u32, modulus_index)?;
            for (eta, z) in etas {
                let lambda = lf.from_residue(eta).mul(&lf.s_pow(consts.ell))?;
                out.push(SlopeRoot {
                    lambda,
                    multiplicity: 1,
                    over: z,
                });
            }
            break;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Even-polynomial factor records
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadType {
    /// n even: the quadratic extension over the fixed subalgebra is ramified.
    Ramified,
    /// n odd, even irreducible factor: unramified quadratic extension.
    Unramified,
    /// n odd, a non-even factor paired with its lambda -> -lambda partner.
    Split,
}

#[derive(Debug, Clone)]
pub struct FactorRecord {
    pub factors: Vec<FqPoly>,
    pub quad_type: QuadType,
    pub degree: usize,
    pub n: i64,
}

/// Partition the irreducible factors of R per the even-polynomial case
/// analysis: n even tags every factor ramified; n odd tags even factors
/// unramified and pairs the rest with their mirror images.
pub fn even_factor_data(red: &FqPoly, consts: &SlopeConstants) -> Result<Vec<FactorRecord>> {
    if red.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if !red.is_separable() {
        return Err(Error::NotSeparable);
    }
    let n_even = consts.n % 2 == 0;
    if !n_even && !red.is_even() {
        return Err(Error::NotEven);
    }
    let factors: Vec<FqPoly> = red.factor().into_iter().map(|(f, _)| f).collect();
    let mut out = Vec::new();
    if n_even {
        for f in factors {
            let d = f.degree();
            out.push(FactorRecord {
                factors: vec![f],
                quad_type: QuadType::Ramified,
                degree: d,
                n: consts.n,
            });
        }
        return Ok(out);
    }
    let mut used = vec![false; factors.len()];
    for i in 0..factors.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let fi = &factors[i];
        if fi.is_even() {
            out.push(FactorRecord {
                factors: vec![fi.clone()],
                quad_type: QuadType::Unramified,
                degree: fi.degree(),
                n: consts.n,
            });
            continue;
        }
        // mirror partner: R_j(lambda) = R_i(-lambda), normalized monic
        let mut mirror = fi.compose_neg();
        if !mirror.is_monic() {
            mirror = mirror.scale(mirror.leading().inv().expect("nonzero"));
        }
        let j = factors
            .iter()
            .enumerate()
            .find(|(j, f)| !used[*j] && **f == mirror)
            .map(|(j, _)| j)
            .ok_or_else(|| {
                Error::Unsupported(format!("unpaired non-even factor {fi} (internal inconsistency)"))
            })?;
        used[j] = true;
        out.push(FactorRecord {
            factors: vec![fi.clone(), factors[j].clone()],
            quad_type: QuadType::Split,
            degree: fi.degree(),
            n: consts.n,
        });
    }
    Ok(out)
}
