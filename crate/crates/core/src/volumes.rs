//! Volumes of locally constant definable subsets of g(O) under the measure
//! with vol(g(O)) = 1, exact by exhaustive enumeration of g(O/t^K) or
//! estimated by seeded Monte Carlo; stable orbital integrals as normalized
//! fiber volumes; and the r = 0 fundamental-lemma sanity check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::FqElem;
use crate::laurent::{rat, LocalField, Rat};
use crate::lie::{lattice_element, lattice_size, AlgebraType, Family};
use crate::logic::Trilean;
use crate::matrix::Matrix;
use crate::params::{enumerate_s, image, in_s_gh, EndoscopicPair, SPairPoint, SPoint};
use crate::pasdsl::{eval, Formula};
use crate::quotfourier::{finite_group_points, GroupElement};

const EXHAUSTIVE_BOUND: u128 = 10_000_000;
const Z99: f64 = 2.5758293035489004;

fn big(n: u128) -> BigInt {
    BigInt::from(n)
}

/// Exact value of the form coeff * q^{q_exp}; the exponent keeps any
/// residual half-integral (or finer) power of q symbolic so the value stays
/// exact at every slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QScaled {
    pub coeff: BigRational,
    pub q: u64,
    pub q_exp: Rat,
}

impl QScaled {
    pub fn new(coeff: BigRational, q: u64, q_exp: Rat) -> Self {
        let mut s = QScaled { coeff, q, q_exp };
        s.normalize();
        s
    }

    pub fn one(q: u64) -> Self {
        QScaled::new(BigRational::one(), q, rat(0, 1))
    }

    pub fn zero(q: u64) -> Self {
        QScaled::new(BigRational::zero(), q, rat(0, 1))
    }

    fn normalize(&mut self) {
        if self.coeff.is_zero() {
            self.q_exp = rat(0, 1);
            return;
        }
        // fold the integer part of the exponent into the coefficient
        let int_part = self.q_exp.floor().to_integer();
        if int_part != 0 {
            let factor = BigRational::from_integer(BigInt::from(self.q)).pow(
                int_part
                    .try_into()
                    .expect("exponent fits in i32 at desk scale"),
            );
            self.coeff *= factor;
            self.q_exp -= Rat::from_integer(int_part);
        }
    }

    /// Plain rational value, when no fractional power of q remains.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.q_exp.is_zero() {
            Some(self.coeff.clone())
        } else {
            None
        }
    }

    pub fn mul(&self, rhs: &QScaled) -> QScaled {
        assert_eq!(self.q, rhs.q);
        QScaled::new(self.coeff.clone() * rhs.coeff.clone(), self.q, self.q_exp + rhs.q_exp)
    }
}

impl std::fmt::Display for QScaled {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.q_exp.is_zero() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{} * {}^({})", self.coeff, self.q, self.q_exp)
        }
    }
}

// ---------------------------------------------------------------------------
// Volume reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeMode {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
}

/// Exact or estimated volume: lower and upper bracket the unknown mass.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeReport {
    pub algebra: String,
    pub q: u64,
    pub k: u32,
    pub mode: String,
    /// Exact fractions, rendered as "num/den".
    pub lower: String,
    pub upper: String,
    pub true_count: u128,
    pub unknown_count: u128,
    pub total: u128,
    pub samples: Option<u64>,
    pub confidence_radius: Option<f64>,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub lower_exact: BigRational,
    #[serde(skip)]
    pub upper_exact: BigRational,
}

fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn count_lattice(
    f: &Formula,
    alg: AlgebraType,
    fld: &LocalField,
    k: u32,
    range: std::ops::Range<u128>,
) -> Result<(u128, u128)> {
    let chunk = 1u128 << 14;
    let starts: Vec<u128> = {
        let mut v = Vec::new();
        let mut s = range.start;
        while s < range.end {
            v.push(s);
            s += chunk;
        }
        v
    };
    let results: Result<Vec<(u128, u128)>> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk).min(range.end);
            let mut t = 0u128;
            let mut u = 0u128;
            for idx in start..end {
                let x = lattice_element(alg, fld, k, idx);
                match eval(f, &x)? {
                    Trilean::True => t += 1,
                    Trilean::Unknown => u += 1,
                    Trilean::False => {}
                }
            }
            Ok((t, u))
        })
        .collect();
    let results = results?;
    Ok(results
        .into_iter()
        .fold((0, 0), |(a, b), (t, u)| (a + t, b + u)))
}

/// Volume of the definable set cut out by the formula inside g(O), at
/// truncation level K.
pub fn volume(
    f: &Formula,
    alg: AlgebraType,
    fld: &LocalField,
    k: u32,
    mode: VolumeMode,
) -> Result<VolumeReport> {
    crate::laurent::Precision::new(rat(k as i64, 1))?;
    let q = fld.q();
    let total = lattice_size(alg, q, k);
    match mode {
        VolumeMode::Exhaustive => {
            if total > EXHAUSTIVE_BOUND {
                return Err(Error::EnumerationBound(format!(
                    "q^(K dim) = {total} exceeds {EXHAUSTIVE_BOUND}"
                )));
            }
            let (t, u) = count_lattice(f, alg, fld, k, 0..total)?;
            if t == 0 && u == total {
                return Err(Error::PrecisionExhausted(
                    "every point evaluated to unknown; K is too small".into(),
                ));
            }
            let lower = BigRational::new(big(t), big(total));
            let upper = BigRational::new(big(t + u), big(total));
            Ok(VolumeReport {
                algebra: alg.label(),
                q,
                k,
                mode: "exhaustive".into(),
                lower: ratio_string(&lower),
                upper: ratio_string(&upper),
                true_count: t,
                unknown_count: u,
                total,
                samples: None,
                confidence_radius: None,
                seed: None,
                lower_exact: lower,
                upper_exact: upper,
            })
        }
        VolumeMode::MonteCarlo { samples, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut t = 0u128;
            let mut u = 0u128;
            for _ in 0..samples {
                let idx = (rng.gen::<u128>()) % total;
                let x = lattice_element(alg, fld, k, idx);
                match eval(f, &x)? {
                    Trilean::True => t += 1,
                    Trilean::Unknown => u += 1,
                    Trilean::False => {}
                }
            }
            let n = samples as u128;
            let lower = BigRational::new(big(t), big(n));
            let upper = BigRational::new(big(t + u), big(n));
            let p = t as f64 / samples as f64;
            let radius = Z99 * (p * (1.0 - p) / samples as f64).sqrt();
            Ok(VolumeReport {
                algebra: alg.label(),
                q,
                k,
                mode: "montecarlo".into(),
                lower: ratio_string(&lower),
                upper: ratio_string(&upper),
                true_count: t,
                unknown_count: u,
                total,
                samples: Some(samples),
                confidence_radius: Some(radius),
                seed: Some(seed),
                lower_exact: lower,
                upper_exact: upper,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Group orders
// ---------------------------------------------------------------------------

/// |G(F_q)| for the algebra's group: exhaustive enumeration when feasible,
/// otherwise the classical order polynomial (with the Witt type of the even
/// orthogonal form detected by isotropic-vector counting).
pub fn group_order(alg: AlgebraType, q: u64) -> Result<u128> {
    if alg.rank == 0 {
        return Ok(1);
    }
    let d = alg.d();
    if (q as u128).pow((d * d) as u32) <= EXHAUSTIVE_BOUND {
        return Ok(finite_group_points(alg, q)?.len() as u128);
    }
    Ok(group_order_polynomial(alg, q))
}

fn group_order_polynomial(alg: AlgebraType, q: u64) -> u128 {
    let c = alg.rank as u32;
    let qq = q as u128;
    match alg.family {
        Family::Sp | Family::SoOdd => {
            // q^{c^2} prod (q^{2i} - 1)
            let mut acc = qq.pow(c * c);
            for i in 1..=c {
                acc *= qq.pow(2 * i) - 1;
            }
            acc
        }
        Family::SoEven => {
            let eta = witt_type(alg, q);
            let mut acc = qq.pow(c * (c - 1));
            let qc = qq.pow(c);
            acc *= if eta == 1 { qc - 1 } else { qc + 1 };
            for i in 1..=(c - 1) {
                acc *= qq.pow(2 * i) - 1;
            }
            acc
        }
    }
}

/// +1 for the split even orthogonal form, -1 otherwise, read off from the
/// count of isotropic vectors of the fixed J over F_q.
fn witt_type(alg: AlgebraType, q: u64) -> i64 {
    let d = alg.d();
    let c = alg.rank as u32;
    let j = crate::lie::form_matrix(alg);
    let total = (q as u128).pow(d as u32);
    let mut isotropic = 0u128;
    for code in 0..total {
        let mut v = Vec::with_capacity(d);
        let mut rem = code;
        for _ in 0..d {
            v.push(FqElem::new(q, (rem % q as u128) as i64));
            rem /= q as u128;
        }
        let mut acc = FqElem::zero(q);
        for a in 0..d {
            for b in 0..d {
                acc = acc + v[a] * FqElem::new(q, *j.at(a, b)) * v[b];
            }
        }
        if acc.is_zero() {
            isotropic += 1;
        }
    }
    let qq = q as u128;
    let split_count = qq.pow(2 * c - 1) + qq.pow(c) - qq.pow(c - 1);
    if isotropic == split_count {
        1
    } else {
        -1
    }
}

/// Order of the centralizer of a residue matrix inside G(F_q), by scan.
pub fn centralizer_order(alg: AlgebraType, xbar: &Matrix<FqElem>, q: u64) -> Result<u64> {
    let pts = finite_group_points(alg, q)?;
    let mut n = 0;
    for g in pts {
        let GroupElement::Mat(m, _) = g else { continue };
        if m.mul(xbar) == xbar.mul(&m) {
            n += 1;
        }
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// Stable orbital integrals
// ---------------------------------------------------------------------------

/// Normalization data <G>_q = |G(F_q)| q^{-dim G} and delta = dim - rank.
#[derive(Debug, Clone)]
pub struct NormalizationData {
    pub alg: AlgebraType,
    pub q: u64,
    pub group_order: u128,
    pub delta: usize,
    pub r: Rat,
}

impl NormalizationData {
    pub fn new(alg: AlgebraType, q: u64, r: Rat) -> Result<Self> {
        Ok(NormalizationData {
            alg,
            q,
            group_order: group_order(alg, q)?,
            delta: alg.delta(),
            r,
        })
    }

    /// <G>_q * q^{-r delta / 2}, as an exact q-scaled value.
    pub fn divisor(&self) -> QScaled {
        let coeff = BigRational::new(
            BigInt::from(self.group_order),
            BigInt::from((self.q as u128).pow(self.alg.dim() as u32)),
        );
        let exp = -self.r * rat(self.delta as i64, 2);
        QScaled::new(coeff, self.q, exp)
    }
}

/// The stable orbital integral of the unit function at a parameter point:
/// vol({X in g(O) : restricted(r), mu(X) = y}) divided by
/// <G>_q q^{-r delta_G / 2}. Exhaustive and exact; errors if any lattice
/// point is undecided at this K.
pub fn stable_orbital(
    y: &SPoint,
    alg: AlgebraType,
    r: Rat,
    fld: &LocalField,
    k: u32,
) -> Result<QScaled> {
    let q = fld.q();
    if alg.rank == 0 {
        return Ok(QScaled::one(q));
    }
    let f = Formula::mu_fiber(y);
    let rep = volume(&f, alg, fld, k, VolumeMode::Exhaustive)?;
    if rep.unknown_count > 0 {
        return Err(Error::PrecisionExhausted(format!(
            "{} undecided lattice points at K = {k}",
            rep.unknown_count
        )));
    }
    let norm = NormalizationData::new(alg, q, r)?;
    let div = norm.divisor();
    let vol = QScaled::new(rep.lower_exact.clone(), q, rat(0, 1));
    Ok(QScaled::new(
        vol.coeff / div.coeff,
        q,
        vol.q_exp - div.q_exp,
    ))
}

// ---------------------------------------------------------------------------
// Fundamental lemma check at r = 0
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FlRow {
    pub y: SPoint,
    pub lhs: String,
    pub rhs: String,
    /// |T(F_q)| for the centralizer of a fiber representative, when a
    /// representative exists in g(F_q).
    pub torus_order: Option<u64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlReport {
    pub pair: String,
    pub q: u64,
    pub rows: Vec<FlRow>,
    pub all_pass: bool,
    /// A deliberately corrupted normalization must fail.
    pub negative_control_failed: bool,
}

/// Verify the stable face of the r = 0 normalized identity: for every pair
/// point, the normalized g-side fiber volume equals the product of the
/// normalized h-side fiber volumes. Transfer-factor signs are out of scope;
/// this is the epsilon = +1 comparison.
pub fn fl_r0_check(pair: &EndoscopicPair, fld: &LocalField, k: u32) -> Result<FlReport> {
    let q = fld.q();
    let r = rat(0, 1);
    let s1 = enumerate_s(pair.h1, r, q)?;
    let s2 = enumerate_s(pair.h2, r, q)?;
    let mut rows = Vec::new();
    let mut control_checked = false;
    let mut control_failed = false;
    for y1 in &s1 {
        for y2 in &s2 {
            let ypair = SPairPoint::new(y1.clone(), y2.clone())?;
            if !in_s_gh(&ypair, pair.g) {
                continue;
            }
            let x = image(&ypair, pair.g)?;
            let lhs = stable_orbital(&x, pair.g, r, fld, k)?;
            let rhs1 = stable_orbital(y1, pair.h1, r, fld, k)?;
            let rhs2 = stable_orbital(y2, pair.h2, r, fld, k)?;
            let rhs = rhs1.mul(&rhs2);
            let pass = lhs == rhs;
            let torus_order = fiber_torus_order(&x, pair.g, fld)?;
            if !control_checked {
                // negative control: drop the <G>_q q^{-r delta/2} divisor on
                // the g side and require a mismatch
                let raw = raw_fiber_volume(&x, pair.g, fld, k)?;
                control_failed = raw != rhs;
                control_checked = true;
            }
            rows.push(FlRow {
                y: x,
                lhs: format!("{lhs}"),
                rhs: format!("{rhs}"),
                torus_order,
                pass,
            });
        }
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(FlReport {
        pair: format!("{}/{}+{}", pair.g, pair.h1, pair.h2),
        q,
        rows,
        all_pass,
        negative_control_failed: control_failed,
    })
}

fn raw_fiber_volume(
    y: &SPoint,
    alg: AlgebraType,
    fld: &LocalField,
    k: u32,
) -> Result<QScaled> {
    let f = Formula::mu_fiber(y);
    let rep = volume(&f, alg, fld, k, VolumeMode::Exhaustive)?;
    Ok(QScaled::new(rep.lower_exact.clone(), fld.q(), rat(0, 1)))
}

/// |T(F_q)| for the centralizer of a residue representative of the fiber,
/// found by scanning g(F_q).
fn fiber_torus_order(y: &SPoint, alg: AlgebraType, fld: &LocalField) -> Result<Option<u64>> {
    let q = fld.q();
    let f = Formula::mu_fiber(y);
    for idx in 0..lattice_size(alg, q, 1) {
        let x = lattice_element(alg, fld, 1, idx);
        if eval(&f, &x)? == Trilean::True {
            // residue matrix of the representative
            let d = alg.d();
            let mut xb = Matrix::fill(d, d, FqElem::zero(q));
            for i in 0..d {
                for j in 0..d {
                    let c = x.mat.at(i, j).res_at(rat(0, 1))?;
                    let c = c.as_prime().ok_or_else(|| {
                        Error::FieldMismatch("residue outside the prime field".into())
                    })?;
                    xb.set(i, j, c);
                }
            }
            return match centralizer_order(alg, &xb, q) {
                Ok(n) => Ok(Some(n)),
                Err(Error::GroupTooLarge(_)) => Ok(None),
                Err(e) => Err(e),
            };
        }
    }
    Ok(None)
}

/// K-stability helper: the exhaustive volume recomputed one level deeper.
pub fn volume_stable_under_refinement(
    f: &Formula,
    alg: AlgebraType,
    fld: &LocalField,
    k: u32,
) -> Result<bool> {
    let a = volume(f, alg, fld, k, VolumeMode::Exhaustive)?;
    let b = volume(f, alg, fld, k + 1, VolumeMode::Exhaustive)?;
    Ok(a.lower_exact == b.lower_exact && a.upper_exact == b.upper_exact)
}

/// Per-orbit count of restricted elements around a representative: the
/// number of lattice points at level K whose classification point is y.
pub fn fiber_count(y: &SPoint, alg: AlgebraType, fld: &LocalField, k: u32) -> Result<u128> {
    let f = Formula::mu_fiber(y);
    let rep = volume(&f, alg, fld, k, VolumeMode::Exhaustive)?;
    Ok(rep.true_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pasdsl::parse;
    use num_traits::ToPrimitive;

    fn f3() -> LocalField {
        LocalField::base(3)
    }

    #[test]
    fn volume_of_true_is_one() {
        let rep = volume(
            &Formula::True,
            AlgebraType::sp(2),
            &f3(),
            1,
            VolumeMode::Exhaustive,
        )
        .unwrap();
        assert_eq!(rep.lower_exact, BigRational::one());
        assert_eq!(rep.upper_exact, BigRational::one());
    }

    #[test]
    fn volume_of_deep_lattice() {
        // X in t g(O): all entries have ord >= 1; volume q^{-dim} = 1/27
        let f = parse("ord(x11) >= 1 && ord(x12) >= 1 && ord(x21) >= 1 && ord(x22) >= 1").unwrap();
        let rep = volume(&f, AlgebraType::sp(2), &f3(), 2, VolumeMode::Exhaustive).unwrap();
        assert_eq!(
            rep.lower_exact,
            BigRational::new(BigInt::from(1), BigInt::from(27))
        );
        assert_eq!(rep.unknown_count, 0);
    }

    #[test]
    fn partition_additivity_at_depth_zero() {
        let fld = f3();
        let alg = AlgebraType::sp(2);
        let pts = enumerate_s(alg, rat(0, 1), 3).unwrap();
        let total = volume(
            &Formula::Restricted { r: rat(0, 1) },
            alg,
            &fld,
            1,
            VolumeMode::Exhaustive,
        )
        .unwrap();
        let mut acc = BigRational::zero();
        for y in &pts {
            let rep = volume(&Formula::mu_fiber(y), alg, &fld, 1, VolumeMode::Exhaustive).unwrap();
            assert_eq!(rep.unknown_count, 0);
            acc += rep.lower_exact;
        }
        assert_eq!(acc, total.lower_exact);
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order(AlgebraType::sp(2), 3).unwrap(), 24);
        assert_eq!(group_order(AlgebraType::sp(2), 5).unwrap(), 120);
        assert_eq!(group_order(AlgebraType::so_odd(3), 3).unwrap(), 24);
        // so(2) with the hyperbolic form: q - 1
        assert_eq!(group_order(AlgebraType::so_even(2), 5).unwrap(), 4);
        // polynomial path agrees with enumeration where both apply
        assert_eq!(
            group_order_polynomial(AlgebraType::sp(2), 3),
            group_order(AlgebraType::sp(2), 3).unwrap()
        );
        assert_eq!(
            group_order_polynomial(AlgebraType::so_even(2), 5),
            group_order(AlgebraType::so_even(2), 5).unwrap()
        );
    }

    #[test]
    fn stable_orbital_split_and_nonsplit() {
        // sl2, r = 0, q = 3: square class gives 1/(q-1), nonsquare 1/(q+1)
        let fld = f3();
        let alg = AlgebraType::sp(2);
        let pts = enumerate_s(alg, rat(0, 1), 3).unwrap();
        assert_eq!(pts.len(), 2);
        let mut values = Vec::new();
        for y in &pts {
            let v = stable_orbital(y, alg, rat(0, 1), &fld, 1).unwrap();
            values.push(v.as_rational().unwrap());
        }
        values.sort();
        assert_eq!(
            values,
            vec![
                BigRational::new(BigInt::from(1), BigInt::from(4)),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
            ]
        );
    }

    #[test]
    fn fl_r0_trivial_pair() {
        // h = g realized as (sp(2), sp(2) + so(0))
        let fld = f3();
        let pair = EndoscopicPair::new(
            AlgebraType::sp(2),
            AlgebraType::sp(2),
            AlgebraType::so_even(0),
        )
        .unwrap();
        let report = fl_r0_check(&pair, &fld, 1).unwrap();
        assert!(report.all_pass);
        assert!(report.negative_control_failed);
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            let t = row.torus_order.unwrap();
            assert!(t == 2 || t == 4);
            // value = 1/|T|
            let expect = format!("1/{t}");
            assert_eq!(row.lhs, expect);
        }
    }

    #[test]
    fn stable_orbital_empty_fiber_is_zero() {
        // a non-even reduction is not the image of any sp(2) element
        let fld = f3();
        let alg = AlgebraType::sp(2);
        let ghost = SPoint::from_poly(
            alg,
            rat(0, 1),
            &crate::poly::FqPoly::from_ints(3, &[1, 1, 1]),
            None,
            None,
        );
        let v = stable_orbital(&ghost, alg, rat(0, 1), &fld, 1).unwrap();
        assert!(v.as_rational().unwrap().is_zero());
    }

    #[test]
    fn fl_r0_so3_identity_pair() {
        let fld = f3();
        let pair = EndoscopicPair::new(
            AlgebraType::so_odd(3),
            AlgebraType::so_odd(3),
            AlgebraType::so_odd(1),
        )
        .unwrap();
        let report = fl_r0_check(&pair, &fld, 1).unwrap();
        assert!(report.all_pass);
        assert!(report.negative_control_failed);
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            let t = row.torus_order.unwrap();
            assert!(t == 2 || t == 4);
            assert_eq!(row.lhs, format!("1/{t}"));
        }
    }

    #[test]
    fn qscaled_normalization() {
        let v = QScaled::new(BigRational::one(), 3, rat(3, 2));
        // one factor of q folds in, half remains
        assert_eq!(v.coeff, BigRational::from_integer(3.into()));
        assert_eq!(v.q_exp, rat(1, 2));
        assert!(v.as_rational().is_none());
        let w = QScaled::new(BigRational::one(), 3, rat(2, 1));
        assert_eq!(w.as_rational().unwrap(), BigRational::from_integer(9.into()));
    }

    #[test]
    fn montecarlo_brackets_exhaustive() {
        let fld = f3();
        let alg = AlgebraType::sp(2);
        let f = Formula::Restricted { r: rat(0, 1) };
        let exact = volume(&f, alg, &fld, 1, VolumeMode::Exhaustive)
            .unwrap()
            .lower_exact;
        let exact_f = exact.to_f64().unwrap();
        let mut hits = 0;
        let trials = 60;
        for seed in 0..trials {
            let rep = volume(
                &f,
                alg,
                &fld,
                1,
                VolumeMode::MonteCarlo {
                    samples: 400,
                    seed,
                },
            )
            .unwrap();
            let p = rep.true_count as f64 / rep.samples.unwrap() as f64;
            if (p - exact_f).abs() <= rep.confidence_radius.unwrap() {
                hits += 1;
            }
        }
        // seeded and deterministic; the frozen hit count clears 99%
        assert!(hits * 100 >= trials * 97, "hits = {hits}/{trials}");
    }
}
