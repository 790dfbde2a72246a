//! Literal parsers for the command line: polynomials in lambda with
//! t-polynomial coefficients, and matrices of t-expressions.
//!
//! The lambda symbol may be written `λ`, `lambda`, or `L`; exponents use
//! `^`. Multiplication is explicit (`2*t^2`), subtraction and parentheses
//! work as usual.

use std::collections::BTreeMap;

use ordlie::error::{Error, Result};
use ordlie::laurent::{LaurentNumber, LocalField};
use ordlie::matrix::Matrix;
use ordlie::poly::{FqPoly, LaurentPoly};

/// A sum of monomials c * lambda^a * t^b with integer coefficients.
#[derive(Debug, Clone, Default)]
pub struct SymPoly {
    terms: BTreeMap<(u32, u32), i64>,
}

impl SymPoly {
    fn constant(c: i64) -> Self {
        let mut p = SymPoly::default();
        if c != 0 {
            p.terms.insert((0, 0), c);
        }
        p
    }

    fn monomial(a: u32, b: u32) -> Self {
        let mut p = SymPoly::default();
        p.terms.insert((a, b), 1);
        p
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &v) in &rhs.terms {
            *out.terms.entry(k).or_insert(0) += v;
        }
        out.terms.retain(|_, v| *v != 0);
        out
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -*v;
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = SymPoly::default();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &rhs.terms {
                *out.terms.entry((a1 + a2, b1 + b2)).or_insert(0) += c1 * c2;
            }
        }
        out.terms.retain(|_, v| *v != 0);
        out
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = SymPoly::constant(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn lambda_degree(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    pub fn uses_lambda(&self) -> bool {
        self.lambda_degree() > 0
    }

    /// Convert to a polynomial over the local field; exact coefficients.
    pub fn to_laurent_poly(&self, fld: &LocalField) -> LaurentPoly {
        let n = self.lambda_degree() as usize;
        let mut coeffs = vec![fld.zero(); n + 1];
        for (&(a, b), &c) in &self.terms {
            let term = fld.from_int(c).t_shift(b as i64);
            coeffs[a as usize] = coeffs[a as usize].add(&term).expect("same field");
        }
        LaurentPoly::new(fld.clone(), coeffs)
    }

    /// Convert to a residue-field polynomial; t must not occur.
    pub fn to_fq_poly(&self, q: u64) -> Result<FqPoly> {
        let n = self.lambda_degree() as usize;
        let mut coeffs = vec![0i64; n + 1];
        for (&(a, b), &c) in &self.terms {
            if b > 0 {
                return Err(Error::InvalidArgument(
                    "residue-field polynomial cannot mention t".into(),
                ));
            }
            coeffs[a as usize] += c;
        }
        Ok(FqPoly::from_ints(q, &coeffs))
    }

    /// The value as a single Laurent number; lambda must not occur.
    pub fn to_laurent(&self, fld: &LocalField) -> Result<LaurentNumber> {
        if self.uses_lambda() {
            return Err(Error::InvalidArgument(
                "matrix entries cannot mention lambda".into(),
            ));
        }
        let mut acc = fld.zero();
        for (&(_, b), &c) in &self.terms {
            acc = acc
                .add(&fld.from_int(c).t_shift(b as i64))
                .expect("same field");
        }
        Ok(acc)
    }
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
}

impl Scanner {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn parse_uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn parse_expr(&mut self) -> Result<SymPoly> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.add(&self.parse_term()?);
                }
                Some('-') => {
                    self.bump();
                    acc = acc.add(&self.parse_term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<SymPoly> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = acc.mul(&self.parse_factor()?);
                }
                // implicit product before a symbol or parenthesis: 2t, 3λ^2
                Some(c) if c == '(' || c == 't' || is_lambda_start(c) => {
                    acc = acc.mul(&self.parse_factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<SymPoly> {
        let base = self.parse_atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let neg = if self.peek() == Some('-') {
                self.bump();
                true
            } else {
                false
            };
            let e = self.parse_uint()?;
            if neg {
                return Err(self.err("negative exponents are not supported in literals"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<SymPoly> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.parse_expr()?;
                if self.bump() != Some(')') {
                    return Err(self.err("expected )"));
                }
                Ok(e)
            }
            Some('-') => {
                self.bump();
                Ok(self.parse_atom()?.neg())
            }
            Some('t') => {
                self.bump();
                Ok(SymPoly::monomial(0, 1))
            }
            Some(c) if is_lambda_start(c) => {
                // λ, L, or the word lambda
                if c == 'l' {
                    let rest: String = self.chars[self.pos..].iter().take(6).collect();
                    if rest.starts_with("lambda") {
                        self.pos += 6;
                    } else {
                        return Err(self.err("unknown symbol (write lambda, λ, or L)"));
                    }
                } else {
                    self.bump();
                }
                Ok(SymPoly::monomial(1, 0))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.parse_uint()?;
                Ok(SymPoly::constant(v as i64))
            }
            Some(other) => Err(self.err(format!("unexpected character {other:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn is_lambda_start(c: char) -> bool {
    c == 'λ' || c == 'L' || c == 'l'
}

/// Parse a polynomial literal like `λ^6 - t^2` or `lambda^2 - (1+t)`.
pub fn parse_poly(src: &str) -> Result<SymPoly> {
    let mut s = Scanner {
        chars: src.chars().collect(),
        pos: 0,
    };
    let e = s.parse_expr()?;
    s.skip_ws();
    if s.pos != s.chars.len() {
        return Err(s.err("trailing input"));
    }
    Ok(e)
}

/// Parse a matrix literal `[[0, 1], [t, 0]]` of t-expressions.
pub fn parse_matrix(src: &str, fld: &LocalField) -> Result<Matrix<LaurentNumber>> {
    let mut s = Scanner {
        chars: src.chars().collect(),
        pos: 0,
    };
    if s.bump() != Some('[') {
        return Err(s.err("expected ["));
    }
    let mut rows: Vec<Vec<LaurentNumber>> = Vec::new();
    loop {
        if s.bump() != Some('[') {
            return Err(s.err("expected a row starting with ["));
        }
        let mut row = Vec::new();
        loop {
            let e = s.parse_expr()?;
            row.push(e.to_laurent(fld)?);
            match s.bump() {
                Some(',') => continue,
                Some(']') => break,
                _ => return Err(s.err("expected , or ] in a row")),
            }
        }
        rows.push(row);
        match s.bump() {
            Some(',') => continue,
            Some(']') => break,
            _ => return Err(s.err("expected , or ] after a row")),
        }
    }
    s.skip_ws();
    if s.pos != s.chars.len() {
        return Err(s.err("trailing input"));
    }
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != cols) || rows.len() != cols {
        return Err(Error::DimensionMismatch("matrix literal must be square".into()));
    }
    Ok(Matrix::from_rows(rows))
}

// ---------------------------------------------------------------------------
// pretty printing with balanced residues
// ---------------------------------------------------------------------------

fn balanced(v: u64, q: u64) -> i64 {
    if v * 2 > q {
        v as i64 - q as i64
    } else {
        v as i64
    }
}

/// Render a residue-field polynomial as `λ^2 - 1`.
pub fn pretty_fq_poly(p: &FqPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let q = p.q();
    let mut out = String::new();
    for k in (0..=p.degree()).rev() {
        let c = balanced(p.coeff(k).value(), q);
        if c == 0 {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else if c < 0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let body = match k {
            0 => format!("{mag}"),
            1 => {
                if mag == 1 {
                    "λ".into()
                } else {
                    format!("{mag}*λ")
                }
            }
            _ => {
                if mag == 1 {
                    format!("λ^{k}")
                } else {
                    format!("{mag}*λ^{k}")
                }
            }
        };
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Render an exact polynomial over the local field as `λ^2 - t`.
pub fn pretty_laurent_poly(p: &LaurentPoly) -> String {
    let fld = p.field().clone();
    let q = fld.q();
    let e = fld.e() as i64;
    let mut out = String::new();
    for k in (0..=p.degree()).rev() {
        let c = p.coeff(k);
        if !c.is_nonzero() {
            continue;
        }
        // collect the t-expansion of the coefficient
        let mut terms: Vec<(i64, i64)> = Vec::new(); // (t-exp, balanced value)
        let lo = match c.ord() {
            ordlie::laurent::OrdValue::Finite(v) => (v * num_rational::Ratio::from_integer(e))
                .to_integer(),
            _ => 0,
        };
        let hi = lo + 64;
        for s_exp in lo..hi {
            let Ok(coef) = c.coeff_s(s_exp) else { break };
            if let Some(p) = coef.as_prime() {
                if !p.is_zero() {
                    terms.push((s_exp, balanced(p.value(), q)));
                }
            }
            if c.is_exact() && s_exp > lo + 32 {
                break;
            }
        }
        if terms.is_empty() {
            continue;
        }
        let negated = terms.first().map(|&(_, v)| v < 0).unwrap_or(false);
        let body_terms: Vec<String> = terms
            .iter()
            .map(|&(s_exp, v)| {
                let v = if negated { -v } else { v };
                let mag = v.abs();
                let sign = if v < 0 { "-" } else { "" };
                if s_exp == 0 {
                    format!("{sign}{mag}")
                } else {
                    let texp = if e == 1 {
                        if s_exp == 1 {
                            "t".to_string()
                        } else {
                            format!("t^{s_exp}")
                        }
                    } else {
                        format!("t^({s_exp}/{e})")
                    };
                    if mag == 1 {
                        format!("{sign}{texp}")
                    } else {
                        format!("{sign}{mag}*{texp}")
                    }
                }
            })
            .collect();
        let joined = body_terms.join("+").replace("+-", "-");
        let body = if terms.len() > 1 {
            format!("({joined})")
        } else {
            joined
        };
        let is_one = body == "1";
        let lambda_part = match k {
            0 => body.clone(),
            1 => {
                if is_one {
                    "λ".into()
                } else {
                    format!("{body}*λ")
                }
            }
            _ => {
                if is_one {
                    format!("λ^{k}")
                } else {
                    format!("{body}*λ^{k}")
                }
            }
        };
        if out.is_empty() {
            if negated {
                out.push('-');
            }
        } else if negated {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&lambda_part);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_poly_literals() {
        let fld = LocalField::base(5);
        let p = parse_poly("λ^6 - t^2").unwrap().to_laurent_poly(&fld);
        assert_eq!(p.degree(), 6);
        assert_eq!(p.coeff(0), fld.from_t_coeffs(0, &[0, 0, -1], None));
        let p = parse_poly("lambda^2 - (1+t)").unwrap().to_laurent_poly(&fld);
        assert_eq!(p.coeff(0), fld.from_t_coeffs(0, &[-1, -1], None));
        let p = parse_poly("L - 1").unwrap().to_fq_poly(3).unwrap();
        assert_eq!(p, FqPoly::from_ints(3, &[-1, 1]));
    }

    #[test]
    fn parse_matrix_literals() {
        let fld = LocalField::base(3);
        let m = parse_matrix("[[0, 1], [t, 0]]", &fld).unwrap();
        assert_eq!(m.at(1, 0), &fld.t_pow(1));
        assert!(parse_matrix("[[0, 1]]", &fld).is_err());
    }

    #[test]
    fn pretty_printing() {
        assert_eq!(pretty_fq_poly(&FqPoly::from_ints(5, &[-1, 0, 1])), "λ^2 - 1");
        assert_eq!(pretty_fq_poly(&FqPoly::from_ints(3, &[1, 2])), "-λ + 1");
        let fld = LocalField::base(3);
        let p = parse_poly("λ^2 - t").unwrap().to_laurent_poly(&fld);
        assert_eq!(pretty_laurent_poly(&p), "λ^2 - t");
        let p = parse_poly("λ^4 - t^2").unwrap().to_laurent_poly(&fld);
        assert_eq!(pretty_laurent_poly(&p), "λ^4 - t^2");
        let p = parse_poly("λ^2 - (1+t)").unwrap().to_laurent_poly(&fld);
        assert_eq!(pretty_laurent_poly(&p), "λ^2 - (1+t)");
    }
}
