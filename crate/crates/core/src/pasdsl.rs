//! A quantifier-free predicate language over the truncated field model,
//! with a three-valued evaluator. This is the front end of allowed volume
//! integrands: valuation comparisons, residue equations, and the built-in
//! classification predicates.
//!
//! Grammar (LL(1); `I`, `J` single digits; integers may be negative):
//!
//! ```text
//! formula  := or
//! or       := and ('||' and)*
//! and      := unary ('&&' unary)*
//! unary    := '!' unary | atom
//! atom     := 'true' | 'false' | '(' formula ')'
//!           | 'ord' '(' term ')' cmp rational
//!           | 'ac' '(' term ')' eq int
//!           | 'res' '[' rational ']' '(' term ')' eq int
//!           | 'member' | 'restricted' '(' rational ')'
//!           | 'mu_eq' '(' spoint ')' | 'pfaff_ac_eq' '(' int ')'
//! term     := 'x'IJ | 'alpha' '[' int ']' '(' 'X' ')'
//! cmp      := '==' | '=' | '<=' | '<' | '>=' | '>' | '!='
//! spoint   := '{' 'r' ':' rational ',' 'R' ':' '[' int,* ']'
//!                  (',' ('pf' | 'v') ':' int)? '}'
//! rational := int ('/' int)?
//! ```
//!
//! Booleans and valued-field terms never mix: `ord(X) && 3` is a sort
//! error, reported with its position.

use std::fmt;

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::laurent::{rat, LaurentNumber, LocalField, OrdValue, Rat};
use crate::lie::{
    form_matrix, is_restricted, lattice_element, lift_int_matrix, membership, nonzero_part_charpoly,
    pfaffian_laurent, AlgebraType, Family, LieElement, MembershipCheck, RestrictedOutcome,
};
use crate::logic::Trilean;
use crate::params::{mu, SPoint};

pub type EvalResult = Trilean;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        };
        write!(f, "{s}")
    }
}

/// Valued-field terms: matrix entries (1-indexed) and characteristic
/// polynomial coefficients alpha_j of the nonzero part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Entry(usize, usize),
    Alpha(usize),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Entry(i, j) => write!(f, "x{i}{j}"),
            Term::Alpha(j) => write!(f, "alpha[{j}](X)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    True,
    False,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    OrdCmp {
        term: Term,
        op: CmpOp,
        bound: Rat,
    },
    AcEq {
        term: Term,
        lit: i64,
    },
    ResEq {
        term: Term,
        at: Rat,
        lit: i64,
    },
    Member,
    Restricted {
        r: Rat,
    },
    MuEq {
        r: Rat,
        red: Vec<i64>,
        pf: Option<i64>,
        v: Option<i64>,
    },
    PfaffAcEq {
        lit: i64,
    },
}

impl Formula {
    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    /// The fiber predicate restricted(r) && mu_eq(y).
    pub fn mu_fiber(y: &SPoint) -> Formula {
        let red: Vec<i64> = y.red_coeffs.iter().map(|&c| c as i64).collect();
        Formula::Restricted { r: y.r }.and(Formula::MuEq {
            r: y.r,
            red,
            pf: y.pfaff.map(|v| v as i64),
            v: y.v.map(|v| v as i64),
        })
    }
}

fn fmt_rat(r: Rat) -> String {
    if r.is_integer() {
        format!("{}", r.to_integer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::And(a, b) => write!(f, "({a} && {b})"),
            Formula::Or(a, b) => write!(f, "({a} || {b})"),
            Formula::Not(a) => write!(f, "!({a})"),
            Formula::OrdCmp { term, op, bound } => {
                write!(f, "ord({term}) {op} {}", fmt_rat(*bound))
            }
            Formula::AcEq { term, lit } => write!(f, "ac({term}) == {lit}"),
            Formula::ResEq { term, at, lit } => {
                write!(f, "res[{}]({term}) == {lit}", fmt_rat(*at))
            }
            Formula::Member => write!(f, "member"),
            Formula::Restricted { r } => write!(f, "restricted({})", fmt_rat(*r)),
            Formula::MuEq { r, red, pf, v } => {
                write!(f, "mu_eq({{r: {}, R: [", fmt_rat(*r))?;
                for (i, c) in red.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")?;
                if let Some(p) = pf {
                    write!(f, ", pf: {p}")?;
                }
                if let Some(vv) = v {
                    write!(f, ", v: {vv}")?;
                }
                write!(f, "}})")
            }
            Formula::PfaffAcEq { lit } => write!(f, "pfaff_ac_eq({lit})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Slash,
    AndAnd,
    OrOr,
    Bang,
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let bump = |i: &mut usize, col: &mut usize| {
            *i += 1;
            *col += 1;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => bump(&mut i, &mut col),
            '#' => {
                // comment to end of line
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            '[' => {
                out.push(Spanned { tok: Tok::LBracket, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            ']' => {
                out.push(Spanned { tok: Tok::RBracket, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            '{' => {
                out.push(Spanned { tok: Tok::LBrace, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            '}' => {
                out.push(Spanned { tok: Tok::RBrace, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            ':' => {
                out.push(Spanned { tok: Tok::Colon, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            '/' => {
                out.push(Spanned { tok: Tok::Slash, line: l0, col: c0 });
                bump(&mut i, &mut col);
            }
            '&' => {
                if chars.get(i + 1) == Some(&'&') {
                    out.push(Spanned { tok: Tok::AndAnd, line: l0, col: c0 });
                    i += 2;
                    col += 2;
                } else {
                    return Err(Error::Parse {
                        line: l0,
                        col: c0,
                        msg: "expected &&".into(),
                    });
                }
            }
            '|' => {
                if chars.get(i + 1) == Some(&'|') {
                    out.push(Spanned { tok: Tok::OrOr, line: l0, col: c0 });
                    i += 2;
                    col += 2;
                } else {
                    return Err(Error::Parse {
                        line: l0,
                        col: c0,
                        msg: "expected ||".into(),
                    });
                }
            }
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(Spanned { tok: Tok::Ne, line: l0, col: c0 });
                    i += 2;
                    col += 2;
                } else {
                    out.push(Spanned { tok: Tok::Bang, line: l0, col: c0 });
                    bump(&mut i, &mut col);
                }
            }
            '=' => {
                if chars.get(i + 1) == Some(&'=') {
                    i += 2;
                    col += 2;
                } else {
                    i += 1;
                    col += 1;
                }
                out.push(Spanned { tok: Tok::Eq, line: l0, col: c0 });
            }
            '<' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(Spanned { tok: Tok::Le, line: l0, col: c0 });
                    i += 2;
                    col += 2;
                } else {
                    out.push(Spanned { tok: Tok::Lt, line: l0, col: c0 });
                    bump(&mut i, &mut col);
                }
            }
            '>' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(Spanned { tok: Tok::Ge, line: l0, col: c0 });
                    i += 2;
                    col += 2;
                } else {
                    out.push(Spanned { tok: Tok::Gt, line: l0, col: c0 });
                    bump(&mut i, &mut col);
                }
            }
            '-' => {
                // negative integer literal
                let mut j = i + 1;
                let mut val: i64 = 0;
                let mut any = false;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    val = val * 10 + (chars[j] as i64 - '0' as i64);
                    j += 1;
                    any = true;
                }
                if !any {
                    return Err(Error::Parse {
                        line: l0,
                        col: c0,
                        msg: "dangling minus".into(),
                    });
                }
                out.push(Spanned {
                    tok: Tok::Int(-val),
                    line: l0,
                    col: c0,
                });
                col += j - i;
                i = j;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                let mut val: i64 = 0;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    val = val * 10 + (chars[j] as i64 - '0' as i64);
                    j += 1;
                }
                out.push(Spanned {
                    tok: Tok::Int(val),
                    line: l0,
                    col: c0,
                });
                col += j - i;
                i = j;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let mut j = i;
                let mut s = String::new();
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    s.push(chars[j]);
                    j += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: l0,
                    col: c0,
                });
                col += j - i;
                i = j;
            }
            other => {
                return Err(Error::Parse {
                    line: l0,
                    col: c0,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn sort_err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Sort {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.next() {
            Some(s) if s.tok == want => Ok(()),
            Some(s) => Err(Error::Parse {
                line: s.line,
                col: s.col,
                msg: format!("expected {what}, found {:?}", s.tok),
            }),
            None => Err(self.err(format!("expected {what}, found end of input"))),
        }
    }

    fn parse_int(&mut self) -> Result<i64> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Int(v), ..
            }) => Ok(v),
            Some(s) => Err(Error::Parse {
                line: s.line,
                col: s.col,
                msg: format!("expected an integer, found {:?}", s.tok),
            }),
            None => Err(self.err("expected an integer, found end of input")),
        }
    }

    fn parse_rational(&mut self) -> Result<Rat> {
        let n = self.parse_int()?;
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Slash)) {
            self.next();
            let d = self.parse_int()?;
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(rat(n, d))
        } else {
            Ok(rat(n, 1))
        }
    }

    fn parse_term(&mut self) -> Result<Term> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(s),
                line,
                col,
            }) => {
                if s == "X" {
                    return Err(Error::Sort {
                        line,
                        col,
                        msg: "the bare matrix symbol X is not a valued-field term".into(),
                    });
                }
                if s == "alpha" {
                    self.expect(Tok::LBracket, "[")?;
                    let j = self.parse_int()?;
                    if j < 0 {
                        return Err(self.err("alpha index must be nonnegative"));
                    }
                    self.expect(Tok::RBracket, "]")?;
                    self.expect(Tok::LParen, "(")?;
                    match self.next() {
                        Some(Spanned {
                            tok: Tok::Ident(x), ..
                        }) if x == "X" => {}
                        _ => return Err(self.err("alpha[..] applies to the matrix symbol X")),
                    }
                    self.expect(Tok::RParen, ")")?;
                    return Ok(Term::Alpha(j as usize));
                }
                // entries: x followed by two digits
                let bytes: Vec<char> = s.chars().collect();
                if bytes.len() == 3
                    && bytes[0] == 'x'
                    && bytes[1].is_ascii_digit()
                    && bytes[2].is_ascii_digit()
                {
                    let i = bytes[1] as usize - '0' as usize;
                    let j = bytes[2] as usize - '0' as usize;
                    if i == 0 || j == 0 {
                        return Err(Error::Parse {
                            line,
                            col,
                            msg: "matrix entries are 1-indexed".into(),
                        });
                    }
                    return Ok(Term::Entry(i, j));
                }
                Err(Error::Sort {
                    line,
                    col,
                    msg: format!("{s} is not a valued-field term"),
                })
            }
            Some(s) => Err(Error::Sort {
                line: s.line,
                col: s.col,
                msg: format!("expected a valued-field term, found {:?}", s.tok),
            }),
            None => Err(self.err("expected a term, found end of input")),
        }
    }

    fn parse_cmp(&mut self) -> Result<CmpOp> {
        match self.next() {
            Some(s) => match s.tok {
                Tok::Eq => Ok(CmpOp::Eq),
                Tok::Ne => Ok(CmpOp::Ne),
                Tok::Le => Ok(CmpOp::Le),
                Tok::Lt => Ok(CmpOp::Lt),
                Tok::Ge => Ok(CmpOp::Ge),
                Tok::Gt => Ok(CmpOp::Gt),
                other => Err(Error::Parse {
                    line: s.line,
                    col: s.col,
                    msg: format!("expected a comparison, found {other:?}"),
                }),
            },
            None => Err(self.err("expected a comparison, found end of input")),
        }
    }

    fn parse_spoint(&mut self) -> Result<Formula> {
        self.expect(Tok::LBrace, "{")?;
        let key = match self.next() {
            Some(Spanned {
                tok: Tok::Ident(s), ..
            }) => s,
            _ => return Err(self.err("expected the key r")),
        };
        if key != "r" {
            return Err(self.err("mu_eq literal must start with r:"));
        }
        self.expect(Tok::Colon, ":")?;
        let r = self.parse_rational()?;
        self.expect(Tok::Comma, ",")?;
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(s), ..
            }) if s == "R" => {}
            _ => return Err(self.err("expected the key R")),
        }
        self.expect(Tok::Colon, ":")?;
        self.expect(Tok::LBracket, "[")?;
        let mut red = Vec::new();
        if !matches!(self.peek().map(|s| &s.tok), Some(Tok::RBracket)) {
            loop {
                red.push(self.parse_int()?);
                if matches!(self.peek().map(|s| &s.tok), Some(Tok::Comma)) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket, "]")?;
        let mut pf = None;
        let mut v = None;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::Comma)) {
            self.next();
            let key = match self.next() {
                Some(Spanned {
                    tok: Tok::Ident(s), ..
                }) => s,
                _ => return Err(self.err("expected pf or v")),
            };
            self.expect(Tok::Colon, ":")?;
            let val = self.parse_int()?;
            match key.as_str() {
                "pf" => pf = Some(val),
                "v" => v = Some(val),
                other => return Err(self.err(format!("unknown key {other}"))),
            }
        }
        self.expect(Tok::RBrace, "}")?;
        Ok(Formula::MuEq { r, red, pf, v })
    }

    fn parse_atom(&mut self) -> Result<Formula> {
        let Some(s) = self.peek().cloned() else {
            return Err(self.err("expected a formula, found end of input"));
        };
        match s.tok {
            Tok::LParen => {
                self.next();
                let f = self.parse_or()?;
                self.expect(Tok::RParen, ")")?;
                Ok(f)
            }
            Tok::Bang => {
                self.next();
                Ok(self.parse_atom()?.negate())
            }
            Tok::Int(v) => Err(Error::Sort {
                line: s.line,
                col: s.col,
                msg: format!("expected a formula, found the number {v}"),
            }),
            Tok::Ident(name) => match name.as_str() {
                "true" => {
                    self.next();
                    Ok(Formula::True)
                }
                "false" => {
                    self.next();
                    Ok(Formula::False)
                }
                "member" => {
                    self.next();
                    Ok(Formula::Member)
                }
                "ord" => {
                    self.next();
                    self.expect(Tok::LParen, "(")?;
                    let term = self.parse_term()?;
                    self.expect(Tok::RParen, ")")?;
                    let op = self.parse_cmp()?;
                    let bound = self.parse_rational()?;
                    Ok(Formula::OrdCmp { term, op, bound })
                }
                "ac" => {
                    self.next();
                    self.expect(Tok::LParen, "(")?;
                    let term = self.parse_term()?;
                    self.expect(Tok::RParen, ")")?;
                    match self.parse_cmp()? {
                        CmpOp::Eq => {}
                        other => {
                            return Err(self.sort_err(format!(
                                "residue equations use ==, found {other}"
                            )))
                        }
                    }
                    let lit = self.parse_int()?;
                    Ok(Formula::AcEq { term, lit })
                }
                "res" => {
                    self.next();
                    self.expect(Tok::LBracket, "[")?;
                    let at = self.parse_rational()?;
                    self.expect(Tok::RBracket, "]")?;
                    self.expect(Tok::LParen, "(")?;
                    let term = self.parse_term()?;
                    self.expect(Tok::RParen, ")")?;
                    match self.parse_cmp()? {
                        CmpOp::Eq => {}
                        other => {
                            return Err(self.sort_err(format!(
                                "residue equations use ==, found {other}"
                            )))
                        }
                    }
                    let lit = self.parse_int()?;
                    Ok(Formula::ResEq { term, at, lit })
                }
                "restricted" => {
                    self.next();
                    self.expect(Tok::LParen, "(")?;
                    let r = self.parse_rational()?;
                    self.expect(Tok::RParen, ")")?;
                    Ok(Formula::Restricted { r })
                }
                "mu_eq" => {
                    self.next();
                    self.expect(Tok::LParen, "(")?;
                    let f = self.parse_spoint()?;
                    self.expect(Tok::RParen, ")")?;
                    Ok(f)
                }
                "pfaff_ac_eq" => {
                    self.next();
                    self.expect(Tok::LParen, "(")?;
                    let lit = self.parse_int()?;
                    self.expect(Tok::RParen, ")")?;
                    Ok(Formula::PfaffAcEq { lit })
                }
                other => Err(Error::Parse {
                    line: s.line,
                    col: s.col,
                    msg: format!("unknown predicate {other}"),
                }),
            },
            other => Err(Error::Parse {
                line: s.line,
                col: s.col,
                msg: format!("expected a formula, found {other:?}"),
            }),
        }
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut f = self.parse_atom()?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::AndAnd)) {
            self.next();
            let rhs = self.parse_atom()?;
            f = f.and(rhs);
        }
        Ok(f)
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut f = self.parse_and()?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::OrOr)) {
            self.next();
            let rhs = self.parse_and()?;
            f = f.or(rhs);
        }
        Ok(f)
    }
}

/// Parse a formula from source text.
pub fn parse(src: &str) -> Result<Formula> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.parse_or()?;
    if let Some(s) = p.peek() {
        return Err(Error::Parse {
            line: s.line,
            col: s.col,
            msg: format!("trailing input starting at {:?}", s.tok),
        });
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

fn eval_term(term: &Term, x: &LieElement) -> Result<LaurentNumber> {
    match term {
        Term::Entry(i, j) => {
            let d = x.alg.d();
            if *i > d || *j > d {
                return Err(Error::InvalidArgument(format!(
                    "entry x{i}{j} outside a {d}x{d} matrix"
                )));
            }
            Ok(x.mat.at(i - 1, j - 1).clone())
        }
        Term::Alpha(j) => {
            let (p, _) = nonzero_part_charpoly(x)?;
            if *j > p.degree() {
                return Err(Error::InvalidArgument(format!(
                    "alpha[{j}] beyond degree {}",
                    p.degree()
                )));
            }
            Ok(p.alpha(*j))
        }
    }
}

fn eval_ord_cmp(v: &LaurentNumber, op: CmpOp, bound: Rat) -> Trilean {
    use Trilean::*;
    match v.ord() {
        OrdValue::Finite(o) => Trilean::from_bool(match op {
            CmpOp::Eq => o == bound,
            CmpOp::Ne => o != bound,
            CmpOp::Le => o <= bound,
            CmpOp::Lt => o < bound,
            CmpOp::Ge => o >= bound,
            CmpOp::Gt => o > bound,
        }),
        OrdValue::Infinite => Trilean::from_bool(match op {
            CmpOp::Eq => false,
            CmpOp::Ne => true,
            CmpOp::Le => false,
            CmpOp::Lt => false,
            CmpOp::Ge => true,
            CmpOp::Gt => true,
        }),
        OrdValue::AtLeast(b) => match op {
            // true ord lies somewhere in [b, +inf]
            CmpOp::Ge => {
                if b >= bound {
                    True
                } else {
                    Unknown
                }
            }
            CmpOp::Gt => {
                if b > bound {
                    True
                } else {
                    Unknown
                }
            }
            CmpOp::Eq => {
                if b > bound {
                    False
                } else {
                    Unknown
                }
            }
            CmpOp::Ne => {
                if b > bound {
                    True
                } else {
                    Unknown
                }
            }
            CmpOp::Lt => {
                if b >= bound {
                    False
                } else {
                    Unknown
                }
            }
            CmpOp::Le => {
                if b > bound {
                    False
                } else {
                    Unknown
                }
            }
        },
    }
}

/// Three-valued evaluation at the element's stored precision. Precision
/// exhaustion inside an atom yields Unknown; genuine usage errors
/// (mismatched dimensions and the like) propagate.
pub fn eval(f: &Formula, x: &LieElement) -> Result<Trilean> {
    use Trilean::*;
    Ok(match f {
        Formula::True => True,
        Formula::False => False,
        Formula::And(a, b) => {
            let ea = eval(a, x)?;
            if ea == False {
                // short-circuit keeps Kleene semantics: False dominates
                False
            } else {
                ea.and(eval(b, x)?)
            }
        }
        Formula::Or(a, b) => {
            let ea = eval(a, x)?;
            if ea == True {
                True
            } else {
                ea.or(eval(b, x)?)
            }
        }
        Formula::Not(a) => eval(a, x)?.not(),
        Formula::OrdCmp { term, op, bound } => {
            let v = match eval_term(term, x) {
                Ok(v) => v,
                Err(e) if e.is_precision() => return Ok(Unknown),
                Err(e) => return Err(e),
            };
            eval_ord_cmp(&v, *op, *bound)
        }
        Formula::AcEq { term, lit } => {
            let v = match eval_term(term, x) {
                Ok(v) => v,
                Err(e) if e.is_precision() => return Ok(Unknown),
                Err(e) => return Err(e),
            };
            match v.ac() {
                Ok(a) => {
                    let want = x.field().residue_field().from_int(*lit);
                    Trilean::from_bool(a == want)
                }
                Err(e) if e.is_precision() => Unknown,
                Err(e) => return Err(e),
            }
        }
        Formula::ResEq { term, at, lit } => {
            let v = match eval_term(term, x) {
                Ok(v) => v,
                Err(e) if e.is_precision() => return Ok(Unknown),
                Err(e) => return Err(e),
            };
            match v.res_at(*at) {
                Ok(a) => {
                    let want = x.field().residue_field().from_int(*lit);
                    Trilean::from_bool(a == want)
                }
                Err(e) if e.is_precision() => Unknown,
                Err(e) => return Err(e),
            }
        }
        Formula::Member => match membership(&x.mat, &form_matrix(x.alg))? {
            MembershipCheck::Violated => False,
            _ => True,
        },
        Formula::Restricted { r } => match is_restricted(x, *r) {
            Ok(RestrictedOutcome::Accepted(_)) => True,
            Ok(RestrictedOutcome::Rejected(_)) => False,
            Err(e) if e.is_precision() => Unknown,
            Err(e) => return Err(e),
        },
        Formula::MuEq { r, red, pf, v } => match mu(x, *r) {
            Ok(point) => {
                let q = x.field().q() as i64;
                let norm =
                    |vals: &[i64]| -> Vec<u64> { vals.iter().map(|&c| c.rem_euclid(q) as u64).collect() };
                let same = point.red_coeffs == norm(red)
                    && point.pfaff == pf.map(|p| p.rem_euclid(q) as u64)
                    && point.v == v.map(|p| p.rem_euclid(q) as u64);
                Trilean::from_bool(same)
            }
            Err(Error::NotRestricted(_)) => False,
            Err(e) if e.is_precision() => Unknown,
            Err(e) => return Err(e),
        },
        Formula::PfaffAcEq { lit } => {
            if x.alg.family != Family::SoEven {
                return Err(Error::InvalidArgument(
                    "pfaff_ac_eq applies to even orthogonal elements".into(),
                ));
            }
            let fld = x.field().clone();
            let jl = lift_int_matrix(&form_matrix(x.alg), &fld);
            let pf = pfaffian_laurent(&jl.mul(&x.mat))?;
            match pf.ac() {
                Ok(a) => {
                    let want = fld.residue_field().from_int(*lit);
                    Trilean::from_bool(a == want)
                }
                Err(e) if e.is_precision() => Unknown,
                Err(e) => return Err(e),
            }
        }
    })
}

// ---------------------------------------------------------------------------
// Level probe
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct ProbeConfig {
    /// Sample pairs per candidate level.
    pub trials: u32,
    /// Give up past this level.
    pub max_level: u32,
    /// Working precision of the sampled elements (must exceed max_level).
    pub k: u32,
    pub seed: u64,
}

/// Smallest level M at which no sampled pair agreeing modulo t^M disagrees
/// on the formula. This is an empirical lower-bound certificate for the
/// local-constancy level, never a proof.
pub fn level_probe(
    f: &Formula,
    alg: AlgebraType,
    fld: &LocalField,
    cfg: ProbeConfig,
) -> Result<usize> {
    if cfg.k <= cfg.max_level {
        return Err(Error::InvalidArgument(
            "probe precision must exceed the maximum level".into(),
        ));
    }
    let q = fld.q();
    let dim = alg.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    'levels: for m in 0..=cfg.max_level {
        for _ in 0..cfg.trials {
            // X random in g(O) at precision k
            let mut digits = vec![0i64; dim * cfg.k as usize];
            for d in digits.iter_mut() {
                *d = rng.gen_range(0..q) as i64;
            }
            // delta in t^m g(O), nonzero at level m to stress the boundary
            let mut delta = vec![0i64; dim * cfg.k as usize];
            for (pos, d) in delta.iter_mut().enumerate() {
                if (pos % cfg.k as usize) >= m as usize {
                    *d = rng.gen_range(0..q) as i64;
                }
            }
            let x = assemble(alg, fld, cfg.k, &digits);
            let xd = assemble_sum(alg, fld, cfg.k, &digits, &delta);
            let a = eval(f, &x)?;
            let b = eval(f, &xd)?;
            if let (Some(va), Some(vb)) = (a.decided(), b.decided()) {
                if va != vb {
                    continue 'levels;
                }
            }
        }
        return Ok(m as usize);
    }
    Err(Error::ProbeExhausted(cfg.max_level as usize))
}

fn assemble(alg: AlgebraType, fld: &LocalField, k: u32, digits: &[i64]) -> LieElement {
    let basis = crate::lie::algebra_basis(alg);
    let d = alg.d();
    let mut mat =
        crate::matrix::Matrix::zero_like(d, d, &fld.zero_at_prec_s(k as i64));
    for (bi, b) in basis.iter().enumerate() {
        let slice = &digits[bi * k as usize..(bi + 1) * k as usize];
        let coeff = fld.from_t_coeffs(0, slice, Some(k as i64));
        for i in 0..d {
            for j in 0..d {
                let v = *b.at(i, j);
                if v != 0 {
                    let add = coeff.mul(&fld.from_int(v)).expect("same field");
                    let cur = mat.at(i, j).clone();
                    mat.set(i, j, cur.add(&add).expect("same field"));
                }
            }
        }
    }
    LieElement { alg, mat }
}

fn assemble_sum(
    alg: AlgebraType,
    fld: &LocalField,
    k: u32,
    digits: &[i64],
    delta: &[i64],
) -> LieElement {
    let summed: Vec<i64> = digits.iter().zip(delta).map(|(a, b)| a + b).collect();
    assemble(alg, fld, k, &summed)
}

/// Convenience: the `index`-th lattice point (shared with the volume
/// engine's ordering).
pub fn lattice_point(alg: AlgebraType, fld: &LocalField, k: u32, index: u128) -> LieElement {
    lattice_element(alg, fld, k, index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn f3() -> LocalField {
        LocalField::base(3)
    }

    fn fixture_depth0(fld: &LocalField, prec: Option<i64>) -> LieElement {
        let mk = |coeffs: &[i64]| fld.from_t_coeffs(0, coeffs, prec);
        LieElement::new(
            AlgebraType::sp(2),
            Matrix::from_rows(vec![
                vec![mk(&[0]), mk(&[1])],
                vec![mk(&[1]), mk(&[0])],
            ]),
        )
        .unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = parse("ord(alpha[2](X)) >= 1 && ac(alpha[2](X)) == 2").unwrap();
        match &f {
            Formula::And(a, b) => {
                assert!(matches!(**a, Formula::OrdCmp { .. }));
                assert!(matches!(**b, Formula::AcEq { .. }));
            }
            other => panic!("unexpected shape {other:?}"),
        }
        let f = parse("restricted(1/2) && mu_eq({r: 1/2, R: [2]})").unwrap();
        assert!(matches!(f, Formula::And(..)));
    }

    #[test]
    fn sort_errors() {
        assert!(matches!(parse("ord(X) && 3"), Err(Error::Sort { .. })));
        assert!(matches!(parse("true && 3"), Err(Error::Sort { .. })));
    }

    #[test]
    fn parse_error_positions() {
        match parse("ord(x11) >=") {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col >= 10);
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn print_parse_roundtrip() {
        let corpus = [
            "true",
            "(ord(x11) >= 1 && ord(x12) < 2)",
            "!(ac(x21) == 2)",
            "(restricted(1/2) && mu_eq({r: 1/2, R: [2], pf: 1}))",
            "(member || res[1](alpha[2](X)) == 1)",
            "pfaff_ac_eq(2)",
        ];
        for src in corpus {
            let f = parse(src).unwrap();
            let printed = format!("{f}");
            let g = parse(&printed).unwrap();
            assert_eq!(f, g, "roundtrip failed for {src}");
        }
    }

    #[test]
    fn eval_ord_atoms() {
        let fld = f3();
        let x = fixture_depth0(&fld, None);
        let f = parse("ord(x12) == 0").unwrap();
        assert_eq!(eval(&f, &x).unwrap(), Trilean::True);
        // x11 = 0 exactly here: ord >= 5 is decided true on exact input
        let f = parse("ord(x11) >= 5").unwrap();
        assert_eq!(eval(&f, &x).unwrap(), Trilean::True);
        // with a precision-3 window it is unknown
        let xw = fixture_depth0(&fld, Some(3));
        assert_eq!(eval(&f, &xw).unwrap(), Trilean::Unknown);
    }

    #[test]
    fn eval_restricted_fixture() {
        let fld = f3();
        let x = fixture_depth0(&fld, Some(2));
        let f = parse("restricted(0)").unwrap();
        assert_eq!(eval(&f, &x).unwrap(), Trilean::True);
        let f = parse("restricted(1/2)").unwrap();
        assert_eq!(eval(&f, &x).unwrap(), Trilean::False);
    }

    #[test]
    fn eval_mu_eq() {
        let fld = f3();
        let x = fixture_depth0(&fld, Some(2));
        let f = parse("mu_eq({r: 0, R: [-1, 0]})").unwrap();
        assert_eq!(eval(&f, &x).unwrap(), Trilean::True);
        let f = parse("mu_eq({r: 0, R: [1, 0]})").unwrap();
        assert_eq!(eval(&f, &x).unwrap(), Trilean::False);
    }

    #[test]
    fn kleene_monotonicity_under_refinement() {
        // deciding atoms never flip when precision increases
        let fld = f3();
        let formulas = [
            parse("ord(x11) >= 2").unwrap(),
            parse("restricted(0)").unwrap(),
            parse("ac(x12) == 1 && ord(x21) > 0").unwrap(),
        ];
        for idx in 0..crate::lie::lattice_size(AlgebraType::sp(2), 3, 1) {
            // the K = 1 representative, then the same digits at K = 3
            let x1 = lattice_point(AlgebraType::sp(2), &fld, 1, idx);
            // re-embed: digits extend with zeros
            let x3 = {
                let mut digs = Vec::new();
                let mut rem = idx;
                for _ in 0..3 {
                    digs.push((rem % 3) as i64);
                    digs.push(0);
                    digs.push(0);
                    rem /= 3;
                }
                assemble(AlgebraType::sp(2), &fld, 3, &digs)
            };
            for f in &formulas {
                let lo = eval(f, &x1).unwrap();
                let hi = eval(f, &x3).unwrap();
                if let Some(v) = lo.decided() {
                    assert_eq!(Some(v), hi.decided(), "flip under refinement for {f}");
                }
            }
        }
    }

    #[test]
    fn level_probe_examples() {
        let fld = f3();
        let cfg = ProbeConfig {
            trials: 80,
            max_level: 4,
            k: 5,
            seed: 7,
        };
        let f = parse("ord(x11) == 0").unwrap();
        assert_eq!(level_probe(&f, AlgebraType::sp(2), &fld, cfg).unwrap(), 1);
        let f = parse("restricted(0)").unwrap();
        assert_eq!(level_probe(&f, AlgebraType::sp(2), &fld, cfg).unwrap(), 1);
        let f = parse("restricted(1/2)").unwrap();
        assert_eq!(level_probe(&f, AlgebraType::sp(2), &fld, cfg).unwrap(), 2);
    }

    #[test]
    fn delegation_matches_is_restricted() {
        let fld = f3();
        let f = parse("restricted(0)").unwrap();
        for idx in 0..crate::lie::lattice_size(AlgebraType::sp(2), 3, 2) {
            let x = lattice_point(AlgebraType::sp(2), &fld, 2, idx);
            let via_dsl = eval(&f, &x).unwrap();
            let direct = is_restricted(&x, rat(0, 1)).unwrap();
            assert_eq!(via_dsl.is_true(), direct.is_accepted());
        }
    }
}
