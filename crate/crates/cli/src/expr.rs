//! Expression language for graded polynomials and multiderivations.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := rational ('*' factor)* | factor ('*' factor)*
//! factor := atom ('^' nat)*
//! atom   := var | deriv | '(' expr ')'
//! ```
//!
//! Within a product, coefficient factors must precede derivation symbols.

use std::fmt;

use graded_poisson::schouten::MultiDerivation;
use graded_poisson::{AlgebraSignature, GradedPolynomial, Rational, Var};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("illegal power at {pos}: {msg}")]
    IllegalPower { pos: usize, msg: String },
    #[error("expected a polynomial at {pos}, found a derivation")]
    NotPolynomial { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::IllegalPower { pos, .. }
            | ParseError::NotPolynomial { pos } => *pos,
        }
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

fn lex(text: &str) -> PResult<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            out.push((pos, Tok::Num(chars[start..i].iter().map(|p| p.1).collect())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|p| p.1).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

/// Parsed expression tree; positions are byte offsets into the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Number(Rational),
    Variable { var: Var, pos: usize },
    Derivation { var: Var, pos: usize },
    Neg(Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>, usize),
    Power(Box<Expr>, u32, usize),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    sig: &'a AlgebraSignature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Sum(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sum(Box::new(lhs), Box::new(Expr::Neg(Box::new(self.term()?))));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = match self.peek() {
            Tok::Num(_) => self.rational()?,
            _ => self.factor()?,
        };
        while *self.peek() == Tok::Sym('*') {
            let pos = self.pos();
            self.bump();
            lhs = Expr::Product(Box::new(lhs), Box::new(self.factor()?), pos);
        }
        Ok(lhs)
    }

    fn natural(&mut self) -> PResult<(usize, String)> {
        match self.bump() {
            (p, Tok::Num(s)) => Ok((p, s)),
            (p, t) => Err(ParseError::Syntax { pos: p, msg: format!("expected a number, found {}", describe(&t)) }),
        }
    }

    fn rational(&mut self) -> PResult<Expr> {
        let (_, num) = self.natural()?;
        let mut q: Rational = num.parse().expect("digits");
        if self.eat('/') {
            let (p, den) = self.natural()?;
            let d: Rational = den.parse().expect("digits");
            if d.is_zero() {
                return Err(ParseError::Syntax { pos: p, msg: "division by zero".into() });
            }
            q /= d;
        }
        Ok(Expr::Number(q))
    }

    fn factor(&mut self) -> PResult<Expr> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Sym('^') {
            let pos = self.pos();
            self.bump();
            let (p, s) = self.natural()?;
            let e: u32 = s.parse().map_err(|_| ParseError::IllegalPower { pos: p, msg: "exponent too large".into() })?;
            if e > 1 {
                match &base {
                    Expr::Variable { var: Var::Odd(_), .. } => {
                        return Err(ParseError::IllegalPower { pos, msg: "odd variables square to zero".into() })
                    }
                    Expr::Derivation { var: Var::Even(_), .. } => {
                        return Err(ParseError::IllegalPower { pos, msg: "derivations along even variables square to zero".into() })
                    }
                    _ => {}
                }
            }
            base = Expr::Power(Box::new(base), e, pos);
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.bump() {
            (_, Tok::Sym('(')) => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::Syntax { pos: self.pos(), msg: format!("expected `)`, found {}", describe(self.peek())) });
                }
                Ok(inner)
            }
            (pos, Tok::Ident(name)) => {
                if let Some(var) = self.sig.lookup(&name) {
                    return Ok(Expr::Variable { var, pos });
                }
                if let Some(var) = name.strip_prefix('D').and_then(|rest| self.sig.lookup(rest)) {
                    return Ok(Expr::Derivation { var, pos });
                }
                Err(ParseError::UnknownSymbol { pos, name })
            }
            (pos, t) => Err(ParseError::Syntax { pos, msg: format!("expected a factor, found {}", describe(&t)) }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) => format!("number `{s}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

/// Parses `text` over `sig` into an expression tree.
pub fn parse_expr(text: &str, sig: &AlgebraSignature) -> PResult<Expr> {
    let mut p = Parser { toks: lex(text)?, at: 0, sig };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(ParseError::Syntax { pos: p.pos(), msg: format!("unexpected {}", describe(p.peek())) });
    }
    Ok(e)
}

/// `c * vars * derivs`, kept in written order.
#[derive(Debug, Clone)]
struct Word {
    coeff: Rational,
    vars: Vec<Var>,
    derivs: Vec<Var>,
}

fn expand(e: &Expr) -> PResult<Vec<Word>> {
    let unit = |coeff: Rational, vars: Vec<Var>, derivs: Vec<Var>| vec![Word { coeff, vars, derivs }];
    Ok(match e {
        Expr::Number(q) => unit(q.clone(), vec![], vec![]),
        Expr::Variable { var, .. } => unit(Rational::one(), vec![*var], vec![]),
        Expr::Derivation { var, .. } => unit(Rational::one(), vec![], vec![*var]),
        Expr::Neg(inner) => expand(inner)?.into_iter().map(|w| Word { coeff: -w.coeff, ..w }).collect(),
        Expr::Sum(a, b) => {
            let mut v = expand(a)?;
            v.extend(expand(b)?);
            v
        }
        Expr::Product(a, b, pos) => multiply(&expand(a)?, &expand(b)?, *pos)?,
        Expr::Power(base, n, pos) => {
            let b = expand(base)?;
            let mut acc = unit(Rational::one(), vec![], vec![]);
            for _ in 0..*n {
                acc = multiply(&acc, &b, *pos)?;
            }
            acc
        }
    })
}

fn multiply(a: &[Word], b: &[Word], pos: usize) -> PResult<Vec<Word>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for u in a {
        for v in b {
            if !u.derivs.is_empty() && !v.vars.is_empty() {
                return Err(ParseError::Syntax { pos, msg: "coefficient factors must precede derivations".into() });
            }
            let mut vars = u.vars.clone();
            vars.extend(&v.vars);
            let mut derivs = u.derivs.clone();
            derivs.extend(&v.derivs);
            out.push(Word { coeff: &u.coeff * &v.coeff, vars, derivs });
        }
    }
    Ok(out)
}

fn word_value(w: &Word, sig: &AlgebraSignature) -> MultiDerivation {
    let mut c = GradedPolynomial::constant(sig, w.coeff.clone());
    for &v in &w.vars {
        c = &c * &GradedPolynomial::var(sig, v).expect("resolved against sig");
    }
    MultiDerivation::from_factors(c, &w.derivs).expect("resolved against sig")
}

/// Parses a multiderivation (polynomials are the derivation-free case).
pub fn parse_multiderivation(text: &str, sig: &AlgebraSignature) -> PResult<MultiDerivation> {
    let tree = parse_expr(text, sig)?;
    let mut acc = MultiDerivation::zero(sig);
    for w in expand(&tree)? {
        acc = &acc + &word_value(&w, sig);
    }
    Ok(acc)
}

/// Parses a graded polynomial; derivation symbols are rejected.
pub fn parse_polynomial(text: &str, sig: &AlgebraSignature) -> PResult<GradedPolynomial> {
    let tree = parse_expr(text, sig)?;
    if let Some(pos) = first_derivation(&tree) {
        return Err(ParseError::NotPolynomial { pos });
    }
    let md = parse_multiderivation(text, sig)?;
    Ok(md.coefficient(&graded_poisson::schouten::ExteriorMonomial::unit(sig)))
}

fn first_derivation(e: &Expr) -> Option<usize> {
    match e {
        Expr::Number(_) | Expr::Variable { .. } => None,
        Expr::Derivation { pos, .. } => Some(*pos),
        Expr::Neg(a) | Expr::Power(a, _, _) => first_derivation(a),
        Expr::Sum(a, b) | Expr::Product(a, b, _) => first_derivation(a).or_else(|| first_derivation(b)),
    }
}

/// Signature declared as `m,n` (or `m|n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureSpec {
    pub even: usize,
    pub odd: usize,
}

impl std::str::FromStr for SignatureSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once([',', '|']).ok_or_else(|| format!("expected `m,n`, got `{s}`"))?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad dimension `{t}`"));
        Ok(SignatureSpec { even: num(a)?, odd: num(b)? })
    }
}

impl fmt::Display for SignatureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.even, self.odd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: usize, n: usize) -> AlgebraSignature {
        AlgebraSignature::new(m, n).unwrap()
    }

    #[test]
    fn parses_simple_forms() {
        let md = parse_multiderivation("x^2*Dth", &s(1, 1)).unwrap();
        assert_eq!(md.to_string(), "x^2*Dth");
        let md = parse_multiderivation(" 3*th*Dx*Dth^2 - Dth^3 ", &s(1, 1)).unwrap();
        assert_eq!(md.to_string(), "3*th*Dx*Dth^2 - Dth^3");
    }

    #[test]
    fn rejects_illegal_powers() {
        assert!(matches!(parse_multiderivation("th^2", &s(1, 1)), Err(ParseError::IllegalPower { pos: 2, .. })));
        assert!(matches!(parse_multiderivation("x*Dx^2", &s(1, 1)), Err(ParseError::IllegalPower { .. })));
        assert!(parse_multiderivation("Dth^7", &s(1, 1)).is_ok());
    }

    #[test]
    fn reports_positions() {
        let err = parse_multiderivation("x + q", &s(1, 1)).unwrap_err();
        assert_eq!(err, ParseError::UnknownSymbol { pos: 4, name: "q".into() });
        assert_eq!(parse_multiderivation("x + ", &s(1, 1)).unwrap_err().position(), 4);
        assert_eq!(parse_multiderivation("(x", &s(1, 1)).unwrap_err().position(), 2);
        assert_eq!(parse_multiderivation("1/0", &s(1, 1)).unwrap_err().position(), 2);
    }

    #[test]
    fn distributes_and_orders() {
        let sig = s(2, 1);
        let a = parse_multiderivation("(x + y)^2*Dth", &sig).unwrap();
        let b = parse_multiderivation("x^2*Dth + 2*x*y*Dth + y^2*Dth", &sig).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_multiderivation("Dy*Dx", &sig).unwrap(), parse_multiderivation("-Dx*Dy", &sig).unwrap());
        assert!(parse_multiderivation("Dx*x", &sig).is_err());
    }

    #[test]
    fn polynomial_rejects_derivations() {
        assert_eq!(parse_polynomial("x + Dy", &s(2, 0)).unwrap_err(), ParseError::NotPolynomial { pos: 4 });
        assert_eq!(parse_polynomial("1/2*x^3 - y", &s(2, 0)).unwrap().to_string(), "1/2*x^3 - y");
    }

    #[test]
    fn signature_spec() {
        assert_eq!("2,1".parse::<SignatureSpec>().unwrap(), SignatureSpec { even: 2, odd: 1 });
        assert_eq!("0|1".parse::<SignatureSpec>().unwrap(), SignatureSpec { even: 0, odd: 1 });
        assert!("2".parse::<SignatureSpec>().is_err());
    }
}
