//! The ideal-file grammar, shared by the CLI and the browser demo.
//!
//! Line 1: `ring <p> <k> <name_0> … <name_{k-1}>`. Every following
//! non-empty line that does not start with `#` is one generator in infix
//! notation with `+ - * ^`, parentheses, and integer coefficients reduced
//! mod p. Juxtaposition is not multiplication. An empty generator list is
//! the zero ideal.

use crate::error::{Error, Result};
use crate::lyubeznik::ConeInput;
use crate::ring::{Ideal, PolyRingCtx, Polynomial, RingRef};

pub fn parse_input(text: &str) -> Result<ConeInput> {
    parse_input_with_field(text, None)
}

/// Parse, optionally overriding the characteristic from the ring line.
pub fn parse_input_with_field(text: &str, field_override: Option<u64>) -> Result<ConeInput> {
    let mut lines = text.lines().enumerate();
    let Some((line_no, ring_line)) = lines.next() else {
        return Err(Error::Parse { line: 1, col: 1, msg: "empty input".into() });
    };
    let ring = parse_ring_line(ring_line, line_no + 1, field_override)?;

    let mut gens: Vec<Polynomial> = Vec::new();
    let mut gen_index = 0usize;
    for (idx, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let poly = parse_polynomial(&ring, line, idx + 1)?;
        match poly.homogeneity() {
            crate::ring::Homogeneity::Mixed => {
                return Err(Error::NonHomogeneous { index: gen_index })
            }
            crate::ring::Homogeneity::Zero => {}
            crate::ring::Homogeneity::Homogeneous(_) => gens.push(poly),
        }
        gen_index += 1;
    }
    let ideal = Ideal::new(&ring, gens)?;
    ConeInput::new(ring, ideal)
}

fn parse_ring_line(line: &str, line_no: usize, field_override: Option<u64>) -> Result<RingRef> {
    let err = |msg: &str| Error::Parse { line: line_no, col: 1, msg: msg.into() };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.first() != Some(&"ring") {
        return Err(err("expected `ring <p> <k> <names…>` on line 1"));
    }
    if tokens.len() < 3 {
        return Err(err("ring line needs a characteristic and a variable count"));
    }
    let p: u64 = tokens[1]
        .parse()
        .map_err(|_| err("characteristic must be an integer"))?;
    let k: usize = tokens[2]
        .parse()
        .map_err(|_| err("variable count must be an integer"))?;
    if tokens.len() != 3 + k {
        return Err(err(&format!("expected {k} variable names, found {}", tokens.len() - 3)));
    }
    let names: Vec<String> = tokens[3..].iter().map(|s| s.to_string()).collect();
    for n in &names {
        let mut chars = n.chars();
        let head_ok = chars.next().map(|c| c.is_ascii_alphabetic() || c == '_').unwrap_or(false);
        if !head_ok || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(err(&format!("invalid variable name {n}")));
        }
    }
    PolyRingCtx::new(field_override.unwrap_or(p), names)
}

// --------------------------------------------------------------------
// Expression parser: ^ binds tightest, then *, then binary + and -.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    line: usize,
    src: &'a [u8],
    pos: usize,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(line_no: usize, s: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { line: line_no, src: s.as_bytes(), pos: 0, toks: Vec::new() };
        while lx.pos < lx.src.len() {
            let col = lx.pos + 1;
            let c = lx.src[lx.pos];
            match c {
                b' ' | b'\t' => {
                    lx.pos += 1;
                }
                b'+' => lx.push(Tok::Plus, col),
                b'-' => lx.push(Tok::Minus, col),
                b'*' => lx.push(Tok::Star, col),
                b'^' => lx.push(Tok::Caret, col),
                b'(' => lx.push(Tok::LParen, col),
                b')' => lx.push(Tok::RParen, col),
                b'0'..=b'9' => {
                    let start = lx.pos;
                    while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_digit() {
                        lx.pos += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                    let value: u64 = text.parse().map_err(|_| Error::Parse {
                        line: lx.line,
                        col,
                        msg: "integer literal too large".into(),
                    })?;
                    lx.toks.push((Tok::Int(value), col));
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = lx.pos;
                    while lx.pos < lx.src.len()
                        && (lx.src[lx.pos].is_ascii_alphanumeric() || lx.src[lx.pos] == b'_')
                    {
                        lx.pos += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap().to_string();
                    lx.toks.push((Tok::Ident(text), col));
                }
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        col,
                        msg: format!("unexpected character `{}`", other as char),
                    })
                }
            }
        }
        Ok(lx.toks)
    }

    fn push(&mut self, t: Tok, col: usize) {
        self.toks.push((t, col));
        self.pos += 1;
    }
}

struct Parser<'a> {
    ring: &'a RingRef,
    line: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

pub fn parse_polynomial(ring: &RingRef, line: &str, line_no: usize) -> Result<Polynomial> {
    let toks = Lexer::run(line_no, line)?;
    let mut p = Parser { ring, line: line_no, toks, pos: 0 };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        let (_, col) = p.toks[p.pos];
        return Err(p.err(col, "expected operator"));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn err(&self, col: usize, msg: &str) -> Error {
        Error::Parse { line: self.line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, c)| c).unwrap_or_else(|| {
            self.toks.last().map(|&(_, c)| c + 1).unwrap_or(1)
        })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f).expect("same ring");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let col = self.col();
        let base = match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                let p = self.ring.p() as u64;
                Polynomial::constant(self.ring, (v % p) as u32)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let Some(idx) = self.ring.names().iter().position(|n| *n == name) else {
                    return Err(self.err(col, &format!("unknown variable `{name}`")));
                };
                Polynomial::variable(self.ring, idx)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err(self.col(), "expected `)`"));
                }
                self.pos += 1;
                inner
            }
            _ => return Err(self.err(col, "expected a coefficient, variable, or `(`")),
        };
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e = u32::try_from(e)
                        .map_err(|_| self.err(col, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err(col, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }
}

/// Deterministic rendering back into the file grammar; parse ∘ render is
/// the identity on validated inputs.
pub fn render_input(cone: &ConeInput) -> String {
    let ring = cone.ring();
    let mut out = format!("ring {} {} {}\n", ring.p(), ring.nvars(), ring.names().join(" "));
    for g in cone.ideal().generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_ideal() {
        let c = parse_input("ring 2 2 x y\nx*y\n").unwrap();
        assert_eq!(c.ring().p(), 2);
        assert_eq!(c.ring().names(), &["x", "y"]);
        assert_eq!(c.ideal().generators().len(), 1);
        assert_eq!(c.ideal().generators()[0].to_string(), "x*y");
    }

    #[test]
    fn rejects_inhomogeneous() {
        let e = parse_input("ring 2 2 x y\nx + y^2\n").unwrap_err();
        assert_eq!(e, Error::NonHomogeneous { index: 0 });
    }

    #[test]
    fn rejects_non_prime_field() {
        let e = parse_input("ring 4 2 x y\n").unwrap_err();
        assert_eq!(e, Error::NonPrimeField { p: 4 });
    }

    #[test]
    fn zero_ideal_and_comments() {
        let c = parse_input("ring 3 2 x y\n# nothing here\n\n").unwrap();
        assert!(c.ideal().is_zero());
        assert_eq!(c.d(), 1);
    }

    #[test]
    fn coefficients_reduce_mod_p() {
        let c = parse_input("ring 3 2 x y\n4*x*y + 3*y^2\n").unwrap();
        // 4 ≡ 1, 3 ≡ 0.
        assert_eq!(c.ideal().generators()[0].to_string(), "x*y");
    }

    #[test]
    fn juxtaposition_is_an_error() {
        let e = parse_input("ring 2 2 x y\nx y\n").unwrap_err();
        match e {
            Error::Parse { line: 2, col, msg } => {
                assert_eq!(col, 3);
                assert!(msg.contains("operator"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let e = parse_input("ring 2 2 x y\nz^2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn unary_minus_and_parens() {
        let c = parse_input("ring 5 2 x y\n-(x - 2*y)*x\n").unwrap();
        assert_eq!(c.ideal().generators()[0].to_string(), "4*x^2 + 2*x*y");
    }

    #[test]
    fn field_override_changes_reduction() {
        let c = parse_input_with_field("ring 2 2 x y\n3*x*y\n", Some(5)).unwrap();
        assert_eq!(c.ring().p(), 5);
        assert_eq!(c.ideal().generators()[0].to_string(), "3*x*y");
    }

    #[test]
    fn render_round_trip() {
        let text = "ring 3 3 x y z\nx*y + 2*z^2\nx^3 + y^3\n";
        let c = parse_input(text).unwrap();
        let rendered = render_input(&c);
        let c2 = parse_input(&rendered).unwrap();
        assert_eq!(render_input(&c2), rendered);
        assert_eq!(c.ideal().generators(), c2.ideal().generators());
    }

    #[test]
    fn strict_first_line() {
        assert!(matches!(
            parse_input("# comment first\nring 2 2 x y\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }
}
