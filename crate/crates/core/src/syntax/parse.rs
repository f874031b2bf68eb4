//! Recursive-descent parser for the concrete formula syntax.
//!
//! Sugar (`&`, `|`, `<->`, `exists`) is expanded while parsing, so the
//! result is always in core syntax.

use num_bigint::BigUint;
use thiserror::Error;

use super::{Formula, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdent { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(BigUint),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Plus,
    Star,
    Tilde,
    Arrow,
    DArrow,
    Amp,
    Bar,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(Tok::Number(n)) => format!("`{n}`"),
        Some(t) => format!("{t:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'=' => Tok::Eq,
            b'+' => Tok::Plus,
            b'*' => Tok::Star,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DArrow
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..=i].parse::<BigUint>().expect("digits");
                Tok::Number(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

/// Parses a formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len() };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len() };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(Some(&t)), describe(self.peek())))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            t => self.error(format!("trailing input at {}", describe(t))),
        }
    }

    fn peek_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn variable(&mut self) -> Result<Var, ParseError> {
        let pos = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => match var_index(&s) {
                Some(i) => {
                    self.pos += 1;
                    Ok(i)
                }
                None => Err(ParseError::UnknownIdent { pos, name: s }),
            },
            t => self.error(format!("expected a variable, found {}", describe(t.as_ref()))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.peek_ident("forall") || self.peek_ident("exists") {
            let universal = self.peek_ident("forall");
            self.pos += 1;
            let x = self.variable()?;
            self.expect(Tok::Dot)?;
            let body = self.formula()?;
            return Ok(if universal { Formula::forall(x, body) } else { Formula::exists(x, body) });
        }
        let lhs = self.implication()?;
        if self.eat(&Tok::DArrow) {
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = if self.peek_ident("forall") || self.peek_ident("exists") {
                self.formula()?
            } else {
                self.implication()?
            };
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Tilde) {
            let inner = if self.peek_ident("forall") || self.peek_ident("exists") {
                self.formula()?
            } else {
                self.unary()?
            };
            return Ok(Formula::not(inner));
        }
        if self.peek_ident("K") {
            self.pos += 1;
            self.expect(Tok::LParen)?;
            let inner = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(Formula::know(inner));
        }
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.pos += 1;
            let attempt = self.formula().and_then(|f| self.expect(Tok::RParen).map(|_| f));
            match attempt {
                Ok(f) => return Ok(f),
                Err(_) => self.pos = save,
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        if self.peek_ident("In") {
            self.pos += 1;
            self.expect(Tok::LParen)?;
            let a = self.term()?;
            self.expect(Tok::Comma)?;
            let b = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(Formula::in_w(a, b));
        }
        let a = self.term()?;
        self.expect(Tok::Eq)?;
        let b = self.term()?;
        Ok(Formula::eq(a, b))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.product()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.product()?;
            acc = Term::plus(acc, rhs);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.primary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.primary()?;
            acc = Term::times(acc, rhs);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let pos = self.offset();
        match self.peek().cloned() {
            Some(Tok::Number(n)) => {
                if n == BigUint::ZERO {
                    self.pos += 1;
                    Ok(Term::Zero)
                } else {
                    self.error("numerals other than 0 are written `num N`")
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                match s.as_str() {
                    "S" | "diag" => {
                        self.expect(Tok::LParen)?;
                        let a = self.term()?;
                        self.expect(Tok::RParen)?;
                        Ok(if s == "S" { Term::succ(a) } else { Term::diag(a) })
                    }
                    "num" => match self.peek().cloned() {
                        Some(Tok::Number(n)) => {
                            self.pos += 1;
                            Ok(Term::Num(n))
                        }
                        t => self.error(format!("expected a decimal after `num`, found {}", describe(t.as_ref()))),
                    },
                    _ => match var_index(&s) {
                        Some(i) => Ok(Term::Var(i)),
                        None => Err(ParseError::UnknownIdent { pos, name: s }),
                    },
                }
            }
            t => self.error(format!("expected a term, found {}", describe(t.as_ref()))),
        }
    }
}

fn var_index(s: &str) -> Option<Var> {
    let digits = s.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    digits.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> Formula {
        Formula::eq(Term::Zero, Term::Zero)
    }

    #[test]
    fn examples() {
        assert_eq!(parse("0=0").unwrap(), zz());
        assert_eq!(parse("K(0=0) -> 0=0").unwrap(), Formula::imp(Formula::know(zz()), zz()));
        assert_eq!(
            parse("~In(diag(x0), num 7)").unwrap(),
            Formula::not(Formula::in_w(Term::diag(Term::var(0)), Term::num(7u32)))
        );
    }

    #[test]
    fn sugar_expands_exactly() {
        let a = parse("x0 = 0").unwrap();
        let b = parse("x1 = 0").unwrap();
        assert_eq!(parse("x0 = 0 & x1 = 0").unwrap(), Formula::not(Formula::imp(a.clone(), Formula::not(b.clone()))));
        assert_eq!(parse("x0 = 0 | x1 = 0").unwrap(), Formula::imp(Formula::not(a.clone()), b.clone()));
        assert_eq!(
            parse("x0 = 0 <-> x1 = 0").unwrap(),
            Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b.clone(), a.clone()))
        );
        assert_eq!(
            parse("exists x0. x0 = 0").unwrap(),
            Formula::not(Formula::forall(0, Formula::not(a)))
        );
    }

    #[test]
    fn precedence() {
        // -> is right associative, & binds tighter than ->.
        let f = parse("0=0 -> 0=0 -> 0=0").unwrap();
        assert_eq!(f, Formula::imp(zz(), Formula::imp(zz(), zz())));
        let g = parse("0=0 & 0=0 -> 0=0").unwrap();
        assert_eq!(g, Formula::imp(Formula::and(zz(), zz()), zz()));
        // quantifier scope extends to the right
        let h = parse("forall x0. x0 = 0 -> 0 = 0").unwrap();
        assert_eq!(h, Formula::forall(0, Formula::imp(parse("x0=0").unwrap(), zz())));
        // * binds tighter than +
        let t = parse_term("x0 + x1 * x2").unwrap();
        assert_eq!(t, Term::plus(Term::var(0), Term::times(Term::var(1), Term::var(2))));
    }

    #[test]
    fn parenthesised_terms_and_formulas() {
        let f = parse("(x0 + x1) = x2").unwrap();
        assert_eq!(f, Formula::eq(Term::plus(Term::var(0), Term::var(1)), Term::var(2)));
        let g = parse("((0 = 0))").unwrap();
        assert_eq!(g, zz());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("foo = 0"), Err(ParseError::UnknownIdent { pos: 0, .. })));
        assert!(matches!(parse("0 = "), Err(ParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse("0 = 7"), Err(ParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse("0 = 0 0"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x01 = 0"), Err(ParseError::UnknownIdent { .. })));
    }
}
