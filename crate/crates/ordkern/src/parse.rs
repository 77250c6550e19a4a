//! Parsers for the term and formula text grammars. Whitespace-insensitive.
//!
//! Terms:
//!   term := "0" | "I" | "w^(" term ")" | term "+" term | "W(" term ")"
//!         | "phi(" term "," term ")" | "psi(" reg ";" term ")"
//!         | "fc1(" term ";" reg ")" | "fcn(" term ")"
//!   reg  := "W(" term "+1)" | "I"
//! plus a serialization form "mu(x in L(term) . formula)" for μ-constants.
//!
//! Formulas:
//!   mem(a,b), reg(T), P(T,U,V), PI(T), and(F,G), or(F,G), not(F),
//!   all x in B . F, ex x in B . F; bounds are HF braces or L(term).

use crate::formula::{Bound, Const, Formula, Quant};
use crate::hf::HFSet;
use crate::term::{self, MuWitness, OrdTerm, RegTerm};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    Caret,
    Comma,
    Semi,
    Dot,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '+' => Tok::Plus,
            '^' => Tok::Caret,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '.' => Tok::Dot,
            _ if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    i += 1;
                }
                toks.push((Tok::Num(s), start));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    i += 1;
                }
                toks.push((Tok::Ident(s), start));
                continue;
            }
            _ => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unknown symbol {c:?}"),
                })
            }
        };
        toks.push((tok, start));
        i += 1;
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }
    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| t)
    }
    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(usize::MAX)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        let pos = self.here();
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(ParseError {
                pos,
                msg: format!("expected {t:?}, found {got:?}"),
            }),
        }
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.here(),
            msg: msg.into(),
        })
    }
    fn done(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(ParseError {
                pos: self.here(),
                msg: "trailing input".into(),
            })
        }
    }
}

pub fn parse_term(src: &str) -> Result<OrdTerm, ParseError> {
    let mut lx = lex(src)?;
    let t = term_expr(&mut lx)?;
    lx.done()?;
    Ok(t)
}

pub fn parse_reg(src: &str) -> Result<RegTerm, ParseError> {
    let mut lx = lex(src)?;
    let r = reg_expr(&mut lx)?;
    lx.done()?;
    Ok(r)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut lx = lex(src)?;
    let f = formula_expr(&mut lx)?;
    lx.done()?;
    Ok(f)
}

pub fn parse_const(src: &str) -> Result<Const, ParseError> {
    let mut lx = lex(src)?;
    let c = const_expr(&mut lx)?;
    lx.done()?;
    Ok(c)
}

/// Left-associative sum; stops before a "+1" so the W(term+1) form can
/// consume it.
fn term_expr(lx: &mut Lexer) -> Result<OrdTerm, ParseError> {
    let mut parts = vec![term_primary(lx)?];
    while lx.peek() == Some(&Tok::Plus) {
        if matches!(lx.peek2(), Some(Tok::Num(n)) if n == "1") {
            break;
        }
        lx.next();
        parts.push(term_primary(lx)?);
    }
    Ok(if parts.len() == 1 {
        parts.into_iter().next().unwrap()
    } else {
        OrdTerm::Sum(parts)
    })
}

fn term_primary(lx: &mut Lexer) -> Result<OrdTerm, ParseError> {
    let pos = lx.here();
    match lx.next() {
        Some(Tok::Num(n)) if n == "0" => Ok(OrdTerm::Zero),
        Some(Tok::Ident(id)) => match id.as_str() {
            "I" => Ok(OrdTerm::BigI),
            "w" => {
                lx.expect(Tok::Caret)?;
                lx.expect(Tok::LParen)?;
                let e = term_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(term::pow(e))
            }
            "W" => {
                lx.expect(Tok::LParen)?;
                let t = term_expr(lx)?;
                match lx.peek() {
                    Some(Tok::Plus) => {
                        lx.next();
                        match lx.next() {
                            Some(Tok::Num(n)) if n == "1" => {}
                            _ => return lx.err("expected 1 after + in W(_+1)"),
                        }
                        lx.expect(Tok::RParen)?;
                        Ok(term::aleph(term::succ(t)))
                    }
                    _ => {
                        lx.expect(Tok::RParen)?;
                        Ok(term::aleph(t))
                    }
                }
            }
            "phi" => {
                lx.expect(Tok::LParen)?;
                let a = term_expr(lx)?;
                lx.expect(Tok::Comma)?;
                let b = term_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(term::phi(a, b))
            }
            "psi" => {
                lx.expect(Tok::LParen)?;
                let k = reg_expr(lx)?;
                lx.expect(Tok::Semi)?;
                let a = term_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(term::psi(k, a))
            }
            "fc1" => {
                lx.expect(Tok::LParen)?;
                let x = term_expr(lx)?;
                lx.expect(Tok::Semi)?;
                let k = reg_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(term::fc1(x, k))
            }
            "fcn" => {
                lx.expect(Tok::LParen)?;
                let x = term_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(term::fcn(x))
            }
            "mu" => {
                lx.expect(Tok::LParen)?;
                let var = match lx.next() {
                    Some(Tok::Ident(v)) => v,
                    _ => return lx.err("expected variable in mu"),
                };
                match lx.next() {
                    Some(Tok::Ident(kw)) if kw == "in" => {}
                    _ => return lx.err("expected 'in' in mu"),
                }
                match lx.next() {
                    Some(Tok::Ident(kw)) if kw == "L" => {}
                    _ => return lx.err("expected 'L' bound in mu"),
                }
                lx.expect(Tok::LParen)?;
                let bound = term_expr(lx)?;
                lx.expect(Tok::RParen)?;
                lx.expect(Tok::Dot)?;
                let body = formula_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(OrdTerm::Mu(Box::new(MuWitness { bound, var, body })))
            }
            other => Err(ParseError {
                pos,
                msg: format!("unknown symbol {other:?} in term"),
            }),
        },
        got => Err(ParseError {
            pos,
            msg: format!("expected a term, found {got:?}"),
        }),
    }
}

fn reg_expr(lx: &mut Lexer) -> Result<RegTerm, ParseError> {
    let pos = lx.here();
    match lx.next() {
        Some(Tok::Ident(id)) if id == "I" => Ok(RegTerm::TopI),
        Some(Tok::Ident(id)) if id == "W" => {
            lx.expect(Tok::LParen)?;
            let p = term_expr(lx)?;
            lx.expect(Tok::Plus)?;
            match lx.next() {
                Some(Tok::Num(n)) if n == "1" => {}
                _ => return lx.err("expected 1 in regular W(_+1)"),
            }
            lx.expect(Tok::RParen)?;
            Ok(term::aleph_succ(p))
        }
        got => Err(ParseError {
            pos,
            msg: format!("expected a regular (W(_+1) or I), found {got:?}"),
        }),
    }
}

fn hf_expr(lx: &mut Lexer) -> Result<HFSet, ParseError> {
    lx.expect(Tok::LBrace)?;
    let mut elems = Vec::new();
    loop {
        match lx.peek() {
            Some(Tok::RBrace) => {
                lx.next();
                return Ok(HFSet::new(elems));
            }
            Some(Tok::LBrace) => {
                elems.push(hf_expr(lx)?);
                if lx.peek() == Some(&Tok::Comma) {
                    lx.next();
                }
            }
            _ => return lx.err("expected '}' or '{' in HF literal"),
        }
    }
}

const TERM_KEYWORDS: [&str; 8] = ["I", "w", "W", "phi", "psi", "fc1", "fcn", "mu"];

fn const_expr(lx: &mut Lexer) -> Result<Const, ParseError> {
    match lx.peek() {
        Some(Tok::LBrace) => Ok(Const::Hf(hf_expr(lx)?)),
        Some(Tok::Ident(id)) if id == "L" => {
            lx.next();
            lx.expect(Tok::LParen)?;
            let t = term_expr(lx)?;
            lx.expect(Tok::RParen)?;
            Ok(Const::Lvl(t))
        }
        Some(Tok::Ident(id)) if !TERM_KEYWORDS.contains(&id.as_str()) => {
            let v = id.clone();
            lx.next();
            Ok(Const::Var(v))
        }
        _ => Ok(Const::Ord(term_expr(lx)?)),
    }
}

fn bound_expr(lx: &mut Lexer) -> Result<Bound, ParseError> {
    match lx.peek() {
        Some(Tok::LBrace) => Ok(Bound::HfConst(hf_expr(lx)?)),
        Some(Tok::Ident(id)) if id == "L" => {
            lx.next();
            lx.expect(Tok::LParen)?;
            let t = term_expr(lx)?;
            lx.expect(Tok::RParen)?;
            Ok(Bound::Level(t))
        }
        Some(Tok::Ident(id)) => {
            let v = id.clone();
            lx.next();
            Ok(Bound::BVar(v))
        }
        _ => lx.err("expected a bound (HF braces, L(term), or a variable)"),
    }
}

fn formula_expr(lx: &mut Lexer) -> Result<Formula, ParseError> {
    let pos = lx.here();
    match lx.next() {
        Some(Tok::Ident(id)) => match id.as_str() {
            "mem" => {
                lx.expect(Tok::LParen)?;
                let a = const_expr(lx)?;
                lx.expect(Tok::Comma)?;
                let b = const_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(Formula::Mem(a, b))
            }
            "reg" => {
                lx.expect(Tok::LParen)?;
                let a = const_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(Formula::RegL(a))
            }
            "P" => {
                lx.expect(Tok::LParen)?;
                let a = const_expr(lx)?;
                lx.expect(Tok::Comma)?;
                let b = const_expr(lx)?;
                lx.expect(Tok::Comma)?;
                let c = const_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(Formula::Pred3(a, b, c))
            }
            "PI" => {
                lx.expect(Tok::LParen)?;
                let a = const_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(Formula::PredI(a))
            }
            "and" | "or" => {
                lx.expect(Tok::LParen)?;
                let a = formula_expr(lx)?;
                lx.expect(Tok::Comma)?;
                let b = formula_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(if id == "and" {
                    crate::formula::and(a, b)
                } else {
                    crate::formula::or(a, b)
                })
            }
            "not" => {
                lx.expect(Tok::LParen)?;
                let f = formula_expr(lx)?;
                lx.expect(Tok::RParen)?;
                Ok(crate::formula::neg(&f))
            }
            "all" | "ex" => {
                let quant = if id == "all" { Quant::All } else { Quant::Ex };
                let var = match lx.next() {
                    Some(Tok::Ident(v)) if !TERM_KEYWORDS.contains(&v.as_str()) => v,
                    got => {
                        return Err(ParseError {
                            pos,
                            msg: format!("expected a variable, found {got:?}"),
                        })
                    }
                };
                match lx.next() {
                    Some(Tok::Ident(kw)) if kw == "in" => {}
                    got => {
                        return Err(ParseError {
                            pos,
                            msg: format!("expected 'in', found {got:?}"),
                        })
                    }
                }
                let bd = bound_expr(lx)?;
                lx.expect(Tok::Dot)?;
                let body = formula_expr(lx)?;
                Ok(Formula::Q(quant, var, bd, Box::new(body)))
            }
            other => Err(ParseError {
                pos,
                msg: format!("unknown formula head {other:?}"),
            }),
        },
        got => Err(ParseError {
            pos,
            msg: format!("expected a formula, found {got:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{aleph, aleph_succ, omega1, one, pow, psi, render_term, BigI, Zero};

    #[test]
    fn term_examples() {
        assert_eq!(parse_term("0").unwrap(), Zero);
        assert_eq!(
            parse_term("psi(W(0+1); I)").unwrap(),
            psi(omega1(), BigI)
        );
        assert_eq!(
            parse_term("w^(I)+w^(0)").unwrap(),
            OrdTerm::Sum(vec![pow(BigI), pow(Zero)])
        );
        assert_eq!(parse_term("W(0+1)").unwrap(), aleph(one()));
        assert_eq!(parse_term("W(w^(0))").unwrap(), aleph(one()));
        assert_eq!(parse_term("fcn(psi(I; 0))").unwrap(), term::fcn(psi(RegTerm::TopI, Zero)));
        assert!(parse_term("0+1").is_err());
        assert!(parse_term("unknown(0)").is_err());
    }

    #[test]
    fn render_roundtrip() {
        let ts = [
            Zero,
            BigI,
            pow(Zero),
            OrdTerm::Sum(vec![BigI, BigI, pow(Zero)]),
            psi(omega1(), BigI),
            psi(RegTerm::TopI, pow(one())),
            term::fc1(psi(omega1(), Zero), omega1()),
            term::fcn(psi(RegTerm::TopI, Zero)),
            term::phi(one(), Zero),
            aleph(psi(RegTerm::TopI, Zero)),
            psi(aleph_succ(aleph(one())), Zero),
        ];
        for t in ts {
            let s = render_term(&t);
            assert_eq!(parse_term(&s).unwrap(), t, "roundtrip of {s}");
        }
    }

    #[test]
    fn formula_roundtrip() {
        use crate::formula::render_formula;
        let srcs = [
            "mem({},{{}})",
            "not(mem({},{{}}))",
            "reg(W(0+1))",
            "P(W(0+1),psi(W(0+1); 0),fc1(psi(W(0+1); 0); W(0+1)))",
            "PI(psi(I; 0))",
            "and(mem({},{{}}),or(mem({},{{}}),not(reg(I))))",
            "all x in {{},{{}}} . mem(x,{{},{{}}})",
            "ex z in L(I) . not(mem(z,z))",
            "ex z in L(W(0+1)) . mem(z,L(W(0+1)))",
        ];
        for s in srcs {
            let f = parse_formula(s).unwrap();
            let r = render_formula(&f);
            assert_eq!(parse_formula(&r).unwrap(), f, "roundtrip of {s} via {r}");
        }
    }

    #[test]
    fn mu_term_roundtrip() {
        let src = "mu(z in L(W(0+1)) . mem(z,{}))";
        let t = parse_term(src).unwrap();
        let r = render_term(&t);
        assert_eq!(parse_term(&r).unwrap(), t);
    }
}
