//! Parser for rendered polynomials such as `x1'*x1 + x2'*x2 + x0^2 - 1` or
//! `1/2*mu^-1*x2*dx1`. Products are taken in the free twisted algebra in
//! the order written.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{AlgebraSpec, Element};
use crate::coeff::{Coefficient, GaussRat};
use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, AlgebraError> {
    let mut out = Vec::new();
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[s..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| AlgebraError::Parse(t.clone()))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(cs[s..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(AlgebraError::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

pub(crate) fn is_reserved(name: &str) -> bool {
    matches!(name, "i" | "mu" | "lambda")
}

struct Parser<'a> {
    spec: &'a AlgebraSpec,
    toks: Vec<Tok>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Element, AlgebraError> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element, AlgebraError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            let rhs = self.power()?;
            acc = self.spec.mul_free(&acc, &rhs)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Element, AlgebraError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let k: u32 = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                n.try_into().map_err(|_| AlgebraError::Parse("exponent too large".into()))?
            }
            _ => return Err(AlgebraError::Parse("expected exponent".into())),
        };
        let base = if neg {
            let c = constant_of(self.spec, &base)
                .and_then(|c| c.inverse_unit())
                .ok_or_else(|| AlgebraError::Parse("negative powers need a unit scalar".into()))?;
            self.spec.constant(c)
        } else {
            base
        };
        let mut r = self.spec.one();
        for _ in 0..k {
            r = self.spec.mul_free(&r, &base)?;
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Element, AlgebraError> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => {
                if self.eat('/') {
                    match self.toks.get(self.pos).cloned() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            Ok(self.spec.scalar(GaussRat::real(BigRational::new(n, d))))
                        }
                        _ => Err(AlgebraError::Parse("expected denominator".into())),
                    }
                } else {
                    Ok(self.spec.scalar(GaussRat::real(BigRational::from_integer(n))))
                }
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "i" => Ok(self.spec.constant(Coefficient::i())),
                "mu" => Ok(self.spec.constant(Coefficient::mu_pow(1))),
                "lambda" => Ok(self.spec.constant(Coefficient::lambda())),
                _ => {
                    if let Ok(g) = self.spec.gen(&name) {
                        Ok(g)
                    } else if let Some(base) = name.strip_prefix('d') {
                        self.spec.dgen(base)
                    } else {
                        Err(AlgebraError::UnknownGenerator(name))
                    }
                }
            },
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(AlgebraError::Parse("expected `)`".into()));
                }
                Ok(e)
            }
            other => Err(AlgebraError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn constant_of(spec: &AlgebraSpec, e: &Element) -> Option<Coefficient> {
    if e.is_zero() {
        return Some(Coefficient::zero());
    }
    let one = spec.one();
    let (m1, _) = one.terms().next()?;
    (e.num_terms() == 1).then(|| e.coefficient(m1)).filter(|c| !c.is_zero())
}

/// Parses into the free twisted algebra; no relations are applied.
pub fn parse_free(spec: &AlgebraSpec, src: &str) -> Result<Element, AlgebraError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse("empty expression".into()));
    }
    let mut p = Parser { spec, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(AlgebraError::Parse(format!("trailing input in `{src}`")));
    }
    Ok(e)
}

/// Parses and reduces modulo the function relations.
pub fn parse(spec: &AlgebraSpec, src: &str) -> Result<Element, AlgebraError> {
    spec.normal_form(&parse_free(spec, src)?)
}

/// Parses a linear combination of named coordinates, e.g. `y1 - i*y2` or
/// `1/2*y0`. Returns one coefficient per coordinate.
pub fn parse_linear(coords: &[String], src: &str) -> Result<Vec<GaussRat>, AlgebraError> {
    let toks = lex(src)?;
    let mut out = vec![GaussRat::zero(); coords.len()];
    let mut pos = 0;
    let mut first = true;
    while pos < toks.len() {
        let mut sign = GaussRat::one();
        match toks.get(pos) {
            Some(Tok::Op('+')) => pos += 1,
            Some(Tok::Op('-')) => {
                sign = GaussRat::from_ints(-1, 0);
                pos += 1;
            }
            _ if first => {}
            other => return Err(AlgebraError::Parse(format!("expected `+` or `-`, found {other:?}"))),
        }
        first = false;
        let mut coef = sign;
        let mut coord: Option<usize> = None;
        loop {
            match toks.get(pos).cloned() {
                Some(Tok::Num(n)) => {
                    pos += 1;
                    let mut v = BigRational::from_integer(n);
                    if toks.get(pos) == Some(&Tok::Op('/')) {
                        match toks.get(pos + 1).cloned() {
                            Some(Tok::Num(d)) if d != BigInt::from(0) => {
                                v /= BigRational::from_integer(d);
                                pos += 2;
                            }
                            _ => return Err(AlgebraError::Parse("expected denominator".into())),
                        }
                    }
                    coef = &coef * &GaussRat::real(v);
                }
                Some(Tok::Ident(name)) if name == "i" => {
                    pos += 1;
                    coef = &coef * &GaussRat::i();
                }
                Some(Tok::Ident(name)) => {
                    pos += 1;
                    let k = coords
                        .iter()
                        .position(|c| *c == name)
                        .ok_or_else(|| AlgebraError::Parse(format!("unknown coordinate `{name}`")))?;
                    if coord.replace(k).is_some() {
                        return Err(AlgebraError::Parse("frame expressions must be linear".into()));
                    }
                }
                other => return Err(AlgebraError::Parse(format!("unexpected token {other:?}"))),
            }
            if toks.get(pos) == Some(&Tok::Op('*')) {
                pos += 1;
            } else {
                break;
            }
        }
        let k = coord.ok_or_else(|| AlgebraError::Parse("constant term in frame expression".into()))?;
        out[k] = &out[k] + &coef;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheres;

    #[test]
    fn sphere_relation_reduces_to_zero() {
        let s4 = spheres::s4_theta();
        let alg = s4.algebra();
        let e = parse(alg, "x1'*x1 + x2'*x2 + x0^2 - 1").unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn render_parse_roundtrip() {
        let s4 = spheres::s4_theta();
        let alg = s4.algebra();
        let e = parse(alg, "(1/2 - i*mu^-1)*x2*x1 - 3*x0^2*dx1' + lambda").unwrap();
        let again = parse(alg, &alg.render(&e)).unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn errors() {
        let s4 = spheres::s4_theta();
        let alg = s4.algebra();
        assert!(matches!(parse(alg, "x9"), Err(AlgebraError::UnknownGenerator(_))));
        assert!(parse(alg, "x1^-1").is_err());
        assert!(parse(alg, "(x1").is_err());
        assert!(parse(alg, "").is_err());
    }

    #[test]
    fn linear_frame_rows() {
        let coords: Vec<String> = ["y0", "y1", "y2"].iter().map(|s| s.to_string()).collect();
        let v = parse_linear(&coords, "y1 - i*y2").unwrap();
        assert_eq!(v, vec![GaussRat::zero(), GaussRat::one(), GaussRat::from_ints(0, -1)]);
        let v = parse_linear(&coords, "1/2*y0").unwrap();
        assert_eq!(v[0], GaussRat::ratio(1, 2));
        assert!(parse_linear(&coords, "y0*y1").is_err());
    }
}
