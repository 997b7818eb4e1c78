//! Parser for the textual form syntax used in scenario files and in CLI
//! arguments, e.g. `t1 * (1/z) dz ^ dt1` or `(z^2 + 1)/z`.
//!
//! Everything is parsed as a differential form over a chart; adjacency is
//! multiplication, `^` after an atom is either an integer power or a wedge
//! (they agree: the wedge is the product), and `/` divides by a scalar.

use cechweil::algebra::{ChartRef, RatFunc, Rational};
use cechweil::forms::Form;

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

pub fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            '0'..='9' => {
                let mut n = 0i64;
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add((d as u8 - b'0') as i64))
                            .ok_or("integer literal overflows")?;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(n));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut id = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        id.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(id));
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(out)
}

pub struct ExprParser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    chart: &'a ChartRef,
}

impl<'a> ExprParser<'a> {
    pub fn new(tokens: Vec<Token>, chart: &'a ChartRef) -> Self {
        ExprParser {
            tokens,
            pos: 0,
            chart,
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn parse(&mut self) -> Result<Form, String> {
        let f = self.expr()?;
        if self.pos != self.tokens.len() {
            return Err(format!("trailing input after position {}", self.pos));
        }
        Ok(f)
    }

    fn expr(&mut self) -> Result<Form, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs).map_err(|e| e.to_string())?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs).map_err(|e| e.to_string())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Form, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.wedge(&rhs).map_err(|e| e.to_string())?;
                }
                Some(Token::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    let scalar = rhs
                        .as_ratfunc()
                        .ok_or("division is only defined by scalar factors")?;
                    let inv = scalar.invert().map_err(|e| e.to_string())?;
                    acc = acc.scale(&inv).map_err(|e| e.to_string())?;
                }
                // juxtaposition
                Some(Token::Int(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    let rhs = self.unary()?;
                    acc = acc.wedge(&rhs).map_err(|e| e.to_string())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Form, String> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        let atom = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            // integer power (repeated wedge) or a wedge with the next atom
            match self.peek() {
                Some(Token::Int(n)) => {
                    let n = *n;
                    self.bump();
                    if n < 0 {
                        return Err("negative exponents are not supported; use 1/x".into());
                    }
                    let mut acc = Form::one();
                    for _ in 0..n {
                        acc = acc.wedge(&atom).map_err(|e| e.to_string())?;
                    }
                    return self.postfix_wedge(acc);
                }
                _ => {
                    let rhs = self.unary()?;
                    return atom.wedge(&rhs).map_err(|e| e.to_string());
                }
            }
        }
        Ok(atom)
    }

    fn postfix_wedge(&mut self, acc: Form) -> Result<Form, String> {
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let rhs = self.unary()?;
            return acc.wedge(&rhs).map_err(|e| e.to_string());
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Form, String> {
        match self.bump() {
            Some(Token::Int(n)) => Ok(Form::from_ratfunc(RatFunc::constant(
                Rational::from_int(n),
            ))),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err("expected ')'".into()),
                }
            }
            Some(Token::Ident(id)) => self.resolve(&id),
            other => Err(format!("expected a value, found {other:?}")),
        }
    }

    fn resolve(&self, id: &str) -> Result<Form, String> {
        // chart variable first, then dt_k / t_k, then d<var>
        if let Some(i) = self.chart.var_index(id) {
            return Ok(Form::from_ratfunc(RatFunc::coord(self.chart, i)));
        }
        if let Some(rest) = id.strip_prefix("dt") {
            if let Ok(k) = rest.parse::<u8>() {
                if k >= 1 {
                    return Ok(Form::dt(k));
                }
                return Err("dt0 is eliminated by the simplex relation".into());
            }
        }
        if let Some(rest) = id.strip_prefix('t') {
            if let Ok(k) = rest.parse::<u8>() {
                if k >= 1 {
                    return Ok(Form::from_ratfunc(RatFunc::t(k)));
                }
                return Err("t0 is eliminated; write 1 - t1 - …".into());
            }
        }
        if let Some(rest) = id.strip_prefix('d') {
            if let Some(i) = self.chart.var_index(rest) {
                return Ok(Form::base_one_form(self.chart, i));
            }
        }
        Err(format!(
            "unknown identifier '{id}' on chart {}",
            self.chart.name
        ))
    }
}

/// Parses a form expression over the chart.
pub fn parse_form(s: &str, chart: &ChartRef) -> Result<Form, String> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err("empty expression".into());
    }
    ExprParser::new(tokens, chart).parse()
}

/// Parses a scalar (degree-(0,0)) expression over the chart.
pub fn parse_scalar(s: &str, chart: &ChartRef) -> Result<RatFunc, String> {
    let f = parse_form(s, chart)?;
    f.as_ratfunc()
        .cloned()
        .or_else(|| if f.is_zero() { Some(RatFunc::zero()) } else { None })
        .ok_or_else(|| format!("expected a scalar, found the form '{s}'"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cechweil::algebra::{Chart, Poly, Var};

    fn chart() -> ChartRef {
        Chart::new("U12", &["z"], vec![Poly::var(Var::Coord(0))]).unwrap()
    }

    #[test]
    fn parses_the_documented_example() {
        let c = chart();
        let f = parse_form("t1 * (1/z) dz ^ dt1", &c).unwrap();
        let expected = Form::from_ratfunc(RatFunc::t(1))
            .wedge(&Form::base_one_form(&c, 0))
            .unwrap()
            .scale(&RatFunc::one().div(&RatFunc::coord(&c, 0)).unwrap())
            .unwrap()
            .wedge(&Form::dt(1))
            .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_polynomials_and_powers() {
        let c = chart();
        let f = parse_scalar("(z^2 + 2*z + 1)/z", &c).unwrap();
        let num = Poly::var(Var::Coord(0))
            .pow(2)
            .add(&Poly::var(Var::Coord(0)).scale(&Rational::from_int(2)))
            .add(&Poly::one());
        let expected = RatFunc::normalize(&c, num, Poly::var(Var::Coord(0))).unwrap();
        assert_eq!(f, expected);
        assert!(parse_scalar("1/(z+1)", &c).is_err());
        assert_eq!(
            parse_form("dz ^ dz", &c).unwrap(),
            Form::zero()
        );
    }
}
