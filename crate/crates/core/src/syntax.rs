//! Text syntax for rational expressions.
//!
//! ```text
//! sum     := product ('+' product)*
//! product := factor ('.' factor)*
//! factor  := scalar '@' factor | atom '*'*
//! atom    := '0' | 'e' | letter | '(' sum ')'
//! scalar  := digits | 'inf'
//! ```

use thiserror::Error;

use crate::automata::RationalExpr;
use crate::semiring::SemiringId;
use crate::series::Alphabet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("parse error at column {col}: {message}")]
    Parse { col: usize, message: String },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("scalar `{text}` is not a value of {semiring}")]
    BadScalar { text: String, semiring: SemiringId },
}

impl SyntaxError {
    /// Malformed text, as opposed to well-formed text that makes no sense
    /// for the chosen semiring or alphabet.
    pub fn is_parse(&self) -> bool {
        matches!(self, SyntaxError::Parse { .. })
    }
}

/// Expression tree before letters and scalars are resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawExpr {
    Zero,
    One,
    Letter(String),
    Sum(Box<RawExpr>, Box<RawExpr>),
    Prod(Box<RawExpr>, Box<RawExpr>),
    Star(Box<RawExpr>),
    Scale(String, Box<RawExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Plus,
    Dot,
    Star,
    At,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = match c {
            '+' => Some(Tok::Plus),
            '.' => Some(Tok::Dot),
            '*' => Some(Tok::Star),
            '@' => Some(Tok::At),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = single {
            out.push((col, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((col, Tok::Number(chars[start..i].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().collect())));
        } else {
            return Err(SyntaxError::Parse { col, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse { col: self.col(), message: message.into() })
    }

    fn sum(&mut self) -> Result<RawExpr, SyntaxError> {
        let mut e = self.product()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            e = RawExpr::Sum(Box::new(e), Box::new(self.product()?));
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<RawExpr, SyntaxError> {
        let mut e = self.factor()?;
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            e = RawExpr::Prod(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<RawExpr, SyntaxError> {
        let scalar = match (self.peek(), self.peek2()) {
            (Some(Tok::Number(n)), Some(Tok::At)) => Some(n.clone()),
            (Some(Tok::Ident(n)), Some(Tok::At)) if n == "inf" => Some(n.clone()),
            _ => None,
        };
        if let Some(k) = scalar {
            self.pos += 2;
            return Ok(RawExpr::Scale(k, Box::new(self.factor()?)));
        }
        let mut e = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            e = RawExpr::Star(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<RawExpr, SyntaxError> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of expression");
        };
        match tok {
            Tok::Number(n) if n == "0" => {
                self.pos += 1;
                Ok(RawExpr::Zero)
            }
            Tok::Number(n) => self.error(format!("number `{n}` must be followed by `@`")),
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(match name.as_str() {
                    "e" | "eps" => RawExpr::One,
                    _ => RawExpr::Letter(name),
                })
            }
            Tok::Open => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            other => self.error(format!("unexpected `{}`", symbol(&other))),
        }
    }
}

fn symbol(t: &Tok) -> String {
    match t {
        Tok::Ident(s) | Tok::Number(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Dot => ".".into(),
        Tok::Star => "*".into(),
        Tok::At => "@".into(),
        Tok::Open => "(".into(),
        Tok::Close => ")".into(),
    }
}

/// Parses without looking at letters or scalar values.
pub fn parse_raw(text: &str) -> Result<RawExpr, SyntaxError> {
    let toks = tokenize(text)?;
    let mut p = Parser { end: text.chars().count() + 1, toks, pos: 0 };
    let e = p.sum()?;
    if let Some(t) = p.peek() {
        return p.error(format!("unexpected `{}` after expression", symbol(t)));
    }
    Ok(e)
}

pub fn resolve(raw: &RawExpr, id: SemiringId, alphabet: &Alphabet) -> Result<RationalExpr, SyntaxError> {
    let b = |e: &RawExpr| resolve(e, id, alphabet).map(Box::new);
    Ok(match raw {
        RawExpr::Zero => RationalExpr::Zero,
        RawExpr::One => RationalExpr::One,
        RawExpr::Letter(name) => {
            if alphabet.index_of(name).is_none() {
                return Err(SyntaxError::UnknownLetter(name.clone()));
            }
            RationalExpr::Letter(name.clone())
        }
        RawExpr::Sum(x, y) => RationalExpr::Sum(b(x)?, b(y)?),
        RawExpr::Prod(x, y) => RationalExpr::Prod(b(x)?, b(y)?),
        RawExpr::Star(x) => RationalExpr::Star(b(x)?),
        RawExpr::Scale(k, x) => {
            let v = id.parse_value(k).map_err(|_| SyntaxError::BadScalar { text: k.clone(), semiring: id })?;
            RationalExpr::Scale(v, b(x)?)
        }
    })
}

pub fn parse_expr(text: &str, id: SemiringId, alphabet: &Alphabet) -> Result<RationalExpr, SyntaxError> {
    resolve(&parse_raw(text)?, id, alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::SemiringValue;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    fn p(text: &str) -> RationalExpr {
        parse_expr(text, SemiringId::NatInf, &ab()).unwrap()
    }

    use RationalExpr as E;

    fn l(x: &str) -> E {
        E::letter(x)
    }

    #[test]
    fn precedence() {
        assert_eq!(p("a + b.a*"), E::sum(l("a"), E::prod(l("b"), E::star(l("a")))));
        assert_eq!(p("a.b.a"), E::prod(E::prod(l("a"), l("b")), l("a")));
        assert_eq!(p("(a+b)*"), E::star(E::sum(l("a"), l("b"))));
        assert_eq!(p("a**"), E::star(E::star(l("a"))));
    }

    #[test]
    fn constants_and_scalars() {
        assert_eq!(p("0*"), E::star(E::Zero));
        assert_eq!(p("e"), E::One);
        assert_eq!(p("eps + a"), E::sum(E::One, l("a")));
        assert_eq!(p("(2@a)*"), E::star(E::scale(SemiringValue::nat_inf(2), l("a"))));
        assert_eq!(p("2@a*"), E::scale(SemiringValue::nat_inf(2), E::star(l("a"))));
        assert_eq!(p("0@a"), E::scale(SemiringValue::nat_inf(0), l("a")));
        assert!(matches!(p("inf@b"), E::Scale(k, _) if k.is_infinite()));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "a +", "(a", "a)", "a b", "3", "a & b", "@a", "*"] {
            let err = parse_expr(bad, SemiringId::Boolean, &ab()).unwrap_err();
            assert!(err.is_parse(), "{bad}: {err}");
        }
    }

    #[test]
    fn semantic_errors() {
        let err = parse_expr("a.c", SemiringId::Boolean, &ab()).unwrap_err();
        assert_eq!(err, SyntaxError::UnknownLetter("c".into()));
        assert!(!err.is_parse());
        let err = parse_expr("2@a", SemiringId::Boolean, &ab()).unwrap_err();
        assert!(matches!(err, SyntaxError::BadScalar { .. }));
        assert!(parse_expr("5@a", SemiringId::Chain(3), &ab()).is_err());
        assert!(parse_expr("2@a", SemiringId::Chain(3), &ab()).is_ok());
    }

    #[test]
    fn display_round_trips() {
        for text in ["(a+b)*", "((a*).b)*.(a*)", "2@(a.b) + e", "0* + inf@a", "e.0"] {
            let e = p(text);
            assert_eq!(p(&e.to_string()), e, "{text} -> {e}");
        }
    }

    #[test]
    fn multi_character_letters() {
        let al = Alphabet::new(&["x1", "y_2"]).unwrap();
        let e = parse_expr("x1 . y_2*", SemiringId::Boolean, &al).unwrap();
        assert_eq!(e, E::prod(l("x1"), E::star(l("y_2"))));
    }
}
