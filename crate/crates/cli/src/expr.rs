//! Tiny recursive-descent parser for polynomial potentials in x:
//! numbers (decimal or a/b rationals), x with ^ powers, + - * and parens.

pub fn parse_potential(src: &str) -> Result<Vec<f64>, String> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let poly = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("unexpected trailing input at token {}", p.pos));
    }
    Ok(poly.0)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            'x' | 'X' => {
                out.push(Tok::X);
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text.parse().map_err(|_| format!("bad number '{text}'"))?;
                out.push(Tok::Num(v));
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(out)
}

/// Polynomial as ascending coefficients.
#[derive(Clone, Debug)]
struct Poly(Vec<f64>);

impl Poly {
    fn constant(v: f64) -> Poly {
        Poly(vec![v])
    }

    fn x() -> Poly {
        Poly(vec![0.0, 1.0])
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut c = vec![0.0; n];
        for (i, &v) in self.0.iter().enumerate() {
            c[i] += v;
        }
        for (i, &v) in o.0.iter().enumerate() {
            c[i] += v;
        }
        Poly(c)
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|v| -v).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut c = vec![0.0; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly(c)
    }

    fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(1.0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn as_constant(&self) -> Option<f64> {
        if self.0.len() == 1 {
            Some(self.0[0])
        } else {
            None
        }
    }
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.factor()?;
                    let dc = d
                        .as_constant()
                        .ok_or_else(|| "division only by a constant".to_string())?;
                    if dc == 0.0 {
                        return Err("division by zero".into());
                    }
                    acc = acc.mul(&Poly::constant(1.0 / dc));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, String> {
        let base = match self.next() {
            Some(Tok::Num(v)) => Poly::constant(v),
            Some(Tok::X) => Poly::x(),
            Some(Tok::Minus) => return Ok(self.factor()?.neg()),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => inner,
                    _ => return Err("missing closing parenthesis".into()),
                }
            }
            other => return Err(format!("unexpected token {other:?}")),
        };
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 => Ok(base.pow(v as u32)),
                other => Err(format!("exponent must be a nonnegative integer, got {other:?}")),
            }
        } else {
            Ok(base)
        }
    }
}
