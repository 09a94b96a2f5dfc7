//! Expression trees over `x1..xn` with `+ - * / ^`, `sin`, `cos`, `exp`,
//! the constant `pi`, evaluation and symbolic differentiation.

use std::fmt;

use super::DynError;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Power with a constant exponent.
    Pow(Box<Expr>, f64),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

use Expr::*;

impl Expr {
    pub fn parse(src: &str, nvars: usize) -> Result<Self, DynError> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            nvars,
        };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Const(c) => *c,
            Var(i) => x[*i],
            Neg(a) => -a.eval(x),
            Add(a, b) => a.eval(x) + b.eval(x),
            Sub(a, b) => a.eval(x) - b.eval(x),
            Mul(a, b) => a.eval(x) * b.eval(x),
            Div(a, b) => a.eval(x) / b.eval(x),
            Pow(a, e) => a.eval(x).powf(*e),
            Sin(a) => a.eval(x).sin(),
            Cos(a) => a.eval(x).cos(),
            Exp(a) => a.eval(x).exp(),
        }
    }

    /// Largest variable index used, plus one.
    pub fn arity(&self) -> usize {
        match self {
            Const(_) => 0,
            Var(i) => i + 1,
            Neg(a) | Pow(a, _) | Sin(a) | Cos(a) | Exp(a) => a.arity(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.arity().max(b.arity()),
        }
    }

    /// Partial derivative in variable `i`, lightly simplified.
    pub fn derivative(&self, i: usize) -> Expr {
        match self {
            Const(_) => Const(0.0),
            Var(j) => Const(if *j == i { 1.0 } else { 0.0 }),
            Neg(a) => neg(a.derivative(i)),
            Add(a, b) => add(a.derivative(i), b.derivative(i)),
            Sub(a, b) => sub(a.derivative(i), b.derivative(i)),
            Mul(a, b) => add(
                mul(a.derivative(i), (**b).clone()),
                mul((**a).clone(), b.derivative(i)),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.derivative(i), (**b).clone()),
                    mul((**a).clone(), b.derivative(i)),
                ),
                Pow(b.clone(), 2.0),
            ),
            Pow(a, e) => mul(mul(Const(*e), pow((**a).clone(), e - 1.0)), a.derivative(i)),
            Sin(a) => mul(Cos(a.clone()), a.derivative(i)),
            Cos(a) => neg(mul(Sin(a.clone()), a.derivative(i))),
            Exp(a) => mul(Exp(a.clone()), a.derivative(i)),
        }
    }

    pub fn gradient(&self, n: usize) -> Vec<Expr> {
        (0..n).map(|i| self.derivative(i)).collect()
    }
}

fn is_const(e: &Expr, c: f64) -> bool {
    matches!(e, Const(x) if *x == c)
}

fn neg(a: Expr) -> Expr {
    match a {
        Const(c) => Const(-c),
        Neg(b) => *b,
        a => Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Const(x), Const(y)) => Const(x + y),
        (a, b) if is_const(&a, 0.0) => b,
        (a, b) if is_const(&b, 0.0) => a,
        (a, b) => Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Const(x), Const(y)) => Const(x - y),
        (a, b) if is_const(&b, 0.0) => a,
        (a, b) if is_const(&a, 0.0) => neg(b),
        (a, b) => Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Const(x), Const(y)) => Const(x * y),
        (a, _) if is_const(&a, 0.0) => Const(0.0),
        (_, b) if is_const(&b, 0.0) => Const(0.0),
        (a, b) if is_const(&a, 1.0) => b,
        (a, b) if is_const(&b, 1.0) => a,
        (a, b) => Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) {
        return Const(0.0);
    }
    Div(Box::new(a), Box::new(b))
}

fn pow(a: Expr, e: f64) -> Expr {
    if e == 0.0 {
        Const(1.0)
    } else if e == 1.0 {
        a
    } else {
        Pow(Box::new(a), e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(c) => write!(f, "{c}"),
            Var(i) => write!(f, "x{}", i + 1),
            Neg(a) => write!(f, "(-{a})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(a, e) => write!(f, "({a} ^ {e})"),
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, DynError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = i;
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                if i < chars.len() && chars[i].is_ascii_digit() {
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                } else {
                    i = save;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| DynError::Parse {
                pos: start,
                msg: format!("bad number {s:?}"),
            })?;
            out.push((start, Token::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(DynError::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> DynError {
        let pos = self.tokens.get(self.pos).map_or(usize::MAX, |t| t.0);
        DynError::Parse {
            pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, DynError> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, DynError> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, DynError> {
        if self.eat('-') {
            return Ok(Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DynError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            if exp.arity() > 0 {
                return Err(self.error("exponent must be constant"));
            }
            return Ok(Pow(Box::new(base), exp.eval(&[])));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DynError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(Const(v)),
            Token::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Token::Ident(name) => match name.as_str() {
                "pi" => Ok(Const(std::f64::consts::PI)),
                "sin" | "cos" | "exp" => {
                    if !self.eat('(') {
                        return Err(self.error("expected '(' after function name"));
                    }
                    let a = Box::new(self.expr()?);
                    if !self.eat(')') {
                        return Err(self.error("expected ')'"));
                    }
                    Ok(match name.as_str() {
                        "sin" => Sin(a),
                        "cos" => Cos(a),
                        _ => Exp(a),
                    })
                }
                v if v.starts_with('x') => {
                    let idx: usize = v[1..]
                        .parse()
                        .map_err(|_| DynError::UnknownVariable(v.into()))?;
                    if idx == 0 || idx > self.nvars {
                        return Err(DynError::UnknownVariable(v.into()));
                    }
                    Ok(Var(idx - 1))
                }
                other => Err(DynError::UnknownVariable(other.into())),
            },
            Token::Op(c) => {
                self.pos -= 1;
                Err(self.error(&format!("unexpected {c:?}")))
            }
        }
    }
}
