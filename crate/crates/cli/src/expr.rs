//! Small complex-valued expression language for window inputs.
//!
//! Accepts numbers, the variables `x`, `xi` (or `ξ`) and `a`, the constants
//! `pi`, `e` and `i`, the operators `+ - * / ^`, parentheses, implicit
//! multiplication (`2pi i xi`), and the functions `sin cos exp sqrt abs`.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("unexpected character {0:?} at offset {1}")]
    BadChar(char, usize),
    #[error("unknown identifier {0:?}")]
    UnknownIdent(String),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unexpected token {0:?}")]
    UnexpectedToken(String),
    #[error("invalid number {0:?}")]
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, only when followed by a digit or sign+digit
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| ExprError::BadNumber(text.clone()))?;
            out.push(Token::Num(v));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^".contains(ch) {
            out.push(Token::Op(ch));
            i += 1;
        } else if ch == '(' {
            out.push(Token::LParen);
            i += 1;
        } else if ch == ')' {
            out.push(Token::RParen);
            i += 1;
        } else {
            return Err(ExprError::BadChar(ch, i));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(Complex64),
    X,
    Xi,
    A,
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression in `x`, `ξ` and `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    source: String,
}

impl std::str::FromStr for Expr {
    type Err = ExprError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let root = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(ExprError::UnexpectedToken(format!("{t:?}")));
        }
        Ok(Self {
            root,
            source: src.to_string(),
        })
    }
}

impl Expr {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: f64, xi: f64, a: f64) -> Complex64 {
        eval(&self.root, x, xi, a)
    }

    /// True when the expression does not mention `ξ`.
    pub fn is_x_only(&self) -> bool {
        !mentions_xi(&self.root)
    }
}

fn mentions_xi(node: &Node) -> bool {
    match node {
        Node::Xi => true,
        Node::Const(_) | Node::X | Node::A => false,
        Node::Neg(n) | Node::Call(_, n) => mentions_xi(n),
        Node::Bin(_, l, r) => mentions_xi(l) || mentions_xi(r),
    }
}

fn eval(node: &Node, x: f64, xi: f64, a: f64) -> Complex64 {
    match node {
        Node::Const(c) => *c,
        Node::X => Complex64::new(x, 0.0),
        Node::Xi => Complex64::new(xi, 0.0),
        Node::A => Complex64::new(a, 0.0),
        Node::Neg(n) => -eval(n, x, xi, a),
        Node::Bin(op, l, r) => {
            let (u, v) = (eval(l, x, xi, a), eval(r, x, xi, a));
            match op {
                '+' => u + v,
                '-' => u - v,
                '*' => u * v,
                '/' => u / v,
                _ => {
                    if v.im == 0.0 && v.re.fract() == 0.0 && v.re.abs() <= 64.0 {
                        u.powi(v.re as i32)
                    } else if u.im == 0.0 && u.re >= 0.0 && v.im == 0.0 {
                        Complex64::new(u.re.powf(v.re), 0.0)
                    } else {
                        u.powc(v)
                    }
                }
            }
        }
        Node::Call(f, n) => {
            let v = eval(n, x, xi, a);
            match f {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Exp => v.exp(),
                Func::Sqrt => v.sqrt(),
                Func::Abs => Complex64::new(v.norm(), 0.0),
            }
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Op(op @ ('*' | '/'))) => {
                    let op = *op;
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
                }
                // implicit multiplication
                Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    let rhs = self.power()?;
                    lhs = Node::Bin('*', Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        match self.next() {
            None => Err(ExprError::UnexpectedEnd),
            Some(Token::Num(v)) => Ok(Node::Const(Complex64::new(v, 0.0))),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    Some(t) => Err(ExprError::UnexpectedToken(format!("{t:?}"))),
                    None => Err(ExprError::UnexpectedEnd),
                }
            }
            Some(Token::Ident(name)) => {
                let func = match name.as_str() {
                    "sin" => Some(Func::Sin),
                    "cos" => Some(Func::Cos),
                    "exp" => Some(Func::Exp),
                    "sqrt" => Some(Func::Sqrt),
                    "abs" => Some(Func::Abs),
                    _ => None,
                };
                if let Some(f) = func {
                    match self.next() {
                        Some(Token::LParen) => {}
                        Some(t) => return Err(ExprError::UnexpectedToken(format!("{t:?}"))),
                        None => return Err(ExprError::UnexpectedEnd),
                    }
                    let arg = self.expr()?;
                    return match self.next() {
                        Some(Token::RParen) => Ok(Node::Call(f, Box::new(arg))),
                        Some(t) => Err(ExprError::UnexpectedToken(format!("{t:?}"))),
                        None => Err(ExprError::UnexpectedEnd),
                    };
                }
                match name.as_str() {
                    "x" => Ok(Node::X),
                    "xi" | "ξ" => Ok(Node::Xi),
                    "a" => Ok(Node::A),
                    "pi" | "π" => Ok(Node::Const(Complex64::new(std::f64::consts::PI, 0.0))),
                    "e" => Ok(Node::Const(Complex64::new(std::f64::consts::E, 0.0))),
                    "i" => Ok(Node::Const(Complex64::new(0.0, 1.0))),
                    _ => Err(ExprError::UnknownIdent(name)),
                }
            }
            Some(t) => Err(ExprError::UnexpectedToken(format!("{t:?}"))),
        }
    }
}

/// Parses a complex literal such as `0.25`, `-0.5i`, `1+2i` or `3e-2 - i`.
pub fn parse_complex(src: &str) -> Result<Complex64, ExprError> {
    let e: Expr = src.parse()?;
    if mentions_var(&e.root) {
        return Err(ExprError::UnexpectedToken(format!(
            "{src:?} is not a constant"
        )));
    }
    Ok(e.eval(0.0, 0.0, 0.0))
}

fn mentions_var(node: &Node) -> bool {
    match node {
        Node::X | Node::Xi | Node::A => true,
        Node::Const(_) => false,
        Node::Neg(n) | Node::Call(_, n) => mentions_var(n),
        Node::Bin(_, l, r) => mentions_var(l) || mentions_var(r),
    }
}
