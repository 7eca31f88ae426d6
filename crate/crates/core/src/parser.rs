//! Text syntax for [`FuncExpr`] trees.
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := unary ("^" uint)? ;
//! unary  := "-" unary | atom ;
//! atom   := "p" | real | "(" expr ")" | ("exp"|"sin"|"cos") "(" expr ")" | ("i"|"j"|"k") ;
//! real   := digits ("." digits?)? (("e"|"E") ("+"|"-")? digits)? ;
//! ```
//!
//! Whitespace is ignored between tokens. Exponents are non-negative integers.
//! There is no implicit multiplication: `2p` is an error.

use std::fmt;

use crate::function::FuncExpr;
use crate::quat::Quaternion;

/// Maximum nesting depth accepted by [`parse`].
pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the first offending character (the text length at end of
    /// input).
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: expected {}, found {}", self.position, self.expected, self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, integral: Option<u32> },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number `{value}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Returns the token and its starting offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.src[self.pos..].chars().next() else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() {
            self.digits();
            let mut integral = true;
            if self.pos < self.src.len() && self.bytes()[self.pos] == b'.' {
                integral = false;
                self.pos += 1;
                self.digits();
            }
            if self.pos < self.src.len() && matches!(self.bytes()[self.pos], b'e' | b'E') {
                self.pos += 1;
                if self.pos < self.src.len() && matches!(self.bytes()[self.pos], b'+' | b'-') {
                    self.pos += 1;
                }
                if self.digits() == 0 {
                    // `2e` or `2e+` with no exponent digits: point at what follows.
                    let found = match self.src[self.pos..].chars().next() {
                        Some(ch) => format!("`{ch}`"),
                        None => "end of input".into(),
                    };
                    return Err(ParseError {
                        position: self.pos,
                        expected: "exponent digits".into(),
                        found,
                    });
                }
                integral = false;
            }
            let text = &self.src[start..self.pos];
            let value: f64 = text.parse().map_err(|_| ParseError {
                position: start,
                expected: "number".into(),
                found: format!("`{text}`"),
            })?;
            if !value.is_finite() {
                return Err(ParseError {
                    position: start,
                    expected: "finite number".into(),
                    found: format!("`{text}`"),
                });
            }
            let integral = if integral { text.parse::<u32>().ok() } else { None };
            return Ok((Tok::Num { value, integral }, start));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        Err(ParseError {
            position: start,
            expected: "expression".into(),
            found: format!("`{c}`"),
        })
    }
}

type PResult<T> = Result<T, Box<ParseError>>;

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    tok_pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> PResult<Self> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, tok_pos) = lexer.next()?;
        Ok(Parser { lexer, tok, tok_pos, depth: 0 })
    }

    fn bump(&mut self) -> PResult<()> {
        let (tok, pos) = self.lexer.next()?;
        self.tok = tok;
        self.tok_pos = pos;
        Ok(())
    }

    fn error(&self, expected: &str) -> Box<ParseError> {
        Box::new(ParseError {
            position: self.tok_pos,
            expected: expected.to_string(),
            found: self.tok.describe(),
        })
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Box::new(ParseError {
                position: self.tok_pos,
                expected: format!("nesting depth at most {MAX_DEPTH}"),
                found: self.tok.describe(),
            }));
        }
        Ok(())
    }

    fn expr(&mut self) -> PResult<FuncExpr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Plus => {
                    self.bump()?;
                    lhs = lhs + self.term()?;
                }
                Tok::Minus => {
                    self.bump()?;
                    lhs = lhs - self.term()?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<FuncExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.tok {
                Tok::Star => {
                    self.bump()?;
                    lhs = lhs * self.factor()?;
                }
                Tok::Slash => {
                    self.bump()?;
                    lhs = lhs / self.factor()?;
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> PResult<FuncExpr> {
        let base = self.unary()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        match self.tok {
            Tok::Num { integral: Some(n), .. } => {
                self.bump()?;
                Ok(FuncExpr::pow(base, n))
            }
            _ => Err(self.error("non-negative integer exponent")),
        }
    }

    fn unary(&mut self) -> PResult<FuncExpr> {
        if self.tok == Tok::Minus {
            self.enter()?;
            self.bump()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(-inner);
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<FuncExpr> {
        match self.tok.clone() {
            Tok::Num { value, .. } => {
                self.bump()?;
                Ok(FuncExpr::Real(value))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let leaf = match name.as_str() {
                    "p" => Some(FuncExpr::Var),
                    "i" => Some(FuncExpr::Quat(Quaternion::I)),
                    "j" => Some(FuncExpr::Quat(Quaternion::J)),
                    "k" => Some(FuncExpr::Quat(Quaternion::K)),
                    _ => None,
                };
                if let Some(leaf) = leaf {
                    self.bump()?;
                    return Ok(leaf);
                }
                let head: fn(FuncExpr) -> FuncExpr = match name.as_str() {
                    "exp" => FuncExpr::exp,
                    "sin" => FuncExpr::sin,
                    "cos" => FuncExpr::cos,
                    _ => return Err(self.error("`p`, `i`, `j`, `k`, `exp`, `sin` or `cos`")),
                };
                self.bump()?;
                if self.tok != Tok::LParen {
                    return Err(self.error("`(`"));
                }
                self.bump()?;
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(head(arg))
            }
            _ => Err(self.error("expression")),
        }
    }

    fn expect_rparen(&mut self) -> PResult<()> {
        if self.tok != Tok::RParen {
            return Err(self.error("`)`"));
        }
        self.bump()
    }
}

/// Parses an expression in the grammar above.
pub fn parse(src: &str) -> Result<FuncExpr, ParseError> {
    parse_boxed(src).map_err(|e| *e)
}

fn parse_boxed(src: &str) -> PResult<FuncExpr> {
    let mut parser = Parser::new(src)?;
    let e = parser.expr()?;
    if parser.tok != Tok::End {
        return Err(parser.error("operator or end of input"));
    }
    Ok(e)
}

// Binding strength of a node when printed.
const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_POWER: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &FuncExpr) -> u8 {
    match e {
        FuncExpr::Add(..) | FuncExpr::Sub(..) => PREC_SUM,
        FuncExpr::Mul(..) | FuncExpr::Div(..) => PREC_PRODUCT,
        FuncExpr::Pow(..) => PREC_POWER,
        FuncExpr::Neg(_) => PREC_UNARY,
        FuncExpr::Real(r) if r.is_sign_negative() => PREC_UNARY,
        FuncExpr::Quat(q) if !is_basis_unit(*q) => PREC_SUM,
        _ => PREC_ATOM,
    }
}

fn is_basis_unit(q: Quaternion) -> bool {
    q == Quaternion::I || q == Quaternion::J || q == Quaternion::K
}

fn write_real(out: &mut String, r: f64) {
    use std::fmt::Write;
    let a = r.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        let _ = write!(out, "{r:e}");
    } else {
        let _ = write!(out, "{r}");
    }
}

fn write_quat(out: &mut String, q: Quaternion) {
    if q == Quaternion::I {
        out.push('i');
    } else if q == Quaternion::J {
        out.push('j');
    } else if q == Quaternion::K {
        out.push('k');
    } else {
        // General constant as x + y*i + z*j + u*k; evaluates to the same value.
        write_real(out, q.x);
        for (c, unit) in [(q.y, 'i'), (q.z, 'j'), (q.u, 'k')] {
            out.push_str(" + ");
            write_real(out, c);
            out.push('*');
            out.push(unit);
        }
    }
}

fn write_child(out: &mut String, e: &FuncExpr, min_prec: u8) {
    if precedence(e) < min_prec {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &FuncExpr) {
    match e {
        FuncExpr::Var => out.push('p'),
        FuncExpr::Real(r) => write_real(out, *r),
        FuncExpr::Quat(q) => write_quat(out, *q),
        FuncExpr::Neg(a) => {
            out.push('-');
            write_child(out, a, PREC_UNARY);
        }
        FuncExpr::Add(a, b) | FuncExpr::Sub(a, b) => {
            write_child(out, a, PREC_SUM);
            out.push_str(if matches!(e, FuncExpr::Add(..)) { " + " } else { " - " });
            write_child(out, b, PREC_PRODUCT);
        }
        FuncExpr::Mul(a, b) | FuncExpr::Div(a, b) => {
            write_child(out, a, PREC_PRODUCT);
            out.push_str(if matches!(e, FuncExpr::Mul(..)) { "*" } else { "/" });
            write_child(out, b, PREC_POWER);
        }
        FuncExpr::Pow(a, n) => {
            write_child(out, a, PREC_UNARY);
            out.push('^');
            out.push_str(&n.to_string());
        }
        FuncExpr::Exp(a) | FuncExpr::Sin(a) | FuncExpr::Cos(a) => {
            let name = match e {
                FuncExpr::Exp(_) => "exp",
                FuncExpr::Sin(_) => "sin",
                _ => "cos",
            };
            out.push_str(name);
            out.push('(');
            write_expr(out, a);
            out.push(')');
        }
    }
}

/// Canonical text with minimal parentheses.
///
/// `parse(&format(f)) == f` for trees whose real constants are non-negative and
/// whose quaternion constants are `i`, `j` or `k` (the trees [`parse`]
/// produces). Other trees print as equivalent expressions.
pub fn format(e: &FuncExpr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}
