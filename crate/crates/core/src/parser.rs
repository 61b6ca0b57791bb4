//! Concrete syntax: parsing and canonical printing of types, values,
//! combinators and `.pio` programs.
//!
//! ```text
//! type  ::= 'mu' IDENT '.' type | prod ('+' type)?
//! prod  ::= atom ('*' prod)?
//! atom  ::= '0' | '1' | IDENT | '(' type ')'
//!
//! expr  ::= sum (';' expr)?              -- diagram order: left runs first
//! sum   ::= tens ('(+)' sum)?
//! tens  ::= prim ('(*)' tens)?
//! prim  ::= KEYWORD | 'fold' '[' type ']' | 'unfold' '[' type ']'
//!         | 'trace' '(' expr ')' | 'inv' '(' expr ')' | '(' expr ')' | IDENT
//!
//! value ::= '()' | '(' value ',' value ')' | '(' value ')'
//!         | 'inl' value | 'inr' value | 'fold' value
//!
//! program ::= item*
//! item    ::= IDENT ':' type '<->' type '=' expr | IDENT '=' expr | 'main' '=' IDENT
//! ```
//!
//! `--` starts a line comment. `+` and `*` are right associative and `*`
//! binds tighter than `+`; likewise `;` < `(+)` < `(*)`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{Combinator, Value, ValueType};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Star,
    OPlus,
    OTimes,
    Semi,
    Colon,
    Eq,
    Iso,
    Dot,
    Comma,
    Zero,
    One,
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::LBracket => "'['",
            Tok::RBracket => "']'",
            Tok::Plus => "'+'",
            Tok::Star => "'*'",
            Tok::OPlus => "'(+)'",
            Tok::OTimes => "'(*)'",
            Tok::Semi => "';'",
            Tok::Colon => "':'",
            Tok::Eq => "'='",
            Tok::Iso => "'<->'",
            Tok::Dot => "'.'",
            Tok::Comma => "','",
            Tok::Zero => "'0'",
            Tok::One => "'1'",
            Tok::Ident(name) => return write!(f, "'{name}'"),
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

const SUFFIXED: [&str; 5] = ["assocl", "assocr", "unitl", "unitr", "swap"];

const RESERVED: [&str; 13] =
    ["mu", "inl", "inr", "fold", "unfold", "trace", "inv", "id", "distrib", "factor", "absorb", "unabsorb", "main"];

fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name) || SUFFIXED.contains(&name) || basic_from_keyword(name).is_some()
}

fn basic_from_keyword(word: &str) -> Option<Combinator> {
    use Combinator::*;
    Some(match word {
        "id" => Id,
        "assocl+" => AssocLPlus,
        "assocr+" => AssocRPlus,
        "unitl+" => UnitLPlus,
        "unitr+" => UnitRPlus,
        "swap+" => SwapPlus,
        "assocl*" => AssocLTimes,
        "assocr*" => AssocRTimes,
        "unitl*" => UnitLTimes,
        "unitr*" => UnitRTimes,
        "swap*" => SwapTimes,
        "distrib" => Distrib,
        "factor" => Factor,
        "absorb" => Absorb,
        "unabsorb" => Unabsorb,
        _ => return None,
    })
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! advance {
        ($n:expr) => {{
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let peek = |k: usize| chars.get(i + k).copied();
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '-' && peek(1) == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        let (tok, len) = match c {
            '(' if peek(1) == Some('+') && peek(2) == Some(')') => (Tok::OPlus, 3),
            '(' if peek(1) == Some('*') && peek(2) == Some(')') => (Tok::OTimes, 3),
            '<' if peek(1) == Some('-') && peek(2) == Some('>') => (Tok::Iso, 3),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            '+' => (Tok::Plus, 1),
            '*' => (Tok::Star, 1),
            ';' => (Tok::Semi, 1),
            ':' => (Tok::Colon, 1),
            '=' => (Tok::Eq, 1),
            '.' => (Tok::Dot, 1),
            ',' => (Tok::Comma, 1),
            '0' => (Tok::Zero, 1),
            '1' => (Tok::One, 1),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                let mut word: String = chars[i..j].iter().collect();
                if SUFFIXED.contains(&word.as_str()) && matches!(chars.get(j), Some('+') | Some('*')) {
                    word.push(chars[j]);
                    j += 1;
                }
                let len = j - i;
                (Tok::Ident(word), len)
            }
            other => return Err(SyntaxError::new(pos, format!("unexpected character '{other}'"))),
        };
        out.push((tok, pos));
        advance!(len);
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Combinator expressions as written in programs: like [`Combinator`] but
/// with references to earlier declarations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Basic(Combinator),
    Ref(String, Pos),
    Comp(Box<Expr>, Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Trace(Box<Expr>),
    Inv(Box<Expr>),
}

impl Expr {
    /// Replaces references using `lookup`; the first unresolved name is an error.
    pub fn resolve(&self, lookup: &dyn Fn(&str) -> Option<Combinator>) -> Result<Combinator, SyntaxError> {
        Ok(match self {
            Expr::Basic(c) => c.clone(),
            Expr::Ref(name, pos) => {
                lookup(name).ok_or_else(|| SyntaxError::new(*pos, format!("unknown combinator '{name}'")))?
            }
            Expr::Comp(f, g) => Combinator::then(f.resolve(lookup)?, g.resolve(lookup)?),
            Expr::Sum(f, g) => Combinator::sum(f.resolve(lookup)?, g.resolve(lookup)?),
            Expr::Prod(f, g) => Combinator::prod(f.resolve(lookup)?, g.resolve(lookup)?),
            Expr::Trace(f) => Combinator::trace(f.resolve(lookup)?),
            Expr::Inv(f) => Combinator::inv(f.resolve(lookup)?),
        })
    }

    /// Names referenced, with positions, in source order.
    pub fn references(&self) -> Vec<(&str, Pos)> {
        let mut out = Vec::new();
        fn go<'a>(e: &'a Expr, out: &mut Vec<(&'a str, Pos)>) {
            match e {
                Expr::Basic(_) => {}
                Expr::Ref(n, p) => out.push((n, *p)),
                Expr::Comp(f, g) | Expr::Sum(f, g) | Expr::Prod(f, g) => {
                    go(f, out);
                    go(g, out);
                }
                Expr::Trace(f) | Expr::Inv(f) => go(f, out),
            }
        }
        go(self, &mut out);
        out
    }
}

impl From<&Combinator> for Expr {
    fn from(c: &Combinator) -> Self {
        match c {
            Combinator::Comp(f, g) => Expr::Comp(Box::new((&**f).into()), Box::new((&**g).into())),
            Combinator::SumC(f, g) => Expr::Sum(Box::new((&**f).into()), Box::new((&**g).into())),
            Combinator::ProdC(f, g) => Expr::Prod(Box::new((&**f).into()), Box::new((&**g).into())),
            Combinator::Trace(f) => Expr::Trace(Box::new((&**f).into())),
            Combinator::Inv(f) => Expr::Inv(Box::new((&**f).into())),
            basic => Expr::Basic(basic.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: String,
    pub pos: Pos,
    pub ascription: Option<(ValueType, ValueType)>,
    pub body: Expr,
}

/// A parsed `.pio` file.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SourceProgram {
    pub declarations: Vec<Declaration>,
    pub entry: Option<(String, Pos)>,
}

impl SourceProgram {
    pub fn get(&self, name: &str) -> Option<&Declaration> {
        self.declarations.iter().find(|d| d.name == name)
    }

    /// The body of `name` with every reference inlined.
    pub fn resolve(&self, name: &str) -> Option<Combinator> {
        let mut done: HashMap<&str, Combinator> = HashMap::new();
        for decl in &self.declarations {
            let body = decl.body.resolve(&|n| done.get(n).cloned()).ok()?;
            if decl.name == name {
                return Some(body);
            }
            done.insert(&decl.name, body);
        }
        None
    }

    /// The declaration named by `main = ...`, or the only declaration.
    pub fn entry_name(&self) -> Option<&str> {
        match (&self.entry, self.declarations.as_slice()) {
            (Some((n, _)), _) => Some(n),
            (None, [only]) => Some(&only.name),
            _ => None,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: lex(src)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, SyntaxError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&format!("expected {tok}")))
        }
    }

    fn unexpected(&self, what: &str) -> SyntaxError {
        SyntaxError::new(self.pos(), format!("{what}, found {}", self.peek()))
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) if !is_reserved(&name) => {
                let pos = self.bump().1;
                Ok((name, pos))
            }
            _ => Err(self.unexpected("expected an identifier")),
        }
    }

    fn ty(&mut self) -> Result<ValueType, SyntaxError> {
        if self.is_word("mu") {
            self.bump();
            let (x, _) = self.ident()?;
            self.expect(Tok::Dot)?;
            let body = self.ty()?;
            return Ok(ValueType::Mu(x, Box::new(body)));
        }
        let left = self.ty_prod()?;
        if self.eat(&Tok::Plus) {
            Ok(ValueType::sum(left, self.ty()?))
        } else {
            Ok(left)
        }
    }

    fn ty_prod(&mut self) -> Result<ValueType, SyntaxError> {
        let left = self.ty_atom()?;
        if self.eat(&Tok::Star) {
            Ok(ValueType::prod(left, self.ty_prod_or_mu()?))
        } else {
            Ok(left)
        }
    }

    // `1 * mu x. ...` is accepted: a trailing mu extends to the right.
    fn ty_prod_or_mu(&mut self) -> Result<ValueType, SyntaxError> {
        if self.is_word("mu") {
            self.ty()
        } else {
            self.ty_prod()
        }
    }

    fn ty_atom(&mut self) -> Result<ValueType, SyntaxError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(ValueType::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(ValueType::One)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(w) if w == "mu" => self.ty(),
            Tok::Ident(_) => Ok(ValueType::Var(self.ident()?.0)),
            _ => Err(self.unexpected("expected a type")),
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let left = self.expr_sum()?;
        if self.eat(&Tok::Semi) {
            Ok(Expr::Comp(Box::new(left), Box::new(self.expr()?)))
        } else {
            Ok(left)
        }
    }

    fn expr_sum(&mut self) -> Result<Expr, SyntaxError> {
        let left = self.expr_tens()?;
        if self.eat(&Tok::OPlus) {
            Ok(Expr::Sum(Box::new(left), Box::new(self.expr_sum()?)))
        } else {
            Ok(left)
        }
    }

    fn expr_tens(&mut self) -> Result<Expr, SyntaxError> {
        let left = self.expr_prim()?;
        if self.eat(&Tok::OTimes) {
            Ok(Expr::Prod(Box::new(left), Box::new(self.expr_tens()?)))
        } else {
            Ok(left)
        }
    }

    fn annotation(&mut self, keyword: &str) -> Result<ValueType, SyntaxError> {
        if *self.peek() != Tok::LBracket {
            return Err(self.unexpected(&format!("'{keyword}' needs a type annotation '[...]'")));
        }
        self.bump();
        let t = self.ty()?;
        self.expect(Tok::RBracket)?;
        Ok(t)
    }

    fn expr_prim(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(w) => {
                if let Some(c) = basic_from_keyword(&w) {
                    self.bump();
                    return Ok(Expr::Basic(c));
                }
                match w.as_str() {
                    "fold" => {
                        self.bump();
                        Ok(Expr::Basic(Combinator::Fold(self.annotation("fold")?)))
                    }
                    "unfold" => {
                        self.bump();
                        Ok(Expr::Basic(Combinator::Unfold(self.annotation("unfold")?)))
                    }
                    "trace" | "inv" => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let inner = Box::new(self.expr()?);
                        self.expect(Tok::RParen)?;
                        Ok(if w == "trace" { Expr::Trace(inner) } else { Expr::Inv(inner) })
                    }
                    _ => {
                        let (name, pos) = self.ident()?;
                        Ok(Expr::Ref(name, pos))
                    }
                }
            }
            _ => Err(self.unexpected("expected a combinator")),
        }
    }

    fn value(&mut self) -> Result<Value, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Value::Unit);
                }
                let first = self.value()?;
                if self.eat(&Tok::Comma) {
                    let second = self.value()?;
                    self.expect(Tok::RParen)?;
                    Ok(Value::pair(first, second))
                } else {
                    self.expect(Tok::RParen)?;
                    Ok(first)
                }
            }
            Tok::Ident(w) if w == "inl" => {
                self.bump();
                Ok(Value::inl(self.value()?))
            }
            Tok::Ident(w) if w == "inr" => {
                self.bump();
                Ok(Value::inr(self.value()?))
            }
            Tok::Ident(w) if w == "fold" => {
                self.bump();
                Ok(Value::fold(self.value()?))
            }
            _ => Err(self.unexpected("expected a value")),
        }
    }

    fn program(&mut self) -> Result<SourceProgram, SyntaxError> {
        let mut prog = SourceProgram::default();
        while *self.peek() != Tok::Eof {
            if self.is_word("main") && *self.peek_at(1) == Tok::Eq {
                let pos = self.bump().1;
                self.bump();
                if prog.entry.is_some() {
                    return Err(SyntaxError::new(pos, "duplicate 'main'"));
                }
                prog.entry = Some(self.ident()?);
                continue;
            }
            let (name, pos) = self.ident()?;
            let ascription = if self.eat(&Tok::Colon) {
                let dom = self.ty()?;
                self.expect(Tok::Iso)?;
                let cod = self.ty()?;
                Some((dom, cod))
            } else {
                None
            };
            self.expect(Tok::Eq)?;
            let body = self.expr()?;
            prog.declarations.push(Declaration { name, pos, ascription, body });
        }
        validate_names(&prog)?;
        Ok(prog)
    }
}

fn validate_names(prog: &SourceProgram) -> Result<(), SyntaxError> {
    let mut seen: HashMap<&str, Pos> = HashMap::new();
    for decl in &prog.declarations {
        for (r, pos) in decl.body.references() {
            if !seen.contains_key(r) {
                let msg = if r == decl.name {
                    format!("'{r}' refers to itself; recursion is not allowed")
                } else {
                    format!("unknown combinator '{r}' (references must name earlier declarations)")
                };
                return Err(SyntaxError::new(pos, msg));
            }
        }
        if let Some(prev) = seen.insert(&decl.name, decl.pos) {
            return Err(SyntaxError::new(
                decl.pos,
                format!("duplicate declaration '{}' (first declared at {prev})", decl.name),
            ));
        }
    }
    if let Some((entry, pos)) = &prog.entry {
        if !seen.contains_key(entry.as_str()) {
            return Err(SyntaxError::new(*pos, format!("'main' names unknown declaration '{entry}'")));
        }
    }
    Ok(())
}

pub fn parse_type(text: &str) -> Result<ValueType, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses a closed combinator expression (no references).
pub fn parse_combinator(text: &str) -> Result<Combinator, SyntaxError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    e.resolve(&|_| None)
}

pub fn parse_value(text: &str) -> Result<Value, SyntaxError> {
    let mut p = Parser::new(text)?;
    let v = p.value()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_program(text: &str) -> Result<SourceProgram, SyntaxError> {
    Parser::new(text)?.program()
}

pub fn print_type(t: &ValueType) -> String {
    fn go(t: &ValueType, ctx: u8, out: &mut String) {
        let (level, paren) = match t {
            ValueType::Mu(..) => (0, ctx > 0),
            ValueType::Sum(..) => (1, ctx > 1),
            ValueType::Prod(..) => (2, ctx > 2),
            _ => (3, false),
        };
        let _ = level;
        if paren {
            out.push('(');
        }
        match t {
            ValueType::Zero => out.push('0'),
            ValueType::One => out.push('1'),
            ValueType::Var(x) => out.push_str(x),
            ValueType::Sum(a, b) => {
                go(a, 2, out);
                out.push_str(" + ");
                go(b, 1, out);
            }
            ValueType::Prod(a, b) => {
                go(a, 3, out);
                out.push_str(" * ");
                go(b, 2, out);
            }
            ValueType::Mu(x, body) => {
                out.push_str("mu ");
                out.push_str(x);
                out.push_str(". ");
                go(body, 0, out);
            }
        }
        if paren {
            out.push(')');
        }
    }
    let mut out = String::new();
    go(t, 0, &mut out);
    out
}

pub fn print_value(v: &Value) -> String {
    fn go(v: &Value, out: &mut String) {
        match v {
            Value::Unit => out.push_str("()"),
            Value::Pair(a, b) => {
                out.push('(');
                go(a, out);
                out.push_str(", ");
                go(b, out);
                out.push(')');
            }
            Value::InL(x) | Value::InR(x) | Value::Fold(x) => {
                out.push_str(match v {
                    Value::InL(_) => "inl ",
                    Value::InR(_) => "inr ",
                    _ => "fold ",
                });
                let atomic = matches!(**x, Value::Unit | Value::Pair(..));
                if !atomic {
                    out.push('(');
                }
                go(x, out);
                if !atomic {
                    out.push(')');
                }
            }
        }
    }
    let mut out = String::new();
    go(v, &mut out);
    out
}

pub fn print_combinator(c: &Combinator) -> String {
    fn go(c: &Combinator, ctx: u8, out: &mut String) {
        let paren = match c {
            Combinator::Comp(..) => ctx > 0,
            Combinator::SumC(..) => ctx > 1,
            Combinator::ProdC(..) => ctx > 2,
            _ => false,
        };
        if paren {
            out.push('(');
        }
        match c {
            Combinator::Comp(f, g) => {
                go(f, 1, out);
                out.push_str(" ; ");
                go(g, 0, out);
            }
            Combinator::SumC(f, g) => {
                go(f, 2, out);
                out.push_str(" (+) ");
                go(g, 1, out);
            }
            Combinator::ProdC(f, g) => {
                go(f, 3, out);
                out.push_str(" (*) ");
                go(g, 2, out);
            }
            Combinator::Trace(f) | Combinator::Inv(f) => {
                out.push_str(if matches!(c, Combinator::Trace(_)) { "trace(" } else { "inv(" });
                go(f, 0, out);
                out.push(')');
            }
            Combinator::Fold(t) | Combinator::Unfold(t) => {
                out.push_str(c.keyword().unwrap());
                out.push('[');
                out.push_str(&print_type(t));
                out.push(']');
            }
            basic => out.push_str(basic.keyword().expect("basic combinator")),
        }
        if paren {
            out.push(')');
        }
    }
    let mut out = String::new();
    go(c, 0, &mut out);
    out
}

pub fn print_expr(e: &Expr) -> String {
    fn go(e: &Expr, ctx: u8, out: &mut String) {
        let paren = match e {
            Expr::Comp(..) => ctx > 0,
            Expr::Sum(..) => ctx > 1,
            Expr::Prod(..) => ctx > 2,
            _ => false,
        };
        if paren {
            out.push('(');
        }
        match e {
            Expr::Basic(c) => out.push_str(&print_combinator(c)),
            Expr::Ref(n, _) => out.push_str(n),
            Expr::Comp(f, g) => {
                go(f, 1, out);
                out.push_str(" ; ");
                go(g, 0, out);
            }
            Expr::Sum(f, g) => {
                go(f, 2, out);
                out.push_str(" (+) ");
                go(g, 1, out);
            }
            Expr::Prod(f, g) => {
                go(f, 3, out);
                out.push_str(" (*) ");
                go(g, 2, out);
            }
            Expr::Trace(f) => {
                out.push_str("trace(");
                go(f, 0, out);
                out.push(')');
            }
            Expr::Inv(f) => {
                out.push_str("inv(");
                go(f, 0, out);
                out.push(')');
            }
        }
        if paren {
            out.push(')');
        }
    }
    let mut out = String::new();
    go(e, 0, &mut out);
    out
}

/// Canonical text of a whole program, one declaration per line.
pub fn print_program(p: &SourceProgram) -> String {
    let mut out = String::new();
    for d in &p.declarations {
        out.push_str(&d.name);
        if let Some((a, b)) = &d.ascription {
            out.push_str(" : ");
            out.push_str(&print_type(a));
            out.push_str(" <-> ");
            out.push_str(&print_type(b));
        }
        out.push_str(" = ");
        out.push_str(&print_expr(&d.body));
        out.push('\n');
    }
    if let Some((entry, _)) = &p.entry {
        out.push_str("main = ");
        out.push_str(entry);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Combinator as C;
    use ValueType as T;

    #[test]
    fn type_examples() {
        assert!(parse_type("1 + 1").unwrap().same_spelling(&T::sum(T::One, T::One)));
        assert!(parse_type("mu x. 1 + x").unwrap().same_spelling(&T::mu("x", T::sum(T::One, T::var("x")))));
        assert!(parse_type("(1 + 1) * 0").unwrap().same_spelling(&T::prod(T::sum(T::One, T::One), T::Zero)));
    }

    #[test]
    fn type_precedence_and_associativity() {
        let t = parse_type("1 * 0 + x * y + 1").unwrap();
        let expected = T::sum(T::prod(T::One, T::Zero), T::sum(T::prod(T::var("x"), T::var("y")), T::One));
        assert!(t.same_spelling(&expected));
        assert!(parse_type("1 * 1 * 1").unwrap().same_spelling(&T::prod(T::One, T::prod(T::One, T::One))));
    }

    #[test]
    fn combinator_examples() {
        assert_eq!(parse_combinator("swap+").unwrap(), C::SwapPlus);
        assert_eq!(parse_combinator("swap+ ; swap+").unwrap(), C::then(C::SwapPlus, C::SwapPlus));
        assert_eq!(parse_combinator("trace(swap+)").unwrap(), C::trace(C::SwapPlus));
        assert_eq!(
            parse_combinator("id (+) swap* ; fold[mu x. 1 + x]").unwrap(),
            C::then(C::sum(C::Id, C::SwapTimes), C::Fold(T::nat()))
        );
    }

    #[test]
    fn value_examples() {
        assert_eq!(parse_value("inl ()").unwrap(), Value::inl(Value::Unit));
        assert_eq!(parse_value("(inl (), ())").unwrap(), Value::pair(Value::inl(Value::Unit), Value::Unit));
        assert_eq!(parse_value("fold (inr (fold (inl ())))").unwrap(), Value::nat(1));
        assert_eq!(print_value(&Value::nat(1)), "fold (inr (fold (inl ())))");
    }

    #[test]
    fn fold_requires_annotation() {
        let err = parse_combinator("fold ; id").unwrap_err();
        assert!(err.message.contains("annotation"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_type("1 +\n  (0 *").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 7 });
        let err = parse_value("inl )").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 5 });
        assert!(parse_combinator("swap+ swap+").is_err());
        assert!(parse_type("1 % 1").is_err());
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(parse_combinator("foo").is_err());
        let err = parse_program("f : 1 <-> 1 = g\ng : 1 <-> 1 = id\n").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 15 });
    }

    #[test]
    fn program_format() {
        let src = "-- yanking\nyank : 1 + 1 <-> 1 + 1 =\n  trace(swap+)\n\nboth : (1+1)*1 <-> (1+1)*1 = yank (*) id -- ok\nmain = both\n";
        let p = parse_program(src).unwrap();
        assert_eq!(p.declarations.len(), 2);
        assert_eq!(p.declarations[1].pos, Pos { line: 5, col: 1 });
        assert_eq!(p.entry_name(), Some("both"));
        assert_eq!(p.resolve("both").unwrap(), C::prod(C::trace(C::SwapPlus), C::Id));
        let canon = print_program(&p);
        assert_eq!(
            canon,
            "yank : 1 + 1 <-> 1 + 1 = trace(swap+)\nboth : (1 + 1) * 1 <-> (1 + 1) * 1 = yank (*) id\nmain = both\n"
        );
        assert_eq!(print_program(&parse_program(&canon).unwrap()), canon);
    }

    #[test]
    fn duplicate_declarations_are_rejected() {
        let err = parse_program("f = id\nf = id\n").unwrap_err();
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn printing_parenthesizes_minimally() {
        let c = C::then(C::then(C::Id, C::SwapPlus), C::sum(C::prod(C::Id, C::Id), C::Id));
        assert_eq!(print_combinator(&c), "(id ; swap+) ; id (*) id (+) id");
        let t = T::prod(T::nat(), T::sum(T::One, T::Zero));
        assert_eq!(print_type(&t), "(mu x. 1 + x) * (1 + 0)");
    }
}
