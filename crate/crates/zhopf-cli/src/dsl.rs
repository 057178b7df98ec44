//! Text formats: the system DSL, basis matrices, constraint files and
//! sample-point files.
//!
//! System files:
//!
//! ```text
//! # comment
//! system n=3 N=3 k=2 b=beta
//! param a1, a2, b1, b2, c1, c2;
//! laurent c0;
//! dx1 = x2;
//! dx2 = x3;
//! dx3 = -(eps*a1 + eps^2*a2)*x3 - (eps*b1 + eps^2*b2)*x1
//!       + (-beta^2 + eps*c1 + eps^2*c2)*x2 + x1*x2^2 - x1^3;
//! ```
//!
//! `eps` is the small parameter; `x1..xn` are the phase variables; the
//! frequency symbol is implicitly declared and Laurent-flagged. Division is
//! only defined by rationals and by monomials in Laurent symbols.

use std::collections::BTreeMap;
use std::fmt;

use zhopf_core::poly::{Binding, MultiPoly, Var};
use zhopf_core::rational::{rat, Rat};
use zhopf_core::system::{Freq, RawSystem, SystemSpec, EPS};
use zhopf_core::Error as CoreError;

/// Parse error with position information.
#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

const RESERVED: &[&str] = &["pi", "theta", "R", "rho", EPS];

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Equals,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let bytes = line.as_bytes();
        let mut i = 0usize;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let col = i + 1;
            let mut push = |tok: Tok, w: usize| {
                out.push(Spanned {
                    tok,
                    line: lineno + 1,
                    col,
                });
                w
            };
            i += match c {
                ' ' | '\t' | '\r' => 1,
                '+' => push(Tok::Plus, 1),
                '-' => push(Tok::Minus, 1),
                '*' => push(Tok::Star, 1),
                '/' => push(Tok::Slash, 1),
                '^' => push(Tok::Caret, 1),
                '(' => push(Tok::LParen, 1),
                ')' => push(Tok::RParen, 1),
                ',' => push(Tok::Comma, 1),
                ';' => push(Tok::Semi, 1),
                '=' => push(Tok::Equals, 1),
                '0'..='9' => {
                    let start = i;
                    let mut j = i;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    out.push(Spanned {
                        tok: Tok::Int(line[start..j].to_string()),
                        line: lineno + 1,
                        col,
                    });
                    j - i
                }
                'a'..='z' | 'A'..='Z' | '_' => {
                    let start = i;
                    let mut j = i;
                    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    out.push(Spanned {
                        tok: Tok::Ident(line[start..j].to_string()),
                        line: lineno + 1,
                        col,
                    });
                    j - i
                }
                other => {
                    return Err(ParseError::new(
                        lineno + 1,
                        col,
                        format!("unexpected character `{other}`"),
                    ))
                }
            };
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Expression parser (over an explicit symbol table)
// ---------------------------------------------------------------------------

struct SymbolTable {
    /// name -> Laurent flag
    symbols: BTreeMap<String, bool>,
    n: usize,
}

impl SymbolTable {
    fn resolve(&self, name: &str, line: usize, col: usize) -> Result<Var, ParseError> {
        if name == EPS {
            return Ok(Var::new(EPS));
        }
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(i) = rest.parse::<usize>() {
                if i >= 1 && i <= self.n {
                    return Ok(Var::new(name));
                }
                return Err(ParseError::new(
                    line,
                    col,
                    format!("phase variable `{name}` out of range 1..={}", self.n),
                ));
            }
        }
        match self.symbols.get(name) {
            Some(true) => Ok(Var::laurent(name)),
            Some(false) => Ok(Var::new(name)),
            None => Err(ParseError::new(
                line,
                col,
                format!("unknown symbol `{name}` (declare it with `param`)"),
            )),
        }
    }
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    table: &'a SymbolTable,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(s) => ParseError::new(s.line, s.col, message),
            None => ParseError::new(0, 0, format!("{} (at end of input)", message.into())),
        }
    }

    fn eat(&mut self, tok: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(s) if s.tok == *tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here(format!("expected {tok:?}"))),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Star => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    let (line, col) = (s.line, s.col);
                    self.pos += 1;
                    let divisor = self.factor()?;
                    let inv = divisor.invert_monomial().map_err(|e| {
                        ParseError::new(
                            line,
                            col,
                            format!("division only by rationals or Laurent monomials: {e}"),
                        )
                    })?;
                    acc = acc.mul(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // factor := ('-'|'+') factor | atom ('^' exponent)?
    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if let Some(s) = self.peek() {
                    if s.tok == Tok::Caret {
                        let (line, col) = (s.line, s.col);
                        self.pos += 1;
                        let exp = self.exponent()?;
                        return if exp >= 0 {
                            Ok(base.pow(exp as u32))
                        } else {
                            let inv = base.invert_monomial().map_err(|e| {
                                ParseError::new(
                                    line,
                                    col,
                                    format!("negative power needs a Laurent monomial base: {e}"),
                                )
                            })?;
                            Ok(inv.pow((-exp) as u32))
                        };
                    }
                }
                Ok(base)
            }
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let neg = match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        match self.peek().cloned() {
            Some(Spanned {
                tok: Tok::Int(d), ..
            }) => {
                self.pos += 1;
                let v: i64 = d
                    .parse()
                    .map_err(|_| self.err_here("exponent out of range"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err_here("expected integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek().cloned() {
            Some(Spanned {
                tok: Tok::Int(d), ..
            }) => {
                self.pos += 1;
                let n: Rat = d
                    .parse::<num_bigint::BigInt>()
                    .map(Rat::from_integer)
                    .map_err(|_| self.err_here("integer out of range"))?;
                Ok(MultiPoly::constant(n))
            }
            Some(Spanned {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                self.pos += 1;
                let var = self.table.resolve(&name, line, col)?;
                Ok(MultiPoly::var(&var))
            }
            Some(Spanned {
                tok: Tok::LParen, ..
            }) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.eat(&Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.err_here("expected a number, symbol or parenthesized expression")),
        }
    }
}

// ---------------------------------------------------------------------------
// System files
// ---------------------------------------------------------------------------

/// A parsed system file: the validated raw system plus symbol declarations.
#[derive(Debug)]
pub struct SystemFile {
    pub raw: RawSystem,
    pub params: Vec<(String, bool)>,
    pub freq_name: Option<String>,
}

impl SystemFile {
    pub fn into_spec(&self) -> Result<SystemSpec, CoreError> {
        self.raw.into_spec()
    }

    /// Names treated as nonzero for numerator normalization: the frequency
    /// symbol and every Laurent-flagged parameter.
    pub fn nonzero_symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        if let Some(f) = &self.freq_name {
            out.push(f.clone());
        }
        for (name, laurent) in &self.params {
            if *laurent && !out.contains(name) {
                out.push(name.clone());
            }
        }
        out
    }
}

/// Parse a system file.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let toks = lex(text)?;
    let mut pos = 0usize;

    // Header: system n=<int> N=<int> k=<int> b=<sym|rational>
    let expect_ident =
        |toks: &[Spanned], pos: &mut usize, what: &str| -> Result<Spanned, ParseError> {
            match toks.get(*pos) {
                Some(
                    s @ Spanned {
                        tok: Tok::Ident(_), ..
                    },
                ) => {
                    *pos += 1;
                    Ok(s.clone())
                }
                other => Err(match other {
                    Some(s) => ParseError::new(s.line, s.col, format!("expected {what}")),
                    None => ParseError::new(0, 0, format!("expected {what}")),
                }),
            }
        };

    let head = expect_ident(&toks, &mut pos, "`system` header")?;
    if !matches!(&head.tok, Tok::Ident(w) if w == "system") {
        return Err(ParseError::new(
            head.line,
            head.col,
            "file must start with a `system` header",
        ));
    }
    let mut n: Option<usize> = None;
    let mut degree: Option<usize> = None;
    let mut order: Option<usize> = None;
    let mut freq: Option<(Freq, Option<String>)> = None;
    for _ in 0..4 {
        let key = expect_ident(&toks, &mut pos, "header field (n, N, k or b)")?;
        let Tok::Ident(key_name) = &key.tok else {
            unreachable!()
        };
        if !matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Equals)) {
            return Err(ParseError::new(
                key.line,
                key.col,
                "expected `=` in header field",
            ));
        }
        pos += 1;
        match key_name.as_str() {
            "n" | "N" | "k" => {
                let value = match toks.get(pos) {
                    Some(Spanned {
                        tok: Tok::Int(d), ..
                    }) => {
                        pos += 1;
                        d.parse::<usize>().map_err(|_| {
                            ParseError::new(key.line, key.col, "header value out of range")
                        })?
                    }
                    _ => return Err(ParseError::new(key.line, key.col, "expected an integer")),
                };
                match key_name.as_str() {
                    "n" => n = Some(value),
                    "N" => degree = Some(value),
                    _ => order = Some(value),
                }
            }
            "b" => {
                // Rational (possibly negative, possibly p/q) or a symbol.
                match toks.get(pos).cloned() {
                    Some(Spanned {
                        tok: Tok::Ident(name),
                        line,
                        col,
                    }) => {
                        pos += 1;
                        if RESERVED.contains(&name.as_str()) || name.starts_with('x') {
                            return Err(ParseError::new(line, col, "reserved frequency symbol"));
                        }
                        freq = Some((Freq::Sym(Var::laurent(&name)), Some(name)));
                    }
                    Some(Spanned {
                        tok: Tok::Minus, ..
                    })
                    | Some(Spanned {
                        tok: Tok::Int(_), ..
                    }) => {
                        let neg = if matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Minus)) {
                            pos += 1;
                            true
                        } else {
                            false
                        };
                        let Some(Spanned {
                            tok: Tok::Int(numer),
                            line,
                            col,
                        }) = toks.get(pos).cloned()
                        else {
                            return Err(ParseError::new(key.line, key.col, "expected a rational"));
                        };
                        pos += 1;
                        let mut value = numer
                            .parse::<num_bigint::BigInt>()
                            .map(Rat::from_integer)
                            .map_err(|_| ParseError::new(line, col, "integer out of range"))?;
                        if matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Slash)) {
                            pos += 1;
                            let Some(Spanned {
                                tok: Tok::Int(denom),
                                ..
                            }) = toks.get(pos).cloned()
                            else {
                                return Err(ParseError::new(line, col, "expected a denominator"));
                            };
                            pos += 1;
                            let d = denom.parse::<num_bigint::BigInt>().map_err(|_| {
                                ParseError::new(line, col, "denominator out of range")
                            })?;
                            if d == 0.into() {
                                return Err(ParseError::new(line, col, "zero denominator"));
                            }
                            value /= Rat::from_integer(d);
                        }
                        if neg {
                            value = -value;
                        }
                        if value == rat(0) {
                            return Err(ParseError::new(line, col, "frequency b must be nonzero"));
                        }
                        freq = Some((Freq::Num(value), None));
                    }
                    other => {
                        let (l, c) = other.map(|s| (s.line, s.col)).unwrap_or((0, 0));
                        return Err(ParseError::new(l, c, "expected a symbol or rational for b"));
                    }
                }
            }
            other => {
                return Err(ParseError::new(
                    key.line,
                    key.col,
                    format!("unknown header field `{other}`"),
                ))
            }
        }
    }
    let (n, degree, order) = match (n, degree, order) {
        (Some(n), Some(d), Some(k)) => (n, d, k),
        _ => {
            return Err(ParseError::new(
                head.line,
                head.col,
                "header must set n, N and k",
            ))
        }
    };
    let (freq, freq_name) = freq
        .ok_or_else(|| ParseError::new(head.line, head.col, "header must set the frequency b"))?;

    // Declarations and equations.
    let mut table = SymbolTable {
        symbols: BTreeMap::new(),
        n,
    };
    if let Some(name) = &freq_name {
        table.symbols.insert(name.clone(), true);
    }
    let mut params: Vec<(String, bool)> = freq_name.iter().map(|f| (f.clone(), true)).collect();
    let mut equations: Vec<Option<(MultiPoly, usize, usize)>> = vec![None; n];

    while pos < toks.len() {
        let stmt = expect_ident(&toks, &mut pos, "`param`, `laurent` or `dx<i> =` statement")?;
        let Tok::Ident(word) = &stmt.tok else {
            unreachable!()
        };
        match word.as_str() {
            "param" | "laurent" => {
                let laurent = word == "laurent";
                loop {
                    let sym = expect_ident(&toks, &mut pos, "parameter name")?;
                    let Tok::Ident(name) = &sym.tok else {
                        unreachable!()
                    };
                    if RESERVED.contains(&name.as_str())
                        || (name.starts_with('x') && name[1..].parse::<usize>().is_ok())
                    {
                        return Err(ParseError::new(
                            sym.line,
                            sym.col,
                            format!("`{name}` is reserved"),
                        ));
                    }
                    match table.symbols.get(name.as_str()) {
                        Some(existing) if *existing == laurent => {}
                        Some(_) => {
                            return Err(ParseError::new(
                                sym.line,
                                sym.col,
                                format!("`{name}` redeclared with a different Laurent flag"),
                            ))
                        }
                        None => {
                            table.symbols.insert(name.clone(), laurent);
                            params.push((name.clone(), laurent));
                        }
                    }
                    match toks.get(pos).map(|s| s.tok.clone()) {
                        Some(Tok::Comma) => {
                            pos += 1;
                        }
                        Some(Tok::Semi) => {
                            pos += 1;
                            break;
                        }
                        _ => {
                            return Err(ParseError::new(
                                sym.line,
                                sym.col,
                                "expected `,` or `;` in declaration",
                            ))
                        }
                    }
                }
            }
            _ if word.starts_with("dx") => {
                let idx: usize = word[2..].parse().map_err(|_| {
                    ParseError::new(stmt.line, stmt.col, "expected `dx<i>` with an index")
                })?;
                if idx < 1 || idx > n {
                    return Err(ParseError::new(
                        stmt.line,
                        stmt.col,
                        format!("equation index {idx} out of range 1..={n}"),
                    ));
                }
                if equations[idx - 1].is_some() {
                    return Err(ParseError::new(
                        stmt.line,
                        stmt.col,
                        format!("equation dx{idx} defined twice"),
                    ));
                }
                if !matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Equals)) {
                    return Err(ParseError::new(
                        stmt.line,
                        stmt.col,
                        "expected `=` after dx<i>",
                    ));
                }
                pos += 1;
                let mut parser = Parser {
                    toks: &toks,
                    pos,
                    table: &table,
                };
                let rhs = parser.expr()?;
                pos = parser.pos;
                if !matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Semi)) {
                    return Err(ParseError::new(
                        stmt.line,
                        stmt.col,
                        "equation must end with `;`",
                    ));
                }
                pos += 1;
                equations[idx - 1] = Some((rhs, stmt.line, stmt.col));
            }
            other => {
                return Err(ParseError::new(
                    stmt.line,
                    stmt.col,
                    format!("unknown statement `{other}`"),
                ))
            }
        }
    }
    let mut eqs = Vec::with_capacity(n);
    for (i, e) in equations.into_iter().enumerate() {
        match e {
            Some((rhs, _, _)) => eqs.push(rhs),
            None => {
                return Err(ParseError::new(
                    0,
                    0,
                    format!("missing equation dx{}", i + 1),
                ));
            }
        }
    }
    Ok(SystemFile {
        raw: RawSystem {
            n,
            degree,
            order,
            freq,
            equations: eqs,
        },
        params,
        freq_name,
    })
}

// ---------------------------------------------------------------------------
// Basis, constraint and point files
// ---------------------------------------------------------------------------

/// Basis file: `basis n=<int>` followed by n comma-separated rows ending
/// with `;`. Entries are expressions in the declared parameters.
pub fn parse_basis(text: &str, system: &SystemFile) -> Result<Vec<Vec<MultiPoly>>, ParseError> {
    let toks = lex(text)?;
    let n = system.raw.n;
    let table = SymbolTable {
        symbols: system.params.iter().cloned().collect(),
        n,
    };
    let mut pos = 0usize;
    match toks.get(pos) {
        Some(Spanned {
            tok: Tok::Ident(w), ..
        }) if w == "basis" => pos += 1,
        other => {
            let (l, c) = other.map(|s| (s.line, s.col)).unwrap_or((1, 1));
            return Err(ParseError::new(
                l,
                c,
                "basis file must start with `basis n=<int>`",
            ));
        }
    }
    // n=<int>
    match (toks.get(pos), toks.get(pos + 1), toks.get(pos + 2)) {
        (
            Some(Spanned {
                tok: Tok::Ident(w), ..
            }),
            Some(Spanned {
                tok: Tok::Equals, ..
            }),
            Some(Spanned {
                tok: Tok::Int(d),
                line,
                col,
            }),
        ) if w == "n" => {
            let v: usize = d
                .parse()
                .map_err(|_| ParseError::new(*line, *col, "size out of range"))?;
            if v != n {
                return Err(ParseError::new(
                    *line,
                    *col,
                    format!("basis size {v} does not match system dimension {n}"),
                ));
            }
            pos += 3;
        }
        _ => {
            return Err(ParseError::new(
                1,
                1,
                "basis header must be `basis n=<int>`",
            ));
        }
    }
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut parser = Parser {
                toks: &toks,
                pos,
                table: &table,
            };
            row.push(parser.expr()?);
            pos = parser.pos;
            let expected = if j + 1 == n { Tok::Semi } else { Tok::Comma };
            match toks.get(pos) {
                Some(s) if s.tok == expected => pos += 1,
                other => {
                    let (l, c) = other.map(|s| (s.line, s.col)).unwrap_or((0, 0));
                    return Err(ParseError::new(
                        l,
                        c,
                        "expected `,` between entries, `;` after row",
                    ));
                }
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Constraint file: `name = value;` entries (value: rational or symbol).
pub fn parse_constraints(text: &str) -> Result<BTreeMap<String, Binding>, ParseError> {
    let toks = lex(text)?;
    let mut out = BTreeMap::new();
    let mut pos = 0usize;
    while pos < toks.len() {
        let Some(Spanned {
            tok: Tok::Ident(name),
            line,
            col,
        }) = toks.get(pos).cloned()
        else {
            let s = &toks[pos];
            return Err(ParseError::new(s.line, s.col, "expected a symbol name"));
        };
        pos += 1;
        if !matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Equals)) {
            return Err(ParseError::new(line, col, "expected `=`"));
        }
        pos += 1;
        let binding = match toks.get(pos).cloned() {
            Some(Spanned {
                tok: Tok::Ident(target),
                ..
            }) => {
                pos += 1;
                Binding::Poly(MultiPoly::var(&Var::new(&target)))
            }
            _ => {
                let (value, next) = parse_rational(&toks, pos)?;
                pos = next;
                Binding::Const(value)
            }
        };
        if !matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Semi)) {
            return Err(ParseError::new(line, col, "constraint must end with `;`"));
        }
        pos += 1;
        out.insert(name, binding);
    }
    Ok(out)
}

/// Points file: one or more `point name=value, ...;` records.
pub fn parse_points(text: &str) -> Result<Vec<BTreeMap<String, Rat>>, ParseError> {
    let toks = lex(text)?;
    let mut out = Vec::new();
    let mut pos = 0usize;
    while pos < toks.len() {
        match toks.get(pos) {
            Some(Spanned {
                tok: Tok::Ident(w), ..
            }) if w == "point" => pos += 1,
            Some(s) => {
                return Err(ParseError::new(s.line, s.col, "expected a `point` record"));
            }
            None => break,
        }
        let mut point = BTreeMap::new();
        loop {
            let Some(Spanned {
                tok: Tok::Ident(name),
                line,
                col,
            }) = toks.get(pos).cloned()
            else {
                let (l, c) = toks.get(pos).map(|s| (s.line, s.col)).unwrap_or((0, 0));
                return Err(ParseError::new(l, c, "expected a parameter name"));
            };
            pos += 1;
            if !matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Equals)) {
                return Err(ParseError::new(line, col, "expected `=`"));
            }
            pos += 1;
            let (value, next) = parse_rational(&toks, pos)?;
            pos = next;
            point.insert(name, value);
            match toks.get(pos).map(|s| s.tok.clone()) {
                Some(Tok::Comma) => pos += 1,
                Some(Tok::Semi) => {
                    pos += 1;
                    break;
                }
                _ => return Err(ParseError::new(line, col, "expected `,` or `;`")),
            }
        }
        out.push(point);
    }
    Ok(out)
}

fn parse_rational(toks: &[Spanned], mut pos: usize) -> Result<(Rat, usize), ParseError> {
    let neg = match toks.get(pos).map(|s| &s.tok) {
        Some(Tok::Minus) => {
            pos += 1;
            true
        }
        _ => false,
    };
    let Some(Spanned {
        tok: Tok::Int(numer),
        line,
        col,
    }) = toks.get(pos).cloned()
    else {
        let (l, c) = toks.get(pos).map(|s| (s.line, s.col)).unwrap_or((0, 0));
        return Err(ParseError::new(l, c, "expected a rational number"));
    };
    pos += 1;
    let mut value = numer
        .parse::<num_bigint::BigInt>()
        .map(Rat::from_integer)
        .map_err(|_| ParseError::new(line, col, "integer out of range"))?;
    if matches!(toks.get(pos).map(|s| &s.tok), Some(Tok::Slash)) {
        pos += 1;
        let Some(Spanned {
            tok: Tok::Int(denom),
            ..
        }) = toks.get(pos).cloned()
        else {
            return Err(ParseError::new(line, col, "expected a denominator"));
        };
        pos += 1;
        let d = denom
            .parse::<num_bigint::BigInt>()
            .map_err(|_| ParseError::new(line, col, "denominator out of range"))?;
        if d == 0.into() {
            return Err(ParseError::new(line, col, "zero denominator"));
        }
        value /= Rat::from_integer(d);
    }
    Ok((if neg { -value } else { value }, pos))
}

// ---------------------------------------------------------------------------
// System printing (round-trip support)
// ---------------------------------------------------------------------------

/// Render a validated spec back into DSL text. Parsing the output yields the
/// same spec (the canonical term order makes this deterministic).
pub fn print_system(spec: &SystemSpec, params: &[(String, bool)]) -> String {
    let mut out = String::new();
    let freq_text = match &spec.freq {
        Freq::Sym(v) => v.name().to_string(),
        Freq::Num(q) => q.to_string(),
    };
    out.push_str(&format!(
        "system n={} N={} k={} b={}\n",
        spec.n, spec.degree, spec.order, freq_text
    ));
    let plain: Vec<&str> = params
        .iter()
        .filter(|(name, laurent)| !laurent && Some(name.as_str()) != freq_symbol(spec))
        .map(|(n, _)| n.as_str())
        .collect();
    if !plain.is_empty() {
        out.push_str(&format!("param {};\n", plain.join(", ")));
    }
    let extra_laurent: Vec<&str> = params
        .iter()
        .filter(|(name, laurent)| *laurent && Some(name.as_str()) != freq_symbol(spec))
        .map(|(n, _)| n.as_str())
        .collect();
    if !extra_laurent.is_empty() {
        out.push_str(&format!("laurent {};\n", extra_laurent.join(", ")));
    }
    // Reassemble the equations: Jordan part plus tables.
    for eq in 0..spec.n {
        let mut parts: Vec<String> = Vec::new();
        if eq == 0 {
            parts.push(format!("-({freq_text})*x2"));
        } else if eq == 1 {
            parts.push(format!("({freq_text})*x1"));
        }
        for (key, coeff) in spec.coeffs() {
            if key.eq != eq {
                continue;
            }
            let mut term = String::new();
            if key.eps > 0 {
                term.push_str("eps");
                if key.eps > 1 {
                    term.push_str(&format!("^{}", key.eps));
                }
                term.push('*');
            }
            term.push_str(&format!("({coeff})"));
            for (i, e) in key.exps.iter().enumerate() {
                if *e > 0 {
                    term.push_str(&format!("*x{}", i + 1));
                    if *e > 1 {
                        term.push_str(&format!("^{e}"));
                    }
                }
            }
            parts.push(term);
        }
        let rhs = if parts.is_empty() {
            "0*x1".to_string()
        } else {
            parts.join(" + ")
        };
        out.push_str(&format!("dx{} = {};\n", eq + 1, rhs));
    }
    out
}

fn freq_symbol(spec: &SystemSpec) -> Option<&str> {
    match &spec.freq {
        Freq::Sym(v) => Some(v.name()),
        Freq::Num(_) => None,
    }
}
