//! Recursive-descent parser for identity text.
//!
//! Precedence, loosest first: `+ -`, `*`, unary `-`, `^`. Exponents, like every
//! other index position, must be index expressions.
//! A literal written directly against a symbol (`2p`) is a product that binds
//! like an atom.

use super::ast::{Expr, SeqKind};
use super::DslError;

const MAX_DEPTH: usize = 200;

pub(crate) const KEYWORDS: [&str; 7] = ["F", "L", "G", "binom", "sign", "pow5floor", "sum"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    EqEq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    start: usize,
    end: usize,
}

fn lex(text: &str, line0: usize, col0: usize) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut line = line0;
    let mut col = col0;
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        let (tok_line, tok_col) = (line, col);
        let tok = if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
                col += 1;
            }
            let digits = &text[start..end];
            let v = digits.parse::<i64>().map_err(|_| DslError::Syntax {
                line: tok_line,
                col: tok_col,
                found: format!("integer {digits}"),
                expected: vec!["integer literal that fits in 64 bits".into()],
            })?;
            out.push(Token { tok: Tok::Int(v), line: tok_line, col: tok_col, start, end });
            continue;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
                col += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..end].to_string()),
                line: tok_line,
                col: tok_col,
                start,
                end,
            });
            continue;
        } else {
            chars.next();
            col += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '=' => {
                    if matches!(chars.peek(), Some(&(_, '='))) {
                        chars.next();
                        col += 1;
                        Tok::EqEq
                    } else {
                        return Err(DslError::Syntax {
                            line: tok_line,
                            col: tok_col,
                            found: "`=`".into(),
                            expected: vec!["`==`".into()],
                        });
                    }
                }
                other => {
                    return Err(DslError::Syntax {
                        line: tok_line,
                        col: tok_col,
                        found: format!("character {other:?}"),
                        expected: expected(&["integer", "identifier", "operator", "`(`", "`)`", "`,`"]),
                    })
                }
            }
        };
        let end = start + c.len_utf8() + if tok == Tok::EqEq { 1 } else { 0 };
        out.push(Token { tok, line: tok_line, col: tok_col, start, end });
    }
    out.push(Token { tok: Tok::Eof, line, col, start: text.len(), end: text.len() });
    Ok(out)
}

fn expected(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

struct Parser<'p> {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    params: &'p [String],
    bound: Vec<String>,
}

/// Parses `lhs == rhs`, checking every symbol against `params` (plus sum
/// variables in scope). `line`/`col` locate the first character of `text`
/// for error messages.
pub(crate) fn parse_sides(
    text: &str,
    params: &[String],
    line: usize,
    col: usize,
) -> Result<(Expr, Expr), DslError> {
    let mut p = Parser::new(text, params, line, col)?;
    let lhs = p.expr()?;
    p.expect(Tok::EqEq, &["`+`", "`-`", "`*`", "`^`", "`==`"])?;
    let rhs = p.expr()?;
    p.expect(Tok::Eof, &["`+`", "`-`", "`*`", "`^`", "end of input"])?;
    Ok((lhs, rhs))
}

/// Parses a single expression (no `==`).
pub(crate) fn parse_expr(text: &str, params: &[String]) -> Result<Expr, DslError> {
    let mut p = Parser::new(text, params, 1, 1)?;
    let e = p.expr()?;
    p.expect(Tok::Eof, &["`+`", "`-`", "`*`", "`^`", "end of input"])?;
    Ok(e)
}

impl<'p> Parser<'p> {
    fn new(text: &str, params: &'p [String], line: usize, col: usize) -> Result<Self, DslError> {
        Ok(Parser {
            tokens: lex(text, line, col)?,
            pos: 0,
            depth: 0,
            params,
            bound: Vec::new(),
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected_set: &[&str]) -> DslError {
        let t = self.peek();
        DslError::Syntax {
            line: t.line,
            col: t.col,
            found: t.tok.describe(),
            expected: expected(expected_set),
        }
    }

    fn expect(&mut self, tok: Tok, expected_set: &[&str]) -> Result<Token, DslError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error_here(expected_set))
        }
    }

    fn enter(&mut self) -> Result<(), DslError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let t = self.peek();
            return Err(DslError::Invalid {
                line: t.line,
                col: t.col,
                message: format!("expression nested deeper than {MAX_DEPTH} levels"),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.peek().clone();
        self.enter()?;
        let exp = self.power()?;
        self.depth -= 1;
        self.require_index(&exp, &at, "exponent")?;
        Ok(Expr::Pow(Box::new(base), Box::new(exp)))
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(v) => {
                self.bump();
                // `2p`: a literal written flush against a plain symbol.
                let next = self.peek().clone();
                if let Tok::Ident(name) = &next.tok {
                    let is_call = KEYWORDS.contains(&name.as_str());
                    if next.start == t.end && !is_call {
                        self.bump();
                        let sym = self.symbol(name, &next)?;
                        return Ok(Expr::Mul(Box::new(Expr::Int(v)), Box::new(sym)));
                    }
                }
                Ok(Expr::Int(v))
            }
            Tok::Ident(ref name) => {
                self.bump();
                if KEYWORDS.contains(&name.as_str()) {
                    self.call(name, &t)
                } else {
                    self.symbol(name, &t)
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, &["`+`", "`-`", "`*`", "`^`", "`)`"])?;
                Ok(e)
            }
            _ => Err(self.error_here(&["integer", "identifier", "`(`", "`-`"])),
        }
    }

    fn symbol(&self, name: &str, at: &Token) -> Result<Expr, DslError> {
        let known = self.params.iter().any(|p| p == name) || self.bound.iter().any(|b| b == name);
        if !known {
            return Err(DslError::Unbound {
                symbol: name.to_string(),
                line: at.line,
                col: at.col,
            });
        }
        Ok(Expr::Sym(name.to_string()))
    }

    fn index_arg(&mut self, what: &str) -> Result<Expr, DslError> {
        let at = self.peek().clone();
        let e = self.expr()?;
        self.require_index(&e, &at, what)?;
        Ok(e)
    }

    fn require_index(&self, e: &Expr, at: &Token, what: &str) -> Result<(), DslError> {
        if e.is_index_expr() {
            Ok(())
        } else {
            Err(DslError::Invalid {
                line: at.line,
                col: at.col,
                message: format!(
                    "{what} `{}` must be an index expression (literals, symbols, +, -, *)",
                    super::printer::print_expr(e)
                ),
            })
        }
    }

    fn call(&mut self, name: &str, at: &Token) -> Result<Expr, DslError> {
        self.expect(Tok::LParen, &["`(`"])?;
        let args_close = &["`+`", "`-`", "`*`", "`^`", "`)`"];
        let args_more = &["`+`", "`-`", "`*`", "`^`", "`,`"];
        let e = match name {
            "F" | "L" | "G" => {
                let kind = match name {
                    "F" => SeqKind::F,
                    "L" => SeqKind::L,
                    _ => SeqKind::G,
                };
                let arg = self.index_arg(&format!("argument of {name}"))?;
                self.expect(Tok::RParen, args_close)?;
                Expr::Seq(kind, Box::new(arg))
            }
            "binom" => {
                let top = self.index_arg("binomial upper argument")?;
                self.expect(Tok::Comma, args_more)?;
                let bottom = self.index_arg("binomial lower argument")?;
                self.expect(Tok::RParen, args_close)?;
                Expr::Binom(Box::new(top), Box::new(bottom))
            }
            "sign" => {
                let arg = self.index_arg("sign exponent")?;
                self.expect(Tok::RParen, args_close)?;
                Expr::Sign(Box::new(arg))
            }
            "pow5floor" => {
                let arg = self.index_arg("pow5floor argument")?;
                self.expect(Tok::RParen, args_close)?;
                Expr::Pow5Floor(Box::new(arg))
            }
            "sum" => self.sum(at)?,
            _ => unreachable!("not a keyword: {name}"),
        };
        Ok(e)
    }

    fn sum(&mut self, at: &Token) -> Result<Expr, DslError> {
        if !self.bound.is_empty() {
            return Err(DslError::Invalid {
                line: at.line,
                col: at.col,
                message: "nested sums are not supported".into(),
            });
        }
        let var_tok = self.peek().clone();
        let var = match &var_tok.tok {
            Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => v.clone(),
            _ => return Err(self.error_here(&["summation variable"])),
        };
        self.bump();
        if self.params.iter().any(|p| *p == var) {
            return Err(DslError::Invalid {
                line: var_tok.line,
                col: var_tok.col,
                message: format!("summation variable `{var}` shadows a parameter"),
            });
        }
        let args_more = &["`+`", "`-`", "`*`", "`^`", "`,`"];
        self.expect(Tok::Comma, &["`,`"])?;
        let lo = self.index_arg("lower sum bound")?;
        self.expect(Tok::Comma, args_more)?;
        let hi = self.index_arg("upper sum bound")?;
        self.expect(Tok::Comma, args_more)?;
        self.bound.push(var.clone());
        let body = self.expr();
        self.bound.pop();
        let body = body?;
        self.expect(Tok::RParen, &["`+`", "`-`", "`*`", "`^`", "`)`"])?;
        Ok(Expr::Sum {
            var,
            lo: Box::new(lo),
            hi: Box::new(hi),
            body: Box::new(body),
        })
    }
}
