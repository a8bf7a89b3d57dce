//! A small language for writing Fibonacci-family identities as data.
//!
//! ```text
//! sum(k,0,n, binom(n,k)*sign(k)*F(m)^k*F(m+q)^(n-k)*G(p+q*k)) == sign(n*m)*F(q)^n*G(p-n*m)
//! ```
//!
//! `F`, `L` and `G` read the Fibonacci, Lucas and seeded sequences; `sign(e)`
//! is `(-1)^e`; `pow5floor(e)` is `5^floor(e/2)`; `sum(k, lo, hi, body)` is a
//! bounded sum. The seed of `G` is not part of the text.

mod ast;
mod catalog;
mod parser;
mod printer;

use thiserror::Error;

pub use ast::{Expr, SeqKind};
pub use catalog::{builtin_catalog, Catalog, BUILTIN_CATALOG_TEXT};
pub use printer::print_expr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{line}:{col}: syntax error: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        line: usize,
        col: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("{line}:{col}: unbound symbol `{symbol}`")]
    Unbound {
        symbol: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: {message}")]
    Invalid {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Catalog { line: usize, message: String },
}

/// How an entry relates to a rank-parametric identity: it is `source` with
/// the rank fixed at `rank`, with this entry's parameter names mapped to the
/// source's by `relabel` (`(local, source)` pairs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub source: String,
    pub rank: i64,
    pub relabel: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub params: Vec<String>,
    pub paper_tag: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub expands: Option<Expansion>,
}

fn check_params(params: &[String]) -> Result<(), DslError> {
    for (i, p) in params.iter().enumerate() {
        let valid = p.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && !parser::KEYWORDS.contains(&p.as_str());
        if !valid {
            return Err(DslError::Invalid {
                line: 1,
                col: 1,
                message: format!("`{p}` is not a valid parameter name"),
            });
        }
        if params[..i].contains(p) {
            return Err(DslError::Invalid {
                line: 1,
                col: 1,
                message: format!("parameter `{p}` declared twice"),
            });
        }
    }
    Ok(())
}

/// Parses `lhs == rhs` with the given free parameters. Name and paper tag are
/// left empty.
pub fn parse_identity(text: &str, params: &[&str]) -> Result<Identity, DslError> {
    let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
    Identity::parse("", params, "", text)
}

/// Parses a single expression whose symbols are all drawn from `params`.
pub fn parse_expr(text: &str, params: &[&str]) -> Result<Expr, DslError> {
    let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
    check_params(&params)?;
    parser::parse_expr(text, &params)
}

/// `lhs == rhs` in canonical form.
pub fn pretty_print(id: &Identity) -> String {
    format!("{} == {}", print_expr(&id.lhs), print_expr(&id.rhs))
}

impl Identity {
    pub fn parse(
        name: impl Into<String>,
        params: Vec<String>,
        paper_tag: impl Into<String>,
        text: &str,
    ) -> Result<Identity, DslError> {
        Self::parse_at(name.into(), params, paper_tag.into(), text, 1, 1)
    }

    pub(crate) fn parse_at(
        name: String,
        params: Vec<String>,
        paper_tag: String,
        text: &str,
        line: usize,
        col: usize,
    ) -> Result<Identity, DslError> {
        check_params(&params).map_err(|e| match e {
            DslError::Invalid { message, .. } => DslError::Invalid { line, col, message },
            other => other,
        })?;
        let (lhs, rhs) = parser::parse_sides(text, &params, line, col)?;
        let id = Identity {
            name,
            params,
            paper_tag,
            lhs,
            rhs,
            expands: None,
        };
        if let Err(message) = id.rank_param_checked() {
            return Err(DslError::Invalid { line, col, message });
        }
        Ok(id)
    }

    /// The free parameter bounding the sums, if any ("rank" parameter).
    pub fn rank_param(&self) -> Option<&str> {
        self.rank_param_checked().ok().flatten()
    }

    fn rank_param_checked(&self) -> Result<Option<&str>, String> {
        let mut bounds = self.lhs.sum_bound_symbols();
        bounds.extend(self.rhs.sum_bound_symbols());
        let mut ranks = self.params.iter().filter(|p| bounds.contains(*p));
        let first = ranks.next();
        if let Some(second) = ranks.next() {
            return Err(format!(
                "sum bounds use two parameters (`{}` and `{second}`); only one rank parameter is supported",
                first.unwrap()
            ));
        }
        Ok(first.map(String::as_str))
    }

    /// Parameters other than the rank parameter.
    pub fn shape_params(&self) -> Vec<&str> {
        let rank = self.rank_param();
        self.params
            .iter()
            .map(String::as_str)
            .filter(|p| Some(*p) != rank)
            .collect()
    }

    pub fn uses_seed(&self) -> bool {
        self.lhs.contains_seq(SeqKind::G) || self.rhs.contains_seq(SeqKind::G)
    }

    /// `lhs == rhs` in canonical form.
    pub fn text(&self) -> String {
        pretty_print(self)
    }
}

impl std::fmt::Display for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text())
    }
}
