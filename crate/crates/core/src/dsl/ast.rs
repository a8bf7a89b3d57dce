use std::collections::BTreeSet;

/// Which sequence a reference reads: Fibonacci, Lucas, or the seeded sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeqKind {
    F,
    L,
    G,
}

impl SeqKind {
    pub fn name(self) -> &'static str {
        match self {
            SeqKind::F => "F",
            SeqKind::L => "L",
            SeqKind::G => "G",
        }
    }
}

/// One side of an identity.
///
/// Integer literals are non-negative; a leading minus is always a [`Expr::Neg`]
/// node. Index positions (sequence arguments, binomial arguments, exponents,
/// sign and `pow5floor` arguments, sum bounds) hold only index expressions:
/// literals, symbols, `+`, `-` and `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Seq(SeqKind, Box<Expr>),
    Binom(Box<Expr>, Box<Expr>),
    /// `(-1)^e`
    Sign(Box<Expr>),
    /// `5^floor(e/2)`
    Pow5Floor(Box<Expr>),
    Sum {
        var: String,
        lo: Box<Expr>,
        hi: Box<Expr>,
        body: Box<Expr>,
    },
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Int(v)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Sym(name.to_string())
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Int(_) | Expr::Sym(_) => vec![],
            Expr::Neg(a) | Expr::Seq(_, a) | Expr::Sign(a) | Expr::Pow5Floor(a) => vec![a],
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Pow(a, b)
            | Expr::Binom(a, b) => vec![a, b],
            Expr::Sum { lo, hi, body, .. } => vec![lo, hi, body],
        }
    }

    /// True for expressions built only from literals, symbols, `+`, `-`, `*`.
    pub fn is_index_expr(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Sym(_) => true,
            Expr::Neg(a) => a.is_index_expr(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.is_index_expr() && b.is_index_expr()
            }
            _ => false,
        }
    }

    /// All symbol names occurring anywhere, including sum variables.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Sum { var, .. } => {
                out.insert(var.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_symbols(out);
        }
    }

    /// Symbols that appear in the bounds of a sum.
    pub fn sum_bound_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Sum { lo, hi, .. } = e {
                out.extend(lo.symbols());
                out.extend(hi.symbols());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn contains_seq(&self, kind: SeqKind) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if matches!(e, Expr::Seq(k, _) if *k == kind) {
                found = true;
            }
        });
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_expr_classification() {
        let affine = Expr::Add(Box::new(Expr::sym("p")), Box::new(Expr::int(1)));
        assert!(affine.is_index_expr());
        let call = Expr::Seq(SeqKind::F, Box::new(Expr::sym("p")));
        assert!(!call.is_index_expr());
        assert!(!Expr::Pow(Box::new(Expr::sym("p")), Box::new(Expr::int(2))).is_index_expr());
    }

    #[test]
    fn bound_symbols() {
        let sum = Expr::Sum {
            var: "k".into(),
            lo: Box::new(Expr::int(0)),
            hi: Box::new(Expr::sym("n")),
            body: Box::new(Expr::Seq(SeqKind::G, Box::new(Expr::sym("k")))),
        };
        assert_eq!(sum.sum_bound_symbols().into_iter().collect::<Vec<_>>(), vec!["n"]);
        assert!(sum.contains_seq(SeqKind::G));
        assert!(!sum.contains_seq(SeqKind::L));
        assert_eq!(sum.symbols().len(), 2);
    }
}
