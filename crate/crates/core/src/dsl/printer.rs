use super::ast::Expr;

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn is_coefficient(a: &Expr, b: &Expr) -> bool {
    matches!((a, b), (Expr::Int(_), Expr::Sym(_)))
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => ADD,
        Expr::Mul(a, b) if is_coefficient(a, b) => ATOM,
        Expr::Mul(..) => MUL,
        Expr::Neg(_) => NEG,
        Expr::Pow(..) => POW,
        _ => ATOM,
    }
}

/// Canonical text with the fewest parentheses that still parse back to the
/// same tree. Index positions are printed without spaces around `+`/`-`.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write(e, false, &mut out);
    out
}

fn write_at(e: &Expr, min: u8, compact: bool, out: &mut String) {
    if prec(e) < min {
        out.push('(');
        write(e, compact, out);
        out.push(')');
    } else {
        write(e, compact, out);
    }
}

fn write(e: &Expr, compact: bool, out: &mut String) {
    let (plus, minus) = if compact { ("+", "-") } else { (" + ", " - ") };
    match e {
        Expr::Int(v) => out.push_str(&v.to_string()),
        Expr::Sym(s) => out.push_str(s),
        Expr::Add(a, b) => {
            write_at(a, ADD, compact, out);
            out.push_str(plus);
            write_at(b, MUL, compact, out);
        }
        Expr::Sub(a, b) => {
            write_at(a, ADD, compact, out);
            out.push_str(minus);
            write_at(b, MUL, compact, out);
        }
        Expr::Mul(a, b) if is_coefficient(a, b) => {
            write(a, compact, out);
            write(b, compact, out);
        }
        Expr::Mul(a, b) => {
            write_at(a, MUL, compact, out);
            out.push('*');
            write_at(b, NEG, compact, out);
        }
        Expr::Neg(a) => {
            out.push('-');
            write_at(a, NEG, compact, out);
        }
        Expr::Pow(a, b) => {
            write_at(a, ATOM, compact, out);
            out.push('^');
            write_at(b, POW, true, out);
        }
        Expr::Seq(kind, a) => {
            out.push_str(kind.name());
            out.push('(');
            write(a, true, out);
            out.push(')');
        }
        Expr::Binom(a, b) => {
            out.push_str("binom(");
            write(a, true, out);
            out.push(',');
            write(b, true, out);
            out.push(')');
        }
        Expr::Sign(a) => {
            out.push_str("sign(");
            write(a, true, out);
            out.push(')');
        }
        Expr::Pow5Floor(a) => {
            out.push_str("pow5floor(");
            write(a, true, out);
            out.push(')');
        }
        Expr::Sum { var, lo, hi, body } => {
            out.push_str("sum(");
            out.push_str(var);
            out.push(',');
            write(lo, true, out);
            out.push(',');
            write(hi, true, out);
            out.push_str(", ");
            write(body, false, out);
            out.push(')');
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_expr;
    use super::*;

    fn ps() -> Vec<String> {
        ["a", "b", "c", "n", "m", "p", "q"].iter().map(|s| s.to_string()).collect()
    }

    fn normalize(text: &str) -> String {
        print_expr(&parse_expr(text, &ps()).unwrap())
    }

    #[test]
    fn redundant_parentheses_are_dropped() {
        assert_eq!(normalize("((a + (b*c)))"), "a + b*c");
        assert_eq!(normalize("(a*b)*c"), "a*b*c");
        assert_eq!(normalize("a*(b*c)"), "a*(b*c)");
        assert_eq!(normalize("a - (b - c)"), "a - (b - c)");
        assert_eq!(normalize("a - (b + c)"), "a - (b + c)");
        assert_eq!(normalize("(a - b) + c"), "a - b + c");
        assert_eq!(normalize("-(a^2)"), "-a^2");
        assert_eq!(normalize("(-a)^2"), "(-a)^2");
        assert_eq!(normalize("(a^b)^c"), "(a^b)^c");
        assert_eq!(normalize("a^(b*c)"), "a^(b*c)");
        assert_eq!(normalize("a*(-b)"), "a*-b");
        assert_eq!(normalize("-(a*b)"), "-(a*b)");
    }

    #[test]
    fn index_positions_are_compact() {
        assert_eq!(normalize("F( m + q )^( n - a )"), "F(m+q)^(n-a)");
        assert_eq!(normalize("G(n + 2*p)"), "G(n+2p)");
        assert_eq!(normalize("sign(n * m + n)"), "sign(n*m+n)");
        assert_eq!(normalize("sum(k, 0, n, G(p + q*k) * 2)"), "sum(k,0,n, G(p+q*k)*2)");
    }
}
