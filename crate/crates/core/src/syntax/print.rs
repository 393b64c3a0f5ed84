use std::fmt;

use super::Expr;

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    App,
    Atom,
}

fn write_expr(e: &Expr, prec: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let needs = match e {
        Expr::Var(_) | Expr::Zero | Expr::Succ(_) => Prec::Atom,
        Expr::App(..) => Prec::App,
        _ => Prec::Top,
    };
    if needs < prec {
        f.write_str("(")?;
        write_expr(e, Prec::Top, f)?;
        return f.write_str(")");
    }
    match e {
        Expr::Var(x) => f.write_str(x),
        Expr::Zero => f.write_str("z"),
        Expr::Succ(inner) => {
            f.write_str("s(")?;
            write_expr(inner, Prec::Top, f)?;
            f.write_str(")")
        }
        Expr::App(fun, arg) => {
            write_expr(fun, Prec::App, f)?;
            f.write_str(" ")?;
            write_expr(arg, Prec::Atom, f)
        }
        Expr::Lam {
            self_var,
            param,
            body,
        } => {
            write!(f, "fun {self_var}({param}) => ")?;
            write_expr(body, Prec::Top, f)
        }
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => {
            f.write_str("case ")?;
            write_expr(scrutinee, Prec::Top, f)?;
            f.write_str(" { z => ")?;
            write_expr(zero, Prec::Top, f)?;
            write!(f, " | s({succ_var}) => ")?;
            write_expr(succ, Prec::Top, f)?;
            f.write_str(" }")
        }
        Expr::Eff(l, body) => {
            write!(f, "eff[{l}] ")?;
            write_expr(body, Prec::Top, f)
        }
        Expr::Let { var, bound, body } => {
            write!(f, "let {var} = ")?;
            write_expr(bound, Prec::Top, f)?;
            f.write_str(" in ")?;
            write_expr(body, Prec::Top, f)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, Prec::Top, f)
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_expr, parse_mnf_expr};

    #[test]
    fn round_trips() {
        for src in [
            "(fun _(x) => z) ((fun f(y) => f y) z)",
            "(fun f(x) => fun _(y) => f x y) z",
            "fun f(x) => case x { z => z | s(y) => (fun g(w) => eff[alloc] g w) z }",
            "s(case z { z => fun _(x) => x | s(_) => fun _(x) => x })",
            "f (g h)",
            "(eff[a] fun _(x) => x) z",
        ] {
            let e = parse_expr(src).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{src}");
        }
        let e = parse_mnf_expr("let t = (fun f(x) => x) z in s(t)").unwrap();
        assert_eq!(parse_mnf_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn canonical_text() {
        let e = parse_expr("(fun f(x)=>fun _(y)=>(f x) y) z").unwrap();
        assert_eq!(e.to_string(), "(fun f(x) => fun _(y) => f x y) z");
    }
}
