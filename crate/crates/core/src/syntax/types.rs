//! Simple types `nat` and `τ -> τ`, inferred by unification.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{is_wildcard, Expr, Name};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Nat,
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Nat => f.write_str("nat"),
            Type::Arrow(a, b) => match **a {
                Type::Arrow(..) => write!(f, "({a}) -> {b}"),
                Type::Nat => write!(f, "{a} -> {b}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error in `{expr}`: {message}")]
pub struct TypeError {
    pub expr: Expr,
    pub message: String,
}

/// A typing context. Later entries shadow earlier ones.
#[derive(Debug, Clone, Default)]
pub struct TypeEnv(Vec<(Name, Type)>);

impl TypeEnv {
    pub fn new() -> Self {
        TypeEnv::default()
    }

    pub fn extend(&mut self, x: &Name, t: Type) -> &mut Self {
        self.0.push((x.clone(), t));
        self
    }
}

/// A type possibly containing unification variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ty {
    Nat,
    Arrow(Box<Ty>, Box<Ty>),
    Meta(usize),
}

impl Ty {
    fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }

    fn from_type(t: &Type) -> Ty {
        match t {
            Type::Nat => Ty::Nat,
            Type::Arrow(a, b) => Ty::arrow(Ty::from_type(a), Ty::from_type(b)),
        }
    }

    /// Instantiates every unification variable at `nat`.
    pub fn default_nat(&self) -> Type {
        match self {
            Ty::Nat | Ty::Meta(_) => Type::Nat,
            Ty::Arrow(a, b) => Type::arrow(a.default_nat(), b.default_nat()),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Nat => f.write_str("nat"),
            Ty::Meta(i) => write!(f, "'t{i}"),
            Ty::Arrow(a, b) => match **a {
                Ty::Arrow(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
        }
    }
}

#[derive(Default)]
struct Unifier {
    slots: Vec<Option<Ty>>,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.slots.push(None);
        Ty::Meta(self.slots.len() - 1)
    }

    fn shallow(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Meta(i) = t {
            match &self.slots[i] {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match self.shallow(t) {
            Ty::Arrow(a, b) => Ty::arrow(self.resolve(&a), self.resolve(&b)),
            other => other,
        }
    }

    fn occurs(&self, i: usize, t: &Ty) -> bool {
        match self.shallow(t) {
            Ty::Meta(j) => i == j,
            Ty::Nat => false,
            Ty::Arrow(a, b) => self.occurs(i, &a) || self.occurs(i, &b),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), String> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (Ty::Meta(i), Ty::Meta(j)) if i == j => Ok(()),
            (Ty::Meta(i), other) | (other, Ty::Meta(i)) => {
                if self.occurs(*i, other) {
                    return Err(format!(
                        "cannot construct infinite type {} = {}",
                        self.resolve(&a),
                        self.resolve(&b)
                    ));
                }
                self.slots[*i] = Some(other.clone());
                Ok(())
            }
            (Ty::Nat, Ty::Nat) => Ok(()),
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            _ => Err(format!(
                "expected {}, found {}",
                self.resolve(&a),
                self.resolve(&b)
            )),
        }
    }

    fn infer(&mut self, env: &mut Vec<(Name, Ty)>, e: &Expr) -> Result<Ty, TypeError> {
        let fail = |message: String| TypeError {
            expr: e.clone(),
            message,
        };
        match e {
            Expr::Var(x) => env
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| fail(format!("unbound variable `{x}`"))),
            Expr::Zero => Ok(Ty::Nat),
            Expr::Succ(inner) => {
                let t = self.infer(env, inner)?;
                self.unify(&t, &Ty::Nat).map_err(fail)?;
                Ok(Ty::Nat)
            }
            Expr::Eff(_, inner) => self.infer(env, inner),
            Expr::Case {
                zero,
                succ_var,
                succ,
                scrutinee,
            } => {
                let ts = self.infer(env, scrutinee)?;
                self.unify(&ts, &Ty::Nat).map_err(fail)?;
                let tz = self.infer(env, zero)?;
                env.push((succ_var.clone(), Ty::Nat));
                let r = self.infer(env, succ);
                env.pop();
                let tsucc = r?;
                self.unify(&tz, &tsucc).map_err(fail)?;
                Ok(tz)
            }
            Expr::Lam {
                self_var,
                param,
                body,
            } => {
                let (ta, tb) = (self.fresh(), self.fresh());
                let tf = Ty::arrow(ta.clone(), tb.clone());
                env.push((self_var.clone(), tf.clone()));
                env.push((param.clone(), ta));
                let r = self.infer(env, body);
                env.truncate(env.len() - 2);
                let tbody = r?;
                self.unify(&tbody, &tb).map_err(fail)?;
                Ok(tf)
            }
            Expr::App(f, a) => {
                let tf = self.infer(env, f)?;
                let ta = self.infer(env, a)?;
                let tr = self.fresh();
                self.unify(&tf, &Ty::arrow(ta, tr.clone())).map_err(fail)?;
                Ok(tr)
            }
            Expr::Let { var, bound, body } => {
                let tb = self.infer(env, bound)?;
                if is_wildcard(var) {
                    return self.infer(env, body);
                }
                env.push((var.clone(), tb));
                let r = self.infer(env, body);
                env.pop();
                r
            }
        }
    }
}

/// The principal type of `e`, with unification variables renumbered from 0.
pub fn infer_principal(env: &TypeEnv, e: &Expr) -> Result<Ty, TypeError> {
    let mut u = Unifier::default();
    let mut ctx: Vec<(Name, Ty)> = env
        .0
        .iter()
        .map(|(n, t)| (n.clone(), Ty::from_type(t)))
        .collect();
    let t = u.infer(&mut ctx, e)?;
    let t = u.resolve(&t);
    let mut names = BTreeMap::new();
    Ok(renumber(&t, &mut names))
}

fn renumber(t: &Ty, names: &mut BTreeMap<usize, usize>) -> Ty {
    match t {
        Ty::Nat => Ty::Nat,
        Ty::Meta(i) => {
            let next = names.len();
            Ty::Meta(*names.entry(*i).or_insert(next))
        }
        Ty::Arrow(a, b) => {
            let a = renumber(a, names);
            Ty::arrow(a, renumber(b, names))
        }
    }
}

/// Infers a monotype, defaulting unconstrained variables to `nat`.
pub fn infer_type(env: &TypeEnv, e: &Expr) -> Result<Type, TypeError> {
    infer_principal(env, e).map(|t| t.default_nat())
}

/// Whether `e` can be given type `t`.
pub fn check_type(env: &TypeEnv, e: &Expr, t: &Type) -> Result<(), TypeError> {
    let p = infer_principal(env, e)?;
    if unifiable(&p, &Ty::from_type(t)) {
        Ok(())
    } else {
        Err(TypeError {
            expr: e.clone(),
            message: format!("expected {t}, found {p}"),
        })
    }
}

/// Whether two (separately quantified) types have a common instance.
pub fn unifiable(a: &Ty, b: &Ty) -> bool {
    let mut u = Unifier::default();
    let shift = max_meta(a).map_or(0, |m| m + 1);
    let b = shift_metas(b, shift);
    let needed = shift + max_meta(&b).map_or(0, |m| m + 1);
    u.slots.resize(needed, None);
    u.unify(a, &b).is_ok()
}

fn max_meta(t: &Ty) -> Option<usize> {
    match t {
        Ty::Nat => None,
        Ty::Meta(i) => Some(*i),
        Ty::Arrow(a, b) => max_meta(a).max(max_meta(b)),
    }
}

fn shift_metas(t: &Ty, by: usize) -> Ty {
    match t {
        Ty::Nat => Ty::Nat,
        Ty::Meta(i) => Ty::Meta(i + by),
        Ty::Arrow(a, b) => Ty::arrow(shift_metas(a, by), shift_metas(b, by)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn ty(src: &str) -> Result<Type, TypeError> {
        infer_type(&TypeEnv::new(), &parse_expr(src).unwrap())
    }

    #[test]
    fn basic_types() {
        assert_eq!(ty("s(z)").unwrap(), Type::Nat);
        assert_eq!(ty("fun _(x) => s(x)").unwrap().to_string(), "nat -> nat");
        assert_eq!(ty("(fun f(x) => f x) z").unwrap(), Type::Nat);
        assert_eq!(
            ty("fun _(g) => g z").unwrap().to_string(),
            "(nat -> nat) -> nat"
        );
    }

    #[test]
    fn ill_typed() {
        assert!(ty("s(fun _(x) => x)").is_err());
        assert!(ty("z z").is_err());
        assert!(ty("fun f(x) => f f").is_err());
        assert!(ty("x").is_err());
        assert!(ty("case z { z => z | s(y) => fun _(x) => x }").is_err());
    }

    #[test]
    fn principal_types() {
        let e = parse_expr("fun _(x) => x").unwrap();
        let t = infer_principal(&TypeEnv::new(), &e).unwrap();
        assert_eq!(t.to_string(), "'t0 -> 't0");
        assert!(unifiable(&t, &Ty::from_type(&Type::arrow(Type::Nat, Type::Nat))));
        assert!(check_type(&TypeEnv::new(), &e, &Type::Nat).is_err());
    }

    #[test]
    fn environment_is_used() {
        let mut env = TypeEnv::new();
        env.extend(&crate::syntax::name("n"), Type::Nat);
        assert_eq!(infer_type(&env, &parse_expr("s(n)").unwrap()).unwrap(), Type::Nat);
    }
}
