use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::imp::{AExpr, ImpConfig, ImpState, Stmt};
use crate::syntax::types::{infer_type, Type, TypeEnv};
use crate::syntax::{name, Expr, Name};
use crate::trace::Label;

/// Probability of wrapping a generated node in an effect.
pub const EFFECT_PROBABILITY: f64 = 0.2;

const ATTEMPTS: usize = 32;
const WORK_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Upper bound on syntax nodes, variables included.
    pub max_size: usize,
    pub effect_labels: Vec<Label>,
    /// `None` draws a type per term.
    pub target_type: Option<Type>,
}

impl GenConfig {
    pub fn new(seed: u64, max_size: usize) -> Self {
        GenConfig {
            seed,
            max_size,
            effect_labels: default_labels(),
            target_type: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Self {
        self.effect_labels = labels;
        self
    }

    pub fn with_target(mut self, t: Type) -> Self {
        self.target_type = Some(t);
        self
    }
}

pub fn default_labels() -> Vec<Label> {
    ["a", "b"]
        .iter()
        .map(|l| Label::new(*l).expect("valid label"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("max_size must be at least 1")]
    InvalidConfig,
    #[error("no term found for seed {seed} after {attempts} attempts")]
    GenerationExhausted { seed: u64, attempts: usize },
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    labels: &'a [Label],
    fresh: usize,
    work: usize,
}

#[derive(Clone, Copy)]
enum Production {
    Var,
    Zero,
    Succ,
    Lam,
    App,
    Case,
    Loop,
}

impl Gen<'_> {
    fn fresh(&mut self, base: &str) -> Name {
        self.fresh += 1;
        name(&format!("{base}{}", self.fresh))
    }

    fn label(&mut self) -> Label {
        self.labels.choose(&mut self.rng).expect("labels nonempty").clone()
    }

    fn small_type(&mut self) -> Type {
        match self.rng.gen_range(0..10) {
            0..=6 => Type::Nat,
            7..=8 => Type::arrow(Type::Nat, Type::Nat),
            _ => Type::arrow(Type::arrow(Type::Nat, Type::Nat), Type::Nat),
        }
    }

    fn expr(&mut self, ty: &Type, env: &mut Vec<(Name, Type)>, budget: usize) -> Option<Expr> {
        self.work += 1;
        if budget == 0 || self.work > WORK_LIMIT {
            return None;
        }
        if !self.labels.is_empty() && budget >= 2 && self.rng.gen_bool(EFFECT_PROBABILITY) {
            let l = self.label();
            if let Some(body) = self.expr(ty, env, budget - 1) {
                return Some(Expr::eff(l, body));
            }
        }
        let mut options: Vec<(Production, u32)> = Vec::new();
        if env.iter().any(|(_, t)| t == ty) {
            options.push((Production::Var, 3));
        }
        match ty {
            Type::Nat => {
                options.push((Production::Zero, 2));
                if budget >= 2 {
                    options.push((Production::Succ, 2));
                }
            }
            Type::Arrow(..) if budget >= 2 => options.push((Production::Lam, 5)),
            Type::Arrow(..) => {}
        }
        if budget >= 3 {
            options.push((Production::App, 3));
        }
        if budget >= 4 {
            options.push((Production::Case, 2));
        }
        if budget >= 6 {
            options.push((Production::Loop, 1));
        }
        while !options.is_empty() {
            let i = {
                let total: u32 = options.iter().map(|(_, w)| w).sum();
                let mut pick = self.rng.gen_range(0..total);
                options
                    .iter()
                    .position(|(_, w)| {
                        if pick < *w {
                            true
                        } else {
                            pick -= w;
                            false
                        }
                    })
                    .expect("weights cover the range")
            };
            let (p, _) = options.swap_remove(i);
            if let Some(e) = self.produce(p, ty, env, budget) {
                return Some(e);
            }
        }
        None
    }

    fn produce(&mut self, p: Production, ty: &Type, env: &mut Vec<(Name, Type)>, budget: usize) -> Option<Expr> {
        match p {
            Production::Var => {
                let xs: Vec<&Name> = visible(env).filter(|(_, t)| *t == ty).map(|(x, _)| x).collect();
                xs.choose(&mut self.rng).map(|x| Expr::Var((*x).clone()))
            }
            Production::Zero => Some(Expr::Zero),
            Production::Succ => self.expr(&Type::Nat, env, budget - 1).map(Expr::succ),
            Production::Lam => {
                let Type::Arrow(a, b) = ty else { return None };
                let f = self.fresh("f");
                let x = self.fresh("x");
                env.push((f.clone(), ty.clone()));
                env.push((x.clone(), (**a).clone()));
                let body = self.expr(b, env, budget - 1);
                env.truncate(env.len() - 2);
                Some(Expr::Lam {
                    self_var: f,
                    param: x,
                    body: Box::new(body?),
                })
            }
            Production::App => {
                let a = self.small_type();
                let rest = budget - 1;
                let fsize = self.rng.gen_range(1..rest);
                let f = self.expr(&Type::arrow(a.clone(), ty.clone()), env, fsize)?;
                let arg = self.expr(&a, env, rest - f.size())?;
                Some(Expr::app(f, arg))
            }
            Production::Case => {
                let rest = budget - 1;
                let b = self.rng.gen_range(1..=rest - 2);
                let scrut = self.expr(&Type::Nat, env, b)?;
                let rest = rest - scrut.size();
                let b = self.rng.gen_range(1..rest);
                let zero = self.expr(ty, env, b)?;
                let y = self.fresh("y");
                env.push((y.clone(), Type::Nat));
                let succ = self.expr(ty, env, rest - zero.size());
                env.pop();
                Some(Expr::Case {
                    zero: Box::new(zero),
                    succ_var: y,
                    succ: Box::new(succ?),
                    scrutinee: Box::new(scrut),
                })
            }
            Production::Loop => {
                // (fun f(x) => f x) e, optionally emitting on every iteration
                let f = self.fresh("f");
                let x = self.fresh("x");
                let mut call = Expr::app(Expr::Var(f.clone()), Expr::Var(x.clone()));
                let mut size = 6;
                if !self.labels.is_empty() && budget >= 7 && self.rng.gen_bool(0.5) {
                    call = Expr::eff(self.label(), call);
                    size += 1;
                }
                let arg = self.expr(&Type::Nat, env, budget - size + 1)?;
                let lam = Expr::Lam {
                    self_var: f,
                    param: x,
                    body: Box::new(call),
                };
                Some(Expr::app(lam, arg))
            }
        }
    }
}

/// Innermost binding of each name.
fn visible(env: &[(Name, Type)]) -> impl Iterator<Item = (&Name, &Type)> {
    env.iter()
        .enumerate()
        .filter(move |(i, (x, _))| !env[i + 1..].iter().any(|(y, _)| y == x))
        .map(|(_, (x, t))| (x, t))
}

/// A closed, well-typed term of at most `cfg.max_size` nodes.
pub fn gen_typed_expr(cfg: &GenConfig) -> Result<Expr, GenError> {
    if cfg.max_size == 0 {
        return Err(GenError::InvalidConfig);
    }
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        labels: &cfg.effect_labels,
        fresh: 0,
        work: 0,
    };
    for _ in 0..ATTEMPTS {
        g.work = 0;
        g.fresh = 0;
        let ty = match &cfg.target_type {
            Some(t) => t.clone(),
            None => g.small_type(),
        };
        let lo = (cfg.max_size / 2).max(1);
        let budget = g.rng.gen_range(lo..=cfg.max_size);
        if let Some(e) = g.expr(&ty, &mut Vec::new(), budget) {
            debug_assert!(e.is_closed());
            if e.size() <= cfg.max_size && infer_type(&TypeEnv::new(), &e).is_ok() {
                return Ok(e);
            }
        }
    }
    Err(GenError::GenerationExhausted {
        seed: cfg.seed,
        attempts: ATTEMPTS,
    })
}

/// `count` terms from consecutive seeds starting at `cfg.seed`, skipping
/// seeds that exhaust.
pub fn gen_many(cfg: &GenConfig, count: usize) -> Vec<Expr> {
    let mut out = Vec::with_capacity(count);
    let mut seed = cfg.seed;
    while out.len() < count {
        let c = GenConfig { seed, ..cfg.clone() };
        if let Ok(e) = gen_typed_expr(&c) {
            out.push(e);
        }
        seed = seed.wrapping_add(1);
    }
    out
}

/// A random while-program over `x` and `y` with small literals, paired with a
/// random initial state.
pub fn gen_imp_config(seed: u64, max_size: usize) -> ImpConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.gen_range(1..=max_size.max(1));
    let stmt = gen_stmt(&mut rng, size);
    let state = ImpState::from_pairs(&[("x", rng.gen_range(-1..=3)), ("y", rng.gen_range(-1..=3))]);
    ImpConfig::new(stmt, state)
}

fn gen_aexpr(rng: &mut ChaCha8Rng, depth: usize) -> AExpr {
    if depth == 0 || rng.gen_bool(0.5) {
        return match rng.gen_range(0..4) {
            0 => AExpr::var("x"),
            1 => AExpr::var("y"),
            _ => AExpr::Lit(rng.gen_range(-2..=3)),
        };
    }
    let a = gen_aexpr(rng, depth - 1);
    let b = gen_aexpr(rng, depth - 1);
    match rng.gen_range(0..3) {
        0 => AExpr::plus(a, b),
        1 => AExpr::minus(a, b),
        _ => AExpr::times(a, b),
    }
}

fn gen_stmt(rng: &mut ChaCha8Rng, size: usize) -> Stmt {
    if size <= 1 {
        return if rng.gen_bool(0.2) {
            Stmt::Skip
        } else {
            let x = if rng.gen_bool(0.5) { "x" } else { "y" };
            Stmt::assign(x, gen_aexpr(rng, 2))
        };
    }
    let lo = if size >= 3 { 0 } else { 1 };
    match rng.gen_range(lo..3) {
        0 => {
            let left = rng.gen_range(1..size - 1);
            Stmt::seq(gen_stmt(rng, left), gen_stmt(rng, size - 1 - left))
        }
        1 => Stmt::if_(gen_aexpr(rng, 1), gen_stmt(rng, size - 1)),
        _ => Stmt::while_(gen_aexpr(rng, 1), gen_stmt(rng, size - 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_nat_is_zero() {
        let cfg = GenConfig::new(1, 1).with_target(Type::Nat);
        assert_eq!(gen_typed_expr(&cfg), Ok(Expr::Zero));
    }

    #[test]
    fn outputs_are_closed_and_typed() {
        for e in gen_many(&GenConfig::new(7, 25), 300) {
            assert!(e.is_closed(), "{e}");
            assert!(e.size() <= 25, "{e}");
            assert!(infer_type(&TypeEnv::new(), &e).is_ok(), "{e}");
        }
    }

    #[test]
    fn zero_size_rejected() {
        assert_eq!(gen_typed_expr(&GenConfig::new(0, 0)), Err(GenError::InvalidConfig));
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = GenConfig::new(42, 20);
        assert_eq!(gen_typed_expr(&cfg), gen_typed_expr(&cfg));
    }

    #[test]
    fn imp_programs_respect_size() {
        for seed in 0..200 {
            assert!(gen_imp_config(seed, 8).stmt.size() <= 8);
        }
    }
}
