//! Differential property suites. Each suite checks one family of equivalences
//! on enumerated and generated inputs, and shrinks every failure by replacing
//! subterms with `z` (or sub-statements with `skip`).

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::corpus::corpus_programs;
use super::enumerate::{enumerate_exprs, enumerate_stmts};
use super::gen::{default_labels, gen_imp_config, gen_many, GenConfig};
use crate::bigstep::{big_step, check_bigstep, BigStepOutcome};
use crate::bigstop::{
    annihilator_eval, bigstep_to_strict, bigstop_eval, check_derivation, compose, derivation_from_json,
    derivation_to_json, ec_bigstop_eval, is_progressing, is_strict, mnf_bigstop_eval, strict_to_bigstep,
    BigStopError, Dialect,
};
use crate::imp::{
    imp_bigstep, imp_bigstop, imp_bigstop_freeze, imp_multi_step, ImpConfig, ImpState, ImpStatus, Stmt,
};
use crate::kmachine::{completeness_check, soundness_check};
use crate::smallstep::mnf::mnf_multi_step;
use crate::smallstep::{multi_step, small_step, step_trace, MultiStepRun, RunStatus};
use crate::syntax::mnf::{erase_lets, to_mnf};
use crate::syntax::types::{infer_principal, infer_type, unifiable, TypeEnv};
use crate::syntax::{is_value, Expr};
use crate::trace::{Label, Trace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Generated inputs, on top of any enumerated ones.
    pub trials: usize,
    /// Size bound for generated inputs.
    pub max_size: usize,
    /// Enumeration bound; 0 disables enumeration.
    pub enum_size: usize,
    /// Budgets `0..=max_budget` are checked.
    pub max_budget: u64,
    pub labels: Vec<Label>,
    pub include_corpus: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 200,
            max_size: 25,
            enum_size: 0,
            max_budget: 10,
            labels: default_labels(),
            include_corpus: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Position of the input in the suite's input order.
    pub index: usize,
    pub input: String,
    pub minimized: String,
    pub budget: Option<u64>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<Failure>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        writeln!(
            f,
            "{}: {verdict} ({} trials, {} failures, seed {})",
            self.property,
            self.trials,
            self.failures.len(),
            self.seed
        )?;
        for x in &self.failures {
            writeln!(f, "  #{} {}", x.index, x.input)?;
            writeln!(f, "    minimized: {}", x.minimized)?;
            if let Some(b) = x.budget {
                writeln!(f, "    budget:    {b}")?;
            }
            writeln!(f, "    expected:  {}", x.expected)?;
            writeln!(f, "    actual:    {}", x.actual)?;
        }
        Ok(())
    }
}

/// A property violation on one input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub budget: Option<u64>,
    pub expected: String,
    pub actual: String,
}

fn mismatch(budget: impl Into<Option<u64>>, expected: impl fmt::Display, actual: impl fmt::Display) -> Mismatch {
    Mismatch {
        budget: budget.into(),
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

pub type PcfCheck = fn(&Expr, &SuiteConfig) -> Result<(), Mismatch>;
pub type ImpCheck = fn(&ImpConfig, &SuiteConfig) -> Result<(), Mismatch>;

#[derive(Clone, Copy)]
pub enum Check {
    Pcf(PcfCheck),
    Imp(ImpCheck),
}

pub const SUITES: &[(&str, Check)] = &[
    ("stop-multi", Check::Pcf(check_stop_multi)),
    ("stop-step", Check::Pcf(check_stop_step)),
    ("progress-preservation", Check::Pcf(check_progress_preservation)),
    ("derivations", Check::Pcf(check_derivations)),
    ("kmachine-convergent", Check::Pcf(check_kmachine_convergent)),
    ("kmachine-divergent", Check::Pcf(check_kmachine_divergent)),
    ("annihilator", Check::Pcf(check_annihilator)),
    ("mnf", Check::Pcf(check_mnf_translation)),
    ("ec", Check::Pcf(check_ec)),
    ("imp-stop-multi", Check::Imp(check_imp_stop_multi)),
    ("imp-freeze", Check::Imp(check_imp_freeze)),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _)| *n)
}

pub fn run_property_suite(suite: &str, cfg: &SuiteConfig) -> Result<PropertyReport, UnknownSuite> {
    let check = SUITES
        .iter()
        .find(|(n, _)| *n == suite)
        .map(|(_, c)| *c)
        .ok_or_else(|| UnknownSuite(suite.to_string()))?;
    let (trials, failures) = match check {
        Check::Pcf(f) => {
            let inputs = pcf_inputs(cfg);
            (inputs.len(), run_all(&inputs, |e| f(e, cfg), |e| shrink_expr(e, |c| f(c, cfg))))
        }
        Check::Imp(f) => {
            let inputs = imp_inputs(cfg);
            (inputs.len(), run_all(&inputs, |c| f(c, cfg), |c| shrink_imp(c, |x| f(x, cfg))))
        }
    };
    Ok(report(suite, cfg, trials, failures))
}

fn report(suite: &str, cfg: &SuiteConfig, trials: usize, failures: Vec<Failure>) -> PropertyReport {
    PropertyReport {
        property: suite.to_string(),
        trials,
        seed: cfg.seed,
        failures,
    }
}

/// Runs `check` on a caller-supplied set of terms.
pub fn run_pcf_check(name: &str, inputs: &[Expr], check: PcfCheck, cfg: &SuiteConfig) -> PropertyReport {
    let failures = run_all(inputs, |e| check(e, cfg), |e| shrink_expr(e, |c| check(c, cfg)));
    report(name, cfg, inputs.len(), failures)
}

pub fn run_imp_check(name: &str, inputs: &[ImpConfig], check: ImpCheck, cfg: &SuiteConfig) -> PropertyReport {
    let failures = run_all(inputs, |c| check(c, cfg), |c| shrink_imp(c, |x| check(x, cfg)));
    report(name, cfg, inputs.len(), failures)
}

fn run_all<T: Sync + fmt::Display>(
    inputs: &[T],
    check: impl Fn(&T) -> Result<(), Mismatch> + Sync,
    shrink: impl Fn(&T) -> String + Sync,
) -> Vec<Failure> {
    inputs
        .par_iter()
        .enumerate()
        .filter_map(|(index, x)| {
            let m = check(x).err()?;
            Some(Failure {
                index,
                input: x.to_string(),
                minimized: shrink(x),
                budget: m.budget,
                expected: m.expected,
                actual: m.actual,
            })
        })
        .collect()
}

pub fn pcf_inputs(cfg: &SuiteConfig) -> Vec<Expr> {
    let mut out = Vec::new();
    if cfg.include_corpus {
        out.extend(corpus_programs().into_iter().map(|(_, e)| e));
    }
    if cfg.enum_size > 0 {
        out.extend(enumerate_exprs(cfg.enum_size, &cfg.labels).unwrap_or_default());
    }
    if cfg.trials > 0 {
        let g = GenConfig::new(cfg.seed, cfg.max_size.max(1)).with_labels(cfg.labels.clone());
        out.extend(gen_many(&g, cfg.trials));
    }
    out
}

/// Initial store for enumerated programs.
pub fn imp_enumeration_state() -> ImpState {
    ImpState::from_pairs(&[("x", 2), ("y", 0)])
}

pub fn imp_inputs(cfg: &SuiteConfig) -> Vec<ImpConfig> {
    let mut out = Vec::new();
    if cfg.enum_size > 0 {
        let init = imp_enumeration_state();
        out.extend(
            enumerate_stmts(cfg.enum_size)
                .into_iter()
                .map(|s| ImpConfig::new(s, init.clone())),
        );
    }
    for i in 0..cfg.trials {
        out.push(gen_imp_config(cfg.seed.wrapping_add(i as u64), cfg.max_size.clamp(1, 16)));
    }
    out
}

/// Every term obtained by replacing one subterm of `e` with `z`.
fn zero_replacements(e: &Expr) -> Vec<Expr> {
    let mut out = Vec::new();
    if *e != Expr::Zero {
        out.push(Expr::Zero);
    }
    match e {
        Expr::Var(_) | Expr::Zero => {}
        Expr::Succ(a) => out.extend(zero_replacements(a).into_iter().map(Expr::succ)),
        Expr::Eff(l, a) => out.extend(zero_replacements(a).into_iter().map(|a| Expr::eff(l.clone(), a))),
        Expr::App(f, a) => {
            out.extend(zero_replacements(f).into_iter().map(|f| Expr::app(f, (**a).clone())));
            out.extend(zero_replacements(a).into_iter().map(|a| Expr::app((**f).clone(), a)));
        }
        Expr::Lam {
            self_var,
            param,
            body,
        } => out.extend(zero_replacements(body).into_iter().map(|b| Expr::Lam {
            self_var: self_var.clone(),
            param: param.clone(),
            body: Box::new(b),
        })),
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => {
            let rebuild = |s: &Expr, z: &Expr, b: &Expr| Expr::Case {
                zero: Box::new(z.clone()),
                succ_var: succ_var.clone(),
                succ: Box::new(b.clone()),
                scrutinee: Box::new(s.clone()),
            };
            out.extend(zero_replacements(scrutinee).iter().map(|s| rebuild(s, zero, succ)));
            out.extend(zero_replacements(zero).iter().map(|z| rebuild(scrutinee, z, succ)));
            out.extend(zero_replacements(succ).iter().map(|b| rebuild(scrutinee, zero, b)));
        }
        Expr::Let { var, bound, body } => {
            out.extend(zero_replacements(bound).into_iter().map(|b| Expr::let_(var, b, (**body).clone())));
            out.extend(zero_replacements(body).into_iter().map(|b| Expr::let_(var, (**bound).clone(), b)));
        }
    }
    out
}

/// Greedy shrinking: keep replacing subterms with `z` while the result stays
/// well typed and still fails.
pub fn shrink_expr(e: &Expr, fails: impl Fn(&Expr) -> Result<(), Mismatch>) -> String {
    let mut cur = e.clone();
    'outer: loop {
        for c in zero_replacements(&cur) {
            if infer_type(&TypeEnv::new(), &c).is_ok() && fails(&c).is_err() {
                cur = c;
                continue 'outer;
            }
        }
        return cur.to_string();
    }
}

fn skip_replacements(s: &Stmt) -> Vec<Stmt> {
    let mut out = Vec::new();
    if *s != Stmt::Skip {
        out.push(Stmt::Skip);
    }
    match s {
        Stmt::Skip | Stmt::Assign(..) => {}
        Stmt::Seq(a, b) => {
            out.extend(skip_replacements(a).into_iter().map(|a| Stmt::seq(a, (**b).clone())));
            out.extend(skip_replacements(b).into_iter().map(|b| Stmt::seq((**a).clone(), b)));
        }
        Stmt::If(g, body) => out.extend(skip_replacements(body).into_iter().map(|b| Stmt::if_(g.clone(), b))),
        Stmt::While(g, body) => out.extend(skip_replacements(body).into_iter().map(|b| Stmt::while_(g.clone(), b))),
    }
    out
}

pub fn shrink_imp(c: &ImpConfig, fails: impl Fn(&ImpConfig) -> Result<(), Mismatch>) -> String {
    let mut cur = c.clone();
    'outer: loop {
        for s in skip_replacements(&cur.stmt) {
            let cand = ImpConfig::new(s, cur.state.clone());
            if fails(&cand).is_err() {
                cur = cand;
                continue 'outer;
            }
        }
        return cur.to_string();
    }
}

fn show_run(r: &MultiStepRun) -> String {
    format!("{} | {}", r.final_expr, r.trace)
}

fn check_in(d: &crate::bigstop::Derivation, dialect: Dialect, budget: u64) -> Result<(), Mismatch> {
    check_derivation(d, dialect).map_err(|v| mismatch(budget, "a derivation the checker accepts", v))
}

fn bigstop_at(e: &Expr, n: u64) -> Result<crate::bigstop::BigStop, Mismatch> {
    bigstop_eval(e, n).map_err(|err| mismatch(n, "a big-stop result", err))
}

/// Big-stop and multi-step agree on term and trace at every budget.
pub fn check_stop_multi(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    for n in 0..=cfg.max_budget {
        let m = multi_step(e, n);
        match bigstop_eval(e, n) {
            Ok(b) => {
                if b.stopped != m.final_expr || b.trace != m.trace {
                    return Err(mismatch(n, show_run(&m), format!("{} | {}", b.stopped, b.trace)));
                }
                check_in(&b.derivation, Dialect::Plain, n)?;
            }
            Err(BigStopError::Stuck(_)) if m.status == RunStatus::Stuck => {}
            Err(err) => return Err(mismatch(n, show_run(&m), err)),
        }
    }
    Ok(())
}

#[derive(Debug, PartialEq, Eq)]
enum Verdict {
    Value(Expr, Trace),
    Unfinished,
    Stuck,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Value(v, t) => write!(f, "{v} | {t}"),
            Verdict::Unfinished => f.write_str("no value within budget"),
            Verdict::Stuck => f.write_str("stuck"),
        }
    }
}

/// Big-step, big-stop and multi-step agree on convergence, value and trace
/// at budget `max_budget`.
pub fn check_stop_step(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    let n = cfg.max_budget;
    let big = match big_step(e, n) {
        BigStepOutcome::Value(v, t) => Verdict::Value(v, t),
        BigStepOutcome::FuelExhausted => Verdict::Unfinished,
        BigStepOutcome::Stuck(_) => Verdict::Stuck,
    };
    let m = multi_step(e, n);
    let multi = match m.status {
        RunStatus::ReachedValue => Verdict::Value(m.final_expr.clone(), m.trace.clone()),
        RunStatus::OutOfBudget => Verdict::Unfinished,
        RunStatus::Stuck => Verdict::Stuck,
    };
    let stop = match bigstop_eval(e, n) {
        Ok(b) => {
            check_in(&b.derivation, Dialect::Plain, n)?;
            if is_value(&b.stopped) {
                Verdict::Value(b.stopped, b.trace)
            } else {
                Verdict::Unfinished
            }
        }
        Err(BigStopError::Stuck(_)) => Verdict::Stuck,
        Err(err) => return Err(mismatch(n, &multi, err)),
    };
    if big != multi {
        return Err(mismatch(n, format!("multi-step: {multi}"), format!("big-step: {big}")));
    }
    if stop != multi {
        return Err(mismatch(n, format!("multi-step: {multi}"), format!("big-stop: {stop}")));
    }
    Ok(())
}

/// Every non-value on the small-step path steps and keeps a type compatible
/// with the start; one unit of budget gives a progressing derivation.
pub fn check_progress_preservation(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    let env = TypeEnv::new();
    let ty = infer_principal(&env, e).map_err(|err| mismatch(None, "a well-typed input", err))?;
    for (i, x) in step_trace(e, cfg.max_budget).iter().enumerate() {
        let i = i as u64;
        match infer_principal(&env, x) {
            Ok(t) if unifiable(&ty, &t) => {}
            Ok(t) => return Err(mismatch(i, format!("type unifiable with {ty}"), format!("{x} : {t}"))),
            Err(err) => return Err(mismatch(i, format!("type unifiable with {ty}"), err)),
        }
        if !is_value(x) && small_step(x).is_err() {
            return Err(mismatch(i, "a small step", format!("{x} is stuck")));
        }
    }
    if !is_value(e) {
        let b = bigstop_at(e, 1)?;
        check_in(&b.derivation, Dialect::Plain, 1)?;
        if !is_progressing(&b.derivation) {
            return Err(mismatch(1, "a progressing derivation", b.derivation.to_string()));
        }
    }
    Ok(())
}

/// Every evaluator's derivations pass the checker for their dialect; exports
/// round-trip; strict derivations convert to big-step derivations and back;
/// composition yields the derivation of the summed budget.
pub fn check_derivations(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    let mnf = to_mnf(e);
    for n in 0..=cfg.max_budget {
        let b = bigstop_at(e, n)?;
        let d = &b.derivation;
        check_in(d, Dialect::Plain, n)?;
        let json = derivation_to_json(d);
        match derivation_from_json(&json) {
            Ok(back) if &back == d => {}
            Ok(back) => return Err(mismatch(n, d, back)),
            Err(err) => return Err(mismatch(n, "an importable export", err)),
        }
        if is_strict(d) {
            let bs = strict_to_bigstep(d).map_err(|err| mismatch(n, "a big-step derivation", err))?;
            check_bigstep(&bs).map_err(|v| mismatch(n, "a valid big-step derivation", v))?;
            let back = bigstep_to_strict(&bs);
            if &back != d {
                return Err(mismatch(n, d, back));
            }
        }
        let rest = cfg.max_budget - n;
        let d2 = bigstop_at(&d.to, rest)?.derivation;
        let c = compose(d, &d2).map_err(|err| mismatch(n, "a composite derivation", err))?;
        check_in(&c, Dialect::Plain, n)?;
        let whole = bigstop_at(e, cfg.max_budget)?;
        if c.to != whole.stopped || c.trace.prefix != whole.trace {
            return Err(mismatch(
                n,
                format!("{} | {}", whole.stopped, whole.trace),
                format!("{} | {}", c.to, c.trace),
            ));
        }
        let ec = ec_bigstop_eval(e, n).map_err(|err| mismatch(n, "an evaluation-context result", err))?;
        check_in(&ec.derivation, Dialect::EvalCtx, n)?;
        let m = mnf_bigstop_eval(&mnf, n).map_err(|err| mismatch(n, "a normal-form result", err))?;
        check_in(&m.derivation, Dialect::Mnf, n)?;
        let a = annihilator_eval(e, n).map_err(|err| mismatch(n, "an annihilating result", err))?;
        check_in(&a.derivation, Dialect::Annihilating, n)?;
    }
    Ok(())
}

/// Machine transitions allowed for `budget` contractions: depth per
/// contraction plus the term size.
pub fn machine_budget(e: &Expr, budget: u64) -> u64 {
    (e.depth() as u64 + 3) * budget + e.size() as u64
}

/// Machine runs unwind to the big-stop result after each contraction, and a
/// halted machine holds the big-stop value and trace.
pub fn check_kmachine_convergent(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    let kb = machine_budget(e, cfg.max_budget);
    let r = soundness_check(e, kb).map_err(|err| mismatch(None, "machine agrees with big-stop", err))?;
    let m = multi_step(e, cfg.max_budget);
    if let (Some(v), RunStatus::ReachedValue) = (&r.value, m.status) {
        if *v != m.final_expr {
            return Err(mismatch(None, show_run(&m), v));
        }
    }
    Ok(())
}

/// For every budget, the machine reaches the big-stop result after as many
/// contractions.
pub fn check_kmachine_divergent(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    completeness_check(e, cfg.max_budget).map_err(|err| mismatch(None, "machine agrees with big-stop", err))?;
    Ok(())
}

/// The annihilated traces over all budgets are exactly the small-step trace
/// prefixes over all budgets, and unannihilated results agree with big-step.
pub fn check_annihilator(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    let mut annihilated = BTreeSet::new();
    let mut prefixes = BTreeSet::new();
    for n in 0..=cfg.max_budget {
        prefixes.insert(multi_step(e, n).trace.to_string());
        match annihilator_eval(e, n) {
            Ok(a) if a.trace.annihilated => {
                annihilated.insert(a.trace.prefix.to_string());
            }
            Ok(a) => match big_step(e, n) {
                BigStepOutcome::Value(v, t) if v == a.value && t == a.trace.prefix => {}
                other => return Err(mismatch(n, format!("{other:?}"), format!("{} | {}", a.value, a.trace))),
            },
            Err(BigStopError::Stuck(_)) => {}
            Err(err) => return Err(mismatch(n, "an annihilating result", err)),
        }
    }
    if annihilated != prefixes {
        let show = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(", ");
        return Err(mismatch(None, format!("{{{}}}", show(&prefixes)), format!("{{{}}}", show(&annihilated))));
    }
    Ok(())
}

fn value_shape(e: &Expr) -> String {
    match e.as_numeral() {
        Some(n) => format!("numeral {n}"),
        None if e.is_lam() => "function".to_string(),
        None => format!("non-value {e}"),
    }
}

/// The normal-form translation keeps convergence, trace and value, and its
/// big-stop evaluator tracks its small-step engine at every budget.
pub fn check_mnf_translation(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    let m = to_mnf(e);
    let n = cfg.max_budget;
    let plain = multi_step(e, n);
    // each contraction is followed by at most one let-step per nesting level
    let fuel = n * (e.size() as u64 + 1);
    let norm = mnf_multi_step(&m, fuel);
    if plain.status == RunStatus::ReachedValue {
        let erased = erase_lets(&norm.final_expr);
        if norm.status != RunStatus::ReachedValue
            || value_shape(&erased) != value_shape(&plain.final_expr)
            || erased != plain.final_expr
            || norm.trace != plain.trace
        {
            return Err(mismatch(fuel, show_run(&plain), format!("{erased} | {}", norm.trace)));
        }
    } else {
        // the translation never takes fewer steps
        let quick = mnf_multi_step(&m, n);
        if quick.status == RunStatus::ReachedValue {
            return Err(mismatch(n, show_run(&plain), show_run(&quick)));
        }
        let long = multi_step(e, fuel);
        if !norm.trace.is_prefix_of(&long.trace) && !long.trace.is_prefix_of(&norm.trace) {
            return Err(mismatch(fuel, long.trace, &norm.trace));
        }
    }
    for k in 0..=n {
        let s = mnf_multi_step(&m, k);
        let b = mnf_bigstop_eval(&m, k).map_err(|err| mismatch(k, show_run(&s), err))?;
        if b.stopped != s.final_expr || b.trace != s.trace {
            return Err(mismatch(k, show_run(&s), format!("{} | {}", b.stopped, b.trace)));
        }
    }
    Ok(())
}

/// The evaluation-context evaluator equals multi-step at every budget.
pub fn check_ec(e: &Expr, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    for n in 0..=cfg.max_budget {
        let m = multi_step(e, n);
        match ec_bigstop_eval(e, n) {
            Ok(b) => {
                if b.stopped != m.final_expr || b.trace != m.trace {
                    return Err(mismatch(n, show_run(&m), format!("{} | {}", b.stopped, b.trace)));
                }
                check_in(&b.derivation, Dialect::EvalCtx, n)?;
            }
            Err(BigStopError::Stuck(_)) if m.status == RunStatus::Stuck => {}
            Err(err) => return Err(mismatch(n, show_run(&m), err)),
        }
    }
    Ok(())
}

/// Big-stop equals the small-step prefix at every budget, and big-step
/// finishes with exactly the small-step count.
pub fn check_imp_stop_multi(c: &ImpConfig, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    for n in 0..=cfg.max_budget {
        let m = imp_multi_step(c, n);
        let b = imp_bigstop(c, n);
        if b != m.config {
            return Err(mismatch(n, &m.config, b));
        }
        if m.status == ImpStatus::Done {
            if imp_bigstep(c, m.steps) != Ok(m.config.state.clone()) {
                return Err(mismatch(m.steps, &m.config.state, format!("{:?}", imp_bigstep(c, m.steps))));
            }
            if m.steps > 0 && imp_bigstep(c, m.steps - 1).is_ok() {
                return Err(mismatch(m.steps - 1, "fuel exhausted", "a final state"));
            }
            break;
        }
    }
    Ok(())
}

/// The freezing evaluator returns the small-step store, frozen exactly when
/// the run was cut short.
pub fn check_imp_freeze(c: &ImpConfig, cfg: &SuiteConfig) -> Result<(), Mismatch> {
    for n in 0..=cfg.max_budget {
        let m = imp_multi_step(c, n);
        let f = imp_bigstop_freeze(c, n);
        let mut expected = m.config.state.clone();
        if m.config.stmt != Stmt::Skip {
            expected = expected.freeze();
        }
        if f != expected {
            return Err(mismatch(n, expected, f));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn small() -> SuiteConfig {
        SuiteConfig {
            trials: 40,
            max_size: 12,
            enum_size: 3,
            max_budget: 6,
            include_corpus: true,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn all_suites_pass_on_small_inputs() {
        for name in suite_names() {
            let r = run_property_suite(name, &small()).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.trials > 0);
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_property_suite("nope", &small()).is_err());
    }

    fn broken(e: &Expr, _: &SuiteConfig) -> Result<(), Mismatch> {
        // fails whenever an effect is present
        if e.to_string().contains("eff[") {
            Err(mismatch(None, "no effect", e))
        } else {
            Ok(())
        }
    }

    #[test]
    fn shrinking_keeps_the_failure() {
        let e = parse_expr("(fun f(x) => s(x)) (case s(z) { z => z | s(p) => eff[a] p })").unwrap();
        let r = run_pcf_check("broken", &[e], broken, &small());
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].minimized, "(fun f(x) => z) (case z { z => z | s(p) => eff[a] z })");
    }

    #[test]
    fn report_json() {
        let r = run_property_suite("stop-multi", &SuiteConfig { trials: 3, ..small() }).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["property"], "stop-multi");
        assert!(v["failures"].as_array().unwrap().is_empty());
    }
}
