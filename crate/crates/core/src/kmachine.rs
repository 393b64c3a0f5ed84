//! Abstract machine with an explicit continuation stack.
//!
//! States are either `k ▷ e` (evaluate `e` under `k`) or `k ◁ v` (return `v`
//! to `k`). Frames record the rest of the computation of one surrounding
//! evaluation position.

use std::fmt;

use thiserror::Error;

use crate::bigstop::{bigstop_eval, BigStopError};
use crate::syntax::{beta, case_succ_branch, is_value, Expr, Name};
use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Frame {
    /// `s(-)`
    Succ,
    /// `case - { z => zero | s(x) => succ }`
    Case { zero: Expr, succ_var: Name, succ: Expr },
    /// `- e`: the function is being evaluated.
    Fun(Expr),
    /// `v -`: the argument is being evaluated.
    Arg(Expr),
}

impl Frame {
    pub fn plug(&self, e: Expr) -> Expr {
        match self {
            Frame::Succ => Expr::succ(e),
            Frame::Case {
                zero,
                succ_var,
                succ,
            } => Expr::Case {
                zero: Box::new(zero.clone()),
                succ_var: succ_var.clone(),
                succ: Box::new(succ.clone()),
                scrutinee: Box::new(e),
            },
            Frame::Fun(arg) => Expr::app(e, arg.clone()),
            Frame::Arg(f) => Expr::app(f.clone(), e),
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hole = Expr::var("-");
        write!(f, "{}", self.plug(hole))
    }
}

/// Bottom of the stack first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stack(pub Vec<Frame>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid state at frame {index}: {reason}")]
pub struct FrameError {
    pub index: usize,
    pub reason: String,
}

impl Stack {
    pub fn empty() -> Self {
        Stack(Vec::new())
    }

    /// Argument frames must hold values.
    pub fn validate(&self) -> Result<(), FrameError> {
        for (index, fr) in self.0.iter().enumerate() {
            if let Frame::Arg(v) = fr {
                if !is_value(v) {
                    return Err(FrameError {
                        index,
                        reason: format!("argument frame `{fr}` holds a non-value"),
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ε")?;
        for fr in &self.0 {
            write!(f, ";{fr}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Eval,
    Return,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineState {
    pub mode: Mode,
    pub stack: Stack,
    pub expr: Expr,
}

impl MachineState {
    pub fn initial(e: &Expr) -> Self {
        MachineState {
            mode: Mode::Eval,
            stack: Stack::empty(),
            expr: e.clone(),
        }
    }

    pub fn is_final(&self) -> bool {
        self.mode == Mode::Return && self.stack.0.is_empty()
    }

    /// Every frame is valid, and a returning state carries a value.
    pub fn validate(&self) -> Result<(), FrameError> {
        self.stack.validate()?;
        if self.mode == Mode::Return && !is_value(&self.expr) {
            return Err(FrameError {
                index: self.stack.0.len(),
                reason: format!("returning non-value `{}`", self.expr),
            });
        }
        Ok(())
    }
}

/// `ε ▷ e`
pub fn compile(e: &Expr) -> MachineState {
    MachineState::initial(e)
}

impl fmt::Display for MachineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.mode {
            Mode::Eval => "▷",
            Mode::Return => "◁",
        };
        write!(f, "{} {arrow} {}", self.stack, self.expr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KRule {
    Zero,
    Succ1,
    Succ2,
    Case,
    CaseZ,
    CaseS,
    Fun,
    App1,
    App2,
    App3,
    Eff,
}

impl KRule {
    pub fn name(self) -> &'static str {
        match self {
            KRule::Zero => "KE-Zero",
            KRule::Succ1 => "KE-Succ1",
            KRule::Succ2 => "KE-Succ2",
            KRule::Case => "KE-Case",
            KRule::CaseZ => "KE-CaseZ",
            KRule::CaseS => "KE-CaseS",
            KRule::Fun => "KE-Fun",
            KRule::App1 => "KE-App1",
            KRule::App2 => "KE-App2",
            KRule::App3 => "KE-App3",
            KRule::Eff => "KE-Eff",
        }
    }

    /// Transitions that correspond to a reduction step.
    pub fn is_contraction(self) -> bool {
        matches!(self, KRule::CaseZ | KRule::CaseS | KRule::App3 | KRule::Eff)
    }
}

impl fmt::Display for KRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KStep {
    Next {
        state: MachineState,
        emitted: Trace,
        rule: KRule,
    },
    /// `ε ◁ v`
    Halted,
    Stuck,
}

/// One machine transition.
pub fn k_step(s: &MachineState) -> KStep {
    match step_owned(s.clone()) {
        Ok((state, emitted, rule)) => KStep::Next {
            state,
            emitted,
            rule,
        },
        Err(Halt::Final) => KStep::Halted,
        Err(Halt::Stuck) => KStep::Stuck,
    }
}

enum Halt {
    Final,
    Stuck,
}

fn step_owned(mut s: MachineState) -> Result<(MachineState, Trace, KRule), Halt> {
    let mut emitted = Trace::empty();
    let rule = match s.mode {
        Mode::Eval => match std::mem::replace(&mut s.expr, Expr::Zero) {
            Expr::Zero => {
                s.mode = Mode::Return;
                KRule::Zero
            }
            lam @ Expr::Lam { .. } => {
                s.expr = lam;
                s.mode = Mode::Return;
                KRule::Fun
            }
            Expr::Succ(inner) => {
                s.stack.0.push(Frame::Succ);
                s.expr = *inner;
                KRule::Succ1
            }
            Expr::Case {
                zero,
                succ_var,
                succ,
                scrutinee,
            } => {
                s.stack.0.push(Frame::Case {
                    zero: *zero,
                    succ_var,
                    succ: *succ,
                });
                s.expr = *scrutinee;
                KRule::Case
            }
            Expr::App(f, a) => {
                s.stack.0.push(Frame::Fun(*a));
                s.expr = *f;
                KRule::App1
            }
            Expr::Eff(l, body) => {
                emitted.push(l);
                s.expr = *body;
                KRule::Eff
            }
            _ => return Err(Halt::Stuck),
        },
        Mode::Return => {
            let v = std::mem::replace(&mut s.expr, Expr::Zero);
            match s.stack.0.pop() {
                None => return Err(Halt::Final),
                Some(Frame::Succ) => {
                    s.expr = Expr::succ(v);
                    KRule::Succ2
                }
                Some(Frame::Case {
                    zero,
                    succ_var,
                    succ,
                }) => {
                    s.mode = Mode::Eval;
                    match v {
                        Expr::Zero => {
                            s.expr = zero;
                            KRule::CaseZ
                        }
                        Expr::Succ(n) => {
                            s.expr = case_succ_branch(&succ_var, &succ, &n).map_err(|_| Halt::Stuck)?;
                            KRule::CaseS
                        }
                        _ => return Err(Halt::Stuck),
                    }
                }
                Some(Frame::Fun(arg)) => {
                    s.stack.0.push(Frame::Arg(v));
                    s.expr = arg;
                    s.mode = Mode::Eval;
                    KRule::App2
                }
                Some(Frame::Arg(f)) => {
                    if !f.is_lam() {
                        return Err(Halt::Stuck);
                    }
                    s.expr = beta(&f, &v).map_err(|_| Halt::Stuck)?;
                    s.mode = Mode::Eval;
                    KRule::App3
                }
            }
        }
    };
    Ok((s, emitted, rule))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KStatus {
    Final,
    OutOfBudget,
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRun {
    pub final_state: MachineState,
    pub trace: Trace,
    pub steps: u64,
    /// Transitions that were contractions.
    pub contractions: u64,
    pub status: KStatus,
}

/// Runs at most `budget` transitions.
pub fn k_run(s: &MachineState, budget: u64) -> KRun {
    k_run_with(s, budget, |_, _| {})
}

/// Like [`k_run`], reporting each transition with the state it produced.
pub fn k_run_with(s: &MachineState, budget: u64, mut on_step: impl FnMut(KRule, &MachineState)) -> KRun {
    let mut cur = s.clone();
    let mut trace = Trace::empty();
    let (mut steps, mut contractions) = (0, 0);
    let status = loop {
        if cur.is_final() {
            break KStatus::Final;
        }
        if steps == budget {
            break KStatus::OutOfBudget;
        }
        let snapshot = cur.clone();
        match step_owned(cur) {
            Ok((next, emitted, rule)) => {
                trace.append(&emitted);
                steps += 1;
                contractions += rule.is_contraction() as u64;
                on_step(rule, &next);
                cur = next;
            }
            Err(_) => {
                cur = snapshot;
                break KStatus::Stuck;
            }
        }
    };
    KRun {
        final_state: cur,
        trace,
        steps,
        contractions,
        status,
    }
}

/// The term a state stands for: the stack plugged with the current term.
pub fn unwind(s: &MachineState) -> Expr {
    s.stack
        .0
        .iter()
        .rev()
        .fold(s.expr.clone(), |e, fr| fr.plug(e))
}

/// The full transition sequence from `e`, for display.
pub fn trajectory(e: &Expr, budget: u64) -> Vec<(Option<KRule>, MachineState)> {
    let init = MachineState::initial(e);
    let mut out = vec![(None, init.clone())];
    k_run_with(&init, budget, |r, s| out.push((Some(r), s.clone())));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    /// Machine transitions examined.
    pub machine_steps: u64,
    /// Big-stop budgets examined.
    pub budgets: u64,
    /// The common value, when both sides reached one.
    pub value: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportMismatch {
    #[error("after {contractions} contractions the machine emitted `{machine}` but big-stop emitted `{bigstop}` (first difference at label {index})")]
    Trace {
        contractions: u64,
        index: usize,
        machine: Trace,
        bigstop: Trace,
    },
    #[error("after {contractions} contractions the machine is at `{machine}` but big-stop stopped at `{bigstop}`")]
    Term {
        contractions: u64,
        machine: Expr,
        bigstop: Expr,
    },
    #[error("machine halted with `{machine}` after {contractions} contractions but big-stop stopped at `{bigstop}`")]
    Halting {
        contractions: u64,
        machine: Expr,
        bigstop: Expr,
    },
    #[error("big-stop evaluation failed: {0}")]
    BigStop(#[from] BigStopError),
    #[error("machine is stuck at {0}")]
    MachineStuck(String),
}

/// The machine's position right after its `n`-th contraction.
struct Checkpoints {
    /// Index `n` holds the trace and unwound term after `n` contractions.
    points: Vec<(Trace, Expr)>,
    run: KRun,
}

fn checkpoints(e: &Expr, max_steps: u64, max_contractions: u64) -> Checkpoints {
    let mut cur = MachineState::initial(e);
    let mut points = vec![(Trace::empty(), e.clone())];
    let mut trace = Trace::empty();
    let (mut steps, mut contractions) = (0, 0);
    let status = loop {
        if cur.is_final() {
            break KStatus::Final;
        }
        if steps == max_steps || contractions == max_contractions {
            break KStatus::OutOfBudget;
        }
        match k_step(&cur) {
            KStep::Next {
                state,
                emitted,
                rule,
            } => {
                trace.append(&emitted);
                steps += 1;
                cur = state;
                if rule.is_contraction() {
                    contractions += 1;
                    points.push((trace.clone(), unwind(&cur)));
                }
            }
            KStep::Halted => break KStatus::Final,
            KStep::Stuck => break KStatus::Stuck,
        }
    };
    Checkpoints {
        points,
        run: KRun {
            final_state: cur,
            trace,
            steps,
            contractions,
            status,
        },
    }
}

fn compare(n: u64, machine: &Trace, bigstop: &Trace) -> Result<(), ReportMismatch> {
    match machine.first_divergence(bigstop) {
        None => Ok(()),
        Some(index) => Err(ReportMismatch::Trace {
            contractions: n,
            index,
            machine: machine.clone(),
            bigstop: bigstop.clone(),
        }),
    }
}

fn compare_point(e: &Expr, n: u64, point: &(Trace, Expr)) -> Result<(), ReportMismatch> {
    let b = bigstop_eval(e, n)?;
    compare(n, &point.0, &b.trace)?;
    if b.stopped != point.1 {
        return Err(ReportMismatch::Term {
            contractions: n,
            machine: point.1.clone(),
            bigstop: b.stopped,
        });
    }
    Ok(())
}

fn compare_final(e: &Expr, run: &KRun) -> Result<Expr, ReportMismatch> {
    let b = bigstop_eval(e, run.contractions)?;
    compare(run.contractions, &run.trace, &b.trace)?;
    if b.stopped != run.final_state.expr {
        return Err(ReportMismatch::Halting {
            contractions: run.contractions,
            machine: run.final_state.expr.clone(),
            bigstop: b.stopped,
        });
    }
    Ok(b.stopped)
}

/// Machine to big-stop: within `kbudget` transitions, every point reached
/// after `n` contractions unwinds to the term big-stop reaches with budget
/// `n`, under the same trace, and a final state carries the value big-stop
/// derives.
pub fn soundness_check(e: &Expr, kbudget: u64) -> Result<Report, ReportMismatch> {
    let cps = checkpoints(e, kbudget, u64::MAX);
    if cps.run.status == KStatus::Stuck {
        return Err(ReportMismatch::MachineStuck(cps.run.final_state.to_string()));
    }
    for (n, point) in cps.points.iter().enumerate() {
        compare_point(e, n as u64, point)?;
    }
    let value = match cps.run.status {
        KStatus::Final => Some(compare_final(e, &cps.run)?),
        _ => None,
    };
    Ok(Report {
        machine_steps: cps.run.steps,
        budgets: cps.points.len() as u64,
        value,
    })
}

/// Transition cap used when the machine must catch up with a budget.
const CATCH_UP_STEPS: u64 = 10_000_000;

/// Big-stop to machine: for every budget up to `pbudget` the machine reaches
/// the same term and trace after as many contractions, and a derivation that
/// ends in a value is matched by a final machine state.
pub fn completeness_check(e: &Expr, pbudget: u64) -> Result<Report, ReportMismatch> {
    // one contraction past the budget, so the steps after the last counted
    // contraction still run
    let cps = checkpoints(e, CATCH_UP_STEPS, pbudget.saturating_add(1));
    let mut value = None;
    for n in 0..=pbudget {
        let b = bigstop_eval(e, n)?;
        match cps.points.get(n as usize) {
            Some(point) => compare_point(e, n, point)?,
            None if cps.run.status == KStatus::Stuck => {
                return Err(ReportMismatch::MachineStuck(cps.run.final_state.to_string()))
            }
            None => {}
        }
        if is_value(&b.stopped) {
            if cps.run.status != KStatus::Final {
                return Err(ReportMismatch::Halting {
                    contractions: cps.run.contractions,
                    machine: unwind(&cps.run.final_state),
                    bigstop: b.stopped,
                });
            }
            value = Some(compare_final(e, &cps.run)?);
            break;
        }
    }
    Ok(Report {
        machine_steps: cps.run.steps,
        budgets: pbudget + 1,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn runs_to_value() {
        let e = p("(eff[a] fun _(x) => s(x)) (eff[b] z)");
        let r = k_run(&MachineState::initial(&e), 100);
        assert_eq!(r.status, KStatus::Final);
        assert_eq!(r.final_state.expr, Expr::numeral(1));
        assert_eq!(r.trace.to_string(), "a·b");
        assert_eq!(r.contractions, 3);
    }

    #[test]
    fn trajectory_printing() {
        let t = trajectory(&p("s(z)"), 10);
        let lines: Vec<String> = t.iter().map(|(_, s)| s.to_string()).collect();
        assert_eq!(lines, vec!["ε ▷ s(z)", "ε;s(-) ▷ z", "ε;s(-) ◁ z", "ε ◁ s(z)"]);
    }

    #[test]
    fn unwinding_and_stacks() {
        let s = MachineState {
            mode: Mode::Eval,
            stack: Stack(vec![Frame::Succ, Frame::Fun(Expr::Zero)]),
            expr: p("fun _(x) => x"),
        };
        assert_eq!(unwind(&s), p("s((fun _(x) => x) z)"));
        assert!(s.stack.validate().is_ok());
        let bad = Stack(vec![Frame::Arg(p("(fun _(x) => x) z"))]);
        assert_eq!(bad.validate().unwrap_err().index, 0);
    }

    #[test]
    fn stuck_machine() {
        let r = k_run(&MachineState::initial(&p("z z")), 100);
        assert_eq!(r.status, KStatus::Stuck);
    }

    #[test]
    fn checks_pass() {
        let e = p("(fun f(x) => case x { z => eff[a] z | s(y) => eff[b] f y }) s(s(z))");
        assert_eq!(soundness_check(&e, 1000).unwrap().value, Some(Expr::Zero));
        assert_eq!(completeness_check(&e, 50).unwrap().value, Some(Expr::Zero));
        let omega = p("(fun f(x) => f x) z");
        assert_eq!(soundness_check(&omega, 200).unwrap().value, None);
        assert_eq!(completeness_check(&omega, 30).unwrap().value, None);
    }

    #[test]
    fn completeness_at_exact_budget() {
        // the machine still returns through s(-) after its last contraction
        let e = p("s((fun _(x) => x) z)");
        assert_eq!(completeness_check(&e, 1).unwrap().value, Some(Expr::numeral(1)));
    }

    #[test]
    fn compiled_states_validate() {
        let s = compile(&p("s(z)"));
        assert_eq!((s.mode, s.stack.0.len()), (Mode::Eval, 0));
        assert!(s.validate().is_ok());
        let bad = MachineState {
            mode: Mode::Return,
            stack: Stack::empty(),
            expr: p("(fun _(x) => x) z"),
        };
        assert!(bad.validate().is_err());
    }
}
