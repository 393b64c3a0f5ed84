//! Small-step, big-step, big-stop and freezing big-stop for the while-language.
//!
//! Budgets count small steps, including the step that discards a finished
//! `skip` on the left of a sequence, so a budget of `n` always matches `n`
//! small steps exactly.

use thiserror::Error;

use super::{aeval, ImpConfig, ImpState, Stmt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImpRule {
    Bind,
    Seq1,
    Seq2,
    Then,
    Else,
    Do,
    Done,
}

impl ImpRule {
    pub fn name(self) -> &'static str {
        match self {
            ImpRule::Bind => "SI-Bind",
            ImpRule::Seq1 => "SI-Seq1",
            ImpRule::Seq2 => "SI-Seq2",
            ImpRule::Then => "SI-Then",
            ImpRule::Else => "SI-Else",
            ImpRule::Do => "SI-Do",
            ImpRule::Done => "SI-Done",
        }
    }
}

/// `⟨skip | σ⟩` has no step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("statement is skip")]
pub struct Done;

/// One small step, with the rule used at the root.
pub fn imp_small_step(c: &ImpConfig) -> Result<(ImpConfig, ImpRule), Done> {
    let mut state = c.state.clone();
    let (stmt, rule) = match &c.stmt {
        Stmt::Skip => return Err(Done),
        Stmt::Assign(x, a) => {
            let v = aeval(&state, a);
            state.update(x, v);
            (Stmt::Skip, ImpRule::Bind)
        }
        Stmt::Seq(s1, s2) => match **s1 {
            Stmt::Skip => ((**s2).clone(), ImpRule::Seq2),
            _ => {
                let (next, _) = imp_small_step(&ImpConfig::new((**s1).clone(), state))?;
                return Ok((
                    ImpConfig::new(Stmt::Seq(Box::new(next.stmt), s2.clone()), next.state),
                    ImpRule::Seq1,
                ));
            }
        },
        Stmt::If(a, s) => {
            if aeval(&state, a) != 0 {
                ((**s).clone(), ImpRule::Then)
            } else {
                (Stmt::Skip, ImpRule::Else)
            }
        }
        Stmt::While(a, s) => {
            if aeval(&state, a) != 0 {
                (Stmt::seq((**s).clone(), c.stmt.clone()), ImpRule::Do)
            } else {
                (Stmt::Skip, ImpRule::Done)
            }
        }
    };
    Ok((ImpConfig::new(stmt, state), rule))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpStatus {
    Done,
    OutOfBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpRun {
    pub config: ImpConfig,
    pub steps: u64,
    pub status: ImpStatus,
}

pub fn imp_multi_step(c: &ImpConfig, budget: u64) -> ImpRun {
    let mut cur = c.clone();
    let mut steps = 0;
    loop {
        if cur.stmt == Stmt::Skip {
            return ImpRun {
                config: cur,
                steps,
                status: ImpStatus::Done,
            };
        }
        if steps == budget {
            return ImpRun {
                config: cur,
                steps,
                status: ImpStatus::OutOfBudget,
            };
        }
        cur = imp_small_step(&cur).expect("non-skip statements always step").0;
        steps += 1;
    }
}

/// Big-stop evaluation over the big-step rules plus the stopping rules.
pub fn imp_bigstop(c: &ImpConfig, budget: u64) -> ImpConfig {
    let mut b = budget;
    let (stmt, state) = stop(&c.stmt, c.state.clone(), &mut b);
    ImpConfig::new(stmt, state)
}

fn stop(s: &Stmt, mut state: ImpState, budget: &mut u64) -> (Stmt, ImpState) {
    let mut s = s.clone();
    loop {
        if s == Stmt::Skip || *budget == 0 {
            return (s, state);
        }
        *budget -= 1;
        match s {
            Stmt::Skip => unreachable!(),
            Stmt::Assign(x, a) => {
                let v = aeval(&state, &a);
                state.update(&x, v);
                return (Stmt::Skip, state);
            }
            Stmt::If(a, body) => {
                if aeval(&state, &a) == 0 {
                    return (Stmt::Skip, state);
                }
                s = *body;
            }
            Stmt::Seq(s1, s2) => {
                // the decrement above pays for discarding `skip` once s1 is done
                *budget += 1;
                let (r1, st) = stop(&s1, state, budget);
                state = st;
                if r1 != Stmt::Skip || *budget == 0 {
                    return (Stmt::Seq(Box::new(r1), s2), state);
                }
                *budget -= 1;
                s = *s2;
            }
            Stmt::While(ref a, ref body) => {
                if aeval(&state, a) == 0 {
                    return (Stmt::Skip, state);
                }
                let (r, st) = stop(body, state, budget);
                state = st;
                if r != Stmt::Skip || *budget == 0 {
                    return (Stmt::Seq(Box::new(r), Box::new(s)), state);
                }
                *budget -= 1;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fuel exhausted")]
pub struct FuelExhausted;

/// Big-step evaluation to a final state, spending one unit of fuel per small
/// step the run corresponds to.
pub fn imp_bigstep(c: &ImpConfig, fuel: u64) -> Result<ImpState, FuelExhausted> {
    let mut f = fuel;
    exec(&c.stmt, c.state.clone(), &mut f)
}

fn burn(fuel: &mut u64) -> Result<(), FuelExhausted> {
    *fuel = fuel.checked_sub(1).ok_or(FuelExhausted)?;
    Ok(())
}

fn exec(s: &Stmt, mut state: ImpState, fuel: &mut u64) -> Result<ImpState, FuelExhausted> {
    match s {
        Stmt::Skip => Ok(state),
        Stmt::Assign(x, a) => {
            burn(fuel)?;
            let v = aeval(&state, a);
            state.update(x, v);
            Ok(state)
        }
        Stmt::Seq(s1, s2) => {
            let state = exec(s1, state, fuel)?;
            burn(fuel)?;
            exec(s2, state, fuel)
        }
        Stmt::If(a, body) => {
            burn(fuel)?;
            if aeval(&state, a) != 0 {
                exec(body, state, fuel)
            } else {
                Ok(state)
            }
        }
        Stmt::While(a, body) => loop {
            burn(fuel)?;
            if aeval(&state, a) == 0 {
                return Ok(state);
            }
            state = exec(body, state, fuel)?;
            burn(fuel)?;
        },
    }
}

/// Big-stop evaluation whose stop rule returns the frozen current state.
pub fn imp_bigstop_freeze(c: &ImpConfig, budget: u64) -> ImpState {
    let mut b = budget;
    freeze_run(&c.stmt, c.state.clone(), &mut b)
}

fn freeze_run(s: &Stmt, mut state: ImpState, budget: &mut u64) -> ImpState {
    let mut s = s.clone();
    loop {
        if s == Stmt::Skip {
            return state;
        }
        if *budget == 0 {
            return state.freeze();
        }
        *budget -= 1;
        match s {
            Stmt::Skip => unreachable!(),
            Stmt::Assign(x, a) => {
                let v = aeval(&state, &a);
                state.update(&x, v);
                return state;
            }
            Stmt::If(a, body) => {
                if aeval(&state, &a) == 0 {
                    return state;
                }
                s = *body;
            }
            Stmt::Seq(s1, s2) => {
                *budget += 1;
                state = freeze_run(&s1, state, budget);
                if *budget == 0 {
                    return state.freeze();
                }
                *budget -= 1;
                s = *s2;
            }
            Stmt::While(ref a, ref body) => {
                if aeval(&state, a) == 0 {
                    return state;
                }
                state = freeze_run(body, state, budget);
                if *budget == 0 {
                    return state.freeze();
                }
                *budget -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::{parse_stmt, AExpr};

    fn countdown() -> ImpConfig {
        ImpConfig::new(
            parse_stmt("while x do { x := x - 1 }").unwrap(),
            ImpState::from_pairs(&[("x", 2)]),
        )
    }

    #[test]
    fn small_step_rules() {
        let c = ImpConfig::new(Stmt::assign("x", AExpr::Lit(2)), ImpState::new());
        let (n, r) = imp_small_step(&c).unwrap();
        assert_eq!((n.stmt, n.state.get("x"), r), (Stmt::Skip, 2, ImpRule::Bind));
        let c = ImpConfig::new(parse_stmt("while 1 do { skip }").unwrap(), ImpState::new());
        assert_eq!(imp_small_step(&c).unwrap().0.stmt, parse_stmt("skip; while 1 do { skip }").unwrap());
        let c = ImpConfig::new(parse_stmt("skip; skip").unwrap(), ImpState::new());
        assert_eq!(imp_small_step(&c).unwrap(), (ImpConfig::new(Stmt::Skip, ImpState::new()), ImpRule::Seq2));
        assert_eq!(imp_small_step(&ImpConfig::new(Stmt::Skip, ImpState::new())), Err(Done));
    }

    #[test]
    fn countdown_terminates() {
        let r = imp_multi_step(&countdown(), 100);
        assert_eq!(r.config, ImpConfig::new(Stmt::Skip, ImpState::from_pairs(&[("x", 0)])));
        assert_eq!(r.steps, 7);
        assert_eq!(imp_bigstop(&countdown(), 100), r.config);
        assert_eq!(imp_bigstep(&countdown(), 7), Ok(ImpState::from_pairs(&[("x", 0)])));
        assert_eq!(imp_bigstep(&countdown(), 6), Err(FuelExhausted));
    }

    #[test]
    fn stop_matches_steps() {
        for n in 0..10 {
            let m = imp_multi_step(&countdown(), n);
            assert_eq!(imp_bigstop(&countdown(), n), m.config, "budget {n}");
            let f = imp_bigstop_freeze(&countdown(), n);
            assert_eq!(f.bindings, m.config.state.bindings);
            assert_eq!(f.frozen, m.config.stmt != Stmt::Skip);
        }
    }

    #[test]
    fn infinite_loop() {
        let c = ImpConfig::new(parse_stmt("while 1 do { skip }").unwrap(), ImpState::new());
        assert_eq!(imp_bigstep(&c, 1000), Err(FuelExhausted));
        assert_eq!(imp_bigstop(&c, 3), imp_multi_step(&c, 3).config);
    }
}
