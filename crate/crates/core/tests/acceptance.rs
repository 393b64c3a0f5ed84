//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bigstop::bigstop::{bigstop_eval, check_derivation, Dialect};
use bigstop::harness::corpus::{ALLOC_BOUNDED, ALLOC_UNBOUNDED, COUNTDOWN, FILINSKI, LEROY_GRALL};
use bigstop::harness::suites::{
    check_annihilator, check_ec, check_imp_freeze, check_imp_stop_multi, check_mnf_translation,
    check_progress_preservation, check_stop_multi, check_stop_step, imp_inputs, run_imp_check, run_pcf_check,
    PropertyReport, SuiteConfig,
};
use bigstop::harness::{corpus_programs, default_labels, enumerate_exprs, gen_many, GenConfig};
use bigstop::imp::{imp_bigstop, imp_multi_step, parse_stmt, ImpConfig, ImpState, Stmt};
use bigstop::kmachine::{compile, k_run, unwind, KStatus};
use bigstop::smallstep::{multi_step, RunStatus};
use bigstop::syntax::Expr;
use bigstop::trace::{Label, Trace};
use common::{mutations, p, t};

const SEED: u64 = 1;
const ENUM_SIZE: usize = 7;
const GENERATED: usize = 10_000;
/// Budget used to decide whether a term terminates.
const HORIZON: u64 = 200;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn enumeration() -> Vec<Expr> {
    enumerate_exprs(ENUM_SIZE, &default_labels()).expect("size within limit")
}

fn generated(count: usize) -> Vec<Expr> {
    gen_many(&GenConfig::new(SEED, 25), count)
}

fn cfg(max_budget: u64) -> SuiteConfig {
    SuiteConfig {
        seed: SEED,
        max_budget,
        ..SuiteConfig::default()
    }
}

fn verdict(r: &PropertyReport) -> Verdict {
    match r.failures.first() {
        None => Ok(format!("{}: {} inputs", r.property, r.trials)),
        Some(f) => Err(format!(
            "{}: {} of {} inputs fail; first `{}` (minimized `{}`) at budget {:?}: expected {}, got {}",
            r.property,
            r.failures.len(),
            r.trials,
            f.input,
            f.minimized,
            f.budget,
            f.expected,
            f.actual
        )),
    }
}

fn all(parts: Vec<Verdict>) -> Verdict {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for p in parts {
        match p {
            Ok(s) => ok.push(s),
            Err(s) => bad.push(s),
        }
    }
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        Err(bad.join("; "))
    }
}

fn stop_multi() -> Verdict {
    let inputs = enumeration();
    if inputs.len() < 500 {
        return Err(format!("only {} enumerated terms", inputs.len()));
    }
    let start = Instant::now();
    let r = run_pcf_check("stop-multi", &inputs, check_stop_multi, &cfg(10));
    let took = start.elapsed();
    let timing = if took < Duration::from_secs(60) {
        Ok(format!("{:.1} s", took.as_secs_f64()))
    } else {
        Err(format!("took {:.1} s", took.as_secs_f64()))
    };
    all(vec![verdict(&r), timing])
}

fn stop_step() -> Verdict {
    verdict(&run_pcf_check("stop-step", &generated(GENERATED), check_stop_step, &cfg(64)))
}

fn progress_preservation() -> Verdict {
    let r = run_pcf_check(
        "progress-preservation",
        &generated(GENERATED),
        check_progress_preservation,
        &cfg(64),
    );
    verdict(&r)
}

fn checked(inputs: &[Expr], budgets: &[u64]) -> Verdict {
    use rayon::prelude::*;
    let bad: Vec<String> = inputs
        .par_iter()
        .flat_map_iter(|e| budgets.iter().map(move |&n| (e, n)))
        .filter_map(|(e, n)| {
            let d = bigstop_eval(e, n).ok()?.derivation;
            check_derivation(&d, Dialect::Plain)
                .err()
                .map(|v| format!("{e} at budget {n}: {v}"))
        })
        .collect();
    match bad.first() {
        None => Ok(format!("{} derivations", inputs.len() * budgets.len())),
        Some(b) => Err(format!("{} invalid derivations, first {b}", bad.len())),
    }
}

fn derivation_integrity() -> Verdict {
    let gen = generated(GENERATED);
    let budgets: Vec<u64> = (0..=10).collect();
    let mutated = mutations();
    let accepted: Vec<_> = mutated
        .iter()
        .filter(|m| check_derivation(&m.mutated, m.dialect).is_ok())
        .map(|m| m.name)
        .collect();
    let rejected = if accepted.is_empty() {
        Ok(format!("{} mutations rejected", mutated.len()))
    } else {
        Err(format!("mutations accepted: {accepted:?}"))
    };
    all(vec![
        checked(&enumeration(), &budgets),
        checked(&gen, &[1, 64]),
        rejected,
    ])
}

fn terminates(e: &Expr) -> bool {
    multi_step(e, HORIZON).status == RunStatus::ReachedValue
}

fn kmachine() -> Verdict {
    use rayon::prelude::*;
    let mut inputs = enumeration();
    let (conv, div): (Vec<_>, Vec<_>) = corpus_programs().into_iter().partition(|(_, e)| terminates(e));
    inputs.extend(conv.into_iter().map(|(_, e)| e));
    let terminating: Vec<&Expr> = inputs.par_iter().filter(|e| terminates(e)).collect();
    let bad: Vec<String> = terminating
        .par_iter()
        .filter_map(|e| {
            let r = k_run(&compile(e), 100_000_000);
            if r.status != KStatus::Final {
                return Some(format!("{e}: machine did not halt"));
            }
            let b = bigstop_eval(e, HORIZON).ok()?;
            let v = unwind(&r.final_state);
            (v != b.stopped || r.trace != b.trace)
                .then(|| format!("{e}: machine {v} | {}, big-stop {} | {}", r.trace, b.stopped, b.trace))
        })
        .collect();
    let mut parts = vec![match bad.first() {
        None => Ok(format!("{} terminating terms agree", terminating.len())),
        Some(b) => Err(format!("{} mismatches, first {b}", bad.len())),
    }];
    for (name, e) in div {
        let r = k_run(&compile(&e), 1_000_000);
        let b = bigstop_eval(&e, 200).map_err(|err| err.to_string());
        parts.push(match b {
            Err(err) => Err(format!("{name}: {err}")),
            Ok(b) => {
                let (km, bs) = (r.trace.prefix(32), b.trace.prefix(32));
                let expect_labels = name.starts_with("alloc-unbounded");
                if km != bs {
                    Err(format!("{name}: machine {km} vs big-stop {bs}"))
                } else if expect_labels && km.len() < 32 {
                    Err(format!("{name}: only {} labels", km.len()))
                } else {
                    Ok(format!("{name}: first {} labels agree", km.len()))
                }
            }
        });
    }
    all(parts)
}

fn annihilator() -> Verdict {
    let identity = if t("a·b·c·0").concat(&t("d·e·f")) == t("a·b·c·0") {
        Ok("a·b·c·0·d·e·f = a·b·c·0".to_string())
    } else {
        Err("a·b·c·0·d·e·f differs from a·b·c·0".to_string())
    };
    all(vec![
        verdict(&run_pcf_check("annihilator", &enumeration(), check_annihilator, &cfg(10))),
        identity,
    ])
}

fn alloc() -> Label {
    Label::new("alloc").unwrap()
}

fn allocs(n: usize) -> Trace {
    Trace::from_labels(vec![alloc(); n])
}

fn golden() -> Verdict {
    let lg = p(LEROY_GRALL);
    let lg_part = match (0..=64).find(|&n| {
        let b = bigstop_eval(&lg, n).unwrap();
        b.stopped != lg || !b.trace.is_empty()
    }) {
        None => Ok("Leroy-Grall term fixed at budgets 0..=64".to_string()),
        Some(n) => Err(format!("Leroy-Grall term moves at budget {n}")),
    };

    let fil = p(FILINSKI);
    let Expr::App(lam, _) = &fil else { unreachable!() };
    let expected = Expr::lam("_", "y", Expr::app(Expr::app((**lam).clone(), Expr::Zero), Expr::var("y")));
    let b = bigstop_eval(&fil, 1).unwrap();
    let fil_part = if b.stopped == expected && b.trace.is_empty() {
        Ok(format!("Filinski term at budget 1 is {expected}"))
    } else {
        Err(format!("Filinski term at budget 1 gave {} | {}", b.stopped, b.trace))
    };

    // two contractions enter the loop, then each allocation costs a beta
    // step and an emission
    let unbounded = Expr::app(p(ALLOC_UNBOUNDED), Expr::numeral(1));
    let unb_part = match (0..=16).find(|&n| {
        let b = bigstop_eval(&unbounded, 2 * n as u64 + 2).unwrap();
        b.trace != allocs(n)
    }) {
        None => Ok("alloc-unbounded yields alloc^n at budget 2n+2 for n <= 16".to_string()),
        Some(n) => Err(format!("alloc-unbounded at budget {} did not yield alloc^{n}", 2 * n + 2)),
    };

    let bounded = p(ALLOC_BOUNDED);
    let mut off = Vec::new();
    for k in 0..3 {
        let e = Expr::app(bounded.clone(), Expr::numeral(k));
        for n in 1..=32 {
            let b = bigstop_eval(&e, n).unwrap();
            if b.trace != allocs(1) {
                off.push(format!("{} at budget {n} emits `{}`", Expr::numeral(k), b.trace));
            }
        }
    }
    let bnd_part = if off.is_empty() {
        Ok("alloc-bounded emits one alloc at budgets 1..=32".to_string())
    } else {
        Err(format!("alloc-bounded: {}", off.join(", ")))
    };
    all(vec![lg_part, fil_part, unb_part, bnd_part])
}

fn imp() -> Verdict {
    let countdown = ImpConfig::new(parse_stmt(COUNTDOWN).unwrap(), ImpState::from_pairs(&[("x", 2)]));
    let goal = ImpConfig::new(Stmt::Skip, ImpState::from_pairs(&[("x", 0)]));
    let m = imp_multi_step(&countdown, 100);
    let cd = if m.config == goal && imp_bigstop(&countdown, 100) == goal {
        Ok(format!("countdown reaches {goal} in {} steps", m.steps))
    } else {
        Err(format!("countdown ends at {}", m.config))
    };
    let c = SuiteConfig {
        enum_size: 6,
        trials: 2_000,
        max_size: 10,
        ..cfg(10)
    };
    let inputs = imp_inputs(&c);
    all(vec![
        cd,
        verdict(&run_imp_check("imp-stop-multi", &inputs, check_imp_stop_multi, &c)),
        verdict(&run_imp_check("imp-freeze", &inputs, check_imp_freeze, &c)),
    ])
}

fn dialects() -> Verdict {
    all(vec![
        verdict(&run_pcf_check("mnf", &generated(2_000), check_mnf_translation, &cfg(64))),
        verdict(&run_pcf_check("ec", &enumeration(), check_ec, &cfg(10))),
    ])
}

fn run(f: fn() -> Verdict) -> Verdict {
    std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".to_string())))
        .expect("spawn")
        .join()
        .unwrap_or_else(|_| Err("panicked".to_string()))
}

fn main() -> ExitCode {
    rayon::ThreadPoolBuilder::new()
        .stack_size(256 << 20)
        .build_global()
        .expect("thread pool");
    let criteria: [Criterion; 9] = [
        ("stop/multi equivalence", stop_multi),
        ("stop/step and big/multi equivalence", stop_step),
        ("progress and preservation", progress_preservation),
        ("derivation integrity", derivation_integrity),
        ("K machine", kmachine),
        ("annihilator equivalence", annihilator),
        ("worked examples", golden),
        ("IMP", imp),
        ("MNF and evaluation-context dialects", dialects),
    ];
    // numeric arguments select criteria; anything else is ignored
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let v = run(*f);
        let secs = start.elapsed().as_secs_f64();
        match v {
            Ok(d) => println!("criterion {} {name}: PASS [{secs:.1} s] {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} {name}: FAIL [{secs:.1} s] {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {ran} criteria pass", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

