//! Derivation trees as JSON:
//! `{"rule", "from", "to", "trace": [labels], "premises": [...]}`.
//! An annihilated trace ends with the entry `"0"`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Derivation, Rule};
use crate::syntax::{parse_mnf_expr, ParseError};
use crate::trace::{AnnTrace, Label, Trace};

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("bad term `{text}`: {source}")]
    Term { text: String, source: ParseError },
    #[error("bad trace entry `{0}`")]
    Label(String),
}

#[derive(Serialize, Deserialize)]
struct Node {
    rule: String,
    from: String,
    to: String,
    trace: Vec<String>,
    premises: Vec<Node>,
}

fn export(d: &Derivation) -> Node {
    let mut trace: Vec<String> = d.trace.prefix.labels().iter().map(|l| l.to_string()).collect();
    if d.trace.annihilated {
        trace.push("0".into());
    }
    Node {
        rule: d.rule.name(),
        from: d.from.to_string(),
        to: d.to.to_string(),
        trace,
        premises: d.premises.iter().map(export).collect(),
    }
}

fn import(n: Node) -> Result<Derivation, ImportError> {
    let rule = Rule::parse(&n.rule).ok_or(ImportError::UnknownRule(n.rule))?;
    let term = |text: String| {
        parse_mnf_expr(&text).map_err(|source| ImportError::Term { text, source })
    };
    let mut labels = n.trace;
    let annihilated = labels.last().is_some_and(|l| l == "0");
    if annihilated {
        labels.pop();
    }
    let prefix = labels
        .into_iter()
        .map(|l| Label::new(l.clone()).map_err(|_| ImportError::Label(l)))
        .collect::<Result<Trace, _>>()?;
    Ok(Derivation {
        rule,
        from: term(n.from)?,
        to: term(n.to)?,
        trace: AnnTrace {
            prefix,
            annihilated,
        },
        premises: n
            .premises
            .into_iter()
            .map(import)
            .collect::<Result<_, _>>()?,
    })
}

pub fn derivation_to_json(d: &Derivation) -> String {
    serde_json::to_string_pretty(&export(d)).expect("derivations always serialize")
}

pub fn derivation_from_json(s: &str) -> Result<Derivation, ImportError> {
    import(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstop::{annihilator_eval, bigstop_eval};
    use crate::syntax::parse_expr;

    #[test]
    fn round_trip() {
        let e = parse_expr("(fun f(x) => case x { z => eff[a] z | s(y) => f y }) s(z)").unwrap();
        for n in [0, 2, 50] {
            let d = bigstop_eval(&e, n).unwrap().derivation;
            assert_eq!(derivation_from_json(&derivation_to_json(&d)).unwrap(), d);
        }
        let d = annihilator_eval(&parse_expr("eff[a] (fun f(x) => f x) z").unwrap(), 1)
            .unwrap()
            .derivation;
        let text = derivation_to_json(&d);
        assert!(text.contains("\"0\""));
        assert_eq!(derivation_from_json(&text).unwrap(), d);
    }

    #[test]
    fn field_order() {
        let d = bigstop_eval(&crate::syntax::Expr::Zero, 0).unwrap().derivation;
        let text = derivation_to_json(&d);
        let pos: Vec<usize> = ["\"rule\"", "\"from\"", "\"to\"", "\"trace\"", "\"premises\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn unknown_rule() {
        let text = r#"{"rule":"X","from":"z","to":"z","trace":[],"premises":[]}"#;
        assert!(matches!(derivation_from_json(text), Err(ImportError::UnknownRule(_))));
    }
}
