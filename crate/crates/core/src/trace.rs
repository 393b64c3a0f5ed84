//! Effect labels and traces.
//!
//! A [`Trace`] is an element of the free monoid over labels. An [`AnnTrace`]
//! extends it with a left-absorbing element written `0`: once a trace is
//! annihilated, anything appended to it is discarded.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("invalid label `{0}`: labels are identifiers")]
    InvalidLabel(String),
    #[error("malformed trace `{0}`")]
    Malformed(String),
}

/// An effect label. Labels are identifiers, so they never collide with the
/// printed forms `1` and `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Result<Self, TraceError> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
            }
            _ => false,
        };
        if ok {
            Ok(Label(name))
        } else {
            Err(TraceError::InvalidLabel(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Label {
    type Err = TraceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::new(s)
    }
}

/// A finite sequence of labels. The empty trace prints as `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Trace(Vec<Label>);

impl Trace {
    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn single(label: Label) -> Self {
        Trace(vec![label])
    }

    pub fn from_labels(labels: Vec<Label>) -> Self {
        Trace(labels)
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, label: Label) {
        self.0.push(label);
    }

    pub fn concat(&self, other: &Trace) -> Trace {
        let mut labels = Vec::with_capacity(self.len() + other.len());
        labels.extend_from_slice(&self.0);
        labels.extend_from_slice(&other.0);
        Trace(labels)
    }

    pub fn append(&mut self, other: &Trace) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn is_prefix_of(&self, other: &Trace) -> bool {
        other.0.starts_with(&self.0)
    }

    /// The first `n` labels (or the whole trace if it is shorter).
    pub fn prefix(&self, n: usize) -> Trace {
        Trace(self.0[..n.min(self.len())].to_vec())
    }

    /// Index of the first position at which the traces differ, if any.
    pub fn first_divergence(&self, other: &Trace) -> Option<usize> {
        let common = self.len().min(other.len());
        (0..common)
            .find(|&i| self.0[i] != other.0[i])
            .or(if self.len() == other.len() { None } else { Some(common) })
    }
}

/// Monoid multiplication on traces.
pub fn trace_concat(a: &Trace, b: &Trace) -> Trace {
    a.concat(b)
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn split_labels(s: &str) -> Vec<&str> {
    s.split('·').map(str::trim).collect()
}

impl FromStr for Trace {
    type Err = TraceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Trace::empty());
        }
        split_labels(s)
            .into_iter()
            .map(|p| Label::new(p).map_err(|_| TraceError::Malformed(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Trace)
    }
}

impl FromIterator<Label> for Trace {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        Trace(iter.into_iter().collect())
    }
}

/// A trace possibly terminated by the annihilator.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AnnTrace {
    pub prefix: Trace,
    pub annihilated: bool,
}

impl AnnTrace {
    pub fn empty() -> Self {
        AnnTrace::default()
    }

    pub fn zero() -> Self {
        AnnTrace {
            prefix: Trace::empty(),
            annihilated: true,
        }
    }

    pub fn plain(prefix: Trace) -> Self {
        AnnTrace {
            prefix,
            annihilated: false,
        }
    }

    pub fn single(label: Label) -> Self {
        AnnTrace::plain(Trace::single(label))
    }

    pub fn concat(&self, other: &AnnTrace) -> AnnTrace {
        if self.annihilated {
            self.clone()
        } else {
            AnnTrace {
                prefix: self.prefix.concat(&other.prefix),
                annihilated: other.annihilated,
            }
        }
    }
}

/// Multiplication in the monoid with a left annihilator.
pub fn ann_concat(a: &AnnTrace, b: &AnnTrace) -> AnnTrace {
    a.concat(b)
}

impl From<Trace> for AnnTrace {
    fn from(t: Trace) -> Self {
        AnnTrace::plain(t)
    }
}

impl fmt::Display for AnnTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.prefix.is_empty(), self.annihilated) {
            (true, true) => f.write_str("0"),
            (false, true) => write!(f, "{}·0", self.prefix),
            _ => write!(f, "{}", self.prefix),
        }
    }
}

impl FromStr for AnnTrace {
    type Err = TraceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(AnnTrace::zero());
        }
        match s.strip_suffix("·0") {
            Some(rest) => Ok(AnnTrace {
                prefix: rest.parse()?,
                annihilated: true,
            }),
            None => Ok(AnnTrace::plain(s.parse()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Trace {
        s.parse().unwrap()
    }

    fn a(s: &str) -> AnnTrace {
        s.parse().unwrap()
    }

    #[test]
    fn concat_examples() {
        assert_eq!(trace_concat(&t("a·b"), &t("c")), t("a·b·c"));
        assert_eq!(trace_concat(&t("1"), &t("a")), t("a"));
        assert_eq!(trace_concat(&t("a"), &t("1")), t("a"));
    }

    #[test]
    fn annihilator_absorbs_suffix() {
        assert_eq!(ann_concat(&a("a·b·c·0"), &a("d·e·f")), a("a·b·c·0"));
        assert_eq!(ann_concat(&a("a·b"), &a("0")), a("a·b·0"));
        assert_eq!(ann_concat(&a("0"), &a("a")), a("0"));
    }

    #[test]
    fn printing() {
        assert_eq!(Trace::empty().to_string(), "1");
        assert_eq!(AnnTrace::zero().to_string(), "0");
        assert_eq!(a("a·b·0").to_string(), "a·b·0");
        assert_eq!(t("a·b").to_string(), "a·b");
    }

    #[test]
    fn labels_are_identifiers() {
        assert!(Label::new("alloc").is_ok());
        assert!(Label::new("0").is_err());
        assert!(Label::new("1").is_err());
        assert!(Label::new("").is_err());
        assert!(Label::new("a·b").is_err());
    }

    #[test]
    fn divergence_index() {
        assert_eq!(t("a·b").first_divergence(&t("a·b")), None);
        assert_eq!(t("a·b").first_divergence(&t("a·c")), Some(1));
        assert_eq!(t("a").first_divergence(&t("a·c")), Some(1));
    }
}
