use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A `prefix:LOCAL` reference to a class or property, e.g. `crm:E2` or `sdh:P8`.
///
/// Ordering is lexicographic on the prefix and numeric-aware on the local id,
/// so `crm:E2 < crm:E10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ref {
    prefix: String,
    local_id: String,
}

pub type ClassRef = Ref;
pub type PropertyRef = Ref;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefError {
    #[error("reference `{0}` is not of the form prefix:LOCAL")]
    Malformed(String),
    #[error("reference `{0}` has an empty prefix or local id")]
    Empty(String),
    #[error("reference `{0}` contains whitespace")]
    Whitespace(String),
}

impl Ref {
    pub fn new(prefix: impl Into<String>, local_id: impl Into<String>) -> Result<Self, RefError> {
        let prefix = prefix.into();
        let local_id = local_id.into();
        let shown = format!("{prefix}:{local_id}");
        if prefix.is_empty() || local_id.is_empty() {
            return Err(RefError::Empty(shown));
        }
        if prefix.chars().chain(local_id.chars()).any(char::is_whitespace) {
            return Err(RefError::Whitespace(shown));
        }
        if prefix.contains(':') {
            return Err(RefError::Malformed(shown));
        }
        Ok(Ref { prefix, local_id })
    }

    /// Panicking constructor for literals known to be well formed.
    pub fn of(text: &str) -> Self {
        text.parse().unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn local_id(&self) -> &str {
        &self.local_id
    }

    pub fn iri(&self, base_iri: &str) -> String {
        format!("{}/{}", base_iri.trim_end_matches('/'), self.local_id)
    }
}

impl FromStr for Ref {
    type Err = RefError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (prefix, local) = s.split_once(':').ok_or_else(|| RefError::Malformed(s.to_string()))?;
        Ref::new(prefix, local)
    }
}

impl fmt::Display for Ref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.prefix, self.local_id)
    }
}

impl Ord for Ref {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prefix
            .cmp(&other.prefix)
            .then_with(|| natural_cmp(&self.local_id, &other.local_id))
    }
}

impl PartialOrd for Ref {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for Ref {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Ref {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Compares strings chunk by chunk, digit runs by numeric value.
/// Ties on value (`E02` vs `E2`) fall back to plain byte order so the
/// ordering stays total and consistent with equality.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut left = Chunks::new(a);
    let mut right = Chunks::new(b);
    loop {
        match (left.next(), right.next()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) => {
                let ord = match (is_digits(x), is_digits(y)) {
                    (true, true) => cmp_digits(x, y),
                    _ => x.cmp(y),
                };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

fn is_digits(s: &str) -> bool {
    s.as_bytes().first().is_some_and(u8::is_ascii_digit)
}

fn cmp_digits(x: &str, y: &str) -> Ordering {
    let x = x.trim_start_matches('0');
    let y = y.trim_start_matches('0');
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

struct Chunks<'a> {
    rest: &'a str,
}

impl<'a> Chunks<'a> {
    fn new(s: &'a str) -> Self {
        Chunks { rest: s }
    }
}

impl<'a> Iterator for Chunks<'a> {
    type Item = &'a str;

    fn next(&mut self) -> Option<&'a str> {
        let first = self.rest.chars().next()?;
        let digit = first.is_ascii_digit();
        let end = self
            .rest
            .char_indices()
            .find(|(_, c)| c.is_ascii_digit() != digit)
            .map_or(self.rest.len(), |(i, _)| i);
        let (chunk, rest) = self.rest.split_at(end);
        self.rest = rest;
        Some(chunk)
    }
}
