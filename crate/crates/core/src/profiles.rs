//! Application profiles: closed, pinned selections of classes and properties
//! with optional quantifier tightening.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::{sort, Diagnostic, Subject};
use crate::model::{ClassRef, PropertyRef, Quantifier, Range, Ref, ResolvedIndex, Version};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Profile {
    pub name: String,
    pub pins: BTreeMap<String, Version>,
    pub classes: BTreeSet<ClassRef>,
    pub properties: BTreeSet<PropertyRef>,
    pub overrides: BTreeMap<PropertyRef, Quantifier>,
}

impl Profile {
    pub fn contains(&self, r: &Ref) -> bool {
        self.classes.contains(r) || self.properties.contains(r)
    }

    pub fn members(&self) -> impl Iterator<Item = &Ref> {
        self.classes.iter().chain(self.properties.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.properties.is_empty()
    }

    /// Override if present, else the property's own quantifier.
    pub fn effective_quantifier(&self, index: &ResolvedIndex, property: &PropertyRef) -> Option<Quantifier> {
        self.overrides
            .get(property)
            .copied()
            .or_else(|| index.property(property).map(|p| p.quantifier))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("`{0}` is neither a class nor a property of the ecosystem")]
    UnknownRef(Ref),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: u64, column: u64, message: String },
    #[error("schema error: {0}")]
    Schema(String),
}

impl From<serde_json::Error> for ProfileError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => ProfileError::Schema(e.to_string()),
            _ => ProfileError::Syntax { line: e.line() as u64, column: e.column() as u64, message: e.to_string() },
        }
    }
}

/// Least superset of `seeds` closed under property → domain and class range,
/// and class → ancestors. Every namespace contributing a member is pinned at
/// its current version.
pub fn build_profile_closure<'a>(
    index: &ResolvedIndex,
    seeds: impl IntoIterator<Item = &'a Ref>,
    name: &str,
) -> Result<Profile, ProfileError> {
    let mut profile = Profile { name: name.to_string(), ..Default::default() };
    let mut classes = Vec::new();
    for seed in seeds {
        if let Some(p) = index.property(seed) {
            profile.properties.insert(seed.clone());
            classes.push(p.domain.clone());
            classes.extend(p.range.class().cloned());
        } else if index.class(seed).is_some() {
            classes.push(seed.clone());
        } else {
            return Err(ProfileError::UnknownRef(seed.clone()));
        }
    }
    for c in classes {
        let ancestors = index.ancestor_set(&c).into_iter().flatten().cloned();
        profile.classes.extend(ancestors);
        profile.classes.insert(c);
    }
    let prefixes: BTreeSet<String> = profile.members().map(|r| r.prefix().to_string()).collect();
    for prefix in prefixes {
        let meta = index.namespace(&prefix).expect("member namespaces are indexed");
        profile.pins.insert(prefix, meta.version.clone());
    }
    Ok(profile)
}

/// PF1 closure violations, PF2 loosening overrides, PF3 pin problems.
pub fn check_profile(index: &ResolvedIndex, profile: &Profile) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let pf1 = |subjects: &[&Ref], msg: String| Diagnostic::terms("PF1", subjects.iter().copied(), msg);
    for c in &profile.classes {
        if index.class(c).is_none() {
            out.push(pf1(&[c], format!("{c} is not a class of the ecosystem")));
            continue;
        }
        for parent in index.parents(c).into_iter().flatten() {
            if !profile.classes.contains(parent) {
                out.push(pf1(&[c, parent], format!("superclass {parent} of {c} is not in the profile")));
            }
        }
    }
    for p in &profile.properties {
        let Some(def) = index.property(p) else {
            out.push(pf1(&[p], format!("{p} is not a property of the ecosystem")));
            continue;
        };
        if !profile.classes.contains(&def.domain) {
            out.push(pf1(&[p, &def.domain], format!("domain {} of {p} is not in the profile", def.domain)));
        }
        if let Range::Class(range) = &def.range {
            if !profile.classes.contains(range) {
                out.push(pf1(&[p, range], format!("range {range} of {p} is not in the profile")));
            }
        }
    }
    for (p, q) in &profile.overrides {
        if !profile.properties.contains(p) {
            out.push(pf1(&[p], format!("override on {p}, which is not in the profile")));
            continue;
        }
        if let Some(def) = index.property(p) {
            if !q.within(&def.quantifier) {
                out.push(Diagnostic::terms(
                    "PF2",
                    [p],
                    format!("override {q} on {p} is not within base quantifier {}", def.quantifier),
                ));
            }
        }
    }
    for (prefix, pinned) in &profile.pins {
        let subject = vec![Subject::Namespace(prefix.clone())];
        match index.namespace(prefix) {
            None => out.push(Diagnostic::new("PF3", subject, format!("pinned namespace {prefix} is not in the ecosystem"))),
            Some(meta) if &meta.version != pinned => out.push(Diagnostic::new(
                "PF3",
                subject,
                format!("{prefix} is pinned at {pinned} but the ecosystem has {}", meta.version),
            )),
            Some(_) => {}
        }
    }
    let unpinned: BTreeSet<&str> =
        profile.members().map(Ref::prefix).filter(|p| !profile.pins.contains_key(*p)).collect();
    for prefix in unpinned {
        out.push(Diagnostic::new(
            "PF3",
            vec![Subject::Namespace(prefix.to_string())],
            format!("profile members come from {prefix}, which is not pinned"),
        ));
    }
    sort(&mut out);
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDoc {
    name: String,
    #[serde(default)]
    pins: IndexMap<String, String>,
    #[serde(default)]
    classes: Vec<String>,
    #[serde(default)]
    properties: Vec<String>,
    #[serde(default)]
    overrides: IndexMap<String, String>,
}

pub fn serialize_profile(profile: &Profile) -> String {
    let doc = ProfileDoc {
        name: profile.name.clone(),
        pins: profile.pins.iter().map(|(p, v)| (p.clone(), v.to_string())).collect(),
        classes: profile.classes.iter().map(ToString::to_string).collect(),
        properties: profile.properties.iter().map(ToString::to_string).collect(),
        overrides: profile.overrides.iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("profile serializes");
    out.push('\n');
    out
}

pub fn parse_profile(text: &[u8]) -> Result<Profile, ProfileError> {
    let doc: ProfileDoc = serde_json::from_slice(text)?;
    let schema = |what: &str, value: &str, e: &dyn std::fmt::Display| ProfileError::Schema(format!("{what} `{value}`: {e}"));
    let parse_ref = |what: &str, s: &String| s.parse::<Ref>().map_err(|e| schema(what, s, &e));
    let mut profile = Profile { name: doc.name, ..Default::default() };
    for (prefix, v) in &doc.pins {
        profile.pins.insert(prefix.clone(), v.parse().map_err(|e| schema("pin", v, &e))?);
    }
    for c in &doc.classes {
        profile.classes.insert(parse_ref("class", c)?);
    }
    for p in &doc.properties {
        profile.properties.insert(parse_ref("property", p)?);
    }
    for (p, q) in &doc.overrides {
        profile.overrides.insert(parse_ref("override", p)?, q.parse().map_err(|e| schema("quantifier", q, &e))?);
    }
    Ok(profile)
}
