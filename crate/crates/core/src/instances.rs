//! Instance graphs (`.inst.txt`) and their validation against a profile.
//!
//! ```text
//! # comment
//! entity <event1> a crm:E5
//! entity person1 a crm:E29, crm:E77
//! stmt event1 crm:P11 person1
//! stmt q1 sdh:P30 "a literal"
//! year event1 1620
//! ```

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diagnostics::{sort, Diagnostic, Subject};
use crate::hierarchy::subsumes;
use crate::model::{ClassRef, PropertyRef, Range, Ref, ResolvedIndex};
use crate::profiles::{check_profile, Profile};

pub const QUALITY_ROOT: &str = "sdh:C1";
pub const INTENTION_ROOT: &str = "sdh:C4";
pub const PERIOD: &str = "crm:E4";
pub const EFFECTS: &str = "sdh:P8";
pub const ENDS: &str = "sdh:P9";
pub const HAS_SETTING: &str = "sdh:P43";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Object {
    Entity(String),
    Literal(String),
}

impl Object {
    pub fn subject(&self) -> Subject {
        match self {
            Object::Entity(iri) => Subject::Entity(iri.clone()),
            Object::Literal(text) => Subject::Literal(text.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Statement {
    pub subject: String,
    pub property: PropertyRef,
    pub object: Object,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceGraph {
    pub entities: BTreeMap<String, BTreeSet<ClassRef>>,
    pub statements: BTreeSet<Statement>,
    pub years: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: entity `{iri}` is not declared")]
    UndeclaredEntity { line: usize, iri: String },
    #[error("profile fails its own checks ({} diagnostic(s))", .0.len())]
    ProfileInvalid(Vec<Diagnostic>),
}

fn iri_token(token: &str) -> &str {
    token.strip_prefix('<').and_then(|t| t.strip_suffix('>')).unwrap_or(token)
}

fn parse_literal(text: &str) -> Option<String> {
    let body = text.strip_prefix('"')?;
    let mut out = String::new();
    let mut chars = body.chars();
    while let Some(c) = chars.next() {
        match c {
            '"' => return chars.as_str().trim().is_empty().then_some(out),
            '\\' => match chars.next()? {
                'n' => out.push('\n'),
                't' => out.push('\t'),
                c @ ('"' | '\\') => out.push(c),
                _ => return None,
            },
            c => out.push(c),
        }
    }
    None
}

pub fn parse_instance_graph(text: &[u8]) -> Result<InstanceGraph, InstanceError> {
    let text = std::str::from_utf8(text)
        .map_err(|e| InstanceError::Syntax { line: 1, message: format!("input is not UTF-8: {e}") })?;
    let mut graph = InstanceGraph::default();
    let mut mentions: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: String| InstanceError::Syntax { line, message };
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim_start();
        let parse_ref = |s: &str| s.parse::<Ref>().map_err(|e| syntax(e.to_string()));
        match keyword {
            "entity" => {
                let mut parts = rest.splitn(3, char::is_whitespace);
                let (Some(iri), Some("a"), Some(classes)) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(syntax("expected `entity <iri> a <class>[, <class>...]`".into()));
                };
                let entry = graph.entities.entry(iri_token(iri).to_string()).or_default();
                for class in classes.split(',') {
                    entry.insert(parse_ref(class.trim())?);
                }
            }
            "stmt" => {
                let mut parts = rest.splitn(3, char::is_whitespace);
                let (Some(subject), Some(property), Some(object)) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(syntax("expected `stmt <iri> <property> <iri-or-\"literal\">`".into()));
                };
                let object = object.trim();
                let object = if object.starts_with('"') {
                    Object::Literal(parse_literal(object).ok_or_else(|| syntax(format!("malformed literal {object}")))?)
                } else if object.contains(char::is_whitespace) {
                    return Err(syntax(format!("unexpected text after object in `{content}`")));
                } else {
                    Object::Entity(iri_token(object).to_string())
                };
                let subject = iri_token(subject).to_string();
                mentions.push((line, subject.clone()));
                if let Object::Entity(iri) = &object {
                    mentions.push((line, iri.clone()));
                }
                graph.statements.insert(Statement { subject, property: parse_ref(property)?, object });
            }
            "year" => {
                let mut parts = rest.split_whitespace();
                let (Some(iri), Some(year), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(syntax("expected `year <iri> <integer>`".into()));
                };
                let year: i64 = year.parse().map_err(|_| syntax(format!("`{year}` is not an integer year")))?;
                let iri = iri_token(iri).to_string();
                mentions.push((line, iri.clone()));
                if graph.years.insert(iri.clone(), year).is_some_and(|old| old != year) {
                    return Err(syntax(format!("conflicting years for {iri}")));
                }
            }
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }
    for (line, iri) in mentions {
        if !graph.entities.contains_key(&iri) {
            return Err(InstanceError::UndeclaredEntity { line, iri });
        }
    }
    Ok(graph)
}

fn instance_of(index: &ResolvedIndex, graph: &InstanceGraph, entity: &str, class: &ClassRef) -> bool {
    graph.entities.get(entity).is_some_and(|asserted| asserted.iter().any(|a| subsumes(index, a, class)))
}

fn statement_subjects(s: &Statement) -> Vec<Subject> {
    vec![Subject::Entity(s.subject.clone()), Subject::Term(s.property.clone()), s.object.subject()]
}

/// Validates `graph` against `profile`. Refuses to run when the profile has
/// error-level findings of its own.
pub fn validate_instances(
    index: &ResolvedIndex,
    profile: &Profile,
    graph: &InstanceGraph,
) -> Result<Vec<Diagnostic>, InstanceError> {
    let profile_findings = check_profile(index, profile);
    if crate::diagnostics::error_count(&profile_findings) > 0 {
        return Err(InstanceError::ProfileInvalid(profile_findings));
    }
    let mut out = Vec::new();
    let entity = |iri: &str| Subject::Entity(iri.to_string());

    for (iri, classes) in &graph.entities {
        for c in classes.iter().filter(|c| !profile.classes.contains(*c)) {
            out.push(Diagnostic::new("IV1", vec![entity(iri), c.into()], format!("{iri} is asserted as {c}, which is not in the profile")));
        }
    }

    let setting = Ref::of(HAS_SETTING);
    for s in &graph.statements {
        if !profile.properties.contains(&s.property) {
            out.push(Diagnostic::new("IV2", statement_subjects(s), format!("{} is not in the profile", s.property)));
            continue;
        }
        let def = index.property(&s.property).expect("profile members are indexed");
        if !instance_of(index, graph, &s.subject, &def.domain) {
            out.push(Diagnostic::new(
                "IV3",
                statement_subjects(s),
                format!("{} is not an instance of {}, the domain of {}", s.subject, def.domain, s.property),
            ));
        }
        let range_problem = match (&def.range, &s.object) {
            (Range::Class(r), Object::Entity(o)) => {
                (!instance_of(index, graph, o, r)).then(|| format!("{o} is not an instance of {r}, the range of {}", s.property))
            }
            (Range::Class(r), Object::Literal(_)) => Some(format!("literal object where {} expects an instance of {r}", s.property)),
            (Range::Literal, Object::Entity(o)) => Some(format!("{o} is an entity but {} expects a literal", s.property)),
            (Range::Literal, Object::Literal(_)) => None,
        };
        if let Some(message) = range_problem {
            out.push(Diagnostic::new("IV4", statement_subjects(s), message));
        }
        if s.property == setting {
            let intention = instance_of(index, graph, &s.subject, &Ref::of(INTENTION_ROOT));
            let period = matches!(&s.object, Object::Entity(o) if instance_of(index, graph, o, &Ref::of(PERIOD)));
            if !intention || !period {
                out.push(Diagnostic::new(
                    "IV8",
                    statement_subjects(s),
                    format!("{HAS_SETTING} must link an instance of {INTENTION_ROOT} to an instance of {PERIOD}"),
                ));
            }
        }
    }

    let mut outgoing: BTreeMap<(&str, &PropertyRef), usize> = BTreeMap::new();
    let mut incoming: BTreeMap<(&str, &PropertyRef), usize> = BTreeMap::new();
    for s in &graph.statements {
        *outgoing.entry((s.subject.as_str(), &s.property)).or_default() += 1;
        if let Object::Entity(o) = &s.object {
            *incoming.entry((o.as_str(), &s.property)).or_default() += 1;
        }
    }
    for iri in graph.entities.keys() {
        for p in &profile.properties {
            let def = index.property(p).expect("profile members are indexed");
            let q = profile.effective_quantifier(index, p).expect("indexed");
            if instance_of(index, graph, iri, &def.domain) {
                let n = outgoing.get(&(iri.as_str(), p)).copied().unwrap_or(0);
                if !q.range.admits(n) {
                    out.push(Diagnostic::new(
                        "IV5",
                        vec![entity(iri), p.into()],
                        format!("{iri} has {n} outgoing {p} statement(s); {q} allows {}", q.range),
                    ));
                }
            }
            if let Range::Class(r) = &def.range {
                if instance_of(index, graph, iri, r) {
                    let n = incoming.get(&(iri.as_str(), p)).copied().unwrap_or(0);
                    if !q.domain.admits(n) {
                        out.push(Diagnostic::new(
                            "IV5",
                            vec![entity(iri), p.into()],
                            format!("{iri} has {n} incoming {p} statement(s); {q} allows {}", q.domain),
                        ));
                    }
                }
            }
        }
    }

    let (effects, ends) = (Ref::of(EFFECTS), Ref::of(ENDS));
    let quality = Ref::of(QUALITY_ROOT);
    for iri in graph.entities.keys().filter(|e| instance_of(index, graph, e, &quality)) {
        let sources = |p: &Ref| -> Vec<&str> {
            graph
                .statements
                .iter()
                .filter(|s| &s.property == p && s.object == Object::Entity(iri.clone()))
                .map(|s| s.subject.as_str())
                .collect()
        };
        let (effecting, ending) = (sources(&effects), sources(&ends));
        for (p, events) in [(&effects, &effecting), (&ends, &ending)] {
            if events.len() > 1 {
                out.push(Diagnostic::new(
                    "IV6",
                    vec![entity(iri), p.into()],
                    format!("{iri} has {} incoming {p} statements; at most one is allowed", events.len()),
                ));
            }
        }
        for start in &effecting {
            for end in &ending {
                let (Some(ys), Some(ye)) = (graph.years.get(*start), graph.years.get(*end)) else {
                    continue;
                };
                if ys > ye {
                    out.push(Diagnostic::new(
                        "IV7",
                        vec![entity(iri), entity(start), entity(end)],
                        format!("{iri} is effected in {ys} by {start} but ended in {ye} by {end}"),
                    ));
                }
            }
        }
    }
    sort(&mut out);
    Ok(out)
}
