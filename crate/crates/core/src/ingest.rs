//! The JSON interchange document (`.onto.json`) and RDFS / OWL-DL Turtle
//! export and import.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use oxrdf::{NamedOrBlankNode, Term, Triple};
use oxttl::TurtleParser;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Alignment, ClassDef, Dependency, Ecosystem, EcosystemError, Level, Namespace, OntoCleanTags, PropertyDef,
    Quantifier, Range, Ref, ResolvedIndex, TopCategory, Version, LITERAL_RANGE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: u64, column: u64, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("duplicate namespace prefix `{0}`")]
    DuplicatePrefix(String),
    #[error("unknown namespace prefix `{0}`")]
    UnknownPrefix(String),
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
}

impl From<serde_json::Error> for IngestError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => IngestError::Syntax {
                line: e.line() as u64,
                column: e.column() as u64,
                message: e.to_string(),
            },
            Category::Data => IngestError::Schema(e.to_string()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentDoc {
    namespaces: Vec<NamespaceDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NamespaceDoc {
    prefix: String,
    base_iri: String,
    version: String,
    level: String,
    #[serde(default)]
    depends_on: Vec<DependencyDoc>,
    #[serde(default)]
    classes: Vec<ClassDoc>,
    #[serde(default)]
    properties: Vec<PropertyDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    alignments: Vec<AlignmentDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DependencyDoc {
    prefix: String,
    version: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    id: String,
    label: String,
    #[serde(default)]
    scope_note: String,
    #[serde(default)]
    superclasses: Vec<String>,
    #[serde(default)]
    meta: MetaDoc,
    #[serde(default = "unassigned")]
    top: String,
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct MetaDoc {
    rigidity: String,
    identity: String,
    unity: String,
    dependence: String,
}

impl Default for MetaDoc {
    fn default() -> Self {
        let u = || "untagged".to_string();
        MetaDoc { rigidity: u(), identity: u(), unity: u(), dependence: u() }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PropertyDoc {
    id: String,
    label: String,
    #[serde(default)]
    inverse_label: String,
    domain: String,
    range: String,
    #[serde(default)]
    superproperties: Vec<String>,
    #[serde(default = "any_quantifier")]
    quantifier: String,
    #[serde(default)]
    flags: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlignmentDoc {
    class: String,
    superclass: String,
}

fn unassigned() -> String {
    TopCategory::Unassigned.as_str().to_string()
}

fn any_quantifier() -> String {
    Quantifier::ANY.to_string()
}

fn field<T: FromStr>(text: &str, what: &str, owner: &str) -> Result<T, IngestError>
where
    T::Err: fmt::Display,
{
    text.parse().map_err(|e| IngestError::Schema(format!("{owner}: {what}: {e}")))
}

fn refs(texts: &[String], what: &str, owner: &str) -> Result<Vec<Ref>, IngestError> {
    texts.iter().map(|t| field(t, what, owner)).collect()
}

impl NamespaceDoc {
    fn into_namespace(self) -> Result<Namespace, IngestError> {
        let owner = format!("namespace `{}`", self.prefix);
        let mut ns = Namespace::new(
            self.prefix.clone(),
            self.base_iri,
            field(&self.version, "version", &owner)?,
            field(&self.level, "level", &owner)?,
        );
        for d in self.depends_on {
            ns.depends_on.push(Dependency { version: field(&d.version, "version", &owner)?, prefix: d.prefix });
        }
        for c in self.classes {
            let owner = format!("class `{}`", c.id);
            let mut def = ClassDef::new(field(&c.id, "id", &owner)?, c.label);
            def.scope_note = c.scope_note;
            def.superclasses = refs(&c.superclasses, "superclasses", &owner)?;
            def.meta = OntoCleanTags {
                rigidity: field(&c.meta.rigidity, "rigidity", &owner)?,
                identity: field(&c.meta.identity, "identity", &owner)?,
                unity: field(&c.meta.unity, "unity", &owner)?,
                dependence: field(&c.meta.dependence, "dependence", &owner)?,
            };
            def.declared_top = field(&c.top, "top", &owner)?;
            ns.classes.push(def);
        }
        for p in self.properties {
            let owner = format!("property `{}`", p.id);
            let range = if p.range == LITERAL_RANGE {
                Range::Literal
            } else {
                Range::Class(field(&p.range, "range", &owner)?)
            };
            let mut def = PropertyDef::new(field(&p.id, "id", &owner)?, p.label, field(&p.domain, "domain", &owner)?, range);
            def.inverse_label = p.inverse_label;
            def.superproperties = refs(&p.superproperties, "superproperties", &owner)?;
            def.quantifier = field(&p.quantifier, "quantifier", &owner)?;
            for flag in &p.flags {
                def.flags.insert(field(flag, "flags", &owner)?);
            }
            ns.properties.push(def);
        }
        for a in self.alignments {
            ns.alignments.push(Alignment {
                class: field(&a.class, "alignment class", &owner)?,
                superclass: field(&a.superclass, "alignment superclass", &owner)?,
            });
        }
        Ok(ns)
    }

    fn from_namespace(ns: &Namespace) -> Self {
        let strings = |v: &[Ref]| v.iter().map(ToString::to_string).collect();
        NamespaceDoc {
            prefix: ns.prefix.clone(),
            base_iri: ns.base_iri.clone(),
            version: ns.version.to_string(),
            level: ns.level.to_string(),
            depends_on: ns
                .depends_on
                .iter()
                .map(|d| DependencyDoc { prefix: d.prefix.clone(), version: d.version.to_string() })
                .collect(),
            classes: ns
                .classes
                .iter()
                .map(|c| ClassDoc {
                    id: c.id.to_string(),
                    label: c.label.clone(),
                    scope_note: c.scope_note.clone(),
                    superclasses: strings(&c.superclasses),
                    meta: MetaDoc {
                        rigidity: c.meta.rigidity.to_string(),
                        identity: c.meta.identity.to_string(),
                        unity: c.meta.unity.to_string(),
                        dependence: c.meta.dependence.to_string(),
                    },
                    top: c.declared_top.to_string(),
                })
                .collect(),
            properties: ns
                .properties
                .iter()
                .map(|p| PropertyDoc {
                    id: p.id.to_string(),
                    label: p.label.clone(),
                    inverse_label: p.inverse_label.clone(),
                    domain: p.domain.to_string(),
                    range: p.range.to_string(),
                    superproperties: strings(&p.superproperties),
                    quantifier: p.quantifier.to_string(),
                    flags: p.flags.iter().map(ToString::to_string).collect(),
                })
                .collect(),
            alignments: ns
                .alignments
                .iter()
                .map(|a| AlignmentDoc { class: a.class.to_string(), superclass: a.superclass.to_string() })
                .collect(),
        }
    }
}

/// Parses an `.onto.json` document into an unresolved ecosystem.
pub fn parse_ecosystem_document(text: &[u8]) -> Result<Ecosystem, IngestError> {
    let doc: DocumentDoc = serde_json::from_slice(text)?;
    let namespaces = doc
        .namespaces
        .into_iter()
        .map(NamespaceDoc::into_namespace)
        .collect::<Result<Vec<_>, _>>()?;
    Ecosystem::new(namespaces).map_err(|e| match e {
        EcosystemError::DuplicatePrefix(p) => IngestError::DuplicatePrefix(p),
        other => IngestError::Schema(other.to_string()),
    })
}

/// Canonical document: namespaces by prefix, definitions by ref, fixed key
/// order, two-space indentation, trailing newline.
pub fn serialize_ecosystem_document(ecosystem: &Ecosystem) -> String {
    serialize_namespaces(ecosystem.namespaces())
}

pub fn serialize_namespaces(namespaces: &[Namespace]) -> String {
    let mut sorted: Vec<Namespace> = namespaces.to_vec();
    sorted.sort_by(|a, b| a.prefix.cmp(&b.prefix));
    for ns in &mut sorted {
        ns.canonicalize();
    }
    let doc = DocumentDoc { namespaces: sorted.iter().map(NamespaceDoc::from_namespace).collect() };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Rdfs,
    OwlDl,
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rdfs" => Ok(Dialect::Rdfs),
            "owl" | "owl-dl" | "owl_dl" => Ok(Dialect::OwlDl),
            other => Err(format!("unknown dialect `{other}` (expected rdfs or owl)")),
        }
    }
}

const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
const OWL: &str = "http://www.w3.org/2002/07/owl#";
const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
/// Annotation vocabulary for data RDFS and OWL have no slot for.
pub const ANN: &str = "https://ontoeco.dev/annotation#";

const RESERVED_PREFIXES: [(&str, &str); 5] = [("ann", ANN), ("owl", OWL), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD)];

fn namespace_iri(base: &str) -> String {
    format!("{}/", base.trim_end_matches('/'))
}

fn pn_prefix_ok(prefix: &str) -> bool {
    let mut chars = prefix.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && prefix.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        && !prefix.ends_with('-')
        && !RESERVED_PREFIXES.iter().any(|(p, _)| *p == prefix)
}

fn pn_local_ok(local: &str) -> bool {
    local.chars().next().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        && local.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !local.ends_with('.')
}

fn escape_literal(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn escape_iri(iri: &str) -> String {
    let mut out = String::from("<");
    for c in iri.chars() {
        if matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') || c <= ' ' {
            out.push_str(&format!("\\u{:04X}", c as u32));
        } else {
            out.push(c);
        }
    }
    out.push('>');
    out
}

struct TurtleWriter<'a> {
    index: &'a ResolvedIndex,
    used_prefixes: BTreeSet<String>,
}

impl TurtleWriter<'_> {
    fn term(&mut self, r: &Ref) -> String {
        let base = self.index.namespace(r.prefix()).map(|m| m.base_iri.as_str()).unwrap_or_default();
        if pn_prefix_ok(r.prefix()) && pn_local_ok(r.local_id()) && !base.is_empty() {
            self.used_prefixes.insert(r.prefix().to_string());
            r.to_string()
        } else {
            escape_iri(&r.iri(base))
        }
    }
}

fn block(subject: &str, pairs: &[(String, String)]) -> String {
    let lines: Vec<String> = pairs.iter().map(|(p, o)| format!("{p} {o}")).collect();
    format!("{subject} {} .\n", lines.join(" ;\n    "))
}

/// Exports the selected namespaces as Turtle.
///
/// Subjects are the selected classes and properties, plus classes outside the
/// selection that a selected namespace aligns under one of its own classes
/// (those blocks carry only the `rdfs:subClassOf` triples).
pub fn export_turtle(index: &ResolvedIndex, dialect: Dialect, selection: &[String]) -> Result<String, IngestError> {
    for prefix in selection {
        if index.namespace(prefix).is_none() {
            return Err(IngestError::UnknownPrefix(prefix.clone()));
        }
    }
    let selected: BTreeSet<&str> = selection.iter().map(String::as_str).collect();
    let is_selected = |r: &Ref| selected.contains(r.prefix());
    let mut w = TurtleWriter { index, used_prefixes: BTreeSet::new() };
    let (class_type, literal_type) = match dialect {
        Dialect::Rdfs => ("rdfs:Class", "rdf:Property"),
        Dialect::OwlDl => ("owl:Class", "owl:DatatypeProperty"),
    };
    let object_type = match dialect {
        Dialect::Rdfs => "rdf:Property",
        Dialect::OwlDl => "owl:ObjectProperty",
    };

    let mut blocks: Vec<(Ref, String)> = Vec::new();
    for c in index.classes() {
        let own = is_selected(&c.id);
        let declared: BTreeSet<&Ref> = c.superclasses.iter().collect();
        let parents: BTreeSet<&Ref> = index
            .parents(&c.id)
            .into_iter()
            .flatten()
            .filter(|p| if declared.contains(p) { own } else { is_selected(p) })
            .collect();
        if !own && parents.is_empty() {
            continue;
        }
        let mut pairs = Vec::new();
        if own {
            pairs.push(("a".to_string(), class_type.to_string()));
            if !c.label.is_empty() {
                pairs.push(("rdfs:label".to_string(), escape_literal(&c.label)));
            }
            if !c.scope_note.is_empty() {
                pairs.push(("rdfs:comment".to_string(), escape_literal(&c.scope_note)));
            }
        }
        for p in parents {
            let obj = w.term(p);
            pairs.push(("rdfs:subClassOf".to_string(), obj));
        }
        let subject = w.term(&c.id);
        blocks.push((c.id.clone(), block(&subject, &pairs)));
    }
    for p in index.properties().filter(|p| is_selected(&p.id)) {
        let kind = if p.range == Range::Literal { literal_type } else { object_type };
        let mut pairs = vec![("a".to_string(), kind.to_string())];
        if !p.label.is_empty() {
            pairs.push(("rdfs:label".to_string(), escape_literal(&p.label)));
        }
        let mut sups = p.superproperties.clone();
        sups.sort();
        sups.dedup();
        for s in &sups {
            pairs.push(("rdfs:subPropertyOf".to_string(), w.term(s)));
        }
        pairs.push(("rdfs:domain".to_string(), w.term(&p.domain)));
        let range = match &p.range {
            Range::Class(r) => w.term(r),
            Range::Literal => "rdfs:Literal".to_string(),
        };
        pairs.push(("rdfs:range".to_string(), range));
        if dialect == Dialect::OwlDl {
            if !p.inverse_label.is_empty() {
                pairs.push(("ann:inverseLabel".to_string(), escape_literal(&p.inverse_label)));
            }
            pairs.push(("ann:quantifier".to_string(), escape_literal(&p.quantifier.to_string())));
        }
        let subject = w.term(&p.id);
        blocks.push((p.id.clone(), block(&subject, &pairs)));
    }
    blocks.sort_by(|a, b| a.0.cmp(&b.0));

    let mut headers = Vec::new();
    for prefix in &selected {
        let meta = index.namespace(prefix).expect("checked above");
        let pairs = [
            ("a".to_string(), "owl:Ontology".to_string()),
            ("owl:versionInfo".to_string(), escape_literal(&meta.version.to_string())),
        ];
        headers.push(block(&escape_iri(&meta.base_iri), &pairs));
    }

    let mut declarations: BTreeMap<String, String> =
        RESERVED_PREFIXES.iter().filter(|(p, _)| *p != "xsd").map(|(p, iri)| (p.to_string(), iri.to_string())).collect();
    for prefix in &w.used_prefixes {
        let meta = index.namespace(prefix).expect("used prefixes are indexed");
        declarations.insert(prefix.clone(), namespace_iri(&meta.base_iri));
    }
    let mut out = String::new();
    for (prefix, iri) in &declarations {
        out.push_str(&format!("@prefix {prefix}: {} .\n", escape_iri(iri)));
    }
    for text in headers.iter().chain(blocks.iter().map(|(_, b)| b)) {
        out.push('\n');
        out.push_str(text);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurtleImport {
    pub namespace: Namespace,
    /// Triples outside the supported vocabulary, in N-Triples form.
    pub skipped: Vec<String>,
}

#[derive(Default)]
struct PendingClass {
    label: Option<String>,
    comment: Option<String>,
    superclasses: BTreeSet<Ref>,
}

#[derive(Default)]
struct PendingProperty {
    label: Option<String>,
    inverse_label: Option<String>,
    domain: Option<Ref>,
    range: Option<Range>,
    superproperties: BTreeSet<Ref>,
    quantifier: Option<Quantifier>,
}

fn set_once<T: PartialEq>(slot: &mut Option<T>, value: T, what: &str, owner: &Ref) -> Result<(), IngestError> {
    match slot {
        Some(existing) if *existing != value => {
            Err(IngestError::UnsupportedStructure(format!("{owner} has more than one {what}")))
        }
        _ => {
            *slot = Some(value);
            Ok(())
        }
    }
}

/// Imports the classes and properties of one namespace from Turtle.
///
/// The namespace IRI comes from the `@prefix` declaration named `prefix`, else
/// from a single `owl:Ontology` subject. OntoClean tags, top categories and
/// flags are not representable and stay at their defaults; dependencies are
/// left empty.
pub fn import_turtle(text: &str, prefix: &str, level: Level) -> Result<TurtleImport, IngestError> {
    let mut parser = TurtleParser::new().for_slice(text.as_bytes());
    let mut triples: Vec<Triple> = Vec::new();
    for item in parser.by_ref() {
        match item {
            Ok(t) => triples.push(t),
            Err(e) => {
                let at = e.location().start;
                return Err(IngestError::Syntax { line: at.line + 1, column: at.column + 1, message: e.message().to_string() });
            }
        }
    }
    let declared: Vec<(String, String)> =
        parser.prefixes().map(|(name, iri)| (name.to_string(), iri.to_string())).collect();

    let iri_of = |t: &Term| match t {
        Term::NamedNode(n) => Some(n.as_str().to_string()),
        _ => None,
    };
    let subject_iri = |s: &NamedOrBlankNode| match s {
        NamedOrBlankNode::NamedNode(n) => Some(n.as_str().to_string()),
        _ => None,
    };
    let rdf_type = format!("{RDF}type");
    let ontology_type = format!("{OWL}Ontology");
    let ontologies: BTreeSet<String> = triples
        .iter()
        .filter(|t| t.predicate.as_str() == rdf_type && iri_of(&t.object).as_deref() == Some(ontology_type.as_str()))
        .filter_map(|t| subject_iri(&t.subject))
        .collect();

    let base_iri = match declared.iter().find(|(name, _)| name == prefix) {
        Some((_, iri)) => iri.trim_end_matches('/').to_string(),
        None if ontologies.len() == 1 => ontologies.first().cloned().expect("one"),
        None => format!("urn:ontoeco:{prefix}"),
    };
    let own_iri = namespace_iri(&base_iri);
    let to_ref = |iri: &str| -> Option<Ref> {
        if let Some(local) = iri.strip_prefix(own_iri.as_str()) {
            return Ref::new(prefix, local).ok();
        }
        declared
            .iter()
            .filter(|(name, _)| !RESERVED_PREFIXES.iter().any(|(p, _)| p == name))
            .filter(|(_, ns)| iri.starts_with(ns.as_str()) && iri.len() > ns.len())
            .max_by_key(|(_, ns)| ns.len())
            .and_then(|(name, ns)| Ref::new(name.as_str(), &iri[ns.len()..]).ok())
    };
    let own = |iri: &str| to_ref(iri).filter(|r| r.prefix() == prefix);

    let class_types = [format!("{RDFS}Class"), format!("{OWL}Class")];
    let property_types =
        [format!("{RDF}Property"), format!("{OWL}ObjectProperty"), format!("{OWL}DatatypeProperty")];
    let mut classes: BTreeMap<Ref, PendingClass> = BTreeMap::new();
    let mut properties: BTreeMap<Ref, PendingProperty> = BTreeMap::new();
    for t in &triples {
        if t.predicate.as_str() != rdf_type {
            continue;
        }
        let (Some(s), Some(o)) = (subject_iri(&t.subject).and_then(|s| own(&s)), iri_of(&t.object)) else {
            continue;
        };
        if class_types.contains(&o) {
            classes.entry(s).or_default();
        } else if property_types.contains(&o) {
            properties.entry(s).or_default();
        }
    }

    let mut version: Option<Version> = None;
    let mut alignments = BTreeSet::new();
    let mut skipped = Vec::new();
    let literal_of = |t: &Term| match t {
        Term::Literal(l) => Some(l.value().to_string()),
        _ => None,
    };
    let pred = |local: &str, ns: &str| format!("{ns}{local}");
    for t in &triples {
        let p = t.predicate.as_str();
        let Some(s_iri) = subject_iri(&t.subject) else {
            skipped.push(t.to_string());
            continue;
        };
        let obj_ref = iri_of(&t.object).and_then(|o| to_ref(&o));
        let literal = literal_of(&t.object);
        let mut used = false;
        if ontologies.contains(&s_iri) {
            if p == rdf_type {
                used = true;
            } else if p == pred("versionInfo", OWL) {
                if let Some(v) = literal.as_deref().and_then(|l| l.parse().ok()) {
                    used = true;
                    version = Some(v);
                }
            }
        } else if let Some(s) = own(&s_iri).filter(|s| classes.contains_key(s)) {
            let c = classes.get_mut(&s).expect("present");
            if p == rdf_type {
                used = true;
            } else if p == pred("label", RDFS) {
                if let Some(l) = literal {
                    set_once(&mut c.label, l, "label", &s)?;
                    used = true;
                }
            } else if p == pred("comment", RDFS) {
                if let Some(l) = literal {
                    set_once(&mut c.comment, l, "comment", &s)?;
                    used = true;
                }
            } else if p == pred("subClassOf", RDFS) {
                if let Some(o) = obj_ref {
                    c.superclasses.insert(o);
                    used = true;
                }
            }
        } else if let Some(s) = own(&s_iri).filter(|s| properties.contains_key(s)) {
            let d = properties.get_mut(&s).expect("present");
            if p == rdf_type {
                used = true;
            } else if p == pred("label", RDFS) {
                if let Some(l) = literal {
                    set_once(&mut d.label, l, "label", &s)?;
                    used = true;
                }
            } else if p == pred("domain", RDFS) {
                if let Some(o) = obj_ref {
                    set_once(&mut d.domain, o, "domain", &s)?;
                    used = true;
                }
            } else if p == pred("range", RDFS) {
                let object = iri_of(&t.object);
                let range = match object.as_deref() {
                    Some(iri) if iri == pred("Literal", RDFS) || iri.starts_with(XSD) => Some(Range::Literal),
                    _ => obj_ref.map(Range::Class),
                };
                if let Some(r) = range {
                    set_once(&mut d.range, r, "range", &s)?;
                    used = true;
                }
            } else if p == pred("subPropertyOf", RDFS) {
                if let Some(o) = obj_ref {
                    d.superproperties.insert(o);
                    used = true;
                }
            } else if p == pred("inverseLabel", ANN) {
                if let Some(l) = literal {
                    set_once(&mut d.inverse_label, l, "inverse label", &s)?;
                    used = true;
                }
            } else if p == pred("quantifier", ANN) {
                if let Some(q) = literal.as_deref().and_then(|l| l.parse().ok()) {
                    set_once(&mut d.quantifier, q, "quantifier", &s)?;
                    used = true;
                }
            }
        } else if p == pred("subClassOf", RDFS) {
            if let (Some(class), Some(sup)) = (to_ref(&s_iri), obj_ref.filter(|o| o.prefix() == prefix)) {
                if class.prefix() != prefix && classes.contains_key(&sup) {
                    alignments.insert(Alignment { class, superclass: sup });
                    used = true;
                }
            }
        }
        if !used {
            skipped.push(t.to_string());
        }
    }

    let mut ns = Namespace::new(prefix, base_iri, version.unwrap_or_else(|| "0".parse().expect("version")), level);
    for (id, c) in classes {
        let mut def = ClassDef::new(id, c.label.unwrap_or_default());
        def.scope_note = c.comment.unwrap_or_default();
        def.superclasses = c.superclasses.into_iter().collect();
        ns.classes.push(def);
    }
    for (id, p) in properties {
        let missing = |what: &str| IngestError::UnsupportedStructure(format!("{id} has no {what}"));
        let domain = p.domain.clone().ok_or_else(|| missing("domain"))?;
        let range = p.range.clone().ok_or_else(|| missing("range"))?;
        let mut def = PropertyDef::new(id, p.label.unwrap_or_default(), domain, range);
        def.inverse_label = p.inverse_label.unwrap_or_default();
        def.superproperties = p.superproperties.into_iter().collect();
        def.quantifier = p.quantifier.unwrap_or(Quantifier::ANY);
        ns.properties.push(def);
    }
    ns.alignments = alignments.into_iter().collect();
    ns.canonicalize();
    Ok(TurtleImport { namespace: ns, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fixture_doc() -> String {
        serialize_ecosystem_document(&fixtures::ecosystem(&["all"]).unwrap())
    }

    #[test]
    fn empty_document() {
        let eco = parse_ecosystem_document(br#"{"namespaces": []}"#).unwrap();
        assert!(eco.is_empty());
    }

    #[test]
    fn parses_edge_from_document() {
        let eco = parse_ecosystem_document(fixture_doc().as_bytes()).unwrap();
        let c1 = eco.namespace("sdh").unwrap().class(&Ref::of("sdh:C1")).unwrap();
        assert_eq!(c1.superclasses, vec![Ref::of("crm:E2")]);
    }

    #[test]
    fn inverted_quantifier_is_a_schema_error() {
        let doc = r#"{"namespaces": [{"prefix": "x", "base_iri": "http://x", "version": "1", "level": "core",
            "classes": [{"id": "x:A", "label": "A"}],
            "properties": [{"id": "x:P", "label": "p", "domain": "x:A", "range": "~literal", "quantifier": "1..0:0..n"}]}]}"#;
        assert!(matches!(parse_ecosystem_document(doc.as_bytes()), Err(IngestError::Schema(_))));
    }

    #[test]
    fn unknown_key_and_syntax_errors() {
        assert!(matches!(
            parse_ecosystem_document(br#"{"namespaces": [], "extra": 1}"#),
            Err(IngestError::Schema(_))
        ));
        assert!(matches!(
            parse_ecosystem_document(b"{\n  \"namespaces\": [,]\n}"),
            Err(IngestError::Syntax { line: 2, .. })
        ));
        let dup = r#"{"namespaces": [
            {"prefix": "x", "base_iri": "http://x", "version": "1", "level": "core"},
            {"prefix": "x", "base_iri": "http://y", "version": "1", "level": "core"}]}"#;
        assert_eq!(parse_ecosystem_document(dup.as_bytes()), Err(IngestError::DuplicatePrefix("x".into())));
    }

    #[test]
    fn serialization_is_a_fixed_point() {
        let first = fixture_doc();
        let again = serialize_ecosystem_document(&parse_ecosystem_document(first.as_bytes()).unwrap());
        assert_eq!(first, again);
    }

    #[test]
    fn export_contains_sdh_edges() {
        let index = fixtures::ecosystem(&["all"]).unwrap().resolve().unwrap();
        let ttl = export_turtle(&index, Dialect::Rdfs, &["sdh".to_string()]).unwrap();
        assert!(ttl.contains("sdh:C1 a rdfs:Class ;"), "{ttl}");
        assert!(ttl.contains("rdfs:subClassOf crm:E2 ."));
        assert!(ttl.contains("sdh:P8 a rdf:Property ;\n    rdfs:label \"effects\" ;\n    rdfs:domain crm:E5 ;\n    rdfs:range sdh:C1 ."));
        assert!(ttl.contains("crm:E52 rdfs:subClassOf sdh:C5 ."));
    }

    #[test]
    fn empty_selection_is_only_prefixes() {
        let index = fixtures::ecosystem(&["all"]).unwrap().resolve().unwrap();
        let ttl = export_turtle(&index, Dialect::OwlDl, &[]).unwrap();
        assert!(ttl.lines().all(|l| l.starts_with("@prefix ")), "{ttl}");
        assert_eq!(
            export_turtle(&index, Dialect::Rdfs, &["nope".into()]),
            Err(IngestError::UnknownPrefix("nope".into()))
        );
    }

    #[test]
    fn import_of_empty_document() {
        let imported = import_turtle("", "x", Level::Project).unwrap();
        assert!(imported.namespace.classes.is_empty());
        assert!(imported.skipped.is_empty());
    }

    #[test]
    fn two_domains_are_unsupported() {
        let ttl = "@prefix x: <http://x/> .\n@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n\
                   @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
                   x:A a rdfs:Class .\nx:B a rdfs:Class .\n\
                   x:P a rdf:Property ; rdfs:domain x:A, x:B ; rdfs:range x:A .\n";
        let err = import_turtle(ttl, "x", Level::Core).unwrap_err();
        assert_eq!(err, IngestError::UnsupportedStructure("x:P has more than one domain".into()));
    }

    #[test]
    fn foreign_triples_are_skipped() {
        let ttl = "@prefix x: <http://x/> .\n@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
                   x:A a rdfs:Class ; rdfs:seeAlso <http://elsewhere> .\n";
        let imported = import_turtle(ttl, "x", Level::Core).unwrap();
        assert_eq!(imported.namespace.classes.len(), 1);
        assert_eq!(imported.skipped.len(), 1);
        assert!(matches!(import_turtle("x:A a", "x", Level::Core), Err(IngestError::Syntax { .. })));
    }
}
