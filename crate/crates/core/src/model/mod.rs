//! Core domain types for a layered ontology ecosystem.
//!
//! An [`Ecosystem`] is a set of versioned [`Namespace`]s, each declaring
//! classes and properties at one abstraction [`Level`]. Cross-namespace
//! references are `(prefix, local_id)` pairs ([`Ref`]) and are checked and
//! indexed by [`resolve_ecosystem`], which produces an immutable
//! [`ResolvedIndex`].

mod diff;
mod refs;
mod resolve;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use diff::{apply_changeset, diff_namespaces, ChangeSet, DefinitionChange, DiffError, TextChange, TextField};
pub use refs::{natural_cmp, ClassRef, PropertyRef, Ref, RefError};
pub use resolve::{resolve_ecosystem, NamespaceMeta, ResolveError, ResolvedIndex};

/// Abstraction level of a namespace. Dependencies may only point to the same
/// or a lower level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Foundational,
    Core,
    CoreExtension,
    Subdomain,
    Project,
}

impl Level {
    pub const ALL: [Level; 5] = [
        Level::Foundational,
        Level::Core,
        Level::CoreExtension,
        Level::Subdomain,
        Level::Project,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} `{value}`")]
pub struct EnumParseError {
    pub kind: &'static str,
    pub value: String,
}

macro_rules! string_enum {
    ($ty:ident, $kind:literal, { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($ty::$variant => $text),+
                }
            }
        }

        impl FromStr for $ty {
            type Err = EnumParseError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($ty::$variant),)+
                    _ => Err(EnumParseError { kind: $kind, value: s.to_string() }),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

string_enum!(Level, "level", {
    Foundational => "foundational",
    Core => "core",
    CoreExtension => "core-extension",
    Subdomain => "subdomain",
    Project => "project",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Rigidity {
    Rigid,
    NonRigid,
    AntiRigid,
    #[default]
    Untagged,
}

string_enum!(Rigidity, "rigidity", {
    Rigid => "rigid",
    NonRigid => "non_rigid",
    AntiRigid => "anti_rigid",
    Untagged => "untagged",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Identity {
    CarriesIdentity,
    NoIdentity,
    #[default]
    Untagged,
}

string_enum!(Identity, "identity", {
    CarriesIdentity => "carries_identity",
    NoIdentity => "no_identity",
    Untagged => "untagged",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Unity {
    Unity,
    NoUnity,
    AntiUnity,
    #[default]
    Untagged,
}

string_enum!(Unity, "unity", {
    Unity => "unity",
    NoUnity => "no_unity",
    AntiUnity => "anti_unity",
    Untagged => "untagged",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Dependence {
    Dependent,
    Independent,
    #[default]
    Untagged,
}

string_enum!(Dependence, "dependence", {
    Dependent => "dependent",
    Independent => "independent",
    Untagged => "untagged",
});

/// OntoClean meta-property annotations. `Untagged` opts the class out of the
/// corresponding checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct OntoCleanTags {
    pub rigidity: Rigidity,
    pub identity: Identity,
    pub unity: Unity,
    pub dependence: Dependence,
}

impl OntoCleanTags {
    pub fn rigid() -> Self {
        OntoCleanTags { rigidity: Rigidity::Rigid, ..Default::default() }
    }

    pub fn anti_rigid() -> Self {
        OntoCleanTags { rigidity: Rigidity::AntiRigid, ..Default::default() }
    }

    pub fn is_untagged(&self) -> bool {
        *self == OntoCleanTags::default()
    }
}

/// Foundational top category. Only set on partition roots; every other class
/// derives it through its ancestry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum TopCategory {
    Endurant,
    Perdurant,
    Quality,
    AbstractRegion,
    #[default]
    Unassigned,
}

string_enum!(TopCategory, "top category", {
    Endurant => "endurant",
    Perdurant => "perdurant",
    Quality => "quality",
    AbstractRegion => "abstract_region",
    Unassigned => "unassigned",
});

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub id: ClassRef,
    pub label: String,
    pub scope_note: String,
    pub superclasses: Vec<ClassRef>,
    pub meta: OntoCleanTags,
    pub declared_top: TopCategory,
}

impl ClassDef {
    pub fn new(id: ClassRef, label: impl Into<String>) -> Self {
        ClassDef {
            id,
            label: label.into(),
            scope_note: String::new(),
            superclasses: Vec::new(),
            meta: OntoCleanTags::default(),
            declared_top: TopCategory::Unassigned,
        }
    }

    pub fn is_partition_root(&self) -> bool {
        self.declared_top != TopCategory::Unassigned
    }
}

/// Range of a property: a class, or the primitive-value marker for literals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Range {
    Class(ClassRef),
    Literal,
}

impl Range {
    pub fn class(&self) -> Option<&ClassRef> {
        match self {
            Range::Class(c) => Some(c),
            Range::Literal => None,
        }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Class(c) => c.fmt(f),
            Range::Literal => f.write_str(LITERAL_RANGE),
        }
    }
}

/// Marker used in documents for a primitive-value range.
pub const LITERAL_RANGE: &str = "~literal";

/// Upper cardinality bound. `Finite` sorts below `Unbounded`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UpperBound {
    Finite(u32),
    Unbounded,
}

impl UpperBound {
    pub fn admits(self, count: usize) -> bool {
        match self {
            UpperBound::Finite(max) => count <= max as usize,
            UpperBound::Unbounded => true,
        }
    }
}

impl fmt::Display for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperBound::Finite(n) => write!(f, "{n}"),
            UpperBound::Unbounded => f.write_str("n"),
        }
    }
}

/// Cardinality bounds on one side of a property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    min: u32,
    max: UpperBound,
}

impl Bounds {
    pub const ANY: Bounds = Bounds { min: 0, max: UpperBound::Unbounded };

    pub fn new(min: u32, max: UpperBound) -> Result<Self, QuantifierError> {
        if let UpperBound::Finite(m) = max {
            if min > m {
                return Err(QuantifierError::MinAboveMax { min, max: m });
            }
        }
        Ok(Bounds { min, max })
    }

    pub fn min(&self) -> u32 {
        self.min
    }

    pub fn max(&self) -> UpperBound {
        self.max
    }

    pub fn admits(&self, count: usize) -> bool {
        count >= self.min as usize && self.max.admits(count)
    }

    /// True when `self` is at least as strict as `base`.
    pub fn within(&self, base: &Bounds) -> bool {
        base.min <= self.min && self.max <= base.max
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantifierError {
    #[error("malformed quantifier `{0}` (expected min..max:min..max)")]
    Malformed(String),
    #[error("lower bound {min} exceeds upper bound {max}")]
    MinAboveMax { min: u32, max: u32 },
}

/// `domain_min..domain_max:range_min..range_max`.
///
/// The domain side bounds how many subjects may point at one object; the
/// range side bounds how many objects one subject may point at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quantifier {
    pub domain: Bounds,
    pub range: Bounds,
}

impl Quantifier {
    pub const ANY: Quantifier = Quantifier { domain: Bounds::ANY, range: Bounds::ANY };

    pub fn within(&self, base: &Quantifier) -> bool {
        self.domain.within(&base.domain) && self.range.within(&base.range)
    }
}

impl Default for Quantifier {
    fn default() -> Self {
        Quantifier::ANY
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.domain, self.range)
    }
}

impl FromStr for Quantifier {
    type Err = QuantifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || QuantifierError::Malformed(s.to_string());
        let (domain, range) = s.split_once(':').ok_or_else(malformed)?;
        let side = |text: &str| -> Result<Bounds, QuantifierError> {
            let (min, max) = text.split_once("..").ok_or_else(malformed)?;
            let min: u32 = parse_count(min).ok_or_else(malformed)?;
            let max = if max == "n" {
                UpperBound::Unbounded
            } else {
                UpperBound::Finite(parse_count(max).ok_or_else(malformed)?)
            };
            Bounds::new(min, max)
        };
        Ok(Quantifier { domain: side(domain)?, range: side(range)? })
    }
}

fn parse_count(text: &str) -> Option<u32> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyFlag {
    Participation,
    Essential,
}

string_enum!(PropertyFlag, "property flag", {
    Participation => "participation",
    Essential => "essential",
});

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub id: PropertyRef,
    pub label: String,
    pub inverse_label: String,
    pub domain: ClassRef,
    pub range: Range,
    pub superproperties: Vec<PropertyRef>,
    pub quantifier: Quantifier,
    pub flags: BTreeSet<PropertyFlag>,
}

impl PropertyDef {
    pub fn new(id: PropertyRef, label: impl Into<String>, domain: ClassRef, range: Range) -> Self {
        PropertyDef {
            id,
            label: label.into(),
            inverse_label: String::new(),
            domain,
            range,
            superproperties: Vec::new(),
            quantifier: Quantifier::ANY,
            flags: BTreeSet::new(),
        }
    }

    pub fn has_flag(&self, flag: PropertyFlag) -> bool {
        self.flags.contains(&flag)
    }
}

/// Dotted numeric version, compared component-wise (`7.1.2 < 7.10`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Version(Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed version `{0}` (expected dotted numbers)")]
pub struct VersionError(pub String);

impl Version {
    pub fn components(&self) -> &[u64] {
        &self.0
    }
}

impl FromStr for Version {
    type Err = VersionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split('.')
            .map(|part| parse_count(part).and(part.parse::<u64>().ok()))
            .collect::<Option<Vec<_>>>()
            .map(Version)
            .ok_or_else(|| VersionError(s.to_string()))
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dependency {
    pub prefix: String,
    pub version: Version,
}

/// A superclass edge contributed by a namespace other than the one owning the
/// subclass, e.g. an extension grouping core classes under one of its own
/// classes. The superclass must belong to the declaring namespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alignment {
    pub class: ClassRef,
    pub superclass: ClassRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Namespace {
    pub prefix: String,
    pub base_iri: String,
    pub version: Version,
    pub level: Level,
    pub depends_on: Vec<Dependency>,
    pub classes: Vec<ClassDef>,
    pub properties: Vec<PropertyDef>,
    pub alignments: Vec<Alignment>,
}

impl Namespace {
    pub fn new(prefix: impl Into<String>, base_iri: impl Into<String>, version: Version, level: Level) -> Self {
        Namespace {
            prefix: prefix.into(),
            base_iri: base_iri.into(),
            version,
            level,
            depends_on: Vec::new(),
            classes: Vec::new(),
            properties: Vec::new(),
            alignments: Vec::new(),
        }
    }

    pub fn class(&self, id: &ClassRef) -> Option<&ClassDef> {
        self.classes.iter().find(|c| &c.id == id)
    }

    pub fn property(&self, id: &PropertyRef) -> Option<&PropertyDef> {
        self.properties.iter().find(|p| &p.id == id)
    }

    /// Sorts definitions into canonical order. Content is unchanged.
    pub fn canonicalize(&mut self) {
        self.depends_on.sort();
        self.depends_on.dedup();
        self.classes.sort_by(|a, b| a.id.cmp(&b.id));
        self.properties.sort_by(|a, b| a.id.cmp(&b.id));
        self.alignments.sort();
    }

    /// Every reference mentioned by this namespace's definitions.
    pub fn referenced(&self) -> impl Iterator<Item = &Ref> {
        let from_classes = self.classes.iter().flat_map(|c| c.superclasses.iter());
        let from_props = self.properties.iter().flat_map(|p| {
            std::iter::once(&p.domain)
                .chain(p.range.class())
                .chain(p.superproperties.iter())
        });
        let from_alignments = self.alignments.iter().flat_map(|a| [&a.class, &a.superclass]);
        from_classes.chain(from_props).chain(from_alignments)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcosystemError {
    #[error("duplicate namespace prefix `{0}`")]
    DuplicatePrefix(String),
    #[error("namespace fragments for `{prefix}` disagree on {field}")]
    FragmentConflict { prefix: String, field: &'static str },
}

/// A collection of namespaces with unique prefixes. Unresolved until passed to
/// [`resolve_ecosystem`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ecosystem {
    namespaces: Vec<Namespace>,
}

impl Ecosystem {
    pub fn new(namespaces: Vec<Namespace>) -> Result<Self, EcosystemError> {
        let mut seen = BTreeSet::new();
        for ns in &namespaces {
            if !seen.insert(ns.prefix.as_str()) {
                return Err(EcosystemError::DuplicatePrefix(ns.prefix.clone()));
            }
        }
        Ok(Ecosystem { namespaces })
    }

    /// Builds an ecosystem from namespace fragments, merging fragments that
    /// share a prefix. Fragments of one prefix must agree on base IRI, version
    /// and level; their definitions are concatenated (clashing ids surface as
    /// `DuplicateId` during resolution).
    pub fn from_fragments(fragments: Vec<Namespace>) -> Result<Self, EcosystemError> {
        let mut merged: Vec<Namespace> = Vec::new();
        for fragment in fragments {
            let Some(target) = merged.iter_mut().find(|ns| ns.prefix == fragment.prefix) else {
                merged.push(fragment);
                continue;
            };
            let conflict = |field| EcosystemError::FragmentConflict { prefix: fragment.prefix.clone(), field };
            if target.base_iri != fragment.base_iri {
                return Err(conflict("base_iri"));
            }
            if target.version != fragment.version {
                return Err(conflict("version"));
            }
            if target.level != fragment.level {
                return Err(conflict("level"));
            }
            for dep in fragment.depends_on {
                if !target.depends_on.contains(&dep) {
                    target.depends_on.push(dep);
                }
            }
            target.classes.extend(fragment.classes);
            target.properties.extend(fragment.properties);
            target.alignments.extend(fragment.alignments);
        }
        Ok(Ecosystem { namespaces: merged })
    }

    pub fn namespaces(&self) -> &[Namespace] {
        &self.namespaces
    }

    pub fn namespace(&self, prefix: &str) -> Option<&Namespace> {
        self.namespaces.iter().find(|ns| ns.prefix == prefix)
    }

    pub fn into_namespaces(self) -> Vec<Namespace> {
        self.namespaces
    }

    pub fn is_empty(&self) -> bool {
        self.namespaces.is_empty()
    }

    pub fn resolve(&self) -> Result<ResolvedIndex, ResolveError> {
        resolve_ecosystem(self)
    }
}
