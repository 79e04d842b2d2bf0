//! Built-in ontology corpora.
//!
//! * `crm-core` (core): the subset of CIDOC CRM classes and properties the
//!   SDHSS analysis works with. Only named classes are encoded; this is not
//!   the CRM standard. Actor is numbered `E29` as in the SDHSS discussion
//!   (the published CRM numbers it `E39`).
//! * `sdhss` (core-extension): entity quality, intention, abstract region and
//!   geographical place, with the effects/ends/setting properties.
//! * `sdh-so` (subdomain): social, legal and economic life.
//! * `pcp` (project): a career-patterns project model with its anchoring
//!   problems left in place.
//! * `legacy-crm`: a `crm` fragment adding Legal Object (anti-rigid) above
//!   Physical Man-Made Thing. Merge it with `crm-core`.
//!
//! `all` is `crm-core` + `sdhss` + `sdh-so`.
//!
//! Every superclass edge and alignment has an [`EdgeNote`] saying whether it
//! is documented by the SDHSS material or is a fixture design decision.

use thiserror::Error;

use crate::model::{
    Alignment, ClassDef, Dependence, Dependency, Ecosystem, EcosystemError, Identity, Level, Namespace,
    OntoCleanTags, PropertyDef, PropertyFlag, Range, Ref, Rigidity, TopCategory, Version,
};

pub const FIXTURE_NAMES: [&str; 5] = ["crm-core", "sdhss", "sdh-so", "pcp", "legacy-crm"];

pub const CRM_IRI: &str = "http://www.cidoc-crm.org/cidoc-crm";
pub const CRM_VERSION: &str = "7.1.2";
pub const SDH_IRI: &str = "https://ontome.net/ns/sdhss";
pub const SDH_VERSION: &str = "1.0";
pub const SDH_SO_IRI: &str = "https://ontome.net/ns/sdh-so";
pub const SDH_SO_VERSION: &str = "1.0";
pub const PCP_IRI: &str = "https://pcp-on-web.de/ontology";
pub const PCP_VERSION: &str = "0.2";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}` (known: all, {list})", list = FIXTURE_NAMES.join(", "))]
    UnknownFixture(String),
    #[error(transparent)]
    Ecosystem(#[from] EcosystemError),
}

/// Namespaces of one built-in fixture, or of `all`.
pub fn load_builtin(name: &str) -> Result<Vec<Namespace>, FixtureError> {
    Ok(match name {
        "crm-core" => vec![crm_core()],
        "sdhss" => vec![sdhss()],
        "sdh-so" => vec![sdh_so()],
        "pcp" => vec![pcp()],
        "legacy-crm" => vec![legacy_crm()],
        "all" => vec![crm_core(), sdhss(), sdh_so()],
        other => return Err(FixtureError::UnknownFixture(other.to_string())),
    })
}

/// Merges the named fixtures into one (unresolved) ecosystem.
pub fn ecosystem(names: &[&str]) -> Result<Ecosystem, FixtureError> {
    let mut fragments = Vec::new();
    for name in names {
        fragments.extend(load_builtin(name)?);
    }
    Ok(Ecosystem::from_fragments(fragments)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Stated in the SDHSS material.
    Documented,
    /// Chosen for the fixture where the material is silent.
    DesignDecision,
}

#[derive(Debug, Clone, Copy)]
pub struct EdgeNote {
    pub class: &'static str,
    pub superclass: &'static str,
    pub provenance: Provenance,
    pub note: &'static str,
}

use Provenance::{DesignDecision, Documented};

const fn note(class: &'static str, superclass: &'static str, provenance: Provenance, note: &'static str) -> EdgeNote {
    EdgeNote { class, superclass, provenance, note }
}

pub const EDGE_NOTES: &[EdgeNote] = &[
    note("crm:E2", "crm:E1", Documented, "temporal entity is one of the two essential branches under the root"),
    note("crm:E77", "crm:E1", Documented, "persistent item is one of the two essential branches under the root"),
    note("crm:E3", "crm:E2", Documented, "condition state is listed among the subclasses of temporal entity"),
    note("crm:E4", "crm:E2", Documented, "period is listed among the subclasses of temporal entity"),
    note("crm:E5", "crm:E4", DesignDecision, "event placed directly under period; intermediate CRM classes omitted"),
    note("crm:E16", "crm:E5", DesignDecision, "measurement placed under event; attribute assignment and activity omitted"),
    note("crm:E65", "crm:E5", DesignDecision, "creation placed under event; activity omitted"),
    note("crm:E66", "crm:E5", DesignDecision, "formation placed under event; activity omitted"),
    note("crm:E68", "crm:E5", DesignDecision, "dissolution placed under event; end of existence omitted"),
    note("crm:E85", "crm:E5", DesignDecision, "joining placed under event; activity omitted"),
    note("crm:E86", "crm:E5", DesignDecision, "leaving placed under event; activity omitted"),
    note("crm:E70", "crm:E77", DesignDecision, "thing placed directly under persistent item"),
    note("crm:E29", "crm:E77", DesignDecision, "actor placed directly under persistent item"),
    note("crm:E71", "crm:E70", Documented, "man-made thing sits beside legal object under thing"),
    note("crm:E18", "crm:E70", DesignDecision, "physical thing placed under thing because legal object is left out"),
    note("crm:E20", "crm:E18", DesignDecision, "biological object placed under physical thing; physical object omitted"),
    note("crm:E24", "crm:E71", Documented, "physical man-made thing is a subclass of man-made thing"),
    note("crm:E26", "crm:E18", DesignDecision, "physical feature placed under physical thing"),
    note("crm:E27", "crm:E26", Documented, "site is a subclass of physical feature"),
    note("crm:E89", "crm:E71", DesignDecision, "propositional object placed under man-made thing; conceptual object omitted"),
    note("crm:E30", "crm:E89", DesignDecision, "right expressed as a propositional object"),
    note("crm:E73", "crm:E89", DesignDecision, "information object placed under propositional object"),
    note("crm:E52", "crm:E1", Documented, "time-span is a root-level class"),
    note("crm:E53", "crm:E1", Documented, "place is a root-level class"),
    note("crm:E54", "crm:E1", Documented, "dimension is a root-level class"),
    note("crm:E92", "crm:E1", Documented, "spacetime volume is a root-level class"),
    note("sdh:C1", "crm:E2", Documented, "entity quality specializes temporal entity"),
    note("sdh:C4", "sdh:C1", Documented, "intention specializes entity quality"),
    note("sdh:C5", "crm:E1", DesignDecision, "abstract region placed under the root"),
    note("sdh:C7", "sdh:C4", DesignDecision, "intentional state is the static side of intention"),
    note("sdh:C10", "sdh:C4", DesignDecision, "intentional event is the dynamic side of intention"),
    note("sdh:C46", "sdh:C10", DesignDecision, "intentional expression treated as a kind of intentional event"),
    note("sdh:C30", "sdh:C7", Documented, "connotation specializes intentional state (printed once with a crm prefix)"),
    note("sdh:C9", "crm:E77", DesignDecision, "intentional entity placed under persistent item"),
    note("sdh:C13", "crm:E26", Documented, "geographical place specializes physical feature"),
    note("crm:E52", "sdh:C5", Documented, "time-span grouped under abstract region"),
    note("crm:E53", "sdh:C5", Documented, "place grouped under abstract region"),
    note("crm:E54", "sdh:C5", Documented, "dimension grouped under abstract region"),
    note("crm:E92", "sdh:C5", Documented, "spacetime volume grouped under abstract region"),
    note("sdh-so:C27", "sdh:C30", DesignDecision, "legal connotation placed under connotation"),
    note("sdh-so:C13", "sdh-so:C27", Documented, "social role embodiment specializes legal connotation"),
    note("sdh-so:C17", "crm:E89", DesignDecision, "custom or law treated as a propositional object"),
    note("crm:E72", "crm:E70", DesignDecision, "legal object placed under thing, beside man-made thing"),
    note("crm:E24", "crm:E72", Documented, "physical man-made thing is also a subclass of legal object"),
    note("pcp:Lecturer", "pcp:Person", Documented, "lecturer specializes person in the project model"),
    note("pcp:Student", "pcp:Person", DesignDecision, "student modelled like lecturer"),
    note("pcp:AcademicOffice", "pcp:StageOfLife", Documented, "academic office descends from stage of life"),
];

pub fn edge_note(class: &Ref, superclass: &Ref) -> Option<&'static EdgeNote> {
    let (c, s) = (class.to_string(), superclass.to_string());
    EDGE_NOTES.iter().find(|n| n.class == c && n.superclass == s)
}

fn version(text: &str) -> Version {
    text.parse().expect("fixture version")
}

fn dep(prefix: &str, v: &str) -> Dependency {
    Dependency { prefix: prefix.to_string(), version: version(v) }
}

struct Builder {
    ns: Namespace,
}

impl Builder {
    fn new(prefix: &str, iri: &str, v: &str, level: Level) -> Self {
        Builder { ns: Namespace::new(prefix, iri, version(v), level) }
    }

    fn depends(mut self, prefix: &str, v: &str) -> Self {
        self.ns.depends_on.push(dep(prefix, v));
        self
    }

    fn class(self, id: &str, label: &str, sups: &[&str], scope: &str) -> Self {
        self.class_with(id, label, sups, scope, OntoCleanTags::default(), TopCategory::Unassigned)
    }

    fn class_with(
        mut self,
        id: &str,
        label: &str,
        sups: &[&str],
        scope: &str,
        meta: OntoCleanTags,
        top: TopCategory,
    ) -> Self {
        let mut c = ClassDef::new(Ref::of(id), label);
        c.scope_note = scope.to_string();
        c.superclasses = sups.iter().map(|s| Ref::of(s)).collect();
        c.meta = meta;
        c.declared_top = top;
        self.ns.classes.push(c);
        self
    }

    fn root(self, id: &str, label: &str, sups: &[&str], scope: &str, top: TopCategory) -> Self {
        self.class_with(id, label, sups, scope, OntoCleanTags::default(), top)
    }

    #[allow(clippy::too_many_arguments)]
    fn property(
        mut self,
        id: &str,
        label: &str,
        inverse: &str,
        domain: &str,
        range: Option<&str>,
        sups: &[&str],
        flags: &[PropertyFlag],
    ) -> Self {
        let range = range.map_or(Range::Literal, |r| Range::Class(Ref::of(r)));
        let mut p = PropertyDef::new(Ref::of(id), label, Ref::of(domain), range);
        p.inverse_label = inverse.to_string();
        p.superproperties = sups.iter().map(|s| Ref::of(s)).collect();
        p.flags = flags.iter().copied().collect();
        self.ns.properties.push(p);
        self
    }

    fn align(mut self, class: &str, superclass: &str) -> Self {
        self.ns.alignments.push(Alignment { class: Ref::of(class), superclass: Ref::of(superclass) });
        self
    }

    fn build(mut self) -> Namespace {
        self.ns.canonicalize();
        self.ns
    }
}

fn tags(rigidity: Rigidity, identity: Identity, dependence: Dependence) -> OntoCleanTags {
    OntoCleanTags { rigidity, identity, dependence, ..Default::default() }
}

const PARTICIPATION: &[PropertyFlag] = &[PropertyFlag::Participation];
const ESSENTIAL: &[PropertyFlag] = &[PropertyFlag::Essential];

pub fn crm_core() -> Namespace {
    let rigid = OntoCleanTags::rigid();
    Builder::new("crm", CRM_IRI, CRM_VERSION, Level::Core)
        .class("crm:E1", "Entity", &[], "Everything in the domain of discourse; literal values are excluded.")
        .class("crm:E2", "Temporal Entity", &["crm:E1"], "Phenomena limited in time that can be observed.")
        .class("crm:E3", "Condition State", &["crm:E2"], "A phase during which a thing is in a given condition.")
        .root("crm:E4", "Period", &["crm:E2"], "Root of physical and cultural events located in space and time.", TopCategory::Perdurant)
        .class("crm:E5", "Event", &["crm:E4"], "Changes of state in which things and actors participate.")
        .class("crm:E16", "Measurement", &["crm:E5"], "Observation activities yielding a dimension.")
        .class_with("crm:E18", "Physical Thing", &["crm:E70"], "Material things with a physical extent.", tags(Rigidity::Rigid, Identity::CarriesIdentity, Dependence::Untagged), TopCategory::Unassigned)
        .class("crm:E20", "Biological Object", &["crm:E18"], "Living or formerly living material things.")
        .class_with("crm:E24", "Physical Man-Made Thing", &["crm:E71"], "Material things produced by human activity.", rigid, TopCategory::Unassigned)
        .class("crm:E26", "Physical Feature", &["crm:E18"], "Features on or of a physical thing.")
        .class("crm:E27", "Site", &["crm:E26"], "Constellations of matter on a celestial surface that can be pictured.")
        .class("crm:E29", "Actor", &["crm:E77"], "People, individually or in groups, able to act intentionally.")
        .class("crm:E30", "Right", &["crm:E89"], "Rights held over things, expressed as propositions.")
        .class("crm:E52", "Time-Span", &["crm:E1"], "Positions in an abstract time frame.")
        .class("crm:E53", "Place", &["crm:E1"], "Pure extents in a spatial reference space.")
        .class("crm:E54", "Dimension", &["crm:E1"], "Quantities measured against a unit of measure.")
        .class("crm:E59", "Primitive Value", &[], "Literal values; outside the entity hierarchy.")
        .class("crm:E65", "Creation", &["crm:E5"], "Events bringing conceptual items into existence.")
        .class("crm:E66", "Formation", &["crm:E5"], "Events founding a group.")
        .class("crm:E68", "Dissolution", &["crm:E5"], "Events ending a group.")
        .class_with("crm:E70", "Thing", &["crm:E77"], "Identifiable things, material or immaterial.", rigid, TopCategory::Unassigned)
        .class_with("crm:E71", "Man-Made Thing", &["crm:E70"], "Things produced by human activity.", rigid, TopCategory::Unassigned)
        .class("crm:E73", "Information Object", &["crm:E89"], "Identifiable immaterial items such as texts.")
        .class_with("crm:E77", "Persistent Item", &["crm:E1"], "Items with a persistent identity over time.", rigid, TopCategory::Endurant)
        .class("crm:E85", "Joining", &["crm:E5"], "Events in which an actor joins a group.")
        .class("crm:E86", "Leaving", &["crm:E5"], "Events in which an actor leaves a group.")
        .class("crm:E89", "Propositional Object", &["crm:E71"], "Immaterial items carrying propositions.")
        .class("crm:E92", "Spacetime Volume", &["crm:E1"], "Four-dimensional extents in space and time.")
        .property("crm:P4", "has time-span", "is time-span of", "crm:E2", Some("crm:E52"), &[], &[])
        .property("crm:P8", "took place on or within", "witnessed", "crm:E4", Some("crm:E18"), &[], &[])
        .property("crm:P11", "had participant", "participated in", "crm:E5", Some("crm:E29"), &["crm:P12"], PARTICIPATION)
        .property("crm:P12", "occurred in the presence of", "was present at", "crm:E5", Some("crm:E77"), &[], PARTICIPATION)
        .property("crm:P40", "observed dimension", "was observed in", "crm:E16", Some("crm:E54"), &[], &[])
        .property("crm:P90", "has value", "", "crm:E54", None, &[], &[])
        .property("crm:P182", "ends before or with the start of", "starts after or with the end of", "crm:E2", Some("crm:E2"), &[], &[])
        .build()
}

pub fn sdhss() -> Namespace {
    Builder::new("sdh", SDH_IRI, SDH_VERSION, Level::CoreExtension)
        .depends("crm", CRM_VERSION)
        .class_with(
            "sdh:C1",
            "Entity Quality",
            &["crm:E2"],
            "Time-indexed qualitative or quantitative properties inseparable from their bearer.",
            tags(Rigidity::Untagged, Identity::Untagged, Dependence::Dependent),
            TopCategory::Quality,
        )
        .class("sdh:C4", "Intention", &["sdh:C1"], "Mental representations held by persons or groups about objects.")
        .root("sdh:C5", "Abstract Region", &["crm:E1"], "Positions in conventional reference spaces.", TopCategory::AbstractRegion)
        .class("sdh:C7", "Intentional State", &["sdh:C4"], "Opinions, beliefs and doubts stable over a period.")
        .class("sdh:C9", "Intentional Entity", &["crm:E77"], "Entities able to hold representations, alone or collectively.")
        .class("sdh:C10", "Intentional Event", &["sdh:C4"], "Changes of mind and other dynamic mental phenomena.")
        .class("sdh:C13", "Geographical Place", &["crm:E26"], "Physical locations on the Earth, such as towns or regions.")
        .class("sdh:C30", "Connotation", &["sdh:C7"], "Time-indexed classification of an entity under types held by a person or a group.")
        .class("sdh:C46", "Intentional Expression", &["sdh:C10"], "Expressions of intentionality through speech acts, writings or actions.")
        .property("sdh:P8", "effects", "is effected by", "crm:E5", Some("sdh:C1"), &[], &[])
        .property("sdh:P9", "ends", "is ended by", "crm:E5", Some("sdh:C1"), &[], &[])
        .property("sdh:P30", "classifies", "is classified by", "sdh:C30", Some("crm:E1"), &[], &[])
        .property("sdh:P43", "has setting", "is setting for", "sdh:C10", Some("crm:E4"), &[], &[])
        .align("crm:E52", "sdh:C5")
        .align("crm:E53", "sdh:C5")
        .align("crm:E54", "sdh:C5")
        .align("crm:E92", "sdh:C5")
        .build()
}

pub fn sdh_so() -> Namespace {
    Builder::new("sdh-so", SDH_SO_IRI, SDH_SO_VERSION, Level::Subdomain)
        .depends("crm", CRM_VERSION)
        .depends("sdh", SDH_VERSION)
        .class("sdh-so:C13", "Social Role Embodiment", &["sdh-so:C27"], "Occupying a role within a group for some period.")
        .class("sdh-so:C17", "Custom or Law", &["crm:E89"], "Norms that bind the members of a group.")
        .class("sdh-so:C27", "Legal Connotation", &["sdh:C30"], "A persistent item that a group regards as legally qualified.")
        .build()
}

pub fn pcp() -> Namespace {
    let person = tags(Rigidity::Rigid, Identity::CarriesIdentity, Dependence::Untagged);
    let role = OntoCleanTags::anti_rigid();
    Builder::new("pcp", PCP_IRI, PCP_VERSION, Level::Project)
        .class("pcp:AcademicDocuments", "Academic Documents", &[], "Documents such as planned course outlines.")
        .class("pcp:AcademicOffice", "Academic Office", &["pcp:StageOfLife"], "Offices and teaching held at a university.")
        .class_with("pcp:Lecturer", "Lecturer", &["pcp:Person"], "University lecturers whose careers are studied.", role, TopCategory::Unassigned)
        .class_with("pcp:Person", "Person", &[], "Human beings.", person, TopCategory::Unassigned)
        .class("pcp:StageOfLife", "Stage of Life", &[], "Segments of a life situated in time and space.")
        .class_with("pcp:Student", "Student", &["pcp:Person"], "Persons enrolled at a university.", role, TopCategory::Unassigned)
        .property("pcp:hasBirthDate", "has birth date", "", "pcp:Lecturer", None, &[], ESSENTIAL)
        .property("pcp:hasDeathDate", "has death date", "", "pcp:Lecturer", None, &[], ESSENTIAL)
        .property("pcp:hasStageOfLife", "has stage of life", "is stage of life of", "pcp:Lecturer", Some("pcp:StageOfLife"), &[], &[])
        .build()
}

pub fn legacy_crm() -> Namespace {
    Builder::new("crm", CRM_IRI, CRM_VERSION, Level::Core)
        .class_with("crm:E72", "Legal Object", &["crm:E70"], "Things over which rights can be held.", OntoCleanTags::anti_rigid(), TopCategory::Unassigned)
        .property("crm:P104", "is subject to", "applies to", "crm:E72", Some("crm:E30"), &[], &[])
        .property("crm:P105", "right held by", "has right on", "crm:E72", Some("crm:E29"), &[], &[])
        .align("crm:E24", "crm:E72")
        .build()
}
