//! Foundational-analysis lints over a resolved ecosystem.
//!
//! | check id               | codes            |
//! |------------------------|------------------|
//! | `ontoclean`            | OC1 OC2 OC3 OC4  |
//! | `top-category`         | TC1 TC2          |
//! | `layer-discipline`     | LD1 LD2 LD3      |
//! | `property-refinement`  | PR1 PR2          |
//! | `participation-anchor` | PA1 EA1          |
//!
//! Every check is a pure function of its inputs and returns diagnostics in
//! canonical order.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use thiserror::Error;

pub use crate::diagnostics::{error_count, Diagnostic, Severity, Subject};
use crate::diagnostics::{
    self, code_info, CHECK_LAYER, CHECK_ONTOCLEAN, CHECK_PARTICIPATION, CHECK_PROPERTY_REFINEMENT, CHECK_TOP_CATEGORY,
};
use crate::hierarchy::{reachable_roots, subsumes, top_category_of};
use crate::model::{
    ClassRef, Dependence, Ecosystem, Identity, Level, PropertyFlag, Range, Ref, ResolvedIndex, Rigidity, TopCategory,
    Unity,
};

/// Lint checks in execution order.
pub const CHECK_IDS: [&str; 5] =
    [CHECK_ONTOCLEAN, CHECK_TOP_CATEGORY, CHECK_LAYER, CHECK_PROPERTY_REFINEMENT, CHECK_PARTICIPATION];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown check id `{0}`")]
    UnknownCheckId(String),
    #[error("severity override for unknown code `{0}`")]
    UnknownCode(String),
    #[error("partition root `{0}` is not a known class")]
    UnknownRoot(Ref),
    #[error("invalid check configuration: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckConfig {
    pub enabled: BTreeSet<String>,
    pub severity_overrides: BTreeMap<String, Severity>,
    /// Replaces the partition-root registry derived from the class
    /// definitions when set.
    pub partition_roots: Option<BTreeMap<ClassRef, TopCategory>>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            enabled: CHECK_IDS.iter().map(|s| s.to_string()).collect(),
            severity_overrides: BTreeMap::new(),
            partition_roots: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDocument {
    #[serde(default)]
    enabled: Option<Vec<String>>,
    #[serde(default)]
    severity: BTreeMap<String, String>,
    #[serde(default)]
    partition_roots: Option<BTreeMap<String, String>>,
}

impl CheckConfig {
    pub fn none() -> Self {
        CheckConfig { enabled: BTreeSet::new(), ..Default::default() }
    }

    /// Reads a JSON config:
    /// `{"enabled": [...], "severity": {"EA1": "error"}, "partition_roots": {"crm:E77": "endurant"}}`.
    /// Every key is optional.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let doc: ConfigDocument = serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let mut config = CheckConfig::default();
        if let Some(enabled) = doc.enabled {
            config.enabled = enabled.into_iter().collect();
        }
        for (code, severity) in doc.severity {
            let severity = severity.parse().map_err(|e: crate::model::EnumParseError| ConfigError::Syntax(e.to_string()))?;
            config.severity_overrides.insert(code, severity);
        }
        if let Some(roots) = doc.partition_roots {
            let mut parsed = BTreeMap::new();
            for (class, top) in roots {
                let class: Ref = class.parse().map_err(|e: crate::model::RefError| ConfigError::Syntax(e.to_string()))?;
                let top = top.parse().map_err(|e: crate::model::EnumParseError| ConfigError::Syntax(e.to_string()))?;
                parsed.insert(class, top);
            }
            config.partition_roots = Some(parsed);
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(unknown) = self.enabled.iter().find(|id| !CHECK_IDS.contains(&id.as_str())) {
            return Err(ConfigError::UnknownCheckId(unknown.clone()));
        }
        if let Some(code) = self.severity_overrides.keys().find(|code| code_info(code).is_none()) {
            return Err(ConfigError::UnknownCode(code.clone()));
        }
        Ok(())
    }
}

/// OntoClean constraints on every direct superclass edge `p ⊑ q` whose ends
/// are both tagged for the meta-property concerned.
pub fn check_ontoclean(index: &ResolvedIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for sub in index.classes() {
        for sup_ref in index.parents(&sub.id).into_iter().flatten() {
            let sup = index.class(sup_ref).expect("resolved");
            let (p, q) = (&sub.meta, &sup.meta);
            let edge = [&sub.id, &sup.id];
            if q.rigidity == Rigidity::AntiRigid && p.rigidity == Rigidity::Rigid {
                out.push(Diagnostic::terms(
                    "OC1",
                    edge,
                    format!("rigid class {} is subsumed by anti-rigid class {}", sub.id, sup.id),
                ));
            }
            if q.identity == Identity::CarriesIdentity && p.identity == Identity::NoIdentity {
                out.push(Diagnostic::terms(
                    "OC2",
                    edge,
                    format!("{} carries an identity criterion that {} is tagged as lacking", sup.id, sub.id),
                ));
            }
            let unity_clash = matches!(
                (q.unity, p.unity),
                (Unity::Unity, Unity::NoUnity | Unity::AntiUnity) | (Unity::AntiUnity, Unity::Unity)
            );
            if unity_clash {
                out.push(Diagnostic::terms(
                    "OC3",
                    edge,
                    format!("unity of {} ({}) is incompatible with {} ({})", sub.id, p.unity, sup.id, q.unity),
                ));
            }
            if q.dependence == Dependence::Dependent && p.dependence == Dependence::Independent {
                out.push(Diagnostic::terms(
                    "OC4",
                    edge,
                    format!("independent class {} is subsumed by dependent class {}", sub.id, sup.id),
                ));
            }
        }
    }
    diagnostics::sort(&mut out);
    out
}

pub fn check_top_category_partition(index: &ResolvedIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for class in index.classes() {
        let roots = reachable_roots(index, &class.id).expect("resolved");
        match roots.len() {
            0 => out.push(Diagnostic::terms(
                "TC2",
                [&class.id],
                format!("{} reaches no partition root", class.id),
            )),
            1 => {}
            _ => {
                let cats: Vec<String> = roots
                    .iter()
                    .map(|r| format!("{} ({})", r, index.partition_roots()[r]))
                    .collect();
                out.push(Diagnostic::terms(
                    "TC1",
                    std::iter::once(&class.id).chain(roots.iter()),
                    format!("{} falls under several partition roots: {}", class.id, cats.join(", ")),
                ));
            }
        }
    }
    diagnostics::sort(&mut out);
    out
}

pub fn check_layer_discipline(ecosystem: &Ecosystem, index: &ResolvedIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let level = |r: &Ref| index.level_of(r).expect("resolved");

    for ns in ecosystem.namespaces() {
        for class in &ns.classes {
            if ns.level > Level::Core {
                let anchored = index
                    .ancestor_set(&class.id)
                    .expect("resolved")
                    .iter()
                    .any(|a| level(a) < ns.level);
                if !anchored {
                    out.push(Diagnostic::terms(
                        "LD1",
                        [&class.id],
                        format!(
                            "{} in {} namespace `{}` has no superclass path into a lower layer",
                            class.id, ns.level, ns.prefix
                        ),
                    ));
                }
            }
            for sup in &class.superclasses {
                if level(sup) > ns.level {
                    out.push(Diagnostic::terms(
                        "LD2",
                        [&class.id, sup],
                        format!(
                            "{} ({}) is declared a subclass of {} from higher layer {}",
                            class.id,
                            ns.level,
                            sup,
                            level(sup)
                        ),
                    ));
                }
            }
        }

        let used: BTreeSet<&str> = ns.referenced().map(Ref::prefix).collect();
        for dep in &ns.depends_on {
            if !used.contains(dep.prefix.as_str()) {
                out.push(Diagnostic::new(
                    "LD3",
                    vec![Subject::Namespace(ns.prefix.clone()), Subject::Namespace(dep.prefix.clone())],
                    format!("`{}` declares a dependency on `{}` {} but never references it", ns.prefix, dep.prefix, dep.version),
                ));
            }
        }
    }
    diagnostics::sort(&mut out);
    out
}

pub fn check_property_refinement(index: &ResolvedIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for prop in index.properties() {
        for sup_ref in &prop.superproperties {
            let sup = index.property(sup_ref).expect("resolved");
            if !subsumes(index, &prop.domain, &sup.domain) {
                out.push(Diagnostic::terms(
                    "PR1",
                    [&prop.id, &sup.id],
                    format!("domain {} of {} is not subsumed by domain {} of {}", prop.domain, prop.id, sup.domain, sup.id),
                ));
            }
            let range_ok = match (&prop.range, &sup.range) {
                (Range::Literal, Range::Literal) => true,
                (Range::Class(a), Range::Class(b)) => subsumes(index, a, b),
                _ => false,
            };
            if !range_ok {
                out.push(Diagnostic::terms(
                    "PR2",
                    [&prop.id, &sup.id],
                    format!("range {} of {} is not subsumed by range {} of {}", prop.range, prop.id, sup.range, sup.id),
                ));
            }
        }
    }
    diagnostics::sort(&mut out);
    out
}

pub fn check_participation_and_anchor(index: &ResolvedIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for prop in index.properties() {
        if prop.has_flag(PropertyFlag::Participation) {
            let domain_top = top_category_of(index, &prop.domain).expect("resolved");
            let range_top = prop.range.class().map(|r| top_category_of(index, r).expect("resolved"));
            let links = matches!(
                (domain_top, range_top),
                (TopCategory::Endurant, Some(TopCategory::Perdurant)) | (TopCategory::Perdurant, Some(TopCategory::Endurant))
            );
            if !links {
                let range_desc = range_top.map_or("primitive value".to_string(), |t| t.to_string());
                out.push(Diagnostic::terms(
                    "PA1",
                    [&prop.id],
                    format!(
                        "participation property {} links {} ({}) to {} ({})",
                        prop.id, prop.domain, domain_top, prop.range, range_desc
                    ),
                ));
            }
        }
        if prop.has_flag(PropertyFlag::Essential) {
            let domain = index.class(&prop.domain).expect("resolved");
            if domain.meta.rigidity == Rigidity::AntiRigid {
                out.push(Diagnostic::terms(
                    "EA1",
                    [&prop.id, &prop.domain],
                    format!("essential property {} is anchored on anti-rigid class {}", prop.id, prop.domain),
                ));
            }
        }
    }
    diagnostics::sort(&mut out);
    out
}

/// Runs the enabled checks, applies severity overrides and returns one
/// canonically ordered report.
pub fn run_all_checks(
    ecosystem: &Ecosystem,
    index: &ResolvedIndex,
    config: &CheckConfig,
) -> Result<Vec<Diagnostic>, ConfigError> {
    config.validate()?;
    let rerooted;
    let index = match &config.partition_roots {
        Some(roots) => {
            rerooted = index.with_partition_roots(roots.clone()).map_err(|e| match e {
                crate::model::ResolveError::DanglingReference { reference, .. } => ConfigError::UnknownRoot(reference),
                other => ConfigError::Syntax(other.to_string()),
            })?;
            &rerooted
        }
        None => index,
    };

    let mut out = Vec::new();
    for id in CHECK_IDS {
        if !config.enabled.contains(id) {
            continue;
        }
        out.extend(match id {
            CHECK_ONTOCLEAN => check_ontoclean(index),
            CHECK_TOP_CATEGORY => check_top_category_partition(index),
            CHECK_LAYER => check_layer_discipline(ecosystem, index),
            CHECK_PROPERTY_REFINEMENT => check_property_refinement(index),
            CHECK_PARTICIPATION => check_participation_and_anchor(index),
            _ => unreachable!("validated"),
        });
    }
    for d in &mut out {
        if let Some(severity) = config.severity_overrides.get(d.code) {
            d.severity = *severity;
        }
    }
    diagnostics::sort(&mut out);
    Ok(out)
}
