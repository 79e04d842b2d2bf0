use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Alignment, ClassDef, ClassRef, Dependency, Level, Namespace, PropertyDef, PropertyRef, Ref, Version};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("cannot compare namespace `{old}` with namespace `{new}`")]
    PrefixMismatch { old: String, new: String },
    #[error("changeset does not apply: {0}")]
    PatchConflict(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TextField {
    Label,
    ScopeNote,
    InverseLabel,
}

impl TextField {
    pub fn as_str(self) -> &'static str {
        match self {
            TextField::Label => "label",
            TextField::ScopeNote => "scope_note",
            TextField::InverseLabel => "inverse_label",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TextChange {
    pub target: Ref,
    pub field: TextField,
    pub old: String,
    pub new: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionChange<T> {
    pub before: T,
    pub after: T,
}

impl<T: Clone> DefinitionChange<T> {
    fn swapped(&self) -> Self {
        DefinitionChange { before: self.after.clone(), after: self.before.clone() }
    }
}

/// Every difference between two versions of one namespace.
///
/// Added and removed definitions carry their full content so the set can be
/// applied as a patch in either direction. Edge and text changes are derived
/// views over the same differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeSet {
    pub prefix: String,
    pub old_version: Version,
    pub new_version: Version,
    pub base_iri: Option<(String, String)>,
    pub level: Option<(Level, Level)>,
    pub dependencies_added: Vec<Dependency>,
    pub dependencies_removed: Vec<Dependency>,
    pub added_classes: Vec<ClassDef>,
    pub removed_classes: Vec<ClassDef>,
    pub modified_classes: Vec<DefinitionChange<ClassDef>>,
    pub added_properties: Vec<PropertyDef>,
    pub removed_properties: Vec<PropertyDef>,
    pub modified_properties: Vec<DefinitionChange<PropertyDef>>,
    pub superclass_edges_added: Vec<(ClassRef, ClassRef)>,
    pub superclass_edges_removed: Vec<(ClassRef, ClassRef)>,
    pub superproperty_edges_added: Vec<(PropertyRef, PropertyRef)>,
    pub superproperty_edges_removed: Vec<(PropertyRef, PropertyRef)>,
    pub alignments_added: Vec<Alignment>,
    pub alignments_removed: Vec<Alignment>,
    pub text_changes: Vec<TextChange>,
}

impl ChangeSet {
    /// True when the two compared namespaces are identical, version included.
    pub fn is_empty(&self) -> bool {
        self.old_version == self.new_version
            && self.base_iri.is_none()
            && self.level.is_none()
            && self.dependencies_added.is_empty()
            && self.dependencies_removed.is_empty()
            && self.added_classes.is_empty()
            && self.removed_classes.is_empty()
            && self.modified_classes.is_empty()
            && self.added_properties.is_empty()
            && self.removed_properties.is_empty()
            && self.modified_properties.is_empty()
            && self.superclass_edges_added.is_empty()
            && self.superclass_edges_removed.is_empty()
            && self.superproperty_edges_added.is_empty()
            && self.superproperty_edges_removed.is_empty()
            && self.alignments_added.is_empty()
            && self.alignments_removed.is_empty()
            && self.text_changes.is_empty()
    }

    /// The changeset that undoes this one.
    pub fn inverse(&self) -> ChangeSet {
        ChangeSet {
            prefix: self.prefix.clone(),
            old_version: self.new_version.clone(),
            new_version: self.old_version.clone(),
            base_iri: self.base_iri.clone().map(|(a, b)| (b, a)),
            level: self.level.map(|(a, b)| (b, a)),
            dependencies_added: self.dependencies_removed.clone(),
            dependencies_removed: self.dependencies_added.clone(),
            added_classes: self.removed_classes.clone(),
            removed_classes: self.added_classes.clone(),
            modified_classes: self.modified_classes.iter().map(DefinitionChange::swapped).collect(),
            added_properties: self.removed_properties.clone(),
            removed_properties: self.added_properties.clone(),
            modified_properties: self.modified_properties.iter().map(DefinitionChange::swapped).collect(),
            superclass_edges_added: self.superclass_edges_removed.clone(),
            superclass_edges_removed: self.superclass_edges_added.clone(),
            superproperty_edges_added: self.superproperty_edges_removed.clone(),
            superproperty_edges_removed: self.superproperty_edges_added.clone(),
            alignments_added: self.alignments_removed.clone(),
            alignments_removed: self.alignments_added.clone(),
            text_changes: self
                .text_changes
                .iter()
                .map(|t| TextChange { target: t.target.clone(), field: t.field, old: t.new.clone(), new: t.old.clone() })
                .collect(),
        }
    }
}

pub fn diff_namespaces(old: &Namespace, new: &Namespace) -> Result<ChangeSet, DiffError> {
    if old.prefix != new.prefix {
        return Err(DiffError::PrefixMismatch { old: old.prefix.clone(), new: new.prefix.clone() });
    }

    let old_classes: BTreeMap<&Ref, &ClassDef> = old.classes.iter().map(|c| (&c.id, c)).collect();
    let new_classes: BTreeMap<&Ref, &ClassDef> = new.classes.iter().map(|c| (&c.id, c)).collect();
    let old_props: BTreeMap<&Ref, &PropertyDef> = old.properties.iter().map(|p| (&p.id, p)).collect();
    let new_props: BTreeMap<&Ref, &PropertyDef> = new.properties.iter().map(|p| (&p.id, p)).collect();

    let (added_classes, removed_classes, modified_classes) = split(&old_classes, &new_classes);
    let (added_properties, removed_properties, modified_properties) = split(&old_props, &new_props);

    let class_edges = |ns: &Namespace| -> BTreeSet<(Ref, Ref)> {
        ns.classes
            .iter()
            .flat_map(|c| c.superclasses.iter().map(move |s| (c.id.clone(), s.clone())))
            .collect()
    };
    let prop_edges = |ns: &Namespace| -> BTreeSet<(Ref, Ref)> {
        ns.properties
            .iter()
            .flat_map(|p| p.superproperties.iter().map(move |s| (p.id.clone(), s.clone())))
            .collect()
    };
    let (superclass_edges_added, superclass_edges_removed) = set_delta(class_edges(old), class_edges(new));
    let (superproperty_edges_added, superproperty_edges_removed) = set_delta(prop_edges(old), prop_edges(new));
    let (alignments_added, alignments_removed) = set_delta(
        old.alignments.iter().cloned().collect(),
        new.alignments.iter().cloned().collect(),
    );
    let (dependencies_added, dependencies_removed) = set_delta(
        old.depends_on.iter().cloned().collect(),
        new.depends_on.iter().cloned().collect(),
    );

    let mut text_changes = Vec::new();
    for change in &modified_classes {
        let (a, b) = (&change.before, &change.after);
        push_text(&mut text_changes, &a.id, TextField::Label, &a.label, &b.label);
        push_text(&mut text_changes, &a.id, TextField::ScopeNote, &a.scope_note, &b.scope_note);
    }
    for change in &modified_properties {
        let (a, b) = (&change.before, &change.after);
        push_text(&mut text_changes, &a.id, TextField::Label, &a.label, &b.label);
        push_text(&mut text_changes, &a.id, TextField::InverseLabel, &a.inverse_label, &b.inverse_label);
    }
    text_changes.sort();

    Ok(ChangeSet {
        prefix: old.prefix.clone(),
        old_version: old.version.clone(),
        new_version: new.version.clone(),
        base_iri: (old.base_iri != new.base_iri).then(|| (old.base_iri.clone(), new.base_iri.clone())),
        level: (old.level != new.level).then_some((old.level, new.level)),
        dependencies_added,
        dependencies_removed,
        added_classes,
        removed_classes,
        modified_classes,
        added_properties,
        removed_properties,
        modified_properties,
        superclass_edges_added,
        superclass_edges_removed,
        superproperty_edges_added,
        superproperty_edges_removed,
        alignments_added,
        alignments_removed,
        text_changes,
    })
}

type Split<T> = (Vec<T>, Vec<T>, Vec<DefinitionChange<T>>);

fn split<T: Clone + Eq + Definition>(old: &BTreeMap<&Ref, &T>, new: &BTreeMap<&Ref, &T>) -> Split<T> {
    let added = new.iter().filter(|(k, _)| !old.contains_key(*k)).map(|(_, v)| (*v).clone()).collect();
    let removed = old.iter().filter(|(k, _)| !new.contains_key(*k)).map(|(_, v)| (*v).clone()).collect();
    let modified = old
        .iter()
        .filter_map(|(k, before)| {
            let after = new.get(*k)?;
            (!before.same_content(after))
                .then(|| DefinitionChange { before: (*before).clone(), after: (*after).clone() })
        })
        .collect();
    (added, removed, modified)
}

/// Content equality that ignores the order of edge lists and flags.
trait Definition {
    fn same_content(&self, other: &Self) -> bool;
}

impl Definition for ClassDef {
    fn same_content(&self, other: &Self) -> bool {
        fn sups(c: &ClassDef) -> BTreeSet<&Ref> {
            c.superclasses.iter().collect()
        }
        self.id == other.id
            && self.label == other.label
            && self.scope_note == other.scope_note
            && sups(self) == sups(other)
            && self.meta == other.meta
            && self.declared_top == other.declared_top
    }
}

impl Definition for PropertyDef {
    fn same_content(&self, other: &Self) -> bool {
        fn sups(p: &PropertyDef) -> BTreeSet<&Ref> {
            p.superproperties.iter().collect()
        }
        self.id == other.id
            && self.label == other.label
            && self.inverse_label == other.inverse_label
            && self.domain == other.domain
            && self.range == other.range
            && sups(self) == sups(other)
            && self.quantifier == other.quantifier
            && self.flags == other.flags
    }
}

fn set_delta<T: Ord + Clone>(old: BTreeSet<T>, new: BTreeSet<T>) -> (Vec<T>, Vec<T>) {
    let added = new.difference(&old).cloned().collect();
    let removed = old.difference(&new).cloned().collect();
    (added, removed)
}

fn push_text(out: &mut Vec<TextChange>, target: &Ref, field: TextField, old: &str, new: &str) {
    if old != new {
        out.push(TextChange { target: target.clone(), field, old: old.to_string(), new: new.to_string() });
    }
}

/// Applies `changes` to `old`, producing the namespace it was computed against.
pub fn apply_changeset(old: &Namespace, changes: &ChangeSet) -> Result<Namespace, DiffError> {
    if old.prefix != changes.prefix {
        return Err(DiffError::PrefixMismatch { old: old.prefix.clone(), new: changes.prefix.clone() });
    }
    if old.version != changes.old_version {
        return Err(DiffError::PatchConflict(format!(
            "expected version {}, found {}",
            changes.old_version, old.version
        )));
    }
    let mut ns = old.clone();
    ns.version = changes.new_version.clone();
    if let Some((_, iri)) = &changes.base_iri {
        ns.base_iri = iri.clone();
    }
    if let Some((_, level)) = changes.level {
        ns.level = level;
    }
    ns.depends_on.retain(|d| !changes.dependencies_removed.contains(d));
    ns.depends_on.extend(changes.dependencies_added.iter().cloned());
    ns.alignments.retain(|a| !changes.alignments_removed.contains(a));
    ns.alignments.extend(changes.alignments_added.iter().cloned());

    patch(&mut ns.classes, &changes.added_classes, &changes.removed_classes, &changes.modified_classes, |c| &c.id)?;
    patch(
        &mut ns.properties,
        &changes.added_properties,
        &changes.removed_properties,
        &changes.modified_properties,
        |p| &p.id,
    )?;
    Ok(ns)
}

fn patch<T: Clone>(
    items: &mut Vec<T>,
    added: &[T],
    removed: &[T],
    modified: &[DefinitionChange<T>],
    id: impl Fn(&T) -> &Ref,
) -> Result<(), DiffError> {
    for gone in removed {
        let pos = items
            .iter()
            .position(|item| id(item) == id(gone))
            .ok_or_else(|| DiffError::PatchConflict(format!("`{}` is not present", id(gone))))?;
        items.remove(pos);
    }
    for change in modified {
        let slot = items
            .iter_mut()
            .find(|item| id(item) == id(&change.before))
            .ok_or_else(|| DiffError::PatchConflict(format!("`{}` is not present", id(&change.before))))?;
        *slot = change.after.clone();
    }
    for new in added {
        if items.iter().any(|item| id(item) == id(new)) {
            return Err(DiffError::PatchConflict(format!("`{}` already exists", id(new))));
        }
        items.push(new.clone());
    }
    Ok(())
}
