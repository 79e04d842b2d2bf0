use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{
    ClassDef, ClassRef, Dependency, Ecosystem, Level, Namespace, PropertyDef, PropertyRef, Range, Ref, TopCategory,
    Version,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("duplicate namespace prefix `{0}`")]
    DuplicatePrefix(String),
    #[error("namespaces `{first}` and `{second}` share base IRI `{iri}`")]
    DuplicateBaseIri { first: String, second: String, iri: String },
    #[error("namespace `{namespace}` depends on `{prefix}` {version}, which is not in the ecosystem")]
    MissingDependency { namespace: String, prefix: String, version: Version },
    #[error("namespace `{namespace}` ({level}) depends on higher-level namespace `{dependency}` ({dependency_level})")]
    DependencyLevel { namespace: String, level: Level, dependency: String, dependency_level: Level },
    #[error("namespace dependency cycle: {}", .0.join(" -> "))]
    DependencyCycle(Vec<String>),
    #[error("`{id}` is defined in namespace `{namespace}` but carries a different prefix")]
    ForeignDefinition { namespace: String, id: Ref },
    #[error("`{0}` is defined more than once")]
    DuplicateId(Ref),
    #[error("`{class}` lists `{superclass}` more than once")]
    DuplicateSuperclass { class: Ref, superclass: Ref },
    #[error("`{0}` lists itself as a superclass or superproperty")]
    SelfReference(Ref),
    #[error("unresolved reference `{reference}` in `{referrer}`")]
    DanglingReference { reference: Ref, referrer: String },
    #[error("cycle detected: {}", fmt_cycle(.0))]
    CycleDetected(Vec<Ref>),
    #[error("namespace `{namespace}` aligns `{class}` under `{superclass}`, which it does not define")]
    MisplacedAlignment { namespace: String, class: Ref, superclass: Ref },
}

fn fmt_cycle(refs: &[Ref]) -> String {
    refs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" -> ")
}

/// Namespace-level data retained in the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamespaceMeta {
    pub prefix: String,
    pub base_iri: String,
    pub version: Version,
    pub level: Level,
    pub depends_on: Vec<Dependency>,
}

/// Immutable, fully resolved view of an ecosystem.
///
/// Superclass edges include alignments contributed by other namespaces.
/// Every reference appearing in any definition is present in the tables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResolvedIndex {
    namespaces: BTreeMap<String, NamespaceMeta>,
    classes: BTreeMap<ClassRef, ClassDef>,
    properties: BTreeMap<PropertyRef, PropertyDef>,
    parents: BTreeMap<ClassRef, BTreeSet<ClassRef>>,
    children: BTreeMap<ClassRef, BTreeSet<ClassRef>>,
    ancestors: BTreeMap<ClassRef, BTreeSet<ClassRef>>,
    property_ancestors: BTreeMap<PropertyRef, BTreeSet<PropertyRef>>,
    partition_roots: BTreeMap<ClassRef, TopCategory>,
}

impl ResolvedIndex {
    pub fn namespaces(&self) -> impl Iterator<Item = &NamespaceMeta> {
        self.namespaces.values()
    }

    pub fn namespace(&self, prefix: &str) -> Option<&NamespaceMeta> {
        self.namespaces.get(prefix)
    }

    pub fn level_of(&self, r: &Ref) -> Option<Level> {
        self.namespaces.get(r.prefix()).map(|ns| ns.level)
    }

    pub fn class(&self, id: &ClassRef) -> Option<&ClassDef> {
        self.classes.get(id)
    }

    pub fn property(&self, id: &PropertyRef) -> Option<&PropertyDef> {
        self.properties.get(id)
    }

    /// Classes in canonical ref order.
    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    /// Properties in canonical ref order.
    pub fn properties(&self) -> impl Iterator<Item = &PropertyDef> {
        self.properties.values()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Direct superclasses, including alignment edges.
    pub fn parents(&self, id: &ClassRef) -> Option<&BTreeSet<ClassRef>> {
        self.parents.get(id)
    }

    /// Direct subclasses, including alignment edges.
    pub fn children(&self, id: &ClassRef) -> Option<&BTreeSet<ClassRef>> {
        self.children.get(id)
    }

    /// Transitive, non-reflexive superclass closure.
    pub fn ancestor_set(&self, id: &ClassRef) -> Option<&BTreeSet<ClassRef>> {
        self.ancestors.get(id)
    }

    /// Transitive, non-reflexive superproperty closure.
    pub fn superproperty_set(&self, id: &PropertyRef) -> Option<&BTreeSet<PropertyRef>> {
        self.property_ancestors.get(id)
    }

    pub fn partition_roots(&self) -> &BTreeMap<ClassRef, TopCategory> {
        &self.partition_roots
    }

    /// Returns a copy of the index whose partition-root registry is replaced.
    /// Roots must name known classes; `Unassigned` entries are dropped.
    pub fn with_partition_roots(&self, roots: BTreeMap<ClassRef, TopCategory>) -> Result<ResolvedIndex, ResolveError> {
        for root in roots.keys() {
            if !self.classes.contains_key(root) {
                return Err(ResolveError::DanglingReference {
                    reference: root.clone(),
                    referrer: "partition-root override".to_string(),
                });
            }
        }
        let mut copy = self.clone();
        copy.partition_roots = roots.into_iter().filter(|(_, top)| *top != TopCategory::Unassigned).collect();
        Ok(copy)
    }

    pub fn contains(&self, r: &Ref) -> bool {
        self.classes.contains_key(r) || self.properties.contains_key(r)
    }
}

/// Checks every cross-reference of the ecosystem and builds the index.
///
/// Definitions are copied, never modified.
pub fn resolve_ecosystem(ecosystem: &Ecosystem) -> Result<ResolvedIndex, ResolveError> {
    let namespaces = ecosystem.namespaces();
    let by_prefix = check_namespaces(namespaces)?;

    let mut classes = BTreeMap::new();
    let mut properties = BTreeMap::new();
    for ns in namespaces {
        for class in &ns.classes {
            if class.id.prefix() != ns.prefix {
                return Err(ResolveError::ForeignDefinition { namespace: ns.prefix.clone(), id: class.id.clone() });
            }
            if classes.insert(class.id.clone(), class.clone()).is_some() {
                return Err(ResolveError::DuplicateId(class.id.clone()));
            }
        }
        for prop in &ns.properties {
            if prop.id.prefix() != ns.prefix {
                return Err(ResolveError::ForeignDefinition { namespace: ns.prefix.clone(), id: prop.id.clone() });
            }
            if classes.contains_key(&prop.id) || properties.insert(prop.id.clone(), prop.clone()).is_some() {
                return Err(ResolveError::DuplicateId(prop.id.clone()));
            }
        }
    }

    let mut parents: BTreeMap<ClassRef, BTreeSet<ClassRef>> =
        classes.keys().map(|c| (c.clone(), BTreeSet::new())).collect();
    for class in classes.values() {
        for sup in &class.superclasses {
            if sup == &class.id {
                return Err(ResolveError::SelfReference(class.id.clone()));
            }
            if !classes.contains_key(sup) {
                return Err(dangling(sup, &class.id));
            }
            if !parents.get_mut(&class.id).expect("class present").insert(sup.clone()) {
                return Err(ResolveError::DuplicateSuperclass { class: class.id.clone(), superclass: sup.clone() });
            }
        }
    }
    for ns in namespaces {
        for alignment in &ns.alignments {
            let referrer = format!("alignment in `{}`", ns.prefix);
            for end in [&alignment.class, &alignment.superclass] {
                if !classes.contains_key(end) {
                    return Err(ResolveError::DanglingReference { reference: end.clone(), referrer });
                }
            }
            if alignment.superclass.prefix() != ns.prefix {
                return Err(ResolveError::MisplacedAlignment {
                    namespace: ns.prefix.clone(),
                    class: alignment.class.clone(),
                    superclass: alignment.superclass.clone(),
                });
            }
            if alignment.class == alignment.superclass {
                return Err(ResolveError::SelfReference(alignment.class.clone()));
            }
            if !parents.get_mut(&alignment.class).expect("checked").insert(alignment.superclass.clone()) {
                return Err(ResolveError::DuplicateSuperclass {
                    class: alignment.class.clone(),
                    superclass: alignment.superclass.clone(),
                });
            }
        }
    }

    for prop in properties.values() {
        if !classes.contains_key(&prop.domain) {
            return Err(dangling(&prop.domain, &prop.id));
        }
        if let Range::Class(range) = &prop.range {
            if !classes.contains_key(range) {
                return Err(dangling(range, &prop.id));
            }
        }
        let mut seen = BTreeSet::new();
        for sup in &prop.superproperties {
            if sup == &prop.id {
                return Err(ResolveError::SelfReference(prop.id.clone()));
            }
            if !properties.contains_key(sup) {
                return Err(dangling(sup, &prop.id));
            }
            if !seen.insert(sup) {
                return Err(ResolveError::DuplicateSuperclass { class: prop.id.clone(), superclass: sup.clone() });
            }
        }
    }

    let prop_parents: BTreeMap<PropertyRef, BTreeSet<PropertyRef>> = properties
        .values()
        .map(|p| (p.id.clone(), p.superproperties.iter().cloned().collect()))
        .collect();

    find_cycle(&parents).map_or(Ok(()), |c| Err(ResolveError::CycleDetected(c)))?;
    find_cycle(&prop_parents).map_or(Ok(()), |c| Err(ResolveError::CycleDetected(c)))?;

    let ancestors = closure(&parents);
    let property_ancestors = closure(&prop_parents);

    let mut children: BTreeMap<ClassRef, BTreeSet<ClassRef>> =
        classes.keys().map(|c| (c.clone(), BTreeSet::new())).collect();
    for (child, sups) in &parents {
        for sup in sups {
            children.get_mut(sup).expect("resolved").insert(child.clone());
        }
    }

    let partition_roots = classes
        .values()
        .filter(|c| c.is_partition_root())
        .map(|c| (c.id.clone(), c.declared_top))
        .collect();

    Ok(ResolvedIndex {
        namespaces: by_prefix,
        classes,
        properties,
        parents,
        children,
        ancestors,
        property_ancestors,
        partition_roots,
    })
}

fn dangling(reference: &Ref, referrer: &Ref) -> ResolveError {
    ResolveError::DanglingReference { reference: reference.clone(), referrer: referrer.to_string() }
}

fn check_namespaces(namespaces: &[Namespace]) -> Result<BTreeMap<String, NamespaceMeta>, ResolveError> {
    let mut by_prefix: BTreeMap<String, NamespaceMeta> = BTreeMap::new();
    let mut by_iri: BTreeMap<&str, &str> = BTreeMap::new();
    for ns in namespaces {
        if by_prefix.contains_key(&ns.prefix) {
            return Err(ResolveError::DuplicatePrefix(ns.prefix.clone()));
        }
        if let Some(first) = by_iri.insert(&ns.base_iri, &ns.prefix) {
            return Err(ResolveError::DuplicateBaseIri {
                first: first.to_string(),
                second: ns.prefix.clone(),
                iri: ns.base_iri.clone(),
            });
        }
        by_prefix.insert(
            ns.prefix.clone(),
            NamespaceMeta {
                prefix: ns.prefix.clone(),
                base_iri: ns.base_iri.clone(),
                version: ns.version.clone(),
                level: ns.level,
                depends_on: ns.depends_on.clone(),
            },
        );
    }

    let mut deps: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for ns in namespaces {
        for dep in &ns.depends_on {
            let target = by_prefix
                .get(&dep.prefix)
                .filter(|t| t.version == dep.version)
                .ok_or_else(|| ResolveError::MissingDependency {
                    namespace: ns.prefix.clone(),
                    prefix: dep.prefix.clone(),
                    version: dep.version.clone(),
                })?;
            if target.level > ns.level {
                return Err(ResolveError::DependencyLevel {
                    namespace: ns.prefix.clone(),
                    level: ns.level,
                    dependency: dep.prefix.clone(),
                    dependency_level: target.level,
                });
            }
            deps.entry(ns.prefix.clone()).or_default().insert(dep.prefix.clone());
        }
        deps.entry(ns.prefix.clone()).or_default();
    }
    if let Some(cycle) = find_cycle(&deps) {
        return Err(ResolveError::DependencyCycle(cycle));
    }
    Ok(by_prefix)
}

/// Depth-first search for a cycle; returns the nodes on it with the first node
/// repeated at the end. Iteration follows map order so the result is stable.
fn find_cycle<K: Ord + Clone>(edges: &BTreeMap<K, BTreeSet<K>>) -> Option<Vec<K>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: BTreeMap<&K, Mark> = BTreeMap::new();
    for start in edges.keys() {
        if marks.contains_key(start) {
            continue;
        }
        let mut path: Vec<&K> = vec![start];
        let mut stack: Vec<std::collections::btree_set::Iter<'_, K>> = vec![edges[start].iter()];
        marks.insert(start, Mark::Open);
        while let Some(iter) = stack.last_mut() {
            match iter.next() {
                Some(next) => match marks.get(next) {
                    Some(Mark::Open) => {
                        let pos = path.iter().position(|n| *n == next).expect("open node is on path");
                        let mut cycle: Vec<K> = path[pos..].iter().map(|k| (*k).clone()).collect();
                        cycle.push(next.clone());
                        return Some(cycle);
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(next, Mark::Open);
                        path.push(next);
                        stack.push(edges.get(next).map(|s| s.iter()).unwrap_or_default());
                    }
                },
                None => {
                    let done = path.pop().expect("path tracks stack");
                    marks.insert(done, Mark::Done);
                    stack.pop();
                }
            }
        }
    }
    None
}

/// Transitive closure of an acyclic edge map, memoized in post-order.
fn closure<K: Ord + Clone>(edges: &BTreeMap<K, BTreeSet<K>>) -> BTreeMap<K, BTreeSet<K>> {
    fn visit<K: Ord + Clone>(node: &K, edges: &BTreeMap<K, BTreeSet<K>>, memo: &mut BTreeMap<K, BTreeSet<K>>) {
        if memo.contains_key(node) {
            return;
        }
        let mut acc = BTreeSet::new();
        for next in edges.get(node).into_iter().flatten() {
            visit(next, edges, memo);
            acc.insert(next.clone());
            acc.extend(memo[next].iter().cloned());
        }
        memo.insert(node.clone(), acc);
    }
    let mut memo = BTreeMap::new();
    for node in edges.keys() {
        visit(node, edges, &mut memo);
    }
    memo
}
