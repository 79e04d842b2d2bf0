//! Subsumption queries, property inheritance, top-category derivation and
//! class-tree rendering over a [`ResolvedIndex`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::model::{ClassRef, PropertyRef, Ref, ResolvedIndex, TopCategory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("unknown class `{0}`")]
    UnknownClass(Ref),
    #[error("unknown namespace prefix `{0}`")]
    UnknownPrefix(String),
}

fn known(index: &ResolvedIndex, c: &ClassRef) -> Result<(), HierarchyError> {
    match index.class(c) {
        Some(_) => Ok(()),
        None => Err(HierarchyError::UnknownClass(c.clone())),
    }
}

/// Transitive superclasses of `c`, excluding `c` itself.
pub fn ancestors(index: &ResolvedIndex, c: &ClassRef) -> Result<BTreeSet<ClassRef>, HierarchyError> {
    index.ancestor_set(c).cloned().ok_or_else(|| HierarchyError::UnknownClass(c.clone()))
}

/// Reflexive subsumption: `a ⊑ b`.
pub fn is_subclass_of(index: &ResolvedIndex, a: &ClassRef, b: &ClassRef) -> Result<bool, HierarchyError> {
    known(index, b)?;
    let anc = index.ancestor_set(a).ok_or_else(|| HierarchyError::UnknownClass(a.clone()))?;
    Ok(a == b || anc.contains(b))
}

/// Subsumption without the existence checks, for callers that already hold
/// resolved refs. Unknown classes are only subsumed by themselves.
pub(crate) fn subsumes(index: &ResolvedIndex, sub: &ClassRef, sup: &ClassRef) -> bool {
    sub == sup || index.ancestor_set(sub).is_some_and(|a| a.contains(sup))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InheritedProperty {
    pub property: PropertyRef,
    /// Class on which the property is declared (its domain).
    pub origin: ClassRef,
    /// Length of the shortest superclass path from the queried class to `origin`.
    pub depth: usize,
}

/// Every property whose domain is `c` or one of its ancestors, nearest
/// declarations first, then by property ref.
pub fn inherited_properties(index: &ResolvedIndex, c: &ClassRef) -> Result<Vec<InheritedProperty>, HierarchyError> {
    known(index, c)?;
    let depth = distances_up(index, c);
    let mut out: Vec<InheritedProperty> = index
        .properties()
        .filter_map(|p| {
            depth.get(&p.domain).map(|d| InheritedProperty {
                property: p.id.clone(),
                origin: p.domain.clone(),
                depth: *d,
            })
        })
        .collect();
    out.sort_by(|a, b| a.depth.cmp(&b.depth).then_with(|| a.property.cmp(&b.property)));
    Ok(out)
}

fn distances_up(index: &ResolvedIndex, c: &ClassRef) -> BTreeMap<ClassRef, usize> {
    let mut dist = BTreeMap::from([(c.clone(), 0)]);
    let mut queue = VecDeque::from([c.clone()]);
    while let Some(node) = queue.pop_front() {
        let d = dist[&node];
        for parent in index.parents(&node).into_iter().flatten() {
            if !dist.contains_key(parent) {
                dist.insert(parent.clone(), d + 1);
                queue.push_back(parent.clone());
            }
        }
    }
    dist
}

/// Partition roots among the ancestors-or-self of `c`.
pub fn reachable_roots(index: &ResolvedIndex, c: &ClassRef) -> Result<BTreeSet<ClassRef>, HierarchyError> {
    let anc = index.ancestor_set(c).ok_or_else(|| HierarchyError::UnknownClass(c.clone()))?;
    Ok(index
        .partition_roots()
        .keys()
        .filter(|root| *root == c || anc.contains(*root))
        .cloned()
        .collect())
}

/// The category of the lowest-ref partition root reachable from `c`, or
/// `Unassigned`. Conflicts between several roots are reported by the
/// top-category lint, not here.
pub fn top_category_of(index: &ResolvedIndex, c: &ClassRef) -> Result<TopCategory, HierarchyError> {
    let roots = reachable_roots(index, c)?;
    Ok(roots
        .first()
        .map(|root| index.partition_roots()[root])
        .unwrap_or(TopCategory::Unassigned))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    #[serde(rename = "ref")]
    pub class: ClassRef,
    pub label: String,
    pub prefix: String,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    fn count(&self) -> usize {
        1 + self.children.iter().map(TreeNode::count).sum::<usize>()
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{} {}\n", self.class, self.label));
        for child in &self.children {
            child.write_text(depth + 1, out);
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a TreeNode, Option<&'a ClassRef>), parent: Option<&'a ClassRef>) {
        f(self, parent);
        for child in &self.children {
            child.visit(f, Some(&self.class));
        }
    }
}

/// Class forest. A class with k in-selection superclasses appears once under
/// each of them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassTree {
    pub roots: Vec<TreeNode>,
}

impl ClassTree {
    pub fn node_count(&self) -> usize {
        self.roots.iter().map(TreeNode::count).sum()
    }

    /// Visits every node with its parent ref (None for roots), depth first.
    pub fn for_each<'a>(&'a self, mut f: impl FnMut(&'a TreeNode, Option<&'a ClassRef>)) {
        for root in &self.roots {
            root.visit(&mut f, None);
        }
    }

    /// Indented text, two spaces per level.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for root in &self.roots {
            root.write_text(0, &mut out);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.roots).expect("tree serializes");
        out.push('\n');
        out
    }
}

pub fn render_class_tree(index: &ResolvedIndex, selection: &[String]) -> Result<ClassTree, HierarchyError> {
    for prefix in selection {
        if index.namespace(prefix).is_none() {
            return Err(HierarchyError::UnknownPrefix(prefix.clone()));
        }
    }
    let selected = |r: &Ref| selection.iter().any(|p| p == r.prefix());
    let roots = index
        .classes()
        .filter(|c| selected(&c.id))
        .filter(|c| !index.parents(&c.id).into_iter().flatten().any(&selected))
        .map(|c| build_node(index, &c.id, &selected))
        .collect();
    Ok(ClassTree { roots })
}

fn build_node(index: &ResolvedIndex, class: &ClassRef, selected: &impl Fn(&Ref) -> bool) -> TreeNode {
    let def = index.class(class).expect("resolved");
    let children = index
        .children(class)
        .into_iter()
        .flatten()
        .filter(|c| selected(c))
        .map(|c| build_node(index, c, selected))
        .collect();
    TreeNode { class: class.clone(), label: def.label.clone(), prefix: class.prefix().to_string(), children }
}
