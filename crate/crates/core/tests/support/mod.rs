//! Shared generators, brute-force oracles and golden-file helpers for the
//! integration tests. Oracles work from the raw namespaces, never from a
//! `ResolvedIndex`.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use ontoeco::diagnostics::{Diagnostic, Severity};
use ontoeco::instances::{InstanceGraph, Object, Statement};
use ontoeco::model::{
    Alignment, Bounds, ClassDef, Dependency, Ecosystem, Level, Namespace, OntoCleanTags, PropertyDef, PropertyFlag,
    Quantifier, Range, Ref, TopCategory, UpperBound,
};
use ontoeco::profiles::Profile;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn corpus(name: &str) -> PathBuf {
    repo_root().join("corpus").join(name)
}

pub fn blessing() -> bool {
    std::env::var_os("ONTOECO_BLESS").is_some()
}

/// Compares `actual` with the committed file, or rewrites it when blessing.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = corpus(name);
    if blessing() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{} differs from the generated output (rerun with ONTOECO_BLESS=1 to regenerate)", path.display()))
    }
}

/// Runs the CLI in-process without color.
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("ontoeco").chain(args.iter().copied());
    let code = ontoeco::cli::run(argv, &mut out, &mut err, false);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, items: &[T]) -> T {
    *items.choose(rng).unwrap()
}

fn parse<T: std::str::FromStr>(s: &str) -> T
where
    T::Err: std::fmt::Debug,
{
    s.parse().unwrap()
}

pub fn random_tags(rng: &mut ChaCha8Rng) -> OntoCleanTags {
    OntoCleanTags {
        rigidity: parse(pick(rng, &["rigid", "non_rigid", "anti_rigid", "untagged", "untagged"])),
        identity: parse(pick(rng, &["carries_identity", "no_identity", "untagged"])),
        unity: parse(pick(rng, &["unity", "no_unity", "anti_unity", "untagged"])),
        dependence: parse(pick(rng, &["dependent", "independent", "untagged"])),
    }
}

pub fn random_bounds(rng: &mut ChaCha8Rng) -> Bounds {
    let min = rng.gen_range(0..3);
    let max = if rng.gen_bool(0.4) { UpperBound::Unbounded } else { UpperBound::Finite(rng.gen_range(min..4)) };
    Bounds::new(min, max).unwrap()
}

pub fn random_quantifier(rng: &mut ChaCha8Rng) -> Quantifier {
    if rng.gen_bool(0.5) {
        return Quantifier::ANY;
    }
    Quantifier { domain: random_bounds(rng), range: random_bounds(rng) }
}

/// A resolvable ecosystem: 1 to 4 namespaces, at most 50 classes and 30
/// properties, random DAG edges (some as alignments), random tags and
/// partition roots.
pub fn random_ecosystem(rng: &mut ChaCha8Rng) -> Ecosystem {
    let ns_count = rng.gen_range(1..=4);
    let mut namespaces: Vec<Namespace> = (0..ns_count)
        .map(|i| {
            let level = pick(rng, &Level::ALL);
            Namespace::new(format!("n{i}"), format!("http://example.org/n{i}"), parse("1.0"), level)
        })
        .collect();
    for i in 0..ns_count {
        for j in 0..i {
            if namespaces[j].level <= namespaces[i].level && rng.gen_bool(0.5) {
                let dep = Dependency { prefix: namespaces[j].prefix.clone(), version: parse("1.0") };
                namespaces[i].depends_on.push(dep);
            }
        }
    }

    let class_count = rng.gen_range(1..=50);
    let mut class_ns = Vec::new();
    let mut class_ids: Vec<Ref> = Vec::new();
    for k in 0..class_count {
        let ns = rng.gen_range(0..ns_count);
        class_ns.push(ns);
        class_ids.push(Ref::new(format!("n{ns}"), format!("C{k}")).unwrap());
    }
    for k in 0..class_count {
        let mut c = ClassDef::new(class_ids[k].clone(), format!("class {k}"));
        c.meta = random_tags(rng);
        if rng.gen_bool(0.15) {
            c.declared_top =
                pick(rng, &[TopCategory::Endurant, TopCategory::Perdurant, TopCategory::Quality, TopCategory::AbstractRegion]);
        }
        if k > 0 {
            let n_parents = rng.gen_range(0..=3.min(k));
            let mut chosen: Vec<usize> = (0..k).collect();
            chosen.shuffle(rng);
            for &j in chosen.iter().take(n_parents) {
                if rng.gen_bool(0.15) {
                    namespaces[class_ns[j]]
                        .alignments
                        .push(Alignment { class: class_ids[k].clone(), superclass: class_ids[j].clone() });
                } else {
                    c.superclasses.push(class_ids[j].clone());
                }
            }
        }
        namespaces[class_ns[k]].classes.push(c);
    }

    let prop_count = rng.gen_range(0..=30);
    let mut prop_ids: Vec<Ref> = Vec::new();
    for k in 0..prop_count {
        let ns = rng.gen_range(0..ns_count);
        let id = Ref::new(format!("n{ns}"), format!("P{k}")).unwrap();
        let domain = class_ids.choose(rng).unwrap().clone();
        let range = if rng.gen_bool(0.2) { Range::Literal } else { Range::Class(class_ids.choose(rng).unwrap().clone()) };
        let mut p = PropertyDef::new(id.clone(), format!("property {k}"), domain, range);
        if k > 0 {
            let mut earlier: Vec<&Ref> = prop_ids.iter().collect();
            earlier.shuffle(rng);
            p.superproperties = earlier.into_iter().take(rng.gen_range(0..=2)).cloned().collect();
        }
        if rng.gen_bool(0.3) {
            p.flags.insert(PropertyFlag::Participation);
        }
        if rng.gen_bool(0.3) {
            p.flags.insert(PropertyFlag::Essential);
        }
        p.quantifier = random_quantifier(rng);
        namespaces[ns].properties.push(p);
        prop_ids.push(id);
    }
    Ecosystem::new(namespaces).unwrap()
}

/// Flat view of an ecosystem for the oracles.
pub struct Raw {
    pub classes: BTreeMap<Ref, (Level, ClassDef)>,
    pub properties: BTreeMap<Ref, PropertyDef>,
    /// (subclass, superclass, declared by the subclass itself)
    pub edges: Vec<(Ref, Ref, bool)>,
    pub namespaces: Vec<Namespace>,
}

impl Raw {
    pub fn new(eco: &Ecosystem) -> Raw {
        let mut raw = Raw {
            classes: BTreeMap::new(),
            properties: BTreeMap::new(),
            edges: Vec::new(),
            namespaces: eco.namespaces().to_vec(),
        };
        for ns in eco.namespaces() {
            for c in &ns.classes {
                raw.classes.insert(c.id.clone(), (ns.level, c.clone()));
                for s in &c.superclasses {
                    raw.edges.push((c.id.clone(), s.clone(), true));
                }
            }
            for p in &ns.properties {
                raw.properties.insert(p.id.clone(), p.clone());
            }
            for a in &ns.alignments {
                raw.edges.push((a.class.clone(), a.superclass.clone(), false));
            }
        }
        raw
    }

    pub fn level(&self, r: &Ref) -> Level {
        self.namespaces.iter().find(|ns| ns.prefix == r.prefix()).unwrap().level
    }

    /// Strict ancestors by fixed-point iteration over the edge list.
    pub fn ancestors(&self, c: &Ref) -> BTreeSet<Ref> {
        let mut found = BTreeSet::new();
        loop {
            let before = found.len();
            for (a, b, _) in &self.edges {
                if (a == c || found.contains(a)) && b != c {
                    found.insert(b.clone());
                }
            }
            if found.len() == before {
                return found;
            }
        }
    }

    pub fn is_sub(&self, a: &Ref, b: &Ref) -> bool {
        a == b || self.ancestors(a).contains(b)
    }

    /// Shortest upward distances from `c` by repeated relaxation.
    pub fn distances(&self, c: &Ref) -> BTreeMap<Ref, usize> {
        let mut dist = BTreeMap::from([(c.clone(), 0usize)]);
        for _ in 0..=self.classes.len() {
            for (a, b, _) in &self.edges {
                if let Some(&d) = dist.get(a) {
                    let entry = dist.entry(b.clone()).or_insert(usize::MAX);
                    *entry = (*entry).min(d + 1);
                }
            }
        }
        dist
    }

    pub fn inherited(&self, c: &Ref) -> Vec<(Ref, usize)> {
        let dist = self.distances(c);
        let mut out: Vec<(Ref, usize)> = self
            .properties
            .values()
            .filter_map(|p| dist.get(&p.domain).map(|d| (p.id.clone(), *d)))
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }

    pub fn roots(&self) -> BTreeMap<Ref, TopCategory> {
        self.classes
            .values()
            .filter(|(_, c)| c.declared_top != TopCategory::Unassigned)
            .map(|(_, c)| (c.id.clone(), c.declared_top))
            .collect()
    }

    pub fn reached_roots(&self, c: &Ref) -> Vec<Ref> {
        let roots = self.roots();
        let anc = self.ancestors(c);
        roots.keys().filter(|r| *r == c || anc.contains(*r)).cloned().collect()
    }

    pub fn top(&self, c: &Ref) -> TopCategory {
        let reached = self.reached_roots(c);
        let mut sorted = reached.clone();
        sorted.sort();
        sorted.first().map_or(TopCategory::Unassigned, |r| self.roots()[r])
    }

    /// Expected findings of every lint check, as (code, severity, subjects).
    pub fn expected_checks(&self) -> Vec<Finding> {
        let mut out = Vec::new();
        let term = |r: &Ref| r.to_string();
        for (sub, sup, _) in &self.edges {
            let p = self.classes[sub].1.meta;
            let q = self.classes[sup].1.meta;
            let s = vec![term(sub), term(sup)];
            let st = |x: &dyn ToString| x.to_string();
            if st(&q.rigidity) == "anti_rigid" && st(&p.rigidity) == "rigid" {
                out.push(finding("OC1", "error", &s));
            }
            if st(&q.identity) == "carries_identity" && st(&p.identity) == "no_identity" {
                out.push(finding("OC2", "error", &s));
            }
            let (qu, pu) = (st(&q.unity), st(&p.unity));
            if (qu == "unity" && (pu == "no_unity" || pu == "anti_unity")) || (qu == "anti_unity" && pu == "unity") {
                out.push(finding("OC3", "error", &s));
            }
            if st(&q.dependence) == "dependent" && st(&p.dependence) == "independent" {
                out.push(finding("OC4", "error", &s));
            }
        }
        for c in self.classes.keys() {
            let reached = self.reached_roots(c);
            if reached.is_empty() {
                out.push(finding("TC2", "info", &[term(c)]));
            } else if reached.len() > 1 {
                let mut s = vec![term(c)];
                s.extend(reached.iter().map(term));
                out.push(finding("TC1", "error", &s));
            }
        }
        for ns in &self.namespaces {
            for c in &ns.classes {
                if ns.level > Level::Core && !self.ancestors(&c.id).iter().any(|a| self.level(a) < ns.level) {
                    out.push(finding("LD1", "error", &[term(&c.id)]));
                }
                for s in &c.superclasses {
                    if self.level(s) > ns.level {
                        out.push(finding("LD2", "error", &[term(&c.id), term(s)]));
                    }
                }
            }
            let mut mentioned: BTreeSet<String> = BTreeSet::new();
            for c in &ns.classes {
                mentioned.extend(c.superclasses.iter().map(|r| r.prefix().to_string()));
            }
            for p in &ns.properties {
                mentioned.insert(p.domain.prefix().to_string());
                if let Range::Class(r) = &p.range {
                    mentioned.insert(r.prefix().to_string());
                }
                mentioned.extend(p.superproperties.iter().map(|r| r.prefix().to_string()));
            }
            for a in &ns.alignments {
                mentioned.insert(a.class.prefix().to_string());
                mentioned.insert(a.superclass.prefix().to_string());
            }
            for d in &ns.depends_on {
                if !mentioned.contains(&d.prefix) {
                    out.push(finding("LD3", "warning", &[format!("{}:*", ns.prefix), format!("{}:*", d.prefix)]));
                }
            }
        }
        for p in self.properties.values() {
            for s in &p.superproperties {
                let sp = &self.properties[s];
                let pair = [term(&p.id), term(s)];
                if !self.is_sub(&p.domain, &sp.domain) {
                    out.push(finding("PR1", "error", &pair));
                }
                let range_ok = match (&p.range, &sp.range) {
                    (Range::Literal, Range::Literal) => true,
                    (Range::Class(a), Range::Class(b)) => self.is_sub(a, b),
                    _ => false,
                };
                if !range_ok {
                    out.push(finding("PR2", "error", &pair));
                }
            }
            if p.flags.contains(&PropertyFlag::Participation) {
                let d = self.top(&p.domain);
                let ok = match &p.range {
                    Range::Literal => false,
                    Range::Class(r) => {
                        let r = self.top(r);
                        (d == TopCategory::Endurant && r == TopCategory::Perdurant)
                            || (d == TopCategory::Perdurant && r == TopCategory::Endurant)
                    }
                };
                if !ok {
                    out.push(finding("PA1", "error", &[term(&p.id)]));
                }
            }
            if p.flags.contains(&PropertyFlag::Essential) && self.classes[&p.domain].1.meta.rigidity.to_string() == "anti_rigid" {
                out.push(finding("EA1", "warning", &[term(&p.id), term(&p.domain)]));
            }
        }
        out.sort();
        out
    }

    /// Naive closure: repeat both rules until nothing changes.
    pub fn closure(&self, seeds: &BTreeSet<Ref>) -> BTreeSet<Ref> {
        let mut members = seeds.clone();
        loop {
            let mut next = members.clone();
            for m in &members {
                if let Some(p) = self.properties.get(m) {
                    next.insert(p.domain.clone());
                    if let Range::Class(r) = &p.range {
                        next.insert(r.clone());
                    }
                }
                for (a, b, _) in &self.edges {
                    if a == m {
                        next.insert(b.clone());
                    }
                }
            }
            if next == members {
                return members;
            }
            members = next;
        }
    }

    fn instance_of(&self, graph: &InstanceGraph, e: &str, class: &Ref) -> bool {
        graph.entities.get(e).is_some_and(|asserted| asserted.iter().any(|a| self.is_sub(a, class)))
    }

    /// Brute-force instance validation.
    pub fn expected_instances(&self, profile: &Profile, graph: &InstanceGraph) -> Vec<Finding> {
        let mut out = Vec::new();
        let obj = |o: &Object| match o {
            Object::Entity(e) => e.clone(),
            Object::Literal(l) => format!("{l:?}"),
        };
        let stmt_subjects = |s: &Statement| vec![s.subject.clone(), s.property.to_string(), obj(&s.object)];
        for (e, classes) in &graph.entities {
            for c in classes {
                if !profile.classes.contains(c) {
                    out.push(finding("IV1", "error", &[e.clone(), c.to_string()]));
                }
            }
        }
        for s in &graph.statements {
            if !profile.properties.contains(&s.property) {
                out.push(finding("IV2", "error", &stmt_subjects(s)));
                continue;
            }
            let p = &self.properties[&s.property];
            if !self.instance_of(graph, &s.subject, &p.domain) {
                out.push(finding("IV3", "error", &stmt_subjects(s)));
            }
            let range_ok = match (&p.range, &s.object) {
                (Range::Literal, Object::Literal(_)) => true,
                (Range::Class(r), Object::Entity(o)) => self.instance_of(graph, o, r),
                _ => false,
            };
            if !range_ok {
                out.push(finding("IV4", "error", &stmt_subjects(s)));
            }
            if s.property == Ref::of("sdh:P43") {
                let subject_ok = self.instance_of(graph, &s.subject, &Ref::of("sdh:C4"));
                let object_ok = matches!(&s.object, Object::Entity(o) if self.instance_of(graph, o, &Ref::of("crm:E4")));
                if !(subject_ok && object_ok) {
                    out.push(finding("IV8", "error", &stmt_subjects(s)));
                }
            }
        }
        let admits = |b: &Bounds, n: usize| {
            n >= b.min() as usize
                && match b.max() {
                    UpperBound::Finite(m) => n <= m as usize,
                    UpperBound::Unbounded => true,
                }
        };
        for e in graph.entities.keys() {
            for pid in &profile.properties {
                let p = &self.properties[pid];
                let q = profile.overrides.get(pid).copied().unwrap_or(p.quantifier);
                if self.instance_of(graph, e, &p.domain) {
                    let n = graph.statements.iter().filter(|s| &s.subject == e && &s.property == pid).count();
                    if !admits(&q.range, n) {
                        out.push(finding("IV5", "error", &[e.clone(), pid.to_string()]));
                    }
                }
                if let Range::Class(r) = &p.range {
                    if self.instance_of(graph, e, r) {
                        let n = graph
                            .statements
                            .iter()
                            .filter(|s| &s.property == pid && s.object == Object::Entity(e.clone()))
                            .count();
                        if !admits(&q.domain, n) {
                            out.push(finding("IV5", "error", &[e.clone(), pid.to_string()]));
                        }
                    }
                }
            }
        }
        for e in graph.entities.keys() {
            if !self.instance_of(graph, e, &Ref::of("sdh:C1")) {
                continue;
            }
            let into = |p: &str| -> Vec<String> {
                graph
                    .statements
                    .iter()
                    .filter(|s| s.property == Ref::of(p) && s.object == Object::Entity(e.clone()))
                    .map(|s| s.subject.clone())
                    .collect()
            };
            let (starts, ends) = (into("sdh:P8"), into("sdh:P9"));
            if starts.len() > 1 {
                out.push(finding("IV6", "error", &[e.clone(), "sdh:P8".into()]));
            }
            if ends.len() > 1 {
                out.push(finding("IV6", "error", &[e.clone(), "sdh:P9".into()]));
            }
            for s in &starts {
                for t in &ends {
                    if let (Some(a), Some(b)) = (graph.years.get(s), graph.years.get(t)) {
                        if a > b {
                            out.push(finding("IV7", "error", &[e.clone(), s.clone(), t.clone()]));
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

pub type Finding = (String, String, Vec<String>);

fn finding(code: &str, severity: &str, subjects: &[String]) -> Finding {
    (code.to_string(), severity.to_string(), subjects.to_vec())
}

pub fn findings(diags: &[Diagnostic]) -> Vec<Finding> {
    let mut out: Vec<Finding> = diags
        .iter()
        .map(|d| {
            let sev = match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
                Severity::Info => "info",
            };
            (d.code.to_string(), sev.to_string(), d.subjects.iter().map(ToString::to_string).collect())
        })
        .collect();
    out.sort();
    out
}

/// A random instance graph of at most 30 entities over the fixture ecosystem,
/// biased towards the profile but straying outside it sometimes.
pub fn random_graph(rng: &mut ChaCha8Rng, raw: &Raw, profile: &Profile) -> InstanceGraph {
    let all_classes: Vec<&Ref> = raw.classes.keys().collect();
    let all_props: Vec<&Ref> = raw.properties.keys().collect();
    let profile_classes: Vec<&Ref> = profile.classes.iter().collect();
    let profile_props: Vec<&Ref> = profile.properties.iter().collect();
    let special = [Ref::of("sdh:P8"), Ref::of("sdh:P9"), Ref::of("sdh:P43")];
    let mut g = InstanceGraph::default();
    let n = rng.gen_range(0..=30);
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    for name in &names {
        let k = rng.gen_range(1..=2);
        let mut classes = BTreeSet::new();
        for _ in 0..k {
            let pool = if profile_classes.is_empty() || rng.gen_bool(0.1) { &all_classes } else { &profile_classes };
            classes.insert((*pool.choose(rng).unwrap()).clone());
        }
        g.entities.insert(name.clone(), classes);
        if rng.gen_bool(0.3) {
            g.years.insert(name.clone(), rng.gen_range(1500..1700));
        }
    }
    if names.is_empty() {
        return g;
    }
    for _ in 0..rng.gen_range(0..=40) {
        let roll: f64 = rng.gen();
        let property = if roll < 0.15 {
            special.choose(rng).unwrap().clone()
        } else if roll < 0.25 || profile_props.is_empty() {
            (*all_props.choose(rng).unwrap()).clone()
        } else {
            (*profile_props.choose(rng).unwrap()).clone()
        };
        let literal_range = raw.properties[&property].range == Range::Literal;
        let object = if (literal_range && rng.gen_bool(0.8)) || rng.gen_bool(0.05) {
            Object::Literal(format!("v{}", rng.gen_range(0..3)))
        } else {
            Object::Entity(names.choose(rng).unwrap().clone())
        };
        let subject = names.choose(rng).unwrap().clone();
        g.statements.insert(Statement { subject, property, object });
    }
    g
}

/// Renders a graph in the `.inst.txt` line format.
pub fn graph_text(g: &InstanceGraph) -> String {
    let mut out = String::new();
    for (e, classes) in &g.entities {
        let cs: Vec<String> = classes.iter().map(ToString::to_string).collect();
        out.push_str(&format!("entity {e} a {}\n", cs.join(", ")));
    }
    for s in &g.statements {
        let o = match &s.object {
            Object::Entity(e) => e.clone(),
            Object::Literal(l) => format!("{l:?}"),
        };
        out.push_str(&format!("stmt {} {} {o}\n", s.subject, s.property));
    }
    for (e, y) in &g.years {
        out.push_str(&format!("year {e} {y}\n"));
    }
    out
}

/// Every class and property of an ecosystem.
pub fn all_refs(raw: &Raw) -> Vec<Ref> {
    raw.classes.keys().chain(raw.properties.keys()).cloned().collect()
}

pub fn random_seeds(rng: &mut ChaCha8Rng, pool: &[Ref], max: usize) -> BTreeSet<Ref> {
    let k = rng.gen_range(0..=max);
    pool.choose_multiple(rng, k).cloned().collect()
}
