//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use ontoeco::checks::{run_all_checks, CheckConfig};
use ontoeco::diagnostics::{error_count, Diagnostic};
use ontoeco::fixtures::{self, Provenance};
use ontoeco::hierarchy::{ancestors, inherited_properties, is_subclass_of, top_category_of};
use ontoeco::ingest::{
    export_turtle, import_turtle, parse_ecosystem_document, serialize_ecosystem_document, serialize_namespaces, Dialect,
};
use ontoeco::instances::{parse_instance_graph, validate_instances};
use ontoeco::model::{Namespace, Range, Ref, ResolvedIndex};
use ontoeco::profiles::{build_profile_closure, check_profile, Profile};
use rand::Rng;
use sha2::{Digest, Sha256};
use support::{check_golden, corpus, findings, random_ecosystem, random_graph, random_seeds, rng, Raw};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lint(names: &[&str]) -> Vec<Diagnostic> {
    let eco = fixtures::ecosystem(names).unwrap();
    let index = eco.resolve().unwrap();
    run_all_checks(&eco, &index, &CheckConfig::default()).unwrap()
}

fn fixture_fidelity() -> Outcome {
    let started = Instant::now();
    let (code, _, err) = support::cli(&["lint", "--builtin", "all"]);
    let elapsed = started.elapsed();
    ensure(code == 0, || format!("lint --builtin all exited {code}: {err}"))?;
    ensure(elapsed.as_secs_f64() < 1.0, || format!("lint took {elapsed:?}"))?;
    let errors = error_count(&lint(&["all"]));
    ensure(errors == 0, || format!("{errors} error(s)"))?;

    let index = fixtures::ecosystem(&["all"]).unwrap().resolve().unwrap();
    let edges = [
        ("sdh:C1", "crm:E2"),
        ("sdh:C4", "sdh:C1"),
        ("sdh:C13", "crm:E26"),
        ("sdh-so:C13", "sdh-so:C27"),
        ("crm:E52", "sdh:C5"),
        ("crm:E53", "sdh:C5"),
        ("crm:E54", "sdh:C5"),
        ("crm:E92", "sdh:C5"),
    ];
    for (sub, sup) in edges {
        let (sub, sup) = (Ref::of(sub), Ref::of(sup));
        ensure(index.parents(&sub).is_some_and(|p| p.contains(&sup)), || format!("missing edge {sub} < {sup}"))?;
        let note = fixtures::edge_note(&sub, &sup).ok_or_else(|| format!("no provenance note for {sub} < {sup}"))?;
        ensure(note.provenance == Provenance::Documented, || format!("{sub} < {sup} is not marked documented"))?;
    }
    Ok(format!("0 errors in {} ms; {} documented edges present", elapsed.as_millis(), edges.len()))
}

fn critique_reproduction() -> Outcome {
    let legacy = lint(&["crm-core", "legacy-crm"]);
    let errors: Vec<String> =
        legacy.iter().filter(|d| d.severity == ontoeco::diagnostics::Severity::Error).map(ToString::to_string).collect();
    ensure(errors.len() == 1, || format!("legacy errors: {errors:?}"))?;
    ensure(errors[0].starts_with("OC1 error crm:E24, crm:E72:"), || format!("legacy error: {}", errors[0]))?;

    let pcp = lint(&["pcp", "crm-core", "sdhss"]);
    let ea1 = pcp
        .iter()
        .filter(|d| d.code == "EA1" && d.subjects.iter().any(|s| s.to_string() == "pcp:Lecturer"))
        .count();
    let ld1 = pcp.iter().filter(|d| d.code == "LD1").count();
    ensure(ea1 >= 1, || "no EA1 on pcp:Lecturer".into())?;
    ensure(ld1 >= 1, || "no LD1 in pcp".into())?;

    for (stem, files) in [
        ("legacy", &["legacy.onto.json", "crm-core.onto.json"][..]),
        ("pcp", &["pcp.onto.json", "crm-core.onto.json", "sdhss.onto.json"]),
    ] {
        let paths: Vec<String> = files.iter().map(|f| corpus(f).to_string_lossy().into_owned()).collect();
        let mut args = vec!["lint"];
        args.extend(paths.iter().map(String::as_str));
        let (_, _, text) = support::cli(&args);
        check_golden(&format!("golden/{stem}.lint.txt"), &text)?;
        args.extend(["--format", "json"]);
        let (_, json, _) = support::cli(&args);
        check_golden(&format!("golden/{stem}.lint.json"), &json)?;
    }
    Ok(format!("legacy: 1 OC1 (crm:E24, crm:E72); pcp: {ea1} EA1, {ld1} LD1; goldens identical"))
}

fn oracle_equivalence() -> Outcome {
    let mut compared = 0usize;
    for seed in 0..200u64 {
        let eco = random_ecosystem(&mut rng(seed));
        let index = eco.resolve().map_err(|e| format!("seed {seed}: generated ecosystem does not resolve: {e}"))?;
        let raw = Raw::new(&eco);
        let anc: BTreeMap<Ref, BTreeSet<Ref>> = raw.classes.keys().map(|c| (c.clone(), raw.ancestors(c))).collect();
        for c in raw.classes.keys() {
            ensure(ancestors(&index, c).unwrap() == anc[c], || format!("seed {seed}: ancestors of {c}"))?;
            for d in raw.classes.keys() {
                let expected = c == d || anc[c].contains(d);
                ensure(is_subclass_of(&index, c, d).unwrap() == expected, || format!("seed {seed}: {c} < {d}"))?;
                compared += 1;
            }
            let inherited: Vec<(Ref, usize)> =
                inherited_properties(&index, c).unwrap().into_iter().map(|p| (p.property, p.depth)).collect();
            ensure(inherited == raw.inherited(c), || format!("seed {seed}: inherited properties of {c}"))?;
            ensure(top_category_of(&index, c).unwrap() == raw.top(c), || format!("seed {seed}: top category of {c}"))?;
        }
        let actual = findings(&run_all_checks(&eco, &index, &CheckConfig::default()).unwrap());
        let expected = raw.expected_checks();
        if actual != expected {
            let missing: Vec<_> = expected.iter().filter(|f| !actual.contains(f)).collect();
            let extra: Vec<_> = actual.iter().filter(|f| !expected.contains(f)).collect();
            return Err(format!("seed {seed}: checks differ; missing {missing:?}, extra {extra:?}"));
        }
    }
    Ok(format!("200 ecosystems, {compared} subsumption pairs, 0 discrepancies"))
}

fn sha(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

fn edge_set(ns: &Namespace) -> BTreeSet<(Ref, Ref)> {
    let mut edges: BTreeSet<(Ref, Ref)> =
        ns.classes.iter().flat_map(|c| c.superclasses.iter().map(|s| (c.id.clone(), s.clone()))).collect();
    edges.extend(ns.alignments.iter().map(|a| (a.class.clone(), a.superclass.clone())));
    edges
}

fn same_content(original: &Namespace, imported: &Namespace) -> Result<(), String> {
    let classes = |ns: &Namespace| -> BTreeMap<Ref, (String, String)> {
        ns.classes.iter().map(|c| (c.id.clone(), (c.label.clone(), c.scope_note.clone()))).collect()
    };
    type PropView = (String, Ref, Range, BTreeSet<Ref>);
    let props = |ns: &Namespace| -> BTreeMap<Ref, PropView> {
        ns.properties
            .iter()
            .map(|p| (p.id.clone(), (p.label.clone(), p.domain.clone(), p.range.clone(), p.superproperties.iter().cloned().collect())))
            .collect()
    };
    let p = &original.prefix;
    ensure(classes(original) == classes(imported), || format!("{p}: classes, labels or scope notes changed"))?;
    ensure(props(original) == props(imported), || format!("{p}: properties changed"))?;
    ensure(edge_set(original) == edge_set(imported), || format!("{p}: subclass edges changed"))?;
    ensure(original.version == imported.version && original.base_iri == imported.base_iri, || format!("{p}: header changed"))
}

fn round_trips() -> Outcome {
    for file in ["crm-core.onto.json", "sdhss.onto.json", "sdh-so.onto.json", "pcp.onto.json", "legacy.onto.json"] {
        let text = std::fs::read_to_string(corpus(file)).map_err(|e| e.to_string())?;
        let eco = parse_ecosystem_document(text.as_bytes()).map_err(|e| format!("{file}: {e}"))?;
        let again = serialize_ecosystem_document(&eco);
        ensure(again == text, || format!("{file}: serialize(parse(d)) differs from d"))?;
        ensure(parse_ecosystem_document(again.as_bytes()).ok() == Some(eco), || format!("{file}: parse not stable"))?;
    }

    let eco = fixtures::ecosystem(&["all", "legacy-crm", "pcp"]).unwrap();
    let index = eco.resolve().unwrap();
    let mut namespaces = 0;
    for ns in eco.namespaces() {
        let ttl = export_turtle(&index, Dialect::Rdfs, std::slice::from_ref(&ns.prefix)).map_err(|e| e.to_string())?;
        let imported = import_turtle(&ttl, &ns.prefix, ns.level).map_err(|e| format!("{}: {e}", ns.prefix))?;
        ensure(imported.skipped.is_empty(), || format!("{}: skipped {:?}", ns.prefix, imported.skipped))?;
        same_content(ns, &imported.namespace)?;
        namespaces += 1;
    }

    let all = fixtures::ecosystem(&["all", "pcp"]).unwrap();
    let prefixes: Vec<String> = all.namespaces().iter().map(|n| n.prefix.clone()).collect();
    let idx = all.resolve().unwrap();
    let run = || {
        let doc = serialize_ecosystem_document(&all);
        let rdfs = export_turtle(&idx, Dialect::Rdfs, &prefixes).unwrap();
        let owl = export_turtle(&idx, Dialect::OwlDl, &prefixes).unwrap();
        (sha(&doc), sha(&rdfs), sha(&owl))
    };
    ensure(run() == run(), || "serializer output differs between runs".into())?;
    let mut shuffled: Vec<Namespace> = all.namespaces().to_vec();
    shuffled.reverse();
    for ns in &mut shuffled {
        ns.classes.reverse();
    }
    ensure(serialize_namespaces(&shuffled) == serialize_ecosystem_document(&all), || "permutation changes bytes".into())?;
    check_golden("golden/all+pcp.onto.json.sha256", &format!("{}  all+pcp.onto.json\n", run().0))?;
    Ok(format!("5 documents fixed; {namespaces} namespaces survive Turtle; checksums stable"))
}

fn profile_closure() -> Outcome {
    let eco = fixtures::ecosystem(&["all"]).unwrap();
    let index = eco.resolve().unwrap();
    let raw = Raw::new(&eco);
    let pool = support::all_refs(&raw);
    let mut r = rng(5);
    let mut removals = 0;
    for i in 0..100 {
        let seeds = random_seeds(&mut r, &pool, 6);
        let profile = build_profile_closure(&index, &seeds, "p").map_err(|e| e.to_string())?;
        let members: BTreeSet<Ref> = profile.members().cloned().collect();
        ensure(members == raw.closure(&seeds), || format!("set {i}: closure differs from fixed-point oracle"))?;
        let pf1 = |p: &Profile| check_profile(&index, p).iter().filter(|d| d.code == "PF1").count();
        ensure(pf1(&profile) == 0, || format!("set {i}: PF1 on a built closure"))?;
        for m in members.iter().filter(|m| !seeds.contains(*m)) {
            let mut smaller = profile.clone();
            smaller.classes.remove(m);
            smaller.properties.remove(m);
            ensure(pf1(&smaller) >= 1, || format!("set {i}: removing {m} is not detected"))?;
            removals += 1;
        }
    }
    for i in 0..100 {
        let big = random_seeds(&mut r, &pool, 8);
        let small: BTreeSet<Ref> = big.iter().filter(|_| r.gen_bool(0.5)).cloned().collect();
        let a = build_profile_closure(&index, &small, "a").unwrap();
        let b = build_profile_closure(&index, &big, "b").unwrap();
        let (a, b): (BTreeSet<&Ref>, BTreeSet<&Ref>) = (a.members().collect(), b.members().collect());
        ensure(a.is_subset(&b), || format!("pair {i}: monotonicity violated"))?;
    }
    Ok(format!("100 closures clean; {removals} single removals all detected; 100 monotone pairs"))
}

fn worked_examples(index: &ResolvedIndex) -> Result<(), String> {
    let cases: [(&[&str], &str, &[&str]); 5] = [
        (&["crm:P11"], "entity event1 a crm:E5\nentity person1 a crm:E29\nstmt event1 crm:P11 person1\n", &[]),
        (
            &["sdh:P8", "sdh:C7"],
            "entity q1 a sdh:C7\nentity e1 a crm:E5\nentity e2 a crm:E5\nstmt e1 sdh:P8 q1\nstmt e2 sdh:P8 q1\n",
            &["IV6 q1, sdh:P8"],
        ),
        (
            &["crm:P11", "crm:E18"],
            "entity thing1 a crm:E18\nentity person1 a crm:E29\nstmt thing1 crm:P11 person1\n",
            &["IV3 thing1, crm:P11, person1"],
        ),
        (&["sdh:P43", "crm:E5"], "entity i1 a sdh:C10\nentity e1 a crm:E5\nstmt i1 sdh:P43 e1\n", &[]),
        (
            &["sdh:P8", "sdh:P9"],
            "entity q a sdh:C1\nentity s a crm:E5\nentity e a crm:E5\nstmt s sdh:P8 q\nstmt e sdh:P9 q\nyear s 1620\nyear e 1600\n",
            &["IV7 q, s, e"],
        ),
    ];
    for (n, (seeds, text, expected)) in cases.iter().enumerate() {
        let seeds: Vec<Ref> = seeds.iter().map(|s| Ref::of(s)).collect();
        let profile = build_profile_closure(index, &seeds, "example").unwrap();
        let graph = parse_instance_graph(text.as_bytes()).map_err(|e| e.to_string())?;
        let got: Vec<String> = validate_instances(index, &profile, &graph)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|d| {
                let subjects: Vec<String> = d.subjects.iter().map(ToString::to_string).collect();
                format!("{} {}", d.code, subjects.join(", "))
            })
            .collect();
        ensure(got == *expected, || format!("worked example {}: got {got:?}, expected {expected:?}", n + 1))?;
    }
    Ok(())
}

fn instance_validation() -> Outcome {
    let eco = fixtures::ecosystem(&["all"]).unwrap();
    let index = eco.resolve().unwrap();
    let raw = Raw::new(&eco);
    worked_examples(&index)?;
    let pool = support::all_refs(&raw);
    let mut r = rng(6);
    let mut total = 0;
    for i in 0..100 {
        let seeds = random_seeds(&mut r, &pool, 5);
        let mut profile = build_profile_closure(&index, &seeds, "random").unwrap();
        let props: Vec<Ref> = profile.properties.iter().cloned().collect();
        for p in props {
            if r.gen_bool(0.4) {
                profile.overrides.insert(p, support::random_quantifier(&mut r));
            }
        }
        let graph = random_graph(&mut r, &raw, &profile);
        let reparsed = parse_instance_graph(support::graph_text(&graph).as_bytes()).map_err(|e| e.to_string())?;
        ensure(reparsed == graph, || format!("graph {i}: line format does not round-trip"))?;
        let actual = findings(&validate_instances(&index, &profile, &graph).map_err(|e| e.to_string())?);
        let expected = raw.expected_instances(&profile, &graph);
        if actual != expected {
            let missing: Vec<_> = expected.iter().filter(|f| !actual.contains(f)).collect();
            let extra: Vec<_> = actual.iter().filter(|f| !expected.contains(f)).collect();
            return Err(format!("graph {i}: missing {missing:?}, extra {extra:?}"));
        }
        total += actual.len();
    }
    Ok(format!("5 worked examples exact; 100 random graphs agree ({total} diagnostics)"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn bin(args: &[&str], cwd: &Path) -> Run {
    let output = Command::new(env!("CARGO_BIN_EXE_ontoeco"))
        .args(args)
        .current_dir(cwd)
        .env("ONTO_NO_COLOR", "1")
        .output()
        .expect("binary runs");
    Run {
        code: output.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&output.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
    }
}

fn codes_from_text(text: &str) -> Vec<String> {
    let mut codes: Vec<String> = text
        .lines()
        .filter(|l| l.split(' ').nth(1).is_some_and(|s| ["error", "warning", "info"].contains(&s)))
        .map(|l| l.split(' ').next().unwrap().to_string())
        .collect();
    codes.sort();
    codes
}

fn codes_from_json(text: &str) -> Result<Vec<String>, String> {
    let records: Vec<ontoeco::diagnostics::DiagnosticRecord> =
        serde_json::from_str(text).map_err(|e| format!("JSON report does not parse: {e}"))?;
    let mut codes: Vec<String> = records.into_iter().map(|r| r.code).collect();
    codes.sort();
    Ok(codes)
}

fn cli_contract() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let c = |f: &str| corpus(f).to_string_lossy().into_owned();
    let (crm, sdh, so, pcp, legacy) =
        (c("crm-core.onto.json"), c("sdhss.onto.json"), c("sdh-so.onto.json"), c("pcp.onto.json"), c("legacy.onto.json"));
    std::fs::write(d.join("broken.onto.json"), "{\"namespaces\": [").unwrap();
    std::fs::write(d.join("quiet.json"), r#"{"enabled": ["participation-anchor"]}"#).unwrap();
    std::fs::write(d.join("badcheck.json"), r#"{"enabled": ["nope"]}"#).unwrap();
    std::fs::write(d.join("clean.inst.txt"), "entity ev a crm:E5\nentity p a crm:E29\nstmt ev crm:P11 p\n").unwrap();
    std::fs::write(d.join("bad.inst.txt"), "entity t a crm:E18\nentity p a crm:E29\nstmt t crm:P11 p\n").unwrap();
    std::fs::write(d.join("garbled.inst.txt"), "entity t crm:E18\n").unwrap();
    std::fs::write(d.join("hole.profile.json"), r#"{"name": "h", "pins": {"crm": "7.1.2"}, "properties": ["crm:P11"]}"#).unwrap();

    let matrix: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["lint", "--builtin", "all"], 0, "clean fixture"),
        (vec!["lint", &crm, &sdh, &so], 0, "clean corpus"),
        (vec!["lint", &legacy, &crm], 1, "legacy critique"),
        (vec!["lint", &pcp, &crm, &sdh], 1, "pcp critique"),
        (vec!["lint", &pcp, &crm, &sdh, "--config", "quiet.json"], 0, "warnings only"),
        (vec!["lint", &pcp, &crm, &sdh, "--config", "quiet.json", "--strict"], 1, "strict warnings"),
        (vec!["lint", "nonexistent.json"], 2, "missing file"),
        (vec!["lint", "broken.onto.json"], 2, "malformed document"),
        (vec!["lint", &sdh], 2, "unresolvable ecosystem"),
        (vec!["lint", "--builtin", "all", "--config", "badcheck.json"], 2, "bad config"),
        (vec!["lint"], 2, "no input"),
        (vec!["frobnicate"], 2, "unknown subcommand"),
        (vec!["lint", "--builtin", "all", "--format", "yaml"], 2, "bad format"),
        (vec!["tree", &crm, "--ns", "crm"], 0, "tree"),
        (vec!["tree", &crm, "--ns", "zzz"], 2, "tree unknown prefix"),
        (vec!["export", &crm, &sdh, "--dialect", "rdfs", "--ns", "sdh", "-o", "sdh.ttl"], 0, "export"),
        (vec!["export", &crm, "--dialect", "owl", "--ns", "crm", "-o", "crm.owl.ttl"], 0, "export owl"),
        (vec!["import", "sdh.ttl", "--prefix", "sdh", "--level", "core-extension", "-o", "sdh.onto.json"], 0, "import"),
        (vec!["import", "broken.onto.json", "--prefix", "x", "--level", "core", "-o", "x.json"], 2, "import garbage"),
        (vec!["profile", "build", &crm, &sdh, "--seed", "crm:P11,sdh:P8", "--name", "demo", "-o", "demo.profile.json"], 0, "profile build"),
        (vec!["profile", "build", &crm, "--seed", "crm:E404", "--name", "x", "-o", "x.profile.json"], 2, "profile unknown seed"),
        (vec!["profile", "check", "demo.profile.json", &crm, &sdh], 0, "profile check"),
        (vec!["profile", "check", "hole.profile.json", &crm], 1, "profile hole"),
        (vec!["validate", "clean.inst.txt", "--profile", "demo.profile.json", &crm, &sdh], 0, "validate clean"),
        (vec!["validate", "bad.inst.txt", "--profile", "demo.profile.json", &crm, &sdh], 1, "validate violation"),
        (vec!["validate", "garbled.inst.txt", "--profile", "demo.profile.json", &crm, &sdh], 2, "validate malformed"),
        (vec!["validate", "clean.inst.txt", "--profile", "hole.profile.json", &crm], 2, "validate invalid profile"),
        (vec!["diff", &crm, &legacy, "--ns", "crm"], 0, "diff"),
        (vec!["diff", &crm, &legacy, "--ns", "sdh"], 2, "diff unknown namespace"),
    ];
    for (args, expected, label) in &matrix {
        let run = bin(args, d);
        ensure(run.code == *expected, || format!("{label}: exit {} (expected {expected}); stderr: {}", run.code, run.stderr))?;
    }
    ensure(d.join("sdh.onto.json").exists() && d.join("crm.owl.ttl").exists(), || "outputs not written".into())?;

    let reports: Vec<Vec<&str>> = vec![
        vec!["lint", "--builtin", "all"],
        vec!["lint", &legacy, &crm],
        vec!["lint", &pcp, &crm, &sdh],
        vec!["profile", "check", "hole.profile.json", &crm],
        vec!["validate", "bad.inst.txt", "--profile", "demo.profile.json", &crm, &sdh],
    ];
    for args in &reports {
        let text = bin(args, d);
        let mut json_args = args.clone();
        json_args.extend(["--format", "json"]);
        let json = bin(&json_args, d);
        ensure(text.code == json.code, || format!("{args:?}: exit differs between formats"))?;
        ensure(text.stdout.is_empty(), || format!("{args:?}: text mode wrote to stdout"))?;
        let (a, b) = (codes_from_text(&text.stderr), codes_from_json(&json.stdout)?);
        ensure(a == b, || format!("{args:?}: text codes {a:?} vs JSON codes {b:?}"))?;
    }
    Ok(format!("{} invocations with expected exit status; {} text/JSON pairs agree", matrix.len(), reports.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("fixture fidelity", fixture_fidelity),
        ("critique reproduction", critique_reproduction),
        ("oracle equivalence", oracle_equivalence),
        ("round-trips", round_trips),
        ("profile closure", profile_closure),
        ("instance validation", instance_validation),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("criterion {} {name}: PASS ({detail})", n + 1),
            Ok(Err(reason)) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({reason})", n + 1);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {} {name}: FAIL (panicked)", n + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
