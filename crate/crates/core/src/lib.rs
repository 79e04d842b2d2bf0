//! Toolkit for layered ontology ecosystems built around a core ontology and
//! its extensions.
//!
//! The crate resolves multi-namespace class and property hierarchies, runs
//! foundational-analysis lints (OntoClean meta-properties, top-category
//! partition, abstraction-layer discipline), builds and checks application
//! profiles, validates instance graphs against them, and reads and writes the
//! canonical JSON interchange format and RDFS/OWL Turtle.
//!
//! ```
//! use ontoeco::{fixtures, checks, hierarchy, model::Ref};
//!
//! let eco = fixtures::ecosystem(&["all"]).unwrap();
//! let index = eco.resolve().unwrap();
//! assert!(hierarchy::is_subclass_of(&index, &Ref::of("sdh:C4"), &Ref::of("sdh:C1")).unwrap());
//! let report = checks::run_all_checks(&eco, &index, &checks::CheckConfig::default()).unwrap();
//! assert_eq!(checks::error_count(&report), 0);
//! ```

pub mod checks;
pub mod cli;
pub mod diagnostics;
pub mod fixtures;
pub mod hierarchy;
pub mod ingest;
pub mod instances;
pub mod model;
pub mod profiles;
