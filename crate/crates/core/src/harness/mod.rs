//! Term generation, enumeration, the reference corpus and the property
//! suites built on them.

pub mod corpus;
pub mod enumerate;
pub mod gen;
pub mod suites;

pub use corpus::{corpus, corpus_entry, corpus_expr, corpus_programs, CorpusEntry, CorpusItem};
pub use enumerate::{alpha_key, enumerate_exprs, enumerate_stmts, enumeration_size, TooLarge};
pub use gen::{default_labels, gen_imp_config, gen_many, gen_typed_expr, GenConfig, GenError};
pub use suites::{run_property_suite, suite_names, PropertyReport, SuiteConfig, UnknownSuite};
