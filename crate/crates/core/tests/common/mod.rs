#![allow(dead_code)]

pub mod oracle;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use sparsecol::store::ImportSpec;
use sparsecol::{SqlEngine, Store};

pub const CONFIRMED: &str = "confirmed_covid19_cases";
pub const DEATHS: &str = "deaths_covid19_cases";

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn raw(series: &str) -> PathBuf {
    fixtures().join(format!("raw/time_series_covid19_{series}_global.csv"))
}

pub fn listing(name: &str) -> String {
    std::fs::read_to_string(fixtures().join("listings").join(name)).unwrap()
}

/// The `-Dimporttsv.columns=` value of a load script.
pub fn import_columns(script: &str) -> String {
    let arg = script
        .split_whitespace()
        .find_map(|w| w.strip_prefix("-Dimporttsv.columns="))
        .expect("load script names its columns");
    arg.to_string()
}

/// Formats both raw series into `work`, creates the two tables, and
/// bulk-loads them with the column lists from the load scripts.
pub fn loaded_store(work: &Path) -> Arc<Store> {
    let store = Arc::new(Store::open(work.join("store")).unwrap());
    for (series, table, script) in [
        ("confirmed", CONFIRMED, "load_confirmed.sh"),
        ("deaths", DEATHS, "load_deaths.sh"),
    ] {
        let out = sparsecol::ingest::write_variants(&raw(series), &work.join("data")).unwrap();
        assert!(out.errors.is_empty(), "{:?}", out.errors);
        store.create_table(table, ["a"]).unwrap();
        let cols = ImportSpec::parse_columns(&import_columns(&listing(script))).unwrap();
        let spec = ImportSpec::new(',', cols)
            .unwrap()
            .with_skip_bad_lines(true)
            .with_skip_empty_columns(true);
        let report = store.import_tsv(table, &out.paths.sparse, &spec).unwrap();
        assert_eq!(report.skipped, 0, "{:?}", report.errors);
    }
    store.flush().unwrap();
    store
}

/// A loaded store plus both listing DDLs applied.
pub fn loaded_engine(work: &Path) -> SqlEngine {
    let engine = SqlEngine::open(loaded_store(work)).unwrap();
    for file in ["hive_create_confirmed.hql", "hive_create_deaths.hql"] {
        for stmt in sparsecol::sql::split_statements(&listing(file)) {
            engine.execute(&stmt).unwrap();
        }
    }
    engine
}
