//! Shared setup for the benchmarks.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::NaiveDate;

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

/// Headerless sparse text for a series, as fed to the bulk loader.
pub fn sparse_text(series: &str) -> String {
    let formatted = sparsecol::ingest::format_file(&raw(series), false).expect("fixture formats");
    formatted.text().to_string()
}

/// Import settings the load scripts use.
pub fn import_spec() -> ImportSpec {
    let table = sparsecol::sql::covid_table("t", "t", "a", chrono_day(1, 22), chrono_day(3, 31))
        .expect("valid range");
    ImportSpec::new(',', table.mapping.import_columns())
        .expect("one row key")
        .with_skip_bad_lines(true)
        .with_skip_empty_columns(true)
}

fn chrono_day(m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, m, d).expect("valid day")
}

/// A store with both series loaded and both tables mapped.
pub fn loaded_engine() -> (tempfile::TempDir, SqlEngine) {
    let dir = tempfile::tempdir().expect("temp dir");
    let store = Arc::new(Store::open(dir.path().join("store")).expect("store opens"));
    let spec = import_spec();
    for (series, table) in [("confirmed", CONFIRMED), ("deaths", DEATHS)] {
        store.create_table(table, ["a"]).expect("create");
        store
            .import_text(table, &sparse_text(series), &spec)
            .expect("import");
    }
    let engine = SqlEngine::open(store).expect("catalog opens");
    for table in [CONFIRMED, DEATHS] {
        let ddl = sparsecol::sql::generate_schema(
            table,
            table,
            "a",
            chrono_day(1, 22),
            chrono_day(3, 31),
        )
        .expect("ddl");
        engine.execute(&ddl).expect("create mapped table");
    }
    (dir, engine)
}
