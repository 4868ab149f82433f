//! Sparse COVID-19 time-series pipeline without a cluster.
//!
//! * [`ingest`] turns raw global time-series CSVs into the sparse,
//!   key-merged intermediate format.
//! * [`store`] is an embedded wide-column store with bulk import.
//! * [`shell`] speaks the HBase-shell subset used to poke at the store.
//! * [`sql`] maps relational tables onto store tables and runs a small
//!   SELECT/JOIN/WHERE dialect over them.

pub mod ingest;
pub mod shell;
pub mod sql;
pub mod store;

pub use ingest::{DateColumn, RowKey};
pub use sql::{MappedTable, ResultSet, SqlEngine, SqlError, Value};
pub use store::{ColumnCoord, Row, Store, StoreError, TableDescriptor};
