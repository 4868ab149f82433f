use chrono::NaiveDate;

use crate::ingest::DateColumn;
use crate::store::ColumnCoord;

use super::ddl::{
    render_ddl, ColumnDef, ColumnMapping, ColumnType, MappedTable, MappingEntry, RelationalSchema,
    COLUMNS_MAPPING_PROP, KEY_FACTORY_PROP, OUTPUT_TABLE_PROP, TABLE_NAME_PROP,
};
use super::SqlError;

pub const STORAGE_HANDLER_CLASS: &str = "org.apache.hadoop.hive.hbase.HBaseStorageHandler";
pub const KEY_FACTORY_CLASS: &str = "org.apache.hadoop.hive.hbase.SampleHBaseKeyFactory2";

/// The time-series table definition: struct key, `Lat`/`Long` floats and
/// one int column per day in `[start, end]`, all mapped into `family`.
pub fn covid_table(
    table: &str,
    store_table: &str,
    family: &str,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<MappedTable, SqlError> {
    if start > end {
        return Err(SqlError::InvalidDateRange {
            start: start.to_string(),
            end: end.to_string(),
        });
    }
    let cell = |qualifier: String| -> Result<MappingEntry, SqlError> {
        Ok(MappingEntry::Cell(ColumnCoord::new(family, qualifier)?))
    };
    let mut columns = vec![
        ColumnDef {
            name: "Lat".into(),
            ty: ColumnType::Float,
        },
        ColumnDef {
            name: "Long".into(),
            ty: ColumnType::Float,
        },
    ];
    let mut entries = vec![MappingEntry::Key, cell("lt".into())?, cell("lg".into())?];
    for day in DateColumn::range(start.into(), end.into()) {
        columns.push(ColumnDef {
            name: day.relational_name(),
            ty: ColumnType::Int,
        });
        entries.push(cell(day.qualifier())?);
    }
    let mapping = ColumnMapping {
        entries,
        store_table: store_table.to_string(),
    };
    let properties = vec![
        (TABLE_NAME_PROP.to_string(), store_table.to_string()),
        (OUTPUT_TABLE_PROP.to_string(), store_table.to_string()),
        (COLUMNS_MAPPING_PROP.to_string(), mapping.render()),
        (KEY_FACTORY_PROP.to_string(), KEY_FACTORY_CLASS.to_string()),
    ];
    let mut t = MappedTable {
        schema: RelationalSchema {
            table_name: table.to_string(),
            key_column: "key".into(),
            key_fields: vec!["Province_State".into(), "Country_Region".into()],
            columns,
            collection_terminator: '~',
        },
        mapping,
        storage_handler: STORAGE_HANDLER_CLASS.to_string(),
        properties,
        ddl: String::new(),
    };
    t.ddl = render_ddl(&t).trim().to_string();
    Ok(t)
}

/// DDL text for [`covid_table`].
pub fn generate_schema(
    table: &str,
    store_table: &str,
    family: &str,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<String, SqlError> {
    Ok(render_ddl(&covid_table(
        table,
        store_table,
        family,
        start,
        end,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sql::parse_ddl;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn one_day() {
        let t = covid_table("t", "t", "a", d(2020, 3, 31), d(2020, 3, 31)).unwrap();
        assert_eq!(t.schema.columns.len(), 3);
        assert_eq!(t.schema.columns[2].name, "03_31_2020");
        assert_eq!(t.mapping.render(), ":key,a:lt,a:lg,a:d331");
    }

    #[test]
    fn october_qualifier() {
        let t = covid_table("t", "t", "a", d(2020, 9, 30), d(2020, 10, 1)).unwrap();
        assert_eq!(t.mapping.render(), ":key,a:lt,a:lg,a:d930,a:d1001");
    }

    #[test]
    fn reversed_range_fails() {
        assert!(matches!(
            generate_schema("t", "t", "a", d(2020, 4, 1), d(2020, 3, 31)),
            Err(SqlError::InvalidDateRange { .. })
        ));
    }

    #[test]
    fn output_parses_back_to_the_same_table() {
        let text = generate_schema("c", "c_store", "a", d(2020, 1, 22), d(2020, 3, 31)).unwrap();
        let parsed = parse_ddl(&text).unwrap();
        let built = covid_table("c", "c_store", "a", d(2020, 1, 22), d(2020, 3, 31)).unwrap();
        assert_eq!(parsed.schema, built.schema);
        assert_eq!(parsed.mapping, built.mapping);
        assert_eq!(parsed.properties, built.properties);
        assert_eq!(render_ddl(&parsed), text);
    }
}
