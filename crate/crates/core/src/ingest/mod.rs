//! Raw time-series CSV to sparse, key-merged, date-normalized CSV.
//!
//! Input is the global time-series layout: `Province/State`,
//! `Country/Region`, `Lat`, `Long`, then one `m/d/yy` column per day. Each
//! data row becomes one output line whose first field is the composite
//! [`RowKey`], followed by the coordinates and the daily counts with `0` and
//! empty cells blanked out.

mod date;
mod key;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use date::{normalize_date, DateColumn};
pub use key::{build_row_key, RowKey, KEY_SEPARATOR};

/// Columns before the first date column.
const LEADING_COLUMNS: usize = 4;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("input has no header line")]
    MissingHeader,
    #[error("header has {0} columns, need at least 5")]
    ShortHeader(usize),
    #[error("malformed date in header: {0:?}")]
    BadDate(String),
    #[error("invalid record: {0}")]
    InvalidRecord(String),
}

/// A source row after quote-aware splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub province_state: String,
    pub country_region: String,
    pub lat: String,
    pub long: String,
    pub values: Vec<String>,
}

/// A row in the sparse intermediate format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormattedRecord {
    pub row_key: RowKey,
    pub lat: String,
    pub long: String,
    /// One slot per date column; `None` where the source held `0` or nothing.
    pub values: Vec<Option<String>>,
}

impl FormattedRecord {
    /// Comma-joined output line without the terminating newline.
    pub fn to_line(&self) -> String {
        let mut line = format!("{},{},{}", self.row_key, self.lat, self.long);
        for v in &self.values {
            line.push(',');
            if let Some(v) = v {
                line.push_str(v);
            }
        }
        line
    }
}

/// A data row that could not be formatted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// 1-based line number in the source file.
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct FormattedFile {
    pub dates: Vec<DateColumn>,
    pub header_line: String,
    pub records: Vec<FormattedRecord>,
    pub errors: Vec<RowError>,
    text: String,
}

impl FormattedFile {
    /// Output text; every line ends in `\n`.
    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Strips `"` and `*`, and turns each remaining comma into `-`, swallowing
/// one space that follows it (`Korea, South` becomes `Korea-South`).
pub fn sanitize_field(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars().filter(|c| *c != '"' && *c != '*').peekable();
    while let Some(c) = chars.next() {
        if c == ',' {
            out.push('-');
            if chars.peek() == Some(&' ') {
                chars.next();
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Blanks out zero and empty daily cells.
pub fn sparsify<S: AsRef<str>>(values: &[S]) -> Vec<Option<String>> {
    values
        .iter()
        .map(|v| match v.as_ref() {
            "" | "0" => None,
            other => Some(other.to_string()),
        })
        .collect()
}

/// Formats one sanitized-or-not raw row.
pub fn format_record(raw: &RawRecord) -> Result<FormattedRecord, IngestError> {
    let row_key = build_row_key(
        &sanitize_field(&raw.province_state),
        &sanitize_field(&raw.country_region),
    )?;
    let cleaned: Vec<String> = raw.values.iter().map(|v| sanitize_field(v)).collect();
    Ok(FormattedRecord {
        row_key,
        lat: sanitize_field(&raw.lat),
        long: sanitize_field(&raw.long),
        values: sparsify(&cleaned),
    })
}

pub fn format_file(path: &Path, include_header: bool) -> Result<FormattedFile, IngestError> {
    let file = fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    format_reader(file, include_header)
}

/// Streams a CSV source through the formatter. Row-level problems are
/// collected in [`FormattedFile::errors`]; only header problems abort.
pub fn format_reader<R: Read>(
    reader: R,
    include_header: bool,
) -> Result<FormattedFile, IngestError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut rows = csv.records();

    let header = rows.next().ok_or(IngestError::MissingHeader)??;
    if header.len() <= LEADING_COLUMNS {
        return Err(IngestError::ShortHeader(header.len()));
    }
    let dates = header
        .iter()
        .skip(LEADING_COLUMNS)
        .map(normalize_date)
        .collect::<Result<Vec<_>, _>>()?;

    let mut header_fields = vec![
        format!(
            "{}{KEY_SEPARATOR}{}",
            sanitize_field(&header[0]),
            sanitize_field(&header[1])
        ),
        sanitize_field(&header[2]),
        sanitize_field(&header[3]),
    ];
    header_fields.extend(dates.iter().map(DateColumn::header_form));
    let header_line = header_fields.join(",");

    let mut text = String::new();
    if include_header {
        text.push_str(&header_line);
        text.push('\n');
    }
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for row in rows {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != header.len() {
            errors.push(RowError {
                line,
                message: format!("expected {} fields, found {}", header.len(), row.len()),
            });
            continue;
        }
        let raw = RawRecord {
            province_state: row[0].to_string(),
            country_region: row[1].to_string(),
            lat: row[2].to_string(),
            long: row[3].to_string(),
            values: row
                .iter()
                .skip(LEADING_COLUMNS)
                .map(str::to_string)
                .collect(),
        };
        match format_record(&raw) {
            Ok(rec) => {
                text.push_str(&rec.to_line());
                text.push('\n');
                records.push(rec);
            }
            Err(e) => errors.push(RowError {
                line,
                message: e.to_string(),
            }),
        }
    }

    Ok(FormattedFile {
        dates,
        header_line,
        records,
        errors,
        text,
    })
}

/// Paths of the two formatter outputs for one source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    /// `<stem>-sparse-with-formatted-column-names.csv`
    pub with_header: PathBuf,
    /// `<stem>-sparse.csv`, the headerless variant fed to the bulk loader.
    pub sparse: PathBuf,
}

impl OutputPaths {
    pub fn for_input(input: &Path, out_dir: &Path) -> Self {
        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self {
            with_header: out_dir.join(format!("{stem}-sparse-with-formatted-column-names.csv")),
            sparse: out_dir.join(format!("{stem}-sparse.csv")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IngestOutcome {
    pub paths: OutputPaths,
    pub rows: usize,
    pub errors: Vec<RowError>,
}

/// Formats `input` and writes both output variants into `out_dir`,
/// creating the directory if needed.
pub fn write_variants(input: &Path, out_dir: &Path) -> Result<IngestOutcome, IngestError> {
    let formatted = format_file(input, true)?;
    fs::create_dir_all(out_dir).map_err(|source| IngestError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let paths = OutputPaths::for_input(input, out_dir);
    let body = &formatted.text[formatted.header_line.len() + 1..];
    let write = |path: &Path, contents: &str| {
        fs::write(path, contents).map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })
    };
    write(&paths.with_header, formatted.text())?;
    write(&paths.sparse, body)?;
    Ok(IngestOutcome {
        paths,
        rows: formatted.records.len(),
        errors: formatted.errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sanitize_examples() {
        assert_eq!(sanitize_field("Korea, South"), "Korea-South");
        assert_eq!(sanitize_field("Taiwan*"), "Taiwan");
        assert_eq!(sanitize_field("Morocco"), "Morocco");
        assert_eq!(
            sanitize_field("Bonaire, Sint Eustatius and Saba"),
            "Bonaire-Sint Eustatius and Saba"
        );
        assert_eq!(sanitize_field("a,b"), "a-b");
        assert_eq!(sanitize_field("\"x\""), "x");
        assert_eq!(sanitize_field(" lead, "), " lead-");
    }

    #[test]
    fn sparsify_examples() {
        assert_eq!(
            sparsify(&["0", "0", "1", "2"]),
            vec![None, None, Some("1".into()), Some("2".into())]
        );
        assert_eq!(
            sparsify(&["", "5", "0"]),
            vec![None, Some("5".into()), None]
        );
        assert_eq!(
            sparsify(&["00", "x"]),
            vec![Some("00".into()), Some("x".into())]
        );
    }

    const HEADER: &str = "Province/State,Country/Region,Lat,Long,1/22/20,1/23/20,1/24/20\n";

    #[test]
    fn formats_rows_and_header() {
        let input = format!(
            "{HEADER},Morocco,31.7917,-7.0926,0,0,1\n,\"Korea, South\",36.0,128.0,1,0,2\nBritish Columbia,Canada,49.2827,-123.1207,,3,0\n"
        );
        let out = format_reader(input.as_bytes(), true).unwrap();
        assert!(out.errors.is_empty());
        assert_eq!(
            out.text(),
            "Province/State~Country/Region,Lat,Long,01/22/2020,01/23/2020,01/24/2020\n\
             ~Morocco,31.7917,-7.0926,,,1\n\
             ~Korea-South,36.0,128.0,1,,2\n\
             British Columbia~Canada,49.2827,-123.1207,,3,\n"
        );
        let headerless = format_reader(input.as_bytes(), false).unwrap();
        assert_eq!(headerless.text(), &out.text()[out.header_line.len() + 1..]);
    }

    #[test]
    fn coordinates_are_not_sparsified() {
        let input = format!("{HEADER}Diamond Princess,Canada,0,0,0,0,4\n");
        let out = format_reader(input.as_bytes(), false).unwrap();
        assert_eq!(out.text(), "Diamond Princess~Canada,0,0,,,4\n");
    }

    #[test]
    fn empty_body_yields_no_lines() {
        let out = format_reader(HEADER.as_bytes(), false).unwrap();
        assert_eq!(out.text(), "");
        assert!(out.records.is_empty());
        let out = format_reader(HEADER.as_bytes(), true).unwrap();
        assert_eq!(out.text().lines().count(), 1);
    }

    #[test]
    fn row_errors_are_collected_with_line_numbers() {
        let input = format!("{HEADER},Morocco,1,2,0\n,,1,2,0,0,0\n,Spain,40.0,-4.0,0,1,2\n");
        let out = format_reader(input.as_bytes(), false).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.errors.len(), 2);
        assert_eq!(out.errors[0].line, 2);
        assert!(out.errors[0].message.contains("expected 7 fields, found 5"));
        assert_eq!(out.errors[1].line, 3);
        assert_eq!(out.text(), "~Spain,40.0,-4.0,,1,2\n");
    }

    #[test]
    fn header_problems_abort() {
        assert!(matches!(
            format_reader("".as_bytes(), true),
            Err(IngestError::MissingHeader)
        ));
        assert!(matches!(
            format_reader("a,b,c,d\n".as_bytes(), true),
            Err(IngestError::ShortHeader(4))
        ));
        let err = format_reader("a,b,c,d,3/x/20\n".as_bytes(), true).unwrap_err();
        assert!(err.to_string().contains("3/x/20"));
    }

    #[test]
    fn output_names_follow_the_stem() {
        let p = OutputPaths::for_input(
            Path::new("/in/time_series_covid19_deaths_global.csv"),
            Path::new("/out"),
        );
        assert_eq!(
            p.sparse,
            Path::new("/out/time_series_covid19_deaths_global-sparse.csv")
        );
        assert_eq!(
            p.with_header,
            Path::new(
                "/out/time_series_covid19_deaths_global-sparse-with-formatted-column-names.csv"
            )
        );
    }

    fn cell() -> impl Strategy<Value = String> {
        prop_oneof![
            Just(String::new()),
            Just("0".to_string()),
            "[1-9][0-9]{0,5}"
        ]
    }

    proptest! {
        #[test]
        fn sanitize_is_idempotent(s in "[ a-zA-Z,*\"-]{0,20}") {
            let once = sanitize_field(&s);
            prop_assert_eq!(sanitize_field(&once), once);
        }

        #[test]
        fn sparsity_and_shape_hold(
            province in "[A-Za-z ]{0,8}",
            country in "[A-Za-z][A-Za-z ,]{0,8}",
            cells in proptest::collection::vec(cell(), 3),
        ) {
            let row = format!("\"{province}\",\"{country}\",1.5,-2.5,{}\n", cells.join(","));
            let input = format!("{HEADER}{row}");
            let a = format_reader(input.as_bytes(), false).unwrap();
            let b = format_reader(input.as_bytes(), false).unwrap();
            prop_assert_eq!(a.text(), b.text());
            let line = a.text().trim_end_matches('\n');
            let fields: Vec<&str> = line.split(',').collect();
            prop_assert_eq!(fields.len(), 7 - 1);
            let (p, c) = fields[0].split_once('~').unwrap();
            prop_assert_eq!(p, sanitize_field(&province));
            prop_assert_eq!(c, sanitize_field(&country));
            for (out, raw) in fields[3..].iter().zip(&cells) {
                if raw.is_empty() || raw == "0" {
                    prop_assert_eq!(*out, "");
                } else {
                    prop_assert_eq!(*out, raw.as_str());
                }
            }
        }
    }
}
