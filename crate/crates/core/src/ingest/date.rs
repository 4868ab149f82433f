use std::fmt;

use chrono::{Datelike, NaiveDate};

use super::IngestError;

/// One daily column of the time-series matrix.
///
/// The same day is spelled three ways across the pipeline: the padded
/// `MM/DD/YYYY` header, the relational column name `MM_DD_YYYY`, and the
/// store qualifier `d{M}{DD}` (month unpadded, day padded).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DateColumn {
    year: i32,
    month: u32,
    day: u32,
}

impl DateColumn {
    pub fn new(year: i32, month: u32, day: u32) -> Option<Self> {
        NaiveDate::from_ymd_opt(year, month, day).map(Self::from)
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u32 {
        self.month
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    /// `03/02/2020`
    pub fn header_form(&self) -> String {
        format!("{:02}/{:02}/{:04}", self.month, self.day, self.year)
    }

    /// `03_02_2020`
    pub fn relational_name(&self) -> String {
        format!("{:02}_{:02}_{:04}", self.month, self.day, self.year)
    }

    /// `d302`
    pub fn qualifier(&self) -> String {
        format!("d{}{:02}", self.month, self.day)
    }

    pub fn to_naive(self) -> NaiveDate {
        // constructed only from valid calendar dates
        NaiveDate::from_ymd_opt(self.year, self.month, self.day).expect("valid date")
    }

    /// Every day from `start` to `end`, both inclusive. Empty when `start > end`.
    pub fn range(start: DateColumn, end: DateColumn) -> Vec<DateColumn> {
        start
            .to_naive()
            .iter_days()
            .take_while(|d| *d <= end.to_naive())
            .map(DateColumn::from)
            .collect()
    }
}

impl From<NaiveDate> for DateColumn {
    fn from(d: NaiveDate) -> Self {
        Self {
            year: d.year(),
            month: d.month(),
            day: d.day(),
        }
    }
}

impl fmt::Display for DateColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.header_form())
    }
}

/// Parses an `m/d/yy` or `m/d/yyyy` header token. Two-digit years are 20yy.
pub fn normalize_date(raw: &str) -> Result<DateColumn, IngestError> {
    let bad = || IngestError::BadDate(raw.to_string());
    let token = raw.trim();
    let mut parts = token.split('/');
    let (Some(m), Some(d), Some(y), None) =
        (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(bad());
    };
    let digits = |s: &str, lo: usize, hi: usize| {
        (lo..=hi).contains(&s.len()) && s.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(m, 1, 2) || !digits(d, 1, 2) || !(y.len() == 2 || y.len() == 4) || !digits(y, 2, 4) {
        return Err(bad());
    }
    let month: u32 = m.parse().map_err(|_| bad())?;
    let day: u32 = d.parse().map_err(|_| bad())?;
    let mut year: i32 = y.parse().map_err(|_| bad())?;
    if y.len() == 2 {
        year += 2000;
    }
    DateColumn::new(year, month, day).ok_or_else(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pads_short_dates() {
        let d = normalize_date("3/2/20").unwrap();
        assert_eq!((d.month(), d.day(), d.year()), (3, 2, 2020));
        assert_eq!(d.header_form(), "03/02/2020");
    }

    #[test]
    fn qualifier_drops_month_padding_only() {
        let d = normalize_date("1/22/20").unwrap();
        assert_eq!(d.header_form(), "01/22/2020");
        assert_eq!(d.qualifier(), "d122");
        assert_eq!(d.relational_name(), "01_22_2020");
        assert_eq!(normalize_date("3/31/20").unwrap().qualifier(), "d331");
        assert_eq!(normalize_date("10/1/20").unwrap().qualifier(), "d1001");
    }

    #[test]
    fn four_digit_year_passes_through() {
        let d = normalize_date("12/31/2020").unwrap();
        assert_eq!(d.header_form(), "12/31/2020");
        assert_eq!(d.qualifier(), "d1231");
    }

    #[test]
    fn rejects_malformed_tokens() {
        for raw in [
            "", "3/2", "3-2-20", "13/1/20", "2/30/20", "3/2/202", "a/b/cc", "3/2/20/1", "003/2/20",
        ] {
            let err = normalize_date(raw).unwrap_err();
            assert!(err.to_string().contains(raw), "{err}");
        }
    }

    #[test]
    fn header_form_is_a_fixed_point() {
        for raw in ["1/22/20", "3/2/20", "12/31/2020", "2/29/20"] {
            let d = normalize_date(raw).unwrap();
            assert_eq!(normalize_date(&d.header_form()).unwrap(), d);
        }
    }

    #[test]
    fn range_is_inclusive() {
        let a = DateColumn::new(2020, 1, 22).unwrap();
        let b = DateColumn::new(2020, 3, 31).unwrap();
        let days = DateColumn::range(a, b);
        assert_eq!(days.len(), 70);
        assert_eq!(days[0], a);
        assert_eq!(*days.last().unwrap(), b);
        assert!(DateColumn::range(b, a).is_empty());
    }
}
