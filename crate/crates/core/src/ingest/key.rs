use std::fmt;

use super::IngestError;

/// Separator between the province/state and country/region parts of a row key.
pub const KEY_SEPARATOR: char = '~';

/// Composite `Province_State~Country_Region` row identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowKey {
    province_state: String,
    country_region: String,
}

impl RowKey {
    pub fn province_state(&self) -> &str {
        &self.province_state
    }

    pub fn country_region(&self) -> &str {
        &self.country_region
    }

    /// Splits a serialized key at its first `~`.
    pub fn parse(serialized: &str) -> Option<RowKey> {
        let (province, country) = serialized.split_once(KEY_SEPARATOR)?;
        build_row_key(province, country).ok()
    }
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{KEY_SEPARATOR}{}",
            self.province_state, self.country_region
        )
    }
}

/// Builds a key from already sanitized province and country fields.
pub fn build_row_key(province: &str, country: &str) -> Result<RowKey, IngestError> {
    if country.is_empty() {
        return Err(IngestError::InvalidRecord("empty country/region".into()));
    }
    for part in [province, country] {
        if part.contains(KEY_SEPARATOR) || part.contains(',') {
            return Err(IngestError::InvalidRecord(format!(
                "key part {part:?} contains a reserved character"
            )));
        }
    }
    Ok(RowKey {
        province_state: province.to_string(),
        country_region: country.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn serializes_with_separator() {
        assert_eq!(
            build_row_key("British Columbia", "Canada")
                .unwrap()
                .to_string(),
            "British Columbia~Canada"
        );
        assert_eq!(
            build_row_key("", "Morocco").unwrap().to_string(),
            "~Morocco"
        );
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(build_row_key("Ontario", "").is_err());
        assert!(build_row_key("a~b", "Canada").is_err());
        assert!(build_row_key("", "Korea, South").is_err());
    }

    proptest! {
        #[test]
        fn parse_inverts_display(p in "[^~,]{0,12}", c in "[^~,]{1,12}") {
            let key = build_row_key(&p, &c).unwrap();
            let back = RowKey::parse(&key.to_string()).unwrap();
            prop_assert_eq!(back, key);
        }
    }
}
