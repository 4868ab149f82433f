use std::fmt;
use std::str::FromStr;

use super::StoreError;

/// A `family:qualifier` cell address.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnCoord {
    family: String,
    qualifier: String,
}

impl ColumnCoord {
    pub fn new(
        family: impl Into<String>,
        qualifier: impl Into<String>,
    ) -> Result<Self, StoreError> {
        let family = family.into();
        let qualifier = qualifier.into();
        for part in [&family, &qualifier] {
            if part.is_empty() || part.contains([':', ',', '\t', '\n', '\r']) {
                return Err(StoreError::InvalidCoord(format!("{family}:{qualifier}")));
            }
        }
        Ok(Self { family, qualifier })
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn qualifier(&self) -> &str {
        &self.qualifier
    }
}

impl FromStr for ColumnCoord {
    type Err = StoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, qualifier) = s
            .split_once(':')
            .ok_or_else(|| StoreError::InvalidCoord(s.to_string()))?;
        ColumnCoord::new(family, qualifier)
    }
}

impl fmt::Display for ColumnCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.qualifier)
    }
}
