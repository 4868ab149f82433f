//! Brute-force reference model built straight from the raw CSVs. It shares
//! no code with the crate: its own CSV reading, sanitizing, date naming and
//! row-key assembly, and its own evaluation of queries.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

/// `"` and `*` vanish, `, ` and then `,` become `-`.
pub fn clean(s: &str) -> String {
    s.replace(['"', '*'], "")
        .replace(", ", "-")
        .replace(',', "-")
}

#[derive(Debug, Clone)]
pub struct Day {
    /// `MM_DD_YYYY`
    pub column: String,
    /// `dMDD`
    pub qualifier: String,
}

fn day_from_header(h: &str) -> Day {
    let p: Vec<u32> = h.split('/').map(|x| x.trim().parse().unwrap()).collect();
    let (m, d, y) = (p[0], p[1], 2000 + p[2]);
    Day {
        column: format!("{m:02}_{d:02}_{y}"),
        qualifier: format!("d{m}{d:02}"),
    }
}

#[derive(Debug, Clone)]
pub struct Place {
    pub province: String,
    pub country: String,
    pub lat: String,
    pub long: String,
    /// `None` where the raw cell is empty or zero.
    pub counts: Vec<Option<i64>>,
}

impl Place {
    pub fn key(&self) -> String {
        format!("{}~{}", self.province, self.country)
    }

    pub fn count_by_qualifier(&self, series: &Series, q: &str) -> Option<i64> {
        let i = series.days.iter().position(|d| d.qualifier == q)?;
        self.counts[i]
    }
}

#[derive(Debug, Clone)]
pub struct Series {
    pub days: Vec<Day>,
    pub places: Vec<Place>,
}

impl Series {
    pub fn load(path: &Path) -> Series {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_path(path)
            .unwrap();
        let mut records = rdr.records().map(Result::unwrap);
        let header = records.next().unwrap();
        let days = header.iter().skip(4).map(day_from_header).collect();
        let mut places = Vec::new();
        let mut seen = HashSet::new();
        for rec in records {
            let country = clean(&rec[1]);
            if country.is_empty() {
                continue;
            }
            let place = Place {
                province: clean(&rec[0]),
                country,
                lat: rec[2].to_string(),
                long: rec[3].to_string(),
                counts: rec
                    .iter()
                    .skip(4)
                    .map(|v| v.trim().parse::<i64>().ok().filter(|n| *n != 0))
                    .collect(),
            };
            assert!(seen.insert(place.key()), "duplicate key {}", place.key());
            places.push(place);
        }
        Series { days, places }
    }

    pub fn place(&self, key: &str) -> Option<&Place> {
        self.places.iter().find(|p| p.key() == key)
    }

    pub fn day_index(&self, column: &str) -> usize {
        self.days.iter().position(|d| d.column == column).unwrap()
    }

    pub fn sorted_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = self.places.iter().map(Place::key).collect();
        keys.sort();
        keys
    }
}

pub fn float_text(raw: &str) -> String {
    format!("{:?}", raw.trim().parse::<f64>().unwrap())
}

pub fn opt_text(v: Option<i64>) -> String {
    v.map_or_else(|| "NULL".to_string(), |n| n.to_string())
}

fn json(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn key_struct_text(p: &Place) -> String {
    format!(
        "{{\"province_state\":{},\"country_region\":{}}}",
        json(&p.province),
        json(&p.country)
    )
}

/// Every `SELECT *` cell of one place, rendered.
pub fn star_row(s: &Series, p: &Place) -> Vec<String> {
    let mut row = vec![key_struct_text(p), float_text(&p.lat), float_text(&p.long)];
    row.extend(p.counts.iter().copied().map(opt_text));
    assert_eq!(row.len(), 3 + s.days.len());
    row
}

// ---- randomized query model ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    C,
    D,
}

impl Side {
    fn label(self) -> &'static str {
        match self {
            Side::C => "c",
            Side::D => "d",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Col {
    Key,
    Province,
    Country,
    Lat,
    Long,
    Day(usize),
}

#[derive(Debug, Clone)]
pub enum Filter {
    CountryIn(Side, Vec<String>),
    ProvinceEq(Side, String),
    DayEq(Side, usize, i64),
    DayIn(Side, usize, Vec<i64>),
}

#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub join: bool,
    pub columns: Vec<(Side, Col)>,
    pub filters: Vec<Filter>,
}

fn quote(s: &str) -> String {
    format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
}

impl QuerySpec {
    fn col_sql(&self, days: &[Day], side: Side, col: &Col) -> String {
        let base = match col {
            Col::Key => "key".to_string(),
            Col::Province => "key.Province_State".to_string(),
            Col::Country => "key.Country_Region".to_string(),
            Col::Lat => "Lat".to_string(),
            Col::Long => "Long".to_string(),
            Col::Day(i) => days[*i].column.clone(),
        };
        if self.join {
            format!("{}.{base}", side.label())
        } else {
            base
        }
    }

    pub fn to_sql(&self, days: &[Day], confirmed: &str, deaths: &str) -> String {
        let cols: Vec<String> = self
            .columns
            .iter()
            .map(|(s, c)| self.col_sql(days, *s, c))
            .collect();
        let mut sql = format!("SELECT {}\n", cols.join(", "));
        if self.join {
            sql.push_str(&format!(
                "FROM {confirmed} c\nJOIN {deaths} d\n  ON c.key.Province_State = d.key.Province_State\n \
                 AND c.key.Country_Region = d.key.Country_Region\n"
            ));
        } else {
            sql.push_str(&format!("FROM {confirmed}\n"));
        }
        let preds: Vec<String> = self
            .filters
            .iter()
            .map(|f| match f {
                Filter::CountryIn(s, list) => {
                    let l: Vec<String> = list.iter().map(|x| quote(x)).collect();
                    format!(
                        "{} IN ({})",
                        self.col_sql(days, *s, &Col::Country),
                        l.join(", ")
                    )
                }
                Filter::ProvinceEq(s, v) => {
                    format!("{} = {}", self.col_sql(days, *s, &Col::Province), quote(v))
                }
                Filter::DayEq(s, i, v) => {
                    format!("{} = {v}", self.col_sql(days, *s, &Col::Day(*i)))
                }
                Filter::DayIn(s, i, list) => {
                    let l: Vec<String> = list.iter().map(ToString::to_string).collect();
                    format!(
                        "{} IN ({})",
                        self.col_sql(days, *s, &Col::Day(*i)),
                        l.join(", ")
                    )
                }
            })
            .collect();
        if !preds.is_empty() {
            sql.push_str(&format!("WHERE {}", preds.join("\n  AND ")));
        }
        sql
    }

    /// Brute-force evaluation. When not joining, every column and filter
    /// reads from the confirmed series.
    pub fn evaluate(&self, confirmed: &Series, deaths: &Series) -> Vec<Vec<String>> {
        let mut pairs: Vec<(&Place, Option<&Place>)> = Vec::new();
        for c in &confirmed.places {
            if self.join {
                for d in &deaths.places {
                    if c.province == d.province && c.country == d.country {
                        pairs.push((c, Some(d)));
                    }
                }
            } else {
                pairs.push((c, None));
            }
        }
        fn pick<'a>(side: Side, pair: &(&'a Place, Option<&'a Place>)) -> &'a Place {
            match side {
                Side::C => pair.0,
                Side::D => pair.1.unwrap_or(pair.0),
            }
        }
        let cell = |side: Side, pair: &(&Place, Option<&Place>), col: &Col| -> String {
            let p = pick(side, pair);
            match col {
                Col::Key => key_struct_text(p),
                Col::Province => p.province.clone(),
                Col::Country => p.country.clone(),
                Col::Lat => float_text(&p.lat),
                Col::Long => float_text(&p.long),
                Col::Day(i) => opt_text(p.counts[*i]),
            }
        };
        pairs
            .iter()
            .filter(|pair| {
                self.filters.iter().all(|f| match f {
                    Filter::CountryIn(s, list) => list.contains(&pick(*s, pair).country),
                    Filter::ProvinceEq(s, v) => pick(*s, pair).province == *v,
                    Filter::DayEq(s, i, v) => pick(*s, pair).counts[*i] == Some(*v),
                    Filter::DayIn(s, i, list) => {
                        pick(*s, pair).counts[*i].is_some_and(|n| list.contains(&n))
                    }
                })
            })
            .map(|pair| {
                self.columns
                    .iter()
                    .map(|(s, c)| cell(*s, pair, c))
                    .collect()
            })
            .collect()
    }
}

/// Rows as a sorted multiset, for order-insensitive comparison.
pub fn multiset(rows: Vec<Vec<String>>) -> Vec<Vec<String>> {
    let mut rows = rows;
    rows.sort();
    rows
}

pub fn countries(s: &Series) -> Vec<String> {
    let set: BTreeMap<&str, ()> = s.places.iter().map(|p| (p.country.as_str(), ())).collect();
    set.keys().map(|k| k.to_string()).collect()
}

/// A random query in the supported grammar. Filter values are drawn from
/// the data so that most queries return rows.
pub fn random_query<R: rand::Rng>(rng: &mut R, c: &Series, d: &Series) -> QuerySpec {
    let join = rng.random_bool(0.5);
    let side = |rng: &mut R| {
        if join && rng.random_bool(0.5) {
            Side::D
        } else {
            Side::C
        }
    };
    let series = |s: Side| if s == Side::D { d } else { c };
    let ndays = c.days.len();
    let random_col = |rng: &mut R| match rng.random_range(0..8) {
        0 => Col::Key,
        1 => Col::Province,
        2 => Col::Country,
        3 => Col::Lat,
        4 => Col::Long,
        _ => Col::Day(rng.random_range(0..ndays)),
    };
    let columns = (0..rng.random_range(1..=5))
        .map(|_| (side(rng), random_col(rng)))
        .collect();
    let all_countries = countries(c);
    let mut filters = Vec::new();
    for _ in 0..rng.random_range(0..=3) {
        let s = side(rng);
        let place = &series(s).places[rng.random_range(0..series(s).places.len())];
        let f = match rng.random_range(0..4) {
            0 => {
                let mut list = vec![place.country.clone()];
                for _ in 0..rng.random_range(0..4) {
                    list.push(all_countries[rng.random_range(0..all_countries.len())].clone());
                }
                if rng.random_bool(0.2) {
                    list.push("Atlantis".into());
                }
                Filter::CountryIn(s, list)
            }
            1 => Filter::ProvinceEq(s, place.province.clone()),
            2 => {
                let i = rng.random_range(0..ndays);
                Filter::DayEq(s, i, place.counts[i].unwrap_or(0))
            }
            _ => {
                let i = rng.random_range(0..ndays);
                let mut list = vec![place.counts[i].unwrap_or(0)];
                list.push(rng.random_range(1..50));
                Filter::DayIn(s, i, list)
            }
        };
        filters.push(f);
    }
    QuerySpec {
        join,
        columns,
        filters,
    }
}
