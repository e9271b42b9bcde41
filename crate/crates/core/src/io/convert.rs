use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Columns holding a ranking: one column with separated names, or one
/// column per rank.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum RankingColumns {
    Single(String),
    PerRank(Vec<String>),
}

/// How the columns of a raw survey export map onto survey rows.
///
/// ```toml
/// respondent_id = "id"
/// intention = "vote_euro"
/// two_vote = ["vote1", "vote2"]
/// full_ranking = "ranking"
/// completed_at = "end_date"
/// date_format = "%d/%m/%Y"
///
/// none = ["", "NSP", "Abstention"]
///
/// [parties]
/// "Liste PS-Place publique" = "PS"
/// ```
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ColumnMap {
    pub respondent_id: String,
    pub intention: String,
    pub two_vote: RankingColumns,
    pub full_ranking: RankingColumns,
    pub completed_at: Option<String>,
    #[serde(default = "default_date_format")]
    pub date_format: String,
    /// Separator inside a single ranking column.
    #[serde(default = "default_separator")]
    pub separator: String,
    /// Field delimiter of the export.
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    /// Labels meaning "no party".
    #[serde(default)]
    pub none: Vec<String>,
    /// Label → party name. Labels not listed are kept as they are.
    #[serde(default)]
    pub parties: BTreeMap<String, String>,
}

fn default_date_format() -> String {
    "%Y-%m-%d".into()
}

fn default_separator() -> String {
    ";".into()
}

fn default_delimiter() -> char {
    ','
}

impl ColumnMap {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("column map: {}", e)))
    }

    fn party(&self, label: &str) -> Option<String> {
        let label = label.trim();
        if self.none.iter().any(|n| n.trim() == label) || label.is_empty() {
            return None;
        }
        Some(self.parties.get(label).cloned().unwrap_or_else(|| label.to_string()))
    }

    /// Mapped ranking; repeated parties keep their first position.
    fn ranking(&self, cols: &RankingColumns, get: &dyn Fn(&str) -> Result<String>) -> Result<Vec<String>> {
        let labels: Vec<String> = match cols {
            RankingColumns::Single(c) => get(c)?.split(self.separator.as_str()).map(String::from).collect(),
            RankingColumns::PerRank(cs) => cs.iter().map(|c| get(c)).collect::<Result<_>>()?,
        };
        let mut out: Vec<String> = Vec::new();
        for name in labels.iter().filter_map(|l| self.party(l)) {
            if !out.contains(&name) {
                out.push(name);
            }
        }
        Ok(out)
    }
}

/// Rewrites a raw survey export as a survey file (see
/// [`parse_survey`](super::parse_survey)).
pub fn convert_survey(raw: &str, map: &ColumnMap) -> Result<String> {
    let delimiter = u8::try_from(map.delimiter)
        .map_err(|_| Error::InvalidArgument(format!("delimiter `{}` is not ASCII", map.delimiter)))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .from_reader(raw.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Io(e.to_string()))?.clone();
    let index = |c: &str| {
        headers
            .iter()
            .position(|h| h.trim() == c)
            .ok_or_else(|| Error::InvalidArgument(format!("column `{}` not in the export", c)))
    };
    // Fail on a missing column before reading any row.
    for c in [&map.respondent_id, &map.intention].into_iter().chain(map.completed_at.as_ref()) {
        index(c)?;
    }
    for cols in [&map.two_vote, &map.full_ranking] {
        match cols {
            RankingColumns::Single(c) => {
                index(c)?;
            }
            RankingColumns::PerRank(cs) => {
                for c in cs {
                    index(c)?;
                }
            }
        }
    }

    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["respondent_id", "intention", "two_vote", "full_ranking", "completed_at"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let get = |c: &str| -> Result<String> { Ok(rec.get(index(c)?).unwrap_or("").trim().to_string()) };
        let intention = map.party(&get(&map.intention)?).unwrap_or_default();
        let two_vote = map.ranking(&map.two_vote, &get)?;
        if two_vote.len() > 2 {
            return Err(Error::Row {
                row,
                message: format!("two_vote ranks {} parties", two_vote.len()),
            });
        }
        let full = map.ranking(&map.full_ranking, &get)?;
        let date = match &map.completed_at {
            Some(c) => match get(c)?.as_str() {
                "" => String::new(),
                d => NaiveDate::parse_from_str(d, &map.date_format)
                    .map_err(|e| Error::Row {
                        row,
                        message: format!("date `{}`: {}", d, e),
                    })?
                    .format("%Y-%m-%d")
                    .to_string(),
            },
            None => String::new(),
        };
        out.write_record([
            get(&map.respondent_id)?,
            intention,
            two_vote.join(";"),
            full.join(";"),
            date,
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = out.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
