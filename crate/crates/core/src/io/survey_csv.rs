use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::experiments::{OfficialShares, SurveyRow};
use crate::party_set::PartyId;
use crate::profile::Roster;
use crate::weight::Weight;

fn row_error(row: usize, message: impl Into<String>) -> Error {
    Error::Row {
        row,
        message: message.into(),
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.position() {
        Some(p) => row_error(p.line() as usize, e.to_string()),
        None => Error::Io(e.to_string()),
    }
}

fn ranking(field: &str, roster: &Roster, row: usize, what: &str) -> Result<Vec<PartyId>> {
    let mut out = Vec::new();
    for name in field.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let id = roster
            .id(name)
            .ok_or_else(|| row_error(row, format!("{}: unknown party `{}`", what, name)))?;
        if out.contains(&id) {
            return Err(row_error(row, format!("{}: party `{}` ranked twice", what, name)));
        }
        out.push(id);
    }
    Ok(out)
}

/// Reads survey rows. Columns are `respondent_id`, `intention`, `two_vote`,
/// `full_ranking` and `completed_at`, trailing ones optional; rankings are `;`-separated party
/// names. Row numbers in errors are file lines. Weights start at 1.
pub fn parse_survey(text: &str, roster: &Roster) -> Result<Vec<SurveyRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_error)?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let id_col = col("respondent_id").ok_or_else(|| row_error(1, "missing column `respondent_id`"))?;
    let cols = ["intention", "two_vote", "full_ranking", "completed_at"].map(col);
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_error)?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| cols[i].and_then(|c| rec.get(c)).unwrap_or("");
        let intention = match field(0) {
            "" => None,
            name => Some(
                roster
                    .id(name)
                    .ok_or_else(|| row_error(row, format!("intention: unknown party `{}`", name)))?,
            ),
        };
        let two_vote = ranking(field(1), roster, row, "two_vote")?;
        if two_vote.len() > 2 {
            return Err(row_error(row, "two_vote ranks more than two parties"));
        }
        let full_ranking = ranking(field(2), roster, row, "full_ranking")?;
        let completed_at = match field(3) {
            "" => None,
            d => Some(
                NaiveDate::parse_from_str(d, "%Y-%m-%d")
                    .map_err(|e| row_error(row, format!("completed_at `{}`: {}", d, e)))?,
            ),
        };
        out.push(SurveyRow {
            respondent: rec.get(id_col).unwrap_or("").to_string(),
            intention,
            two_vote,
            full_ranking,
            completed_at,
            weight: Weight::one(),
        });
    }
    Ok(out)
}

/// Writes survey rows in the format of [`parse_survey`].
pub fn write_survey(rows: &[SurveyRow], roster: &Roster) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let join = |r: &[PartyId]| r.iter().map(|&p| roster.name(p)).collect::<Vec<_>>().join(";");
    w.write_record(["respondent_id", "intention", "two_vote", "full_ranking", "completed_at"])
        .map_err(csv_error)?;
    for r in rows {
        let intention = r.intention.map(|p| roster.name(p).to_string()).unwrap_or_default();
        let date = r.completed_at.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default();
        w.write_record([&r.respondent, &intention, &join(&r.two_vote), &join(&r.full_ranking), &date])
            .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

#[derive(Deserialize)]
struct RawResult {
    party: String,
    share: String,
}

/// Reads official results with columns `party` and `share`. A share is a
/// fraction (`0.0725`, `29/400`) or a percentage (`7.25%`). The parties, in
/// file order, form the returned roster.
pub fn parse_official(text: &str) -> Result<(Roster, OfficialShares)> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut names = Vec::new();
    let mut shares = Vec::new();
    let headers = reader.headers().map_err(csv_error)?.clone();
    for rec in reader.records() {
        let rec = rec.map_err(csv_error)?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let raw: RawResult = rec.deserialize(Some(&headers)).map_err(|e| row_error(row, e.to_string()))?;
        let (num, pct) = match raw.share.strip_suffix('%') {
            Some(p) => (p.trim(), true),
            None => (raw.share.as_str(), false),
        };
        let mut w: Weight = num
            .parse()
            .map_err(|_| row_error(row, format!("malformed share `{}`", raw.share)))?;
        if pct {
            w = w / Weight::from(100u64);
        }
        if w.is_negative() {
            return Err(row_error(row, format!("negative share `{}`", raw.share)));
        }
        if names.contains(&raw.party) {
            return Err(row_error(row, format!("party `{}` listed twice", raw.party)));
        }
        names.push(raw.party);
        shares.push(w);
    }
    let roster = Roster::from_names(&names)?;
    let total: Weight = shares.iter().sum();
    if total > Weight::one() {
        return Err(Error::InvalidArgument(format!("official shares sum to {}", total)));
    }
    let map: BTreeMap<PartyId, Weight> = roster.ids().zip(shares).collect();
    Ok((roster, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roster() -> Roster {
        Roster::from_names(&["PS", "EELV", "PCF", "RN"]).unwrap()
    }

    #[test]
    fn format_demonstration() {
        let text = "respondent_id,intention,two_vote,full_ranking,completed_at\n17,PS,PS;EELV,PS;EELV;PCF,\n";
        let rows = parse_survey(text, &roster()).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.respondent, "17");
        assert_eq!(r.intention, Some(PartyId(0)));
        assert_eq!(r.two_vote, vec![PartyId(0), PartyId(1)]);
        assert_eq!(r.full_ranking, vec![PartyId(0), PartyId(1), PartyId(2)]);
        assert_eq!(r.completed_at, None);
    }

    #[test]
    fn blank_intention_and_dates() {
        let text = "respondent_id,intention,two_vote,full_ranking,completed_at\n1,,RN,RN;PS,2024-06-03\n";
        let rows = parse_survey(text, &roster()).unwrap();
        assert_eq!(rows[0].intention, None);
        assert_eq!(rows[0].completed_at, NaiveDate::from_ymd_opt(2024, 6, 3));
        assert_eq!(parse_survey(&write_survey(&rows, &roster()).unwrap(), &roster()).unwrap(), rows);
    }

    #[test]
    fn row_errors() {
        let head = "respondent_id,intention,two_vote,full_ranking,completed_at\n";
        let err = |body: &str| parse_survey(&format!("{}{}", head, body), &roster()).unwrap_err();
        assert_eq!(
            err("1,PS,PS,PS\n2,PS,PS,PS;EELV;PS\n"),
            row_error(3, "full_ranking: party `PS` ranked twice")
        );
        assert_eq!(err("1,LFI,PS,PS\n"), row_error(2, "intention: unknown party `LFI`"));
        assert_eq!(err("1,PS,PS;RN;PCF,PS\n"), row_error(2, "two_vote ranks more than two parties"));
        assert!(matches!(err("1,PS,PS,PS,03/06/2024\n"), Error::Row { row: 2, .. }));
    }

    #[test]
    fn official_results() {
        let (r, s) = parse_official("party,share\nRN,31.37%\nPS,0.1383\nPCF,1/40\n").unwrap();
        assert_eq!(r.names_of(r.all()), ["RN", "PS", "PCF"]);
        assert_eq!(s[&PartyId(0)], Weight::from_ratio(3137, 10000));
        assert_eq!(s[&PartyId(2)], Weight::from_ratio(1, 40));
        assert!(parse_official("party,share\nRN,60%\nPS,60%\n").is_err());
        assert_eq!(
            parse_official("party,share\nRN,x\n").unwrap_err(),
            row_error(2, "malformed share `x`")
        );
    }
}
