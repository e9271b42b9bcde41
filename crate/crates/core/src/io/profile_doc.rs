use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::experiments::TauPoint;
use crate::party_set::PartyId;
use crate::profile::{Ballot, Party, Profile, Roster, Threshold};
use crate::weight::Weight;

/// A profile together with the optional default threshold of its file.
///
/// ```text
/// # Example 1
/// #! parties: a,b,c,d
/// #! tau: 5
/// 4: a>b>c
/// 3: b>c
/// d
/// ```
///
/// The `parties` header lists the roster in priority order. A `priority`
/// header may list the same names in a different order to separate the two.
/// `tau` is a weight, or a percentage of the total weight (`5%`). Ballot
/// weights default to 1 and may be integers, decimals or fractions; `2:`
/// alone is an empty ballot of weight 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileDocument {
    pub profile: Profile,
    pub tau: Option<TauPoint>,
}

impl ProfileDocument {
    /// The default threshold resolved against the profile.
    pub fn threshold(&self) -> Option<Result<Threshold>> {
        self.tau.as_ref().map(|t| t.resolve(&self.profile))
    }
}

fn column(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

/// Byte offset of `part` inside `line`; `part` must be a subslice.
fn offset(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize
}

/// Parses `5`, `2.5`, `5/2` or `5%`.
pub fn parse_tau(s: &str) -> std::result::Result<TauPoint, String> {
    let s = s.trim();
    if let Some(p) = s.strip_suffix('%') {
        let w: Weight = p.trim().parse().map_err(|_| format!("malformed threshold `{}`", s))?;
        if w.is_negative() || w > Weight::from(100u64) {
            return Err(format!("threshold `{}` is outside 0%..100%", s));
        }
        Ok(TauPoint::Relative(w / Weight::from(100u64)))
    } else {
        let w: Weight = s.parse().map_err(|_| format!("malformed threshold `{}`", s))?;
        if w.is_negative() {
            return Err(format!("negative threshold `{}`", s));
        }
        Ok(TauPoint::Absolute(w))
    }
}

pub fn format_tau(t: &TauPoint) -> String {
    match t {
        TauPoint::Absolute(w) => w.to_string(),
        TauPoint::Relative(f) => format!("{}%", f * &Weight::from(100u64)),
    }
}

fn parse_names(value: &str, line: &str, lineno: usize) -> Result<Vec<String>> {
    let mut names: Vec<String> = Vec::new();
    for part in value.split(',') {
        let name = part.trim();
        let col = column(line, offset(line, part) + (part.len() - part.trim_start().len()));
        if name.is_empty() {
            return Err(Error::parse(lineno, col, "empty party name"));
        }
        if name.contains(['>', ':', '#']) || name.chars().any(char::is_whitespace) {
            return Err(Error::parse(lineno, col, format!("invalid party name `{}`", name)));
        }
        if names.iter().any(|n| n == name) {
            return Err(Error::parse(lineno, col, format!("party `{}` listed twice", name)));
        }
        names.push(name.to_string());
    }
    Ok(names)
}

/// Parses a profile document.
pub fn parse_profile(text: &str) -> Result<ProfileDocument> {
    let mut names: Option<(Vec<String>, usize)> = None;
    let mut priority: Option<(Vec<String>, usize)> = None;
    let mut tau = None;
    let mut roster: Option<Arc<Roster>> = None;
    let mut ballots = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix("#!") {
            let col = column(line, offset(line, header));
            if roster.is_some() {
                return Err(Error::parse(lineno, 1, "header after the first ballot"));
            }
            let (key, value) = header
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno, col, "header needs `key: value`"))?;
            match key.trim() {
                "parties" => names = Some((parse_names(value, line, lineno)?, lineno)),
                "priority" => priority = Some((parse_names(value, line, lineno)?, lineno)),
                "tau" => {
                    let vcol = column(line, offset(line, value));
                    tau = Some(parse_tau(value).map_err(|m| Error::parse(lineno, vcol, m))?);
                }
                other => return Err(Error::parse(lineno, col, format!("unknown header `{}`", other))),
            }
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        if roster.is_none() {
            roster = Some(Arc::new(build_roster(names.take(), priority.take(), lineno)?));
        }
        let r = roster.as_ref().expect("just built");
        ballots.push(parse_ballot(line, lineno, r)?);
    }
    let roster = match roster {
        Some(r) => r,
        None => Arc::new(build_roster(names, priority, text.lines().count().max(1))?),
    };
    let profile = Profile::with_shared_roster(roster, ballots)?;
    Ok(ProfileDocument { profile, tau })
}

fn build_roster(
    names: Option<(Vec<String>, usize)>,
    priority: Option<(Vec<String>, usize)>,
    lineno: usize,
) -> Result<Roster> {
    let (names, _) = names.ok_or_else(|| Error::parse(lineno, 1, "missing `#! parties:` header"))?;
    let parties = match priority {
        None => names
            .into_iter()
            .enumerate()
            .map(|(i, name)| Party { name, priority: i })
            .collect(),
        Some((order, pline)) => {
            if order.len() != names.len() {
                return Err(Error::parse(pline, 1, "priority must list every party once"));
            }
            names
                .into_iter()
                .map(|name| match order.iter().position(|n| *n == name) {
                    Some(priority) => Ok(Party { name, priority }),
                    None => Err(Error::parse(pline, 1, format!("priority misses party `{}`", name))),
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Roster::new(parties)
}

fn parse_ballot(line: &str, lineno: usize, roster: &Roster) -> Result<Ballot> {
    let (weight, ranking) = match line.split_once(':') {
        Some((w, r)) => {
            let col = column(line, offset(line, w) + (w.len() - w.trim_start().len()));
            let weight: Weight = w
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, col, format!("malformed weight `{}`", w.trim())))?;
            if weight.is_negative() {
                return Err(Error::parse(lineno, col, format!("negative weight `{}`", w.trim())));
            }
            (weight, r)
        }
        None => (Weight::one(), line),
    };
    let mut out: Vec<PartyId> = Vec::new();
    if !ranking.trim().is_empty() {
        for part in ranking.split('>') {
            let name = part.trim();
            let col = column(line, offset(line, part) + (part.len() - part.trim_start().len()));
            if name.is_empty() {
                return Err(Error::parse(lineno, col, "empty party name in ranking"));
            }
            let id = roster
                .id(name)
                .ok_or_else(|| Error::parse(lineno, col, format!("unknown party `{}`", name)))?;
            if out.contains(&id) {
                return Err(Error::parse(lineno, col, format!("party `{}` ranked twice", name)));
            }
            out.push(id);
        }
    }
    Ok(Ballot::new(out, weight))
}

/// Writes a document that [`parse_profile`] reads back to the same value.
pub fn write_profile(doc: &ProfileDocument) -> String {
    let roster = doc.profile.roster();
    let mut s = String::new();
    let names: Vec<&str> = roster.parties().iter().map(|p| p.name.as_str()).collect();
    writeln!(s, "#! parties: {}", names.join(",")).unwrap();
    let by_priority: Vec<&str> = roster.by_priority().iter().map(|&p| roster.name(p)).collect();
    if by_priority != names {
        writeln!(s, "#! priority: {}", by_priority.join(",")).unwrap();
    }
    if let Some(t) = &doc.tau {
        writeln!(s, "#! tau: {}", format_tau(t)).unwrap();
    }
    for b in doc.profile.ballots() {
        let r: Vec<&str> = b.ranking.iter().map(|&p| roster.name(p)).collect();
        if r.is_empty() {
            writeln!(s, "{}:", b.weight).unwrap();
        } else {
            writeln!(s, "{}: {}", b.weight, r.join(">")).unwrap();
        }
    }
    s
}
