//! A small synthetic survey: weighting on the stated intention, the
//! resulting profiles, strategic-voting categories and a chi-square test.
//!
//! `cargo run --example survey`

use std::sync::Arc;

use partysel::experiments::{
    apply_weights, chi_square_2x2, classify_strategic, compute_weights, survey_profile, unrepresented_share,
    BucketCuts, PartyBuckets, RankingSource, TauPoint,
};
use partysel::io::{parse_official, parse_survey};
use partysel::rules::RuleId;
use partysel::Weight;

const RESULTS: &str = "party,share
Left,30%
Green,5.5%
Centre,28%
Right,32%
Fringe,2%
";

const SURVEY: &str = "respondent_id,intention,two_vote,full_ranking,completed_at
1,Left,Left;Green,Left;Green;Centre,2024-06-01
2,Left,Green;Left,Green;Left;Centre,2024-06-01
3,Green,Green;Left,Green;Left,2024-06-02
4,Centre,Centre;Right,Centre;Right;Left,2024-06-02
5,Centre,Fringe;Centre,Fringe;Centre,2024-06-03
6,Right,Right,Right;Centre,2024-06-03
7,Right,Right;Fringe,Right;Fringe;Centre,2024-06-04
8,Right,Fringe;Right,Fringe;Right,2024-06-04
9,,Left,Left,
10,Left,Left;Centre,Left;Centre;Green,2024-06-05
";

fn main() -> partysel::Result<()> {
    let (roster, official) = parse_official(RESULTS)?;
    let mut rows = parse_survey(SURVEY, &roster)?;
    let weighting = compute_weights(&rows, &official)?;
    apply_weights(&mut rows, &weighting);
    for r in &rows {
        println!("respondent {:>2}: weight {}", r.respondent, r.weight);
    }

    let roster = Arc::new(roster);
    let tau = TauPoint::Relative(Weight::from_ratio(20, 100));
    for source in [RankingSource::TwoVote, RankingSource::Full] {
        let p = survey_profile(&rows, roster.clone(), source)?;
        let t = tau.resolve(&p)?;
        for rule in [RuleId::Uninominal, RuleId::Do, RuleId::Stv, RuleId::Gp] {
            let u = unrepresented_share(&p, rule, &t)?;
            println!("{:?} {:<10} unrepresented {:.1}%", source, rule.as_str(), u.to_f64() * 100.0);
        }
    }

    let buckets = PartyBuckets::new(roster.len(), &official, &BucketCuts::default());
    let report = classify_strategic(&rows, &buckets, RankingSource::TwoVote);
    for (category, share) in &report.fractions {
        println!("{:?}: {:.1}%", category, share.to_f64() * 100.0);
    }

    // Strategic-down voters in two sub-samples.
    let table = [
        [Weight::from(12u64), Weight::from(88u64)],
        [Weight::from(25u64), Weight::from(75u64)],
    ];
    let chi = chi_square_2x2(&table)?;
    println!("chi-square {} (p = {:.4})", chi.statistic, chi.p_value);
    Ok(())
}
