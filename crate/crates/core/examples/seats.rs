//! D'Hondt seat allocation from the representation scores of each rule.
//!
//! `cargo run --example seats`

use partysel::apportion::seats_for_result;
use partysel::rules::{self, RuleId};
use partysel::{fixtures, Threshold};

fn main() -> partysel::Result<()> {
    let profile = fixtures::five_party_spectrum();
    let tau = Threshold::from(15);
    for rule in [RuleId::Uninominal, RuleId::Do, RuleId::Stv, RuleId::Gp] {
        let r = rules::run(rule, &profile, &tau)?;
        let seats = seats_for_result(&r, profile.roster(), 10)?;
        let row: Vec<String> = seats
            .seats
            .iter()
            .map(|(p, n)| format!("{} {} ({})", profile.roster().name(*p), n, r.assignment.scores[p]))
            .collect();
        println!("{:<10} {}", rule.as_str(), row.join(", "));
    }
    Ok(())
}
