//! Unrepresented voters as the threshold grows, and as ballots get shorter.
//!
//! `cargo run --example sweeps`

use partysel::experiments::{sweep_threshold, sweep_truncation, TauPoint};
use partysel::io::flat_table;
use partysel::rules::RuleId;
use partysel::{fixtures, Weight};

fn main() -> partysel::Result<()> {
    let p = fixtures::five_party_spectrum();
    let taus = TauPoint::relative_grid(&Weight::from_ratio(5, 100), &Weight::from_ratio(40, 100), 8)?;
    for rule in [RuleId::Uninominal, RuleId::Do, RuleId::Stv, RuleId::Gp] {
        println!("# {}", rule.as_str());
        print!("{}", flat_table(&sweep_threshold(&p, rule, &taus)?));
    }

    let report = sweep_truncation(&p, RuleId::Stv, &TauPoint::Absolute(Weight::from(20u64)), &[1, 2, 3])?;
    println!("# stv by ballot length");
    for point in &report.points {
        let ranks: Vec<String> = point.ranks.iter().map(|(k, w)| format!("rank {}: {}", k, w)).collect();
        println!("k={} {} unrepresented {} ({})", point.k.unwrap_or(0), p.format_set(point.outcome), point.unrepresented, ranks.join(", "));
    }
    Ok(())
}
