//! Safe, risky and out parties from one voter's point of view, and the
//! manipulations they allow.
//!
//! `cargo run --example strategy`

use partysel::axioms::fixtures::{gp_promote_fixture, two_risky_fixture, Instance};
use partysel::axioms::{coalition_insurance_fixture, PartyStatus, VoterAnalysis};
use partysel::rules::RuleId;

fn main() -> partysel::Result<()> {
    let fixture = two_risky_fixture();
    let Instance::Misreport { profile, tau, ballot, .. } = &fixture.instance else {
        unreachable!()
    };
    let a = VoterAnalysis::new(&RuleId::Gp, profile, tau, *ballot)?;
    for p in profile.roster().ids() {
        let status = match a.status(p) {
            PartyStatus::Safe => "safe",
            PartyStatus::Risky => "risky",
            PartyStatus::Out => "out",
        };
        println!("{}: {}", profile.roster().name(p), status);
    }
    if let Some(v) = a.representative_violation() {
        println!("{}", v.narrative);
    }

    for v in gp_promote_fixture().violations()? {
        println!("{}", v.narrative);
    }

    for rule in [RuleId::Uninominal, RuleId::Stv] {
        let ci = coalition_insurance_fixture(&rule)?;
        println!(
            "coalition insurance under {}: {} -> {}, liked share {} -> {}",
            rule.as_str(),
            ci.before.format_set(ci.outcome_before),
            ci.after.format_set(ci.outcome_after),
            ci.liked_share_before,
            ci.liked_share_after
        );
    }
    Ok(())
}
