//! Every rule on the four-party example, with scores and lost votes.
//!
//! `cargo run --example compute_rules`

use partysel::rules::{self, RuleId};
use partysel::{fixtures, Threshold};

fn main() -> partysel::Result<()> {
    let profile = fixtures::example_one();
    let tau = Threshold::from(5);
    let all = [
        RuleId::Uninominal,
        RuleId::Do,
        RuleId::Stv,
        RuleId::Gp,
        RuleId::MaxP,
        RuleId::MaxR,
        RuleId::DoPlus,
        RuleId::StvPlus,
        RuleId::GpPlus,
    ];
    for rule in all {
        let r = rules::run(rule, &profile, &tau)?;
        let scores: Vec<String> = r
            .assignment
            .scores
            .iter()
            .map(|(p, s)| format!("{}={}", profile.roster().name(*p), s))
            .collect();
        println!(
            "{:<10} {:<8} scores {:<12} unrepresented {}",
            rule.as_str(),
            profile.format_set(r.outcome),
            scores.join(","),
            r.assignment.unrepresented_weight(&profile)
        );
    }

    // STV eliminations, step by step.
    for e in rules::run(RuleId::Stv, &profile, &tau)?.trace {
        println!("stv step {}: {:?} {} with {}", e.step, e.action, profile.roster().name(e.party), e.score);
    }

    // Outcomes reachable under some tie-breaking order.
    let tied = partysel::Profile::from_rankings(&["a", "b"], &[(2, "a>b"), (2, "b>a")])?;
    for set in rules::run_parallel_universe(RuleId::Stv, &tied, &Threshold::from(3))? {
        println!("reachable: {}", tied.format_set(set));
    }
    Ok(())
}
