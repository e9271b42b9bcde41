//! Local search that adds parties with enough unrepresented supporters.
//!
//! `cargo run --example augmentation`

use partysel::augment::augment;
use partysel::rules::{self, RuleId};
use partysel::{Profile, Threshold};

fn main() -> partysel::Result<()> {
    let p = Profile::from_rankings(&["a", "b", "c", "d"], &[(3, "a"), (2, "b>a"), (2, "c>b"), (2, "d>b")])?;
    let tau = Threshold::from(4);
    let start = rules::select(RuleId::Gp, &p, &tau)?;
    let (outcome, trace) = augment(&p, &tau, start)?;
    println!("start {}", p.format_set(trace.start));
    for s in &trace.steps {
        println!(
            "add {} ({} unrepresented), drop {} -> {}",
            p.roster().name(s.added),
            s.unrepresented_support,
            p.format_set(s.removed),
            p.format_set(s.outcome)
        );
    }
    println!("gp+ {}", p.format_set(outcome));
    Ok(())
}
