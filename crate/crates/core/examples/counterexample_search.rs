//! Random search for an axiom violation, and checking a single instance.
//!
//! `cargo run --release --example counterexample_search`

use partysel::axioms::search::{random_search, SearchBounds};
use partysel::axioms::{check_instance, AxiomId, InstanceCheck};
use partysel::rules::RuleId;
use partysel::{Profile, Threshold};

fn main() -> partysel::Result<()> {
    let bounds = SearchBounds {
        max_parties: 4,
        max_voters: 8,
        tau_range: None,
    };
    for (axiom, rule) in [(AxiomId::Idlp, RuleId::Do), (AxiomId::Idlp, RuleId::Stv), (AxiomId::Monotonicity, RuleId::Gp)] {
        let out = random_search(axiom, &rule, 2000, bounds, 7)?;
        match out.violation() {
            Some(v) => {
                println!("{} / {}: {}", axiom.description(), rule.as_str(), v.narrative);
                // Every witness replays to the same violation.
                assert_eq!(v.replay(&rule)?.as_ref(), Some(v));
            }
            None => println!("{} / {}: nothing found", axiom.description(), rule.as_str()),
        }
    }

    let p = Profile::from_rankings(&["a", "b"], &[(3, "a>b"), (2, "b")])?;
    match check_instance(AxiomId::ThresholdMonotonicity, &RuleId::Gp, &p, &Threshold::from(3))? {
        InstanceCheck::Violated(v) => println!("threshold monotonicity: {}", v.narrative),
        other => println!("threshold monotonicity: {:?}", other),
    }
    Ok(())
}
