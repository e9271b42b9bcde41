//! Reading and writing profile files, and the JSON report of a run.
//!
//! `cargo run --example profile_files`

use partysel::io::{compute_report, parse_profile, to_json, write_profile};
use partysel::rules::{self, RuleId};

const TEXT: &str = "# two large parties and a small one
#! parties: a,b,c
#! tau: 5%
100: a
100: b
99: c>b
2.5: c
";

fn main() -> partysel::Result<()> {
    let doc = parse_profile(TEXT)?;
    let tau = doc.threshold().expect("tau header")?;
    println!("total weight {}, tau {}", doc.profile.total_weight(), tau);
    print!("{}", write_profile(&doc));

    let result = rules::run(RuleId::Stv, &doc.profile, &tau)?;
    print!("{}", to_json(&compute_report(&doc.profile, &tau, &result, None, None)));

    // Errors point at the offending line and column.
    if let Err(e) = parse_profile("#! parties: a,b\n1: a>z\n") {
        println!("{}", e);
    }
    Ok(())
}
