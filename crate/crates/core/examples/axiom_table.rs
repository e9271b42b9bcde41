//! The property table: fixtures for the violated cells and a short random
//! search for the satisfied ones.
//!
//! `cargo run --release --example axiom_table -- 500`

use partysel::axioms::search::SearchBounds;
use partysel::axioms::table::{self, CellCheck};

fn main() -> partysel::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    print!("{}", table::render());
    for report in table::verify_table(trials, SearchBounds::default(), 1)? {
        let detail = match &report.check {
            CellCheck::Flagged(v) => v.narrative.clone(),
            CellCheck::Unflagged => "no fixture".into(),
            CellCheck::Searched(out) => match out.violation() {
                Some(v) => format!("counterexample: {}", v.narrative),
                None => format!("{} trials without a violation", trials),
            },
        };
        let mark = if report.agrees() { " " } else { "!" };
        println!("{} {:<24}{:<5}{}", mark, report.cell.axiom.as_str(), report.cell.rule.as_str(), detail);
    }
    Ok(())
}
