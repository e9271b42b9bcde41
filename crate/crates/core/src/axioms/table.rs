//! The property table of DO, STV and GP, and its verification: every
//! violated cell must be flagged on its stored fixture and every satisfied
//! cell must survive a random search.

use serde::{Deserialize, Serialize};

use super::fixtures::table_fixtures;
use super::search::{random_search_with, SearchBounds, SearchOptions, SearchOutcome};
use super::{AxiomId, Violation};
use crate::error::Result;
use crate::rules::RuleId;

/// Rows of the table, in order.
pub const ROWS: [AxiomId; 11] = [
    AxiomId::SetMaximality,
    AxiomId::DirectWinners,
    AxiomId::SolidCoalitions,
    AxiomId::ThresholdMonotonicity,
    AxiomId::Idlp,
    AxiomId::CloneIndependence,
    AxiomId::Reinforcement,
    AxiomId::Monotonicity,
    AxiomId::RepSpOneRisky,
    AxiomId::ShareSpSafeTop2,
    AxiomId::ShareSpPromote,
];

/// Columns of the table.
pub const COLUMNS: [RuleId; 3] = [RuleId::Do, RuleId::Stv, RuleId::Gp];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub axiom: AxiomId,
    pub rule: RuleId,
    pub satisfied: bool,
    /// The positive result only holds on generic profiles.
    pub generic_only: bool,
}

/// Whether `rule` satisfies `axiom` according to the table.
pub fn expected(axiom: AxiomId, rule: RuleId) -> bool {
    use AxiomId::*;
    use RuleId::{Do, Gp, Stv};
    matches!(
        (axiom, rule),
        (SetMaximality, Gp)
            | (DirectWinners, Do | Stv | Gp)
            | (SolidCoalitions, Stv)
            | (ThresholdMonotonicity, Do | Stv)
            | (Idlp, Stv)
            | (CloneIndependence, Stv)
            | (Reinforcement, Do)
            | (Monotonicity, Do)
            | (RepSpOneRisky, Gp)
            | (ShareSpSafeTop2, Do)
            | (ShareSpPromote, Do | Gp)
    )
}

/// All 33 cells, row by row.
pub fn cells() -> Vec<Cell> {
    ROWS.iter()
        .flat_map(|&axiom| {
            COLUMNS.iter().map(move |&rule| Cell {
                axiom,
                rule,
                satisfied: expected(axiom, rule),
                generic_only: rule == RuleId::Stv && matches!(axiom, AxiomId::Idlp | AxiomId::CloneIndependence),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellCheck {
    /// A violated cell whose fixture is flagged.
    Flagged(Box<Violation>),
    /// A violated cell whose fixture is missing or not flagged.
    Unflagged,
    /// A satisfied cell, with the random search result.
    Searched(SearchOutcome),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellReport {
    pub cell: Cell,
    pub check: CellCheck,
}

impl CellReport {
    /// Whether the check agrees with the table.
    pub fn agrees(&self) -> bool {
        match &self.check {
            CellCheck::Flagged(_) => !self.cell.satisfied,
            CellCheck::Unflagged => false,
            CellCheck::Searched(out) => self.cell.satisfied && out.is_pass(),
        }
    }
}

/// Checks the violated cells on their fixtures.
pub fn check_fixture_cells() -> Result<Vec<CellReport>> {
    let fixtures = table_fixtures();
    let mut out = Vec::new();
    for cell in cells().into_iter().filter(|c| !c.satisfied) {
        let fixture = fixtures.iter().find(|f| f.axiom == cell.axiom && f.rules.contains(&cell.rule));
        let check = match fixture {
            Some(f) => match f.instance.check(cell.axiom, &cell.rule)? {
                Some(v) => CellCheck::Flagged(Box::new(v)),
                None => CellCheck::Unflagged,
            },
            None => CellCheck::Unflagged,
        };
        out.push(CellReport { cell, check });
    }
    Ok(out)
}

/// Searches one satisfied cell.
pub fn search_cell(cell: Cell, trials: u64, bounds: SearchBounds, seed: u64) -> Result<CellReport> {
    let options = SearchOptions {
        generic_only: cell.generic_only,
        ..SearchOptions::default()
    };
    let out = random_search_with(cell.axiom, &cell.rule, trials, bounds, seed, options)?;
    Ok(CellReport {
        cell,
        check: CellCheck::Searched(out),
    })
}

/// Checks the whole table: fixtures for violated cells, `trials` random
/// trials for satisfied ones.
pub fn verify_table(trials: u64, bounds: SearchBounds, seed: u64) -> Result<Vec<CellReport>> {
    let mut reports = check_fixture_cells()?;
    for cell in cells().into_iter().filter(|c| c.satisfied) {
        reports.push(search_cell(cell, trials, bounds, seed)?);
    }
    Ok(reports)
}

/// The table as text, `✓` or `✗` per cell.
pub fn render() -> String {
    let mut s = format!("{:<24}", "");
    for r in COLUMNS {
        s.push_str(&format!("{:>5}", r.as_str().to_uppercase()));
    }
    s.push('\n');
    for axiom in ROWS {
        s.push_str(&format!("{:<24}", axiom.as_str()));
        for rule in COLUMNS {
            s.push_str(&format!("{:>5}", if expected(axiom, rule) { "✓" } else { "✗" }));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let c = cells();
        assert_eq!(c.len(), 33);
        assert_eq!(c.iter().filter(|c| c.satisfied).count(), 15);
    }

    #[test]
    fn every_violated_cell_is_flagged() {
        let reports = check_fixture_cells().unwrap();
        assert_eq!(reports.len(), 18);
        for r in &reports {
            assert!(r.agrees(), "{:?}", r.cell);
        }
    }

    #[test]
    fn short_search_on_satisfied_cells() {
        for cell in cells().into_iter().filter(|c| c.satisfied) {
            let r = search_cell(cell, 100, SearchBounds::default(), 5).unwrap();
            assert!(r.agrees(), "{:?} {:?}", cell, r.check);
        }
    }
}
