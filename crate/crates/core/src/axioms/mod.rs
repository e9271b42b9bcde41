//! Executable axioms.
//!
//! Each checker takes a rule (anything implementing
//! [`SelectionRule`](crate::rules::SelectionRule)) and an instance, and
//! returns `Ok(None)` when the instance satisfies the axiom or a
//! [`Violation`] describing a counterexample. Violations carry enough data to
//! be re-checked with [`Violation::replay`].

mod checks;
pub mod fixtures;
pub mod search;
mod strategy;
pub mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use checks::*;
pub use strategy::*;
pub use search::{check_instance, InstanceCheck};

use crate::error::{Error, Result};
use crate::party_set::{PartyId, PartySet};
use crate::profile::{Profile, Threshold};
use crate::rules::SelectionRule;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AxiomId {
    SetMaximality,
    WeakEfficiency,
    DirectWinners,
    SolidCoalitions,
    LocalStability,
    Unrepresented,
    ThresholdMonotonicity,
    Idlp,
    CloneIndependence,
    Reinforcement,
    Monotonicity,
    RepSpOneRisky,
    ShareSpSafeTop2,
    ShareSpPromote,
}

impl AxiomId {
    pub const ALL: [AxiomId; 14] = [
        AxiomId::SetMaximality,
        AxiomId::WeakEfficiency,
        AxiomId::DirectWinners,
        AxiomId::SolidCoalitions,
        AxiomId::LocalStability,
        AxiomId::Unrepresented,
        AxiomId::ThresholdMonotonicity,
        AxiomId::Idlp,
        AxiomId::CloneIndependence,
        AxiomId::Reinforcement,
        AxiomId::Monotonicity,
        AxiomId::RepSpOneRisky,
        AxiomId::ShareSpSafeTop2,
        AxiomId::ShareSpPromote,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomId::SetMaximality => "SET_MAXIMALITY",
            AxiomId::WeakEfficiency => "WEAK_EFFICIENCY",
            AxiomId::DirectWinners => "DIRECT_WINNERS",
            AxiomId::SolidCoalitions => "SOLID_COALITIONS",
            AxiomId::LocalStability => "LOCAL_STABILITY",
            AxiomId::Unrepresented => "UNREPRESENTED",
            AxiomId::ThresholdMonotonicity => "THRESHOLD_MONOTONICITY",
            AxiomId::Idlp => "IDLP",
            AxiomId::CloneIndependence => "CLONE_INDEPENDENCE",
            AxiomId::Reinforcement => "REINFORCEMENT",
            AxiomId::Monotonicity => "MONOTONICITY",
            AxiomId::RepSpOneRisky => "REP_SP_ONE_RISKY",
            AxiomId::ShareSpSafeTop2 => "SHARE_SP_SAFE_TOP2",
            AxiomId::ShareSpPromote => "SHARE_SP_PROMOTE",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            AxiomId::SetMaximality => "set-maximality",
            AxiomId::WeakEfficiency => "weak efficiency",
            AxiomId::DirectWinners => "inclusion of direct winners",
            AxiomId::SolidCoalitions => "representation of solid coalitions",
            AxiomId::LocalStability => "local stability",
            AxiomId::Unrepresented => "representation of unrepresented voters",
            AxiomId::ThresholdMonotonicity => "threshold monotonicity",
            AxiomId::Idlp => "independence of definitely losing parties",
            AxiomId::CloneIndependence => "independence of clones",
            AxiomId::Reinforcement => "reinforcement for winning parties",
            AxiomId::Monotonicity => "monotonicity",
            AxiomId::RepSpOneRisky => "representative-strategyproofness (one risky party)",
            AxiomId::ShareSpSafeTop2 => "share-strategyproofness (safe first or second)",
            AxiomId::ShareSpPromote => "share-strategyproofness (representative ranked first)",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        AxiomId::ALL
            .iter()
            .copied()
            .find(|a| a.as_str() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown axiom `{}`", s)))
    }
}

/// Which misreports and voters a share-strategyproofness check considers.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ShareRestriction {
    /// Every misreport.
    None,
    /// Every misreport; the instance is expected to give the voter a safe
    /// party among her top two (see [`safe_top2`]).
    SafeTop2,
    /// Only misreports that rank the truthful representative first.
    PromoteRepresentative,
}

/// The data instantiating a violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A single instance; `outcome` is the rule's outcome and `culprit` the
    /// parties (or coalition) the axiom complains about.
    Outcome {
        profile: Profile,
        tau: Threshold,
        outcome: PartySet,
        culprit: PartySet,
    },
    ThresholdPair {
        profile: Profile,
        tau: Threshold,
        tau_prime: Threshold,
        outcome: PartySet,
        outcome_prime: PartySet,
    },
    Clones {
        profile: Profile,
        tau: Threshold,
        pair: (PartyId, PartyId),
        outcome: PartySet,
        /// Outcome without the second clone, mapped back to the full roster.
        outcome_without: PartySet,
    },
    Reinforcement {
        p1: Profile,
        tau1: Threshold,
        p2: Profile,
        tau2: Threshold,
        party: PartyId,
    },
    /// Moving `party` up in ballot `ballot` to obtain `lifted`.
    Lift {
        profile: Profile,
        tau: Threshold,
        ballot: usize,
        party: PartyId,
        lifted: Vec<PartyId>,
    },
    /// Ballot `ballot` (weight at most 1) reporting `misreport` instead.
    Misreport {
        profile: Profile,
        tau: Threshold,
        ballot: usize,
        misreport: Vec<PartyId>,
        restriction: Option<ShareRestriction>,
        outcome: PartySet,
        outcome_misreport: PartySet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: AxiomId,
    pub rule: String,
    pub witness: Witness,
    pub narrative: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated by {}: {}", self.axiom.description(), self.rule, self.narrative)
    }
}

impl Violation {
    /// Re-runs the checker that produced the violation on its witness.
    ///
    /// Axioms about a given outcome (local stability and representation of
    /// unrepresented voters) are re-checked on the stored outcome, and
    /// strategyproofness violations on the stored misreport; all other
    /// axioms re-run `rule`.
    pub fn replay(&self, rule: &dyn SelectionRule) -> Result<Option<Violation>> {
        match (&self.witness, self.axiom) {
            (Witness::Outcome { profile, tau, outcome, .. }, AxiomId::LocalStability) => {
                check_local_stability(profile, tau, *outcome)
            }
            (Witness::Outcome { profile, tau, outcome, .. }, AxiomId::Unrepresented) => {
                check_unrepresented(profile, tau, *outcome)
            }
            (Witness::Outcome { profile, tau, .. }, axiom) => match axiom {
                AxiomId::SetMaximality => check_set_maximality(rule, profile, tau),
                AxiomId::WeakEfficiency => check_weak_efficiency(rule, profile, tau),
                AxiomId::DirectWinners => check_direct_winners(rule, profile, tau),
                AxiomId::SolidCoalitions => check_solid_coalitions(rule, profile, tau),
                _ => Err(mismatch(axiom)),
            },
            (Witness::ThresholdPair { profile, tau, tau_prime, .. }, AxiomId::ThresholdMonotonicity) => {
                check_threshold_monotonicity(rule, profile, tau, tau_prime)
            }
            (Witness::ThresholdPair { profile, tau, tau_prime, .. }, AxiomId::Idlp) => {
                check_idlp(rule, profile, tau, tau_prime)
            }
            (Witness::Clones { profile, tau, pair, .. }, AxiomId::CloneIndependence) => {
                check_clone_independence(rule, profile, tau, *pair)
            }
            (Witness::Reinforcement { p1, tau1, p2, tau2, .. }, AxiomId::Reinforcement) => {
                check_reinforcement(rule, p1, tau1, p2, tau2)
            }
            (Witness::Lift { profile, tau, ballot, party, .. }, AxiomId::Monotonicity) => {
                check_monotonicity(rule, profile, tau, *ballot, *party)
            }
            (
                Witness::Misreport { profile, tau, ballot, misreport, restriction, .. },
                AxiomId::RepSpOneRisky | AxiomId::ShareSpSafeTop2 | AxiomId::ShareSpPromote,
            ) => check_misreport(rule, profile, tau, *ballot, misreport, *restriction),
            (_, axiom) => Err(mismatch(axiom)),
        }
    }

    /// The single-profile instance behind the violation, if there is one.
    pub fn profile(&self) -> &Profile {
        match &self.witness {
            Witness::Outcome { profile, .. }
            | Witness::ThresholdPair { profile, .. }
            | Witness::Clones { profile, .. }
            | Witness::Lift { profile, .. }
            | Witness::Misreport { profile, .. } => profile,
            Witness::Reinforcement { p1, .. } => p1,
        }
    }
}

fn mismatch(axiom: AxiomId) -> Error {
    Error::InvalidArgument(format!("witness does not fit axiom {}", axiom))
}

/// Safe, risky or out for one voter, given everyone else's ballots.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PartyStatus {
    /// Selected whatever the voter reports.
    Safe,
    /// Selected under some reports only.
    Risky,
    /// Selected under no report.
    Out,
}
