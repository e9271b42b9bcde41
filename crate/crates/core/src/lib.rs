//! Party selection rules for proportional elections with thresholds.
//!
//! Voters submit truncated rankings of parties. A rule selects a set of
//! parties such that every selected party is the most-preferred selected
//! party of at least `tau` voters. Each voter is then represented by her
//! favourite selected party, and seats are apportioned from those scores.
//!
//! ```
//! use partysel::{fixtures, rules, RuleId, Threshold};
//!
//! let profile = fixtures::example_one();
//! let tau = Threshold::from(5);
//! let stv = rules::run(RuleId::Stv, &profile, &tau).unwrap();
//! assert_eq!(profile.format_set(stv.outcome), "{b,d}");
//! ```

pub mod apportion;
pub mod augment;
pub mod axioms;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod io;
pub mod optrules;
pub mod party_set;
pub mod profile;
pub mod rules;
mod tally;
pub mod weight;

pub use error::{Error, Result};
pub use party_set::{PartyId, PartySet};
pub use profile::{Assignment, Ballot, Party, Profile, Roster, Threshold};
pub use rules::{RuleId, RuleResult, SelectionRule};
pub use weight::Weight;
