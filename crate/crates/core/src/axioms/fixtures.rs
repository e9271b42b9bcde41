//! Stored instances on which a rule violates an axiom.
//!
//! Every ✗ cell of the DO/STV/GP property table has a fixture here, as do the
//! failures of MaxP and MaxR.

use super::{
    check_clone_independence, check_direct_winners, check_idlp, check_local_stability, check_misreport,
    check_monotonicity, check_reinforcement, check_set_maximality, check_solid_coalitions, check_threshold_monotonicity,
    check_unrepresented, check_weak_efficiency, AxiomId, ShareRestriction, Violation,
};
use crate::error::{Error, Result};
use crate::fixtures::example_one;
use crate::party_set::PartyId;
use crate::profile::{Ballot, Profile, Roster, Threshold};
use crate::rules::{RuleId, SelectionRule};

/// The data a checker needs besides the rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Single {
        profile: Profile,
        tau: Threshold,
    },
    ThresholdPair {
        profile: Profile,
        tau: Threshold,
        tau_prime: Threshold,
    },
    Clones {
        profile: Profile,
        tau: Threshold,
        pair: (PartyId, PartyId),
    },
    Reinforcement {
        p1: Profile,
        tau1: Threshold,
        p2: Profile,
        tau2: Threshold,
    },
    Lift {
        profile: Profile,
        tau: Threshold,
        ballot: usize,
        party: PartyId,
    },
    /// One voter's report; `restriction` selects the share variant.
    Misreport {
        profile: Profile,
        tau: Threshold,
        ballot: usize,
        report: Vec<PartyId>,
        restriction: Option<ShareRestriction>,
    },
}

impl Instance {
    /// Runs the checker of `axiom` on the instance.
    pub fn check(&self, axiom: AxiomId, rule: &dyn SelectionRule) -> Result<Option<Violation>> {
        match (self, axiom) {
            (Instance::Single { profile, tau }, _) => match axiom {
                AxiomId::SetMaximality => check_set_maximality(rule, profile, tau),
                AxiomId::WeakEfficiency => check_weak_efficiency(rule, profile, tau),
                AxiomId::DirectWinners => check_direct_winners(rule, profile, tau),
                AxiomId::SolidCoalitions => check_solid_coalitions(rule, profile, tau),
                AxiomId::LocalStability => check_local_stability(profile, tau, rule.select(profile, tau)?),
                AxiomId::Unrepresented => check_unrepresented(profile, tau, rule.select(profile, tau)?),
                _ => Err(unfit(axiom)),
            },
            (Instance::ThresholdPair { profile, tau, tau_prime }, AxiomId::ThresholdMonotonicity) => {
                check_threshold_monotonicity(rule, profile, tau, tau_prime)
            }
            (Instance::ThresholdPair { profile, tau, tau_prime }, AxiomId::Idlp) => {
                check_idlp(rule, profile, tau, tau_prime)
            }
            (Instance::Clones { profile, tau, pair }, AxiomId::CloneIndependence) => {
                check_clone_independence(rule, profile, tau, *pair)
            }
            (Instance::Reinforcement { p1, tau1, p2, tau2 }, AxiomId::Reinforcement) => {
                check_reinforcement(rule, p1, tau1, p2, tau2)
            }
            (Instance::Lift { profile, tau, ballot, party }, AxiomId::Monotonicity) => {
                check_monotonicity(rule, profile, tau, *ballot, *party)
            }
            (
                Instance::Misreport { profile, tau, ballot, report, restriction },
                AxiomId::RepSpOneRisky | AxiomId::ShareSpSafeTop2 | AxiomId::ShareSpPromote,
            ) => check_misreport(rule, profile, tau, *ballot, report, *restriction),
            _ => Err(unfit(axiom)),
        }
    }
}

fn unfit(axiom: AxiomId) -> Error {
    Error::InvalidArgument(format!("instance does not fit axiom {}", axiom))
}

/// An instance and the rules it is a counterexample for.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub axiom: AxiomId,
    pub rules: Vec<RuleId>,
    pub instance: Instance,
}

impl Fixture {
    /// The violation of every listed rule, in order. Fails if some rule
    /// passes.
    pub fn violations(&self) -> Result<Vec<Violation>> {
        self.rules
            .iter()
            .map(|rule| {
                self.instance.check(self.axiom, rule)?.ok_or_else(|| {
                    Error::InvalidArgument(format!("{} satisfies {} on its fixture", rule, self.axiom))
                })
            })
            .collect()
    }
}

fn prof(parties: &[&str], ballots: &[(u64, &str)]) -> Profile {
    Profile::from_rankings(parties, ballots).expect("fixture profile")
}

fn ids(p: &Profile, names: &str) -> Vec<PartyId> {
    names
        .split('>')
        .filter(|s| !s.is_empty())
        .map(|n| p.roster().id(n).expect("fixture party"))
        .collect()
}

fn single(profile: Profile, tau: u64) -> Instance {
    Instance::Single {
        profile,
        tau: Threshold::from(tau),
    }
}

fn pair(profile: Profile, tau: u64, tau_prime: u64) -> Instance {
    Instance::ThresholdPair {
        profile,
        tau: Threshold::from(tau),
        tau_prime: Threshold::from(tau_prime),
    }
}

fn misreport(profile: Profile, tau: u64, ballot: usize, report: &str, restriction: Option<ShareRestriction>) -> Instance {
    let report = ids(&profile, report);
    Instance::Misreport {
        profile,
        tau: Threshold::from(tau),
        ballot,
        report,
        restriction,
    }
}

/// `{6:a, 4:c'≻c≻a, 3:c≻c'≻a}` with clones `c`, `c'`.
pub fn clone_profile() -> Profile {
    prof(&["a", "c", "c'"], &[(6, "a"), (4, "c'>c>a"), (3, "c>c'>a")])
}

/// `{3:a≻b, 2:b}`: GP picks `{a}` at 3 and `{b}` at 4.
pub fn threshold_profile() -> Profile {
    prof(&["a", "b"], &[(3, "a>b"), (2, "b")])
}

/// Counterexamples for the ✗ cells of DO, STV and GP.
pub fn table_fixtures() -> Vec<Fixture> {
    use AxiomId::*;
    use RuleId::{Do, Gp, Stv};
    let e1 = example_one();
    vec![
        Fixture {
            axiom: SetMaximality,
            rules: vec![Do, Stv],
            instance: single(prof(&["a", "b", "c"], &[(2, "b>c"), (1, "c")]), 3),
        },
        Fixture {
            axiom: SolidCoalitions,
            rules: vec![Do, Gp],
            instance: single(prof(&["a", "b", "c"], &[(4, "a>b>c"), (3, "b>c>a"), (2, "c>b>a")]), 5),
        },
        Fixture {
            axiom: ThresholdMonotonicity,
            rules: vec![Gp],
            instance: pair(threshold_profile(), 3, 4),
        },
        Fixture {
            axiom: Idlp,
            rules: vec![Do],
            instance: pair(prof(&["a", "b"], &[(2, "a"), (1, "b>a")]), 2, 3),
        },
        Fixture {
            axiom: Idlp,
            rules: vec![Gp],
            instance: pair(threshold_profile(), 3, 4),
        },
        Fixture {
            axiom: CloneIndependence,
            rules: vec![Do, Gp],
            instance: Instance::Clones {
                profile: clone_profile(),
                tau: Threshold::from(7),
                pair: (PartyId(1), PartyId(2)),
            },
        },
        Fixture {
            axiom: Reinforcement,
            rules: vec![Stv],
            instance: Instance::Reinforcement {
                p1: e1.clone(),
                tau1: Threshold::from(5),
                p2: prof(&["a", "b", "c", "d"], &[(6, "a"), (1, "b"), (6, "c"), (6, "d")]),
                tau2: Threshold::from(1),
            },
        },
        Fixture {
            axiom: Reinforcement,
            rules: vec![Gp],
            instance: Instance::Reinforcement {
                p1: e1,
                tau1: Threshold::from(5),
                p2: prof(&["a", "b", "c", "d"], &[(1, "a"), (6, "b"), (6, "c"), (6, "d")]),
                tau2: Threshold::from(1),
            },
        },
        Fixture {
            axiom: Monotonicity,
            rules: vec![Stv],
            instance: Instance::Lift {
                profile: prof(
                    &["a", "b", "c", "d"],
                    &[(5, "a>c"), (6, "c"), (13, "d"), (4, "b>a"), (2, "b>c")],
                ),
                tau: Threshold::from(13),
                ballot: 4,
                party: PartyId(2),
            },
        },
        Fixture {
            axiom: Monotonicity,
            rules: vec![Gp],
            instance: Instance::Lift {
                profile: prof(&["a", "b", "c"], &[(5, "a>c"), (2, "a>b>c"), (6, "c>b"), (2, "b")]),
                tau: Threshold::from(7),
                ballot: 1,
                party: PartyId(1),
            },
        },
        Fixture {
            axiom: RepSpOneRisky,
            rules: vec![Do],
            instance: misreport(prof(&["a", "b", "c"], &[(1, "b>a"), (1, "a>c")]), 2, 0, "a>b", None),
        },
        Fixture {
            axiom: RepSpOneRisky,
            rules: vec![Stv],
            instance: misreport(prof(&["a", "b", "c"], &[(1, "b>c"), (1, "a>b")]), 2, 1, "b", None),
        },
        Fixture {
            axiom: ShareSpSafeTop2,
            rules: vec![Stv, Gp],
            instance: misreport(
                prof(&["a", "c", "b"], &[(1, "a>b"), (5, "a"), (3, "b>c"), (3, "c>a")]),
                4,
                0,
                "b",
                Some(ShareRestriction::SafeTop2),
            ),
        },
        Fixture {
            axiom: ShareSpPromote,
            rules: vec![Stv],
            instance: misreport(
                prof(
                    &["a", "b", "c", "d"],
                    &[(10, "b"), (4, "c>d"), (3, "d>c"), (2, "d>b"), (3, "a>c>d"), (1, "a>b>c>d")],
                ),
                10,
                5,
                "b>a>c>d",
                Some(ShareRestriction::PromoteRepresentative),
            ),
        },
    ]
}

/// Failures of MaxP and MaxR.
pub fn optimizer_fixtures() -> Vec<Fixture> {
    use RuleId::{MaxP, MaxR};
    vec![
        Fixture {
            axiom: AxiomId::DirectWinners,
            rules: vec![MaxP, MaxR],
            instance: single(prof(&["a", "b", "c"], &[(2, "a>b"), (2, "a>c"), (3, "c"), (3, "b")]), 4),
        },
        Fixture {
            axiom: AxiomId::ThresholdMonotonicity,
            rules: vec![MaxP, MaxR],
            instance: pair(
                prof(&["a", "b", "c"], &[(5, "a"), (1, "a>b"), (1, "a>c"), (4, "b"), (4, "c")]),
                5,
                7,
            ),
        },
        Fixture {
            axiom: AxiomId::Monotonicity,
            rules: vec![MaxP, MaxR],
            instance: Instance::Lift {
                profile: prof(
                    &["a", "b", "c"],
                    &[(5, "b"), (1, "b>c"), (5, "c"), (1, "c>b"), (3, "a>b"), (3, "a>c"), (4, "a")],
                ),
                tau: Threshold::from(9),
                ballot: 3,
                party: PartyId(1),
            },
        },
        Fixture {
            axiom: AxiomId::CloneIndependence,
            rules: vec![MaxP],
            instance: Instance::Clones {
                profile: clone_profile(),
                tau: Threshold::from(7),
                pair: (PartyId(1), PartyId(2)),
            },
        },
    ]
}

/// Failures of representation of unrepresented voters, repaired by the
/// augmented rules.
pub fn unrepresented_fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            axiom: AxiomId::Unrepresented,
            rules: vec![RuleId::Do],
            instance: single(prof(&["a", "b", "c"], &[(3, "a"), (2, "b>c"), (1, "c")]), 3),
        },
        Fixture {
            axiom: AxiomId::Unrepresented,
            rules: vec![RuleId::Gp],
            instance: single(prof(&["a", "b", "c", "d"], &[(3, "a"), (2, "b>a"), (2, "c>b"), (2, "d>b")]), 4),
        },
    ]
}

/// GP failing representative-strategyproofness once two parties are risky:
/// `{3:a, 2:b≻c, 1:c≻b≻a}` at 3, the last voter reporting `c≻a≻b`.
pub fn two_risky_fixture() -> Fixture {
    Fixture {
        axiom: AxiomId::RepSpOneRisky,
        rules: vec![RuleId::Gp],
        instance: misreport(prof(&["a", "b", "c"], &[(3, "a"), (2, "b>c"), (1, "c>b>a")]), 3, 2, "c>a>b", None),
    }
}

/// GP under the promote-representative restriction: `{d≻a≻b≻c, b≻d≻c,
/// a≻b≻d, c≻d, c≻d≻a, d≻c≻b≻a}` at 3, priority `c,a,d,b`. Truthfully GP
/// picks `{c,b}` and the last voter is represented by `c`. Reporting only `c`
/// drops `d` behind `a` in the plurality order; when `d` comes up the
/// voter's vote stays with `c`, `{c,d}` is feasible and she gets `d`.
pub fn gp_promote_fixture() -> Fixture {
    let profile = prof(
        &["c", "a", "d", "b"],
        &[(1, "d>a>b>c"), (1, "b>d>c"), (1, "a>b>d"), (1, "c>d"), (1, "c>d>a"), (1, "d>c>b>a")],
    );
    Fixture {
        axiom: AxiomId::ShareSpPromote,
        rules: vec![RuleId::Gp],
        instance: misreport(profile, 3, 5, "c", Some(ShareRestriction::PromoteRepresentative)),
    }
}

/// GP where the manipulating voter has a single risky party, though other
/// voters have two: `{1:d≻e, 3:e, 2:d, 2:c≻d≻e}` at 4, priority `e,d,c`.
/// Ranking `d` first moves the `c≻d≻e` votes and the first voter to `d` at
/// once, `e` falls to 3 and `d` is skipped. Reporting only `e` keeps `e` at 4
/// and `d` gets in. The one-risky condition therefore has to hold for every
/// voter, not only the manipulator.
pub fn gp_one_risky_fixture() -> Fixture {
    Fixture {
        axiom: AxiomId::RepSpOneRisky,
        rules: vec![RuleId::Gp],
        instance: misreport(prof(&["e", "d", "c"], &[(1, "d>e"), (3, "e"), (2, "d"), (2, "c>d>e")]), 4, 0, "e", None),
    }
}

/// A Condorcet cycle over `tau + 1` parties among `tau + 1` voters, padded
/// with `n - tau - 1` voters ranking only a dummy party. No feasible outcome
/// is locally stable. Requires `2 <= tau < n`.
pub fn local_stability_family(n: usize, tau: usize) -> Result<Profile> {
    if tau < 2 || tau >= n {
        return Err(Error::InvalidArgument(format!("need 2 <= tau < n, got tau={} n={}", tau, n)));
    }
    let k = tau + 1;
    let mut names: Vec<String> = (1..=k).map(|i| format!("c{}", i)).collect();
    names.push("d".into());
    let roster = Roster::from_names(&names)?;
    let mut ballots = Vec::with_capacity(n);
    for i in 0..k {
        ballots.push(Ballot::unit((0..k).map(|j| PartyId((i + j) % k)).collect()));
    }
    for _ in k..n {
        ballots.push(Ballot::unit(vec![PartyId(k)]));
    }
    Profile::new(roster, ballots)
}
