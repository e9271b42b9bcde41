//! D'Hondt apportionment.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::party_set::PartyId;
use crate::rules::RuleResult;
use crate::weight::Weight;

/// Seats per party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeatAllocation<K: Ord> {
    pub seats: BTreeMap<K, u64>,
    pub house_size: u64,
}

impl<K: Ord> SeatAllocation<K> {
    pub fn get(&self, party: &K) -> u64 {
        self.seats.get(party).copied().unwrap_or(0)
    }
}

/// Hands out `house_size` seats one at a time, each to the party with the
/// largest quotient `score / (seats + 1)`. Equal quotients go to the party
/// listed first in `scores`.
pub fn dhondt<K: Ord + Clone>(scores: &[(K, Weight)], house_size: u64) -> Result<SeatAllocation<K>> {
    if house_size == 0 {
        return Err(Error::InvalidArgument("house size must be positive".into()));
    }
    if let Some((_, w)) = scores.iter().find(|(_, w)| w.is_negative()) {
        return Err(Error::NegativeWeight(w.to_string()));
    }
    if scores.iter().all(|(_, w)| w.is_zero()) {
        return Err(Error::AllZeroScores);
    }
    let mut seats = vec![0u64; scores.len()];
    for _ in 0..house_size {
        let mut best = 0;
        for i in 1..scores.len() {
            // s_i / (k_i + 1) > s_b / (k_b + 1), cross-multiplied.
            let lhs = scores[i].1.as_big() * BigInt::from(seats[best] + 1);
            let rhs = scores[best].1.as_big() * BigInt::from(seats[i] + 1);
            if lhs > rhs {
                best = i;
            }
        }
        seats[best] += 1;
    }
    Ok(SeatAllocation {
        seats: scores.iter().map(|(k, _)| k.clone()).zip(seats).collect(),
        house_size,
    })
}

/// Apportions seats among the selected parties of `result` by their scores,
/// breaking quotient ties by the roster priority order.
pub fn seats_for_result(
    result: &RuleResult,
    roster: &crate::profile::Roster,
    house_size: u64,
) -> Result<SeatAllocation<PartyId>> {
    if result.outcome.is_empty() {
        return Err(Error::EmptyOutcome);
    }
    let scores: Vec<(PartyId, Weight)> = roster
        .by_priority()
        .iter()
        .filter_map(|p| result.assignment.scores.get(p).map(|s| (*p, s.clone())))
        .collect();
    dhondt(&scores, house_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::profile::Threshold;
    use crate::rules::{run, RuleId};
    use proptest::prelude::*;

    fn alloc(scores: &[u64], house: u64) -> Vec<u64> {
        let s: Vec<(usize, Weight)> = scores.iter().enumerate().map(|(i, &x)| (i, Weight::from(x))).collect();
        let a = dhondt(&s, house).unwrap();
        (0..scores.len()).map(|i| a.get(&i)).collect()
    }

    #[test]
    fn spectrum_allocations() {
        assert_eq!(alloc(&[36, 29, 35], 10), [4, 3, 3]);
        assert_eq!(alloc(&[15, 25, 35], 10), [2, 3, 5]);
        assert_eq!(alloc(&[20, 20, 25, 35], 10), [2, 2, 2, 4]);
    }

    #[test]
    fn seats_from_results() {
        let p = fixtures::five_party_spectrum();
        let tau = Threshold::from(15);
        let seats = |rule| {
            let r = run(rule, &p, &tau).unwrap();
            let a = seats_for_result(&r, p.roster(), 10).unwrap();
            ["Red", "Pink", "Blue", "Brown"].map(|n| a.get(&p.roster().id(n).unwrap()))
        };
        assert_eq!(seats(RuleId::Do), [4, 0, 3, 3]);
        assert_eq!(seats(RuleId::Uninominal), [2, 0, 3, 5]);
        assert_eq!(seats(RuleId::Stv), [2, 2, 2, 4]);
        assert_eq!(seats(RuleId::Gp), [2, 2, 2, 4]);
    }

    #[test]
    fn errors() {
        assert_eq!(dhondt(&[(0, Weight::zero())], 3).unwrap_err(), Error::AllZeroScores);
        assert!(dhondt(&[(0, Weight::one())], 0).is_err());
        let p = fixtures::example_one();
        let r = run(RuleId::Do, &p, &Threshold::from(15)).unwrap();
        assert_eq!(seats_for_result(&r, p.roster(), 5).unwrap_err(), Error::EmptyOutcome);
        let r = run(RuleId::Do, &p, &Threshold::from(5)).unwrap();
        let a = seats_for_result(&r, p.roster(), 7).unwrap();
        assert_eq!(a.get(&PartyId(3)), 7);
    }

    #[test]
    fn ties_follow_listing_order() {
        assert_eq!(alloc(&[1, 1], 1), [1, 0]);
        assert_eq!(alloc(&[0, 5], 3), [0, 3]);
    }

    proptest! {
        #[test]
        fn seats_sum_to_house(scores in proptest::collection::vec(0u64..1000, 1..6), house in 1u64..40) {
            prop_assume!(scores.iter().any(|&s| s > 0));
            prop_assert_eq!(alloc(&scores, house).iter().sum::<u64>(), house);
        }

        #[test]
        fn scale_invariant(scores in proptest::collection::vec(0u64..1000, 1..6), house in 1u64..40, k in 1u64..9) {
            prop_assume!(scores.iter().any(|&s| s > 0));
            let scaled: Vec<u64> = scores.iter().map(|s| s * k).collect();
            prop_assert_eq!(alloc(&scores, house), alloc(&scaled, house));
        }

        #[test]
        fn house_monotone(scores in proptest::collection::vec(0u64..1000, 1..6), house in 1u64..40) {
            prop_assume!(scores.iter().any(|&s| s > 0));
            let a = alloc(&scores, house);
            let b = alloc(&scores, house + 1);
            let diffs: Vec<i64> = a.iter().zip(&b).map(|(x, y)| *y as i64 - *x as i64).collect();
            prop_assert_eq!(diffs.iter().filter(|&&d| d == 1).count(), 1);
            prop_assert!(diffs.iter().all(|&d| d == 0 || d == 1));
        }
    }
}
