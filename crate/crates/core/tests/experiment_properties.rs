use std::collections::BTreeMap;

use proptest::prelude::*;

use partysel::experiments::{
    compute_weights, first_choice_groups, noisy_profile, percentile, rank_distribution, unrepresented_share,
    NoiseOptions, SurveyRow,
};
use partysel::{rules, Ballot, PartyId, Profile, Roster, RuleId, Threshold, Weight};

fn ranking(m: usize) -> impl Strategy<Value = Vec<PartyId>> {
    (Just((0..m).map(PartyId).collect::<Vec<_>>()).prop_shuffle(), 0..=m).prop_map(|(mut r, len)| {
        r.truncate(len);
        r
    })
}

fn profile() -> impl Strategy<Value = Profile> {
    (1usize..=5).prop_flat_map(|m| {
        prop::collection::vec((1u64..=4, ranking(m)), 1..=10).prop_map(move |ballots| {
            let names: Vec<String> = (0..m).map(|i| format!("p{}", i)).collect();
            let ballots = ballots
                .into_iter()
                .map(|(w, r)| Ballot::new(r, Weight::from(w)))
                .collect();
            Profile::new(Roster::from_names(&names).unwrap(), ballots).unwrap()
        })
    })
}

fn instance() -> impl Strategy<Value = (Profile, Threshold)> {
    profile().prop_flat_map(|p| {
        let n: u64 = p.total_weight().ceil_integer().try_into().unwrap();
        (Just(p), 0..=n).prop_map(|(p, t)| (p, Threshold::from(t)))
    })
}

const RULES: [RuleId; 4] = [RuleId::Do, RuleId::Stv, RuleId::Gp, RuleId::Uninominal];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shares_and_ranks_add_up((p, tau) in instance()) {
        for rule in RULES {
            let u = unrepresented_share(&p, rule, &tau).unwrap();
            prop_assert!(u >= Weight::zero() && u <= Weight::one());
            let ranks: Weight = rank_distribution(&p, rule, &tau).unwrap().into_values().sum();
            prop_assert_eq!(ranks + u, Weight::one());
        }
    }

    #[test]
    fn stv_and_gp_leave_fewer_voters_out_than_do((p, tau) in instance()) {
        let d = unrepresented_share(&p, RuleId::Do, &tau).unwrap();
        for rule in [RuleId::Stv, RuleId::Gp] {
            prop_assert!(unrepresented_share(&p, rule, &tau).unwrap() <= d);
        }
    }

    #[test]
    fn full_truncation_changes_nothing((p, tau) in instance()) {
        let t = p.truncate(p.num_parties()).unwrap();
        for rule in RULES {
            prop_assert_eq!(rules::select(rule, &t, &tau).unwrap(), rules::select(rule, &p, &tau).unwrap());
        }
    }

    #[test]
    fn uninominal_ignores_lower_ranks((p, tau) in instance()) {
        let first = p.truncate(1).unwrap();
        prop_assert_eq!(
            unrepresented_share(&p, RuleId::Uninominal, &tau).unwrap(),
            unrepresented_share(&first, RuleId::Do, &tau).unwrap()
        );
    }

    #[test]
    fn zero_noise_keeps_weights(p in profile(), sample in 0usize..50, seed in any::<u64>()) {
        let options = NoiseOptions { samples: 50, sigma: 0.0, seed };
        prop_assert_eq!(noisy_profile(&p, &first_choice_groups(&p), sample, &options).unwrap(), p);
    }

    #[test]
    fn noise_is_a_function_of_seed_and_sample(p in profile(), sample in 0usize..50, seed in any::<u64>()) {
        let options = NoiseOptions { samples: 50, sigma: 0.2, seed };
        let groups = first_choice_groups(&p);
        let a = noisy_profile(&p, &groups, sample, &options).unwrap();
        prop_assert_eq!(&a, &noisy_profile(&p, &groups, sample, &options).unwrap());
        for b in a.ballots() {
            prop_assert!(!b.weight.is_negative());
        }
    }

    #[test]
    fn percentiles_are_ordered(values in prop::collection::vec(0i64..1000, 1..40)) {
        let values: Vec<Weight> = values.into_iter().map(Weight::from_integer).collect();
        let q = |n, d| percentile(&values, &Weight::from_ratio(n, d)).unwrap();
        let (p20, median, p80) = (q(1, 5), q(1, 2), q(4, 5));
        prop_assert!(values.iter().min().unwrap() <= &p20);
        prop_assert!(p20 <= median && median <= p80);
        prop_assert!(&p80 <= values.iter().max().unwrap());
    }

    #[test]
    fn weighted_sample_matches_official_shares(
        intentions in prop::collection::vec(prop::option::of(0usize..3), 1..60),
    ) {
        let rows: Vec<SurveyRow> = intentions
            .iter()
            .enumerate()
            .map(|(i, c)| SurveyRow {
                respondent: i.to_string(),
                intention: c.map(PartyId),
                two_vote: Vec::new(),
                full_ranking: Vec::new(),
                completed_at: None,
                weight: Weight::one(),
            })
            .collect();
        let official: BTreeMap<PartyId, Weight> =
            [(0, (1, 2)), (1, (3, 10)), (2, (1, 5))].map(|(p, (n, d))| (PartyId(p), Weight::from_ratio(n, d))).into();
        let w = compute_weights(&rows, &official).unwrap();
        let answered = intentions.iter().filter(|c| c.is_some()).count();
        let total: Weight = w.weights.values().sum();
        prop_assert_eq!(total.clone(), Weight::from(answered));
        for (row, c) in rows.iter().zip(&intentions) {
            if c.is_none() {
                prop_assert!(w.weights[&row.respondent].is_zero());
            }
        }
        // Each intended party gets its official share among intended parties.
        let covered: Weight = official.iter().filter(|(p, _)| intentions.contains(&Some(p.0))).map(|(_, s)| s).sum();
        for (party, share) in &official {
            let mass: Weight = rows.iter().filter(|r| r.intention == Some(*party)).map(|r| w.weights[&r.respondent].clone()).sum();
            if !mass.is_zero() {
                prop_assert_eq!(mass / total.clone(), share.clone() / covered.clone());
            }
        }
    }
}
