//! Small named profiles used in documentation, examples and tests.

use crate::profile::Profile;

/// Four parties, fifteen voters; with `tau = 5` the three greedy rules all
/// disagree.
pub fn example_one() -> Profile {
    Profile::from_rankings(
        &["a", "b", "c", "d"],
        &[(4, "a>b>c"), (3, "b>c"), (2, "c>b>a"), (2, "d"), (4, "d>b")],
    )
    .expect("static profile")
}

/// Two large parties where the third party's voters all fall back to `b`.
pub fn lost_votes_example() -> Profile {
    Profile::from_rankings(&["a", "b", "c"], &[(100, "a"), (100, "b"), (99, "c>b")])
        .expect("static profile")
}

/// A five-party left/right spectrum with 100 voters, meant for `tau = 15`.
///
/// The `Brown>Blue` group has 35 voters, the size consistent with the stated
/// plurality scores (Brown 35) and the 100-voter total.
pub fn five_party_spectrum() -> Profile {
    Profile::from_rankings(
        &["Red", "Green", "Pink", "Blue", "Brown"],
        &[
            (8, "Red>Pink>Green"),
            (6, "Green>Pink>Red"),
            (5, "Pink>Green>Red"),
            (7, "Red>Green>Pink"),
            (5, "Green>Red>Pink"),
            (5, "Pink>Red>Green"),
            (10, "Blue>Pink"),
            (35, "Brown>Blue"),
            (4, "Pink>Blue>Green"),
            (15, "Blue>Brown"),
        ],
    )
    .expect("static profile")
}
