use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::metrics::{unrepresented_share, ExperimentReport, NoiseBand, SeriesPoint, SweepKind, TauPoint};
use super::stats::percentile;
use crate::error::{Error, Result};
use crate::party_set::PartyId;
use crate::profile::Profile;
use crate::rules::RuleId;
use crate::weight::Weight;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct NoiseOptions {
    pub samples: usize,
    /// Standard deviation of the multipliers, which have mean 1.
    pub sigma: f64,
    pub seed: u64,
}

impl Default for NoiseOptions {
    fn default() -> Self {
        NoiseOptions {
            samples: 100,
            sigma: 0.1,
            seed: 0,
        }
    }
}

/// The group of each ballot: its first-ranked party.
pub fn first_choice_groups(profile: &Profile) -> Vec<Option<PartyId>> {
    profile.ballots().iter().map(|b| b.ranking.first().copied()).collect()
}

/// Multiplier draws of one sample: one per party, then one per ballot.
///
/// Draws depend only on `(seed, sample)`, so samples can be computed in
/// any order. Negative draws are clamped to 0.
pub fn multipliers(m: usize, n: usize, sample: usize, options: &NoiseOptions) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(options.sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!("sigma {} must be non-negative", options.sigma)));
    }
    let normal = Normal::new(1.0, options.sigma)
        .map_err(|e| Error::InvalidArgument(format!("sigma {}: {}", options.sigma, e)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    rng.set_stream(sample as u64);
    let mut draw = || normal.sample(&mut rng).max(0.0);
    let parties = (0..m).map(|_| draw()).collect();
    let voters = (0..n).map(|_| draw()).collect();
    Ok((parties, voters))
}

/// The profile of one sample: every ballot's weight is multiplied by its
/// group's multiplier and by its own. Ballots without a group only get
/// their own.
pub fn noisy_profile(
    profile: &Profile,
    groups: &[Option<PartyId>],
    sample: usize,
    options: &NoiseOptions,
) -> Result<Profile> {
    let n = profile.ballots().len();
    if groups.len() != n {
        return Err(Error::InvalidArgument(format!("{} groups for {} ballots", groups.len(), n)));
    }
    let (party, voter) = multipliers(profile.num_parties(), n, sample, options)?;
    let exact = |x: f64| Weight::from_f64_exact(x).ok_or_else(|| Error::InvalidArgument(format!("multiplier {}", x)));
    let weights = profile
        .ballots()
        .iter()
        .zip(groups)
        .zip(&voter)
        .map(|((b, g), v)| {
            let mut w = &b.weight * &exact(*v)?;
            if let Some(c) = g {
                let pm = party.get(c.index()).ok_or(Error::PartyOutOfRange(c.index()))?;
                w = w * exact(*pm)?;
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?;
    profile.reweighted(weights)
}

/// Noise sweep with ballots grouped by their first-ranked party.
pub fn noise_sweep(profile: &Profile, rule: RuleId, taus: &[TauPoint], options: &NoiseOptions) -> Result<ExperimentReport> {
    noise_sweep_grouped(profile, &first_choice_groups(profile), rule, taus, options)
}

/// Runs `rule` over `taus` on the profile and on `options.samples` noisy
/// copies of it. Each point carries the noiseless values and the 20th,
/// 50th and 80th percentiles of the noisy unrepresented share. Relative
/// thresholds resolve against each sample's own total weight.
pub fn noise_sweep_grouped(
    profile: &Profile,
    groups: &[Option<PartyId>],
    rule: RuleId,
    taus: &[TauPoint],
    options: &NoiseOptions,
) -> Result<ExperimentReport> {
    if options.samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is needed".into()));
    }
    let per_sample = (0..options.samples)
        .into_par_iter()
        .map(|s| {
            let p = noisy_profile(profile, groups, s, options)?;
            taus.iter()
                .map(|t| {
                    let tau = t.resolve(&p)?;
                    unrepresented_share(&p, rule, &tau)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::with_capacity(taus.len());
    for (i, t) in taus.iter().enumerate() {
        let mut pt = SeriesPoint::evaluate(profile, rule, t.clone(), None)?;
        let samples: Vec<Weight> = per_sample.iter().map(|s| s[i].clone()).collect();
        let q = |n, d| percentile(&samples, &Weight::from_ratio(n, d)).expect("at least one sample");
        pt.noise = Some(NoiseBand {
            p20: q(1, 5),
            median: q(1, 2),
            p80: q(4, 5),
            samples,
        });
        points.push(pt);
    }
    Ok(ExperimentReport {
        rule,
        kind: SweepKind::Noise {
            samples: options.samples,
            sigma: options.sigma,
            seed: options.seed,
        },
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn grid() -> Vec<TauPoint> {
        TauPoint::relative_grid(&Weight::from_ratio(1, 100), &Weight::from_ratio(30, 100), 8).unwrap()
    }

    #[test]
    fn zero_sigma_reproduces_the_plain_run() {
        let p = fixtures::five_party_spectrum();
        let opts = NoiseOptions {
            samples: 5,
            sigma: 0.0,
            seed: 3,
        };
        assert_eq!(noisy_profile(&p, &first_choice_groups(&p), 2, &opts).unwrap(), p);
        let r = noise_sweep(&p, RuleId::Stv, &grid(), &opts).unwrap();
        for pt in &r.points {
            let band = pt.noise.as_ref().unwrap();
            assert!(band.samples.iter().all(|s| *s == pt.unrepresented));
            assert_eq!(band.median, pt.unrepresented);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let p = fixtures::example_one();
        let opts = NoiseOptions {
            samples: 12,
            sigma: 0.1,
            seed: 99,
        };
        let a = noise_sweep(&p, RuleId::Gp, &grid(), &opts).unwrap();
        let b = noise_sweep(&p, RuleId::Gp, &grid(), &opts).unwrap();
        assert_eq!(a, b);
        let c = noise_sweep(&p, RuleId::Gp, &grid(), &NoiseOptions { seed: 100, ..opts }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn multipliers_depend_on_sample_only() {
        let opts = NoiseOptions::default();
        let (a, _) = multipliers(3, 4, 7, &opts).unwrap();
        let (b, _) = multipliers(3, 9, 7, &opts).unwrap();
        assert_eq!(a, b);
        assert_ne!(multipliers(3, 4, 8, &opts).unwrap().0, a);
        assert!(multipliers(3, 4, 0, &NoiseOptions { sigma: -1.0, ..opts }).is_err());
    }

    #[test]
    fn do_never_represents_more() {
        let p = fixtures::five_party_spectrum();
        let opts = NoiseOptions {
            samples: 20,
            sigma: 0.1,
            seed: 1,
        };
        let band = |rule| noise_sweep(&p, rule, &grid(), &opts).unwrap();
        let (d, s, g) = (band(RuleId::Do), band(RuleId::Stv), band(RuleId::Gp));
        for i in 0..d.points.len() {
            let samples = |r: &ExperimentReport| r.points[i].noise.clone().unwrap().samples;
            for ((x, y), z) in samples(&d).iter().zip(samples(&s)).zip(samples(&g)) {
                assert!(y <= *x && z <= *x);
            }
        }
    }
}
