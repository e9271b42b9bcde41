//! Threshold sweep under multiplicative noise on party and voter weights.
//!
//! `cargo run --release --example noise -- 42`

use partysel::experiments::{noise_sweep, NoiseOptions, TauPoint};
use partysel::rules::RuleId;
use partysel::{fixtures, Weight};

fn main() -> partysel::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let options = NoiseOptions {
        samples: 100,
        sigma: 0.1,
        seed,
    };
    let p = fixtures::five_party_spectrum();
    let taus = TauPoint::relative_grid(&Weight::from_ratio(10, 100), &Weight::from_ratio(25, 100), 4)?;
    for rule in [RuleId::Do, RuleId::Stv, RuleId::Gp] {
        for point in noise_sweep(&p, rule, &taus, &options)?.points {
            let band = point.noise.expect("noise sweep");
            println!(
                "{:<4} tau {:>5.3}: p20 {:.3} median {:.3} p80 {:.3}",
                rule.as_str(),
                point.tau_weight.to_f64(),
                band.p20.to_f64(),
                band.median.to_f64(),
                band.p80.to_f64()
            );
        }
    }
    Ok(())
}
