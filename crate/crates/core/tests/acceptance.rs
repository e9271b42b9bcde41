//! Acceptance run: one PASS/FAIL/SKIP line per criterion.
//!
//! Criterion 10 needs the survey data set and official results; set
//! `PARTYSEL_SURVEY` (survey CSV, see `partysel convert`) and
//! `PARTYSEL_RESULTS` (official shares) to run it.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use partysel::apportion::seats_for_result;
use partysel::augment::run_augmented;
use partysel::axioms::fixtures::{gp_promote_fixture, local_stability_family, table_fixtures, two_risky_fixture};
use partysel::axioms::search::{random_instance, trial_rng, SearchBounds, SearchOutcome};
use partysel::axioms::table::{cells, check_fixture_cells, search_cell, CellCheck};
use partysel::axioms::{
    check_direct_winners, check_idlp, check_instance, check_local_stability, check_unrepresented, AxiomId,
    InstanceCheck,
};
use partysel::experiments::{self, noisy_profile, unrepresented_share, NoiseOptions, RankingSource, TauPoint};
use partysel::fixtures::{example_one, five_party_spectrum};
use partysel::optrules::{coverage, enumerate_feasible, objective_vector, run_maxp, run_maxr};
use partysel::{io, rules, Error, PartySet, Profile, RuleId, Threshold, Weight};

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Outcome = Result<Verdict, Error>;

fn verdict(failures: Vec<String>, pass: String) -> Verdict {
    if failures.is_empty() {
        Verdict::Pass(pass)
    } else {
        Verdict::Fail(failures.join("; "))
    }
}

fn example_exactness() -> Outcome {
    let p = example_one();
    let tau = Threshold::from(5);
    let expected = [
        (RuleId::Do, "{d}"),
        (RuleId::Stv, "{b,d}"),
        (RuleId::Gp, "{a,d}"),
        (RuleId::MaxP, "{a,d}"),
        (RuleId::MaxR, "{b,d}"),
    ];
    let mut failures = Vec::new();
    let mut times = Vec::new();
    for (rule, want) in expected {
        // Warm-up, then the slowest of five timed runs.
        rules::run(rule, &p, &tau)?;
        let mut slowest = Duration::ZERO;
        let mut got = PartySet::empty();
        for _ in 0..5 {
            let t = Instant::now();
            got = rules::run(rule, &p, &tau)?.outcome;
            slowest = slowest.max(t.elapsed());
        }
        if p.format_set(got) != want {
            failures.push(format!("{} gave {}, want {}", rule, p.format_set(got), want));
        }
        if slowest >= Duration::from_millis(1) {
            failures.push(format!("{} took {:?}", rule, slowest));
        }
        times.push(format!("{} {:?}", rule, slowest));
    }
    Ok(verdict(failures, times.join(", ")))
}

fn dhondt_seats() -> Outcome {
    let p = five_party_spectrum();
    let tau = Threshold::from(15);
    let cases: [(RuleId, &[(&str, u64, u64)]); 4] = [
        (RuleId::Do, &[("Red", 36, 4), ("Blue", 29, 3), ("Brown", 35, 3)]),
        (RuleId::Uninominal, &[("Red", 15, 2), ("Blue", 25, 3), ("Brown", 35, 5)]),
        (RuleId::Stv, &[("Red", 20, 2), ("Pink", 20, 2), ("Blue", 25, 2), ("Brown", 35, 4)]),
        (RuleId::Gp, &[("Red", 20, 2), ("Pink", 20, 2), ("Blue", 25, 2), ("Brown", 35, 4)]),
    ];
    let mut failures = Vec::new();
    for (rule, want) in cases {
        let r = rules::run(rule, &p, &tau)?;
        let seats = seats_for_result(&r, p.roster(), 10)?;
        let names: Vec<&str> = want.iter().map(|w| w.0).collect();
        if r.outcome != p.set_of(&names)? {
            failures.push(format!("{} selected {}", rule, p.format_set(r.outcome)));
            continue;
        }
        for &(name, score, n) in want {
            let id = p.roster().id(name).expect("party");
            let s = r.assignment.score(id).cloned().unwrap_or_default();
            if s != Weight::from(score) || seats.get(&id) != n {
                failures.push(format!("{} {}: score {} seats {}, want {} and {}", rule, name, s, seats.get(&id), score, n));
            }
        }
    }
    Ok(verdict(failures, "DO 4/3/3, uninominal 2/3/5, STV and GP 2/2/2/4".into()))
}

fn fixture_suite() -> Outcome {
    let t = Instant::now();
    let reports = check_fixture_cells()?;
    let mut failures = Vec::new();
    for r in &reports {
        match &r.check {
            CellCheck::Flagged(v) => {
                let rule: RuleId = v.rule.parse()?;
                if v.replay(&rule)?.as_ref() != Some(v.as_ref()) {
                    failures.push(format!("{} {} does not replay", r.cell.axiom, r.cell.rule));
                }
            }
            _ => failures.push(format!("{} {} not flagged", r.cell.axiom, r.cell.rule)),
        }
    }
    let elapsed = t.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {:?}", elapsed));
    }
    Ok(verdict(
        failures,
        format!("{} violated cells flagged by {} fixtures in {:?}", reports.len(), table_fixtures().len(), elapsed),
    ))
}

const SEED: u64 = 20240609;

fn random_suite() -> Outcome {
    let t = Instant::now();
    let bounds = SearchBounds {
        max_parties: 5,
        max_voters: 10,
        tau_range: None,
    };
    let mut failures = Vec::new();
    let mut checked = 0;
    let satisfied: Vec<_> = cells().into_iter().filter(|c| c.satisfied).collect();
    for cell in &satisfied {
        let r = search_cell(*cell, 10_000, bounds, SEED)?;
        match &r.check {
            CellCheck::Searched(SearchOutcome::Pass { checked: c, .. }) => checked += c,
            CellCheck::Searched(SearchOutcome::Violation { trial, violation }) => failures.push(format!(
                "{} {} trial {}: {} on {}",
                cell.axiom,
                cell.rule,
                trial,
                violation.narrative,
                io::write_profile(&io::ProfileDocument {
                    profile: violation.profile().clone(),
                    tau: None,
                })
                .replace('\n', " | ")
            )),
            _ => unreachable!("satisfied cells are searched"),
        }
    }
    let elapsed = t.elapsed();
    if elapsed >= Duration::from_secs(300) {
        failures.push(format!("took {:?}", elapsed));
    }
    Ok(verdict(
        failures,
        format!("{} cells, {} checked trials, {:?}", satisfied.len(), checked, elapsed),
    ))
}

fn generic_instance(seed: u64, k: u64, bounds: &SearchBounds) -> Result<(Profile, Threshold), Error> {
    let mut rng = trial_rng(seed, k);
    loop {
        let (p, tau) = random_instance(&mut rng, bounds);
        if p.is_generic()? {
            return Ok((p, tau));
        }
    }
}

fn stv_characterization() -> Outcome {
    let bounds = SearchBounds {
        max_parties: 5,
        max_voters: 10,
        tau_range: None,
    };
    let mut failures = Vec::new();
    let mut pairs = 0u64;
    for k in 0..1000 {
        let (p, _) = generic_instance(SEED, k, &bounds)?;
        let n = p.total_weight().ceil_integer().try_into().unwrap_or(0u64);
        for t in 0..=n {
            let tau = Threshold::from(t);
            if let Some(v) = check_direct_winners(&RuleId::Stv, &p, &tau)? {
                failures.push(format!("profile {}: {}", k, v.narrative));
            }
            for t2 in t..=n {
                pairs += 1;
                if let Some(v) = check_idlp(&RuleId::Stv, &p, &tau, &Threshold::from(t2))? {
                    failures.push(format!("profile {}: {}", k, v.narrative));
                }
            }
        }
        if failures.len() > 3 {
            break;
        }
    }
    Ok(verdict(failures, format!("1000 generic profiles, {} threshold pairs", pairs)))
}

fn local_stability() -> Outcome {
    let mut failures = Vec::new();
    let mut outcomes = 0;
    for n in 3..=7 {
        for tau in 2..n {
            let p = local_stability_family(n, tau)?;
            let t = Threshold::from(tau as u64);
            for s in enumerate_feasible(&p, &t)? {
                outcomes += 1;
                if check_local_stability(&p, &t, s)?.is_none() {
                    failures.push(format!("n={} tau={}: {} is locally stable", n, tau, p.format_set(s)));
                }
            }
        }
    }
    Ok(verdict(failures, format!("{} feasible outcomes, none stable", outcomes)))
}

/// Every subset, filtered by feasibility.
fn all_feasible(p: &Profile, tau: &Threshold) -> Result<Vec<PartySet>, Error> {
    let m = p.num_parties();
    let mut out = Vec::new();
    for bits in 0u64..(1 << m) {
        let s = PartySet::from_bits(bits);
        if p.is_feasible(s, tau)? {
            out.push(s);
        }
    }
    Ok(out)
}

fn optimizer_oracle() -> Outcome {
    let bounds = SearchBounds {
        max_parties: 6,
        max_voters: 8,
        tau_range: None,
    };
    let mut failures = Vec::new();
    for k in 0..1000 {
        let (p, tau) = random_instance(&mut trial_rng(SEED, k), &bounds);
        let feasible = all_feasible(&p, &tau)?;
        if enumerate_feasible(&p, &tau)? != feasible {
            failures.push(format!("profile {}: enumerate_feasible differs from all subsets", k));
        }
        let key = |s: &PartySet| p.roster().lex_key(*s);
        let maxp = feasible.iter().max_by(|a, b| {
            objective_vector(&p, **a).cmp(&objective_vector(&p, **b)).then(key(a).cmp(&key(b)))
        });
        let maxr = feasible
            .iter()
            .max_by(|a, b| coverage(&p, **a).cmp(&coverage(&p, **b)).then(key(a).cmp(&key(b))));
        let got_p = run_maxp(&p, &tau)?.outcome;
        let got_r = run_maxr(&p, &tau)?.outcome;
        if Some(&got_p) != maxp {
            failures.push(format!("profile {}: maxp {}", k, p.format_set(got_p)));
        }
        if Some(&got_r) != maxr {
            failures.push(format!("profile {}: maxr {}", k, p.format_set(got_r)));
        }
    }
    Ok(verdict(failures, "1000 profiles, MaxP and MaxR equal the brute-force argmax".into()))
}

fn augmentation() -> Outcome {
    let bounds = SearchBounds::default();
    let mut failures = Vec::new();
    for k in 0..10_000 {
        let (p, tau) = random_instance(&mut trial_rng(SEED, k), &bounds);
        for rule in [RuleId::DoPlus, RuleId::StvPlus, RuleId::GpPlus] {
            match run_augmented(rule, &p, &tau) {
                Ok(r) => {
                    if let Some(v) = check_unrepresented(&p, &tau, r.outcome)? {
                        failures.push(format!("profile {} {}: {}", k, rule, v.narrative));
                    }
                }
                Err(e @ Error::AugmentCycle(_)) => failures.push(format!("profile {} {}: {}", k, rule, e)),
                Err(e) => return Err(e),
            }
        }
    }
    let hand = [
        (RuleId::DoPlus, Profile::from_rankings(&["a", "b", "c"], &[(3, "a"), (2, "b>c"), (1, "c")])?, 3, "{a,c}"),
        (
            RuleId::GpPlus,
            Profile::from_rankings(&["a", "b", "c", "d"], &[(3, "a"), (2, "b>a"), (2, "c>b"), (2, "d>b")])?,
            4,
            "{b}",
        ),
    ];
    for (rule, p, t, want) in hand {
        let got = run_augmented(rule, &p, &Threshold::from(t))?.outcome;
        if p.format_set(got) != want {
            failures.push(format!("{} gave {}, want {}", rule, p.format_set(got), want));
        }
    }
    Ok(verdict(failures, "30000 augmented runs, hand traces {a,c} and {b}".into()))
}

fn noise() -> Outcome {
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/five_party.profile");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_partysel"))
            .args(["experiment", "noise", "--profile", file, "--rule", "stv"])
            .args(["--samples", "100", "--sigma", "0.1", "--seed", "7"])
            .args(["--tau-from", "1%", "--tau-to", "30%", "--steps", "30"])
            .output()
    };
    let (a, b) = (run()?, run()?);
    let mut failures = Vec::new();
    if !a.status.success() {
        failures.push(format!("cli: {}", String::from_utf8_lossy(&a.stderr).trim()));
    }
    if a.stdout != b.stdout || a.stdout.is_empty() {
        failures.push("noise reports differ between runs".into());
    }

    let options = NoiseOptions {
        samples: 100,
        sigma: 0.1,
        seed: 7,
    };
    let taus = TauPoint::relative_grid(&Weight::from_ratio(1, 100), &Weight::from_ratio(30, 100), 30)?;
    let mut comparisons = 0;
    for base in [five_party_spectrum(), example_one()] {
        let groups = experiments::first_choice_groups(&base);
        for sample in 0..options.samples {
            let p = noisy_profile(&base, &groups, sample, &options)?;
            for tau in &taus {
                let t = tau.resolve(&p)?;
                let d = unrepresented_share(&p, RuleId::Do, &t)?;
                for rule in [RuleId::Stv, RuleId::Gp] {
                    comparisons += 1;
                    let u = unrepresented_share(&p, rule, &t)?;
                    if u > d {
                        failures.push(format!("sample {} tau {}: {} {} > DO {}", sample, t, rule, u, d));
                    }
                }
            }
        }
    }
    Ok(verdict(
        failures,
        format!("byte-identical reports, {} dominance comparisons", comparisons),
    ))
}

fn dataset() -> Outcome {
    let (Ok(survey), Ok(results)) = (std::env::var("PARTYSEL_SURVEY"), std::env::var("PARTYSEL_RESULTS")) else {
        return Ok(Verdict::Skip("PARTYSEL_SURVEY and PARTYSEL_RESULTS not set".into()));
    };
    let (roster, official) = io::parse_official(&std::fs::read_to_string(&results)?)?;
    let mut rows = io::parse_survey(&std::fs::read_to_string(&survey)?, &roster)?;
    let weighting = experiments::compute_weights(&rows, &official)?;
    experiments::apply_weights(&mut rows, &weighting);
    let roster = std::sync::Arc::new(roster);
    // Unrepresented share at 5% for the self-selected sample.
    let expected = [
        (RankingSource::TwoVote, RuleId::Do, 117),
        (RankingSource::TwoVote, RuleId::Stv, 70),
        (RankingSource::TwoVote, RuleId::Gp, 70),
        (RankingSource::Full, RuleId::Do, 32),
        (RankingSource::Full, RuleId::Stv, 23),
        (RankingSource::Full, RuleId::Gp, 23),
    ];
    let mut failures = Vec::new();
    for (source, rule, permille) in expected {
        let p = experiments::survey_profile(&rows, roster.clone(), source)?;
        let tau = TauPoint::Relative(Weight::from_ratio(5, 100)).resolve(&p)?;
        let got = unrepresented_share(&p, rule, &tau)?.to_f64() * 100.0;
        let want = permille as f64 / 10.0;
        if (got - want).abs() > 0.1 {
            failures.push(format!("{:?} {}: {:.2}% vs {:.1}%", source, rule, got, want));
        }
    }
    Ok(verdict(failures, "unrepresented shares within 0.1 pp".into()))
}

fn restricted_strategyproofness() -> Outcome {
    let bounds = SearchBounds {
        max_parties: 4,
        max_voters: 8,
        tau_range: None,
    };
    let settings = [
        (AxiomId::RepSpOneRisky, RuleId::Gp),
        (AxiomId::ShareSpSafeTop2, RuleId::Do),
        (AxiomId::ShareSpPromote, RuleId::Do),
        (AxiomId::ShareSpPromote, RuleId::Gp),
    ];
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (axiom, rule) in settings {
        let mut checked = 0;
        let mut k = 0u64;
        while checked < 500 && k < 1_000_000 {
            let (p, tau) = random_instance(&mut trial_rng(SEED, k), &bounds);
            k += 1;
            match check_instance(axiom, &rule, &p, &tau)? {
                InstanceCheck::Unchecked => {}
                InstanceCheck::Checked => checked += 1,
                InstanceCheck::Violated(v) => {
                    checked += 1;
                    failures.push(format!("{} {}: {}", axiom, rule, v.narrative));
                }
            }
        }
        if checked < 500 {
            failures.push(format!("{} {}: only {} instances meet the precondition", axiom, rule, checked));
        }
        summary.push(format!("{} {} {}/{}", axiom, rule, checked, k));
    }
    let fixtures = table_fixtures();
    let paper = [
        two_risky_fixture(),
        fixtures
            .iter()
            .find(|f| f.axiom == AxiomId::ShareSpSafeTop2 && f.rules.contains(&RuleId::Gp))
            .expect("safe-top-2 fixture")
            .clone(),
        fixtures
            .iter()
            .find(|f| f.axiom == AxiomId::ShareSpPromote && f.rules.contains(&RuleId::Stv))
            .expect("promote fixture")
            .clone(),
    ];
    for f in &paper {
        if let Err(e) = f.violations() {
            failures.push(format!("fixture: {}", e));
        }
    }
    // The sampled instances miss it, but a GP promote counterexample with 4
    // parties and 6 voters exists; reported so the pass is not misread.
    let gp_promote = if gp_promote_fixture().violations().is_ok() { "manipulable" } else { "NOT manipulable" };
    Ok(verdict(
        failures,
        format!(
            "{}; 3 counterexamples found; stored 4-party GP promote fixture {}",
            summary.join(", "),
            gp_promote
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Example-1 exactness", example_exactness),
        ("D'Hondt seats", dhondt_seats),
        ("property table fixtures", fixture_suite),
        ("property table random search", random_suite),
        ("STV characterization", stv_characterization),
        ("local stability impossibility", local_stability),
        ("optimizer oracle", optimizer_oracle),
        ("augmentation", augmentation),
        ("noise determinism and dominance", noise),
        ("dataset reproduction", dataset),
        ("restricted strategyproofness", restricted_strategyproofness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = run().unwrap_or_else(|e| Verdict::Fail(format!("error: {}", e)));
        let (tag, detail) = match v {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Skip(d) => ("SKIP", d),
        };
        println!("{} {:>2} {} [{:.2?}]: {}", tag, i + 1, name, t.elapsed(), detail);
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
