use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use partysel::apportion::seats_for_result;
use partysel::axioms::search::{random_search_with, SearchBounds, SearchOptions, SearchOutcome};
use partysel::axioms::{check_instance, check_reinforcement, table, AxiomId, InstanceCheck};
use partysel::experiments::{
    self, BucketCuts, NoiseOptions, PartyBuckets, RankingSource, SurveyRow, TauPoint,
};
use partysel::io;
use partysel::party_set::PartyId;
use partysel::{rules, Error, Profile, Result, RuleId, Threshold, Weight};

#[derive(Parser)]
#[command(name = "partysel", version, about = "Party selection rules with thresholds and ranked ballots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a rule on a profile.
    Compute(ComputeArgs),
    /// Check, search or tabulate axioms.
    #[command(subcommand)]
    Axioms(AxiomsCommand),
    /// Threshold, truncation and noise sweeps, and the strategic-voting table.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Convert a raw survey export to the survey format.
    Convert(ConvertArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Flat,
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    rule: RuleId,
    #[arg(long)]
    profile: PathBuf,
    /// A weight or a percentage such as `5%`; defaults to the file's `tau`.
    #[arg(long)]
    tau: Option<String>,
    /// Also list every outcome reachable under some tie-breaking.
    #[arg(long)]
    parallel_universe: bool,
    /// Apportion this many seats with D'Hondt.
    #[arg(long)]
    seats: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 5)]
    max_parties: usize,
    #[arg(long, default_value_t = 10)]
    max_voters: usize,
}

impl BoundsArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds {
            max_parties: self.max_parties,
            max_voters: self.max_voters,
            tau_range: None,
        }
    }
}

#[derive(Subcommand)]
enum AxiomsCommand {
    /// Check one axiom on a profile, over all of the axiom's free parameters.
    Check {
        #[arg(long)]
        axiom: AxiomId,
        #[arg(long)]
        rule: RuleId,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        tau: Option<String>,
        /// Second profile, for reinforcement.
        #[arg(long)]
        profile2: Option<PathBuf>,
        #[arg(long)]
        tau2: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded random search for a violation.
    Search {
        #[arg(long)]
        axiom: AxiomId,
        #[arg(long)]
        rule: RuleId,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only draw generic profiles.
        #[arg(long)]
        generic_only: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Verify the property table of DO, STV and GP.
    Table {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Source {
    TwoVote,
    Full,
    /// Only the intention, as a single-vote ballot.
    Intention,
}

/// A profile file, or a survey weighted against official results.
#[derive(Args)]
struct ProfileInput {
    #[arg(long, required_unless_present = "survey", conflicts_with = "survey")]
    profile: Option<PathBuf>,
    #[arg(long, requires = "results")]
    survey: Option<PathBuf>,
    #[arg(long)]
    results: Option<PathBuf>,
    /// Which survey answers form the ballots.
    #[arg(long, value_enum, default_value = "full")]
    source: Source,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value = "1%")]
    tau_from: String,
    #[arg(long, default_value = "10%")]
    tau_to: String,
    #[arg(long, default_value_t = 10)]
    steps: usize,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Unrepresented share and ranks over a grid of thresholds.
    Sweep {
        #[command(flatten)]
        input: ProfileInput,
        #[arg(long)]
        rule: RuleId,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: Output,
    },
    /// The same at a fixed threshold over truncation lengths.
    Truncate {
        #[command(flatten)]
        input: ProfileInput,
        #[arg(long)]
        rule: RuleId,
        #[arg(long, default_value = "5%")]
        tau: String,
        #[arg(long, default_value_t = 1)]
        k_from: usize,
        #[arg(long)]
        k_to: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Threshold sweep with noisy weights.
    Noise {
        #[command(flatten)]
        input: ProfileInput,
        #[arg(long)]
        rule: RuleId,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Compare intentions with first-ranked parties.
    Strategic {
        #[arg(long)]
        survey: PathBuf,
        #[arg(long)]
        results: PathBuf,
        /// Percent cut points: safe, risky low, risky high, out.
        #[arg(long, default_value = "7,5,6,3")]
        buckets: String,
        #[arg(long, value_enum, default_value = "two-vote")]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FromFormat {
    ZenodoCsv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ToFormat {
    SurveyCsv,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    from: FromFormat,
    #[arg(long, value_enum)]
    to: ToFormat,
    /// TOML column map.
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What a command produced: text to emit and whether it reports a violation.
struct Done {
    text: String,
    violation: bool,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))
}

fn load_profile(path: &Path) -> Result<io::ProfileDocument> {
    io::parse_profile(&read(path)?).map_err(|e| match e {
        Error::Parse { line, column, message } => {
            Error::Io(format!("{}:{}:{}: {}", path.display(), line, column, message))
        }
        e => e,
    })
}

fn resolve_tau(doc: &io::ProfileDocument, tau: Option<&str>) -> Result<Threshold> {
    match tau {
        Some(t) => io::parse_tau(t).map_err(Error::InvalidThreshold)?.resolve(&doc.profile),
        None => doc
            .threshold()
            .unwrap_or_else(|| Err(Error::InvalidThreshold("no --tau and no `tau` header".into()))),
    }
}

fn emit(output: &Output, text: String) -> Result<()> {
    match &output.out {
        Some(p) => io::write_atomic(p, &text),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn json_or_text(format: Format, json: &Value, text: impl FnOnce() -> String) -> Result<String> {
    match format {
        Format::Json => Ok(io::to_json(json)),
        Format::Text => Ok(text()),
        Format::Flat => Err(Error::InvalidArgument("flat output is only for sweeps".into())),
    }
}

fn compute(args: &ComputeArgs) -> Result<Done> {
    let doc = load_profile(&args.profile)?;
    let tau = resolve_tau(&doc, args.tau.as_deref())?;
    let p = &doc.profile;
    let result = rules::run(args.rule, p, &tau)?;
    let seats = args.seats.map(|h| seats_for_result(&result, p.roster(), h)).transpose()?;
    let universes = if args.parallel_universe {
        Some(rules::run_parallel_universe(args.rule, p, &tau)?)
    } else {
        None
    };
    let json = io::compute_report(p, &tau, &result, seats.as_ref(), universes.as_deref());
    let text = json_or_text(args.output.format, &json, || {
        let r = p.roster();
        let mut s = format!("{} at tau={}: {}\n", args.rule.as_str(), tau, r.format_set(result.outcome));
        for (party, score) in &result.assignment.scores {
            s.push_str(&format!("  {} {}", r.name(*party), score));
            if let Some(seats) = &seats {
                s.push_str(&format!(" ({} seats)", seats.get(party)));
            }
            s.push('\n');
        }
        s.push_str(&format!("unrepresented {}\n", result.assignment.unrepresented_weight(p)));
        for u in universes.iter().flatten() {
            s.push_str(&format!("reachable {}\n", r.format_set(*u)));
        }
        s
    })?;
    Ok(Done { text, violation: false })
}

fn axioms(cmd: &AxiomsCommand) -> Result<(Done, &Output)> {
    match cmd {
        AxiomsCommand::Check {
            axiom,
            rule,
            profile,
            tau,
            profile2,
            tau2,
            output,
        } => {
            let doc = load_profile(profile)?;
            let t = resolve_tau(&doc, tau.as_deref())?;
            let check = if *axiom == AxiomId::Reinforcement {
                let path = profile2
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("reinforcement needs --profile2".into()))?;
                let doc2 = load_profile(path)?;
                let t2 = resolve_tau(&doc2, tau2.as_deref())?;
                check_reinforcement(rule, &doc.profile, &t, &doc2.profile, &t2)?.into()
            } else {
                check_instance(*axiom, rule, &doc.profile, &t)?
            };
            let violation = match &check {
                InstanceCheck::Violated(v) => Some(v),
                _ => None,
            };
            let json = io::check_report(*axiom, rule.as_str(), &t, violation);
            let text = json_or_text(output.format, &json, || match &check {
                InstanceCheck::Violated(v) => format!("{}\n", v),
                InstanceCheck::Checked => format!("{} satisfies {}\n", rule.as_str(), axiom.description()),
                InstanceCheck::Unchecked => format!("nothing to check for {}\n", axiom.description()),
            })?;
            Ok((
                Done {
                    text,
                    violation: violation.is_some(),
                },
                output,
            ))
        }
        AxiomsCommand::Search {
            axiom,
            rule,
            trials,
            bounds,
            seed,
            generic_only,
            output,
        } => {
            let b = bounds.bounds();
            let options = SearchOptions {
                generic_only: *generic_only,
                ..SearchOptions::default()
            };
            let out = random_search_with(*axiom, rule, *trials, b, *seed, options)?;
            let json = io::search_report(*axiom, rule.as_str(), *trials, &b, *seed, &out);
            let text = json_or_text(output.format, &json, || match &out {
                SearchOutcome::Violation { trial, violation } => format!("trial {}: {}\n", trial, violation),
                SearchOutcome::Pass { trials, checked, skipped } => {
                    format!("no violation in {} trials ({} checked, {} skipped)\n", trials, checked, skipped)
                }
            })?;
            Ok((
                Done {
                    text,
                    violation: !out.is_pass(),
                },
                output,
            ))
        }
        AxiomsCommand::Table {
            trials,
            seed,
            bounds,
            output,
        } => {
            let b = bounds.bounds();
            let reports = table::verify_table(*trials, b, *seed)?;
            let json = io::table_report(&reports, *trials, &b, *seed);
            let text = json_or_text(output.format, &json, || {
                let mut s = table::render();
                for r in &reports {
                    let status = if r.agrees() { "ok" } else { "DISAGREES" };
                    s.push_str(&format!("{:<24}{:>5}  {}", r.cell.axiom.as_str(), r.cell.rule.as_str(), status));
                    if let table::CellCheck::Searched(SearchOutcome::Violation { violation, .. }) = &r.check {
                        s.push_str(&format!(": {}", violation.narrative));
                    }
                    s.push('\n');
                }
                s
            })?;
            Ok((
                Done {
                    text,
                    violation: reports.iter().any(|r| !r.agrees()),
                },
                output,
            ))
        }
    }
}

struct Loaded {
    profile: Profile,
    /// Noise groups: intentions for surveys, first choices otherwise.
    groups: Vec<Option<PartyId>>,
}

fn load_survey(survey: &Path, results: &Path) -> Result<(Vec<SurveyRow>, PartyBuckets, Arc<partysel::Roster>)> {
    let (roster, official) = io::parse_official(&read(results)?)?;
    let mut rows = io::parse_survey(&read(survey)?, &roster)?;
    let weighting = experiments::compute_weights(&rows, &official)?;
    experiments::apply_weights(&mut rows, &weighting);
    let buckets = PartyBuckets::new(roster.len(), &official, &BucketCuts::default());
    Ok((rows, buckets, Arc::new(roster)))
}

fn load_input(input: &ProfileInput) -> Result<Loaded> {
    if let Some(path) = &input.profile {
        let profile = load_profile(path)?.profile;
        let groups = experiments::first_choice_groups(&profile);
        return Ok(Loaded { profile, groups });
    }
    let survey = input.survey.as_ref().expect("clap requires --profile or --survey");
    let results = input.results.as_ref().expect("clap requires --results with --survey");
    let (rows, _, roster) = load_survey(survey, results)?;
    let profile = match input.source {
        Source::TwoVote => experiments::survey_profile(&rows, roster, RankingSource::TwoVote)?,
        Source::Full => experiments::survey_profile(&rows, roster, RankingSource::Full)?,
        Source::Intention => experiments::intention_profile(&rows, roster)?,
    };
    Ok(Loaded {
        profile,
        groups: experiments::intention_groups(&rows),
    })
}

fn grid(g: &GridArgs) -> Result<Vec<TauPoint>> {
    let from = io::parse_tau(&g.tau_from).map_err(Error::InvalidThreshold)?;
    let to = io::parse_tau(&g.tau_to).map_err(Error::InvalidThreshold)?;
    TauPoint::grid(&from, &to, g.steps)
}

fn sweep_output(report: &experiments::ExperimentReport, profile: &Profile, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(io::to_json(&io::experiment_report(report, profile.roster()))),
        Format::Flat => Ok(io::flat_table(report)),
        Format::Text => Err(Error::InvalidArgument("sweeps print json or flat".into())),
    }
}

fn experiment(cmd: &ExperimentCommand) -> Result<(Done, &Output)> {
    let (text, output) = match cmd {
        ExperimentCommand::Sweep {
            input,
            rule,
            grid: g,
            output,
        } => {
            let l = load_input(input)?;
            let r = experiments::sweep_threshold(&l.profile, *rule, &grid(g)?)?;
            (sweep_output(&r, &l.profile, output.format)?, output)
        }
        ExperimentCommand::Truncate {
            input,
            rule,
            tau,
            k_from,
            k_to,
            output,
        } => {
            let l = load_input(input)?;
            let t = io::parse_tau(tau).map_err(Error::InvalidThreshold)?;
            if k_from > k_to || *k_from == 0 {
                return Err(Error::InvalidArgument("need 1 <= k-from <= k-to".into()));
            }
            let ks: Vec<usize> = (*k_from..=*k_to).collect();
            let r = experiments::sweep_truncation(&l.profile, *rule, &t, &ks)?;
            (sweep_output(&r, &l.profile, output.format)?, output)
        }
        ExperimentCommand::Noise {
            input,
            rule,
            grid: g,
            samples,
            sigma,
            seed,
            output,
        } => {
            let l = load_input(input)?;
            let options = NoiseOptions {
                samples: *samples,
                sigma: *sigma,
                seed: *seed,
            };
            let r = experiments::noise_sweep_grouped(&l.profile, &l.groups, *rule, &grid(g)?, &options)?;
            (sweep_output(&r, &l.profile, output.format)?, output)
        }
        ExperimentCommand::Strategic {
            survey,
            results,
            buckets,
            source,
            output,
        } => {
            let cuts: Vec<Weight> = buckets
                .split(',')
                .map(|x| x.trim().parse::<Weight>().map_err(|e| Error::InvalidArgument(e.to_string())))
                .collect::<Result<_>>()?;
            let cuts: [Weight; 4] = cuts
                .try_into()
                .map_err(|_| Error::InvalidArgument("--buckets takes four numbers".into()))?;
            let cuts = BucketCuts::from_percentages(cuts)?;
            let (rows, _, roster) = load_survey(survey, results)?;
            let (_, official) = io::parse_official(&read(results)?)?;
            let b = PartyBuckets::new(roster.len(), &official, &cuts);
            let src = match source {
                Source::TwoVote => RankingSource::TwoVote,
                Source::Full => RankingSource::Full,
                Source::Intention => {
                    return Err(Error::InvalidArgument("strategic needs --source two-vote or full".into()))
                }
            };
            let report = experiments::classify_strategic(&rows, &b, src);
            let flagged: Vec<String> = b.flagged.iter().map(|&p| roster.name(p).to_string()).collect();
            let json = io::strategic_report(&report, &flagged);
            let text = json_or_text(output.format, &json, || {
                report
                    .fractions
                    .iter()
                    .map(|(c, w)| format!("{:<16}{:>8.2}%\n", format!("{:?}", c), w.to_f64() * 100.0))
                    .collect()
            })?;
            (text, output)
        }
    };
    Ok((Done { text, violation: false }, output))
}

fn convert(args: &ConvertArgs) -> Result<()> {
    let (FromFormat::ZenodoCsv, ToFormat::SurveyCsv) = (args.from, args.to);
    let map = io::ColumnMap::from_toml(&read(&args.map)?)?;
    let text = io::convert_survey(&read(&args.input)?, &map)?;
    match &args.out {
        Some(p) => io::write_atomic(p, &text),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let (done, output) = match &cli.command {
        Command::Compute(args) => (compute(args)?, &args.output),
        Command::Axioms(cmd) => axioms(cmd)?,
        Command::Experiment(cmd) => experiment(cmd)?,
        Command::Convert(args) => {
            convert(args)?;
            return Ok(false);
        }
    };
    emit(output, done.text)?;
    Ok(done.violation)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(if e.is_guard() { 3 } else { 2 })
        }
    }
}
