use std::path::PathBuf;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qteleport_core::protocol::QubitState;

use crate::error::CliError;

/// Largest tolerated deviation of `‖(a, b)‖` from 1 before renormalization.
pub const INPUT_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    SweepTheta,
    RandomTrials,
    ShowState,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::SweepTheta => "sweep-theta",
            Command::RandomTrials => "random-trials",
            Command::ShowState => "show-state",
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::Run | Command::RandomTrials => Format::Json,
            Command::SweepTheta | Command::ShowState => Format::Csv,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qteleport",
    version,
    about = "Unitary teleportation without collapse"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Run the protocol once and report every state, fidelity and check.
    Run(Flags),
    /// Tabulate the perturbed-correction fidelity over a uniform θ grid.
    SweepTheta(Flags),
    /// Randomized teleportation trials with the plain correction.
    RandomTrials(Flags),
    /// Print the 32 amplitudes after U and after the correction.
    ShowState(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    #[arg(long, allow_negative_numbers = true)]
    a_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a_im: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b_im: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    randomize_chi: bool,
    #[arg(long)]
    chi_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    /// Input state, renormalized to exact unit norm.
    pub state: Option<QubitState>,
    /// Factor applied to the raw amplitudes (`1 / ‖(a, b)‖`).
    pub renormalization: Option<f64>,
    pub theta: Option<f64>,
    pub points: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub randomize_chi: bool,
    pub chi_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn first_line(s: &str) -> String {
    s.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("invalid arguments")
        .trim_start_matches("error: ")
        .to_string()
}

fn reject_unused(command: Command, flag: &str, present: bool) -> Result<(), CliError> {
    if present {
        return Err(CliError::Usage(format!(
            "--{flag} is not accepted by {}",
            command.name()
        )));
    }
    Ok(())
}

fn input_state(flags: &Flags) -> Result<Option<(QubitState, f64)>, CliError> {
    let parts = [flags.a_re, flags.a_im, flags.b_re, flags.b_im];
    if parts.iter().all(Option::is_none) {
        return Ok(None);
    }
    let [a_re, a_im, b_re, b_im] = parts.map(|p| p.unwrap_or(0.0));
    if [a_re, a_im, b_re, b_im].iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage("amplitudes must be finite".into()));
    }
    let norm = (a_re * a_re + a_im * a_im + b_re * b_re + b_im * b_im).sqrt();
    if (norm - 1.0).abs() > INPUT_NORM_TOL {
        return Err(CliError::Norm(format!(
            "input amplitudes have norm {norm}, expected 1 within {INPUT_NORM_TOL:e}"
        )));
    }
    let state = QubitState::normalized(Complex64::new(a_re, a_im), Complex64::new(b_re, b_im))?;
    Ok(Some((state, 1.0 / norm)))
}

/// Parses `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CliConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Usage(first_line(&e.to_string())),
    })?;
    let (command, flags) = match cli.command {
        Sub::Run(f) => (Command::Run, f),
        Sub::SweepTheta(f) => (Command::SweepTheta, f),
        Sub::RandomTrials(f) => (Command::RandomTrials, f),
        Sub::ShowState(f) => (Command::ShowState, f),
    };

    let state = input_state(&flags)?;
    match command {
        Command::Run | Command::ShowState => {
            reject_unused(command, "points", flags.points.is_some())?;
            reject_unused(command, "trials", flags.trials.is_some())?;
            reject_unused(command, "seed", flags.seed.is_some())?;
            reject_unused(command, "randomize-chi", flags.randomize_chi)?;
        }
        Command::SweepTheta => {
            reject_unused(command, "theta", flags.theta.is_some())?;
            reject_unused(command, "trials", flags.trials.is_some())?;
            reject_unused(command, "seed", flags.seed.is_some())?;
            reject_unused(command, "randomize-chi", flags.randomize_chi)?;
            match flags.points {
                None => return Err(CliError::Usage("sweep-theta requires --points".into())),
                Some(n) if n < 2 => {
                    return Err(CliError::Usage(format!(
                        "--points must be at least 2, got {n}"
                    )))
                }
                Some(_) => {}
            }
        }
        Command::RandomTrials => {
            for (flag, present) in [
                ("a-re", flags.a_re.is_some()),
                ("a-im", flags.a_im.is_some()),
                ("b-re", flags.b_re.is_some()),
                ("b-im", flags.b_im.is_some()),
                ("theta", flags.theta.is_some()),
                ("points", flags.points.is_some()),
                ("chi-file", flags.chi_file.is_some()),
            ] {
                reject_unused(command, flag, present)?;
            }
            match flags.trials {
                None => return Err(CliError::Usage("random-trials requires --trials".into())),
                Some(0) => return Err(CliError::Usage("--trials must be at least 1".into())),
                Some(_) => {}
            }
        }
    }
    if command != Command::RandomTrials && state.is_none() {
        return Err(CliError::Usage(format!(
            "{} requires an input state (--a-re, --a-im, --b-re, --b-im)",
            command.name()
        )));
    }
    if let Some(t) = flags.theta {
        if !t.is_finite() {
            return Err(CliError::Usage("--theta must be finite".into()));
        }
    }

    Ok(CliConfig {
        command,
        state: state.map(|(s, _)| s),
        renormalization: state.map(|(_, f)| f),
        theta: flags.theta,
        points: flags.points,
        trials: flags.trials,
        seed: flags.seed.unwrap_or(0),
        randomize_chi: flags.randomize_chi,
        chi_file: flags.chi_file,
        out: flags.out,
        format: flags.format.unwrap_or(command.default_format()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<CliConfig, CliError> {
        parse_args(std::iter::once("qteleport").chain(s.split_whitespace()))
    }

    #[test]
    fn run_with_plus_state() {
        let cfg = parse("run --a-re 1 --a-im 0 --b-re 0 --b-im 0").unwrap();
        assert_eq!(cfg.command, Command::Run);
        assert_eq!(cfg.state, Some(QubitState::plus()));
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.renormalization, Some(1.0));
    }

    #[test]
    fn zero_points_is_usage_error() {
        let err = parse("sweep-theta --points 0 --a-re 1").unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unnormalized_input_is_norm_error() {
        let err = parse("run --a-re 3 --b-re 4").unwrap_err();
        assert!(matches!(err, CliError::Norm(_)), "{err:?}");
    }

    #[test]
    fn small_deviation_is_renormalized() {
        let cfg = parse("run --a-re 0.6 --b-re 0.8000001").unwrap();
        let s = cfg.state.unwrap();
        assert!(((s.a().norm_sqr() + s.b().norm_sqr()) - 1.0).abs() < 1e-15);
        assert!((cfg.renormalization.unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unknown_flag_is_rejected() {
        let err = parse("run --a-re 1 --bogus 3").unwrap_err();
        match err {
            CliError::Usage(msg) => assert!(!msg.contains('\n')),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn command_specific_requirements() {
        assert!(matches!(parse("run").unwrap_err(), CliError::Usage(_)));
        assert!(matches!(
            parse("random-trials").unwrap_err(),
            CliError::Usage(_)
        ));
        assert!(matches!(
            parse("random-trials --trials 4 --theta 1").unwrap_err(),
            CliError::Usage(_)
        ));
        assert!(matches!(
            parse("run --a-re 1 --points 4").unwrap_err(),
            CliError::Usage(_)
        ));
        let cfg = parse("random-trials --trials 4 --randomize-chi --seed 9").unwrap();
        assert_eq!(
            (cfg.trials, cfg.seed, cfg.randomize_chi),
            (Some(4), 9, true)
        );
        assert_eq!(
            parse("sweep-theta --points 8 --b-re 1").unwrap().format,
            Format::Csv
        );
    }

    #[test]
    fn negative_theta_parses() {
        let cfg = parse("run --a-re 1 --theta -0.5").unwrap();
        assert_eq!(cfg.theta, Some(-0.5));
    }

    #[test]
    fn help_is_informational() {
        let err = parse("--help").unwrap_err();
        assert_eq!(err.exit_code(), 0);
    }
}
