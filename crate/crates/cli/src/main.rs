//! `pfcone` command-line front end.
//!
//! Every verb reads a matrix file (and optionally vector files), runs one
//! library routine and writes a single JSON document to standard output.
//! Exit codes: 0 completed, 2 input error, 3 numeric failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use pfcone::alternating::{alt_length, ZMatrix};
use pfcone::checks::{self, Property};
use pfcone::collatz_wielandt::{cw_numbers, cw_sets, sigma1_faces};
use pfcone::eq_type1::solve1;
use pfcone::eq_type2::{generalized_eigen_face, necessary_face, solvable2};
use pfcone::io::{matrix_from_str, vector_from_str};
use pfcone::matrix::{ConeVector, NonnegMatrix};
use pfcone::scalar::{parse_rational, Field, Rational, Tolerance};
use pfcone::spectral::Analysis;
use pfcone::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Rational,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "pfcone", version, about = "Nonnegative solutions of (λI−P)x=b and (P−λI)x=b")]
struct Cli {
    /// Arithmetic mode. Without it, rational is used and float is the
    /// fallback when an eigenvalue has no exact rational value.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classes, taxonomy, spectral summary and distinguished faces.
    Analyze { matrix: PathBuf },
    /// Decide and solve (λI − P)x = b, x ≥ 0.
    Solve1 {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        b: PathBuf,
        matrix: PathBuf,
    },
    /// Decide and solve (P − λI)x = b, x ≥ 0.
    Solve2 {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        b: PathBuf,
        matrix: PathBuf,
    },
    /// Collatz–Wielandt numbers of x, or the Collatz–Wielandt sets of P.
    Cw {
        #[arg(long)]
        x: Option<PathBuf>,
        matrix: PathBuf,
    },
    /// Alternating sequence length for sI − P starting at x.
    Alt {
        #[arg(long, allow_hyphen_values = true)]
        shift: String,
        #[arg(long)]
        x: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        matrix: PathBuf,
    },
    /// Run a property suite against exact oracles.
    Check {
        #[arg(long)]
        property: String,
        matrix: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn scalar<T: Field>(text: &str) -> Result<T, Error> {
    let q = parse_rational(text)?;
    Ok(T::from_rational(&q))
}

fn vector<T: Field>(path: &Path, n: usize) -> Result<ConeVector<T>, Error> {
    let v: ConeVector<T> = vector_from_str(&read(path)?)?;
    if v.len() != n {
        return Err(Error::Input(format!("vector has length {}, matrix has n = {n}", v.len())));
    }
    Ok(v)
}

fn analysis<T: Field>(text: &str) -> Result<Analysis<T>, Error> {
    let p: NonnegMatrix<T> = matrix_from_str(text)?;
    Analysis::new(&p, &Tolerance::default())
}

fn analyze<T: Field>(an: &Analysis<T>) -> Result<Value, Error> {
    let ca = an.classes();
    let tax = an.taxonomy();
    let (i1, i2) = sigma1_faces(an);
    let per_eigenvalue = an
        .distinguished_eigenvalues()
        .iter()
        .map(|l| {
            Ok(json!({
                "lambda": l.to_json(),
                "generalized_eigen_face": generalized_eigen_face(an, l).to_json(),
                "strict_access_face": necessary_face(an, l)?.to_json(),
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(json!({
        "classes": { "members": ca.classes_json(), "access": ca.access_json() },
        "taxonomy": tax.to_json(),
        "spectral": an.report().to_json(),
        "faces": {
            "basic_access": an.initial_over(&tax.basic_classes()).to_json(),
            "sigma1": { "i1": i1.to_json(), "i2": i2.to_json() },
            "distinguished": per_eigenvalue,
        },
    }))
}

fn execute<T: Field>(command: &Command) -> Result<Value, Error> {
    match command {
        Command::Analyze { matrix } => analyze(&analysis::<T>(&read(matrix)?)?),
        Command::Solve1 { lambda, b, matrix } => {
            let an = analysis::<T>(&read(matrix)?)?;
            let b = vector(b, an.n())?;
            Ok(solve1(&an, &scalar(lambda)?, &b)?.to_json())
        }
        Command::Solve2 { lambda, b, matrix } => {
            let an = analysis::<T>(&read(matrix)?)?;
            let b = vector(b, an.n())?;
            Ok(solvable2(&an, &scalar(lambda)?, &b)?.to_json())
        }
        Command::Cw { x, matrix } => {
            let an = analysis::<T>(&read(matrix)?)?;
            match x {
                Some(x) => Ok(cw_numbers(&an, &vector(x, an.n())?)?.to_json()),
                None => Ok(cw_sets(&an)?.to_json()),
            }
        }
        Command::Alt { shift, x, max_steps, matrix } => {
            let an = analysis::<T>(&read(matrix)?)?;
            let z = ZMatrix::new(scalar(shift)?, an.matrix().clone());
            Ok(alt_length(&z, &vector(x, an.n())?, *max_steps, an.tol())?.to_json())
        }
        Command::Check { property, matrix } => {
            let property: Property = property.parse()?;
            let an = analysis::<Rational>(&read(matrix)?)?;
            Ok(checks::run(property, &an)?.to_json())
        }
    }
}

fn with_mode(value: Value, mode: &str) -> Value {
    match value {
        Value::Object(mut m) => {
            m.insert("mode".into(), json!(mode));
            Value::Object(m)
        }
        other => other,
    }
}

fn dispatch(cli: &Cli) -> Result<Value, Error> {
    // property suites always run exactly
    if let Command::Check { .. } = cli.command {
        if cli.mode == Some(ModeArg::Float) {
            return Err(Error::Input("check runs in rational mode only".into()));
        }
        return execute::<Rational>(&cli.command).map(|v| with_mode(v, "rational"));
    }
    match cli.mode {
        Some(ModeArg::Rational) => execute::<Rational>(&cli.command).map(|v| with_mode(v, "rational")),
        Some(ModeArg::Float) => execute::<f64>(&cli.command).map(|v| with_mode(v, "float")),
        None => match execute::<Rational>(&cli.command) {
            Err(Error::Numeric(_)) => execute::<f64>(&cli.command).map(|v| with_mode(v, "float")),
            other => other.map(|v| with_mode(v, "rational")),
        },
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Precondition(_) => 2,
        Error::Numeric(_) | Error::Inconsistency(_) => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Input(_) => "input",
        Error::Precondition(_) => "precondition",
        Error::Numeric(_) => "numeric",
        Error::Inconsistency(_) => "inconsistency",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code) = match dispatch(&cli) {
        Ok(v) => (v, 0),
        Err(e) => {
            eprintln!("pfcone: {e}");
            let mut m = Map::new();
            m.insert("error".into(), json!(e.to_string()));
            m.insert("kind".into(), json!(error_kind(&e)));
            (Value::Object(m), exit_code(&e))
        }
    };
    let text = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Input("x".into())), 2);
        assert_eq!(exit_code(&Error::Precondition("x".into())), 2);
        assert_eq!(exit_code(&Error::Numeric("x".into())), 3);
        assert_eq!(exit_code(&Error::Inconsistency("x".into())), 3);
    }

    #[test]
    fn parses_verbs_and_global_mode() {
        let cli = Cli::try_parse_from(["pfcone", "solve1", "--lambda", "3/2", "--b", "b.json", "m.json", "--mode", "float"])
            .unwrap();
        assert_eq!(cli.mode, Some(ModeArg::Float));
        assert!(matches!(cli.command, Command::Solve1 { ref lambda, .. } if lambda == "3/2"));
        assert!(Cli::try_parse_from(["pfcone", "alt", "--x", "x.json", "m.json"]).is_err());
        assert!(Cli::try_parse_from(["pfcone", "analyze", "--unknown", "m.json"]).is_err());
    }

    #[test]
    fn mode_is_stamped_on_objects() {
        assert_eq!(with_mode(json!({"a": 1}), "float"), json!({"a": 1, "mode": "float"}));
        assert_eq!(scalar::<Rational>("-1/2").unwrap(), Rational::new((-1).into(), 2.into()));
    }
}
