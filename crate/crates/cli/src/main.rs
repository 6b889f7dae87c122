use std::env;
use std::process::ExitCode;

use qprobe_cli::{load_config, presets, run_experiment, CliError};

const USAGE: &str = "\
qprobe - single q-bit decoherence and quantum-trajectory experiments

USAGE:
  qprobe run <config.json | preset> [--output-dir DIR] [--seed N] [--ensemble N]
  qprobe validate <config.json>
  qprobe presets list
  qprobe presets show <name>

Flags override the corresponding config fields. Artifacts land in the
output directory: series.csv, ledger.csv, trajectories.json (per
experiment), plus config.echo.json with the effective configuration.

EXIT CODES:
  0  success
  1  i/o failure
  2  invalid configuration or arguments
  3  numerical invariant violation
";

struct Overrides {
    output_dir: Option<String>,
    seed: Option<u64>,
    ensemble: Option<usize>,
}

fn parse_overrides(args: &[String]) -> Result<Overrides, CliError> {
    let mut out = Overrides {
        output_dir: None,
        seed: None,
        ensemble: None,
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let (flag, inline) = match arg.split_once('=') {
            Some((f, v)) => (f, Some(v.to_string())),
            None => (arg.as_str(), None),
        };
        let mut value = |name: &str| -> Result<String, CliError> {
            inline
                .clone()
                .or_else(|| it.next().cloned())
                .ok_or_else(|| CliError::Config(format!("missing value for {name}")))
        };
        match flag {
            "--output-dir" => out.output_dir = Some(value("--output-dir")?),
            "--seed" => {
                out.seed = Some(
                    value("--seed")?
                        .parse()
                        .map_err(|_| CliError::Config("invalid --seed (expected u64)".into()))?,
                )
            }
            "--ensemble" => {
                let n: usize = value("--ensemble")?.parse().map_err(|_| {
                    CliError::Config("invalid --ensemble (expected integer)".into())
                })?;
                if n == 0 {
                    return Err(CliError::Config("--ensemble must be >= 1".into()));
                }
                out.ensemble = Some(n);
            }
            other => {
                return Err(CliError::Config(format!("unknown argument `{other}`")));
            }
        }
    }
    Ok(out)
}

fn run(args: &[String]) -> Result<(), CliError> {
    let source = args
        .first()
        .ok_or_else(|| CliError::Config("missing config path or preset name".into()))?;
    let overrides = parse_overrides(&args[1..])?;

    let mut config = load_config(source)?;
    if let Some(dir) = overrides.output_dir {
        config.output_dir = dir;
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(n) = overrides.ensemble {
        config.ensemble = n;
    }

    println!(
        "running `{}` -> {}",
        config.experiment.as_str(),
        config.output_dir
    );
    let summary = run_experiment(&config)?;
    for line in &summary.lines {
        println!("  {line}");
    }
    for path in &summary.artifacts {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn validate(args: &[String]) -> Result<(), CliError> {
    let path = args
        .first()
        .ok_or_else(|| CliError::Config("missing config path".into()))?;
    let text = std::fs::read_to_string(path)?;
    let config = qprobe_cli::parse_config(&text)?;
    println!(
        "ok: experiment `{}` -> {}",
        config.experiment.as_str(),
        config.output_dir
    );
    Ok(())
}

fn presets_cmd(args: &[String]) -> Result<(), CliError> {
    match args.first().map(String::as_str) {
        Some("list") => {
            for (name, description) in presets::listing() {
                println!("{name:<20} {description}");
            }
            Ok(())
        }
        Some("show") => {
            let name = args
                .get(1)
                .ok_or_else(|| CliError::Config("missing preset name".into()))?;
            let config = presets::find(name)
                .ok_or_else(|| CliError::Config(format!("unknown preset `{name}`")))?;
            let text = serde_json::to_string_pretty(&config.to_raw()).expect("config serializes");
            println!("{text}");
            Ok(())
        }
        _ => Err(CliError::Config(
            "expected `presets list` or `presets show <name>`".into(),
        )),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = env::args().skip(1).collect();
    let result = match args.first().map(String::as_str) {
        Some("run") => run(&args[1..]),
        Some("validate") => validate(&args[1..]),
        Some("presets") => presets_cmd(&args[1..]),
        Some("--help") | Some("-h") | Some("help") => {
            println!("{USAGE}");
            return ExitCode::SUCCESS;
        }
        _ => {
            eprintln!("{USAGE}");
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
