//! zhopf: exact averaging and limit-cycle counting for polynomial systems
//! near a zero-Hopf equilibrium.
//!
//! Subcommands:
//!   average  compute averaged functions f_1..f_k
//!   analyze  build the semi-algebraic system and count limit cycles at
//!            rational parameter points (certified boxes, optional BKK bound)
//!   formula  print the symbolic integrand template of y_k
//!
//! Exit codes: 0 success, 1 usage/parse error, 2 degenerate or flagged
//! cases, 3 certification failure.

use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};

use zhopf_cli::commands::{
    run_analyze, run_average, run_formula, AnalyzeOptions, AverageOptions, Format, FormulaOptions,
    RunOutcome,
};

const USAGE: &str = "\
usage:
  zhopf average <system.sys|-> --order <k> [--basis <file>] [--constraints <file>]
                [--psi-literal] [--standard-form] [--format text|json]
                [--output <file>] [--manifest <file>]
  zhopf analyze <system.sys|-> --order <k> --point <file> [--basis <file>]
                [--constraints <file>] [--bkk] [--subst rho] [--jobs <n>]
                [--psi-literal] [--format text|json] [--output <file>] [--manifest <file>]
  zhopf formula --order <k> --dim <n> [--format text|json] [--output <file>] [--manifest <file>]
";

struct Cli {
    args: Vec<String>,
}

impl Cli {
    fn take_flag(&mut self, name: &str) -> bool {
        if let Some(i) = self.args.iter().position(|a| a == name) {
            self.args.remove(i);
            true
        } else {
            false
        }
    }

    fn take_value(&mut self, name: &str) -> Result<Option<String>> {
        if let Some(i) = self.args.iter().position(|a| a == name) {
            if i + 1 >= self.args.len() {
                bail!("flag {name} needs a value");
            }
            let v = self.args.remove(i + 1);
            self.args.remove(i);
            Ok(Some(v))
        } else {
            Ok(None)
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn parse_format(value: Option<String>) -> Result<Format> {
    match value.as_deref() {
        None | Some("text") => Ok(Format::Text),
        Some("json") => Ok(Format::Json),
        Some(other) => bail!("unknown format `{other}` (expected text or json)"),
    }
}

fn finish(outcome: RunOutcome, output: Option<String>, manifest: Option<String>) -> Result<i32> {
    match &output {
        Some(path) => {
            std::fs::write(path, &outcome.stdout).with_context(|| format!("writing {path}"))?;
            // Manifests live beside explicit outputs unless redirected.
            let manifest_path = manifest.unwrap_or_else(|| format!("{path}.manifest"));
            std::fs::write(&manifest_path, &outcome.manifest)
                .with_context(|| format!("writing {manifest_path}"))?;
        }
        None => {
            print!("{}", outcome.stdout);
            if let Some(path) = manifest {
                std::fs::write(&path, &outcome.manifest)
                    .with_context(|| format!("writing {path}"))?;
            }
        }
    }
    Ok(outcome.exit_code)
}

fn dispatch() -> Result<i32> {
    let mut raw: Vec<String> = std::env::args().skip(1).collect();
    if raw.is_empty() || raw[0] == "--help" || raw[0] == "-h" {
        print!("{USAGE}");
        return Ok(if raw.is_empty() { 1 } else { 0 });
    }
    let command = raw.remove(0);
    let mut cli = Cli { args: raw };
    match command.as_str() {
        "average" => {
            let order: usize = cli
                .take_value("--order")?
                .ok_or_else(|| anyhow!("--order is required"))?
                .parse()
                .context("--order must be a positive integer")?;
            let basis = cli.take_value("--basis")?;
            let constraints = cli.take_value("--constraints")?;
            let format = parse_format(cli.take_value("--format")?)?;
            let output = cli.take_value("--output")?;
            let manifest = cli.take_value("--manifest")?;
            let psi_literal = cli.take_flag("--psi-literal");
            let emit_sf = cli.take_flag("--standard-form");
            let input = take_input(&mut cli)?;
            let system_text = read_input(&input)?;
            let basis_text = basis.map(|p| read_input(&p)).transpose()?;
            let constraints_text = constraints.map(|p| read_input(&p)).transpose()?;
            let outcome = run_average(&AverageOptions {
                system_text: &system_text,
                basis_text: basis_text.as_deref(),
                constraints_text: constraints_text.as_deref(),
                order,
                psi_literal,
                format,
                emit_standard_form: emit_sf,
            })?;
            finish(outcome, output, manifest)
        }
        "analyze" => {
            let order: usize = cli
                .take_value("--order")?
                .ok_or_else(|| anyhow!("--order is required"))?
                .parse()
                .context("--order must be a positive integer")?;
            let points = cli
                .take_value("--point")?
                .or(cli.take_value("--points")?)
                .ok_or_else(|| anyhow!("--point <file> is required"))?;
            let basis = cli.take_value("--basis")?;
            let constraints = cli.take_value("--constraints")?;
            let format = parse_format(cli.take_value("--format")?)?;
            let output = cli.take_value("--output")?;
            let manifest = cli.take_value("--manifest")?;
            let jobs: usize = match cli.take_value("--jobs")? {
                Some(v) => v.parse().context("--jobs must be a positive integer")?,
                None => 1,
            };
            let rho = match cli.take_value("--subst")? {
                Some(v) if v == "rho" || v == "rho=R^2" => true,
                Some(other) => bail!("unknown substitution `{other}` (expected rho)"),
                None => false,
            };
            let bkk = cli.take_flag("--bkk");
            let psi_literal = cli.take_flag("--psi-literal");
            let input = take_input(&mut cli)?;
            let system_text = read_input(&input)?;
            let basis_text = basis.map(|p| read_input(&p)).transpose()?;
            let constraints_text = constraints.map(|p| read_input(&p)).transpose()?;
            let points_text = read_input(&points)?;
            let outcome = run_analyze(&AnalyzeOptions {
                system_text: &system_text,
                basis_text: basis_text.as_deref(),
                constraints_text: constraints_text.as_deref(),
                points_text: &points_text,
                order,
                psi_literal,
                rho,
                bkk,
                jobs,
                format,
            })?;
            finish(outcome, output, manifest)
        }
        "formula" => {
            let order: usize = cli
                .take_value("--order")?
                .ok_or_else(|| anyhow!("--order is required"))?
                .parse()
                .context("--order must be a positive integer")?;
            let dimension: usize = cli
                .take_value("--dim")?
                .ok_or_else(|| anyhow!("--dim is required"))?
                .parse()
                .context("--dim must be an integer >= 2")?;
            let format = parse_format(cli.take_value("--format")?)?;
            let output = cli.take_value("--output")?;
            let manifest = cli.take_value("--manifest")?;
            ensure_consumed(&cli)?;
            let outcome = run_formula(&FormulaOptions {
                order,
                dimension,
                format,
            })?;
            finish(outcome, output, manifest)
        }
        other => {
            eprintln!("unknown command `{other}`\n{USAGE}");
            Ok(1)
        }
    }
}

fn take_input(cli: &mut Cli) -> Result<String> {
    let positional: Vec<String> = cli
        .args
        .iter()
        .filter(|a| !a.starts_with("--"))
        .cloned()
        .collect();
    match positional.len() {
        1 => {
            let input = positional[0].clone();
            cli.args.retain(|a| *a != input);
            ensure_consumed(cli)?;
            Ok(input)
        }
        0 => bail!("missing input file (use `-` for stdin)\n{USAGE}"),
        _ => bail!("multiple input files given: {positional:?}"),
    }
}

fn ensure_consumed(cli: &Cli) -> Result<()> {
    if !cli.args.is_empty() {
        bail!("unrecognized arguments: {:?}\n{USAGE}", cli.args);
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
