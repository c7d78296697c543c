use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gerbe::algebra::Frame;
use gerbe::crossed::{normalize, verify_normalization, SubgroupShape};
use gerbe::dataset::Dataset;
use gerbe::generate::{self, Mode, Options};
use gerbe::group::GroupFlavor;
use gerbe::runner::{run, Suite};

#[derive(Parser)]
#[command(name = "gerbecalc", version, about = "Exact checks for combinatorial torsor, gerbe and crossed-module data")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum G1 {
    Center,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run equation suites over a dataset.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// group, torsor, gerbe, triple, rho, equivalence, cm or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a dataset that is valid by construction.
    Generate {
        /// trivial, coboundary, abelian, torsor or crossed
        #[arg(long, default_value = "trivial")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        base_dim: usize,
        #[arg(long, default_value_t = 2)]
        trunc: usize,
        /// u2, u3 or gl3; abelian mode defaults to u2, the others to u3.
        #[arg(long)]
        flavor: Option<String>,
        /// Open sets for coboundary, abelian and torsor data.
        #[arg(long, default_value_t = 3)]
        opens: usize,
        /// Form degree of crossed-module data (1 to 3).
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, value_enum, default_value = "center")]
        g1: G1,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fill in the derived forms (ν, δ, ω) of every gerbe cocycle in a dataset.
    Derive {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Normalize the crossed-module section and store (g', χ).
    Normalize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Exit 2: unusable input or parameters. Exit 1: the data violates an equation.
enum Fail {
    Input(String),
    Violation(String),
}

fn input_err(e: impl std::fmt::Display) -> Fail {
    Fail::Input(e.to_string())
}

fn read(path: &Path) -> Result<Dataset, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
    Dataset::from_json(&text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check(input: &Path, suite: &str, report: Format, jobs: Option<usize>, output: Option<&Path>) -> Result<(), Fail> {
    let suites = Suite::parse(suite).map_err(input_err)?;
    let d = read(input)?;
    let rep = run(&d, &suites, jobs).map_err(input_err)?;
    let text = match report {
        Format::Text => rep.to_text(),
        Format::Json => rep.to_json() + "\n",
    };
    write(output, &text)?;
    if rep.ok() {
        Ok(())
    } else {
        let eqs: Vec<&str> = rep.failures().map(|r| r.equation.as_str()).collect();
        Err(Fail::Violation(format!("{} failed checks: {}", eqs.len(), eqs.join(", "))))
    }
}

#[allow(clippy::too_many_arguments)]
fn generate_cmd(
    mode: &str,
    seed: u64,
    base_dim: usize,
    trunc: usize,
    flavor: Option<&str>,
    opens: usize,
    degree: usize,
    g1: G1,
    output: Option<&Path>,
) -> Result<(), Fail> {
    let mode = Mode::parse(mode).map_err(input_err)?;
    let frame = Frame::new(base_dim, trunc).map_err(input_err)?;
    let default = if mode == Mode::Abelian { "u2" } else { "u3" };
    let flavor = GroupFlavor::parse(flavor.unwrap_or(default)).map_err(input_err)?;
    let opts = Options {
        opens,
        degree,
        g1: match g1 {
            G1::Center => SubgroupShape::Center,
            G1::Full => SubgroupShape::Full,
        },
    };
    let d = generate::dataset(mode, seed, frame, flavor, opts).map_err(input_err)?;
    write(output, &d.to_json())
}

fn derive(input: &Path, output: Option<&Path>) -> Result<(), Fail> {
    let mut d = read(input)?;
    let fill = |c: &mut gerbe::gerbe_suite::GerbeCocycle| -> Result<(), Fail> {
        *c = c.derive().map_err(input_err)?;
        Ok(())
    };
    if let Some(c) = d.gerbe.as_mut() {
        fill(c)?;
    }
    if let Some(t) = d.triple.as_mut() {
        fill(&mut t.source)?;
    }
    if let Some(e) = d.equivalence.as_mut() {
        fill(&mut e.source)?;
    }
    write(output, &d.to_json())
}

fn normalize_cmd(input: &Path, output: Option<&Path>) -> Result<(), Fail> {
    let mut d = read(input)?;
    let sec = d
        .crossed_module
        .as_mut()
        .ok_or_else(|| Fail::Input("dataset has no crossed_module section".into()))?;
    let out = normalize(&sec.data).map_err(|e| Fail::Violation(e.to_string()))?;
    if let Some(r) = verify_normalization(&sec.data, &out).iter().find(|r| !r.passed()) {
        return Err(Fail::Violation(format!("normalization fails {} at {:?}", r.equation, r.simplex)));
    }
    sec.normalized = Some((out.g_prime, out.chi));
    write(output, &d.to_json())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Check {
            input,
            suite,
            report,
            jobs,
            output,
        } => check(input, suite, *report, *jobs, output.as_deref()),
        Cmd::Generate {
            mode,
            seed,
            base_dim,
            trunc,
            flavor,
            opens,
            degree,
            g1,
            output,
        } => generate_cmd(mode, *seed, *base_dim, *trunc, flavor.as_deref(), *opens, *degree, *g1, output.as_deref()),
        Cmd::Derive { input, output } => derive(input, output.as_deref()),
        Cmd::Normalize { input, output } => normalize_cmd(input, output.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Violation(m)) => {
            eprintln!("gerbecalc: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Input(m)) => {
            eprintln!("gerbecalc: {m}");
            ExitCode::from(2)
        }
    }
}
