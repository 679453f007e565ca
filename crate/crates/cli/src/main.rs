mod cache;
mod text;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nchull::report::{CochainFile, Command, Conventions, Session};
use nchull::scenario::{bundled, Emit, Scenario};
use nchull::{Error, ErrorKind};

#[derive(Parser)]
#[command(name = "nchull", version, about = "Noncommutative deformation hulls, Massey products and observables")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ext¹ dimension table of the family.
    Ext(Common),
    /// Hull relations and graded dimensions.
    Hull(Common),
    /// Dimensions of A, O(M) and the versal morphism.
    Observables(Common),
    /// Burnside-type verdicts: injectivity, surjectivity, gr0 and gr1.
    Burnside(Common),
    /// Image of the versal morphism block by block.
    StandardForm(Common),
    /// Re-runs the construction over B = O(M).
    Closure(Common),
    /// Kernels K_n of the truncated versal morphisms.
    KernelChain(Common),
    /// Iterated extensions from a cochain file.
    #[command(subcommand)]
    Extension(ExtensionCmd),
    /// Lists the bundled scenarios.
    Scenarios,
}

#[derive(Subcommand)]
enum ExtensionCmd {
    /// Builds the block upper-triangular module from explicit cochains.
    Build(WithCochains),
    /// Runs the Massey vanishing check on consecutive classes.
    Check(WithCochains),
}

#[derive(Args)]
struct WithCochains {
    #[command(flatten)]
    common: Common,
    /// Cochain file (`nchull.cochains/1`).
    cochains: PathBuf,
}

#[derive(Args)]
struct Common {
    /// Scenario file, or the name of a bundled scenario.
    scenario: String,
    #[arg(long)]
    degree_cap: Option<usize>,
    #[arg(long, value_enum)]
    emit: Option<EmitArg>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// JSON file overriding representative-choice conventions.
    #[arg(long)]
    pin_conventions: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Json,
    Text,
}

/// Exit statuses.
const EXIT_VALIDATION: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = match e.downcast_ref::<Error>().map(Error::kind) {
                Some(ErrorKind::Validation) => ("validation", EXIT_VALIDATION),
                Some(ErrorKind::Hypothesis) => ("hypothesis", EXIT_HYPOTHESIS),
                Some(ErrorKind::Internal) => ("internal", EXIT_INTERNAL),
                // unreadable input files
                None => ("validation", EXIT_VALIDATION),
            };
            let diag = serde_json::json!({ "error": kind, "message": format!("{e:#}") });
            eprintln!("{diag}");
            ExitCode::from(code)
        }
    }
}

fn dispatch(cmd: Cmd) -> anyhow::Result<()> {
    let (command, common, cochains) = match cmd {
        Cmd::Ext(c) => (Command::Ext, c, None),
        Cmd::Hull(c) => (Command::Hull, c, None),
        Cmd::Observables(c) => (Command::Observables, c, None),
        Cmd::Burnside(c) => (Command::Burnside, c, None),
        Cmd::StandardForm(c) => (Command::StandardForm, c, None),
        Cmd::Closure(c) => (Command::Closure, c, None),
        Cmd::KernelChain(c) => (Command::KernelChain, c, None),
        Cmd::Extension(ExtensionCmd::Build(w)) => (Command::ExtensionBuild, w.common, Some(w.cochains)),
        Cmd::Extension(ExtensionCmd::Check(w)) => (Command::ExtensionCheck, w.common, Some(w.cochains)),
        Cmd::Scenarios => {
            for (name, _) in nchull::scenario::BUNDLED {
                println!("{name}");
            }
            return Ok(());
        }
    };
    let (scenario_bytes, scenario) = load_scenario(&common.scenario)?;
    let (conv_bytes, conventions) = match &common.pin_conventions {
        Some(p) => {
            let text = read(p)?;
            let c = Conventions::from_json(&text)?;
            (text, c)
        }
        None => (String::new(), Conventions::default()),
    };
    let cochain_text = cochains.as_deref().map(read).transpose()?;
    let cochain_file = cochain_text.as_deref().map(CochainFile::from_json).transpose()?;
    let emit = match common.emit {
        Some(EmitArg::Json) => Emit::Json,
        Some(EmitArg::Text) => Emit::Text,
        None => scenario.options.emit,
    };

    let key = cache::Key {
        scenario: &scenario_bytes,
        conventions: &conv_bytes,
        command: command.name(),
        degree_cap: common.degree_cap,
        cochains: cochain_text.as_deref().unwrap_or(""),
    };
    let cached = common.cache_dir.as_deref().and_then(|dir| cache::load(dir, &key));
    let json = match cached {
        Some(json) => {
            eprintln!("cache hit: {}", key.digest());
            json
        }
        None => {
            let mut session = Session::new(&scenario, &conventions, common.degree_cap)?;
            let json = session.run(command, cochain_file.as_ref())?.to_json();
            if let Some(dir) = &common.cache_dir {
                cache::store(dir, &key, &json).context("writing the cache")?;
            }
            json
        }
    };
    match emit {
        Emit::Json => println!("{json}"),
        Emit::Text => {
            let value: serde_json::Value = serde_json::from_str(&json).context("report is not JSON")?;
            print!("{}", text::render(&value));
        }
    }
    Ok(())
}

fn read(p: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn load_scenario(arg: &str) -> anyhow::Result<(String, Scenario)> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(s) = bundled(arg) {
            let text = nchull::scenario::BUNDLED.iter().find(|(n, _)| *n == arg).map(|(_, t)| t.to_string()).unwrap();
            return Ok((text, s));
        }
    }
    let text = read(path)?;
    let s = Scenario::from_json(&text)?;
    Ok((text, s))
}
