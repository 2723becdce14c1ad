use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sl2c_core::diagram::MeasureFamily;
use sl2c_core::spectral::EnergyVariant;
use sl2c_workbench::report::Format;
use sl2c_workbench::suites::{self, Settings, Suite};
use sl2c_workbench::tables::{self, Grid, Quantity, TableSpec};
use sl2c_workbench::{derive, WbError};

/// Workbench for the SL(2,C) spin magnet.
#[derive(Parser, Debug)]
#[command(name = "sl2c", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Number of sites.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Spin label n_s (integer or half-integer).
    #[arg(long, global = true, allow_hyphen_values = true)]
    ns: Option<f64>,
    /// Spin label nu_s.
    #[arg(long, global = true, allow_hyphen_values = true)]
    nus: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides every threshold of the selected suite.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Random draws per check.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key = value file; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Replay a rewrite script and compare with its closed form.
    Derive {
        #[arg(value_parser = derive::SCRIPTS)]
        script: String,
    },
    /// Tabulate a spectral quantity over an (n, nu) grid.
    Compute {
        #[arg(value_enum)]
        what: Quantity,
        /// For example `nu=-2:2:0.1,n=-2:2`.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// `s` or `one_minus_s`.
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u_nu: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        u_n: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, WbError> {
    let text = std::fs::read_to_string(path).map_err(|e| WbError::Config(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| WbError::Config(format!("{}:{}: expected key = value", path.display(), k + 1)))?;
        map.insert(key.trim().replace('_', "-"), val.trim().to_string());
    }
    Ok(map)
}

/// Fills unset flags from a `key = value` map.
struct Merge(BTreeMap<String, String>);

impl Merge {
    fn take<T: std::str::FromStr>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, WbError> {
        let from_file = self.0.remove(key);
        match (flag, from_file) {
            (Some(v), _) => Ok(Some(v)),
            (None, None) => Ok(None),
            (None, Some(s)) => s.parse().map(Some).map_err(|_| WbError::Config(format!("bad value for {key}: {s:?}"))),
        }
    }

    fn take_enum<T: ValueEnum>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, WbError> {
        let from_file = self.0.remove(key);
        match (flag, from_file) {
            (Some(v), _) => Ok(Some(v)),
            (None, None) => Ok(None),
            (None, Some(s)) => T::from_str(&s, true).map(Some).map_err(|_| WbError::Config(format!("bad value for {key}: {s:?}"))),
        }
    }

    fn finish(self) -> Result<(), WbError> {
        match self.0.keys().next() {
            Some(k) => Err(WbError::Config(format!("unknown config key {k:?}"))),
            None => Ok(()),
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), WbError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, WbError> {
    let mut m = Merge(match &cli.common.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    });
    let c = cli.common;
    let n = m.take("n", c.n)?;
    let ns = m.take("ns", c.ns)?.unwrap_or(0.0);
    let nus = m.take("nus", c.nus)?.unwrap_or(0.0);
    let seed = m.take("seed", c.seed)?.unwrap_or(42);
    let tol = m.take("tol", c.tol)?;
    let samples = m.take("samples", c.samples)?;
    let format = m.take_enum("format", c.format)?;
    let out = m.take("out", c.out)?;
    if (2.0 * ns).fract() != 0.0 {
        return Err(WbError::Config(format!("--ns {ns} is not a multiple of 1/2")));
    }
    match cli.cmd {
        Cmd::Verify { suite } => {
            m.finish()?;
            let report = suites::run(suite, &Settings { n, seed, tol, samples })?;
            emit(&report.render(format.unwrap_or(Format::Text))?, out.as_deref())?;
            Ok(report.passed())
        }
        Cmd::Derive { script } => {
            m.finish()?;
            let report = derive::run(&script)?;
            emit(&report.render(format.unwrap_or(Format::Text))?, out.as_deref())?;
            Ok(report.passed())
        }
        Cmd::Compute { what, grid, family, variant, u_nu, u_n } => {
            let grid_text = m.take("grid", grid)?.unwrap_or_else(|| format!("n={ns},nu=0"));
            let family = m.take_enum("family", family)?.unwrap_or(FamilyArg::A);
            let variant = m.take("variant", variant)?.unwrap_or_else(|| "s".into());
            let u_nu = m.take("u-nu", u_nu)?;
            let u_n = m.take("u-n", u_n)?;
            m.finish()?;
            let mut spec = TableSpec::new(what);
            spec.n = n.unwrap_or(1);
            spec.ns = ns;
            spec.nus = nus;
            spec.grid = grid_text.parse::<Grid>()?;
            spec.grid_text = grid_text;
            spec.family = match family {
                FamilyArg::A => MeasureFamily::A,
                FamilyArg::B => MeasureFamily::B,
            };
            spec.variant = EnergyVariant::parse(&variant).ok_or_else(|| WbError::Config(format!("unknown variant {variant:?}")))?;
            if let Some(v) = u_nu {
                spec.u_nu = v;
            }
            spec.u_n = u_n;
            let table = tables::compute(&spec)?;
            emit(&table.render(format.unwrap_or(Format::Csv))?, out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("sl2c: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
