//! `ptdimer`: sweeps, figure data and analytic-versus-oracle verification.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ptdimer_sweep::{exit_code, run, write_table, Axis, Command, Layer, Status, SweepError, SweepSpec};

#[derive(Parser)]
#[command(name = "ptdimer", version, about = "Driven gain/loss resonator dimer: parameter sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, global = true)]
    format: Option<String>,
    /// analytic | oracle | both
    #[arg(long, global = true)]
    engine: Option<String>,
    /// Worker threads (0: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Override a setting, e.g. `--set gamma1=0.4` or `--set tolerance=1e-6`.
    #[arg(long = "set", global = true, value_name = "NAME=VALUE")]
    sets: Vec<String>,
    /// Sweep a parameter: `name=min:max:count[:linear|log]`.
    #[arg(long = "axis", global = true, value_name = "AXIS")]
    axes: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Stability domain, EP line and singular boundaries over (gamma1, gamma2).
    StabilityMap,
    /// Lossy-resonator intensity over (delta, gamma1) with Re of the H_eff eigenvalues.
    IntensityMap,
    /// Noise band of the lossy-resonator intensity along delta, for several drives.
    Linecut,
    /// Signal-to-noise ratios of both resonators.
    SnrMap,
    /// Order parameter relaxing from a coherent initial state.
    Transient,
    /// Compare analytic and oracle steady-state moments.
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::StabilityMap => Command::StabilityMap,
            Cmd::IntensityMap => Command::IntensityMap,
            Cmd::Linecut => Command::Linecut,
            Cmd::SnrMap => Command::SnrMap,
            Cmd::Transient => Command::Transient,
            Cmd::Verify => Command::Verify,
        }
    }
}

fn resolve(cli: &Cli) -> Result<SweepSpec, SweepError> {
    let file = match &cli.config {
        Some(path) => Some(Layer::from_toml(&std::fs::read_to_string(path).map_err(|e| {
            SweepError::Config(format!("{}: {e}", path.display()))
        })?)?),
        None => None,
    };
    let mut layer = Layer {
        engine: cli.engine.as_deref().map(str::parse).transpose()?,
        format: cli.format.as_deref().map(str::parse).transpose()?,
        out: cli.out.clone(),
        jobs: cli.jobs,
        ..Layer::default()
    };
    for s in &cli.sets {
        layer.set(s)?;
    }
    layer.axis = cli.axes.iter().map(|a| Axis::parse(a)).collect::<Result<_, _>>()?;
    SweepSpec::resolve(cli.command.into(), file.as_ref(), &layer)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let spec = match resolve(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = run(&spec).and_then(|table| write_table(&spec, &table).map(|_| table));
    match outcome {
        Ok(table) => {
            let code = exit_code(&table);
            if code != 0 {
                let limited = table.count(Status::CutoffTooSmall) + table.count(Status::NotConverged);
                eprintln!("{} mismatching, {limited} resource-limited point(s)", table.count(Status::Mismatch));
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
