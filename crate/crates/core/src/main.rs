use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use norcode::cli::{self, Params};
use norcode::{Error, Result};

#[derive(Parser)]
#[command(name = "norcode", version, about = "Error analysis of the 4-cell, 5-level even-parity MLC code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate E0, E2 and E2/E0 over the standard grid.
    Table1 {
        /// budget | approximation
        #[arg(long)]
        method: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form error rates at one operating point.
    Analytic {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo estimate at one operating point.
    Simulate {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        sim: Sim,
        #[command(flatten)]
        common: Common,
    },
    /// E0 and E2 over a range of margins, with the fitted log-log slope.
    Sweep {
        /// analytic | simulate | both
        #[arg(long)]
        mode: Option<String>,
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        sim: Sim,
        #[command(flatten)]
        common: Common,
    },
    /// Zero-noise encode/decode self-test over all bytes.
    Roundtrip {
        #[command(flatten)]
        common: Common,
    },
    /// Re-run the command recorded in a JSON result file.
    Replay {
        file: String,
        /// Write the new result here instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// table | csv | json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct Point {
    /// Normalized margin a*D0 (a list or start:stop:step for sweep).
    #[arg(long, allow_hyphen_values = true)]
    a_delta0: Option<String>,
    /// exp(-a*D0), alternative to --a-delta0.
    #[arg(long)]
    exp_margin: Option<String>,
    /// Normalized program window a*W.
    #[arg(long)]
    aw: Option<String>,
    /// Tail weight T.
    #[arg(long)]
    tail: Option<String>,
}

#[derive(Args)]
struct Sim {
    #[arg(long, overrides_with = "no_protected")]
    protected: bool,
    #[arg(long, overrides_with = "protected")]
    no_protected: bool,
    /// Trial count, e.g. 1e7.
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    shards: Option<String>,
    #[arg(long)]
    stratified: bool,
    /// Per-stratum counts for k=1..4 tail cells, comma separated.
    #[arg(long)]
    stratum_trials: Option<String>,
    /// uniform | interior
    #[arg(long)]
    data_mode: Option<String>,
}

fn put(params: &mut Params, key: &str, value: Option<String>) {
    if let Some(v) = value {
        params.insert(key.to_string(), v);
    }
}

impl Common {
    fn layer(self, flags: Params) -> Result<Params> {
        let mut flags = flags;
        put(&mut flags, "format", self.format);
        put(&mut flags, "out", self.out);
        let base = match self.config {
            Some(path) => cli::parse_config(&std::fs::read_to_string(&path)?)?,
            None => Params::new(),
        };
        Ok(cli::merge(base, flags))
    }
}

impl Point {
    fn into_params(self, params: &mut Params) {
        put(params, "a-delta0", self.a_delta0);
        put(params, "exp-margin", self.exp_margin);
        put(params, "aw", self.aw);
        put(params, "tail", self.tail);
    }
}

impl Sim {
    fn into_params(self, params: &mut Params) {
        if self.protected {
            params.insert("protected".into(), "true".into());
        }
        if self.no_protected {
            params.insert("protected".into(), "false".into());
        }
        if self.stratified {
            params.insert("stratified".into(), "true".into());
        }
        put(params, "trials", self.trials);
        put(params, "seed", self.seed);
        put(params, "shards", self.shards);
        put(params, "stratum-trials", self.stratum_trials);
        put(params, "data-mode", self.data_mode);
    }
}

fn dispatch(command: Command) -> Result<cli::CommandOutput> {
    let mut flags = Params::new();
    let (name, common) = match command {
        Command::Table1 { method, common } => {
            put(&mut flags, "method", method);
            ("table1", common)
        }
        Command::Analytic { point, common } => {
            point.into_params(&mut flags);
            ("analytic", common)
        }
        Command::Simulate { point, sim, common } => {
            point.into_params(&mut flags);
            sim.into_params(&mut flags);
            ("simulate", common)
        }
        Command::Sweep { mode, point, sim, common } => {
            put(&mut flags, "mode", mode);
            point.into_params(&mut flags);
            sim.into_params(&mut flags);
            ("sweep", common)
        }
        Command::Roundtrip { common } => ("roundtrip", common),
        Command::Replay { file, out } => {
            let text = std::fs::read_to_string(&file)?;
            return cli::replay(&text, out);
        }
    };
    let params = common.layer(flags)?;
    cli::execute(name, &params)
}

fn main() -> ExitCode {
    let parsed = Cli::parse();
    let result = dispatch(parsed.command).and_then(|out| cli::emit(&out));
    match result {
        Ok(Some(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("norcode: {e}");
            match e {
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
