use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nilorb_cli::{
    cmd_count, cmd_enumerate, cmd_facet, cmd_represent, cmd_selftest, parse_label, render, CliError, JobArgs, Output,
};

#[derive(Parser)]
#[command(name = "nilorb", version, about = "Rational nilpotent orbits of p-adic orthogonal groups")]
struct Cli {
    /// Spaces of JSON indentation (0 for compact output).
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Job {
    /// Odd prime p.
    #[arg(long)]
    p: u64,
    /// Dimension of the quadratic space.
    #[arg(long)]
    n: Option<u32>,
    /// Form: `diag:1,r,w,rw` or `witt:<deg>:<unit>.<pi>` (default: split, or ⟨1⟩ ⊕ split).
    #[arg(long)]
    q: Option<String>,
    /// O or SO.
    #[arg(long, default_value = "SO")]
    group: String,
    /// Partition, e.g. `5,3,1`.
    #[arg(long)]
    lambda: Option<String>,
    /// Number of p-adic digits carried.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args)]
struct LabelArgs {
    /// Forms on the odd multiplicity spaces, ascending part, `;`-separated.
    #[arg(long)]
    qtup: Option<String>,
    /// Very even tag, I or II.
    #[arg(long)]
    ve: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Orbit counts per partition.
    Count {
        #[command(flatten)]
        job: Job,
        /// Also count by brute force.
        #[arg(long)]
        check: bool,
    },
    /// List orbit labels.
    Enumerate {
        #[command(flatten)]
        job: Job,
    },
    /// Build and verify a Lie triple for one label.
    Represent {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        label: LabelArgs,
    },
    /// Facet of the building attached to one label.
    Facet {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        label: LabelArgs,
    },
    /// Run the invariant battery.
    Selftest {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_value = "5,7")]
        p: Vec<u64>,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[arg(long)]
        precision: Option<u32>,
        /// Perturb every representative to check that failures are reported.
        #[arg(long)]
        sabotage: bool,
    },
}

impl Job {
    fn args(&self) -> JobArgs {
        JobArgs {
            p: self.p,
            n: self.n,
            q: self.q.clone(),
            group: Some(self.group.clone()),
            lambda: self.lambda.clone(),
            precision: self.precision,
        }
    }
}

fn run(cmd: Cmd) -> Result<Output, CliError> {
    Ok(match cmd {
        Cmd::Count { job, check } => cmd_count(&job.args().resolve()?, check),
        Cmd::Enumerate { job } => cmd_enumerate(&job.args().resolve()?),
        Cmd::Represent { job, label } => {
            let spec = job.args().resolve()?;
            let l = parse_label(&spec, label.qtup.as_deref(), label.ve.as_deref())?;
            cmd_represent(&spec, &l)
        }
        Cmd::Facet { job, label } => {
            let spec = job.args().resolve()?;
            let l = parse_label(&spec, label.qtup.as_deref(), label.ve.as_deref())?;
            cmd_facet(&spec, &l)
        }
        Cmd::Selftest {
            p,
            n_max,
            precision,
            sabotage,
        } => cmd_selftest(&p, n_max, precision, sabotage)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            println!("{}", render(&out.value, cli.json_indent));
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
