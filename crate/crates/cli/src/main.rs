mod args;
mod report;
mod setup;

use std::io::Write;
use std::process::ExitCode;

use bigstep_core::kernel::SampleBudget;
use clap::Parser;

use args::{Cli, Command, Lang};
use report::{execute, exit, Outcome};
use setup::{ext_plan, fun_plan, resolve_lang, while_plan, CliError, SpecName};

/// Derivations recurse once per tree level, and the list-merge runs need hundreds of levels.
const STACK_BYTES: usize = 512 << 20;

fn default_depth(cmd: Command, lang: Lang) -> usize {
    match (cmd, lang) {
        (Command::StarCheck, _) => 8,
        (_, Lang::While) => 64,
        (_, Lang::Extwhile) => 256,
        (_, Lang::Fun) => 512,
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = &cli.opts;
    let cmd = cli.command;
    let spec = SpecName::parse(opts.spec.as_deref())?;
    let lang = resolve_lang(opts, spec)?;
    let depth = opts.depth.unwrap_or_else(|| default_depth(cmd, lang));
    let budget = SampleBudget::new(depth, opts.samples, opts.seed);
    match lang {
        Lang::While => execute(cmd, while_plan(opts, cmd, spec)?, budget, opts.format),
        Lang::Extwhile => execute(cmd, ext_plan(opts, cmd, spec)?, budget, opts.format),
        Lang::Fun => execute(cmd, fun_plan(opts, cmd, spec)?, budget, opts.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || dispatch(&cli))
        .expect("spawn worker thread");
    let code = match worker.join() {
        Ok(Ok(outcome)) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = stdout.write_all(outcome.output.as_bytes());
            outcome.code
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            exit::USAGE
        }
        Err(_) => exit::FAIL,
    };
    ExitCode::from(code)
}
