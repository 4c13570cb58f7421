mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use ergosum::Verdict;

use args::{Cli, Settings};

fn fail(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e.render());
            return ExitCode::from(1);
        }
    };
    let settings = match Settings::resolve(cli.command.common()) {
        Ok(s) => s,
        Err(m) => return fail(&m),
    };
    if let Some(n) = settings.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(&format!("cannot start {n} worker threads: {e}"));
        }
    }
    let out = match commands::run(&cli.command, &settings) {
        Ok(o) => o,
        Err(m) => return fail(&m),
    };
    let label = settings.theta.as_deref();
    let text = match output::render(cli.command.name(), label, &settings, &out) {
        Ok(t) => t,
        Err(m) => return fail(&m),
    };
    if let Err(m) = output::write(settings.out.as_deref(), &text) {
        return fail(&m);
    }
    match out.verdict {
        Verdict::Holds => ExitCode::SUCCESS,
        Verdict::Undecided => ExitCode::from(2),
        Verdict::Violated => {
            eprintln!("error: a certified check is violated");
            ExitCode::from(1)
        }
    }
}
