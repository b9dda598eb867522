use clap::error::ErrorKind;
use clap::Parser;
use sasaki_forge::cli::{run, Cli};

fn main() {
    // exit 0 for help/version, 1 for flag validation, per the report
    // contract (numerical failures exit 2 from run itself)
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
