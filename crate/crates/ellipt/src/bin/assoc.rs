use std::process::ExitCode;

use ellipt::cli::{main_with, run_assoc, AssocCli};

fn main() -> ExitCode {
    main_with::<AssocCli>(run_assoc)
}
