use std::process::ExitCode;

use ellipt::cli::{main_with, run_diagrams, DiagramsCli};

fn main() -> ExitCode {
    main_with::<DiagramsCli>(run_diagrams)
}
