use std::process::ExitCode;

use ellipt::cli::{main_with, run_report, ReportCli};

fn main() -> ExitCode {
    main_with::<ReportCli>(run_report)
}
