use std::process::ExitCode;

use ellipt::cli::{main_with, run_lie, LieCli};

fn main() -> ExitCode {
    main_with::<LieCli>(run_lie)
}
