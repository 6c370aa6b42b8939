use std::process::ExitCode;

use ellipt::cli::{main_with, run_elliptic, EllipticCli};

fn main() -> ExitCode {
    main_with::<EllipticCli>(run_elliptic)
}
