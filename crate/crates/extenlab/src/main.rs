use std::process::ExitCode;

fn main() -> ExitCode {
    extenlab::cli::main()
}
