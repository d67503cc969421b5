use std::process::ExitCode;

fn main() -> ExitCode {
    charseq_cli::main()
}
