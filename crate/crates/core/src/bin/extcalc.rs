fn main() -> std::process::ExitCode {
    extcalc::cli::main()
}
