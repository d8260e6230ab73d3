fn main() {
    std::process::exit(cpn_bundles_cli::run(std::env::args_os()));
}
