fn main() {
    std::process::exit(gwsql_cli::run(std::env::args_os()));
}
