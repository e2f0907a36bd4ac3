fn main() {
    std::process::exit(gvna_cli::main_entry());
}
