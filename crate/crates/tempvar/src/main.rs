fn main() {
    std::process::exit(tempvar::cli::main_entry());
}
