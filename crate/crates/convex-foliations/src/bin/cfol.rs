fn main() {
    std::process::exit(convex_foliations::cli::main_entry());
}
