fn main() {
    std::process::exit(limprob::cli::run());
}
