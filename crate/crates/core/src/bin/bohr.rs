fn main() {
    std::process::exit(bohr_core::cli::run());
}
