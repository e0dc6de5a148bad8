fn main() {
    std::process::exit(spectra_trace::cli::main_with_args(std::env::args_os()));
}
