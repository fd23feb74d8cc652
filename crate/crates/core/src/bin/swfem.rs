fn main() {
    std::process::exit(swfem::cli::main_with_args(std::env::args_os()));
}
