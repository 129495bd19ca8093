fn main() {
    std::process::exit(vfd_relay::cli::main_from_env());
}
