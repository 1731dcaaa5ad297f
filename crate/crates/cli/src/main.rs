fn main() {
    std::process::exit(hyperchrom::run(std::env::args_os()));
}
