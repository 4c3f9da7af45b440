fn main() {
    std::process::exit(rhaudit::main_with_args(std::env::args_os()));
}
