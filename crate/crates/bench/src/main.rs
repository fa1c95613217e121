fn main() {
    std::process::exit(rcmtr_bench::main_with_args(std::env::args_os()));
}
