fn main() {
    std::process::exit(qst::main_with_args(std::env::args().skip(1)));
}
