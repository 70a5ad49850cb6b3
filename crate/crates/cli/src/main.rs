fn main() {
    std::process::exit(rauzy_tool::run(std::env::args_os()));
}
