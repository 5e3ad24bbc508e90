fn main() {
    std::process::exit(pinchperf::run(std::env::args_os()));
}
