fn main() {
    std::process::exit(cosafe::run());
}
