fn main() {
    let (code, out) = addax_cli::run(std::env::args_os());
    if code == addax_cli::EXIT_OK {
        println!("{out}");
    } else {
        eprintln!("{out}");
    }
    std::process::exit(code);
}
