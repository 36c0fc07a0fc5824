fn main() {
    let (code, output) = mealydc::cli::run_command(std::env::args_os());
    println!("{output}");
    std::process::exit(code);
}
