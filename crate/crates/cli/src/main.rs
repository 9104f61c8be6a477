fn main() {
    let args: Vec<String> = std::env::args().collect();
    let code = monalg_cli::main_with(&args, &mut std::io::stdin().lock(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
