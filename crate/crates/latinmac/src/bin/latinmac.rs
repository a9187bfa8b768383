use std::env;
use std::process;

fn main() {
    let args: Vec<String> = env::args().skip(1).collect();
    process::exit(latinmac::cli::main_with_args(&args));
}
