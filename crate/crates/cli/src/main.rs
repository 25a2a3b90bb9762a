use std::io::Write;

fn main() {
    let out = obsnum_cli::run(std::env::args_os().skip(1));
    print!("{}", out.stdout);
    std::io::stdout().flush().ok();
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
