use std::io;

fn main() {
    let stdin = io::stdin();
    let mut io = chunksel::Io {
        stdin: &mut stdin.lock(),
        stdout: &mut io::stdout(),
        stderr: &mut io::stderr(),
    };
    std::process::exit(chunksel::run(std::env::args_os(), &mut io));
}
