use clap::Parser;

fn main() {
    // Die quietly on a closed pipe, like any other line-oriented tool,
    // instead of panicking mid-print when piped into head.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = plusi::cli::Cli::parse();
    if let Err(error) = plusi::cli::run(cli) {
        eprintln!("error: {error}");
        std::process::exit(error.exit_code());
    }
}
