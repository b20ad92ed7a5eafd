fn main() {
    // die quietly on a closed pipe (e.g. `kmk roots ... | head`) instead of
    // panicking on the write error
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(kmk::cli::run(std::env::args_os()));
}
