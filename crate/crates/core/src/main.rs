use std::process::ExitCode;

fn main() -> ExitCode {
    if let Some(threads) = std::env::var("COHERENCE_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    ExitCode::from(coherence_lab::cli::run(std::env::args_os()) as u8)
}
