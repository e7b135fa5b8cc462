use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let start = Instant::now();
    let mut stdout = std::io::stdout().lock();
    let result = stochgrav::run(std::env::args_os(), &mut stdout);
    let _ = stdout.flush();
    match result {
        Ok(()) => {
            eprintln!("wall_time_s={:.3}", start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
