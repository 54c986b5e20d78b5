// Writes every figure table as CSV.
//
// ```text
// cargo run --example figures -- out/
// ```
//
// Without a directory argument the tables are written to a temporary
// directory and only their sizes are printed.

use std::path::PathBuf;

use bursty_relay::figures::{figure, FigureName};

pub fn run_example() -> bursty_relay::Result<()> {
    let scratch;
    let dir = match std::env::args().nth(1).filter(|a| !a.starts_with('-')) {
        Some(d) => PathBuf::from(d),
        None => {
            scratch = tempfile::tempdir()?;
            scratch.path().to_path_buf()
        }
    };
    std::fs::create_dir_all(&dir)?;
    for name in FigureName::ALL {
        let csv = figure(name)?;
        let path = dir.join(format!("{name}.csv"));
        std::fs::write(&path, &csv)?;
        println!("{name}: {} rows -> {}", csv.lines().count() - 2, path.display());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
