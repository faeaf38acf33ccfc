//! Writes a pencil in the CLI's JSON matrix format and reads it back.

use genres::cli::matrix_file::{load_matrix, save_matrix};
use genres::{CMat, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("genres-example");
    std::fs::create_dir_all(&dir)?;
    let t = CMat::from_row_slice(2, 2, &[C64::new(1.0, 0.5), C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)])?;
    let path = dir.join("t.json");
    save_matrix(&t, &path)?;

    let loaded = load_matrix(&path)?;
    println!("{}", std::fs::read_to_string(&path)?);
    println!("sha256 {}", loaded.sha256);
    println!("exact round trip: {}", loaded.matrix == t);
    println!("try: genres analyze {} {}", path.display(), path.display());
    Ok(())
}
