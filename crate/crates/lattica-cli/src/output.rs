//! File emission: atomic writes and the binary PGM frame format.

use std::io::Write;
use std::path::Path;

use lattica::grid::Configuration;

/// Writes via a temp file in the same directory, then renames into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// Binary PGM (P5, maxval 255): cell values scaled by floor(255 / (p-1)),
/// so p = 2 maps {0, 1} to {0, 255}. Width is the column count, height the
/// row count.
pub fn write_pgm(path: &Path, conf: &Configuration) -> std::io::Result<()> {
    let (m, n) = (conf.dims().rows(), conf.dims().cols());
    let p = conf.spec().modulus();
    let scale = if p > 1 { 255 / (p - 1) } else { 255 };
    let mut bytes = format!("P5\n{n} {m}\n255\n").into_bytes();
    for i in 0..m {
        for j in 0..n {
            bytes.push((conf.get(i, j) * scale).min(255) as u8);
        }
    }
    write_atomic(path, &bytes)
}
