//! Image file I/O. Inputs are recognised by magic bytes, outputs by extension.

use std::path::Path;

use despeckle::image::{read_pgm, read_raw, write_pgm, write_raw, PgmMaxval, RAW_MAGIC};
use despeckle::metrics::EdgeMap;
use despeckle::GrayImage;

use crate::error::{CliError, CliResult};

fn file_err(path: &Path, source: despeckle::Error) -> CliError {
    CliError::File {
        path: path.display().to_string(),
        source,
    }
}

pub fn read_image(path: &Path) -> CliResult<GrayImage> {
    let bytes = std::fs::read(path).map_err(|e| file_err(path, e.into()))?;
    let parsed = if bytes.starts_with(RAW_MAGIC) {
        read_raw(&bytes)
    } else {
        read_pgm(&bytes)
    };
    parsed.map_err(|e| file_err(path, e))
}

pub fn read_edges(path: &Path) -> CliResult<EdgeMap> {
    Ok(EdgeMap::from_image(&read_image(path)?))
}

fn is_pgm(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

pub fn write_image(path: &Path, img: &GrayImage, maxval: PgmMaxval) -> CliResult<()> {
    let bytes = if is_pgm(path) {
        write_pgm(img, maxval)
    } else {
        write_raw(img)
    };
    write_bytes(path, &bytes)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| file_err(path, e.into()))
}

/// `<path>.manifest.json`
pub fn manifest_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    s.into()
}
