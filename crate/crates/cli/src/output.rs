use crate::CliError;
use confdyn::raster::Raster;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Shortest round-trip decimal.
pub fn num(x: f64) -> String {
    confdyn::config::format_real(x)
}

/// RFC-4180 rows with LF endings. Fields here never need quoting.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

/// To a file, or stdout without a path.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Pretty JSON; `serde_json::Map` keeps keys sorted.
pub fn json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

pub fn write_raster(r: &Raster, path: &PathBuf) -> Result<(), CliError> {
    let png = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    if !png {
        std::fs::write(path, r.to_ppm())?;
        return Ok(());
    }
    let w = BufWriter::new(File::create(path)?);
    let mut enc = png::Encoder::new(w, r.spec.width as u32, r.spec.height as u32);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc
        .write_header()
        .map_err(|e| CliError::Io(e.to_string()))?;
    writer
        .write_image_data(&r.rgb())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}
