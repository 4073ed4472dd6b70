//! Dataset readers: numeric CSV and directories of binary PGM images.

use std::fs;
use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Pixel values are divided by this, mapping 8-bit gray levels into `[0, 255/256]`.
pub const PIXEL_SCALE: f64 = 256.0;

pub fn load_csv(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, &e))?;
    parse_csv(&text)
}

/// Parses `f0,…,f{l-1},label` CSV. Labels must be contiguous from 0 and every
/// feature finite; errors carry the 1-based line number.
pub fn parse_csv(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::parse(Some(1), e.to_string()))?
        .clone();
    let columns = header.len();
    if columns < 2 || header.get(columns - 1) != Some("label") {
        return Err(Error::parse(
            Some(1),
            "header must list feature columns followed by `label`",
        ));
    }
    for (i, name) in header.iter().take(columns - 1).enumerate() {
        if name != format!("f{i}") {
            return Err(Error::parse(
                Some(1),
                format!("column {i} is named {name:?}, expected \"f{i}\""),
            ));
        }
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize);
        if record.len() != columns {
            return Err(Error::parse(
                line,
                format!("{} fields, expected {columns}", record.len()),
            ));
        }
        let row = record
            .iter()
            .take(columns - 1)
            .map(|field| match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(Error::parse(line, format!("non-finite value {field:?}"))),
                Err(_) => Err(Error::parse(line, format!("invalid number {field:?}"))),
            })
            .collect::<Result<Vec<f64>>>()?;
        let label_field = &record[columns - 1];
        let label = label_field
            .parse::<usize>()
            .map_err(|_| Error::parse(line, format!("invalid label {label_field:?}")))?;
        features.push(row);
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::parse(None, "CSV has a header but no samples"));
    }
    let class_count = labels.iter().max().map_or(0, |m| m + 1);
    let mut present = vec![false; class_count];
    labels.iter().for_each(|&l| present[l] = true);
    if let Some(missing) = present.iter().position(|p| !p) {
        return Err(Error::parse(
            None,
            format!("labels are not contiguous: no sample has label {missing}"),
        ));
    }
    Dataset::new(features, labels)
}

/// An 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    /// Row-major pixels divided by [`PIXEL_SCALE`].
    pub fn scaled_features(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| f64::from(p) / PIXEL_SCALE).collect()
    }
}

/// Parses a binary (`P5`) PGM with a maximum gray value of at most 255.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos)?;
    if magic != b"P5" {
        return Err(Error::parse(None, "not a binary PGM (missing P5 magic)"));
    }
    let mut header = [0usize; 3];
    for (slot, name) in header.iter_mut().zip(["width", "height", "maxval"]) {
        let token = next_token(bytes, &mut pos)?;
        *slot = std::str::from_utf8(token)
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(None, format!("invalid PGM {name}")))?;
    }
    let [width, height, maxval] = header;
    if width == 0 || height == 0 {
        return Err(Error::parse(None, "PGM has zero width or height"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::parse(
            None,
            format!("PGM maxval {maxval} unsupported; expected 1..=255"),
        ));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::parse(None, "PGM header not followed by whitespace")),
    }
    let size = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(None, "PGM dimensions overflow"))?;
    let raster = bytes
        .get(pos..)
        .filter(|r| r.len() >= size)
        .ok_or_else(|| Error::parse(None, format!("PGM raster truncated; expected {size} bytes")))?;
    Ok(GrayImage {
        width,
        height,
        pixels: raster[..size].to_vec(),
    })
}

/// Next whitespace-delimited header token, skipping `#` comments.
fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while bytes.get(*pos).is_some_and(u8::is_ascii_whitespace) {
            *pos += 1;
        }
        if bytes.get(*pos) == Some(&b'#') {
            while bytes.get(*pos).is_some_and(|b| *b != b'\n') {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#') {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::parse(None, "PGM header ended early"));
    }
    Ok(&bytes[start..*pos])
}

/// Loads `root/<class>/<image>.pgm`. Class directories are taken in name
/// order and labelled `0, 1, …`; every regular file must be a PGM of the same
/// size, and any file that cannot be read is reported by name.
pub fn load_image_dir(root: &Path) -> Result<Dataset> {
    let mut class_dirs = sorted_entries(root)?;
    class_dirs.retain(|p| p.is_dir());
    if class_dirs.is_empty() {
        return Err(Error::EmptyInput(format!(
            "{} has no class subdirectories",
            root.display()
        )));
    }
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut shape: Option<(usize, usize, String)> = None;
    for (label, dir) in class_dirs.iter().enumerate() {
        let files = sorted_entries(dir)?;
        if files.is_empty() {
            return Err(Error::InsufficientData(format!(
                "class directory {} is empty",
                dir.display()
            )));
        }
        for file in files {
            if file.is_dir() {
                return Err(Error::parse(
                    None,
                    format!("unexpected nested directory {}", file.display()),
                ));
            }
            let bytes = fs::read(&file)
                .map_err(|e| Error::parse(None, format!("{}: {e}", file.display())))?;
            let image = parse_pgm(&bytes).map_err(|e| {
                Error::parse(None, format!("{}: {e}", file.display()))
            })?;
            match &shape {
                None => shape = Some((image.width, image.height, file.display().to_string())),
                Some((w, h, first)) if (*w, *h) != (image.width, image.height) => {
                    return Err(Error::InconsistentImages(format!(
                        "{} is {}×{} but {first} is {w}×{h}",
                        file.display(),
                        image.width,
                        image.height
                    )));
                }
                Some(_) => {}
            }
            features.push(image.scaled_features());
            labels.push(label);
        }
    }
    Dataset::new(features, labels)
}

fn sorted_entries(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let mut entries = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, &e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| Error::io(dir, &e)))
        .collect::<Result<Vec<_>>>()?;
    entries.sort();
    Ok(entries)
}

/// Encodes an image as binary PGM; the inverse of [`parse_pgm`].
pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width, image.height).into_bytes();
    out.extend_from_slice(&image.pixels);
    out
}
