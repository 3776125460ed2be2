use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::spectral::{CVec3, ModeSet, SpectralField};

pub const FIELD_CSV_HEADER: [&str; 9] = ["kx", "ky", "kz", "re1", "im1", "re2", "im2", "re3", "im3"];

/// One row per mode, in lexicographic mode order.
pub fn write_field_csv<W: Write>(field: &SpectralField, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FIELD_CSV_HEADER)?;
    let ms = field.mode_set();
    for (i, a) in field.coeffs().iter().enumerate() {
        let k = ms.mode(i);
        let mut row = vec![k[0].to_string(), k[1].to_string(), k[2].to_string()];
        for c in a {
            row.push(fmt_f64(c.re));
            row.push(fmt_f64(c.im));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a field, inferring `K` from the wavevectors and verifying the mode
/// layout and every field invariant.
pub fn read_field_csv<R: Read>(input: R) -> Result<SpectralField> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(FIELD_CSV_HEADER) {
        return Err(Error::DataIntegrity(format!("unexpected field CSV header {header:?}")));
    }
    let mut modes = Vec::new();
    let mut coeffs: Vec<CVec3> = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let bad = |what: &str| Error::DataIntegrity(format!("row {}: {what}", line + 1));
        if record.len() != 9 {
            return Err(bad("expected 9 columns"));
        }
        let mut k = [0i32; 3];
        for (j, slot) in k.iter_mut().enumerate() {
            *slot = record[j].trim().parse().map_err(|_| bad("wavevector is not an integer"))?;
        }
        let mut v = [0f64; 6];
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = record[3 + j].trim().parse().map_err(|_| bad("amplitude is not a number"))?;
            if !slot.is_finite() {
                return Err(bad("amplitude is not finite"));
            }
        }
        modes.push(k);
        coeffs.push([Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]), Complex64::new(v[4], v[5])]);
    }
    let cutoff = modes
        .iter()
        .flat_map(|k| k.iter().map(|x| x.unsigned_abs() as usize))
        .max()
        .ok_or_else(|| Error::DataIntegrity("field CSV has no modes".into()))?;
    let ms = ModeSet::new(cutoff).map_err(|e| Error::DataIntegrity(e.to_string()))?;
    if modes.as_slice() != ms.modes() {
        return Err(Error::DataIntegrity(format!("modes do not form the complete lexicographic set for K = {cutoff}")));
    }
    SpectralField::new(&ms, coeffs)
}

impl SpectralField {
    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        write_field_csv(self, std::io::BufWriter::new(file))
    }

    pub fn read_csv_file(path: impl AsRef<Path>) -> Result<SpectralField> {
        read_field_csv(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_bytes(f: &SpectralField) -> Vec<u8> {
        let mut buf = Vec::new();
        write_field_csv(f, &mut buf).unwrap();
        buf
    }

    #[test]
    fn header_and_order() {
        let ms = ModeSet::new(1).unwrap();
        let text = String::from_utf8(to_bytes(&SpectralField::random(&ms, 1, 1.0))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "kx,ky,kz,re1,im1,re2,im2,re3,im3");
        assert!(lines.next().unwrap().starts_with("-1,-1,-1,"));
        assert_eq!(text.lines().count(), 27);
    }

    #[test]
    fn corrupted_symmetry_rejected() {
        let ms = ModeSet::new(1).unwrap();
        let text = String::from_utf8(to_bytes(&SpectralField::random(&ms, 1, 1.0))).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut cols: Vec<String> = lines[1].split(',').map(String::from).collect();
        cols[4] = "7e0".into();
        lines[1] = cols.join(",");
        assert!(matches!(read_field_csv(lines.join("\n").as_bytes()), Err(Error::DataIntegrity(_))));
    }

    #[test]
    fn missing_mode_rejected() {
        let ms = ModeSet::new(1).unwrap();
        let text = String::from_utf8(to_bytes(&SpectralField::zeros(&ms))).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let truncated = lines[..lines.len() - 1].join("\n");
        assert!(read_field_csv(truncated.as_bytes()).is_err());
    }

    #[test]
    fn bad_header_rejected() {
        assert!(read_field_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
