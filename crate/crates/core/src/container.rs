//! JSON header line followed by a little-endian `f64` payload.

use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{HerzError, Result};

pub fn write_container<W: Write, H: Serialize>(mut w: W, header: &H, payload: &[f64]) -> Result<()> {
    let line = serde_json::to_string(header).map_err(|e| HerzError::Data(e.to_string()))?;
    w.write_all(line.as_bytes())?;
    w.write_all(b"\n")?;
    let mut bytes = Vec::with_capacity(payload.len() * 8);
    for x in payload {
        bytes.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&bytes)?;
    Ok(())
}

/// Reads a header and exactly `len(header)` payload values.
pub fn read_container<R: BufRead, H: DeserializeOwned>(
    mut r: R,
    expected_len: impl Fn(&H) -> Result<usize>,
) -> Result<(H, Vec<f64>)> {
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line)?;
    if line.last() != Some(&b'\n') {
        return Err(HerzError::Parse("missing header line".into()));
    }
    let header: H = serde_json::from_slice(&line[..line.len() - 1])
        .map_err(|e| HerzError::Parse(format!("bad header: {e}")))?;
    let len = expected_len(&header)?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != len * 8 {
        return Err(HerzError::Parse(format!(
            "payload holds {} bytes, header implies {}",
            bytes.len(),
            len * 8
        )));
    }
    let payload = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((header, payload))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, serde::Deserialize, PartialEq, Debug)]
    struct H {
        n: usize,
    }

    #[test]
    fn roundtrip_and_truncation() {
        let mut buf = Vec::new();
        write_container(&mut buf, &H { n: 2 }, &[1.5, -0.0]).unwrap();
        let (h, p) = read_container(buf.as_slice(), |h: &H| Ok(h.n)).unwrap();
        assert_eq!(h, H { n: 2 });
        assert_eq!(p, vec![1.5, -0.0]);
        buf.pop();
        assert!(read_container(buf.as_slice(), |h: &H| Ok(h.n)).is_err());
    }
}
