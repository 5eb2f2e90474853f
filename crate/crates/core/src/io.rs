//! File formats: window sample CSVs (one row per group point, `re,im`,
//! rows in lexicographic coordinate order) and twisted-element CSVs
//! (`lambda coords..., re, im` with the `x` coordinates first, then the
//! frequency coordinates).

use crate::algebra::TwistedElement;
use crate::phase::{Lattice, PhasePoint};
use crate::{CVec, Error, Result, C64};
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

pub fn write_window<W: Write>(mut out: W, window: &CVec) -> Result<()> {
    for z in window.iter() {
        writeln!(out, "{},{}", z.re, z.im)?;
    }
    Ok(())
}

pub fn read_window<R: BufRead>(input: R) -> Result<CVec> {
    let mut values = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let re = parse_float(parts.next(), lineno)?;
        let im = parse_float(parts.next(), lineno)?;
        if parts.next().is_some() {
            return Err(Error::Format(format!(
                "window csv line {}: expected two columns",
                lineno + 1
            )));
        }
        values.push(C64::new(re, im));
    }
    if values.is_empty() {
        return Err(Error::Format("window csv has no rows".into()));
    }
    Ok(CVec::from_vec(values))
}

fn parse_float(field: Option<&str>, lineno: usize) -> Result<f64> {
    field
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::Format(format!("csv line {}: missing column", lineno + 1)))?
        .parse::<f64>()
        .map_err(|e| Error::Format(format!("csv line {}: {e}", lineno + 1)))
}

pub fn write_window_file<P: AsRef<Path>>(path: P, window: &CVec) -> Result<()> {
    write_window(std::fs::File::create(path)?, window)
}

pub fn read_window_file<P: AsRef<Path>>(path: P) -> Result<CVec> {
    read_window(std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn write_twisted<W: Write>(mut out: W, a: &TwistedElement) -> Result<()> {
    let lat = a.lattice();
    for (k, z) in a.coeffs().iter().enumerate() {
        let p = lat.point(k);
        let coords: Vec<String> =
            p.x.coords()
                .iter()
                .chain(p.omega.coords())
                .map(|c| c.to_string())
                .collect();
        writeln!(out, "{},{},{}", coords.join(","), z.re, z.im)?;
    }
    Ok(())
}

/// Reads coefficients onto an existing lattice; rows naming phase points
/// outside the lattice are rejected.
pub fn read_twisted<R: BufRead>(input: R, lattice: &Arc<Lattice>) -> Result<TwistedElement> {
    let group = lattice.group().clone();
    let rank = group.rank();
    let mut element = TwistedElement::zeros(lattice.clone());
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 * rank + 2 {
            return Err(Error::Format(format!(
                "twisted csv line {}: expected {} columns, got {}",
                lineno + 1,
                2 * rank + 2,
                fields.len()
            )));
        }
        let coord = |s: &str| -> Result<i64> {
            s.trim()
                .parse::<i64>()
                .map_err(|e| Error::Format(format!("twisted csv line {}: {e}", lineno + 1)))
        };
        let xs: Result<Vec<i64>> = fields[..rank].iter().map(|s| coord(s)).collect();
        let ws: Result<Vec<i64>> = fields[rank..2 * rank].iter().map(|s| coord(s)).collect();
        let point = PhasePoint::new(group.element(&xs?)?, group.element(&ws?)?);
        let pos = lattice.position(&point).ok_or(Error::SupportViolation)?;
        let re = parse_float(Some(fields[2 * rank]), lineno)?;
        let im = parse_float(Some(fields[2 * rank + 1]), lineno)?;
        element.coeffs_mut()[pos] += C64::new(re, im);
    }
    Ok(element)
}

pub fn write_twisted_file<P: AsRef<Path>>(path: P, a: &TwistedElement) -> Result<()> {
    write_twisted(std::fs::File::create(path)?, a)
}

pub fn read_twisted_file<P: AsRef<Path>>(
    path: P,
    lattice: &Arc<Lattice>,
) -> Result<TwistedElement> {
    read_twisted(std::io::BufReader::new(std::fs::File::open(path)?), lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lca::FiniteGroup;

    #[test]
    fn window_roundtrip() {
        let v = CVec::from_vec(vec![
            C64::new(1.0, -2.5),
            C64::new(0.0, 0.125),
            C64::new(-3.25, 0.0),
        ]);
        let mut buf = Vec::new();
        write_window(&mut buf, &v).unwrap();
        let back = read_window(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn window_rejects_junk() {
        assert!(read_window(std::io::Cursor::new(b"1.0".to_vec())).is_err());
        assert!(read_window(std::io::Cursor::new(b"a,b".to_vec())).is_err());
        assert!(read_window(std::io::Cursor::new(b"1,2,3".to_vec())).is_err());
        assert!(read_window(std::io::Cursor::new(Vec::new())).is_err());
    }

    #[test]
    fn twisted_roundtrip_and_support() {
        let g = FiniteGroup::cyclic(4);
        let lat = Arc::new(Lattice::rectangular(&g, 2, 2).unwrap());
        let mut a = TwistedElement::zeros(lat.clone());
        a.coeffs_mut()[1] = C64::new(0.5, -1.5);
        a.coeffs_mut()[3] = C64::new(2.0, 0.0);
        let mut buf = Vec::new();
        write_twisted(&mut buf, &a).unwrap();
        let back = read_twisted(std::io::Cursor::new(buf), &lat).unwrap();
        assert_eq!(a.coeffs(), back.coeffs());

        // a row off the lattice is a support violation
        let bad = b"1,0,1.0,0.0\n".to_vec();
        assert!(matches!(
            read_twisted(std::io::Cursor::new(bad), &lat),
            Err(Error::SupportViolation)
        ));
    }
}
