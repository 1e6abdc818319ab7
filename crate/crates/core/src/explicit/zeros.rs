//! Tables of ordinates γ of nontrivial zeta zeros 1/2 + iγ.

use std::fs;
use std::path::{Path, PathBuf};

use super::special::hardy_z;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    pub gammas: Vec<f64>,
    pub source_path: Option<PathBuf>,
}

impl ZeroTable {
    /// Parses one positive decimal per line; blank lines and lines starting
    /// with '#' are skipped. Values must be strictly ascending.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gammas: Vec<f64> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let value: f64 = body
                .parse()
                .map_err(|_| Error::Input { line, message: format!("cannot parse {body:?} as a number") })?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Input { line, message: format!("zero ordinate must be positive, got {value}") });
            }
            if let Some(&prev) = gammas.last() {
                if value <= prev {
                    return Err(Error::Input { line, message: format!("not ascending: {value} after {prev}") });
                }
            }
            gammas.push(value);
        }
        if gammas.is_empty() {
            return Err(Error::Input { line: 0, message: "zero table is empty".into() });
        }
        Ok(ZeroTable { gammas, source_path: None })
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// The first `n` ordinates.
    pub fn first(&self, n: usize) -> Result<&[f64]> {
        self.gammas.get(..n).ok_or_else(|| {
            Error::InvalidArgument(format!("requested {n} zeros but the table holds {}", self.gammas.len()))
        })
    }

    /// Checks that Hardy's Z changes sign across each of the first `count`
    /// ordinates.
    pub fn spot_check(&self, count: usize) -> Result<()> {
        for (i, &g) in self.gammas.iter().take(count).enumerate() {
            let gap = [i.checked_sub(1).map(|j| g - self.gammas[j]), self.gammas.get(i + 1).map(|n| n - g)]
                .into_iter()
                .flatten()
                .fold(1.0, f64::min);
            let d = (gap / 4.0).min(1e-4);
            if hardy_z(g - d) * hardy_z(g + d) >= 0.0 {
                return Err(Error::Input {
                    line: i + 1,
                    message: format!("no sign change of Z(t) around {g}"),
                });
            }
        }
        Ok(())
    }
}

pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut table = ZeroTable::parse(&text)?;
    table.source_path = Some(path.to_path_buf());
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_comments_and_blank_lines() {
        let t = ZeroTable::parse("# header\n14.134725141734693\n\n21.022039638771555\n").unwrap();
        assert_eq!(t.len(), 2);
        assert!((t.gammas[0] - 14.134725).abs() < 1e-6);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(ZeroTable::parse(""), Err(Error::Input { .. })));
        assert!(matches!(ZeroTable::parse("# only a comment\n"), Err(Error::Input { .. })));
    }

    #[test]
    fn shuffled_input_reports_line() {
        let err = ZeroTable::parse("14.13\n25.01\n21.02\n").unwrap_err();
        assert!(matches!(err, Error::Input { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn garbage_reports_line() {
        let err = ZeroTable::parse("14.13\nabc\n").unwrap_err();
        assert!(matches!(err, Error::Input { line: 2, .. }));
    }

    #[test]
    fn load_from_file_and_spot_check() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "14.134725141734693\n21.022039638771555\n25.010857580145688").unwrap();
        let t = load_zeros(f.path()).unwrap();
        assert_eq!(t.source_path.as_deref(), Some(f.path()));
        t.spot_check(3).unwrap();
        let fake = ZeroTable::parse("14.134725141734693\n18.0\n").unwrap();
        assert!(fake.spot_check(2).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(load_zeros("/nonexistent/zeros.txt"), Err(Error::Io(_))));
    }
}
