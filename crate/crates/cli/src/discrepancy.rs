use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

/// One convention finding destined for the discrepancy log.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub title: String,
    pub body: String,
}

/// Appends findings as markdown sections, writing a header to a new file.
pub fn append(path: &Path, command: &str, findings: &[Finding]) -> std::io::Result<()> {
    if findings.is_empty() {
        return Ok(());
    }
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(file, "# Discrepancy log\n")?;
    }
    for f in findings {
        writeln!(file, "## {} ({command})\n\n{}\n", f.title, f.body)?;
    }
    Ok(())
}
