pub mod continuum;
pub mod discrete;

use std::path::Path;

use crate::InvalidInput;

/// Writes a column-text dump: a `#`-prefixed header line, then one row per
/// record.
pub(crate) fn write_dump(
    path: &Path,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> Result<(), InvalidInput> {
    let mut text = format!("# {header}\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    std::fs::write(path, text)
        .map_err(|e| InvalidInput(format!("dump file {}: {e}", path.display())))
}
