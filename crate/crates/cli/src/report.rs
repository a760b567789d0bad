//! Text tables and JSON rendering. Both are deterministic: column widths
//! depend only on the cell contents and JSON keys keep declaration order.

use serde::Serialize;

/// Left-aligned columns separated by two spaces, without trailing blanks.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&width).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// `key  value` lines with the keys padded to a common width.
pub fn fields(pairs: &[(&str, String)]) -> String {
    let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<w$}  {v}").trim_end().to_string() + "\n").collect()
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("serialisable report") + "\n"
}

pub fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

pub fn opt_yes_no(b: Option<bool>) -> String {
    b.map(yes_no).unwrap_or_else(|| "-".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align() {
        let t = table(&["a", "bbb"], &[vec!["xx".into(), "y".into()], vec!["z".into(), "".into()]]);
        assert_eq!(t, "a   bbb\nxx  y\nz\n");
    }

    #[test]
    fn field_padding() {
        assert_eq!(fields(&[("k", "1".into()), ("long", "2".into())]), "k     1\nlong  2\n");
    }
}
