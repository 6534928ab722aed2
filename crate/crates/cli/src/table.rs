//! Aligned console tables.

/// Renders `rows × columns` percentages with one decimal. The best value of
/// each row is marked with `*`; missing values print as `-`.
pub fn render(title: &str, row_label: &str, columns: &[String], rows: &[(String, Vec<Option<f64>>)]) -> String {
    let cell = |v: Option<f64>, best: bool| match v {
        Some(x) => format!("{:.1}{}", x * 100.0, if best { "*" } else { "" }),
        None => "-".to_string(),
    };
    let body: Vec<(String, Vec<String>)> = rows
        .iter()
        .map(|(label, vals)| {
            let best = vals.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
            let cells = vals.iter().map(|v| cell(*v, v.is_some_and(|x| x == best))).collect();
            (label.clone(), cells)
        })
        .collect();
    let first = body.iter().map(|(l, _)| l.len()).chain([row_label.len()]).max().unwrap_or(0);
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(j, c)| body.iter().map(|(_, cells)| cells[j].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let mut out = format!("{title}\n{row_label:<first$}");
    for (c, w) in columns.iter().zip(&widths) {
        out += &format!("  {c:>w$}");
    }
    out.push('\n');
    for (label, cells) in &body {
        out += &format!("{label:<first$}");
        for (c, w) in cells.iter().zip(&widths) {
            out += &format!("  {c:>w$}");
        }
        out.push('\n');
    }
    out
}
