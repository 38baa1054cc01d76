//! Text output for alignments: a row-per-line rendering with link bars,
//! and a line-delimited structured record.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::align::multi::MultipleAlignment;
use crate::align::search::BuiltAlignment;
use crate::store::PatternStore;
use crate::symbol::{join_symbols, Symbol};

/// Renders an alignment as a grid: the New pattern on row 0, one line per
/// Old row, `|` bars tying linked symbols together through every line they
/// cross.
pub fn render_alignment(
    ma: &MultipleAlignment,
    store: &PatternStore,
    new: &[Symbol],
) -> crate::error::Result<String> {
    let lin = ma.linearize(store, new)?;
    let nodes: Vec<&[crate::align::multi::Cell]> = lin.ordered_nodes().collect();
    let rows = ma.row_count();

    // Column geometry.
    let mut widths = Vec::with_capacity(nodes.len());
    for cells in &nodes {
        let w = cells
            .iter()
            .map(|&c| ma.symbol(c, store, new).text().len())
            .max()
            .unwrap_or(1);
        widths.push(w + 1);
    }
    // A column's bar spans from its first to its last row.
    let spans: Vec<Option<(u16, u16)>> = nodes
        .iter()
        .map(|cells| {
            if cells.len() < 2 {
                None
            } else {
                let lo = cells.iter().map(|c| c.row).min().expect("cells");
                let hi = cells.iter().map(|c| c.row).max().expect("cells");
                Some((lo, hi))
            }
        })
        .collect();

    let label_width = format!("{}", rows.saturating_sub(1)).len();
    let mut out = String::new();
    for row in 0..rows as u16 {
        // The row line itself.
        let mut line = format!("{:label_width$} ", row);
        for (n, cells) in nodes.iter().enumerate() {
            let text = cells
                .iter()
                .find(|c| c.row == row)
                .map(|&c| ma.symbol(c, store, new).text());
            match text {
                Some(t) => line.push_str(&format!("{t:<w$}", w = widths[n])),
                None => {
                    let bar = matches!(spans[n], Some((lo, hi)) if lo < row && row < hi);
                    if bar {
                        line.push_str(&format!("{:<w$}", "|", w = widths[n]));
                    } else {
                        line.push_str(&" ".repeat(widths[n]));
                    }
                }
            }
        }
        out.push_str(line.trim_end());
        out.push_str(&format!(" {row}\n"));

        // The gap line below, while another row follows.
        if (row as usize) + 1 < rows {
            let mut gap = " ".repeat(label_width + 1);
            for (n, _) in nodes.iter().enumerate() {
                let bar = matches!(spans[n], Some((lo, hi)) if lo <= row && row < hi);
                if bar {
                    gap.push_str(&format!("{:<w$}", "|", w = widths[n]));
                } else {
                    gap.push_str(&" ".repeat(widths[n]));
                }
            }
            let trimmed = gap.trim_end();
            out.push_str(trimmed);
            out.push('\n');
        }
    }
    Ok(out)
}

/// One line-delimited record: rows, links, scores, probability, encoding.
pub fn structured_record(
    built: &BuiltAlignment,
    probability: f64,
    index: usize,
    store: &PatternStore,
    new: &[Symbol],
) -> String {
    let ma = &built.alignment;
    let mut out = format!("alignment {index}\n");
    out.push_str(&format!("new {}\n", join_symbols(new)));
    for (i, id) in ma.old_rows().iter().enumerate() {
        let p = store.pattern(*id).expect("row pattern");
        out.push_str(&format!("row {} pattern {} {}\n", i + 1, id.0, join_symbols(p.symbols())));
    }
    let mut cols: Vec<String> = ma
        .columns()
        .iter()
        .map(|col| {
            let cells: Vec<String> =
                col.iter().map(|c| format!("{}:{}", c.row, c.idx)).collect();
            cells.join(" ")
        })
        .collect();
    cols.sort();
    for col in cols {
        out.push_str(&format!("link {col}\n"));
    }
    out.push_str(&format!("b-new {:.6}\n", built.score.b_new));
    out.push_str(&format!("b-code {:.6}\n", built.score.b_code));
    out.push_str(&format!("cd {:.6}\n", built.score.cd));
    out.push_str(&format!("p {probability:.6}\n"));
    out.push_str(&format!("encoding {}\n", join_symbols(&built.encoding.symbols)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::multi::{Cell, MultipleAlignment};
    use crate::pattern::PatternId;
    use crate::store::{build_store, CostMode};
    use crate::symbol::parse_symbols;
    use alloc::vec;

    #[test]
    fn render_has_one_line_per_row_plus_gaps() {
        let store = build_store(
            vec![(parse_symbols("D 11 a #D").unwrap(), 1)],
            CostMode::Uniform,
        )
        .unwrap();
        let new = parse_symbols("a").unwrap();
        let ma = MultipleAlignment::from_links(
            &store,
            &new,
            vec![PatternId(0)],
            &[(Cell::new(0, 0), Cell::new(1, 2))],
        )
        .unwrap();
        let text = render_alignment(&ma, &store, &new).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("0"));
        assert!(lines[0].contains('a'));
        assert!(lines[1].contains('|'));
        assert!(lines[2].contains("D 11 a #D"));
        // The bar sits under the linked `a`.
        let bar_x = lines[1].find('|').unwrap();
        assert_eq!(&lines[0][bar_x..bar_x + 1], "a");
    }

    #[test]
    fn render_is_deterministic() {
        let store = build_store(
            vec![
                (parse_symbols("NP 2 A #A N #N #NP").unwrap(), 1),
                (parse_symbols("A 12 fruit #A").unwrap(), 1),
                (parse_symbols("N 7 flies #N").unwrap(), 1),
            ],
            CostMode::Uniform,
        )
        .unwrap();
        let new = parse_symbols("fruit flies").unwrap();
        let params = crate::align::search::SearchParams::default();
        let a = crate::align::search::build_alignments(&new, &store, &params).unwrap();
        let b = crate::align::search::build_alignments(&new, &store, &params).unwrap();
        let ra = render_alignment(&a[0].alignment, &store, &new).unwrap();
        let rb = render_alignment(&b[0].alignment, &store, &new).unwrap();
        assert_eq!(ra, rb);
        let sa = structured_record(&a[0], 1.0, 1, &store, &new);
        assert!(sa.contains("encoding NP 2 12 7 #NP"));
    }
}
