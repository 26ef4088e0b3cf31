//! Deterministic rendering of tables, degrees, and reports.
//!
//! Rows print rank-descending, ties broken by tuple order, so output is
//! reproducible across runs. Chain degrees render as exact fractions,
//! real degrees in the shortest form that parses back to the same number.

use serde_json::json;

use crate::lattice::Degree;
use crate::rdt::RankedDataTable;
use crate::schema::{AttrName, Tuple, Value};

pub fn value_text(v: &Value) -> String {
    v.to_string()
}

/// Support rows in display order: rank descending, then tuple order.
pub fn sorted_rows(t: &RankedDataTable) -> Vec<(&Tuple, Degree)> {
    let mut rows: Vec<(&Tuple, Degree)> = t.support().collect();
    rows.sort_by(|(t1, r1), (t2, r2)| {
        r2.to_f64()
            .partial_cmp(&r1.to_f64())
            .expect("degrees are never NaN")
            .then_with(|| t1.cmp(t2))
    });
    rows
}

/// Plain-text table: a `rank` column followed by the scheme's attributes,
/// column-aligned, with a trailing line for a nonzero default rank.
pub fn render_table(t: &RankedDataTable) -> String {
    let attrs: Vec<&AttrName> = t.scheme().attrs().collect();
    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["rank".to_string()];
    header.extend(attrs.iter().map(|a| a.to_string()));
    grid.push(header);
    for (tu, r) in sorted_rows(t) {
        let mut row = vec![r.to_string()];
        row.extend(
            attrs
                .iter()
                .map(|a| value_text(tu.get(a).expect("tuple conforms to scheme"))),
        );
        grid.push(row);
    }
    let cols = grid[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| grid.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &grid {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if c + 1 < cols {
                for _ in cell.len()..widths[c] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    if t.default_rank() != t.lattice().bot() {
        out.push_str(&format!("default {}\n", t.default_rank()));
    }
    out
}

fn value_json(v: &Value) -> serde_json::Value {
    // exact decimal text for numbers; JSON floats would round
    json!(value_text(v))
}

/// Line-delimited JSON for a table: one `meta` record, then one `row`
/// record per support tuple in display order.
pub fn render_table_jsonl(name_hint: &str, t: &RankedDataTable) -> String {
    let mut out = String::new();
    let meta = json!({
        "type": "table",
        "query": name_hint,
        "rows": t.support_size(),
        "default_rank": t.default_rank().to_string(),
    });
    out.push_str(&meta.to_string());
    out.push('\n');
    for (tu, r) in sorted_rows(t) {
        let values: serde_json::Map<String, serde_json::Value> = tu
            .iter()
            .map(|(a, v)| (a.to_string(), value_json(v)))
            .collect();
        let row = json!({
            "type": "row",
            "rank": r.to_string(),
            "values": values,
        });
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::schema::{AttrName, RelationScheme, Tuple, Value};

    fn attr(s: &str) -> AttrName {
        AttrName::new(s).unwrap()
    }

    fn sample() -> RankedDataTable {
        let l = Lattice::lukasiewicz();
        let scheme = RelationScheme::new([attr("CITY")]);
        let row = |c: &str, r: f64| {
            (
                Tuple::new([(attr("CITY"), Value::text(c))]),
                l.degree(r).unwrap(),
            )
        };
        RankedDataTable::new(
            l,
            scheme,
            [row("Vestal", 0.93), row("Endicott", 0.89), row("Aalborg", 0.93)],
            l.bot(),
        )
        .unwrap()
    }

    #[test]
    fn rows_sort_by_rank_then_tuple() {
        let t = sample();
        let rows = sorted_rows(&t);
        let cities: Vec<String> = rows
            .iter()
            .map(|(tu, _)| value_text(tu.get(&attr("CITY")).unwrap()))
            .collect();
        assert_eq!(cities, ["Aalborg", "Vestal", "Endicott"]);
    }

    #[test]
    fn text_table_aligns_columns() {
        let rendered = render_table(&sample());
        let lines: Vec<&str> = rendered.lines().collect();
        assert_eq!(lines[0], "rank  CITY");
        assert_eq!(lines[1], "0.93  Aalborg");
        assert_eq!(lines[3], "0.89  Endicott");
        assert!(!rendered.contains("default"));
    }

    #[test]
    fn nonzero_default_is_reported() {
        let t = sample();
        let shifted = t.a_shift(t.lattice().degree(0.5).unwrap()).unwrap();
        let rendered = render_table(&shifted);
        assert!(rendered.contains("default 0.5"));
    }

    #[test]
    fn jsonl_rows_parse_back() {
        let out = render_table_jsonl("q", &sample());
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        let meta: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(meta["type"], "table");
        assert_eq!(meta["rows"], 3);
        let row: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(row["rank"], "0.93");
        assert_eq!(row["values"]["CITY"], "Aalborg");
    }
}
