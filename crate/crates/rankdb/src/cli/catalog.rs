//! Catalog assembly: configuration parsing and ranked-CSV ingestion.
//!
//! The configuration is a sectioned key-value format:
//!
//! ```text
//! [lattice]
//! kind = lukasiewicz          # or goedel | product | chain (with n = SIZE)
//!
//! [domain money]
//! kind = number               # or text
//! similarity = ramp           # or identity | table
//! k = 500000                  # ramp width, ramp only
//!
//! [domain city]
//! kind = text
//! similarity = table
//! pair = Vestal Endicott 0.7  # symmetric; diagonal is implicit
//! values = Vestal Endicott Binghamton
//!
//! [attribute PRICE]
//! domain = money
//!
//! [table houses]
//! file = houses.csv           # relative to the config file
//! ```
//!
//! Lines are independent; `#` starts a full-line comment. CSV tables have
//! a `rank` first column; the remaining headers must be bound attributes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::decimal::Decimal;
use crate::lattice::{Degree, Lattice, LatticeKind};
use crate::rdt::RankedDataTable;
use crate::schema::{
    AttrName, DomainWithSimilarity, Domains, RelationScheme, SimTable, Tuple, Value, ValueKind,
};

use super::render::{sorted_rows, value_text};
use super::CliError;

/// A loaded configuration: the lattice, all domains with attribute
/// bindings, and the named tables.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub lattice: Lattice,
    pub domains: Domains,
    pub tables: BTreeMap<String, RankedDataTable>,
}

impl Catalog {
    pub fn table(&self, name: &str) -> Result<&RankedDataTable, CliError> {
        self.tables.get(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown table {name:?}; the catalog has {}",
                self.tables
                    .keys()
                    .map(|k| format!("{k:?}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })
    }
}

fn config_err(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Config {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn table_err(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Table {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SectionKind {
    Lattice,
    Domain,
    Attribute,
    Table,
}

#[derive(Debug)]
struct RawSection {
    kind: SectionKind,
    name: String,
    line: usize,
    entries: Vec<(String, String, usize)>,
}

fn parse_sections(path: &Path, text: &str) -> Result<Vec<RawSection>, CliError> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| config_err(path, ln, "unterminated section header"))?;
            let mut parts = inner.split_whitespace();
            let kind = parts.next().unwrap_or("");
            let name = parts.next().unwrap_or("").to_string();
            if parts.next().is_some() {
                return Err(config_err(path, ln, "too many words in section header"));
            }
            let kind = match (kind, name.is_empty()) {
                ("lattice", true) => SectionKind::Lattice,
                ("lattice", false) => {
                    return Err(config_err(path, ln, "[lattice] takes no name"))
                }
                ("domain", false) => SectionKind::Domain,
                ("attribute", false) => SectionKind::Attribute,
                ("table", false) => SectionKind::Table,
                (k @ ("domain" | "attribute" | "table"), true) => {
                    return Err(config_err(path, ln, format!("[{k}] needs a name")))
                }
                (other, _) => {
                    return Err(config_err(
                        path,
                        ln,
                        format!("unknown section kind {other:?}"),
                    ))
                }
            };
            sections.push(RawSection {
                kind,
                name,
                line: ln,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(path, ln, "expected `key = value` or a [section]"))?;
        let section = sections
            .last_mut()
            .ok_or_else(|| config_err(path, ln, "entry before the first section"))?;
        section
            .entries
            .push((key.trim().to_string(), value.trim().to_string(), ln));
    }
    Ok(sections)
}

/// Key lookup that rejects unknown and duplicated keys, so typos in
/// fixtures fail loudly.
struct Entries<'a> {
    section: &'a RawSection,
    path: &'a Path,
    allowed: &'static [&'static str],
    repeatable: &'static [&'static str],
}

impl<'a> Entries<'a> {
    fn new(
        path: &'a Path,
        section: &'a RawSection,
        allowed: &'static [&'static str],
        repeatable: &'static [&'static str],
    ) -> Result<Self, CliError> {
        for (key, _, ln) in &section.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(config_err(path, *ln, format!("unknown key {key:?}")));
            }
            if !repeatable.contains(&key.as_str())
                && section.entries.iter().filter(|(k, _, _)| k == key).count() > 1
            {
                return Err(config_err(path, *ln, format!("key {key:?} repeated")));
            }
        }
        Ok(Entries {
            section,
            path,
            allowed,
            repeatable,
        })
    }

    fn get(&self, key: &str) -> Option<(&str, usize)> {
        debug_assert!(self.allowed.contains(&key) && !self.repeatable.contains(&key));
        self.section
            .entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, ln)| (v.as_str(), *ln))
    }

    fn require(&self, key: &str) -> Result<(&str, usize), CliError> {
        self.get(key).ok_or_else(|| {
            config_err(
                self.path,
                self.section.line,
                format!("missing key {key:?}"),
            )
        })
    }

    fn all(&self, key: &'static str) -> impl Iterator<Item = (&str, usize)> + '_ {
        debug_assert!(self.repeatable.contains(&key));
        self.section
            .entries
            .iter()
            .filter(move |(k, _, _)| k == key)
            .map(|(_, v, ln)| (v.as_str(), *ln))
    }
}

fn build_lattice(path: &Path, section: &RawSection) -> Result<Lattice, CliError> {
    let e = Entries::new(path, section, &["kind", "n"], &[])?;
    let (kind, ln) = e.require("kind")?;
    if kind != "chain" {
        if let Some((_, nln)) = e.get("n") {
            return Err(config_err(path, nln, "key \"n\" only applies to chain lattices"));
        }
    }
    match kind {
        "lukasiewicz" => Ok(Lattice::lukasiewicz()),
        "goedel" => Ok(Lattice::goedel()),
        "product" => Ok(Lattice::product()),
        "chain" => {
            let (n, nln) = e.require("n")?;
            let n: u32 = n
                .parse()
                .map_err(|_| config_err(path, nln, format!("bad chain size {n:?}")))?;
            Lattice::chain(n).map_err(|err| config_err(path, nln, err.to_string()))
        }
        other => Err(config_err(
            path,
            ln,
            format!("unknown lattice kind {other:?} (lukasiewicz, goedel, product, chain)"),
        )),
    }
}

fn parse_value(path: &Path, ln: usize, kind: ValueKind, text: &str) -> Result<Value, CliError> {
    match kind {
        ValueKind::Text => Ok(Value::text(text)),
        ValueKind::Number => text
            .parse::<Decimal>()
            .map(Value::Num)
            .map_err(|err| config_err(path, ln, format!("bad number {text:?}: {err}"))),
    }
}

fn build_domain(
    path: &Path,
    lattice: &Lattice,
    section: &RawSection,
) -> Result<DomainWithSimilarity, CliError> {
    let e = Entries::new(
        path,
        section,
        &["kind", "similarity", "k", "pair", "values"],
        &["pair"],
    )?;
    let id = &section.name;
    let (kind, kln) = e.require("kind")?;
    let kind = match kind {
        "text" => ValueKind::Text,
        "number" => ValueKind::Number,
        other => {
            return Err(config_err(
                path,
                kln,
                format!("unknown value kind {other:?} (text, number)"),
            ))
        }
    };
    let (sim, sln) = e.require("similarity")?;
    let mut dom = match sim {
        "identity" => {
            if e.get("k").is_some() || e.all("pair").next().is_some() {
                return Err(config_err(
                    path,
                    sln,
                    "identity similarity takes no `k` or `pair` entries",
                ));
            }
            DomainWithSimilarity::identity(id, kind)
        }
        "ramp" => {
            if kind != ValueKind::Number {
                return Err(config_err(path, sln, "ramp similarity needs kind = number"));
            }
            if e.all("pair").next().is_some() {
                return Err(config_err(path, sln, "ramp similarity takes no `pair` entries"));
            }
            let (k, kln) = e.require("k")?;
            let k: Decimal = k
                .parse()
                .map_err(|err| config_err(path, kln, format!("bad ramp width {k:?}: {err}")))?;
            DomainWithSimilarity::ramp(id, k)
                .map_err(|err| config_err(path, kln, err.to_string()))?
        }
        "table" => {
            if e.get("k").is_some() {
                return Err(config_err(path, sln, "table similarity takes no `k`"));
            }
            let mut table = SimTable::new();
            for (pair, pln) in e.all("pair") {
                let parts: Vec<&str> = pair.split_whitespace().collect();
                let [u, v, degree] = parts[..] else {
                    return Err(config_err(
                        path,
                        pln,
                        format!("expected `pair = VALUE VALUE DEGREE`, got {pair:?}"),
                    ));
                };
                let u = parse_value(path, pln, kind, u)?;
                let v = parse_value(path, pln, kind, v)?;
                let degree: Decimal = degree.parse().map_err(|err| {
                    config_err(path, pln, format!("bad degree {degree:?}: {err}"))
                })?;
                let degree = lattice
                    .degree_from_decimal(&degree)
                    .map_err(|err| config_err(path, pln, err.to_string()))?;
                table
                    .insert(id, lattice, u, v, degree)
                    .map_err(|err| config_err(path, pln, err.to_string()))?;
            }
            DomainWithSimilarity::table(id, kind, table)
        }
        other => {
            return Err(config_err(
                path,
                sln,
                format!("unknown similarity {other:?} (identity, table, ramp)"),
            ))
        }
    };
    if let Some((values, vln)) = e.get("values") {
        let parsed: Result<Vec<Value>, CliError> = values
            .split_whitespace()
            .map(|w| parse_value(path, vln, kind, w))
            .collect();
        dom = dom.with_values(parsed?);
    }
    Ok(dom)
}

/// Parses a configuration file into a catalog: lattice, validated
/// domains, attribute bindings, and every `[table]` section loaded from
/// its CSV file.
pub fn load_config(path: &Path) -> Result<Catalog, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| config_err(path, 0, format!("cannot read: {err}")))?;
    let sections = parse_sections(path, &text)?;

    let mut lattice: Option<Lattice> = None;
    for s in sections.iter().filter(|s| s.kind == SectionKind::Lattice) {
        if lattice.is_some() {
            return Err(config_err(path, s.line, "second [lattice] section"));
        }
        lattice = Some(build_lattice(path, s)?);
    }
    let lattice = lattice.ok_or_else(|| config_err(path, 0, "missing [lattice] section"))?;

    let mut domains = Domains::new();
    for s in sections.iter().filter(|s| s.kind == SectionKind::Domain) {
        let dom = build_domain(path, &lattice, s)?;
        domains
            .add_domain(dom)
            .map_err(|err| config_err(path, s.line, err.to_string()))?;
    }
    for s in sections.iter().filter(|s| s.kind == SectionKind::Attribute) {
        let e = Entries::new(path, s, &["domain"], &[])?;
        let (dom, ln) = e.require("domain")?;
        let attr = AttrName::new(&s.name).map_err(|err| config_err(path, s.line, err.to_string()))?;
        domains
            .bind(attr, dom)
            .map_err(|err| config_err(path, ln, err.to_string()))?;
    }
    for report in domains.validate_all(&lattice) {
        if !report.is_valid() {
            return Err(config_err(
                path,
                0,
                format!(
                    "domain {} is not a similarity: {}",
                    report.domain,
                    report.problems.join("; ")
                ),
            ));
        }
    }

    let mut catalog = Catalog {
        lattice,
        domains,
        tables: BTreeMap::new(),
    };
    let dir = path.parent().unwrap_or(Path::new("."));
    for s in sections.iter().filter(|s| s.kind == SectionKind::Table) {
        let e = Entries::new(path, s, &["file"], &[])?;
        let (file, _) = e.require("file")?;
        let csv_path = dir.join(file);
        load_table(&mut catalog, &s.name, &csv_path)?;
    }
    Ok(catalog)
}

/// Degree literal: a decimal, or an exact `k/n` fraction on a chain
/// carrier. Used for rank cells and assumption values.
pub(super) fn parse_degree(lattice: &Lattice, text: &str) -> Result<Degree, String> {
    if let Some((k, n)) = text.split_once('/') {
        let (k, n): (u32, u32) = match (k.trim().parse(), n.trim().parse()) {
            (Ok(k), Ok(n)) => (k, n),
            _ => return Err(format!("bad rank fraction {text:?}")),
        };
        let LatticeKind::Chain(size) = lattice.kind() else {
            return Err(format!(
                "rank fraction {text:?} needs a chain carrier, not {}",
                lattice.kind()
            ));
        };
        if n != size {
            return Err(format!(
                "rank fraction {text:?} does not match the {size}-step chain"
            ));
        }
        return lattice.chain_degree(k).map_err(|err| err.to_string());
    }
    let d: Decimal = text
        .parse()
        .map_err(|err| format!("bad rank {text:?}: {err}"))?;
    lattice.degree_from_decimal(&d).map_err(|err| err.to_string())
}

/// Loads a ranked CSV file into the catalog under `name`. The first
/// header cell must be `rank`; every other header must be a bound
/// attribute. The table gets default rank 0.
pub fn load_table(catalog: &mut Catalog, name: &str, path: &Path) -> Result<(), CliError> {
    if catalog.tables.contains_key(name) {
        return Err(table_err(path, 0, format!("table {name:?} already loaded")));
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|err| table_err(path, 0, format!("cannot read: {err}")))?;
    let headers = reader
        .headers()
        .map_err(|err| table_err(path, 1, err.to_string()))?
        .clone();
    let mut cells = headers.iter();
    if cells.next() != Some("rank") {
        return Err(table_err(path, 1, "first header cell must be `rank`"));
    }
    let mut attrs: Vec<AttrName> = Vec::new();
    for h in cells {
        let a = AttrName::new(h).map_err(|err| table_err(path, 1, err.to_string()))?;
        catalog
            .domains
            .domain_of(&a)
            .map_err(|err| table_err(path, 1, err.to_string()))?;
        attrs.push(a);
    }
    let scheme = RelationScheme::new(attrs.iter().cloned());
    if scheme.len() != attrs.len() {
        return Err(table_err(path, 1, "duplicate attribute header"));
    }

    let mut rows: Vec<(Tuple, Degree)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|err| table_err(path, 0, err.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut cells = record.iter();
        let rank_cell = cells
            .next()
            .ok_or_else(|| table_err(path, line, "empty record"))?;
        let rank =
            parse_degree(&catalog.lattice, rank_cell).map_err(|m| table_err(path, line, m))?;
        let mut pairs: Vec<(AttrName, Value)> = Vec::new();
        for (a, cell) in attrs.iter().zip(cells) {
            let dom = catalog
                .domains
                .domain_of(a)
                .map_err(|err| table_err(path, line, err.to_string()))?;
            let v = match dom.value_kind {
                ValueKind::Text => Value::text(cell),
                ValueKind::Number => cell
                    .parse::<Decimal>()
                    .map(Value::Num)
                    .map_err(|err| {
                        table_err(path, line, format!("bad number {cell:?}: {err}"))
                    })?,
            };
            if let Some(universe) = &dom.values {
                if !universe.contains(&v) {
                    return Err(table_err(
                        path,
                        line,
                        format!("value {cell:?} is not in domain {}", dom.id),
                    ));
                }
            }
            pairs.push((a.clone(), v));
        }
        rows.push((Tuple::new(pairs), rank));
    }
    let table = RankedDataTable::new(catalog.lattice, scheme, rows, catalog.lattice.bot())
        .map_err(|err| table_err(path, 0, err.to_string()))?;
    catalog.tables.insert(name.to_string(), table);
    Ok(())
}

/// The table as ranked CSV, rows in display order. Loading the output
/// back yields a structurally equal table.
pub fn export_csv(t: &RankedDataTable) -> String {
    let attrs: Vec<&AttrName> = t.scheme().attrs().collect();
    let mut out = String::new();
    let quote = |cell: &str| {
        if cell.contains([',', '"', '\n']) {
            format!("\"{}\"", cell.replace('"', "\"\""))
        } else {
            cell.to_string()
        }
    };
    out.push_str("rank");
    for a in &attrs {
        let _ = write!(out, ",{}", quote(&a.to_string()));
    }
    out.push('\n');
    for (tu, r) in sorted_rows(t) {
        let _ = write!(out, "{r}");
        for a in &attrs {
            let _ = write!(
                out,
                ",{}",
                quote(&value_text(tu.get(a).expect("tuple conforms to scheme")))
            );
        }
        out.push('\n');
    }
    out
}

/// Writes the table to a CSV file.
pub fn save_table(t: &RankedDataTable, path: &Path) -> Result<(), CliError> {
    fs::write(path, export_csv(t)).map_err(|err| table_err(path, 0, format!("cannot write: {err}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_files(files: &[(&str, &str)]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (name, content) in files {
            fs::write(dir.path().join(name), content).unwrap();
        }
        dir
    }

    fn load(files: &[(&str, &str)]) -> Result<Catalog, CliError> {
        let dir = write_files(files);
        load_config(&dir.path().join("c.cfg"))
    }

    const BASE_CFG: &str = "\
# example catalog
[lattice]
kind = lukasiewicz

[domain city]
kind = text
similarity = table
pair = Vestal Endicott 0.7
values = Vestal Endicott Binghamton

[domain money]
kind = number
similarity = ramp
k = 500000

[attribute CITY]
domain = city

[attribute PRICE]
domain = money

[table t]
file = t.csv
";

    const BASE_CSV: &str = "rank,CITY,PRICE\n0.9,Vestal,228500\n0.3,Endicott,345000\n";

    #[test]
    fn loads_a_catalog() {
        let cat = load(&[("c.cfg", BASE_CFG), ("t.csv", BASE_CSV)]).unwrap();
        let t = cat.table("t").unwrap();
        assert_eq!(t.support_size(), 2);
        assert_eq!(t.lattice(), Lattice::lukasiewicz());
        assert_eq!(t.default_rank(), t.lattice().bot());
        assert!(cat.table("missing").is_err());
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let cases: &[(&str, usize, &str)] = &[
            ("[lattice]\nkind = godel\n", 2, "unknown lattice kind"),
            ("[lattice]\nkind = chain\n", 1, "missing key \"n\""),
            ("[lattice]\nkind = lukasiewicz\nn = 4\n", 3, "only applies to chain"),
            ("[lattice]\nkind = lukasiewicz\nkind = goedel\n", 2, "repeated"),
            ("[lattice extra]\nkind = goedel\n", 1, "takes no name"),
            ("[domain]\nkind = text\n", 1, "needs a name"),
            ("kind = text\n", 1, "before the first section"),
            ("[lattice\n", 1, "unterminated"),
            ("[widget w]\n", 1, "unknown section kind"),
            (
                "[lattice]\nkind = lukasiewicz\n[domain d]\nkind = text\nsimilarity = table\npair = a b\n",
                6,
                "expected `pair = VALUE VALUE DEGREE`",
            ),
            (
                "[lattice]\nkind = lukasiewicz\n[domain d]\nkind = text\nsimilarity = ramp\nk = 2\n",
                5,
                "needs kind = number",
            ),
        ];
        for (cfg, want_line, want_msg) in cases {
            let err = load(&[("c.cfg", cfg)]).unwrap_err();
            let CliError::Config { line, message, .. } = &err else {
                panic!("expected config error for {cfg:?}, got {err}");
            };
            assert_eq!(line, want_line, "{cfg:?}: {message}");
            assert!(message.contains(want_msg), "{cfg:?}: {message}");
        }
    }

    #[test]
    fn missing_lattice_is_rejected() {
        let err = load(&[("c.cfg", "[domain d]\nkind = text\nsimilarity = identity\n")])
            .unwrap_err();
        assert!(err.to_string().contains("missing [lattice]"));
    }

    #[test]
    fn table_errors_carry_line_numbers() {
        let cases: &[(&str, u64, &str)] = &[
            ("grade,CITY,PRICE\n0.9,Vestal,1\n", 1, "first header cell"),
            ("rank,CITY,TOWN\n", 1, "TOWN"),
            ("rank,CITY,CITY\n", 1, "duplicate attribute header"),
            ("rank,CITY,PRICE\n1.2,Vestal,1\n", 2, "outside"),
            ("rank,CITY,PRICE\nx,Vestal,1\n", 2, "bad rank"),
            ("rank,CITY,PRICE\n0.9,Vestal,abc\n", 2, "bad number"),
            ("rank,CITY,PRICE\n0.9,Oslo,1\n", 2, "not in domain"),
            (
                "rank,CITY,PRICE\n0.9,Vestal,1\n0.8,Vestal,1\n",
                0,
                "duplicate",
            ),
        ];
        for (csv, want_line, want_msg) in cases {
            let err = load(&[("c.cfg", BASE_CFG), ("t.csv", csv)]).unwrap_err();
            let CliError::Table { line, message, .. } = &err else {
                panic!("expected table error for {csv:?}, got {err}");
            };
            assert_eq!(line, want_line, "{csv:?}: {message}");
            assert!(message.contains(want_msg), "{csv:?}: {message}");
        }
    }

    #[test]
    fn chain_ranks_accept_exact_fractions() {
        let cfg = BASE_CFG
            .replace("kind = lukasiewicz", "kind = chain\nn = 4")
            .replace("0.7", "0.75");
        let csv = "rank,CITY,PRICE\n3/4,Vestal,1\n0.5,Endicott,2\n";
        let cat = load(&[("c.cfg", &cfg), ("t.csv", csv)]).unwrap();
        let t = cat.table("t").unwrap();
        let ranks: Vec<String> = sorted_rows(t).iter().map(|(_, r)| r.to_string()).collect();
        assert_eq!(ranks, ["3/4", "2/4"]);

        let bad = "rank,CITY,PRICE\n3/5,Vestal,1\n";
        let err = load(&[("c.cfg", &cfg), ("t.csv", bad)]).unwrap_err();
        assert!(err.to_string().contains("does not match"));

        let real = "rank,CITY,PRICE\n3/4,Vestal,1\n";
        let err = load(&[("c.cfg", BASE_CFG), ("t.csv", real)]).unwrap_err();
        assert!(err.to_string().contains("needs a chain carrier"));
    }

    #[test]
    fn csv_round_trips() {
        let quirky = "rank,CITY,PRICE\n0.9,Vestal,228500\n0.81,Endicott,345000\n";
        let cat = load(&[("c.cfg", BASE_CFG), ("t.csv", quirky)]).unwrap();
        let t = cat.table("t").unwrap();
        let text = export_csv(t);
        let dir = write_files(&[("c.cfg", BASE_CFG), ("t.csv", &text)]);
        let again = load_config(&dir.path().join("c.cfg")).unwrap();
        assert_eq!(again.table("t").unwrap(), t);
    }

    #[test]
    fn export_quotes_awkward_cells() {
        let cfg = "\
[lattice]
kind = goedel

[domain d]
kind = text
similarity = identity

[attribute A]
domain = d
";
        let dir = write_files(&[("c.cfg", cfg)]);
        let mut cat = load_config(&dir.path().join("c.cfg")).unwrap();
        fs::write(dir.path().join("q.csv"), "rank,A\n1,\"a,\"\"b\"\"\"\n").unwrap();
        load_table(&mut cat, "q", &dir.path().join("q.csv")).unwrap();
        let t = cat.table("q").unwrap().clone();
        assert_eq!(export_csv(&t), "rank,A\n1,\"a,\"\"b\"\"\"\n");
        fs::write(dir.path().join("q2.csv"), export_csv(&t)).unwrap();
        load_table(&mut cat, "q2", &dir.path().join("q2.csv")).unwrap();
        assert_eq!(cat.table("q2").unwrap(), &t);
    }
}
