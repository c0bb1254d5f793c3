//! File formats: edge lists and geo tables in, curvature tables and
//! experiment series out.
//!
//! Edge list: one edge per line, two whitespace-separated tokens (node
//! labels) and an optional third token carried through as the edge's
//! `backbone` flag. Blank lines and lines starting with `#` are skipped.
//!
//! Geo table: CSV with a header row and columns `label,lat,lon` in degrees.
//!
//! Outputs are CSV with `#`-prefixed metadata lines before the header, or a
//! JSON object with the same content.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{ExperimentSeries, Histogram, NodeGeo, SeriesKind, SeriesMeta};
use crate::graph::{build_graph, BuildReport, EdgeId, Graph};
use crate::ricci::CurvatureMap;
use crate::transport::Rational;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidParameter(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub lines: usize,
    pub skipped_lines: usize,
    pub edges_read: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl IngestReport {
    fn absorb(&mut self, b: BuildReport) {
        self.edges_read = b.input_pairs;
        self.self_loops_dropped = b.self_loops_dropped;
        self.duplicates_dropped = b.duplicates_dropped;
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub report: IngestReport,
    /// Third-column flag per edge, first occurrence wins. Empty when the
    /// file has no third column.
    pub backbone: BTreeMap<EdgeId, String>,
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let path = path.as_ref();
    read_edge_list(BufReader::new(File::open(path)?), path)
}

/// Parses edge-list text; `origin` only labels error messages.
pub fn read_edge_list(reader: impl BufRead, origin: &Path) -> Result<LoadedGraph> {
    let mut report = IngestReport::default();
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut flags: Vec<Option<String>> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        report.lines += 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            report.skipped_lines += 1;
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if !(2..=3).contains(&tokens.len()) {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                msg: format!("expected 2 or 3 fields, found {}", tokens.len()),
            });
        }
        pairs.push((tokens[0].to_string(), tokens[1].to_string()));
        flags.push(tokens.get(2).map(|s| s.to_string()));
    }
    let (graph, built) = build_graph(&pairs)?;
    report.absorb(built);

    let mut backbone = BTreeMap::new();
    if flags.iter().any(Option::is_some) {
        let index = graph.label_index();
        for ((a, b), flag) in pairs.iter().zip(flags) {
            let (ia, ib) = (index[a], index[b]);
            if ia != ib {
                backbone
                    .entry(EdgeId::new(ia, ib))
                    .or_insert_with(|| flag.unwrap_or_default());
            }
        }
    }
    Ok(LoadedGraph {
        graph,
        report,
        backbone,
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeoTable {
    pub entries: Vec<NodeGeo>,
}

impl GeoTable {
    /// Coordinates by node id, plus the labels that name no node of `g`.
    pub fn resolve(&self, g: &Graph) -> (HashMap<usize, NodeGeo>, Vec<String>) {
        let index = g.label_index();
        let mut found = HashMap::new();
        let mut unmatched = Vec::new();
        for e in &self.entries {
            match index.get(&e.label) {
                Some(&v) => {
                    found.insert(v, e.clone());
                }
                None => unmatched.push(e.label.clone()),
            }
        }
        (found, unmatched)
    }
}

pub fn load_geo(path: impl AsRef<Path>) -> Result<GeoTable> {
    let path = path.as_ref();
    read_geo(File::open(path)?, path)
}

pub fn read_geo(reader: impl Read, origin: &Path) -> Result<GeoTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut entries = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != 3 {
            return Err(parse_err(
                line,
                format!("expected label,lat,lon, found {} fields", rec.len()),
            ));
        }
        let num = |i: usize, what: &str| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_err(line, format!("bad {what} {:?}", &rec[i])))
        };
        let geo = NodeGeo::new(&rec[0], num(1, "latitude")?, num(2, "longitude")?)
            .map_err(|e| parse_err(line, e.to_string()))?;
        entries.push(geo);
    }
    Ok(GeoTable { entries })
}

/// Exact decimal with 9 fractional digits, rounded half away from zero.
/// Zero is never signed.
pub fn format_kappa(k: &Rational) -> String {
    let (p, q) = (i128::from(*k.numer()), i128::from(*k.denom()));
    let scaled = p.abs() * 1_000_000_000;
    let mut units = scaled / q;
    if 2 * (scaled % q) >= q {
        units += 1;
    }
    let sign = if p < 0 && units != 0 { "-" } else { "" };
    format!("{sign}{}.{:09}", units / 1_000_000_000, units % 1_000_000_000)
}

/// Key/value lines written before the CSV header or under `"meta"` in JSON.
fn meta_lines(meta: &SeriesMeta, extra: &[(String, String)]) -> Vec<(String, String)> {
    let mut out = vec![
        ("version".to_string(), TOOL_VERSION.to_string()),
        ("fingerprint".to_string(), meta.fingerprint.clone()),
        ("nodes".to_string(), meta.nodes.to_string()),
        ("edges".to_string(), meta.edges.to_string()),
    ];
    if let Some(a) = meta.alpha {
        out.push(("alpha".into(), a.to_string()));
    }
    if let Some(s) = meta.seed {
        out.push(("seed".into(), s.to_string()));
    }
    if let Some(d) = &meta.direction {
        out.push(("direction".into(), d.clone()));
    }
    if let Some(s) = &meta.strategy {
        out.push(("strategy".into(), s.clone()));
    }
    for (k, v) in &meta.notes {
        out.push((k.clone(), v.clone()));
    }
    out.extend(extra.iter().cloned());
    out
}

/// A rectangular table of already-formatted cells.
struct Table {
    kind: &'static str,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    meta: Vec<(String, String)>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    kind: &'a str,
    meta: BTreeMap<&'a str, &'a str>,
    columns: &'a [String],
    rows: &'a [Vec<String>],
}

impl Table {
    fn write(&self, format: OutputFormat, out: impl Write) -> Result<()> {
        let mut out = BufWriter::new(out);
        match format {
            OutputFormat::Csv => {
                writeln!(out, "# kind: {}", self.kind)?;
                for (k, v) in &self.meta {
                    writeln!(out, "# {k}: {v}")?;
                }
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(&mut out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            OutputFormat::Json => {
                let t = JsonTable {
                    kind: self.kind,
                    meta: self.meta.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect(),
                    columns: &self.columns,
                    rows: &self.rows,
                };
                serde_json::to_writer_pretty(&mut out, &t)?;
                writeln!(out)?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(File::create(path)?)
}

/// Curvature table `src,dst,kappa[,backbone]` in canonical edge order with
/// node labels. The backbone column appears when `backbone` is non-empty.
pub fn write_curvatures(
    g: &Graph,
    cmap: &CurvatureMap,
    backbone: &BTreeMap<EdgeId, String>,
    extra: &[(String, String)],
    format: OutputFormat,
    out: impl Write,
) -> Result<()> {
    let mut columns: Vec<String> = ["src", "dst", "kappa"].iter().map(|s| s.to_string()).collect();
    if !backbone.is_empty() {
        columns.push("backbone".into());
    }
    let rows = cmap
        .iter()
        .map(|(e, k)| {
            let mut row = vec![g.label(e.u), g.label(e.v), format_kappa(&k)];
            if !backbone.is_empty() {
                row.push(backbone.get(&e).cloned().unwrap_or_default());
            }
            row
        })
        .collect();
    let mut meta = SeriesMeta::for_graph(g);
    meta.alpha = Some(cmap.alpha());
    Table {
        kind: "curvature",
        columns,
        rows,
        meta: meta_lines(&meta, extra),
    }
    .write(format, out)
}

pub fn write_curvatures_to(
    path: impl AsRef<Path>,
    g: &Graph,
    cmap: &CurvatureMap,
    backbone: &BTreeMap<EdgeId, String>,
    extra: &[(String, String)],
    format: OutputFormat,
) -> Result<()> {
    write_curvatures(g, cmap, backbone, extra, format, create(path.as_ref())?)
}

/// Reads the rows of a CSV curvature table back as `(src, dst, kappa)` strings.
pub fn read_curvatures(path: impl AsRef<Path>) -> Result<Vec<(String, String, String)>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        out.push((rec[0].to_string(), rec[1].to_string(), rec[2].to_string()));
    }
    Ok(out)
}

fn num(x: f64) -> String {
    format!("{x}")
}

/// Series table. Sweeps get a count column and a fraction column; scatter
/// kinds use the series' own axis names.
pub fn write_series(
    series: &ExperimentSeries,
    extra: &[(String, String)],
    format: OutputFormat,
    out: impl Write,
) -> Result<()> {
    let m = series.meta.edges as f64;
    let (mut columns, mut rows): (Vec<String>, Vec<Vec<String>>) = match series.kind {
        SeriesKind::Connectivity => (
            vec!["edges_added".into(), "fraction_added".into(), series.y_name.clone()],
            series
                .points()
                .map(|(x, y)| vec![num(x), num(if m > 0.0 { x / m } else { 0.0 }), num(y)])
                .collect(),
        ),
        SeriesKind::Robustness => (
            vec!["edges_removed".into(), "fraction_removed".into(), series.y_name.clone()],
            series
                .points()
                .map(|(x, y)| vec![num((x * m).round()), num(x), num(y)])
                .collect(),
        ),
        _ => (
            vec![series.x_name.clone(), series.y_name.clone()],
            series.points().map(|(x, y)| vec![num(x), num(y)]).collect(),
        ),
    };
    for (name, values) in &series.extra {
        columns.push(name.clone());
        for (row, v) in rows.iter_mut().zip(values) {
            row.push(num(*v));
        }
    }
    Table {
        kind: series.kind.name(),
        columns,
        rows,
        meta: meta_lines(&series.meta, extra),
    }
    .write(format, out)
}

pub fn write_histogram(
    h: &Histogram,
    meta: &SeriesMeta,
    extra: &[(String, String)],
    format: OutputFormat,
    out: impl Write,
) -> Result<()> {
    let rows = h
        .counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (lo, hi) = h.bin_range(i);
            vec![num(lo), num(hi), c.to_string()]
        })
        .collect();
    Table {
        kind: "histogram",
        columns: vec!["bin_lo".into(), "bin_hi".into(), "count".into()],
        rows,
        meta: meta_lines(meta, extra),
    }
    .write(format, out)
}

/// Writes to `dir/name.ext`, creating `dir`, and returns the path.
pub fn output_path(dir: &Path, name: &str, format: OutputFormat) -> Result<(PathBuf, File)> {
    let path = dir.join(format!("{name}.{}", format.extension()));
    let f = create(&path)?;
    Ok((path, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{connectivity_sweep, curvature_histogram, Direction};
    use crate::graph::fixtures::*;
    use crate::ricci::{all_edge_curvatures, AlphaParam};
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<LoadedGraph> {
        read_edge_list(text.as_bytes(), Path::new("mem"))
    }

    fn csv_of(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn edge_list_basics() {
        let l = parse("# c\na b\nb\tc\n\n").unwrap();
        assert_eq!((l.graph.node_count(), l.graph.edge_count()), (3, 2));
        assert_eq!(l.graph.labels().unwrap(), &["a", "b", "c"]);
        assert_eq!(l.report.skipped_lines, 2);
        assert!(l.backbone.is_empty());

        let l = parse("a a\na b\nb a\n").unwrap();
        assert_eq!(l.report.self_loops_dropped, 1);
        assert_eq!(l.report.duplicates_dropped, 1);
        assert_eq!(l.graph.edge_count(), 1);
    }

    #[test]
    fn edge_list_errors() {
        match parse("a b\nc\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("# only\n"), Err(Error::NoEdges)));
        assert!(matches!(parse("x x\n"), Err(Error::NoEdges)));
    }

    #[test]
    fn backbone_passthrough() {
        let l = parse("a b 1\nb c\nc a 0\n").unwrap();
        let g = &l.graph;
        let c = all_edge_curvatures(g, AlphaParam::default()).unwrap();
        let text = csv_of(|w| write_curvatures(g, &c, &l.backbone, &[], OutputFormat::Csv, w));
        let body: Vec<&str> = text.lines().filter(|s| !s.starts_with('#')).collect();
        assert_eq!(
            body,
            [
                "src,dst,kappa,backbone",
                "a,b,0.750000000,1",
                "a,c,0.750000000,0",
                "b,c,0.750000000,"
            ]
        );
    }

    #[test]
    fn geo_table() {
        let t = read_geo("id,lat,lon\nr1,40.7,-74.0\nzz,0,0\n".as_bytes(), Path::new("g")).unwrap();
        assert_eq!(t.entries.len(), 2);
        let l = parse("r1 r2\n").unwrap();
        let (found, unmatched) = t.resolve(&l.graph);
        assert_eq!(found[&0].lat, 40.7);
        assert_eq!(unmatched, ["zz"]);
        match read_geo("id,lat,lon\nr1,1,2\nr2,100,0\n".as_bytes(), Path::new("g")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(read_geo("id,lat,lon\nr1,x,0\n".as_bytes(), Path::new("g")).is_err());
        assert!(read_geo("id,lat,lon\nr1,1\n".as_bytes(), Path::new("g")).is_err());
    }

    #[test]
    fn kappa_formatting() {
        let f = |p, q| format_kappa(&Rational::new(p, q));
        assert_eq!(f(1, 1), "1.000000000");
        assert_eq!(f(3, 4), "0.750000000");
        assert_eq!(f(1, 3), "0.333333333");
        assert_eq!(f(2, 3), "0.666666667");
        assert_eq!(f(-2, 3), "-0.666666667");
        assert_eq!(f(-1, 3_000_000_000), "0.000000000");
        assert_eq!(f(1, 2_000_000_000), "0.000000001");
        assert_eq!(f(-1, 2_000_000_000), "-0.000000001");
        assert_eq!(f(-2, 1), "-2.000000000");
        assert_eq!(f(0, 1), "0.000000000");
    }

    #[test]
    fn small_curvature_files() {
        let g = path(2);
        let c = all_edge_curvatures(&g, AlphaParam::default()).unwrap();
        let text = csv_of(|w| write_curvatures(&g, &c, &BTreeMap::new(), &[], OutputFormat::Csv, w));
        assert!(text.ends_with("src,dst,kappa\n0,1,1.000000000\n"), "{text}");
        assert!(text.contains("# alpha: 0.5\n"));

        let dir = tempfile::tempdir().unwrap();
        let g = grid(3, 3);
        let c = all_edge_curvatures(&g, AlphaParam::default()).unwrap();
        let p = dir.path().join("sub/k.csv");
        write_curvatures_to(&p, &g, &c, &BTreeMap::new(), &[], OutputFormat::Csv).unwrap();
        let rows = read_curvatures(&p).unwrap();
        let expected: Vec<(String, String, String)> = c
            .iter()
            .map(|(e, k)| (e.u.to_string(), e.v.to_string(), format_kappa(&k)))
            .collect();
        assert_eq!(rows, expected);
    }

    #[test]
    fn series_schemas() {
        let g = star(3);
        let c = all_edge_curvatures(&g, AlphaParam::default()).unwrap();
        let s = connectivity_sweep(&g, &c, Direction::Increasing).unwrap();
        let text = csv_of(|w| write_series(&s, &[("input".into(), "star".into())], OutputFormat::Csv, w));
        assert!(text.starts_with("# kind: connectivity\n# version: "));
        assert!(text.contains("# direction: increasing\n# input: star\n"));
        assert!(
            text.ends_with(
                "edges_added,fraction_added,components,active_components\n0,0,4,0\n1,0.3333333333333333,3,1\n2,0.6666666666666666,2,1\n3,1,1,1\n"
            ),
            "{text}"
        );

        let json = csv_of(|w| write_series(&s, &[], OutputFormat::Json, w));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["columns"][3], "active_components");
        assert_eq!(v["rows"].as_array().unwrap().len(), 4);
        assert_eq!(v["meta"]["fingerprint"], s.meta.fingerprint);

        let h = curvature_histogram(&c, 0.5).unwrap();
        let text = csv_of(|w| write_histogram(&h, &s.meta, &[], OutputFormat::Csv, w));
        assert!(text.contains("bin_lo,bin_hi,count\n-2,-1.5,0\n"));
    }

    proptest! {
        #[test]
        fn kappa_rounding_matches_exact(p in -2_000_000i64..1_000_000, q in 1i64..1_000_000) {
            let r = Rational::new(p, q);
            let s = format_kappa(&r);
            let (neg, body) = match s.strip_prefix('-') { Some(b) => (true, b), None => (false, s.as_str()) };
            let (i, f) = body.split_once('.').unwrap();
            prop_assert_eq!(f.len(), 9);
            let mut units = Rational::new(i.parse::<i64>().unwrap() * 1_000_000_000 + f.parse::<i64>().unwrap(), 1_000_000_000);
            if neg { units = -units; }
            let err = num_traits::Signed::abs(&(units - r));
            prop_assert!(err <= Rational::new(1, 2_000_000_000));
            prop_assert!(!(neg && units == Rational::from_integer(0)));
        }
    }
}
