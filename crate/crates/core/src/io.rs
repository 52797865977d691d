//! Context serialization: Burmeister `.cxt` and a CSV alternative.
//!
//! The `.cxt` layout is fixed byte-for-byte so files round-trip exactly:
//! `B`, blank line, object count, attribute count, blank line, object names,
//! attribute names, then one `X`/`.` row per object, `\n` line endings.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextFormat {
    Cxt,
    Csv,
}

impl FromStr for ContextFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cxt" | "burmeister-cxt" => Ok(ContextFormat::Cxt),
            "csv" => Ok(ContextFormat::Csv),
            other => Err(Error::input(format!("unknown context format {other:?}"))),
        }
    }
}

impl ContextFormat {
    /// Picks a format from a file extension, defaulting to `.cxt`.
    pub fn from_path(path: &Path) -> ContextFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => ContextFormat::Csv,
            _ => ContextFormat::Cxt,
        }
    }
}

pub fn read_context(path: &Path, format: ContextFormat) -> Result<FormalContext> {
    let text = std::fs::read_to_string(path)?;
    match format {
        ContextFormat::Cxt => parse_cxt(&text),
        ContextFormat::Csv => parse_csv(&text),
    }
}

pub fn write_context(ctx: &FormalContext, path: &Path, format: ContextFormat) -> Result<()> {
    let text = match format {
        ContextFormat::Cxt => format_cxt(ctx),
        ContextFormat::Csv => format_csv(ctx)?,
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn format_cxt(ctx: &FormalContext) -> String {
    let mut out = String::new();
    out.push_str("B\n\n");
    let _ = writeln!(out, "{}", ctx.num_objects());
    let _ = writeln!(out, "{}", ctx.num_attributes());
    out.push('\n');
    for g in ctx.objects() {
        out.push_str(g);
        out.push('\n');
    }
    for m in ctx.attributes() {
        out.push_str(m);
        out.push('\n');
    }
    for g in 0..ctx.num_objects() {
        for m in 0..ctx.num_attributes() {
            out.push(if ctx.incidence(g, m) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

pub fn parse_cxt(text: &str) -> Result<FormalContext> {
    let lines: Vec<&str> = text.lines().collect();
    let line = |i: usize| -> Result<&str> {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| Error::parse(lines.len() + 1, "unexpected end of file"))
    };

    if line(0)? != "B" {
        return Err(Error::parse(1, "expected header line \"B\""));
    }
    if line(1)? != "" {
        return Err(Error::parse(2, "expected blank line after header"));
    }
    let num_objects: usize = line(2)?
        .trim()
        .parse()
        .map_err(|_| Error::parse(3, format!("invalid object count {:?}", lines[2])))?;
    let num_attributes: usize = line(3)?
        .trim()
        .parse()
        .map_err(|_| Error::parse(4, format!("invalid attribute count {:?}", lines[3])))?;
    if line(4)? != "" {
        return Err(Error::parse(5, "expected blank line after counts"));
    }

    let mut cursor = 5;
    let mut objects = Vec::with_capacity(num_objects);
    for _ in 0..num_objects {
        objects.push(line(cursor)?.to_string());
        cursor += 1;
    }
    let mut attributes = Vec::with_capacity(num_attributes);
    for _ in 0..num_attributes {
        attributes.push(line(cursor)?.to_string());
        cursor += 1;
    }

    let mut rows = Vec::with_capacity(num_objects);
    for _ in 0..num_objects {
        let row_line = line(cursor)?;
        if row_line.len() != num_attributes {
            return Err(Error::parse(
                cursor + 1,
                format!("row has {} cells, expected {num_attributes}", row_line.len()),
            ));
        }
        let mut row = BitSet::empty(num_attributes);
        for (j, c) in row_line.chars().enumerate() {
            match c {
                'X' => row.insert(j),
                '.' => {}
                other => {
                    return Err(Error::parse(cursor + 1, format!("invalid cell character {other:?}")))
                }
            }
        }
        rows.push(row);
        cursor += 1;
    }

    if cursor < lines.len() {
        return Err(Error::parse(cursor + 1, "unexpected trailing content"));
    }

    FormalContext::new(objects, attributes, rows).map_err(|e| match e {
        Error::Input(msg) => Error::parse(1, msg),
        other => other,
    })
}

pub fn format_csv(ctx: &FormalContext) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(ctx.attributes().iter().cloned());
    writer
        .write_record(&header)
        .map_err(|e| Error::input(format!("csv write failed: {e}")))?;
    for g in 0..ctx.num_objects() {
        let mut record = vec![ctx.objects()[g].clone()];
        for m in 0..ctx.num_attributes() {
            record.push(if ctx.incidence(g, m) { "1".into() } else { "0".into() });
        }
        writer
            .write_record(&record)
            .map_err(|e| Error::input(format!("csv write failed: {e}")))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::input(format!("csv write failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::input(format!("csv produced invalid utf-8: {e}")))
}

pub fn parse_csv(text: &str) -> Result<FormalContext> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| csv_error(&e))?,
        None => return Err(Error::parse(1, "empty csv input")),
    };
    if header.get(0) != Some("") {
        return Err(Error::parse(1, "first header cell must be empty"));
    }
    let attributes: Vec<String> = header.iter().skip(1).map(|s| s.to_string()).collect();

    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for record in records {
        let record = record.map_err(|e| csv_error(&e))?;
        let lineno = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != attributes.len() + 1 {
            return Err(Error::parse(
                lineno,
                format!("row has {} cells, expected {}", record.len(), attributes.len() + 1),
            ));
        }
        objects.push(record.get(0).unwrap_or("").to_string());
        let mut row = BitSet::empty(attributes.len());
        for (j, cell) in record.iter().skip(1).enumerate() {
            match cell {
                "1" => row.insert(j),
                "0" => {}
                other => {
                    return Err(Error::parse(lineno, format!("invalid cell value {other:?}")))
                }
            }
        }
        rows.push(row);
    }

    FormalContext::new(objects, attributes, rows).map_err(|e| match e {
        Error::Input(msg) => Error::parse(1, msg),
        other => other,
    })
}

fn csv_error(e: &csv::Error) -> Error {
    let line = match e.position() {
        Some(p) => p.line() as usize,
        None => 0,
    };
    Error::parse(line, format!("csv error: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::small_context;
    use proptest::prelude::*;

    const SMALL_CXT: &str = "B\n\n4\n4\n\nW\nX\nY\nZ\nA\nB\nC\nD\n.X.X\n.XX.\nXX..\n...X\n";

    #[test]
    fn cxt_writes_exact_layout() {
        assert_eq!(format_cxt(&small_context()), SMALL_CXT);
    }

    #[test]
    fn cxt_parses_back() {
        let ctx = parse_cxt(SMALL_CXT).unwrap();
        assert_eq!(ctx, small_context());
        assert_eq!(ctx.true_cell_count(), 7);
    }

    #[test]
    fn cxt_empty_context() {
        let empty = FormalContext::empty();
        let text = format_cxt(&empty);
        assert_eq!(text, "B\n\n0\n0\n\n");
        assert_eq!(parse_cxt(&text).unwrap(), empty);
    }

    #[test]
    fn cxt_parse_errors_carry_line_numbers() {
        let err = parse_cxt("Q\n\n1\n1\n\ng\nm\nX\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse_cxt("B\n\n1\n1\n\ng\nm\nXX\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 8, .. }), "{err}");
        let err = parse_cxt("B\n\n1\n1\n\ng\nm\n?\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 8, .. }), "{err}");
        let err = parse_cxt("B\n\n2\n1\n\ng\nm\nX\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn csv_round_trip() {
        let ctx = small_context();
        let text = format_csv(&ctx).unwrap();
        assert!(text.starts_with(",A,B,C,D\n"));
        assert_eq!(parse_csv(&text).unwrap(), ctx);
    }

    #[test]
    fn csv_rejects_bad_cells() {
        let err = parse_csv(",A\ng,2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_csv("x,A\ng,1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    fn arb_context() -> impl Strategy<Value = FormalContext> {
        (0usize..6, 0usize..6).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), n).prop_map(
                move |rows| {
                    let objects = (0..n).map(|i| format!("g{i}")).collect();
                    let attributes = (0..m).map(|j| format!("m{j}")).collect();
                    FormalContext::from_bool_rows(objects, attributes, rows).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn cxt_round_trips(ctx in arb_context()) {
            let text = format_cxt(&ctx);
            prop_assert_eq!(parse_cxt(&text).unwrap(), ctx);
        }

        #[test]
        fn csv_round_trips(ctx in arb_context()) {
            let text = format_csv(&ctx).unwrap();
            prop_assert_eq!(parse_csv(&text).unwrap(), ctx);
        }
    }
}
