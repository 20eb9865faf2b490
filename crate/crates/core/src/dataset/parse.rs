//! Raw comma-separated KDD99 record format.
//!
//! One record per line: 41 attribute fields then the class label, which may
//! end in a single `.` (KDD99 files). NSL-KDD files append a 43rd integer
//! field, the difficulty level, which is accepted and dropped.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use super::{AttributeKind, AttributeSchema, Dataset, Instance};
use crate::{Error, Result};

fn parse_error(line: usize, field: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        field,
        message: message.into(),
    }
}

/// Parses one record against `schema`, growing nominal domains and class
/// labels with any new symbols. `line_no` is only used in error messages.
pub fn parse_kdd_line(line: &str, line_no: usize, schema: &mut AttributeSchema) -> Result<Instance> {
    let line = line.trim_end_matches(['\r', '\n']);
    let n_attr = schema.len();
    let expected = n_attr + 1;
    let mut fields: Vec<&str> = line.split(',').collect();

    if fields.len() == expected + 1 {
        let last = fields[expected].trim();
        if last.parse::<u32>().is_err() {
            return Err(parse_error(line_no, expected + 1, format!("expected {expected} fields, found {}", fields.len())));
        }
        fields.pop();
    }
    if fields.len() != expected {
        return Err(parse_error(
            line_no,
            fields.len().min(expected),
            format!("expected {expected} fields, found {}", fields.len()),
        ));
    }

    let mut values = Vec::with_capacity(n_attr);
    for (i, raw) in fields[..n_attr].iter().enumerate() {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(parse_error(line_no, i + 1, "empty field"));
        }
        let v = match schema.attribute(i).kind {
            AttributeKind::Numeric => {
                let x: f64 = raw
                    .parse()
                    .map_err(|_| parse_error(line_no, i + 1, format!("unparsable number {raw:?}")))?;
                if !x.is_finite() {
                    return Err(parse_error(line_no, i + 1, format!("non-finite number {raw:?}")));
                }
                x
            }
            AttributeKind::Nominal(_) => schema.intern_symbol(i, raw) as f64,
        };
        values.push(v);
    }

    let raw_label = fields[n_attr].trim();
    let label = raw_label.strip_suffix('.').unwrap_or(raw_label);
    if label.is_empty() {
        return Err(parse_error(line_no, expected, "empty label"));
    }
    let label = schema.intern_label(label);
    Ok(Instance::new(values, label))
}

/// Parses every non-blank line from `reader`. `source` names the input in
/// provenance and errors.
pub fn read_kdd_records<R: BufRead>(reader: R, mut schema: AttributeSchema, source: &Path) -> Result<Dataset> {
    let mut instances = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        instances.push(parse_kdd_line(&line, i + 1, &mut schema)?);
    }
    if instances.is_empty() {
        return Err(Error::Empty { path: source.to_path_buf() });
    }
    for (i, a) in schema.attributes().iter().enumerate() {
        if a.domain().is_some_and(<[String]>::is_empty) {
            return Err(Error::SchemaMismatch(format!("nominal attribute {i} ({}) has an empty domain", a.name)));
        }
    }
    let provenance = vec![format!("source: {}", source.display())];
    Ok(Dataset::from_parts(schema, instances, provenance))
}

/// Loads a record file; paths ending in `.gz` are decompressed on the fly.
pub fn load_dataset(path: impl AsRef<Path>, schema: AttributeSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader: Box<dyn Read> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    read_kdd_records(BufReader::with_capacity(1 << 20, reader), schema, path)
}

/// Writes `ds` in the record format (no trailing dot on labels), one line
/// per instance.
pub fn write_kdd_records<W: Write>(ds: &Dataset, mut out: W) -> std::io::Result<()> {
    let schema = ds.schema();
    let mut line = String::new();
    for inst in ds.instances() {
        line.clear();
        for i in 0..schema.len() {
            use std::fmt::Write as _;
            let _ = write!(line, "{},", inst.value(schema, i));
        }
        line.push_str(&schema.class_labels()[inst.label]);
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{kdd99_schema, Value};

    // First record of the KDD99 10% training file.
    const FIRST_ROW: &str = "0,tcp,http,SF,181,5450,0,0,0,0,0,1,0,0,0,0,0,0,0,0,0,0,8,8,0.00,0.00,0.00,0.00,1.00,0.00,0.00,9,9,1.00,0.00,0.11,0.00,0.00,0.00,0.00,0.00,normal.";

    #[test]
    fn parses_official_first_row() {
        let mut schema = kdd99_schema();
        let inst = parse_kdd_line(FIRST_ROW, 1, &mut schema).unwrap();
        assert_eq!(inst.values.len(), 41);
        assert_eq!(inst.value(&schema, 0), Value::Numeric(0.0));
        assert_eq!(inst.value(&schema, 1), Value::Nominal("tcp"));
        assert_eq!(inst.value(&schema, 2), Value::Nominal("http"));
        assert_eq!(inst.value(&schema, 3), Value::Nominal("SF"));
        assert_eq!(inst.value(&schema, 4), Value::Numeric(181.0));
        assert_eq!(inst.value(&schema, 5), Value::Numeric(5450.0));
        assert_eq!(inst.value(&schema, 11), Value::Nominal("1"));
        assert_eq!(inst.value(&schema, 22), Value::Numeric(8.0));
        assert_eq!(inst.value(&schema, 35), Value::Numeric(0.11));
        assert_eq!(schema.class_labels()[inst.label], "normal");
    }

    #[test]
    fn strips_single_trailing_dot() {
        let mut schema = kdd99_schema();
        let line = FIRST_ROW.replace("normal.", "smurf.");
        let inst = parse_kdd_line(&line, 1, &mut schema).unwrap();
        assert_eq!(schema.class_labels()[inst.label], "smurf");
        let line = FIRST_ROW.replace("normal.", "smurf..");
        let inst = parse_kdd_line(&line, 1, &mut schema).unwrap();
        assert_eq!(schema.class_labels()[inst.label], "smurf.");
    }

    #[test]
    fn accepts_nsl_difficulty_column() {
        let mut schema = kdd99_schema();
        let line = FIRST_ROW.replace("normal.", "normal,20");
        let inst = parse_kdd_line(&line, 1, &mut schema).unwrap();
        assert_eq!(schema.class_labels()[inst.label], "normal");
    }

    #[test]
    fn missing_label_is_field_count_error() {
        let mut schema = kdd99_schema();
        let line = FIRST_ROW.rsplit_once(',').unwrap().0;
        let err = parse_kdd_line(line, 7, &mut schema).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("expected 42 fields"), "{msg}");
        assert!(msg.contains("line 7"), "{msg}");
    }

    #[test]
    fn bad_number_reports_field() {
        let mut schema = kdd99_schema();
        let line = FIRST_ROW.replacen("181", "18x", 1);
        match parse_kdd_line(&line, 3, &mut schema).unwrap_err() {
            Error::Parse { line, field, .. } => assert_eq!((line, field), (3, 5)),
            e => panic!("unexpected {e}"),
        }
        let line = FIRST_ROW.replacen("181", "inf", 1);
        assert!(parse_kdd_line(&line, 3, &mut schema).is_err());
    }

    #[test]
    fn empty_label_and_empty_field_rejected() {
        let mut schema = kdd99_schema();
        let line = FIRST_ROW.replace("normal.", ".");
        assert!(matches!(parse_kdd_line(&line, 1, &mut schema), Err(Error::Parse { field: 42, .. })));
        let line = FIRST_ROW.replacen("tcp", "", 1);
        assert!(matches!(parse_kdd_line(&line, 1, &mut schema), Err(Error::Parse { field: 2, .. })));
    }

    #[test]
    fn empty_file_has_no_instances() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.data");
        std::fs::write(&path, "\n\n").unwrap();
        let err = load_dataset(&path, kdd99_schema()).unwrap_err();
        assert!(err.to_string().contains("no instances"));
    }

    #[test]
    fn gzip_and_plain_load_identically() {
        use flate2::write::GzEncoder;
        let dir = tempfile::tempdir().unwrap();
        let text = format!("{FIRST_ROW}\n{}\n", FIRST_ROW.replace("normal.", "smurf."));
        let plain = dir.path().join("a.data");
        std::fs::write(&plain, &text).unwrap();
        let gz = dir.path().join("a.data.gz");
        let mut enc = GzEncoder::new(File::create(&gz).unwrap(), flate2::Compression::fast());
        enc.write_all(text.as_bytes()).unwrap();
        enc.finish().unwrap();
        let a = load_dataset(&plain, kdd99_schema()).unwrap();
        let b = load_dataset(&gz, kdd99_schema()).unwrap();
        assert_eq!(a.instances(), b.instances());
        assert_eq!(a.schema(), b.schema());
        assert_eq!(a.class_counts(), vec![1, 1]);
    }
}
