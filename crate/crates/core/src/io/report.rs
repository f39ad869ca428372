use super::ParseError;

pub const REPORT_COLUMNS: [&str; 12] = [
    "network",
    "case_id",
    "algorithm",
    "seed",
    "log10_prob",
    "prob",
    "sweeps",
    "restarts_used",
    "best_found_sweep",
    "reheats",
    "wall_ms",
    "matches_oracle",
];

/// One benchmark result line.
///
/// Probabilities are `None` when the algorithm produced no answer (for
/// instance an oracle over its enumeration cap); `wall_ms` is `None` when
/// timing is suppressed; `matches_oracle` is `None` when no oracle ran.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub network: String,
    pub case_id: usize,
    pub algorithm: String,
    pub seed: u64,
    pub log10_prob: Option<f64>,
    pub prob: Option<f64>,
    pub sweeps: u64,
    pub restarts_used: u32,
    pub best_found_sweep: u64,
    pub reheats: u64,
    pub wall_ms: Option<u64>,
    pub matches_oracle: Option<bool>,
}

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt_f64(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn fmt_opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_report(rows: &[ReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_COLUMNS).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.network.clone(),
            r.case_id.to_string(),
            r.algorithm.clone(),
            r.seed.to_string(),
            fmt_f64(r.log10_prob),
            fmt_f64(r.prob),
            r.sweeps.to_string(),
            r.restarts_used.to_string(),
            r.best_found_sweep.to_string(),
            r.reheats.to_string(),
            fmt_opt(r.wall_ms),
            fmt_opt(r.matches_oracle.map(u8::from)),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// Parses a report written by [`write_report`].
pub fn read_report(text: &str) -> Result<Vec<ReportRow>, ParseError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h.map_err(|e| csv_error(&e))?,
        None => return Err(ParseError::new(1, 1, "missing header row")),
    };
    if header.iter().ne(REPORT_COLUMNS) {
        return Err(ParseError::new(1, 1, "unexpected header row"));
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| csv_error(&e))?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != REPORT_COLUMNS.len() {
            return Err(ParseError::new(
                line,
                1,
                format!("expected {} fields, found {}", REPORT_COLUMNS.len(), rec.len()),
            ));
        }
        let field = |i: usize| &rec[i];
        let bad = |i: usize| ParseError::new(line, 1, format!("invalid {} `{}`", REPORT_COLUMNS[i], &rec[i]));
        let req = |i: usize| -> Result<u64, ParseError> { field(i).parse().map_err(|_| bad(i)) };
        let opt_f = |i: usize| -> Result<Option<f64>, ParseError> {
            match field(i) {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(i)),
            }
        };
        rows.push(ReportRow {
            network: field(0).to_string(),
            case_id: req(1)? as usize,
            algorithm: field(2).to_string(),
            seed: req(3)?,
            log10_prob: opt_f(4)?,
            prob: opt_f(5)?,
            sweeps: req(6)?,
            restarts_used: u32::try_from(req(7)?).map_err(|_| bad(7))?,
            best_found_sweep: req(8)?,
            reheats: req(9)?,
            wall_ms: match field(10) {
                "" => None,
                s => Some(s.parse().map_err(|_| bad(10))?),
            },
            matches_oracle: match field(11) {
                "" => None,
                "1" => Some(true),
                "0" => Some(false),
                _ => return Err(bad(11)),
            },
        });
    }
    Ok(rows)
}

fn csv_error(e: &csv::Error) -> ParseError {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(1);
    ParseError::new(line.max(1), 1, e.to_string())
}
