// Copyright 2026 The mermin-bound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Dataset emission: the frozen CSV column contract and JSON arrays of
//! [`AnalysisRecord`]s.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::record::AnalysisRecord;
use crate::CliError;

/// Output encoding of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// The CSV header, in column order.
pub const CSV_COLUMNS: [&str; 32] = [
    "seed_index",
    "l0",
    "l1",
    "l2",
    "l3",
    "l4",
    "phi",
    "e1sq",
    "e2sq",
    "e3sq",
    "e4sq",
    "e5",
    "ct_sq",
    "neg_alpha1",
    "alpha2_1",
    "alpha3_1",
    "gamma2_1",
    "theta_1",
    "bound_1",
    "alpha2_2",
    "alpha3_2",
    "gamma2_2",
    "theta_2",
    "bound_2",
    "alpha2_3",
    "alpha3_3",
    "gamma2_3",
    "theta_3",
    "bound_3",
    "gamma_r",
    "gamma",
    "converged",
];

/// One parsed CSV row. Field names are the column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub seed_index: u64,
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub phi: f64,
    pub e1sq: f64,
    pub e2sq: f64,
    pub e3sq: f64,
    pub e4sq: f64,
    pub e5: f64,
    pub ct_sq: f64,
    pub neg_alpha1: f64,
    pub alpha2_1: f64,
    pub alpha3_1: f64,
    pub gamma2_1: f64,
    pub theta_1: f64,
    pub bound_1: f64,
    pub alpha2_2: f64,
    pub alpha3_2: f64,
    pub gamma2_2: f64,
    pub theta_2: f64,
    pub bound_2: f64,
    pub alpha2_3: f64,
    pub alpha3_3: f64,
    pub gamma2_3: f64,
    pub theta_3: f64,
    pub bound_3: f64,
    pub gamma_r: f64,
    pub gamma: Option<f64>,
    pub converged: Option<bool>,
}

impl From<&AnalysisRecord> for CsvRow {
    fn from(r: &AnalysisRecord) -> Self {
        let ax = |j: usize| &r.axes[j];
        CsvRow {
            seed_index: r.seed_index,
            l0: r.l0,
            l1: r.l1,
            l2: r.l2,
            l3: r.l3,
            l4: r.l4,
            phi: r.phi,
            e1sq: r.e1sq,
            e2sq: r.e2sq,
            e3sq: r.e3sq,
            e4sq: r.e4sq,
            e5: r.e5,
            ct_sq: r.ct_sq,
            neg_alpha1: r.neg_alpha1,
            alpha2_1: ax(0).alpha2,
            alpha3_1: ax(0).alpha3,
            gamma2_1: ax(0).gamma2,
            theta_1: ax(0).theta,
            bound_1: ax(0).bound,
            alpha2_2: ax(1).alpha2,
            alpha3_2: ax(1).alpha3,
            gamma2_2: ax(1).gamma2,
            theta_2: ax(1).theta,
            bound_2: ax(1).bound,
            alpha2_3: ax(2).alpha2,
            alpha3_3: ax(2).alpha3,
            gamma2_3: ax(2).gamma2,
            theta_3: ax(2).theta,
            bound_3: ax(2).bound,
            gamma_r: r.gamma_r,
            gamma: r.gamma,
            converged: r.converged(),
        }
    }
}

/// Renders a float with 17 significant digits, enough to round-trip any
/// `f64` exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl CsvRow {
    fn fields(&self) -> Vec<String> {
        let f = format_float;
        let mut out = vec![self.seed_index.to_string()];
        out.extend(
            [
                self.l0,
                self.l1,
                self.l2,
                self.l3,
                self.l4,
                self.phi,
                self.e1sq,
                self.e2sq,
                self.e3sq,
                self.e4sq,
                self.e5,
                self.ct_sq,
                self.neg_alpha1,
                self.alpha2_1,
                self.alpha3_1,
                self.gamma2_1,
                self.theta_1,
                self.bound_1,
                self.alpha2_2,
                self.alpha3_2,
                self.gamma2_2,
                self.theta_2,
                self.bound_2,
                self.alpha2_3,
                self.alpha3_3,
                self.gamma2_3,
                self.theta_3,
                self.bound_3,
                self.gamma_r,
            ]
            .map(f),
        );
        out.push(self.gamma.map(f).unwrap_or_default());
        out.push(self.converged.map(|c| c.to_string()).unwrap_or_default());
        out
    }
}

/// Serializes records as CSV into `sink`.
pub fn write_csv<W: Write>(records: &[AnalysisRecord], sink: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in records {
        w.write_record(CsvRow::from(r).fields()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Serializes records as a pretty-printed JSON array into `sink`.
pub fn write_json<W: Write>(records: &[AnalysisRecord], mut sink: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut sink, records).map_err(|e| CliError::Io(e.to_string()))?;
    sink.write_all(b"\n")?;
    sink.flush()?;
    Ok(())
}

/// Renders a dataset to bytes.
pub fn render(records: &[AnalysisRecord], format: Format) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(records, &mut buf)?,
        Format::Json => write_json(records, &mut buf)?,
    }
    Ok(buf)
}

/// Writes a non-empty dataset to `path`, or to stdout when `path` is `None`.
pub fn emit(
    records: &[AnalysisRecord],
    format: Format,
    path: Option<&Path>,
) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::Empty(
            "dataset has no rows; nothing written".into(),
        ));
    }
    let bytes = render(records, format)?;
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            w.write_all(&bytes)?;
            w.flush()?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Parses CSV produced by [`write_csv`], checking the header first.
pub fn read_csv<R: Read>(source: R) -> Result<Vec<CsvRow>, CliError> {
    let mut r = csv::Reader::from_reader(source);
    let header = r.headers().map_err(|e| CliError::Io(e.to_string()))?;
    if header.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(CliError::Validation(
            "CSV header does not match the column contract".into(),
        ));
    }
    r.deserialize()
        .collect::<Result<Vec<CsvRow>, _>>()
        .map_err(|e| CliError::Validation(e.to_string()))
}

/// Parses a JSON array of records.
pub fn read_json<R: Read>(source: R) -> Result<Vec<AnalysisRecord>, CliError> {
    serde_json::from_reader(source).map_err(|e| CliError::Validation(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::analyze;
    use mermin_bound::optimizer::OptimizerConfig;
    use mermin_bound::qstate::sample_canonical;

    fn dataset(optimize: bool) -> Vec<AnalysisRecord> {
        let cfg = OptimizerConfig {
            restarts: 4,
            ..OptimizerConfig::default()
        };
        (0..6)
            .map(|i| {
                analyze(i, &sample_canonical(100 + i), optimize.then_some(&cfg))
                    .unwrap()
                    .record
            })
            .collect()
    }

    #[test]
    fn header_is_the_contract() {
        let bytes = render(&dataset(false), Format::Csv).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        for optimize in [false, true] {
            let recs = dataset(optimize);
            let rows = read_csv(&render(&recs, Format::Csv).unwrap()[..]).unwrap();
            let expected: Vec<CsvRow> = recs.iter().map(CsvRow::from).collect();
            assert_eq!(rows, expected);
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let recs = dataset(true);
        let back = read_json(&render(&recs, Format::Json).unwrap()[..]).unwrap();
        assert_eq!(back, recs);
        let csv_from_back = render(&back, Format::Csv).unwrap();
        assert_eq!(csv_from_back, render(&recs, Format::Csv).unwrap());
    }

    #[test]
    fn float_rendering_round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.220446049250313e-16,
            4.0,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_dataset_is_rejected() {
        let err = emit(&[], Format::Csv, None).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let err = emit(
            &dataset(false),
            Format::Csv,
            Some(Path::new("/nonexistent-dir/x.csv")),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn bad_header_is_rejected() {
        assert!(read_csv(&b"a,b\n1,2\n"[..]).is_err());
    }
}
