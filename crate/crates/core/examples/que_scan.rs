//! Scan good N for A1 and stream rows as CSV to stdout.

use catmap::arith::ThresholdOverrides;
use catmap::experiments::{que_scan, ExperimentConfig, OutputFormat, RowSink};
use catmap::symplectic::catalog::a1;

fn main() -> catmap::Result<()> {
    let config = ExperimentConfig {
        matrix: a1().to_i64().expect("small entries"),
        n_list: Some(vec![7, 15, 21, 35, 49]),
        freqs: vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        overrides: ThresholdOverrides { window: Some((3.0, 100.0)), d: Some(4.0), ..Default::default() },
        ..Default::default()
    };
    let stdout = std::io::stdout();
    let mut sink = RowSink::new(OutputFormat::Csv, stdout.lock());
    que_scan(&config, |row| sink.write(&row.without_timing()))?;
    Ok(())
}
