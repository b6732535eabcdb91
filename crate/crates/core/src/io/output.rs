//! CSV snapshots, monitor series and JSON summaries.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{GasError, Result};
use crate::gas::{FlowState, GasModel, MassMesh};
use crate::monitors::LawId;

/// Decimal form with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub const SNAPSHOT_HEADER: [&str; 8] = ["i", "s", "r", "u", "rho", "p", "eps", "S"];

/// Writes one layer: row `i` holds node `i` (`s`, `r`, `u`) and cell `i` (`rho`, `p`, `eps`, `S`);
/// the last row has empty cell columns.
pub fn write_snapshot(path: &Path, state: &FlowState<f64>, mesh: &MassMesh<f64>, gas: &GasModel<f64>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SNAPSHOT_HEADER)?;
    let entropy = state.entropy(gas);
    for (i, (&r, &u)) in state.r.iter().zip(&state.u).enumerate() {
        let mut row = vec![i.to_string(), fmt17(mesh.s_nodes[i]), fmt17(r), fmt17(u)];
        if i < state.cells() {
            row.extend([state.rho[i], state.p[i], state.eps[i], entropy[i]].map(fmt17));
        } else {
            row.extend(std::iter::repeat_n(String::new(), 4));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a snapshot back into the flow state and the mass nodes.
pub fn read_snapshot(path: &Path) -> Result<(FlowState<f64>, Vec<f64>)> {
    let mut rd = csv::Reader::from_path(path)?;
    let header = rd.headers()?.clone();
    if header.iter().ne(SNAPSHOT_HEADER) {
        return Err(GasError::Io(format!("{}: unexpected snapshot header", path.display())));
    }
    let mut st = FlowState { r: vec![], u: vec![], rho: vec![], p: vec![], eps: vec![] };
    let mut s = Vec::new();
    let num = |v: &str| v.parse::<f64>().map_err(|e| GasError::Io(format!("{}: bad number '{v}': {e}", path.display())));
    for rec in rd.records() {
        let rec = rec?;
        s.push(num(&rec[1])?);
        st.r.push(num(&rec[2])?);
        st.u.push(num(&rec[3])?);
        if !rec[4].is_empty() {
            st.rho.push(num(&rec[4])?);
            st.p.push(num(&rec[5])?);
            st.eps.push(num(&rec[6])?);
        }
    }
    if st.r.len() != st.rho.len() + 1 {
        return Err(GasError::Io(format!("{}: cell rows do not match node rows", path.display())));
    }
    Ok((st, s))
}

/// Streams the monitor series `t, law_id, total, drift, max_abs_residual`.
pub struct MonitorWriter {
    w: csv::Writer<File>,
}

impl MonitorWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["t", "law_id", "total", "drift", "max_abs_residual"])?;
        Ok(Self { w })
    }

    pub fn row(&mut self, t: f64, law: LawId, total: f64, drift: f64, max_abs_residual: f64) -> Result<()> {
        self.w
            .write_record([fmt17(t), law.id().to_string(), fmt17(total), fmt17(drift), fmt17(max_abs_residual)])?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct NewtonStats {
    pub total_iterations: usize,
    pub max_iterations: usize,
    pub max_residual: f64,
    pub fallbacks: usize,
    pub retries: usize,
}

/// Run summary. Maps are ordered by key so the JSON is byte-stable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub status: String,
    pub error: Option<String>,
    pub scheme: String,
    pub preset: String,
    pub steps: usize,
    pub final_t: f64,
    pub max_drift: BTreeMap<String, f64>,
    pub max_abs_residual: BTreeMap<String, f64>,
    pub max_entropy_residual: f64,
    pub max_work_residual: f64,
    pub newton: NewtonStats,
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(vals: &[f64]) -> (FlowState<f64>, MassMesh<f64>) {
        let cells = vals.len();
        let mesh = MassMesh::uniform(0.0, 1.0, cells, 0.0, 0.1).unwrap();
        let mut r = vec![0.0];
        for v in vals {
            r.push(r.last().unwrap() + v.abs() + 0.1);
        }
        let st = FlowState {
            u: vals.iter().copied().chain([1.0 / 3.0]).collect(),
            r,
            rho: vals.iter().map(|v| v.abs() + 0.5).collect(),
            p: vals.iter().map(|v| v * v + std::f64::consts::PI).collect(),
            eps: vals.iter().map(|v| v.abs().sqrt() + 1e-300).collect(),
        };
        (st, mesh)
    }

    proptest! {
        #[test]
        fn snapshot_round_trip_is_bit_exact(vals in prop::collection::vec(-1e3f64..1e3, 1..12)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("snap.csv");
            let gas = GasModel::new(0, 1.4).unwrap();
            let (st, mesh) = state(&vals);
            write_snapshot(&path, &st, &mesh, &gas).unwrap();
            let (back, s) = read_snapshot(&path).unwrap();
            prop_assert_eq!(back, st);
            prop_assert_eq!(s, mesh.s_nodes);
        }
    }

    #[test]
    fn fmt17_has_seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn monitor_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let mut w = MonitorWriter::create(&path).unwrap();
        w.row(0.5, LawId::Mass, 1.0, 0.0, 1e-15).unwrap();
        w.flush().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("t,law_id,total,drift,max_abs_residual\n5.0000000000000000e-1,mass,"));
    }
}
