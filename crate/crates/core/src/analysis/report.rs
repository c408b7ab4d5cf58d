use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One line of a demo CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemoRow {
    pub k: f64,
    pub lhs: f64,
    #[serde(rename = "dK")]
    pub dk: f64,
    pub ratio: f64,
}

pub fn write_demo_csv<W: Write>(out: &mut W, rows: &[DemoRow]) -> Result<()> {
    writeln!(out, "k,lhs,dK,ratio")?;
    for r in rows {
        writeln!(out, "{},{:e},{:e},{:e}", r.k, r.lhs, r.dk, r.ratio)?;
    }
    Ok(())
}
