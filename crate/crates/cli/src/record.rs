//! Output schema shared by the CSV and JSON formats.

use fmcount::counting::FMRecord;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// One row of the report, with identical fields in every output format.
///
/// Columns that only make sense for `18 | d` are `None` (empty CSV cell,
/// JSON `null`) otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    pub d: u64,
    pub d_prime: Option<u64>,
    pub u_2d: u64,
    pub type_i: Option<u64>,
    pub type_ii_k0: Option<u64>,
    pub type_ii_k1: Option<u64>,
    pub type_ii_k2: Option<u64>,
    pub m_st: Option<u64>,
    pub fm_formula: u64,
    pub fm_oracle: Option<u64>,
    pub agree: bool,
}

pub const CSV_HEADER: &str =
    "d,d_prime,u_2d,type_I,type_II_k0,type_II_k1,type_II_k2,M_ST,fm_formula,fm_oracle,agree";

impl From<&FMRecord> for OutputRecord {
    fn from(r: &FMRecord) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION,
            d: r.d,
            d_prime: r.d_prime,
            u_2d: r.u_2d,
            type_i: r.counts_by_type.map(|c| c.type_i),
            type_ii_k0: r.counts_by_type.map(|c| c.type_ii_k0),
            type_ii_k1: r.counts_by_type.map(|c| c.type_ii_k1),
            type_ii_k2: r.counts_by_type.map(|c| c.type_ii_k2),
            m_st: r.counts_by_type.map(|c| c.total()),
            fm_formula: r.count_formula,
            fm_oracle: r.count_oracle,
            agree: r.agree,
        }
    }
}

fn cell(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl OutputRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.d,
            cell(self.d_prime),
            self.u_2d,
            cell(self.type_i),
            cell(self.type_ii_k0),
            cell(self.type_ii_k1),
            cell(self.type_ii_k2),
            cell(self.m_st),
            self.fm_formula,
            cell(self.fm_oracle),
            self.agree
        )
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("plain record always serializes")
    }
}
