//! Reference rows for picky 2- and 3-elements, embedded verbatim. Rows
//! beyond the desk budget are never recomputed; they are reported as
//! fixture-only.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::Family;
use crate::matrix::Classical;

const RAW: &str = include_str!("../../fixtures/tables1-2.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowScale {
    /// Reproducible within the default budget.
    Engine,
    /// Reproducible only with an extended budget.
    Extended,
    FixtureOnly,
}

/// A matrix group realizing the row's group up to a central quotient
/// that does not affect the picky classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub family: Classical,
    pub n: usize,
    pub q: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TableRow {
    #[serde(default)]
    pub table: u8,
    #[serde(default)]
    pub ell: u64,
    pub group: String,
    pub family: Family,
    pub n: u32,
    pub q: u64,
    pub epsilon: i8,
    pub cover: Option<String>,
    pub element_order: u64,
    /// Centralizer orders of the picky classes, with multiplicities.
    pub centralizers: Vec<(u64, u32)>,
    /// `|Irr^x_{ℓ^i}|` for `i = 0, 1, …`.
    pub irr_counts: Vec<u64>,
    pub realization: Option<Realization>,
    pub group_order: Option<String>,
    pub status: RowScale,
}

impl TableRow {
    pub fn summary(&self) -> String {
        let cent: Vec<String> = self
            .centralizers
            .iter()
            .map(|&(c, m)| if m > 1 { format!("{c} ({m}x)") } else { c.to_string() })
            .collect();
        let counts: Vec<String> = self.irr_counts.iter().map(u64::to_string).collect();
        format!(
            "{}: o(x) = {}, |C(x)| = {}, counts {}",
            self.group,
            self.element_order,
            cent.join(", "),
            counts.join(",")
        )
    }

    /// Number of picky classes described by the row.
    pub fn class_count(&self) -> u32 {
        self.centralizers.iter().map(|c| c.1).sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Table {
    id: u8,
    ell: u64,
    caption: String,
    rows: Vec<TableRow>,
}

/// One centralizer type of a semisimple 3′-element `s` in `SU8(2)` and the
/// multiplicities of `|χ(x_i)|` over the characters in its series.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Su8Row {
    pub centralizer: String,
    pub count: u32,
    pub x1: Vec<(u64, u32)>,
    pub x2: Vec<(u64, u32)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Su8Table {
    group: String,
    ell: u64,
    status: RowScale,
    rows: Vec<Su8Row>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixtures {
    tables: Vec<Table>,
    su8: Su8Table,
}

impl Fixtures {
    pub fn rows(&self) -> impl Iterator<Item = &TableRow> {
        self.tables.iter().flat_map(|t| t.rows.iter())
    }

    pub fn table(&self, id: u8) -> Option<(&str, &[TableRow])> {
        self.tables.iter().find(|t| t.id == id).map(|t| (t.caption.as_str(), t.rows.as_slice()))
    }

    pub fn su8_rows(&self) -> &[Su8Row] {
        &self.su8.rows
    }

    pub fn su8_status(&self) -> RowScale {
        self.su8.status
    }
}

pub fn fixtures() -> &'static Fixtures {
    static CELL: OnceLock<Fixtures> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut f: Fixtures = serde_json::from_str(RAW).expect("embedded fixture is valid JSON");
        for t in &mut f.tables {
            for r in &mut t.rows {
                r.table = t.id;
                r.ell = t.ell;
            }
        }
        f
    })
}
