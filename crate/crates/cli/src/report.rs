//! Output records and their CSV/JSON renderings.
//!
//! Every number passes through [`round12`] first, so output bytes depend only
//! on values rounded to 12 significant digits.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn fmt_num(x: f64) -> String {
    let r = round12(x);
    let a = r.abs();
    if r == 0.0 {
        "0".into()
    } else if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_opt(x: Option<f64>) -> Option<f64> {
    x.map(round12)
}

/// Which coupling convention reproduces a reference energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convention {
    pub reference_energy: f64,
    pub as_given_energy: Option<f64>,
    pub halved_energy: Option<f64>,
    /// One of `as_given`, `halved`, `both`, `neither`.
    pub matches: String,
}

impl Convention {
    pub const TOLERANCE: f64 = 1e-3;

    pub fn judge(reference: f64, as_given: Option<f64>, halved: Option<f64>) -> Self {
        let hit = |e: Option<f64>| e.is_some_and(|e| (e - reference).abs() <= Self::TOLERANCE);
        let matches = match (hit(as_given), hit(halved)) {
            (true, true) => "both",
            (true, false) => "as_given",
            (false, true) => "halved",
            (false, false) => "neither",
        };
        Convention {
            reference_energy: round12(reference),
            as_given_energy: round_opt(as_given),
            halved_energy: round_opt(halved),
            matches: matches.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub energy: f64,
    pub binding: f64,
    pub coefficients: Vec<f64>,
    pub det_residual: f64,
    pub consistency_residual: f64,
    pub quad_error: f64,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<Convention>,
}

impl SolveReport {
    pub fn rounded(mut self) -> Self {
        self.energy = round12(self.energy);
        self.binding = round12(self.binding);
        self.coefficients.iter_mut().for_each(|c| *c = round12(*c));
        self.det_residual = round12(self.det_residual);
        self.consistency_residual = round12(self.consistency_residual);
        self.quad_error = round12(self.quad_error);
        self
    }

    pub fn to_table(&self) -> Table {
        let mut columns: Vec<String> = ["energy", "binding", "det_residual", "consistency_residual", "quad_error", "iterations"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut row = vec![
            Some(self.energy),
            Some(self.binding),
            Some(self.det_residual),
            Some(self.consistency_residual),
            Some(self.quad_error),
            Some(self.iterations as f64),
        ];
        for (i, c) in self.coefficients.iter().enumerate() {
            columns.push(format!("c{}", i + 1));
            row.push(Some(*c));
        }
        if let Some(conv) = &self.convention {
            columns.push("reference_energy".into());
            row.push(Some(conv.reference_energy));
        }
        Table { columns, rows: vec![row] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleLevel {
    pub n_points: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub grid: String,
    pub hermitian: bool,
    pub coarse: OracleLevel,
    pub fine: OracleLevel,
    pub extrapolated: f64,
    pub solver_energy: Option<f64>,
    pub deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<Convention>,
}

impl OracleReport {
    pub fn to_table(&self) -> Table {
        Table {
            columns: ["n_coarse", "e_coarse", "n_fine", "e_fine", "extrapolated", "solver_energy", "deviation"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows: vec![vec![
                Some(self.coarse.n_points as f64),
                Some(self.coarse.energy),
                Some(self.fine.n_points as f64),
                Some(self.fine.energy),
                Some(self.extrapolated),
                self.solver_energy,
                self.deviation,
            ]],
        }
    }
}

/// Numeric table; `None` cells are failed points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn rounded(mut self) -> Self {
        for row in &mut self.rows {
            row.iter_mut().for_each(|c| *c = round_opt(*c));
        }
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(fmt_num).unwrap_or_default()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Option<Table> {
        let mut lines = text.lines();
        let columns: Vec<String> = lines.next()?.split(',').map(str::to_string).collect();
        let rows = lines
            .map(|l| {
                l.split(',')
                    .map(|c| if c.is_empty() { Ok(None) } else { c.parse().map(Some) })
                    .collect::<Result<Vec<_>, _>>()
                    .ok()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Table { columns, rows })
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}
