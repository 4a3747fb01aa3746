//! Deterministic result records. The JSON field set is fixed:
//! `{command, prime, inputs, places: [{place, nu, symbol}], aggregate,
//!   pass, windows}`.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct PlaceEntry {
    pub place: String,
    pub nu: Option<i64>,
    pub symbol: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Windows {
    pub n1: Option<i64>,
    pub n2: Option<i64>,
    pub stability: String,
}

impl Windows {
    pub fn none() -> Self {
        Windows { n1: None, n2: None, stability: "n/a".into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub prime: u64,
    pub inputs: Vec<String>,
    pub places: Vec<PlaceEntry>,
    pub aggregate: serde_json::Value,
    pub pass: Option<bool>,
    pub windows: Windows,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("prime: {}\n", self.prime));
        for (i, input) in self.inputs.iter().enumerate() {
            out.push_str(&format!("input[{i}]: {input}\n"));
        }
        for p in &self.places {
            out.push_str(&format!("place: {}", p.place));
            if let Some(nu) = p.nu {
                out.push_str(&format!("  nu={nu}"));
            }
            if let Some(s) = p.symbol {
                out.push_str(&format!("  symbol={s}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("aggregate: {}\n", self.aggregate));
        out.push_str(&format!(
            "windows: n1={} n2={} stability={}\n",
            self.windows.n1.map_or("-".into(), |v| v.to_string()),
            self.windows.n2.map_or("-".into(), |v| v.to_string()),
            self.windows.stability
        ));
        match self.pass {
            Some(true) => out.push_str("pass: true\n"),
            Some(false) => out.push_str("pass: false\n"),
            None => out.push_str("pass: n/a\n"),
        }
        out
    }
}
