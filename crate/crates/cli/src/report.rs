//! Run reports and output formatting.

use loccg::numerics::{format_ratio, to_f64, Rational};
use serde::Serialize;

/// 17 significant digits, the full information content of an f64.
pub fn real17(x: f64) -> String {
    format!("{x:.16e}")
}

/// 6 significant digits for human-readable tables.
pub fn real6(x: f64) -> String {
    format!("{x:.6}")
}

pub fn win_probability(value: f64) -> f64 {
    (1.0 + value) / 2.0
}

#[derive(Serialize)]
pub struct ParamsDto {
    pub n: u32,
    pub k: u32,
    /// Threshold as a fraction of n.
    pub t: String,
    /// The same threshold as an absolute rational.
    pub t_abs: String,
}

#[derive(Serialize)]
pub struct ClassicalDto {
    pub method: String,
    pub value: String,
    pub decimal: f64,
    pub winning_probability: f64,
}

#[derive(Serialize)]
pub struct QuantumDto {
    pub method: String,
    pub value: f64,
    pub winning_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_value: Option<f64>,
    #[serde(rename = "min_eig_K", skip_serializing_if = "Option::is_none")]
    pub min_eig_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
}

#[derive(Serialize)]
pub struct RunReport {
    pub parameters: ParamsDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "TimingsDto::is_empty")]
    pub timings_ms: TimingsDto,
}

#[derive(Serialize, Default)]
pub struct TimingsDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum: Option<f64>,
}

impl TimingsDto {
    fn is_empty(&self) -> bool {
        self.classical.is_none() && self.quantum.is_none()
    }
}

impl RunReport {
    pub fn classical_from(&mut self, method: &str, value: &Rational, ms: Option<f64>) {
        let decimal = to_f64(value);
        self.classical = Some(ClassicalDto {
            method: method.to_string(),
            value: format_ratio(value),
            decimal,
            winning_probability: win_probability(decimal),
        });
        self.timings_ms.classical = ms;
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let p = &self.parameters;
        out.push_str(&format!(
            "game: n={} k={} t={} (abs {})\n",
            p.n, p.k, p.t, p.t_abs
        ));
        if let Some(c) = &self.classical {
            out.push_str(&format!(
                "classical [{}]: {} = {} (win prob {})\n",
                c.method,
                c.value,
                real6(c.decimal),
                real6(c.winning_probability)
            ));
        }
        if let Some(q) = &self.quantum {
            let cert = match q.certified {
                Some(true) => ", certified",
                Some(false) => ", NOT certified",
                None => "",
            };
            out.push_str(&format!(
                "quantum [{}]: {} (win prob {}{})\n",
                q.method,
                real6(q.value),
                real6(q.winning_probability),
                cert
            ));
        }
        if let Some(r) = self.ratio {
            out.push_str(&format!("ratio quantum/classical: {}\n", real6(r)));
        }
        out
    }
}
