//! Text encodings for distributions and check reports.

use icowalk::measure::Distribution;
use icowalk::state::Chirality;
use icowalk::suite::CheckReport;
use serde::Serialize;
use serde_json::value::RawValue;

/// 17 significant digits, fixed notation for moderate exponents.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..17).contains(&exp) {
        format!("{x:.*}", (16 - exp) as usize)
    } else {
        sci
    }
}

fn raw(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        fmt_real(x)
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted real is valid JSON")
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BranchLabel {
    pub order_outcome: Option<usize>,
    pub coin_outcome: Option<Chirality>,
}

#[derive(Serialize)]
struct BranchJson {
    order_outcome: Option<usize>,
    coin_outcome: Option<&'static str>,
}

#[derive(Serialize)]
struct DistributionJson {
    origin: i64,
    positions: Vec<i64>,
    probabilities: Vec<Box<RawValue>>,
    normalized: bool,
    branch: BranchJson,
    branch_probability: Box<RawValue>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    check: &'a str,
    seed: u64,
    trials: usize,
    passed: bool,
    max_deviation: Box<RawValue>,
    tolerance: Box<RawValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Support rows only.
pub fn distribution_text(
    d: &Distribution,
    label: BranchLabel,
    branch_probability: f64,
    format: Format,
) -> String {
    let support = d.support();
    match format {
        Format::Csv => {
            let mut out = String::from("position,probability\n");
            for (x, p) in support {
                out.push_str(&format!("{x},{}\n", fmt_real(p)));
            }
            out
        }
        Format::Json => {
            let doc = DistributionJson {
                origin: d.origin(),
                positions: support.iter().map(|s| s.0).collect(),
                probabilities: support.iter().map(|s| raw(s.1)).collect(),
                normalized: d.is_normalized(),
                branch: BranchJson {
                    order_outcome: label.order_outcome,
                    coin_outcome: label.coin_outcome.map(Chirality::name),
                },
                branch_probability: raw(branch_probability),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

pub fn reports_text(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("check,seed,trials,passed,max_deviation,tolerance\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.check,
                    r.seed,
                    r.trials,
                    r.passed,
                    fmt_real(r.max_deviation),
                    fmt_real(r.tolerance)
                ));
            }
            out
        }
        Format::Json => {
            let docs: Vec<ReportJson> = reports
                .iter()
                .map(|r| ReportJson {
                    check: &r.check,
                    seed: r.seed,
                    trials: r.trials,
                    passed: r.passed,
                    max_deviation: raw(r.max_deviation),
                    tolerance: raw(r.tolerance),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&docs).expect("serializable");
            s.push('\n');
            s
        }
    }
}
