//! Line-oriented JSON records shared by the CLI and the test harness.

use std::io::{self, Write};

use serde_json::{json, Value};

use crate::metric::{DiffusenessCertificate, PerfectnessReport};
use crate::rational;

/// Header record echoing everything needed to replay a run.
pub fn config_record(command: &str, config: Value) -> Value {
    json!({
        "record": "config",
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
    })
}

/// One record per tested `(x, R)` pair.
pub fn perfectness_records(report: &PerfectnessReport) -> Vec<Value> {
    report
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "record": "perfectness",
                "nu": rational::format(&report.nu),
                "x": rational::format(&w.x),
                "radius": rational::format(&w.radius),
                "witness": w.witness.as_ref().map(rational::format),
                "ok": w.witness.is_some(),
            })
        })
        .collect()
}

/// One record per tested `(x, ρ, y)` triple.
pub fn diffuseness_records(cert: &DiffusenessCertificate) -> Vec<Value> {
    cert.trials
        .iter()
        .map(|t| {
            json!({
                "record": "diffuse",
                "beta": rational::format(&cert.beta0),
                "x": rational::format(&t.x),
                "rho": rational::format(&t.rho),
                "y": rational::format(&t.y),
                "witness": t.witness.as_ref().map(rational::format),
                "ok": t.witness.is_some(),
            })
        })
        .collect()
}

pub fn write_record(out: &mut dyn Write, record: &Value) -> io::Result<()> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")
}

pub fn write_records<'a>(out: &mut dyn Write, records: impl IntoIterator<Item = &'a Value>) -> io::Result<()> {
    records.into_iter().try_for_each(|r| write_record(out, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_per_record() {
        let mut buf = Vec::new();
        let rs = [json!({"a": 1}), json!({"b": [1, 2]})];
        write_records(&mut buf, &rs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(serde_json::from_str::<Value>(text.lines().nth(1).unwrap()).unwrap(), rs[1]);
    }
}
