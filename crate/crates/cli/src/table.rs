//! Table emitters: Gaussian triangles, q-state orbits, cyclotomic factors.

use qint_core::cyclotomic::factor_q_integer;
use qint_core::Elem;
use serde_json::{json, Value};

use crate::commands::{context, CliError};
use crate::{Cli, RangeArgs};

/// Polynomial text without spaces or explicit products: "1+t+2t^2".
fn compact(e: &Elem) -> String {
    e.to_string().chars().filter(|c| *c != ' ' && *c != '*').collect()
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

pub fn run(cli: &Cli, kind: &str, ranges: &RangeArgs, n: Option<u64>) -> Result<u8, CliError> {
    let ctx = context(&cli.common)?;
    let table = match kind {
        "gauss_triangle" => {
            let n_max = ranges.n_max.unwrap_or(8);
            let mut t = ctx.pascal_table();
            let mut rows = Vec::new();
            // the upper half of each row is its mirror image
            for n in 0..=n_max {
                for k in 0..=n / 2 {
                    rows.push(vec![n.to_string(), k.to_string(), compact(&t.get(n, k))]);
                }
            }
            Table { header: vec!["n", "k", "polynomial"], rows }
        }
        "qstate_orbit" => {
            let m_max = ranges.m_max.unwrap_or(20);
            let rows = ctx.q_states(m_max).iter().enumerate().map(|(m, v)| vec![m.to_string(), compact(v)]).collect();
            Table { header: vec!["m", "value"], rows }
        }
        "cyclo_factors" => {
            let n_max = n.or(ranges.n_max).unwrap_or(12);
            let rows = (1..=n_max)
                .map(|n| {
                    let f: Vec<String> = factor_q_integer(n).iter().map(u64::to_string).collect();
                    vec![n.to_string(), f.join(",")]
                })
                .collect();
            Table { header: vec!["n", "factors"], rows }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown table '{other}'; known: gauss_triangle, qstate_orbit, cyclo_factors"
            )))
        }
    };
    if cli.common.json {
        let rows: Vec<Value> = table
            .rows
            .iter()
            .map(|r| Value::Object(table.header.iter().map(|h| h.to_string()).zip(r.iter().map(|c| json!(c))).collect()))
            .collect();
        let out = json!({
            "schema_version": 1,
            "ring": ctx.ring().to_string(),
            "q": ctx.q().to_string(),
            "op": "table",
            "args": [kind],
            "value": rows,
        });
        println!("{out}");
        return Ok(0);
    }
    let mut head = csv::Writer::from_writer(std::io::stdout());
    head.write_record(&table.header)?;
    head.flush()?;
    // integers stay bare, polynomials and lists are quoted
    let mut body = csv::WriterBuilder::new().quote_style(csv::QuoteStyle::NonNumeric).from_writer(std::io::stdout());
    for r in &table.rows {
        body.write_record(r)?;
    }
    body.flush()?;
    Ok(0)
}
