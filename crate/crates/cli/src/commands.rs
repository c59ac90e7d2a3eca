//! Subcommand dispatch, text and JSON output.

use std::collections::BTreeMap;

use qint_core::qrational::{DenominatorSet, RootSystem};
use qint_core::twisted::{TwistedAlgebra, TwistedPowerBasis};
use qint_core::verify::{self, Ranges, VerifyOptions};
use num_rational::BigRational;
use qint_core::{parse_elem, parse_ring, Elem, Error, QContext, Ring};
use serde_json::{json, Value};

use crate::{Cli, Command, Common, RangeArgs, Twist, EXIT_USAGE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("writing output: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Unparsable input is a usage error; anything raised while computing is 1.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Parse { .. } | Error::InvalidRing(_)) => EXIT_USAGE,
            CliError::Core(_) | CliError::Csv(_) | CliError::Io(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn context(common: &Common) -> Result<QContext> {
    let ring = parse_ring(&common.ring)?;
    let q = match &common.q {
        Some(text) => parse_elem(&ring, text)?,
        None => default_q(&ring)?,
    };
    Ok(QContext::new(q))
}

fn default_q(ring: &Ring) -> Result<Elem> {
    match ring.var() {
        Some(v) => Ok(parse_elem(ring, v)?),
        None => Ok(ring.one()),
    }
}

/// Prints `value` as text or as the JSON envelope.
fn emit(cli: &Cli, ctx: &QContext, op: &str, args: Vec<String>, text: String, value: Value) {
    if cli.common.json {
        let out = json!({
            "schema_version": 1,
            "ring": ctx.ring().to_string(),
            "q": ctx.q().to_string(),
            "op": op,
            "args": args,
            "value": value,
        });
        println!("{out}");
    } else {
        println!("{text}");
    }
}

fn emit_elem(cli: &Cli, ctx: &QContext, op: &str, args: Vec<String>, e: &Elem) {
    emit(cli, ctx, op, args, e.to_string(), Value::String(e.to_string()))
}

pub fn run(cli: &Cli) -> Result<u8> {
    if let Command::Table { kind, ranges, n } = &cli.command {
        return crate::table::run(cli, kind, ranges, *n);
    }
    let ctx = context(&cli.common)?;
    match &cli.command {
        Command::Qint { m } => emit_elem(cli, &ctx, "qint", vec![m.to_string()], &ctx.q_state(*m)?),
        Command::Qfact { n } => emit_elem(cli, &ctx, "qfact", vec![n.to_string()], &ctx.q_factorial(*n)),
        Command::Qbinom { n, k } => {
            emit_elem(cli, &ctx, "qbinom", vec![n.to_string(), k.to_string()], &ctx.q_binomial(*n, *k))
        }
        Command::Qsym { n, k } => match k {
            None => emit_elem(cli, &ctx, "qsym", vec![n.to_string()], &ctx.symmetric_state(*n)?),
            Some(k) => {
                let n = u64::try_from(*n).map_err(|_| CliError::Usage("symmetric binomial needs n >= 0".into()))?;
                emit_elem(cli, &ctx, "qsym", vec![n.to_string(), k.to_string()], &ctx.symmetric_binomial(n, *k)?)
            }
        },
        Command::Qrat { r, roots } => qrat(cli, &ctx, r, roots)?,
        Command::Qchar => {
            let c = ctx.q_characteristic(cli.common.bound);
            emit(cli, &ctx, "qchar", vec![], c.to_string(), Value::String(c.to_string()));
        }
        Command::Qflat => qflat(cli, &ctx)?,
        Command::Tpow { f, n, twist } => {
            let alg = algebra(&ctx, twist)?;
            let p = alg.twisted_power(&alg.parse(f)?, *n);
            emit(cli, &ctx, "tpow", vec![f.clone(), n.to_string()], p.to_string(), Value::String(p.to_string()));
        }
        Command::Expand { f, twist } => {
            let alg = algebra(&ctx, twist)?;
            let mut basis = TwistedPowerBasis::new(&alg)?;
            let coeffs = basis.expand(&alg.parse(f)?)?;
            let x = &alg.generators()[0];
            let text = if coeffs.is_empty() {
                "0".to_string()
            } else {
                coeffs.iter().map(|(i, c)| basis_term(c, x, *i)).collect::<Vec<_>>().join(" + ")
            };
            let value: serde_json::Map<String, Value> =
                coeffs.iter().map(|(i, c)| (i.to_string(), Value::String(c.to_string()))).collect();
            emit(cli, &ctx, "expand", vec![f.clone()], text, Value::Object(value));
        }
        Command::Verify { identity, ranges, sample, seed } => return verify_cmd(cli, &ctx, identity, ranges, *sample, *seed),
        Command::Table { .. } => unreachable!(),
    }
    Ok(0)
}

fn basis_term(c: &Elem, x: &str, i: usize) -> String {
    let c = c.to_string();
    if c == "1" {
        format!("{x}^({i})")
    } else if c.contains([' ', '/']) {
        format!("({c})*{x}^({i})")
    } else {
        format!("{c}*{x}^({i})")
    }
}

fn qrat(cli: &Cli, ctx: &QContext, r: &str, roots: &[String]) -> Result<()> {
    let value: BigRational = r.parse().map_err(|_| CliError::Usage(format!("bad rational '{r}'")))?;
    let sys = if roots.is_empty() {
        natural_roots(ctx)?
    } else {
        let mut map = BTreeMap::new();
        for spec in roots {
            let (n, e) = spec
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("root '{spec}' is not of the form n=ELEM")))?;
            let n: u64 = n.trim().parse().map_err(|_| CliError::Usage(format!("bad root index in '{spec}'")))?;
            map.insert(n, parse_elem(ctx.ring(), e)?);
        }
        map.entry(1).or_insert_with(|| ctx.q().clone());
        let dens = DenominatorSet::close(&map.keys().copied().collect::<Vec<_>>())?;
        RootSystem::build(ctx, &dens, map)?
    };
    let v = sys.q_state(&value)?;
    emit_elem(cli, ctx, "qrat", vec![value.to_string()], &v);
    Ok(())
}

/// t^(1/n) in ℚ(t^(1/L)) when q = t; only q itself elsewhere.
fn natural_roots(ctx: &QContext) -> Result<RootSystem> {
    let ring = ctx.ring();
    if let (Some(l), true) = (ring.puiseux_denominator(), ring.is_field()) {
        if *ctx.q() == ring.puiseux_monomial(1, 1)? {
            return Ok(RootSystem::puiseux(&DenominatorSet::close(&[l])?)?);
        }
    }
    Ok(RootSystem::trivial(ctx))
}

fn qflat(cli: &Cli, ctx: &QContext) -> Result<()> {
    let c = ctx.certify_flatness_with_bound(cli.common.bound)?;
    let witness = c.witness.as_ref().map(|(m, a)| format!("({m})_q * {a} = 0"));
    let mut text = format!("flat: {}\ndivisible: {}", c.flat, c.divisible);
    if let Some(w) = &witness {
        text.push_str(&format!("\ntorsion witness: {w}"));
    }
    if let Some(m) = c.nonunit_witness {
        text.push_str(&format!("\nnonunit: ({m})_q"));
    }
    let value = json!({
        "flat": c.flat,
        "divisible": c.divisible,
        "witness": c.witness.as_ref().map(|(m, a)| json!({"m": m, "a": a.to_string()})),
        "nonunit_witness": c.nonunit_witness,
    });
    emit(cli, ctx, "qflat", vec![], text, value);
    Ok(())
}

fn algebra(ctx: &QContext, twist: &Twist) -> Result<TwistedAlgebra> {
    let gens: Vec<&str> = twist.gens.split(',').map(str::trim).collect();
    match &twist.sigma {
        Some(images) => {
            let images: Vec<&str> = images.split(',').map(str::trim).collect();
            if images.len() != gens.len() {
                return Err(CliError::Usage(format!("{} generators but {} images", gens.len(), images.len())));
            }
            Ok(TwistedAlgebra::new(ctx.ring(), &gens, &images)?)
        }
        None => {
            if gens != ["x"] {
                return Err(CliError::Usage("the default sigma needs --gens x; pass --sigma otherwise".into()));
            }
            let h = parse_elem(ctx.ring(), &twist.h)?;
            Ok(TwistedAlgebra::affine(ctx.q(), &h)?)
        }
    }
}

fn verify_cmd(
    cli: &Cli,
    ctx: &QContext,
    identity: &str,
    ranges: &RangeArgs,
    sample: Option<usize>,
    seed: u64,
) -> Result<u8> {
    if !verify::CATALOG.contains(&identity) {
        return Err(CliError::Usage(format!(
            "unknown identity '{identity}'; known: {}",
            verify::CATALOG.join(", ")
        )));
    }
    let opts = VerifyOptions {
        ranges: Ranges { n_max: ranges.n_max, k_max: ranges.k_max, m_max: ranges.m_max },
        sample,
        seed,
        bound: cli.common.bound,
    };
    // a ring the identity cannot even be posed over is a usage problem
    let report = verify::verify(identity, ctx, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
    if cli.common.json {
        let out = json!({
            "schema_version": 1,
            "ring": ctx.ring().to_string(),
            "q": ctx.q().to_string(),
            "op": "verify",
            "args": [identity],
            "report": report,
        });
        println!("{out}");
    } else {
        println!("{report}");
    }
    Ok(report.exit_code() as u8)
}
