use std::path::PathBuf;

use berezin_core::quantize::Symbol;
use berezin_core::{GaussianRational, Weight};
use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Berezin,
    Sl2,
    Witt,
    Quantize,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Berezin => "berezin",
            Suite::Sl2 => "sl2",
            Suite::Witt => "witt",
            Suite::Quantize => "quantize",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub weight: Weight,
    /// Truncation / partial-sum horizon.
    pub n: usize,
    pub scan: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub suite: Suite,
}

impl RunConfig {
    pub fn new(
        h: &str,
        n: usize,
        scan: usize,
        format: Format,
        out: Option<PathBuf>,
        suite: Suite,
    ) -> Result<Self, CliError> {
        if n < 2 {
            return Err(CliError::Config(format!("N must be at least 2, got {n}")));
        }
        if scan < 16 {
            return Err(CliError::Config(format!("scan must be at least 16, got {scan}")));
        }
        Ok(RunConfig { weight: parse_weight(h)?, n, scan, format, out, suite })
    }
}

/// `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Config(format!("expected a rational p/q, got {s:?}"));
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

pub fn parse_weight(s: &str) -> Result<Weight, CliError> {
    let h = parse_rational(s)?;
    Weight::new(h).map_err(|e| CliError::Config(e.to_string()))
}

/// Comma-separated list of weights.
pub fn parse_weight_list(s: &str) -> Result<Vec<Weight>, CliError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_weight).collect()
}

/// `"(m,n);(m,n);…"`; an empty string is the empty list.
pub fn parse_pairs(s: &str) -> Result<Vec<(i64, i64)>, CliError> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let bad = || CliError::Config(format!("expected a pair (m,n), got {t:?}"));
            let inner = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
            let (m, n) = inner.split_once(',').ok_or_else(bad)?;
            Ok((m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

/// `[[k, re_num, re_den, im_num, im_den], …]`.
pub fn parse_symbol(s: &str) -> Result<Symbol, CliError> {
    let rows: Vec<[i64; 5]> =
        serde_json::from_str(s).map_err(|e| CliError::Config(format!("bad symbol JSON {s:?}: {e}")))?;
    let mut terms = Vec::with_capacity(rows.len());
    for [k, rn, rd, im_n, im_d] in rows {
        if rd == 0 || im_d == 0 {
            return Err(CliError::Config(format!("zero denominator in symbol term for z^{k}")));
        }
        let c =
            GaussianRational::new(BigRational::new(rn.into(), rd.into()), BigRational::new(im_n.into(), im_d.into()));
        terms.push((k, c));
    }
    Ok(Symbol::new(terms))
}
