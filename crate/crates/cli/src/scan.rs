//! Batch classification over a finite set of integer `tau` matrices.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use rayon::prelude::*;
use serde::Serialize;
use toricfano::rational::{int, is_positive};
use toricfano::{fano_margins, FlagManifold, Polytope, QMatrix, Rational, TauMap, VectorH};

use crate::config::{BundleConfig, ScanConfig};
use crate::report::{q, render_config, render_warnings};

pub const DEFAULT_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Scales {
        base: QMatrix,
        lo: i64,
        hi: i64,
    },
    Box {
        rows: usize,
        cols: usize,
        bound: i64,
    },
}

impl Domain {
    /// Resolves the scan domain from the config, with `max` overriding the
    /// upper scale or the box bound.
    pub fn resolve(
        config: &BundleConfig,
        fiber_rank: usize,
        center_dim: usize,
        max: Option<i64>,
    ) -> Result<Domain> {
        match (config.scan, max) {
            (Some(ScanConfig::Scales([lo, hi])), max) => Ok(Domain::Scales {
                base: config.tau_matrix(fiber_rank, center_dim)?,
                lo,
                hi: max.unwrap_or(hi),
            }),
            (Some(ScanConfig::Box(bound)), max) => {
                let bound = max.unwrap_or(bound);
                if bound < 0 {
                    bail!("scan.box: bound must be nonnegative, got {bound}");
                }
                Ok(Domain::Box {
                    rows: fiber_rank,
                    cols: center_dim,
                    bound,
                })
            }
            (None, Some(bound)) if bound >= 0 => Ok(Domain::Box {
                rows: fiber_rank,
                cols: center_dim,
                bound,
            }),
            (None, Some(bound)) => bail!("--max: bound must be nonnegative, got {bound}"),
            (None, None) => bail!("scan: no scan domain; add a \"scan\" section or pass --max"),
        }
    }

    /// Number of candidates, or `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        match self {
            Domain::Scales { lo, hi, .. } => Some(if hi < lo { 0 } else { (hi - lo) as u64 + 1 }),
            Domain::Box { rows, cols, bound } => {
                let side = 2 * (*bound as u64) + 1;
                side.checked_pow(u32::try_from(rows * cols).ok()?)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Domain::Scales { lo, hi, .. } => format!("scales k in [{lo}, {hi}]"),
            Domain::Box { rows, cols, bound } => {
                format!("{rows}x{cols} integer matrices, entries in [-{bound}, {bound}]")
            }
        }
    }

    /// Candidates in lexicographic order.
    pub fn candidates(&self) -> Vec<(Option<i64>, QMatrix)> {
        match self {
            Domain::Scales { base, lo, hi } => (*lo..=*hi)
                .map(|k| (Some(k), base.scale(&int(k))))
                .collect(),
            Domain::Box { rows, cols, bound } => {
                let n = rows * cols;
                let mut out = Vec::new();
                let mut entries = vec![-*bound; n];
                loop {
                    let m = if n == 0 {
                        QMatrix::zeros(*rows, *cols)
                    } else {
                        QMatrix::from_rows(
                            *cols,
                            entries
                                .chunks(*cols)
                                .map(|r| r.iter().map(|&x| int(x)).collect())
                                .collect(),
                        )
                    };
                    out.push((None, m));
                    // Odometer with the last entry running fastest.
                    let Some(pos) = entries.iter().rposition(|&x| x < *bound) else {
                        break;
                    };
                    entries[pos] += 1;
                    for e in entries[pos + 1..].iter_mut() {
                        *e = -*bound;
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ScanRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<i64>,
    pub tau: Vec<Vec<String>>,
    pub is_fano: bool,
    pub min_margin: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ScanSummary {
    pub total: usize,
    pub fano: usize,
    pub not_fano: usize,
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub config: BundleConfig,
    pub domain: String,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
    pub warnings: Vec<String>,
}

pub struct ScanInput<'a> {
    pub flag: &'a FlagManifold,
    pub polytope: &'a Polytope,
    pub fiber_fano: bool,
    pub basis: Option<Vec<VectorH>>,
}

fn evaluate(input: &ScanInput, matrix: &QMatrix) -> Result<(bool, Option<Rational>)> {
    let tau = TauMap::new(input.flag, matrix.clone(), input.basis.clone())
        .map_err(|e| anyhow!("tau: {e}"))?;
    if input.polytope.dim() == 0 {
        return Ok((input.fiber_fano, None));
    }
    let margins =
        fano_margins(input.flag, &tau, input.polytope).map_err(|e| anyhow!("tau: {e}"))?;
    let min = margins.iter().map(|m| &m.value).min().cloned();
    let positive = margins.iter().all(|m| is_positive(&m.value));
    Ok((input.fiber_fano && positive, min))
}

pub fn run(
    config: &BundleConfig,
    domain: &Domain,
    input: &ScanInput,
    cap: u64,
) -> Result<ScanReport> {
    let size = domain.size();
    match size {
        Some(n) if n <= cap => {}
        Some(n) => bail!(
            "scan: {} has {n} candidates, above the cap of {cap} (raise it with --cap)",
            domain.describe()
        ),
        None => bail!(
            "scan: {} overflows the candidate count, above the cap of {cap}",
            domain.describe()
        ),
    }
    let candidates = domain.candidates();
    let results: Vec<(bool, Option<Rational>)> = candidates
        .par_iter()
        .map(|(_, m)| evaluate(input, m))
        .collect::<Result<_>>()?;
    let rows: Vec<ScanRow> = candidates
        .iter()
        .zip(results)
        .map(|((scale, m), (is_fano, min))| ScanRow {
            scale: *scale,
            tau: (0..m.rows())
                .map(|i| m.row(i).iter().map(q).collect())
                .collect(),
            is_fano,
            min_margin: min.as_ref().map(q),
        })
        .collect();
    let fano = rows.iter().filter(|r| r.is_fano).count();
    let mut warnings = Vec::new();
    if !input.fiber_fano {
        warnings.push("fan is not Fano; no candidate can be Fano".to_string());
    }
    Ok(ScanReport {
        config: config.clone(),
        domain: domain.describe(),
        summary: ScanSummary {
            total: rows.len(),
            fano,
            not_fano: rows.len() - fano,
        },
        rows,
        warnings,
    })
}

impl ScanReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_config(&self.config, &mut out);
        let _ = writeln!(out, "scan: {}", self.domain);
        let _ = writeln!(
            out,
            "  {:>6}  {:<28} {:<9} min margin",
            "scale", "tau", "fano"
        );
        for r in &self.rows {
            let tau: Vec<String> = r
                .tau
                .iter()
                .map(|row| format!("[{}]", row.join(",")))
                .collect();
            let scale = r.scale.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "  {:>6}  {:<28} {:<9} {}",
                scale,
                tau.join(""),
                if r.is_fano { "yes" } else { "no" },
                r.min_margin.as_deref().unwrap_or("-")
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} candidates, {} Fano, {} not Fano",
            s.total, s.fano, s.not_fano
        );
        render_warnings(&self.warnings, &mut out);
        out
    }
}
