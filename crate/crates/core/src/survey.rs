//! Batch certification over the grid `3 <= n <= N`, `1 <= k <= n-2`, and the
//! window-counting statistics that go with it.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::{CertificateKind, Scope};
use crate::certify::{Certifier, CertifyOptions};
use crate::error::{Error, Result};
use crate::poly::Multipliers;
use crate::primes::{gap_stats, GapStats, PrimeTable};

pub const CSV_HEADER: &str = "n,k,kind,scope,witnesses,micros";

#[derive(Debug, Clone)]
pub struct SurveyOptions {
    pub multipliers: Multipliers,
    /// Worker threads; `0` uses the global rayon pool.
    pub jobs: usize,
    /// Record wall-clock time per pair. Off by default so that output is
    /// byte-identical between runs.
    pub timing: bool,
    pub certify: CertifyOptions,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        Self {
            multipliers: Multipliers::Ones,
            jobs: 0,
            timing: false,
            certify: CertifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRecord {
    pub n: u64,
    pub k: u64,
    pub kind: CertificateKind,
    pub scope: Scope,
    pub witnesses: String,
    pub micros: u64,
}

impl SurveyRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.k, self.kind, self.scope, self.witnesses, self.micros
        )
    }
}

/// Window bookkeeping summed over `4 <= n <= N`; `delta(n)` needs two
/// primes below `n`, and `n = 3` is certified directly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingChain {
    #[serde(rename = "N")]
    pub n: u64,
    /// Pairs `(n, k)`, `1 <= k <= n-2`, outside `2 delta(n) < k < n - delta(n)`.
    pub window_failures: u64,
    pub sum_3delta: u64,
    pub sum_min_3delta: u64,
    pub sum_d2: u128,
    /// `N^(23/18)`, reported next to `sum_d2` for comparison only.
    pub n_pow_23_18: f64,
    pub holds: bool,
}

/// Number of `k` in `1..=n-2` outside the open window `(2 delta, n - delta)`.
pub fn window_failures_at(n: u64, delta: u64) -> u64 {
    let total = n.saturating_sub(2);
    let lo = 2 * delta + 1;
    let hi = (n - delta).saturating_sub(1).min(n - 2);
    let inside = if hi >= lo { hi - lo + 1 } else { 0 };
    total - inside
}

pub fn counting_chain(max_n: u64) -> Result<CountingChain> {
    if max_n < 3 {
        return Err(Error::Precondition(format!(
            "counting chain needs N >= 3, got {max_n}"
        )));
    }
    let table = PrimeTable::sieve(max_n);
    let (mut w, mut s3, mut smin) = (0u64, 0u64, 0u64);
    for n in 4..=max_n {
        let delta = table.delta(n)?;
        w += window_failures_at(n, delta);
        s3 += 3 * delta;
        smin += (n - 2).min(3 * delta);
    }
    let gaps = gap_stats(max_n)?;
    Ok(CountingChain {
        n: max_n,
        window_failures: w,
        sum_3delta: s3,
        sum_min_3delta: smin,
        sum_d2: gaps.sum_d2,
        n_pow_23_18: (max_n as f64).powf(23.0 / 18.0),
        holds: w <= smin && smin <= s3,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveySummary {
    pub max_n: u64,
    pub pairs: u64,
    pub by_kind: BTreeMap<String, u64>,
    pub unresolved: Vec<(u64, u64)>,
    pub chain: CountingChain,
    pub gaps: GapStats,
}

#[derive(Debug, Clone)]
pub struct Survey {
    pub records: Vec<SurveyRecord>,
    pub summary: SurveySummary,
}

pub fn run_survey(max_n: u64, options: &SurveyOptions) -> Result<Survey> {
    if max_n < 3 {
        return Err(Error::Precondition(format!(
            "survey needs N >= 3, got {max_n}"
        )));
    }
    if let Multipliers::Explicit(_) = options.multipliers {
        return Err(Error::Precondition(
            "a survey needs a multiplier preset; an explicit list fits only one k".into(),
        ));
    }
    let certifier = Certifier::new(max_n, options.certify);
    let row = |n: u64| -> Result<Vec<SurveyRecord>> {
        (1..=n - 2)
            .map(|k| {
                let start = Instant::now();
                let cert = certifier.certify(n, k, &options.multipliers)?;
                let micros = if options.timing {
                    start.elapsed().as_micros() as u64
                } else {
                    0
                };
                Ok(SurveyRecord {
                    n,
                    k,
                    kind: cert.kind,
                    scope: cert.scope,
                    witnesses: cert.witness_tokens(),
                    micros,
                })
            })
            .collect()
    };
    let collect =
        || -> Result<Vec<Vec<SurveyRecord>>> { (3..=max_n).into_par_iter().map(row).collect() };
    let rows = if options.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?
            .install(collect)?
    } else {
        collect()?
    };
    let records: Vec<SurveyRecord> = rows.into_iter().flatten().collect();

    let mut by_kind: BTreeMap<String, u64> = CertificateKind::ALL
        .iter()
        .map(|k| (k.name().to_string(), 0))
        .collect();
    for r in &records {
        *by_kind.entry(r.kind.name().to_string()).or_default() += 1;
    }
    let unresolved = records
        .iter()
        .filter(|r| r.kind == CertificateKind::Unresolved)
        .map(|r| (r.n, r.k))
        .collect();
    let chain = counting_chain(max_n)?;
    let summary = SurveySummary {
        max_n,
        pairs: records.len() as u64,
        by_kind,
        unresolved,
        gaps: gap_stats(max_n)?,
        chain,
    };
    Ok(Survey { records, summary })
}

pub fn write_csv<W: Write + ?Sized>(out: &mut W, records: &[SurveyRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write + ?Sized>(out: &mut W, records: &[SurveyRecord]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        writeln!(out)?;
    }
    Ok(())
}
