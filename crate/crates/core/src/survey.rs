//! Threshold tables, exception-pair enumeration, and bulk verification.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{eq72_check, is_completely_basic, largest_failing_n2, CheckEnv, ConditionReport, ThresholdReport};
use crate::error::{Error, Result};
use crate::integer::modular::prime_power;

/// Prime powers in `lo..=hi`, increasing.
pub fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&q| prime_power(q).is_some()).collect()
}

/// The inequality behind a table entry: the plain constant once
/// `log q / 4 > log 2` for `n1 = 3`, otherwise the small-`q` form.
pub fn table_variant(q: u64, n1: u64) -> &'static str {
    if n1 == 3 && q >= 17 {
        "eq-7.1"
    } else {
        "eq-7.3"
    }
}

pub fn table(n1: u64, q_min: u64, q_max: u64) -> Result<Vec<ThresholdReport>> {
    if q_min > q_max {
        return Err(Error::InvalidParameter(format!("empty range {q_min}..={q_max}")));
    }
    prime_powers(q_min, q_max)
        .into_par_iter()
        .map(|q| largest_failing_n2(q, n1, table_variant(q, n1)))
        .collect()
}

/// Which exclusions are applied when listing possible exceptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterVariant {
    /// `q^{n1 n2} > 10^80` and `F_{q^{n2}}/F_q` completely basic.
    Plain,
    /// Also `gcd(n1, n2) = 1`.
    Coprime,
    /// Also `n1·n2 > 202`.
    Hh202,
    CoprimeHh202,
}

impl FilterVariant {
    pub const ALL: [FilterVariant; 4] =
        [FilterVariant::Plain, FilterVariant::Coprime, FilterVariant::Hh202, FilterVariant::CoprimeHh202];

    pub fn name(self) -> &'static str {
        match self {
            FilterVariant::Plain => "plain",
            FilterVariant::Coprime => "coprime",
            FilterVariant::Hh202 => "hh202",
            FilterVariant::CoprimeHh202 => "coprime+hh202",
        }
    }

    fn coprime(self) -> bool {
        matches!(self, FilterVariant::Coprime | FilterVariant::CoprimeHh202)
    }

    fn hh202(self) -> bool {
        matches!(self, FilterVariant::Hh202 | FilterVariant::CoprimeHh202)
    }
}

impl fmt::Display for FilterVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FilterVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Unknown { kind: "filter variant", name: s.into() })
    }
}

/// Largest degree for which the MM property is known by prior computation.
pub const SMALL_DEGREE_BOUND: u64 = 202;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub above_1e80: bool,
    pub completely_basic: bool,
    pub coprime_to_n1: bool,
    pub below_table_n: bool,
    /// `n1·n2 > 202`.
    pub beyond_small_degree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub q: u64,
    pub n1: u64,
    pub n2: u64,
    pub passed_filters: Flags,
    pub eq72_verdict: Option<bool>,
    pub provenance: Option<ConditionReport>,
}

impl SurveyRecord {
    pub fn n(&self) -> u64 {
        self.n1 * self.n2
    }
}

fn flags(q: u64, n1: u64, n2: u64, bound: u64, ten80: &BigUint) -> Result<Flags> {
    let n = u32::try_from(n1 * n2).map_err(|_| Error::InvalidParameter("degree too large".into()))?;
    Ok(Flags {
        above_1e80: &BigUint::from(q).pow(n) > ten80,
        completely_basic: is_completely_basic(q, n2)?,
        coprime_to_n1: num_integer::gcd(n1, n2) == 1,
        below_table_n: n2 <= bound,
        beyond_small_degree: n1 * n2 > SMALL_DEGREE_BOUND,
    })
}

fn keep(f: &Flags, variant: FilterVariant) -> bool {
    f.above_1e80
        && f.completely_basic
        && f.below_table_n
        && (!variant.coprime() || f.coprime_to_n1)
        && (!variant.hh202() || f.beyond_small_degree)
}

/// Pairs `(q, n2)`, `2 ≤ n2 ≤ N(q)`, that the table thresholds leave open.
pub fn exceptions(rows: &[ThresholdReport], variant: FilterVariant) -> Result<Vec<SurveyRecord>> {
    let ten80 = BigUint::from(10u32).pow(80);
    let per_q: Vec<Vec<SurveyRecord>> = rows
        .par_iter()
        .map(|row| {
            let mut out = Vec::new();
            for n2 in 2..=row.n2 {
                let f = flags(row.q, row.n1, n2, row.n2, &ten80)?;
                if keep(&f, variant) {
                    out.push(SurveyRecord {
                        q: row.q,
                        n1: row.n1,
                        n2,
                        passed_filters: f,
                        eq72_verdict: None,
                        provenance: None,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_q.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// `(q, n2)` of every failing record.
    pub failures: Vec<(u64, u64)>,
    /// Every failure has `n1·n2 ≤ 202`.
    pub failures_within_small_degree: bool,
}

impl VerifySummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Decides the bound-mode inequality for every record, in place.
pub fn verify(records: &mut [SurveyRecord], env: &CheckEnv) -> Result<VerifySummary> {
    records.par_iter_mut().try_for_each(|r| -> Result<()> {
        let report = eq72_check(env, r.q, r.n1, r.n2)?;
        r.eq72_verdict = Some(report.holds);
        r.provenance = Some(report);
        Ok(())
    })?;
    let failures: Vec<(u64, u64)> = records
        .iter()
        .filter(|r| r.eq72_verdict == Some(false))
        .map(|r| (r.q, r.n2))
        .collect();
    let within = records
        .iter()
        .filter(|r| r.eq72_verdict == Some(false))
        .all(|r| r.n() <= SMALL_DEGREE_BOUND);
    Ok(VerifySummary {
        total: records.len(),
        passed: records.len() - failures.len(),
        failed: failures.len(),
        failures,
        failures_within_small_degree: within,
    })
}

/// The three survey campaigns: `(name, n1, q_min, q_max)`.
pub const CAMPAIGNS: [(&str, u64, u64, u64); 3] = [("large-q", 3, 17, 463), ("small-q", 3, 2, 16), ("n1-two", 2, 2, 19)];

/// CSV for a table: `q,n2,constant`, the constant empty where the plain
/// `𝒞_ν` was used.
pub fn table_csv(rows: &[ThresholdReport]) -> String {
    let mut out = String::from("q,n2,constant\n");
    for r in rows {
        let c = if r.constant_excludes.is_some() { r.constant.as_str() } else { "" };
        out.push_str(&format!("{},{},{}\n", r.q, r.n2, c));
    }
    out
}

pub fn records_csv(records: &[SurveyRecord]) -> String {
    let mut out = String::from("q,n1,n2,above_1e80,completely_basic,coprime_to_n1,beyond_202,eq72\n");
    for r in records {
        let f = &r.passed_filters;
        let verdict = r.eq72_verdict.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.q, r.n1, r.n2, f.above_1e80, f.completely_basic, f.coprime_to_n1, f.beyond_small_degree, verdict
        ));
    }
    out
}
