//! Truncated-sum verification records and their frozen JSON layout.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Smoke,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Smoke => "smoke",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grouping {
    /// Stop after exactly `N` terms.
    #[default]
    Natural,
    /// Stop at the largest multiple of the modulus not exceeding `N`.
    PeriodGrouped,
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grouping::Natural => "natural",
            Grouping::PeriodGrouped => "period-grouped",
        })
    }
}

impl std::str::FromStr for Grouping {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "natural" => Ok(Grouping::Natural),
            "period-grouped" | "period" | "grouped" => Ok(Grouping::PeriodGrouped),
            other => Err(format!("unknown grouping `{other}` (expected natural or period-grouped)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceClass {
    Absolute,
    Conditional,
}

impl fmt::Display for ConvergenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvergenceClass::Absolute => "absolute",
            ConvergenceClass::Conditional => "conditional",
        })
    }
}

/// Parameters of a run. `q` is the evaluation point: the modulus for dual
/// series, the argument `n` for classical expansions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<f64>,
    #[serde(rename = "N")]
    pub n_terms: u64,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none", default)]
    pub m_terms: Option<u64>,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none", default)]
    pub prime_bound: Option<u64>,
    pub grouping: Grouping,
}

impl ReportParams {
    pub fn new(q: u64, n_terms: u64) -> ReportParams {
        ReportParams { q, q2: None, s: None, n_terms, m_terms: None, prime_bound: None, grouping: Grouping::Natural }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSumReport {
    pub case: String,
    pub params: ReportParams,
    pub partial_sum: f64,
    pub target: f64,
    pub abs_error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail_bound: Option<f64>,
    pub convergence_class: ConvergenceClass,
    pub verdict: Verdict,
    /// Wall time; left `None` unless timing was requested so that reports
    /// stay byte-identical across runs.
    pub runtime_ms: Option<f64>,
}

impl TruncatedSumReport {
    /// Build a report. Absolute cases pass when `abs_error <= tol`;
    /// conditional cases are always smoke.
    pub fn judge(
        case: impl Into<String>,
        params: ReportParams,
        partial_sum: f64,
        target: f64,
        tail_bound: Option<f64>,
        class: ConvergenceClass,
        tol: f64,
    ) -> TruncatedSumReport {
        let abs_error = (partial_sum - target).abs();
        let verdict = match class {
            ConvergenceClass::Conditional => Verdict::Smoke,
            ConvergenceClass::Absolute if abs_error <= tol => Verdict::Pass,
            ConvergenceClass::Absolute => Verdict::Fail,
        };
        TruncatedSumReport {
            case: case.into(),
            params,
            partial_sum,
            target,
            abs_error,
            tail_bound: match class {
                ConvergenceClass::Absolute => tail_bound,
                ConvergenceClass::Conditional => None,
            },
            convergence_class: class,
            verdict,
            runtime_ms: None,
        }
    }

    pub fn with_runtime(mut self, ms: f64) -> TruncatedSumReport {
        self.runtime_ms = Some(ms);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

impl fmt::Display for TruncatedSumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        write!(f, "{} q={}", self.case, p.q)?;
        if let Some(q2) = p.q2 {
            write!(f, " q2={q2}")?;
        }
        if let Some(s) = p.s {
            write!(f, " s={s}")?;
        }
        write!(
            f,
            " N={} [{}] partial={:.12} target={:.12} err={:.3e}",
            p.n_terms, p.grouping, self.partial_sum, self.target, self.abs_error
        )?;
        if let Some(t) = self.tail_bound {
            write!(f, " tail<={t:.3e}")?;
        }
        write!(f, " {} {}", self.convergence_class, self.verdict)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        let p = ReportParams::new(2, 10);
        let r = TruncatedSumReport::judge("x", p.clone(), 1.0, 1.0005, Some(1e-3), ConvergenceClass::Absolute, 1e-3);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = TruncatedSumReport::judge("x", p.clone(), 1.0, 1.1, None, ConvergenceClass::Absolute, 1e-3);
        assert_eq!(r.verdict, Verdict::Fail);
        let r = TruncatedSumReport::judge("x", p, 1.0, 9.0, Some(1.0), ConvergenceClass::Conditional, 1e-3);
        assert_eq!(r.verdict, Verdict::Smoke);
        assert!(r.tail_bound.is_none());
        assert!(r.passed());
    }

    #[test]
    fn json_field_names() {
        let mut p = ReportParams::new(3, 100);
        p.s = Some(2.0);
        p.grouping = Grouping::PeriodGrouped;
        let r = TruncatedSumReport::judge("ra1", p, 0.5, 0.5, Some(0.01), ConvergenceClass::Absolute, 1e-3);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["params"]["N"], 100);
        assert_eq!(v["params"]["grouping"], "period-grouped");
        assert!(v["params"].get("q2").is_none());
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["convergence_class"], "absolute");
        assert!(v["runtime_ms"].is_null());
    }
}
